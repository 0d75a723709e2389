//! Fingerprint soundness against an independent structural oracle.

use std::collections::BTreeMap;

use bssd::attributes::{BoundaryAttribute, ReservationDemand};
use bssd::behavior::{AtomicBehaviorSpace, Behavior, TravelDirection};
use bssd::fingerprint::demands_equal;
use bssd::sample::sample_space;
use bssd::{behavior_space_fingerprint, compare_demands};

/// Field-by-field structural comparison of demand content, written without
/// any of the fingerprint machinery. Masks exactly what the digest excludes:
/// identifiers, geometry references and reservation link targets.
fn oracle_equal(a: &AtomicBehaviorSpace, b: &AtomicBehaviorSpace) -> bool {
    fn boundary_eq(a: &BoundaryAttribute, b: &BoundaryAttribute) -> bool {
        a.demands == b.demands
    }
    fn reservation_eq(a: &[ReservationDemand], b: &[ReservationDemand]) -> bool {
        a.len() == b.len()
            && a.iter().zip(b).all(|(x, y)| {
                x.kind == y.kind && x.entitled == y.entitled && x.condition == y.condition
            })
    }
    fn behavior_eq(a: &Behavior, b: &Behavior) -> bool {
        a.speed.demands == b.speed.demands
            && boundary_eq(&a.boundary_long, &b.boundary_long)
            && boundary_eq(&a.boundary_left, &b.boundary_left)
            && boundary_eq(&a.boundary_right, &b.boundary_right)
            && reservation_eq(&a.reservation.demands, &b.reservation.demands)
            && a.overtake.demands == b.overtake.demands
    }
    behavior_eq(&a.along, &b.along)
        && match (&a.against, &b.against) {
            (None, None) => true,
            (Some(x), Some(y)) => behavior_eq(x, y),
            _ => false,
        }
}

#[test]
fn fingerprint_partition_matches_the_structural_oracle() {
    // Sample from a reduced seed pool so structurally equal spaces occur,
    // then give every space fresh identifiers and link targets; those must
    // not influence the partition.
    let spaces: Vec<AtomicBehaviorSpace> = (0..100u64)
        .map(|index| {
            let mut space = sample_space(index % 30);
            space.id = bssd::SpaceId(10_000 + index as i64);
            space.lanes = vec![bssd::LaneId(20_000 + index as i64)];
            for behavior in [Some(&mut space.along), space.against.as_mut()]
                .into_iter()
                .flatten()
            {
                for demand in &mut behavior.reservation.demands {
                    for (offset, link) in demand.links.iter_mut().enumerate() {
                        link.target = bssd::LinkTarget::Lane(bssd::LaneId(
                            30_000 + index as i64 * 10 + offset as i64,
                        ));
                    }
                }
            }
            space
        })
        .collect();

    // Partition by fingerprint.
    let mut by_digest: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (index, space) in spaces.iter().enumerate() {
        by_digest
            .entry(behavior_space_fingerprint(space).to_string())
            .or_default()
            .push(index);
    }

    // The partition must agree with the oracle pairwise.
    let mut collisions = 0;
    for i in 0..spaces.len() {
        for j in i + 1..spaces.len() {
            let same_digest =
                behavior_space_fingerprint(&spaces[i]) == behavior_space_fingerprint(&spaces[j]);
            let oracle = oracle_equal(&spaces[i], &spaces[j]);
            assert_eq!(same_digest, oracle, "spaces {i} and {j} disagree");
            if same_digest {
                collisions += 1;
            }
        }
    }
    // The sampling pool is small enough that duplicates must occur, otherwise
    // the test shows nothing.
    assert!(collisions > 0, "no identical pairs sampled");
    assert!(by_digest.len() < spaces.len());
}

#[test]
fn fingerprint_equality_iff_all_attributes_compare_equal() {
    for seed in 0..500u64 {
        let a = sample_space(seed);
        let b = sample_space(seed.wrapping_mul(7919) % 40);
        let digest_equal = behavior_space_fingerprint(&a) == behavior_space_fingerprint(&b);

        let mut all_equal = true;
        for direction in [TravelDirection::Along, TravelDirection::Against] {
            match (a.behavior(direction), b.behavior(direction)) {
                (None, None) => {}
                (Some(_), Some(_)) => {
                    if !compare_demands(&a, &b, direction).unwrap().all_equal() {
                        all_equal = false;
                    }
                }
                _ => all_equal = false,
            }
        }
        assert_eq!(digest_equal, all_equal, "seed {seed}");
        assert_eq!(digest_equal, demands_equal(&a, &b), "seed {seed}");
        assert_eq!(all_equal, oracle_equal(&a, &b), "seed {seed}");
    }
}
