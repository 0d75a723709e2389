//! Command-line front end: validate, inspect, compare, route and export
//! BSSD maps.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use log::{debug, info, LevelFilter};

use bssd::fingerprint::attribute_summary;
use bssd::graph::{build_graph, VertexId};
use bssd::router::{plan_route, CapabilityProfile, RouteOutcome};
use bssd::validator::{error_count, findings_to_json, validate};
use bssd::{
    compare_demands, export, load_map_file, SceneryMap, Severity, SpaceId, TravelDirection,
};

#[derive(Parser)]
#[command(
    name = "bssd",
    about = "Work with behavior-semantic scenery descriptions of road networks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a map, build its behavior graph and run all validation rules.
    /// Exits 0 only when no error-severity findings exist.
    Validate {
        map: PathBuf,
        /// Emit findings as a JSON array instead of text lines.
        #[arg(long)]
        json: bool,
    },
    /// Print the demand table of one behavior space.
    Inspect {
        map: PathBuf,
        /// Behavior space id.
        #[arg(long)]
        space: Option<i64>,
        #[arg(long, default_value = "along")]
        direction: String,
        /// Dump the behavior graph edge list instead.
        #[arg(long)]
        graph: bool,
    },
    /// Compare the demand content of two behavior spaces attribute by
    /// attribute.
    Compare {
        map: PathBuf,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long, default_value = "along")]
        direction: String,
    },
    /// Plan a capability-aware route between two behavior spaces.
    Route {
        map: PathBuf,
        /// Start vertex: a space id, optionally with /along or /against.
        #[arg(long)]
        from: String,
        /// Target vertex, same syntax as --from.
        #[arg(long)]
        to: String,
        /// Capability profile file (key: value lines).
        #[arg(long)]
        profile: PathBuf,
        /// Also write the route as a GeoJSON LineString overlay.
        #[arg(long)]
        geojson: Option<PathBuf>,
    },
    /// Export the map as a GeoJSON FeatureCollection, one feature per
    /// lanelet with flattened demand properties.
    Export {
        map: PathBuf,
        #[arg(long)]
        geojson: PathBuf,
    },
    /// Attach a behavior space to uncovered lanelets and write the result.
    Annotate {
        map: PathBuf,
        /// Lanelet relation ids forming the space's chain, head first.
        #[arg(long, value_delimiter = ',', required = true)]
        lanelet: Vec<i64>,
        /// Behavior spec file for the along direction (key: value lines).
        #[arg(long)]
        along: PathBuf,
        /// Behavior spec file for the against direction.
        #[arg(long)]
        against: Option<PathBuf>,
        /// Output map path.
        #[arg(long)]
        out: PathBuf,
    },
}

fn init_logging() {
    let level = match std::env::var("BSSD_LOG").as_deref() {
        Ok("quiet") => LevelFilter::Off,
        Ok("debug") => LevelFilter::Debug,
        _ => LevelFilter::Info,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .format_target(false)
        .init();
}

fn main() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(2)
        }
    }
}

fn load(map: &PathBuf) -> Result<SceneryMap> {
    let (map, diagnostics) =
        load_map_file(map).with_context(|| format!("loading {}", map.display()))?;
    for diagnostic in &diagnostics {
        debug!("{diagnostic}");
    }
    if !diagnostics.is_empty() {
        info!("loaded with {} diagnostics", diagnostics.len());
    }
    Ok(map)
}

fn parse_direction(text: &str) -> Result<TravelDirection> {
    TravelDirection::parse_token(text)
        .ok_or_else(|| anyhow!("unknown direction `{text}`, expected along or against"))
}

fn parse_vertex(text: &str) -> Result<VertexId> {
    let (space, direction) = match text.split_once('/') {
        Some((space, direction)) => (space, parse_direction(direction)?),
        None => (text, TravelDirection::Along),
    };
    let space: i64 = space
        .parse()
        .map_err(|_| anyhow!("`{space}` is not a behavior space id"))?;
    Ok(VertexId {
        space: SpaceId(space),
        direction,
    })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate { map, json } => {
            let map = load(&map)?;
            let graph = build_graph(&map);
            let findings = validate(&map, &graph);
            if json {
                println!("{}", findings_to_json(&findings));
            } else if findings.is_empty() {
                println!("no findings");
            } else {
                for finding in &findings {
                    println!("{}", finding.render_line());
                }
                let errors = error_count(&findings);
                let warnings = findings
                    .iter()
                    .filter(|f| f.severity == Severity::Warning)
                    .count();
                println!("{errors} errors, {warnings} warnings");
            }
            Ok(if error_count(&findings) == 0 { 0 } else { 1 })
        }
        Command::Inspect {
            map,
            space,
            direction,
            graph,
        } => {
            let map = load(&map)?;
            if graph {
                print!("{}", build_graph(&map).dump_edges());
                return Ok(0);
            }
            let Some(space_id) = space else {
                bail!("--space <id> is required unless --graph is given");
            };
            let direction = parse_direction(&direction)?;
            let space = map
                .space(SpaceId(space_id))
                .ok_or_else(|| anyhow!("unknown_space: no behavior space {space_id}"))?;
            let behavior = space.behavior(direction).ok_or_else(|| {
                anyhow!("unknown_direction: space {space_id} has no `{direction}` behavior")
            })?;
            println!(
                "behavior space {} (lanelet {}, direction {})",
                space.id,
                space.lane(),
                direction
            );
            for attribute in bssd::AttributeName::ALL {
                println!("{attribute}: {}", attribute_summary(behavior, attribute));
            }
            Ok(0)
        }
        Command::Compare {
            map,
            a,
            b,
            direction,
        } => {
            let map = load(&map)?;
            let direction = parse_direction(&direction)?;
            let space = |id: i64| {
                map.space(SpaceId(id))
                    .ok_or_else(|| anyhow!("unknown_space: no behavior space {id}"))
            };
            let diff = compare_demands(space(a)?, space(b)?, direction)?;
            println!("comparing space {a} with space {b} (direction {direction})");
            for comparison in &diff.comparisons {
                if comparison.equal {
                    println!("{}: equal ({})", comparison.attribute, comparison.a);
                } else {
                    println!(
                        "{}: different ({} | {})",
                        comparison.attribute, comparison.a, comparison.b
                    );
                }
            }
            let names = |attributes: Vec<bssd::AttributeName>| {
                attributes
                    .iter()
                    .map(|a| a.token())
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            println!("equal: {}", names(diff.equal_attributes()));
            println!("different: {}", names(diff.different_attributes()));
            Ok(0)
        }
        Command::Route {
            map,
            from,
            to,
            profile,
            geojson,
        } => {
            let map = load(&map)?;
            let graph = build_graph(&map);
            let from = parse_vertex(&from)?;
            let to = parse_vertex(&to)?;
            let profile_text = std::fs::read_to_string(&profile)
                .with_context(|| format!("reading {}", profile.display()))?;
            let profile = CapabilityProfile::parse(&profile_text)?;
            let outcome = plan_route(&graph, from, to, &profile)?;
            println!("{}", serde_json::to_string_pretty(&outcome.to_json())?);
            if let Some(path) = geojson {
                if let RouteOutcome::Route(route) = &outcome {
                    if let Some(overlay) = export::route_to_geojson(&map, &route.path) {
                        std::fs::write(&path, serde_json::to_string_pretty(&overlay)?)?;
                        info!("wrote route overlay to {}", path.display());
                    } else {
                        info!("map has no usable geometry for an overlay");
                    }
                } else {
                    info!("no route, skipping overlay");
                }
            }
            Ok(0)
        }
        Command::Export { map, geojson } => {
            let map = load(&map)?;
            let collection = export::map_to_geojson(&map);
            std::fs::write(&geojson, serde_json::to_string_pretty(&collection)?)?;
            info!("wrote {}", geojson.display());
            Ok(0)
        }
        Command::Annotate {
            map,
            lanelet,
            along,
            against,
            out,
        } => {
            let map = load(&map)?;
            let read_spec = |path: &PathBuf| -> Result<bssd::builder::BehaviorSpec> {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                Ok(bssd::builder::BehaviorSpec::parse(&text)?)
            };
            let along = read_spec(&along)?;
            let against = against.as_ref().map(read_spec).transpose()?;
            let lanelets: Vec<bssd::LaneId> = lanelet.into_iter().map(bssd::LaneId).collect();
            let (map, space) = bssd::builder::annotate(&map, &lanelets, &along, against.as_ref())?;
            std::fs::write(&out, bssd::save_map(&map))?;
            println!("created behavior space {space}");
            info!("wrote {}", out.display());
            Ok(0)
        }
    }
}
