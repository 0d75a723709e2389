//! The BSSD relation tag and role vocabulary.
//!
//! Behavior spaces extend a Lanelet2-style map through four relation types:
//!
//! * `type=behavior_space` -- members: `lanelet` (one or more lanelet
//!   relations, ordered head first), `along` and optionally `against`
//!   (behavior relations).
//! * `type=behavior` -- tags: `speed:max=<km/h>` (required), `speed:min=<km/h>`
//!   (optional) and `overtake=yes|no` (required). Members: `boundary_long`,
//!   `boundary_left`, `boundary_right` (boundary relations, exactly one each)
//!   and `reservation` (reservation relation, exactly one).
//! * `type=boundary` -- tags: `crossing=allowed|conditional|prohibited|
//!   not_possible` and `condition=<token>` when conditional. Members:
//!   `boundary` (zero or more linestrings carrying the boundary geometry).
//! * `type=reservation` -- tags: `reservation=own|externally|equally|none`,
//!   `object=<participant>[;<participant>...]` for externally/equally and
//!   `condition=<token>` optionally. Members: `link` (lanelet relations or
//!   areas the entitled road users come from); `link:dest` marks destination
//!   links.
//!
//! Demand lists longer than one are encoded with indexed keys and roles:
//! demand `i` (i >= 2) uses `speed:max:i`, `crossing:i`, `condition:i`,
//! `reservation:i`, `object:i`, roles `link:i` / `link:i:dest`, and for
//! behavior tags the condition of demand `i` of key `<key>` is
//! `condition:<key>:i` (e.g. `condition:speed:max:2`). The first demand of a
//! behavior-level key uses `condition:<key>` (e.g. `condition:overtake`).
//!
//! Condition tokens: `no_stagnant_traffic`, `traffic_light:active`,
//! `traffic_light:inactive`, `time:HHMM-HHMM`, `weather:<label>`,
//! `custom:<label>`.
//!
//! Left and right boundaries are travel-relative: the `against` behavior's
//! `boundary_left` references the lanelet's geometric right bound.

pub const TAG_TYPE: &str = "type";
pub const TAG_SUBTYPE: &str = "subtype";
pub const TAG_ONE_WAY: &str = "one_way";

pub const REL_LANELET: &str = "lanelet";
pub const REL_MULTIPOLYGON: &str = "multipolygon";
pub const REL_BEHAVIOR_SPACE: &str = "behavior_space";
pub const REL_BEHAVIOR: &str = "behavior";
pub const REL_BOUNDARY: &str = "boundary";
pub const REL_RESERVATION: &str = "reservation";

pub const ROLE_LEFT: &str = "left";
pub const ROLE_RIGHT: &str = "right";
pub const ROLE_OUTER: &str = "outer";
pub const ROLE_LANELET: &str = "lanelet";
pub const ROLE_ALONG: &str = "along";
pub const ROLE_AGAINST: &str = "against";
pub const ROLE_BOUNDARY_LONG: &str = "boundary_long";
pub const ROLE_BOUNDARY_LEFT: &str = "boundary_left";
pub const ROLE_BOUNDARY_RIGHT: &str = "boundary_right";
pub const ROLE_RESERVATION: &str = "reservation";
pub const ROLE_BOUNDARY: &str = "boundary";
pub const ROLE_LINK: &str = "link";

pub const TAG_SPEED_MAX: &str = "speed:max";
pub const TAG_SPEED_MIN: &str = "speed:min";
pub const TAG_OVERTAKE: &str = "overtake";
pub const TAG_CROSSING: &str = "crossing";
pub const TAG_CONDITION: &str = "condition";
pub const TAG_RESERVATION: &str = "reservation";
pub const TAG_OBJECT: &str = "object";

/// Linestring types the longitudinal-boundary helper recognizes or creates.
pub const LINESTRING_STOP_LINE: &str = "stop_line";
pub const LINESTRING_VIRTUAL: &str = "virtual";

/// Key for demand index `i` of a base key: the base key itself for index 1,
/// `<base>:i` above.
pub fn indexed_key(base: &str, index: usize) -> String {
    if index <= 1 {
        base.to_string()
    } else {
        format!("{base}:{index}")
    }
}

/// Condition key paired with demand index `i` of `<base>`.
pub fn condition_key(base: &str, index: usize) -> String {
    if index <= 1 {
        format!("{TAG_CONDITION}:{base}")
    } else {
        format!("{TAG_CONDITION}:{base}:{index}")
    }
}

/// Role for reservation link `i`; destination links get a `:dest` suffix.
pub fn link_role(index: usize, destination: bool) -> String {
    let mut role = indexed_key(ROLE_LINK, index);
    if destination {
        role.push_str(":dest");
    }
    role
}

/// Parses a link role into (demand index, destination flag).
pub fn parse_link_role(role: &str) -> Option<(usize, bool)> {
    let core = role.strip_prefix(ROLE_LINK)?;
    let (core, destination) = match core.strip_suffix(":dest") {
        Some(rest) => (rest, true),
        None => (core, false),
    };
    if core.is_empty() {
        return Some((1, destination));
    }
    let index: usize = core.strip_prefix(':')?.parse().ok()?;
    if index >= 2 {
        Some((index, destination))
    } else {
        None
    }
}
