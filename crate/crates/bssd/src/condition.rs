//! Conditions that scope behavioral demands.
//!
//! The vocabulary is a small closed set plus a `custom` escape hatch, so that
//! validators and routers can match conditions mechanically. Every condition
//! has a canonical token form (`no_stagnant_traffic`, `traffic_light:active`,
//! `time:HHMM-HHMM`, `weather:<label>`, `custom:<label>`) used both in the map
//! encoding and in fingerprints.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MINUTES_PER_DAY: u16 = 1440;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error("unknown condition token `{0}`")]
    UnknownToken(String),
    #[error("empty label in condition token `{0}`")]
    EmptyLabel(String),
    #[error("malformed time window `{0}`, expected time:HHMM-HHMM")]
    MalformedTimeWindow(String),
    #[error("time window minutes out of range in `{0}`")]
    TimeOutOfRange(String),
    #[error("time window start equals end in `{0}`")]
    DegenerateTimeWindow(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrafficLightState {
    Active,
    Inactive,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    NoStagnantTraffic,
    TrafficLight(TrafficLightState),
    /// Minutes of day, both in `[0, 1440)`; the window may wrap past midnight.
    TimeWindow {
        start: u16,
        end: u16,
    },
    Weather(String),
    Custom(String),
}

/// Condition kinds, the granularity at which capability profiles declare
/// support. A profile that supports `weather` supports every weather label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionKind {
    NoStagnantTraffic,
    TrafficLight,
    Time,
    Weather,
    Custom,
}

impl ConditionKind {
    pub const ALL: [ConditionKind; 5] = [
        ConditionKind::NoStagnantTraffic,
        ConditionKind::TrafficLight,
        ConditionKind::Time,
        ConditionKind::Weather,
        ConditionKind::Custom,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            ConditionKind::NoStagnantTraffic => "no_stagnant_traffic",
            ConditionKind::TrafficLight => "traffic_light",
            ConditionKind::Time => "time",
            ConditionKind::Weather => "weather",
            ConditionKind::Custom => "custom",
        }
    }

    pub fn parse(token: &str) -> Option<ConditionKind> {
        ConditionKind::ALL
            .iter()
            .copied()
            .find(|k| k.token() == token)
    }
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl Condition {
    /// Builds a time-window condition, validating the `[0, 1440)` range and
    /// that the window is non-degenerate.
    pub fn time_window(start: u16, end: u16) -> Result<Condition, ConditionError> {
        let token = format!(
            "time:{:02}{:02}-{:02}{:02}",
            start / 60,
            start % 60,
            end / 60,
            end % 60
        );
        if start >= MINUTES_PER_DAY || end >= MINUTES_PER_DAY {
            return Err(ConditionError::TimeOutOfRange(token));
        }
        if start == end {
            return Err(ConditionError::DegenerateTimeWindow(token));
        }
        Ok(Condition::TimeWindow { start, end })
    }

    /// Builds a weather condition; the label is trimmed and lowercased.
    pub fn weather(label: &str) -> Result<Condition, ConditionError> {
        Ok(Condition::Weather(normalize_label(label, "weather")?))
    }

    /// Builds a custom condition; the label is trimmed and lowercased.
    pub fn custom(label: &str) -> Result<Condition, ConditionError> {
        Ok(Condition::Custom(normalize_label(label, "custom")?))
    }

    pub fn kind(&self) -> ConditionKind {
        match self {
            Condition::NoStagnantTraffic => ConditionKind::NoStagnantTraffic,
            Condition::TrafficLight(_) => ConditionKind::TrafficLight,
            Condition::TimeWindow { .. } => ConditionKind::Time,
            Condition::Weather(_) => ConditionKind::Weather,
            Condition::Custom(_) => ConditionKind::Custom,
        }
    }

    /// Canonical token form, as stored in map condition tags.
    pub fn token(&self) -> String {
        match self {
            Condition::NoStagnantTraffic => "no_stagnant_traffic".to_string(),
            Condition::TrafficLight(TrafficLightState::Active) => {
                "traffic_light:active".to_string()
            }
            Condition::TrafficLight(TrafficLightState::Inactive) => {
                "traffic_light:inactive".to_string()
            }
            Condition::TimeWindow { start, end } => format!(
                "time:{:02}{:02}-{:02}{:02}",
                start / 60,
                start % 60,
                end / 60,
                end % 60
            ),
            Condition::Weather(label) => format!("weather:{label}"),
            Condition::Custom(label) => format!("custom:{label}"),
        }
    }

    /// Parses a canonical condition token.
    pub fn parse_token(token: &str) -> Result<Condition, ConditionError> {
        if token == "no_stagnant_traffic" {
            return Ok(Condition::NoStagnantTraffic);
        }
        if token == "traffic_light:active" {
            return Ok(Condition::TrafficLight(TrafficLightState::Active));
        }
        if token == "traffic_light:inactive" {
            return Ok(Condition::TrafficLight(TrafficLightState::Inactive));
        }
        if let Some(window) = token.strip_prefix("time:") {
            return parse_time_window(token, window);
        }
        if let Some(label) = token.strip_prefix("weather:") {
            return Condition::weather(label)
                .map_err(|_| ConditionError::EmptyLabel(token.to_string()));
        }
        if let Some(label) = token.strip_prefix("custom:") {
            return Condition::custom(label)
                .map_err(|_| ConditionError::EmptyLabel(token.to_string()));
        }
        Err(ConditionError::UnknownToken(token.to_string()))
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

fn normalize_label(label: &str, what: &str) -> Result<String, ConditionError> {
    let normalized = label.trim().to_lowercase();
    if normalized.is_empty() {
        return Err(ConditionError::EmptyLabel(format!("{what}:")));
    }
    Ok(normalized)
}

fn parse_time_window(token: &str, window: &str) -> Result<Condition, ConditionError> {
    let malformed = || ConditionError::MalformedTimeWindow(token.to_string());
    let (from, to) = window.split_once('-').ok_or_else(malformed)?;
    if from.len() != 4 || to.len() != 4 {
        return Err(malformed());
    }
    let minutes = |hhmm: &str| -> Result<u16, ConditionError> {
        let hours: u16 = hhmm[..2].parse().map_err(|_| malformed())?;
        let mins: u16 = hhmm[2..].parse().map_err(|_| malformed())?;
        if hours >= 24 || mins >= 60 {
            return Err(ConditionError::TimeOutOfRange(token.to_string()));
        }
        Ok(hours * 60 + mins)
    };
    let start = minutes(from)?;
    let end = minutes(to)?;
    if start == end {
        return Err(ConditionError::DegenerateTimeWindow(token.to_string()));
    }
    Ok(Condition::TimeWindow { start, end })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_round_trip() {
        let conditions = [
            Condition::NoStagnantTraffic,
            Condition::TrafficLight(TrafficLightState::Active),
            Condition::TrafficLight(TrafficLightState::Inactive),
            Condition::time_window(22 * 60, 6 * 60).unwrap(),
            Condition::weather("Rain").unwrap(),
            Condition::custom("school_hours").unwrap(),
        ];
        for condition in conditions {
            let token = condition.token();
            assert_eq!(Condition::parse_token(&token).unwrap(), condition);
        }
    }

    #[test]
    fn time_window_formats_zero_padded() {
        let condition = Condition::time_window(7 * 60 + 5, 9 * 60).unwrap();
        assert_eq!(condition.token(), "time:0705-0900");
    }

    #[test]
    fn labels_are_normalized() {
        assert_eq!(
            Condition::weather(" Heavy Rain ").unwrap(),
            Condition::Weather("heavy rain".to_string())
        );
        assert!(Condition::custom("  ").is_err());
    }

    #[test]
    fn degenerate_and_out_of_range_windows_rejected() {
        assert!(Condition::time_window(100, 100).is_err());
        assert!(Condition::time_window(1440, 10).is_err());
        assert!(Condition::parse_token("time:2500-0600").is_err());
        assert!(Condition::parse_token("time:22000600").is_err());
    }

    #[test]
    fn unknown_tokens_rejected() {
        assert!(matches!(
            Condition::parse_token("sunny"),
            Err(ConditionError::UnknownToken(_))
        ));
        assert!(Condition::parse_token("weather:").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arbitrary_condition() -> impl Strategy<Value = Condition> {
            prop_oneof![
                Just(Condition::NoStagnantTraffic),
                Just(Condition::TrafficLight(TrafficLightState::Active)),
                Just(Condition::TrafficLight(TrafficLightState::Inactive)),
                (0u16..1440, 0u16..1440)
                    .prop_filter("window must be non-degenerate", |(s, e)| s != e)
                    .prop_map(|(s, e)| Condition::time_window(s, e).unwrap()),
                "[a-z][a-z0-9_]{0,11}".prop_map(|l| Condition::weather(&l).unwrap()),
                "[a-z][a-z0-9_]{0,11}".prop_map(|l| Condition::custom(&l).unwrap()),
            ]
        }

        proptest! {
            /// Every condition survives its canonical token form.
            #[test]
            fn token_round_trip(condition in arbitrary_condition()) {
                let token = condition.token();
                prop_assert_eq!(Condition::parse_token(&token).unwrap(), condition);
            }
        }
    }
}
