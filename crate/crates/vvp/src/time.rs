//! RFC 3339 rendering of millisecond timestamps.

use chrono::{DateTime, SecondsFormat, Utc};
use vvp_core::Timestamp;

/// `2024-05-01T12:00:00.000Z`
pub fn format_timestamp(t: Timestamp) -> String {
    match DateTime::<Utc>::from_timestamp_millis(t.as_millis()) {
        Some(dt) => dt.to_rfc3339_opts(SecondsFormat::Millis, true),
        None => t.as_millis().to_string(),
    }
}

pub fn parse_timestamp(s: &str) -> Result<Timestamp, chrono::ParseError> {
    let dt = DateTime::parse_from_rfc3339(s)?;
    Ok(Timestamp::from_millis(dt.timestamp_millis()))
}

pub fn now() -> Timestamp {
    Timestamp::from_millis(Utc::now().timestamp_millis())
}

/// serde adapter for `Timestamp` fields.
pub(crate) mod rfc3339 {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use vvp_core::Timestamp;

    pub fn serialize<S: Serializer>(t: &Timestamp, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_timestamp(*t))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Timestamp, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_timestamp(&s).map_err(D::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(t: &Option<Timestamp>, s: S) -> Result<S::Ok, S::Error> {
            match t {
                Some(t) => super::serialize(t, s),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Timestamp>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| super::super::parse_timestamp(&s).map_err(D::Error::custom))
                .transpose()
        }
    }
}
