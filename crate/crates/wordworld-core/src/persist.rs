//! Versioned RON persistence. Every artifact written to disk is wrapped in a
//! `format_version` envelope; loading an envelope with an unsupported version
//! fails up front instead of producing a confusing parse error downstream.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Version written into every serialized artifact.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Versioned<T> {
    pub format_version: u32,
    pub payload: T,
}

/// Serialize a payload into a pretty-printed, version-wrapped RON string.
pub fn to_versioned_ron<T: Serialize>(payload: &T) -> Result<String> {
    let wrapped = Versioned {
        format_version: FORMAT_VERSION,
        payload,
    };
    let pretty = ron::ser::PrettyConfig::new()
        .depth_limit(usize::MAX)
        .indentor("  ".to_owned());
    Ok(ron::ser::to_string_pretty(&wrapped, pretty)?)
}

/// Parse a version-wrapped RON string, rejecting unknown versions.
pub fn from_versioned_ron<T: DeserializeOwned>(text: &str) -> Result<T> {
    let wrapped: Versioned<T> = ron::from_str(text)?;
    if wrapped.format_version != FORMAT_VERSION {
        return Err(Error::UnknownFormatVersion {
            found: wrapped.format_version,
            supported: FORMAT_VERSION,
        });
    }
    Ok(wrapped.payload)
}
