//! JSON file formats.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::Fan;

/// The on-disk fan description. Ray and cone indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
}

impl FanFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| json_error(text, &e))
    }

    pub fn to_fan(&self) -> Result<Fan> {
        Fan::from_one_based(self.dim, &self.rays, &self.max_cones)
    }

    /// The stored ordering converted to 0-based maximal-cone indices.
    pub fn order(&self) -> Result<Option<Vec<usize>>> {
        let Some(order) = &self.order else {
            return Ok(None);
        };
        order
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                c.checked_sub(1).ok_or_else(|| Error::input(format!("order[{}]", i + 1), "indices are 1-based"))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }
}

/// Converts a serde_json error into a parse error carrying a byte offset.
pub fn json_error(text: &str, e: &serde_json::Error) -> Error {
    let (line, column) = (e.line(), e.column());
    let offset = if line == 0 {
        0
    } else {
        text.split_inclusive('\n').take(line - 1).map(str::len).sum::<usize>() + column.saturating_sub(1)
    };
    Error::Parse { offset, message: e.to_string() }
}

/// Serializes with sorted keys.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable value");
    serde_json::to_string_pretty(&v).expect("json")
}
