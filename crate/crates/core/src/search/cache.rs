//! Persistent cache of completed searches, keyed by canonical group string.
//!
//! The document is pretty-printed JSON:
//!
//! ```json
//! {
//!   "Z3^2": {
//!     "s": { "status": "Exact", "value": 9, "extremal": [["0,0", "0,0", ...]], ... },
//!     "eta": { ... }
//!   }
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::search::{Quantity, SearchOutcome, SearchStatus};
use crate::sequence::Sequence;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CachedSearch {
    pub status: SearchStatus,
    pub value: u64,
    /// Extremal sequences, each as element strings in the sequence file format.
    pub extremal: Vec<Vec<String>>,
    pub symmetry: String,
    pub nodes_explored: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<CachedSearch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<CachedSearch>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cache {
    pub entries: BTreeMap<String, CacheEntry>,
}

impl Cache {
    pub fn load(path: &Path) -> Result<Cache> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn load_or_default(path: &Path) -> Result<Cache> {
        if path.exists() {
            Self::load(path)
        } else {
            Ok(Cache::default())
        }
    }

    pub fn from_json(text: &str) -> Result<Cache> {
        if text.trim().is_empty() {
            return Ok(Cache::default());
        }
        serde_json::from_str(text).map_err(|e| Error::Cache(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cache serializes")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, group: &FiniteAbelianGroup, quantity: Quantity) -> Result<Option<SearchOutcome>> {
        let Some(entry) = self.entries.get(&group.to_string()) else {
            return Ok(None);
        };
        let cached = match quantity {
            Quantity::S => &entry.s,
            Quantity::Eta => &entry.eta,
        };
        cached
            .as_ref()
            .map(|c| c.to_outcome(group, quantity))
            .transpose()
    }

    /// Only exact results are worth reusing.
    pub fn get_exact(&self, group: &FiniteAbelianGroup, quantity: Quantity) -> Result<Option<SearchOutcome>> {
        Ok(self
            .get(group, quantity)?
            .filter(|o| o.status == SearchStatus::Exact))
    }

    pub fn insert(&mut self, outcome: &SearchOutcome) {
        let entry = self.entries.entry(outcome.group.to_string()).or_default();
        let slot = match outcome.quantity {
            Quantity::S => &mut entry.s,
            Quantity::Eta => &mut entry.eta,
        };
        // never replace an exact value with a partial one
        if matches!(slot, Some(c) if c.status == SearchStatus::Exact) && outcome.status != SearchStatus::Exact {
            return;
        }
        *slot = Some(CachedSearch::from_outcome(outcome));
    }

    /// Every cached exact value as `(group, quantity, value)`.
    pub fn exact_values(&self) -> Result<Vec<(FiniteAbelianGroup, Quantity, u64)>> {
        let mut out = Vec::new();
        for (key, entry) in &self.entries {
            let group: FiniteAbelianGroup = key.parse()?;
            for (q, c) in [(Quantity::S, &entry.s), (Quantity::Eta, &entry.eta)] {
                if let Some(c) = c {
                    if c.status == SearchStatus::Exact {
                        out.push((group.clone(), q, c.value));
                    }
                }
            }
        }
        Ok(out)
    }
}

impl CachedSearch {
    pub fn from_outcome(o: &SearchOutcome) -> Self {
        CachedSearch {
            status: o.status,
            value: o.value,
            extremal: o
                .extremal_sequences
                .iter()
                .map(|s| s.elements().map(|e| e.to_string()).collect())
                .collect(),
            symmetry: o.symmetry.clone(),
            nodes_explored: o.nodes_explored,
            elapsed_ms: o.elapsed.as_millis() as u64,
        }
    }

    pub fn to_outcome(&self, group: &FiniteAbelianGroup, quantity: Quantity) -> Result<SearchOutcome> {
        let extremal_sequences = self
            .extremal
            .iter()
            .map(|lines| Sequence::parse_file(group, &lines.join("\n")))
            .collect::<Result<Vec<_>>>()?;
        Ok(SearchOutcome {
            group: group.clone(),
            quantity,
            status: self.status,
            value: self.value,
            extremal_example: extremal_sequences.first().cloned(),
            extremal_sequences,
            symmetry: self.symmetry.clone(),
            nodes_explored: self.nodes_explored,
            elapsed: Duration::from_millis(self.elapsed_ms),
        })
    }
}
