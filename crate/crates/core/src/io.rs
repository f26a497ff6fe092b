//! JSON files for behaviors and states.
//!
//! A behavior file looks like
//!
//! ```json
//! { "parties": 2, "settings": [2, 2], "outcomes": [2, 2],
//!   "table": { "0,0": [0.5, 0.0, 0.0, 0.5], "0,1": [...], ... } }
//! ```
//!
//! with one key per setting vector and its outcome distribution in table
//! order. Keys may be wrapped in angle brackets and may contain spaces.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{Behavior, Scenario, DEFAULT_TOL};
use crate::quantum::DensityMatrix;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BehaviorFile {
    parties: usize,
    settings: Vec<usize>,
    outcomes: Vec<usize>,
    table: serde_json::Map<String, serde_json::Value>,
}

fn context_key(ctx: &[usize]) -> String {
    ctx.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_key(key: &str) -> Option<Vec<usize>> {
    let k = key.trim();
    let k = k
        .strip_prefix('<')
        .and_then(|k| k.strip_suffix('>'))
        .unwrap_or(k);
    k.split(',').map(|s| s.trim().parse().ok()).collect()
}

impl BehaviorFile {
    fn from_behavior(b: &Behavior) -> Self {
        let sc = b.scenario();
        let table = (0..sc.num_contexts())
            .map(|c| {
                let row = b
                    .context_slice(c)
                    .iter()
                    .map(|&p| serde_json::json!(p))
                    .collect();
                (context_key(&sc.context(c)), serde_json::Value::Array(row))
            })
            .collect();
        Self {
            parties: sc.parties(),
            settings: sc.settings().to_vec(),
            outcomes: sc.outcomes().to_vec(),
            table,
        }
    }

    fn into_behavior(self) -> Result<Behavior> {
        if self.settings.len() != self.parties || self.outcomes.len() != self.parties {
            return Err(Error::Parse(format!(
                "\"parties\" is {} but settings/outcomes list {}/{} parties",
                self.parties,
                self.settings.len(),
                self.outcomes.len()
            )));
        }
        let sc = Scenario::new(self.settings, self.outcomes)?;
        let nout = sc.num_outcome_vectors();
        let mut rows: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for (key, value) in self.table {
            let ctx = parse_key(&key)
                .filter(|c| c.len() == sc.parties())
                .filter(|c| c.iter().zip(sc.settings()).all(|(s, m)| s < m))
                .ok_or_else(|| Error::Parse(format!("bad setting key {key:?}")))?;
            let row: Vec<f64> = serde_json::from_value(value)
                .map_err(|e| Error::Parse(format!("context {key:?}: {e}")))?;
            if row.len() != nout {
                return Err(Error::Parse(format!(
                    "context {key:?} has {} probabilities, expected {nout}",
                    row.len()
                )));
            }
            if rows.insert(sc.context_index(&ctx), row).is_some() {
                return Err(Error::Parse(format!("context {key:?} listed twice")));
            }
        }
        if let Some(c) = (0..sc.num_contexts()).find(|c| !rows.contains_key(c)) {
            return Err(Error::Parse(format!(
                "table has no entry for context {:?}",
                context_key(&sc.context(c))
            )));
        }
        let table = rows.into_values().flatten().collect();
        Behavior::new(sc, table)
    }
}

impl Serialize for Behavior {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BehaviorFile::from_behavior(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Behavior {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        BehaviorFile::deserialize(d)?
            .into_behavior()
            .map_err(de::Error::custom)
    }
}

pub fn behavior_to_json(b: &Behavior) -> String {
    serde_json::to_string_pretty(b).expect("behavior serializes")
}

/// Parses and validates a behavior (positivity, normalization within `tol`).
pub fn behavior_from_json(text: &str, tol: f64) -> Result<Behavior> {
    let b: Behavior = serde_json::from_str(text)?;
    b.validated(tol)
}

pub fn parse_behavior(path: &Path) -> Result<Behavior> {
    behavior_from_json(&std::fs::read_to_string(path)?, DEFAULT_TOL)
}

/// Density matrix as a flat row-major array of `[re, im]` pairs.
pub fn state_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string(&rho.to_pairs()).expect("pairs serialize")
}

pub fn state_from_json(text: &str) -> Result<DensityMatrix> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text)?;
    DensityMatrix::from_pairs(&pairs)
}

pub fn parse_state(path: &Path) -> Result<DensityMatrix> {
    state_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{named_box, BoxKind};
    use crate::quantum::{named_state, NamedState};

    #[test]
    fn behavior_round_trip() {
        let sc = Scenario::new(vec![2, 3], vec![2, 2]).unwrap();
        let b = named_box(
            &BoxKind::Deterministic(vec![vec![0, 1], vec![1, 0, 1]]),
            &sc,
        )
        .unwrap();
        let text = behavior_to_json(&b);
        assert!(text.contains("\"1,2\""));
        assert_eq!(behavior_from_json(&text, 1e-9).unwrap(), b);
    }

    #[test]
    fn angle_bracket_keys() {
        let text = r#"{"parties": 1, "settings": [2], "outcomes": [2],
            "table": {"<0>": [0.25, 0.75], "< 1 >": [1.0, 0.0]}}"#;
        let b = behavior_from_json(text, 1e-9).unwrap();
        assert_eq!(b.table(), &[0.25, 0.75, 1.0, 0.0]);
    }

    #[test]
    fn missing_table_is_parse_error() {
        let text = r#"{"parties": 1, "settings": [2], "outcomes": [2]}"#;
        let err = behavior_from_json(text, 1e-9).unwrap_err();
        assert!(err.to_string().contains("table"), "{err}");
    }

    #[test]
    fn missing_context_and_bad_lengths() {
        let base = r#"{"parties": 1, "settings": [2], "outcomes": [2], "table": "#;
        assert!(behavior_from_json(&format!("{base}{{\"0\": [1.0, 0.0]}}}}"), 1e-9).is_err());
        assert!(behavior_from_json(
            &format!("{base}{{\"0\": [1.0], \"1\": [1.0, 0.0]}}}}"),
            1e-9
        )
        .is_err());
        assert!(behavior_from_json(
            &format!("{base}{{\"0\": [1.0, 0.0], \"2\": [1.0, 0.0]}}}}"),
            1e-9
        )
        .is_err());
    }

    #[test]
    fn unnormalized_context_fails_validation() {
        let text =
            r#"{"parties": 1, "settings": [1], "outcomes": [2], "table": {"0": [0.5, 0.4]}}"#;
        match behavior_from_json(text, 1e-9) {
            Err(Error::Validation(r)) => assert_eq!(r.normalization_failures.len(), 1),
            other => panic!("expected validation failure, got {other:?}"),
        }
    }

    #[test]
    fn state_round_trip() {
        let w = named_state(&NamedState::W).unwrap();
        assert_eq!(state_from_json(&state_to_json(&w)).unwrap(), w);
        let pr = named_box(&BoxKind::Pr, &Scenario::chsh()).unwrap();
        assert!(state_from_json(&behavior_to_json(&pr)).is_err());
    }
}
