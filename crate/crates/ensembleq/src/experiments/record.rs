//! The serializable face of a harness run.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::numtheory::Verdict;
use crate::{format_ratio, RatScalar};

/// One harness run: which experiment, the full configuration echo, the seed,
/// exact/real statistics, and named verdicts. Records serialize to JSON with
/// a fixed field order and sorted statistic keys, so identical runs emit
/// identical bytes; wall time is carried only when explicitly requested and
/// is excluded from that contract.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub config: Value,
    pub seed: u64,
    pub statistics: BTreeMap<String, Value>,
    pub verdicts: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<f64>,
}

impl ExperimentRecord {
    pub fn new<C: Serialize>(experiment: &str, config: &C, seed: u64) -> Result<Self> {
        Ok(Self {
            experiment: experiment.to_string(),
            config: serde_json::to_value(config)?,
            seed,
            statistics: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            wall_time_ms: None,
        })
    }

    pub fn stat_ratio<T: RatScalar>(&mut self, key: &str, value: &num_rational::Ratio<T>) {
        self.statistics
            .insert(key.to_string(), Value::String(format_ratio(value)));
    }

    pub fn stat_f64(&mut self, key: &str, value: f64) {
        self.statistics.insert(key.to_string(), value.into());
    }

    pub fn stat_int(&mut self, key: &str, value: i64) {
        self.statistics.insert(key.to_string(), value.into());
    }

    pub fn stat_str(&mut self, key: &str, value: &str) {
        self.statistics
            .insert(key.to_string(), Value::String(value.to_string()));
    }

    pub fn stat_bool(&mut self, key: &str, value: bool) {
        self.statistics.insert(key.to_string(), value.into());
    }

    pub fn verdict<T: RatScalar>(&mut self, key: &str, verdict: &Verdict<T>) -> Result<()> {
        self.verdicts
            .insert(key.to_string(), serde_json::to_value(verdict)?);
        Ok(())
    }

    pub fn verdict_status(&mut self, key: &str, status: &str) {
        self.verdicts
            .insert(key.to_string(), serde_json::json!({ "status": status }));
    }

    pub fn verdict_value(&mut self, key: &str, value: Value) {
        self.verdicts.insert(key.to_string(), value);
    }

    /// Canonical JSON: two-space indentation, fixed field order, sorted
    /// statistic and verdict keys, trailing newline.
    pub fn to_json_string(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Flat CSV: a header row and a value row. Statistics come first in key
    /// order, then verdict statuses.
    pub fn to_csv(&self) -> String {
        let mut headers = vec!["experiment".to_string(), "seed".to_string()];
        let mut values = vec![self.experiment.clone(), self.seed.to_string()];
        for (k, v) in &self.statistics {
            headers.push(k.clone());
            values.push(csv_scalar(v));
        }
        for (k, v) in &self.verdicts {
            headers.push(format!("verdict_{k}"));
            let status = v
                .get("status")
                .and_then(Value::as_str)
                .unwrap_or("UNKNOWN");
            values.push(status.to_string());
        }
        format!("{}\n{}\n", headers.join(","), values.join(","))
    }

    /// Fetches a named statistic as `f64` (rationals are parsed exactly then
    /// converted), for sweep tables.
    pub fn stat_as_f64(&self, key: &str) -> Option<f64> {
        match self.statistics.get(key)? {
            Value::Number(n) => n.as_f64(),
            Value::String(s) => {
                if let Ok(r) = crate::parse_ratio::<i64>(s) {
                    Some(*r.numer() as f64 / *r.denom() as f64)
                } else {
                    s.parse().ok()
                }
            }
            Value::Bool(b) => Some(if *b { 1.0 } else { 0.0 }),
            _ => None,
        }
    }
}

fn csv_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    #[test]
    fn json_is_stable_and_round_trips() {
        let mut r = ExperimentRecord::new("demo", &serde_json::json!({"n": 4}), 7).unwrap();
        r.stat_ratio("e", &Rat::new(-1, 2));
        r.stat_f64("s", 2.82);
        r.verdict_status("check", "HOLDS");
        let a = r.to_json_string().unwrap();
        let b = r.to_json_string().unwrap();
        assert_eq!(a, b);
        let back: ExperimentRecord = serde_json::from_str(&a).unwrap();
        assert_eq!(back, r);
        assert!(a.ends_with('\n'));
    }

    #[test]
    fn csv_shape() {
        let mut r = ExperimentRecord::new("demo", &serde_json::json!({}), 1).unwrap();
        r.stat_ratio("corr", &Rat::new(2, 3));
        r.verdict_status("law", "IRRATIONAL");
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "experiment,seed,corr,verdict_law");
        assert_eq!(lines.next().unwrap(), "demo,1,2/3,IRRATIONAL");
    }

    #[test]
    fn stat_lookup() {
        let mut r = ExperimentRecord::new("demo", &serde_json::json!({}), 1).unwrap();
        r.stat_ratio("exact", &Rat::new(1, 4));
        r.stat_f64("real", 0.5);
        assert_eq!(r.stat_as_f64("exact"), Some(0.25));
        assert_eq!(r.stat_as_f64("real"), Some(0.5));
        assert_eq!(r.stat_as_f64("missing"), None);
    }
}
