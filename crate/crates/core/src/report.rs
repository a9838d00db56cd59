//! Machine-readable artifacts: every file carries a schema version and the
//! configuration that produced it. Exact rationals are written as `"p/q"`
//! strings so they survive JSON round trips.

use serde::Serialize;
use serde_json::{json, Value};

use crate::exactalg::{format_rational, Rational};
use crate::maps::MomentTable;

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Serialize)]
pub struct Artifact<'a, C: Serialize, T: Serialize> {
    pub schema_version: &'static str,
    pub generator: &'static str,
    pub config: &'a C,
    pub result: &'a T,
}

impl<'a, C: Serialize, T: Serialize> Artifact<'a, C, T> {
    pub fn new(config: &'a C, result: &'a T) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            generator: concat!("marginal-spectra ", env!("CARGO_PKG_VERSION")),
            config,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("artifact serialises")
    }
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// `{"n": ..., "moment": "..."}` entries; symbolic tables are printed as
/// polynomials, evaluated ones as exact rationals.
pub fn moment_table_json(table: &MomentTable, evaluated: Option<&[Rational]>) -> Value {
    let entries: Vec<Value> = match evaluated {
        Some(vals) => vals
            .iter()
            .enumerate()
            .map(|(n, v)| json!({"n": n, "moment": rational_json(v)}))
            .collect(),
        None => table
            .entries()
            .iter()
            .enumerate()
            .map(|(n, p)| json!({"n": n, "moment": p.to_string()}))
            .collect(),
    };
    Value::Array(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, MultiPoly};

    #[test]
    fn artifact_layout() {
        let cfg = json!({"command": "moments"});
        let table = MomentTable::new(vec![MultiPoly::one(), "c^2 + c y^2".parse().unwrap()]);
        let body = moment_table_json(&table, Some(&[rat(1, 1), rat(5, 4)]));
        let text = Artifact::new(&cfg, &body).to_json();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert_eq!(v["config"]["command"], "moments");
        assert_eq!(v["result"][1]["moment"], "5/4");
        let sym = moment_table_json(&table, None);
        assert!(sym[1]["moment"].as_str().unwrap().contains('c'));
    }
}
