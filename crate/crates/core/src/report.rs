//! Line-delimited JSON reports, one per check.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::polyq::PolyQ;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub subcommand: String,
    pub check: String,
    /// The statement the check exercises, in words.
    pub anchor: String,
    pub inputs: Value,
    pub outputs: Value,
    pub verdicts: Vec<Verdict>,
    pub seed: u64,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(subcommand: &str, check: &str, anchor: &str, seed: u64) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            subcommand: subcommand.to_string(),
            check: check.to_string(),
            anchor: anchor.to_string(),
            inputs: Value::Object(Default::default()),
            outputs: Value::Object(Default::default()),
            verdicts: Vec::new(),
            seed,
            elapsed_ms: 0,
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.inputs[key] = serde_json::to_value(v).expect("serializable input");
        self
    }

    pub fn output(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.outputs[key] = serde_json::to_value(v).expect("serializable output");
        self
    }

    pub fn verdict(&mut self, name: &str, pass: bool, detail: impl Into<String>) -> &mut Self {
        self.verdicts.push(Verdict { name: name.to_string(), pass, detail: detail.into() });
        self
    }

    /// True when there is at least one verdict and all of them pass.
    pub fn passed(&self) -> bool {
        !self.verdicts.is_empty() && self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json_line(line: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(line)
    }
}

/// Exact coefficient list: monomial exponents paired with the coefficient as
/// a reduced fraction string.
pub fn poly_value(f: &PolyQ) -> Value {
    let terms: Vec<Value> = f
        .to_terms()
        .into_iter()
        .map(|(e, c)| serde_json::json!({ "exponents": e, "coefficient": c }))
        .collect();
    serde_json::json!({ "display": f.to_string(), "terms": terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyq::rat;

    #[test]
    fn round_trip() {
        let mut r = Report::new("springer", "poincare", "point counts are polynomial in q", 3);
        r.input("partition", "2,1").output("total", 3).output("poly", poly_value(&PolyQ::affine(&[rat(2)], rat(1))));
        r.verdict("total", true, "3 = 3");
        let line = r.to_json_line();
        assert!(!line.contains('\n'));
        assert_eq!(Report::from_json_line(&line).unwrap(), r);
        assert!(r.passed());
        assert!(!Report::new("x", "y", "z", 0).passed());
    }
}
