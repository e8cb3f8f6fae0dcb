//! Experiment reports: a fixed JSON shape with full-precision floats.
//!
//! Every float in a serialized report is printed with 17 significant digits
//! (`{:.16e}`), enough to round-trip any f64 exactly, so a report is both
//! byte-stable across reruns and lossless as a data record. Parameters live
//! in a sorted map; quantities and verdicts keep their construction order.

use serde::ser::{SerializeMap, SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::io;

/// One measured number with an optional rigorous error bound.
#[derive(Clone, Debug, Serialize)]
pub struct Quantity {
    pub label: String,
    pub value: f64,
    pub error_bound: Option<f64>,
}

/// One pass/fail claim. The claim text names the quantities it judges.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub claim: String,
    pub pass: bool,
}

/// A parameter value as recorded in the report header.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamValue {
    Int(i64),
    UInt(u64),
    Float(f64),
    Text(String),
    Flag(bool),
}

impl Serialize for ParamValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ParamValue::Int(v) => s.serialize_i64(*v),
            ParamValue::UInt(v) => s.serialize_u64(*v),
            ParamValue::Float(v) => s.serialize_f64(*v),
            ParamValue::Text(v) => s.serialize_str(v),
            ParamValue::Flag(v) => s.serialize_bool(*v),
        }
    }
}

/// A complete experiment report.
#[derive(Clone, Debug)]
pub struct Report {
    pub experiment_id: String,
    pub parameters: BTreeMap<String, ParamValue>,
    pub quantities: Vec<Quantity>,
    pub verdicts: Vec<Verdict>,
    pub seed: u64,
    pub runtime_ms: u64,
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Report", 6)?;
        st.serialize_field("experiment_id", &self.experiment_id)?;
        st.serialize_field("parameters", &SortedParams(&self.parameters))?;
        st.serialize_field("quantities", &Seq(&self.quantities))?;
        st.serialize_field("verdicts", &Seq(&self.verdicts))?;
        st.serialize_field("seed", &self.seed)?;
        st.serialize_field("runtime_ms", &self.runtime_ms)?;
        st.end()
    }
}

struct SortedParams<'a>(&'a BTreeMap<String, ParamValue>);

impl Serialize for SortedParams<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

struct Seq<'a, T: Serialize>(&'a [T]);

impl<T: Serialize> Serialize for Seq<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for item in self.0 {
            seq.serialize_element(item)?;
        }
        seq.end()
    }
}

/// JSON formatter that renders every float with 17 significant digits in
/// scientific notation, the shortest representation guaranteed to round-trip
/// any finite f64 bit-exactly.
pub struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{:.16e}", value)
    }
}

/// Serializes any value with the 17-digit float formatter — the one rendering
/// used for every JSON this tool emits.
pub fn to_sci_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value.serialize(&mut ser).expect("JSON serialization cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

impl Report {
    /// Serializes the report with the 17-digit float formatter.
    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
        self.serialize(&mut ser).expect("report serialization cannot fail");
        String::from_utf8(out).expect("serde_json emits UTF-8")
    }

    /// Serializes with `runtime_ms` zeroed: the canonical form for
    /// byte-identity comparisons, since wall time is the one field that may
    /// differ between reruns of an otherwise deterministic experiment.
    pub fn to_canonical_json(&self) -> String {
        let mut zeroed = self.clone();
        zeroed.runtime_ms = 0;
        zeroed.to_json()
    }

    /// CSV rows `label,value` for every quantity, full precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,value\n");
        for q in &self.quantities {
            debug_assert!(
                !q.label.contains(',') && !q.label.contains('\n'),
                "quantity labels stay comma- and newline-free by construction"
            );
            out.push_str(&format!("{},{:.16e}\n", q.label, q.value));
        }
        out
    }

    /// True when every verdict passed.
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// True when every verdict's claim names at least one quantity present in
    /// the report (the self-containment invariant), and every recorded number
    /// is finite.
    pub fn is_self_contained(&self) -> bool {
        let referenced = self
            .verdicts
            .iter()
            .all(|v| self.quantities.iter().any(|q| v.claim.contains(&q.label)));
        let finite = self.quantities.iter().all(|q| {
            q.value.is_finite() && q.error_bound.map_or(true, |b| b.is_finite())
        });
        referenced && finite
    }
}
