//! JSON formats `rtensor-v1` and `rgraph-v1`, and a JSON writer that emits
//! floats with 17 significant digits.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, WeightedRGraph};
use crate::tensor::Tensor;

pub const TENSOR_FORMAT: &str = "rtensor-v1";
pub const GRAPH_FORMAT: &str = "rgraph-v1";

#[derive(Debug, Serialize, Deserialize)]
struct EntryRecord {
    idx: Vec<usize>,
    val: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct TensorRecord {
    format: String,
    order: usize,
    dims: Vec<usize>,
    entries: Vec<EntryRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphRecord {
    format: String,
    r: usize,
    n: usize,
    edges: Vec<Edge>,
}

#[derive(Deserialize)]
struct Header {
    format: Option<String>,
}

/// A parsed input document of either format.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Tensor(Tensor),
    Graph(WeightedRGraph),
}

impl Document {
    /// The tensor itself, or the adjacency tensor of a graph.
    pub fn into_tensor(self) -> Tensor {
        match self {
            Document::Tensor(t) => t,
            Document::Graph(g) => g.adjacency_tensor(),
        }
    }
}

fn format_err(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

/// Formats `v` with 17 significant digits, trailing zeros trimmed.
pub fn format_f64(v: f64) -> String {
    if !v.is_finite() {
        return "null".into();
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = mantissa.strip_prefix('-').map_or(("", mantissa), |m| ("-", m));
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    if (-5..17).contains(&exp) {
        let (int, frac) = if exp >= 0 {
            let split = exp as usize + 1;
            (digits[..split].to_string(), digits[split..].to_string())
        } else {
            ("0".to_string(), "0".repeat((-exp - 1) as usize) + &digits)
        };
        let frac = frac.trim_end_matches('0');
        format!("{sign}{int}.{}", if frac.is_empty() { "0" } else { frac })
    } else {
        let frac = digits[1..].trim_end_matches('0');
        format!("{sign}{}.{}e{exp}", &digits[..1], if frac.is_empty() { "0" } else { frac })
    }
}

struct PreciseFormatter;

impl Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with 17-significant-digit floats.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, PreciseFormatter);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(out).expect("JSON is UTF-8")
}

/// `rtensor-v1` document listing the nonzero entries.
pub fn tensor_to_json(a: &Tensor) -> String {
    let mut entries = Vec::new();
    a.for_each_nonzero(|idx, val| entries.push(EntryRecord { idx: idx.to_vec(), val }));
    to_json(&TensorRecord { format: TENSOR_FORMAT.into(), order: a.order(), dims: a.dims().to_vec(), entries })
}

pub fn graph_to_json(g: &WeightedRGraph) -> String {
    to_json(&GraphRecord { format: GRAPH_FORMAT.into(), r: g.r(), n: g.n(), edges: g.edges().to_vec() })
}

pub fn tensor_from_json(s: &str) -> Result<Tensor> {
    let rec: TensorRecord = serde_json::from_str(s).map_err(format_err)?;
    if rec.format != TENSOR_FORMAT {
        return Err(Error::Format(format!("expected format {TENSOR_FORMAT}, got {}", rec.format)));
    }
    if rec.dims.len() != rec.order {
        return Err(Error::Format(format!("order {} but {} dims", rec.order, rec.dims.len())));
    }
    let coo: Vec<(Vec<usize>, f64)> = rec.entries.into_iter().map(|e| (e.idx, e.val)).collect();
    if coo.iter().any(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Tensor::from_coo(rec.order, rec.dims, &coo)
}

pub fn graph_from_json(s: &str) -> Result<WeightedRGraph> {
    let rec: GraphRecord = serde_json::from_str(s).map_err(format_err)?;
    if rec.format != GRAPH_FORMAT {
        return Err(Error::Format(format!("expected format {GRAPH_FORMAT}, got {}", rec.format)));
    }
    if let Some(e) = rec.edges.iter().find(|e| e.verts.windows(2).any(|w| w[0] >= w[1])) {
        return Err(Error::Format(format!("edge vertices {:?} are not strictly increasing", e.verts)));
    }
    WeightedRGraph::new(rec.r, rec.n, rec.edges)
}

/// Parses either format, chosen by the `format` field.
pub fn document_from_json(s: &str) -> Result<Document> {
    let header: Header = serde_json::from_str(s).map_err(format_err)?;
    match header.format.as_deref() {
        Some(TENSOR_FORMAT) => tensor_from_json(s).map(Document::Tensor),
        Some(GRAPH_FORMAT) => graph_from_json(s).map(Document::Graph),
        Some(other) => Err(Error::Format(format!("unknown format {other:?}"))),
        None => Err(Error::Format("missing \"format\" field".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{gen_beta_star, gen_random};
    use crate::random::{random_tensor, Sign};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn float_formatting() {
        assert_eq!(format_f64(2.0), "2.0");
        assert_eq!(format_f64(0.1), "0.10000000000000001");
        assert_eq!(format_f64(-1.5e-7), "-1.4999999999999999e-7");
        assert_eq!(format_f64(1e20), "1.0e20");
        assert_eq!(format_f64(123.25), "123.25");
        assert_eq!(format_f64(f64::NAN), "null");
    }

    proptest! {
        #[test]
        fn float_round_trip(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let s = format_f64(v);
            let back: f64 = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back.to_bits(), v.to_bits());
        }
    }

    #[test]
    fn tensor_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_tensor(&[2, 3, 2], Sign::Mixed, &mut rng);
        let s = tensor_to_json(&a);
        assert!(s.starts_with("{\"format\":\"rtensor-v1\""));
        assert_eq!(tensor_from_json(&s).unwrap(), a);
        assert_eq!(document_from_json(&s).unwrap(), Document::Tensor(a));
    }

    #[test]
    fn graph_round_trip() {
        let g = gen_random(3, 6, 0.5, 1, true).unwrap();
        let s = graph_to_json(&g);
        assert_eq!(graph_from_json(&s).unwrap(), g);
        let b = gen_beta_star(3, 2).unwrap();
        let doc = document_from_json(&graph_to_json(&b)).unwrap();
        assert_eq!(doc.into_tensor(), b.adjacency_tensor());
    }

    #[test]
    fn format_errors() {
        let dup =
            r#"{"format":"rtensor-v1","order":2,"dims":[2,2],"entries":[{"idx":[0,0],"val":1},{"idx":[0,0],"val":1}]}"#;
        assert!(matches!(tensor_from_json(dup), Err(Error::DuplicateIndex(_))));
        let oob = r#"{"format":"rtensor-v1","order":2,"dims":[2,2],"entries":[{"idx":[0,2],"val":1}]}"#;
        assert!(matches!(tensor_from_json(oob), Err(Error::IndexOutOfRange { .. })));
        let bad_order = r#"{"format":"rtensor-v1","order":3,"dims":[2,2],"entries":[]}"#;
        assert!(matches!(tensor_from_json(bad_order), Err(Error::Format(_))));
        assert!(matches!(document_from_json(r#"{"format":"other"}"#), Err(Error::Format(_))));
        assert!(matches!(document_from_json("not json"), Err(Error::Format(_))));
        let unsorted = r#"{"format":"rgraph-v1","r":2,"n":3,"edges":[{"verts":[1,0],"weight":1}]}"#;
        assert!(matches!(graph_from_json(unsorted), Err(Error::Format(_))));
        let zero = r#"{"format":"rtensor-v1","order":2,"dims":[2,2],"entries":[]}"#;
        assert!(tensor_from_json(zero).unwrap().is_zero());
    }
}
