//! DOT and JSON forms of a [`Dfao`]. Both are byte-stable: states by id, digits ascending.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::FieldCtx;
use crate::polynomial::parse_element;

use super::{Dfao, Reading};

#[derive(Serialize, Deserialize)]
struct DfaoJson {
    q: u32,
    reading: String,
    initial: usize,
    outputs: Vec<String>,
    delta: Vec<Vec<usize>>,
}

pub(super) fn to_json(a: &Dfao) -> String {
    let doc = DfaoJson {
        q: a.q(),
        reading: a.reading.as_str().into(),
        initial: a.initial,
        outputs: a.out.iter().map(|&c| a.field.format(c)).collect(),
        delta: a.delta.clone(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

pub(super) fn from_json(field: &FieldCtx, text: &str) -> Result<Dfao> {
    let doc: DfaoJson =
        serde_json::from_str(text).map_err(|e| Error::parse(e.column(), format!("automaton JSON: {e}")))?;
    if doc.q != field.q() {
        return Err(Error::FieldMismatch);
    }
    let reading = match doc.reading.as_str() {
        "reverse" => Reading::Reverse,
        "forward" => Reading::Forward,
        other => return Err(Error::parse(0, format!("unknown reading {other:?}"))),
    };
    let out = doc.outputs.iter().map(|s| parse_element(field, s)).collect::<Result<Vec<_>>>()?;
    Dfao::new(field, reading, doc.initial, doc.delta, out)
}

pub(super) fn to_dot(a: &Dfao) -> String {
    let mut s = String::from("digraph dfao {\n  rankdir=LR;\n  init [shape=point];\n");
    let _ = writeln!(s, "  init -> s{};", a.initial);
    for (id, &c) in a.out.iter().enumerate() {
        let _ = writeln!(s, "  s{id} [label=\"s{id}/{}\"];", a.field.format(c));
    }
    for (id, row) in a.delta.iter().enumerate() {
        for (digit, &t) in row.iter().enumerate() {
            let _ = writeln!(s, "  s{id} -> s{t} [label=\"{digit}\"];");
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{make_field, Fq};

    #[test]
    fn zero_automaton_json() {
        let f = make_field(2, 1, None).unwrap();
        let a = Dfao::new(&f, Reading::Reverse, 0, vec![vec![0, 0]], vec![Fq::ZERO]).unwrap();
        let json = a.to_json();
        assert_eq!(json, r#"{"q":2,"reading":"reverse","initial":0,"outputs":["0"],"delta":[[0,0]]}"#);
        assert_eq!(Dfao::from_json(&f, &json).unwrap(), a);
    }

    #[test]
    fn thue_morse_dot() {
        let f = make_field(2, 1, None).unwrap();
        let a = Dfao::new(&f, Reading::Reverse, 0, vec![vec![0, 1], vec![1, 0]], vec![Fq::ZERO, Fq::ONE]).unwrap();
        let dot = a.to_dot();
        assert!(dot.contains("s0 -> s0 [label=\"0\"]"));
        assert!(dot.contains("s0 -> s1 [label=\"1\"]"));
        assert!(dot.contains("s1 -> s0 [label=\"1\"]"));
        assert!(dot.contains("s1 [label=\"s1/1\"]"));
        assert_eq!(dot.matches("->").count(), 5);
    }

    #[test]
    fn extension_outputs_round_trip() {
        let f = make_field(3, 2, None).unwrap();
        let out: Vec<Fq> = f.elements().collect();
        let n = out.len();
        let delta = (0..n).map(|s| (0..9).map(|d| (s + d) % n).collect()).collect();
        let a = Dfao::new(&f, Reading::Forward, 4, delta, out).unwrap();
        assert_eq!(Dfao::from_json(&f, &a.to_json()).unwrap(), a);
    }

    #[test]
    fn malformed_json() {
        let f = make_field(2, 1, None).unwrap();
        for bad in [
            "{",
            r#"{"q":3,"reading":"reverse","initial":0,"outputs":["0"],"delta":[[0,0,0]]}"#,
            r#"{"q":2,"reading":"sideways","initial":0,"outputs":["0"],"delta":[[0,0]]}"#,
            r#"{"q":2,"reading":"reverse","initial":0,"outputs":["0"],"delta":[[0,1]]}"#,
        ] {
            assert!(Dfao::from_json(&f, bad).is_err(), "{bad}");
        }
    }
}
