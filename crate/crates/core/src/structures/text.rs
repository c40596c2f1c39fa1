//! Line-based UTF-8 text format for structures.
//!
//! ```text
//! # comment
//! graph                 (or: signature R/2 S/3 ...)
//! universe 5
//! e 0 1                 (graph mode: each undirected edge once, u < v)
//! R 0 1 2               (general mode: one tuple per line)
//! ```
//!
//! `parse(serialize(s)) == s` holds bit-exactly.

use super::{FinStructure, Signature};
use crate::error::{Error, Result};

pub fn serialize(s: &FinStructure) -> String {
    let mut out = String::new();
    if s.sig().is_graph() {
        out.push_str("graph\n");
        out.push_str(&format!("universe {}\n", s.size()));
        for (u, v) in s.edges() {
            out.push_str(&format!("e {u} {v}\n"));
        }
    } else {
        out.push_str("signature");
        for (name, arity) in s.sig().relations() {
            out.push_str(&format!(" {name}/{arity}"));
        }
        out.push('\n');
        out.push_str(&format!("universe {}\n", s.size()));
        for (rel, (name, _)) in s.sig().relations().iter().enumerate() {
            for t in s.tuples(rel) {
                out.push_str(name);
                for x in t {
                    out.push_str(&format!(" {x}"));
                }
                out.push('\n');
            }
        }
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse(input: &str) -> Result<FinStructure> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (lno, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "missing header line"))?;
    let sig = if header == "graph" {
        Signature::graph()
    } else if let Some(rest) = header.strip_prefix("signature") {
        let mut relations = Vec::new();
        for part in rest.split_whitespace() {
            let (name, arity) = part
                .split_once('/')
                .ok_or_else(|| parse_err(lno, format!("expected name/arity, got {part:?}")))?;
            let arity: usize = arity
                .parse()
                .map_err(|_| parse_err(lno, format!("bad arity in {part:?}")))?;
            relations.push((name.to_string(), arity));
        }
        Signature::relational(relations)
            .map_err(|e| parse_err(lno, format!("bad signature: {e}")))?
    } else {
        return Err(parse_err(lno, "header must be `graph` or `signature ...`"));
    };

    let (lno, universe) = lines
        .next()
        .ok_or_else(|| parse_err(0, "missing universe line"))?;
    let size: usize = universe
        .strip_prefix("universe")
        .map(str::trim)
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| parse_err(lno, "expected `universe <n>`"))?;

    let mut tuples: Vec<Vec<Vec<usize>>> = vec![Vec::new(); sig.relations().len()];
    for (lno, line) in lines {
        let mut parts = line.split_whitespace();
        let head = parts.next().unwrap();
        let entries: Vec<usize> = parts
            .map(|p| {
                p.parse()
                    .map_err(|_| parse_err(lno, format!("bad tuple entry {p:?}")))
            })
            .collect::<Result<_>>()?;
        if sig.is_graph() {
            if head != "e" {
                return Err(parse_err(lno, format!("expected `e u v`, got {head:?}")));
            }
            if entries.len() != 2 {
                return Err(parse_err(lno, "edges need exactly two endpoints"));
            }
            let (u, v) = (entries[0], entries[1]);
            if u >= v {
                return Err(parse_err(lno, format!("edges must satisfy u < v: {u} {v}")));
            }
            if tuples[0].contains(&vec![u, v]) {
                return Err(parse_err(lno, format!("duplicate edge {u} {v}")));
            }
            tuples[0].push(vec![u, v]);
            tuples[0].push(vec![v, u]);
        } else {
            let rel = sig
                .relation_index(head)
                .ok_or_else(|| parse_err(lno, format!("unknown relation {head:?}")))?;
            if entries.len() != sig.arity(rel) {
                return Err(parse_err(
                    lno,
                    format!("relation {head} has arity {}", sig.arity(rel)),
                ));
            }
            tuples[rel].push(entries);
        }
    }

    FinStructure::new(sig, size, tuples).map_err(|e| parse_err(0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn round_trip_graph() {
        let g = FinStructure::graph(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(parse(&serialize(&g)).unwrap(), g);
    }

    #[test]
    fn round_trip_relational() {
        let sig = Signature::relational(vec![("R".into(), 3), ("S".into(), 1)]).unwrap();
        let s = FinStructure::new(
            sig,
            4,
            vec![vec![vec![0, 1, 2], vec![3, 3, 3]], vec![vec![2]]],
        )
        .unwrap();
        assert_eq!(parse(&serialize(&s)).unwrap(), s);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# a graph\n\ngraph\nuniverse 2\n# the only edge\ne 0 1\n";
        assert_eq!(parse(text).unwrap(), FinStructure::complete(2));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse("graph\nuniverse 2\ne 1 0\n").is_err()); // u >= v
        assert!(parse("graph\nuniverse 2\ne 0 1\ne 0 1\n").is_err()); // duplicate
        assert!(parse("graph\nuniverse 1\ne 0 1\n").is_err()); // out of universe
        assert!(parse("signature R/0\nuniverse 1\n").is_err()); // arity 0
        assert!(parse("nonsense\n").is_err());
        assert!(parse("graph\nuniverse 2\nf 0 1\n").is_err());
    }

    fn arbitrary_graph() -> impl Strategy<Value = FinStructure> {
        (0usize..7).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
                .collect();
            proptest::sample::subsequence(pairs.clone(), 0..=pairs.len())
                .prop_map(move |edges| FinStructure::graph(n, &edges).unwrap())
        })
    }

    proptest! {
        #[test]
        fn parse_serialize_round_trip(g in arbitrary_graph()) {
            prop_assert_eq!(parse(&serialize(&g)).unwrap(), g);
        }
    }
}
