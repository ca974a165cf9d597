//! Plain-text format for embedded multigraphs.
//!
//! A file describes a multigraph together with a rotation system:
//!
//! ```text
//! # Anything after '#' is a comment; blank lines are ignored.
//! V 4
//! E 0 0 1
//! E 1 0 2
//! E 2 0 3
//! E 3 1 2
//! E 4 1 3
//! E 5 2 3
//! R 0: 0a 1a 2a
//! R 1: 0b 4a 3a
//! R 2: 1b 3b 5a
//! R 3: 2b 5b 4b
//! ```
//!
//! * `V <n>` declares the number of vertices and must come first.
//! * `E <id> <u> <v>` declares edge `<id>` from `u` to `v` (`u == v` is a
//!   loop).  Ids must appear in order `0, 1, 2, ...`, all before any `R` line.
//! * `R <v>: <tokens>` lists the half-edges around vertex `v` in
//!   counterclockwise order.  A half-edge is written `<edge>a` for the `u`
//!   end and `<edge>b` for the `v` end; a loop contributes both.  Every
//!   vertex of nonzero degree needs exactly one `R` line.
//!
//! [`serialize`] writes this shape back out canonically (no comments, edges
//! and rotations in ascending order), so `parse(serialize(g, r)) == (g, r)`.

use crate::error::Error;
use crate::graph::{HalfEdge, Multigraph, Side};
use crate::surface::RotationSystem;
use crate::Result;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_usize(line: usize, what: &str, token: &str) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("invalid {what} `{token}`")))
}

fn parse_half_edge(line: usize, token: &str, edge_count: usize) -> Result<HalfEdge> {
    let side = match token.chars().last() {
        Some('a') => Side::A,
        Some('b') => Side::B,
        _ => {
            return Err(parse_err(
                line,
                format!("half-edge `{token}` must end in `a` or `b`"),
            ))
        }
    };
    let edge = parse_usize(line, "half-edge", &token[..token.len() - 1])?;
    if edge >= edge_count {
        return Err(parse_err(
            line,
            format!("half-edge `{token}` refers to edge {edge}, but only {edge_count} edges are declared"),
        ));
    }
    Ok(HalfEdge::new(edge, side))
}

/// Parse the text format into a graph and its rotation system.
///
/// Errors carry the 1-based line number of the offending line.  Semantic
/// problems that have no single line (a missing or malformed rotation) are
/// reported through [`Error::BadRotation`].
pub fn parse(input: &str) -> Result<(Multigraph, RotationSystem)> {
    let mut vertex_count: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut rotations: Vec<Option<Vec<HalfEdge>>> = Vec::new();
    let mut seen_rotation = false;

    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        let text = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "V" => {
                if vertex_count.is_some() {
                    return Err(parse_err(line, "duplicate `V` line"));
                }
                if tokens.len() != 2 {
                    return Err(parse_err(line, "expected `V <vertex count>`"));
                }
                let n = parse_usize(line, "vertex count", tokens[1])?;
                vertex_count = Some(n);
                rotations = vec![None; n];
            }
            "E" => {
                let n = vertex_count
                    .ok_or_else(|| parse_err(line, "`E` line before the `V` line"))?;
                if seen_rotation {
                    return Err(parse_err(line, "`E` line after an `R` line"));
                }
                if tokens.len() != 4 {
                    return Err(parse_err(line, "expected `E <id> <u> <v>`"));
                }
                let id = parse_usize(line, "edge id", tokens[1])?;
                if id != edges.len() {
                    return Err(parse_err(
                        line,
                        format!("expected edge id {}, found {id}", edges.len()),
                    ));
                }
                let u = parse_usize(line, "endpoint", tokens[2])?;
                let v = parse_usize(line, "endpoint", tokens[3])?;
                if u >= n || v >= n {
                    return Err(parse_err(
                        line,
                        format!("endpoint out of range: graph has {n} vertices"),
                    ));
                }
                edges.push((u, v));
            }
            "R" => {
                let n = vertex_count
                    .ok_or_else(|| parse_err(line, "`R` line before the `V` line"))?;
                seen_rotation = true;
                if tokens.len() < 2 || !tokens[1].ends_with(':') {
                    return Err(parse_err(line, "expected `R <vertex>: <half-edges>`"));
                }
                let v = parse_usize(line, "vertex", &tokens[1][..tokens[1].len() - 1])?;
                if v >= n {
                    return Err(parse_err(
                        line,
                        format!("vertex {v} out of range: graph has {n} vertices"),
                    ));
                }
                if rotations[v].is_some() {
                    return Err(parse_err(line, format!("duplicate `R` line for vertex {v}")));
                }
                let mut order = Vec::with_capacity(tokens.len() - 2);
                for token in &tokens[2..] {
                    order.push(parse_half_edge(line, token, edges.len())?);
                }
                rotations[v] = Some(order);
            }
            other => {
                return Err(parse_err(
                    line,
                    format!("unknown directive `{other}` (expected `V`, `E`, or `R`)"),
                ))
            }
        }
    }

    let n = vertex_count.ok_or_else(|| parse_err(input.lines().count(), "missing `V` line"))?;
    let graph = Multigraph::new(n, edges)?;
    let mut order = Vec::with_capacity(n);
    for v in 0..n {
        match rotations[v].take() {
            Some(cycle) => order.push(cycle),
            None if graph.degree(v) == 0 => order.push(Vec::new()),
            None => {
                return Err(Error::BadRotation {
                    vertex: v,
                    msg: "missing `R` line for a vertex of nonzero degree".into(),
                })
            }
        }
    }
    let rotation = RotationSystem::new(&graph, order)?;
    Ok((graph, rotation))
}

fn half_edge_token(h: HalfEdge) -> String {
    format!(
        "{}{}",
        h.edge,
        match h.side {
            Side::A => 'a',
            Side::B => 'b',
        }
    )
}

/// Write a graph and rotation system in canonical form.
pub fn serialize(g: &Multigraph, rot: &RotationSystem) -> String {
    let mut out = String::new();
    out.push_str(&format!("V {}\n", g.vertex_count()));
    for e in 0..g.edge_count() {
        let (u, v) = g.endpoints(e);
        out.push_str(&format!("E {e} {u} {v}\n"));
    }
    for v in 0..g.vertex_count() {
        let cycle = rot.at(v);
        if cycle.is_empty() {
            continue;
        }
        out.push_str(&format!("R {v}:"));
        for &h in cycle {
            out.push(' ');
            out.push_str(&half_edge_token(h));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    #[test]
    fn documented_example_parses_to_k4() {
        let text = "\
# complete graph on four vertices
V 4

E 0 0 1
E 1 0 2
E 2 0 3
E 3 1 2
E 4 1 3
E 5 2 3
R 0: 0a 1a 2a   # counterclockwise at vertex 0
R 1: 0b 4a 3a
R 2: 1b 3b 5a
R 3: 2b 5b 4b
";
        let (g, rot) = parse(text).unwrap();
        let (kg, krot) = fixtures::k4_planar();
        assert_eq!(g, kg);
        assert_eq!(rot, krot);
    }

    #[test]
    fn round_trips_every_fixture() {
        for (name, g, rot) in fixtures::all_named() {
            let text = serialize(&g, &rot);
            let (g2, rot2) = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(g, g2, "{name}");
            assert_eq!(rot, rot2, "{name}");
            assert_eq!(text, serialize(&g2, &rot2), "{name}");
        }
    }

    #[test]
    fn degree_zero_vertices_need_no_rotation_line() {
        let (g, rot) = parse("V 3\nE 0 0 0\nR 0: 0a 0b\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.degree(1), 0);
        assert!(rot.at(1).is_empty());
        assert_eq!(serialize(&g, &rot), "V 3\nE 0 0 0\nR 0: 0a 0b\n");
    }

    fn parse_error_line(text: &str) -> (usize, String) {
        match parse(text) {
            Err(Error::Parse { line, msg }) => (line, msg),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases: &[(&str, usize, &str)] = &[
            ("E 0 0 1\n", 1, "before the `V`"),
            ("V 2\nV 2\n", 2, "duplicate `V`"),
            ("V 2\nE 1 0 1\n", 2, "expected edge id 0"),
            ("V 2\nE 0 0 1\nE 0 1 0\n", 3, "expected edge id 1"),
            ("V 2\nE 0 0 2\n", 2, "endpoint out of range"),
            ("V 2\nE 0 0 1\nR 0 0a\n", 3, "expected `R <vertex>:"),
            ("V 2\nE 0 0 1\nR 0: 0c\n", 3, "must end in `a` or `b`"),
            ("V 2\nE 0 0 1\nR 0: 1a\n", 3, "only 1 edges are declared"),
            ("V 2\nE 0 0 1\nR 2: 0a\n", 3, "vertex 2 out of range"),
            (
                "V 2\nE 0 0 1\nR 0: 0a\nR 0: 0a\n",
                4,
                "duplicate `R` line for vertex 0",
            ),
            ("V 2\nE 0 0 1\nR 0: 0a\nE 1 0 1\n", 4, "after an `R` line"),
            ("V 2\nX 1\n", 2, "unknown directive `X`"),
            ("# nothing\n", 1, "missing `V` line"),
        ];
        for (text, want_line, want_msg) in cases {
            let (line, msg) = parse_error_line(text);
            assert_eq!(line, *want_line, "{text:?}: {msg}");
            assert!(msg.contains(want_msg), "{text:?}: got `{msg}`");
        }
    }

    #[test]
    fn missing_rotation_line_is_a_rotation_error() {
        match parse("V 2\nE 0 0 1\nR 0: 0a\n") {
            Err(Error::BadRotation { vertex: 1, .. }) => {}
            other => panic!("expected BadRotation for vertex 1, got {other:?}"),
        }
    }

    #[test]
    fn wrong_half_edges_in_rotation_are_rejected() {
        // vertex 0 lists 0b, which lives at vertex 1
        match parse("V 2\nE 0 0 1\nR 0: 0b\nR 1: 0a\n") {
            Err(Error::BadRotation { .. }) => {}
            other => panic!("expected BadRotation, got {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn random_embeddings_round_trip(
            n in 1usize..7,
            raw_edges in proptest::collection::vec((0usize..6, 0usize..6), 0..12),
            shuffle_seed in any::<u64>(),
        ) {
            let edges: Vec<(usize, usize)> =
                raw_edges.iter().map(|&(u, v)| (u % n, v % n)).collect();
            let g = Multigraph::new(n, edges).unwrap();
            let mut rng = rand::rngs::StdRng::seed_from_u64(shuffle_seed);
            let order: Vec<Vec<HalfEdge>> = (0..n)
                .map(|v| {
                    let mut cycle = g.half_edges(v).to_vec();
                    cycle.shuffle(&mut rng);
                    cycle
                })
                .collect();
            let rot = RotationSystem::new(&g, order).unwrap();
            let text = serialize(&g, &rot);
            let (g2, rot2) = parse(&text).unwrap();
            prop_assert_eq!(g, g2);
            prop_assert_eq!(rot, rot2);
        }
    }
}
