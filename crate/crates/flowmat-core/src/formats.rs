//! Plain-text file formats for the CLI surface: Gram matrices, graphs,
//! matroids and 0/1 incidence matrices. Writers are deterministic so outputs
//! diff cleanly.

use crate::graph::Multigraph;
use crate::lattice::GramMatrix;
use crate::linalg::Int;
use crate::matroid;
use crate::reconstruct::BlockMatroid;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("{0}")]
    Parse(String),
}

fn parse_err(msg: impl Into<String>) -> FormatError {
    FormatError::Parse(msg.into())
}

fn nonempty_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty())
}

fn parse_usize(token: &str, what: &str) -> Result<usize, FormatError> {
    token
        .parse()
        .map_err(|_| parse_err(format!("invalid {what}: {token:?}")))
}

/// Gram matrix text: line 1 is the rank `r`, then `r` lines of `r` integers.
/// The matrix must be symmetric positive definite.
pub fn parse_gram(text: &str) -> Result<GramMatrix, FormatError> {
    let mut lines = nonempty_lines(text);
    let first = lines.next().ok_or_else(|| parse_err("empty Gram file"))?;
    let r = parse_usize(first.trim(), "rank")?;
    if r == 0 {
        return Err(parse_err("rank must be positive"));
    }
    let mut rows = Vec::with_capacity(r);
    for i in 0..r {
        let line = lines
            .next()
            .ok_or_else(|| parse_err(format!("missing matrix row {}", i + 1)))?;
        let row: Result<Vec<Int>, _> = line
            .split_whitespace()
            .map(|t| Int::from_str(t).map_err(|_| parse_err(format!("invalid integer {t:?}"))))
            .collect();
        let row = row?;
        if row.len() != r {
            return Err(parse_err(format!(
                "row {} has {} entries, expected {r}",
                i + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    if lines.next().is_some() {
        return Err(parse_err("trailing content after matrix rows"));
    }
    GramMatrix::new(rows).map_err(|e| parse_err(e.to_string()))
}

pub fn write_gram(gram: &GramMatrix) -> String {
    let r = gram.rank();
    let mut out = format!("{r}\n");
    for i in 0..r {
        let row: Vec<String> = (0..r).map(|j| gram.entry(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Graph text: line 1 is `n m`, then `m` lines `tail head` with 0-based
/// vertex ids; the edge index is the line order.
pub fn parse_graph(text: &str) -> Result<Multigraph, FormatError> {
    let mut lines = nonempty_lines(text);
    let first = lines.next().ok_or_else(|| parse_err("empty graph file"))?;
    let header: Vec<&str> = first.split_whitespace().collect();
    if header.len() != 2 {
        return Err(parse_err("graph header must be `n m`"));
    }
    let n = parse_usize(header[0], "vertex count")?;
    let m = parse_usize(header[1], "edge count")?;
    if n == 0 {
        return Err(parse_err("graph needs at least one vertex"));
    }
    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let line = lines
            .next()
            .ok_or_else(|| parse_err(format!("missing edge line {}", i + 1)))?;
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(parse_err(format!("edge line {} must be `tail head`", i + 1)));
        }
        let t = parse_usize(parts[0], "vertex id")?;
        let h = parse_usize(parts[1], "vertex id")?;
        if t >= n || h >= n {
            return Err(parse_err(format!("edge {} endpoint out of range", i + 1)));
        }
        edges.push((t, h));
    }
    if lines.next().is_some() {
        return Err(parse_err("trailing content after edge lines"));
    }
    Ok(Multigraph::new(n, edges))
}

pub fn write_graph(g: &Multigraph) -> String {
    let mut out = format!("{} {}\n", g.n_vertices(), g.n_edges());
    for &(t, h) in g.edges() {
        out.push_str(&format!("{t} {h}\n"));
    }
    out
}

/// Matroid text: `matroid <ground> <circuits>`, then `blocks <b>: n_1 ... n_b`,
/// then one `circuit: <columns>` line per circuit with expanded 0-based column
/// indices, circuit lines sorted lexicographically.
pub fn write_matroid(b: &BlockMatroid) -> String {
    let expanded = matroid::expand(b);
    let mut out = format!(
        "matroid {} {}\n",
        expanded.ground_size(),
        expanded.circuits().len()
    );
    let sizes: Vec<String> = b.block_sizes().iter().map(usize::to_string).collect();
    out.push_str(&format!(
        "blocks {}: {}\n",
        b.block_sizes().len(),
        sizes.join(" ")
    ));
    let mut lines: Vec<Vec<usize>> = expanded
        .circuits()
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    lines.sort();
    for line in lines {
        let cols: Vec<String> = line.iter().map(usize::to_string).collect();
        out.push_str(&format!("circuit: {}\n", cols.join(" ")));
    }
    out
}

/// Incidence matrix text: line 1 is `rows cols`, then `rows` lines of 0/1
/// entries; row and column order is taken verbatim.
pub fn parse_incidence(text: &str) -> Result<Vec<Vec<bool>>, FormatError> {
    let mut lines = nonempty_lines(text);
    let first = lines
        .next()
        .ok_or_else(|| parse_err("empty incidence file"))?;
    let header: Vec<&str> = first.split_whitespace().collect();
    if header.len() != 2 {
        return Err(parse_err("incidence header must be `rows cols`"));
    }
    let rows = parse_usize(header[0], "row count")?;
    let cols = parse_usize(header[1], "column count")?;
    let mut out = Vec::with_capacity(rows);
    for i in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| parse_err(format!("missing matrix row {}", i + 1)))?;
        let row: Result<Vec<bool>, FormatError> = line
            .split_whitespace()
            .map(|t| match t {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(parse_err(format!("incidence entries must be 0 or 1, got {t:?}"))),
            })
            .collect();
        let row = row?;
        if row.len() != cols {
            return Err(parse_err(format!(
                "row {} has {} entries, expected {cols}",
                i + 1,
                row.len()
            )));
        }
        out.push(row);
    }
    if out.iter().any(|row| row.iter().all(|&x| !x)) {
        return Err(parse_err("incidence rows must each contain a 1"));
    }
    Ok(out)
}

/// Input of the spanning-tree-basis command: a Gram file (header is a single
/// integer) or an explicit incidence file (header is `rows cols`).
pub enum StbasisInput {
    Gram(GramMatrix),
    Incidence(Vec<Vec<bool>>),
}

pub fn parse_stbasis_input(text: &str) -> Result<StbasisInput, FormatError> {
    let first = nonempty_lines(text)
        .next()
        .ok_or_else(|| parse_err("empty input file"))?;
    match first.split_whitespace().count() {
        1 => Ok(StbasisInput::Gram(parse_gram(text)?)),
        2 => Ok(StbasisInput::Incidence(parse_incidence(text)?)),
        k => Err(parse_err(format!(
            "header must have 1 (Gram) or 2 (incidence) fields, got {k}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn gram_round_trip() {
        let text = "3\n3 1 2\n1 3 0\n2 0 4\n";
        let gram = parse_gram(text).unwrap();
        assert_eq!(gram.rank(), 3);
        assert_eq!(gram.entry(0, 2), &int(2));
        assert_eq!(write_gram(&gram), text);
    }

    #[test]
    fn gram_rejects_bad_input() {
        assert!(parse_gram("").is_err());
        assert!(parse_gram("2\n1 2\n3 4\n").is_err()); // not symmetric
        assert!(parse_gram("2\n1 2\n2 1\n").is_err()); // not positive definite
        assert!(parse_gram("2\n1 0\n").is_err()); // missing row
        assert!(parse_gram("1\n5\nextra\n").is_err());
    }

    #[test]
    fn graph_round_trip() {
        let text = "3 3\n0 1\n1 2\n2 0\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(write_graph(&g), text);
        assert!(parse_graph("2 1\n0 5\n").is_err());
        assert!(parse_graph("0 0\n").is_err());
    }

    #[test]
    fn incidence_parsing() {
        let inc = parse_incidence("2 3\n1 0 1\n0 1 0\n").unwrap();
        assert_eq!(inc, vec![vec![true, false, true], vec![false, true, false]]);
        assert!(parse_incidence("1 2\n0 0\n").is_err());
        assert!(parse_incidence("1 2\n1 2\n").is_err());
    }

    #[test]
    fn stbasis_input_detection() {
        assert!(matches!(
            parse_stbasis_input("1\n4\n").unwrap(),
            StbasisInput::Gram(_)
        ));
        assert!(matches!(
            parse_stbasis_input("1 2\n1 1\n").unwrap(),
            StbasisInput::Incidence(_)
        ));
    }

    #[test]
    fn matroid_writing() {
        use std::collections::BTreeSet;
        let b = BlockMatroid::new(
            vec![2, 1],
            vec![BTreeSet::from([0, 1])],
        );
        assert_eq!(
            write_matroid(&b),
            "matroid 3 1\nblocks 2: 2 1\ncircuit: 0 1 2\n"
        );
    }
}
