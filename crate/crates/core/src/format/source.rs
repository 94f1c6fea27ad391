//! Line-oriented source formats: DIMACS CNF, `p graph` edge lists, exact
//! cover triples, and the matching witness files.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::reductions::{Cnf2p2n, Graph3Reg, Rx3cInstance, WitnessData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceKind {
    Cnf2p2n,
    Graph3Reg,
    Rx3c,
}

impl SourceKind {
    pub fn name(self) -> &'static str {
        match self {
            SourceKind::Cnf2p2n => "cnf2p2n",
            SourceKind::Graph3Reg => "graph3reg",
            SourceKind::Rx3c => "rx3c",
        }
    }
}

impl fmt::Display for SourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SourceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cnf2p2n" => Ok(SourceKind::Cnf2p2n),
            "graph3reg" => Ok(SourceKind::Graph3Reg),
            "rx3c" => Ok(SourceKind::Rx3c),
            other => Err(Error::InvalidInput(format!("unknown source kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Cnf(Cnf2p2n),
    Graph(Graph3Reg),
    Rx3c(Rx3cInstance),
}

pub fn parse_source(kind: SourceKind, text: &str) -> Result<Source> {
    Ok(match kind {
        SourceKind::Cnf2p2n => Source::Cnf(parse_cnf(text)?),
        SourceKind::Graph3Reg => Source::Graph(parse_graph(text)?),
        SourceKind::Rx3c => Source::Rx3c(parse_rx3c(text)?),
    })
}

/// Non-empty, non-comment lines with their 1-based numbers. `c` starts a
/// comment line as in DIMACS; `#` is accepted too.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| {
        !l.is_empty() && !l.starts_with('#') && !(l.starts_with('c') && (l.len() == 1 || l.as_bytes()[1] == b' '))
    })
}

fn int<T: FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::parse(line, format!("expected an integer, found '{tok}'")))
}

/// DIMACS CNF with header `p cnf n m`; each clause ends in `0` and may span
/// lines. The formula must be a 2P2N 3-CNF.
pub fn parse_cnf(text: &str) -> Result<Cnf2p2n> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing 'p cnf' header"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 || h[0] != "p" || h[1] != "cnf" {
        return Err(Error::parse(hline, format!("expected 'p cnf <vars> <clauses>', found '{header}'")));
    }
    let n: usize = int(hline, h[2])?;
    let m: usize = int(hline, h[3])?;
    let mut clauses = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut start_line = hline;
    let mut last = hline;
    for (ln, line) in lines {
        last = ln;
        if line.starts_with('%') {
            break;
        }
        for tok in line.split_whitespace() {
            if current.is_empty() {
                start_line = ln;
            }
            let lit: i64 = int(ln, tok)?;
            if lit == 0 {
                let clause: [i64; 3] = current
                    .as_slice()
                    .try_into()
                    .map_err(|_| Error::parse(start_line, format!("clause has {} literals, expected 3", current.len())))?;
                if clause.iter().any(|l| l.unsigned_abs() as usize > n) {
                    return Err(Error::parse(start_line, format!("literal out of range 1..={n}")));
                }
                clauses.push(clause);
                current.clear();
            } else {
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        return Err(Error::parse(last, "last clause is not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(Error::parse(hline, format!("header declares {m} clauses, found {}", clauses.len())));
    }
    Cnf2p2n::new(n, clauses)
}

/// Header `p graph |V| |E|`, then one 1-indexed `u v` edge per line.
pub fn parse_graph(text: &str) -> Result<Graph3Reg> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing 'p graph' header"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 || h[0] != "p" || h[1] != "graph" {
        return Err(Error::parse(hline, format!("expected 'p graph <vertices> <edges>', found '{header}'")));
    }
    let nv: usize = int(hline, h[2])?;
    let ne: usize = int(hline, h[3])?;
    let mut edges = Vec::new();
    for (ln, line) in lines {
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 2 {
            return Err(Error::parse(ln, format!("expected 'u v', found '{line}'")));
        }
        let (u, v): (usize, usize) = (int(ln, t[0])?, int(ln, t[1])?);
        if u == 0 || v == 0 || u > nv || v > nv {
            return Err(Error::parse(ln, format!("vertex out of range 1..={nv}")));
        }
        edges.push((u - 1, v - 1));
    }
    if edges.len() != ne {
        return Err(Error::parse(hline, format!("header declares {ne} edges, found {}", edges.len())));
    }
    Graph3Reg::new(nv, edges)
}

/// First line `k`, then `3k` lines of three 1-indexed elements.
pub fn parse_rx3c(text: &str) -> Result<Rx3cInstance> {
    let mut lines = content_lines(text);
    let (kline, first) = lines.next().ok_or_else(|| Error::parse(1, "missing k"))?;
    let k: usize = int(kline, first)?;
    let mut triples = Vec::new();
    for (ln, line) in lines {
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 3 {
            return Err(Error::parse(ln, format!("expected three elements, found '{line}'")));
        }
        let mut triple = [0usize; 3];
        for (slot, tok) in triple.iter_mut().zip(&t) {
            let e: usize = int(ln, tok)?;
            if e == 0 || e > 3 * k {
                return Err(Error::parse(ln, format!("element out of range 1..={}", 3 * k)));
            }
            *slot = e - 1;
        }
        triples.push(triple);
    }
    Rx3cInstance::new(k, triples)
}

/// All integers of a witness file, skipping comment lines and DIMACS `s`
/// status lines, and the `v` prefix of model lines.
fn witness_ints(text: &str) -> Result<Vec<(usize, i64)>> {
    let mut out = Vec::new();
    for (ln, line) in content_lines(text) {
        if line.starts_with('s') {
            continue;
        }
        let body = line.strip_prefix('v').unwrap_or(line);
        for tok in body.split_whitespace() {
            out.push((ln, int(ln, tok)?));
        }
    }
    Ok(out)
}

/// Truth assignment as a DIMACS model (`v 1 -2 3 0`); every variable must
/// appear exactly once.
pub fn parse_assignment(text: &str, variables: usize) -> Result<Vec<bool>> {
    let mut sigma: Vec<Option<bool>> = vec![None; variables];
    for (ln, lit) in witness_ints(text)? {
        if lit == 0 {
            continue;
        }
        let v = lit.unsigned_abs() as usize;
        if v > variables {
            return Err(Error::parse(ln, format!("variable {v} out of range 1..={variables}")));
        }
        if sigma[v - 1].replace(lit > 0).is_some() {
            return Err(Error::parse(ln, format!("variable {v} assigned twice")));
        }
    }
    sigma
        .iter()
        .enumerate()
        .map(|(v, s)| s.ok_or_else(|| Error::InvalidWitness(format!("variable {} has no value", v + 1))))
        .collect()
}

/// 1-indexed ids (vertices or triples) converted to 0-indexed.
pub fn parse_index_list(text: &str, limit: usize) -> Result<Vec<usize>> {
    witness_ints(text)?
        .into_iter()
        .map(|(ln, x)| {
            if x < 1 || x as usize > limit {
                Err(Error::parse(ln, format!("index {x} out of range 1..={limit}")))
            } else {
                Ok(x as usize - 1)
            }
        })
        .collect()
}

/// Reads a witness file in the shape the source calls for.
pub fn parse_witness(source: &crate::reductions::SourceRef, text: &str) -> Result<WitnessData> {
    use crate::reductions::SourceRef;
    Ok(match source {
        SourceRef::Cnf(phi) => WitnessData::Assignment(parse_assignment(text, phi.variables())?),
        SourceRef::Graph { graph, .. } => WitnessData::VertexCover(parse_index_list(text, graph.vertices())?),
        SourceRef::Rx3c(r) => WitnessData::ExactCover(parse_index_list(text, r.triples().len())?),
    })
}

/// DIMACS text of a formula.
pub fn write_cnf(phi: &Cnf2p2n) -> String {
    let mut out = format!("p cnf {} {}\n", phi.variables(), phi.clauses().len());
    for c in phi.clauses() {
        out.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
    }
    out
}
