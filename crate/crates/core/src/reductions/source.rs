//! Source problems of the reductions, validated on construction.

use crate::error::{Error, Result};

/// A 3-CNF formula in which every variable occurs exactly twice positively
/// and twice negatively. Literals use DIMACS conventions: `+v` / `-v` with
/// 1-indexed variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf2p2n {
    n: usize,
    clauses: Vec<[i64; 3]>,
}

impl Cnf2p2n {
    pub fn new(n: usize, clauses: Vec<[i64; 3]>) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(3) {
            return Err(Error::InvalidSource(format!("variable count {n} must be a positive multiple of 3")));
        }
        if clauses.len() * 3 != 4 * n {
            return Err(Error::InvalidSource(format!(
                "{} clauses, expected 4n/3 = {}",
                clauses.len(),
                4 * n / 3
            )));
        }
        let mut pos = vec![0; n];
        let mut neg = vec![0; n];
        for (j, clause) in clauses.iter().enumerate() {
            for (t, &lit) in clause.iter().enumerate() {
                let v = lit.unsigned_abs() as usize;
                if lit == 0 || v > n {
                    return Err(Error::InvalidSource(format!("clause {}: literal {lit} out of range", j + 1)));
                }
                if clause[..t].iter().any(|l| l.unsigned_abs() as usize == v) {
                    return Err(Error::InvalidSource(format!("clause {}: variable {v} appears twice", j + 1)));
                }
                if lit > 0 {
                    pos[v - 1] += 1;
                } else {
                    neg[v - 1] += 1;
                }
            }
        }
        for v in 0..n {
            if pos[v] != 2 || neg[v] != 2 {
                return Err(Error::InvalidSource(format!(
                    "variable {} occurs {} times positively and {} times negatively, expected 2 and 2",
                    v + 1,
                    pos[v],
                    neg[v]
                )));
            }
        }
        Ok(Cnf2p2n { n, clauses })
    }

    pub fn variables(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &[[i64; 3]] {
        &self.clauses
    }

    pub fn satisfies(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.n && self.clauses.iter().all(|c| c.iter().any(|&l| literal_true(l, assignment)))
    }

    /// Number of clauses left unsatisfied.
    pub fn unsatisfied(&self, assignment: &[bool]) -> usize {
        self.clauses.iter().filter(|c| !c.iter().any(|&l| literal_true(l, assignment))).count()
    }
}

pub(crate) fn literal_true(lit: i64, assignment: &[bool]) -> bool {
    assignment[lit.unsigned_abs() as usize - 1] == (lit > 0)
}

/// A simple 3-regular graph on vertices `0..vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph3Reg {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph3Reg {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut degree = vec![0; vertices];
        for (idx, &(u, v)) in edges.iter().enumerate() {
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidSource(format!("edge {}: endpoint out of range", idx + 1)));
            }
            if u == v {
                return Err(Error::InvalidSource(format!("edge {}: self-loop at vertex {}", idx + 1, u + 1)));
            }
            let key = (u.min(v), u.max(v));
            if edges[..idx].iter().any(|&(a, b)| (a.min(b), a.max(b)) == key) {
                return Err(Error::InvalidSource(format!(
                    "edge {}: duplicate edge {} {}",
                    idx + 1,
                    u + 1,
                    v + 1
                )));
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        if let Some(v) = degree.iter().position(|&d| d != 3) {
            return Err(Error::InvalidSource(format!("vertex {} has degree {}, expected 3", v + 1, degree[v])));
        }
        if vertices == 0 {
            return Err(Error::InvalidSource("graph has no vertices".into()));
        }
        Ok(Graph3Reg { vertices, edges })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_cover(&self, cover: &[usize]) -> bool {
        self.edges.iter().all(|(u, v)| cover.contains(u) || cover.contains(v))
    }
}

/// Restricted exact 3-cover: `3k` triples over `0..3k`, every element in
/// exactly three triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rx3cInstance {
    k: usize,
    triples: Vec<[usize; 3]>,
}

impl Rx3cInstance {
    pub fn new(k: usize, triples: Vec<[usize; 3]>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSource("k must be positive".into()));
        }
        if triples.len() != 3 * k {
            return Err(Error::InvalidSource(format!("{} triples, expected 3k = {}", triples.len(), 3 * k)));
        }
        let mut occurrences = vec![0; 3 * k];
        for (t, triple) in triples.iter().enumerate() {
            for (p, &e) in triple.iter().enumerate() {
                if e >= 3 * k {
                    return Err(Error::InvalidSource(format!("triple {}: element {} out of range", t + 1, e + 1)));
                }
                if triple[..p].contains(&e) {
                    return Err(Error::InvalidSource(format!("triple {}: element {} repeated", t + 1, e + 1)));
                }
                occurrences[e] += 1;
            }
        }
        if let Some(e) = occurrences.iter().position(|&c| c != 3) {
            return Err(Error::InvalidSource(format!(
                "element {} appears in {} triples, expected 3",
                e + 1,
                occurrences[e]
            )));
        }
        Ok(Rx3cInstance { k, triples })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    /// Whether the chosen triple indices cover every element exactly once.
    pub fn is_exact_cover(&self, chosen: &[usize]) -> bool {
        let mut seen = vec![false; 3 * self.k];
        for &t in chosen {
            let Some(triple) = self.triples.get(t) else { return false };
            for &e in triple {
                if seen[e] {
                    return false;
                }
                seen[e] = true;
            }
        }
        seen.iter().all(|&s| s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fixture_formula() -> Cnf2p2n {
        Cnf2p2n::new(3, vec![[1, 2, 3], [1, -2, -3], [-1, 2, -3], [-1, -2, 3]]).unwrap()
    }

    #[test]
    fn fixture_formula_is_satisfiable_by_all_true() {
        let phi = fixture_formula();
        assert!(phi.satisfies(&[true, true, true]));
        // exhaustive oracle over all 8 assignments
        let count = (0..8u32)
            .filter(|bits| phi.satisfies(&[bits & 1 != 0, bits & 2 != 0, bits & 4 != 0]))
            .count();
        assert_eq!(count, 4);
    }

    #[test]
    fn rejects_wrong_occurrence_counts() {
        let err = Cnf2p2n::new(3, vec![[1, 2, 3], [1, 2, -3], [-1, 2, -3], [-1, -2, 3]]).unwrap_err();
        assert!(matches!(err, Error::InvalidSource(_)));
        assert!(Cnf2p2n::new(3, vec![[1, 1, 3], [1, -2, -3], [-1, 2, -3], [-1, -2, 3]]).is_err());
    }

    #[test]
    fn k33_is_three_regular() {
        let edges = (0..3).flat_map(|u| (3..6).map(move |v| (u, v))).collect();
        let g = Graph3Reg::new(6, edges).unwrap();
        assert!(g.is_cover(&[0, 1, 2]));
        assert!(!g.is_cover(&[0, 1, 3]));
        assert!(Graph3Reg::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).is_err());
    }

    #[test]
    fn rx3c_validation() {
        let r = Rx3cInstance::new(1, vec![[0, 1, 2]; 3]).unwrap();
        assert!(r.is_exact_cover(&[0]));
        assert!(!r.is_exact_cover(&[0, 1]));
        assert!(Rx3cInstance::new(1, vec![[0, 1, 2]; 2]).is_err());
        assert!(Rx3cInstance::new(1, vec![[0, 0, 2]; 3]).is_err());
    }
}
