//! Fractional matching and covering on finite hypergraphs, and the
//! incidence game tying their common optimum to a game value.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{FiniteGame, MixedStrategy};
use crate::lp::simplex_max;
use crate::rational::{rat_u64, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    vertices: Vec<String>,
    /// 1-based vertex indices; every edge is non-empty.
    edges: Vec<BTreeSet<u64>>,
}

impl Hypergraph {
    pub fn new(vertices: Vec<String>, edges: Vec<BTreeSet<u64>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Domain("hypergraph needs at least one vertex".into()));
        }
        let distinct: BTreeSet<&String> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::Domain("vertex labels repeat".into()));
        }
        let n = vertices.len() as u64;
        for (j, edge) in edges.iter().enumerate() {
            if edge.is_empty() {
                return Err(Error::Domain(format!("edge #{} is empty", j + 1)));
            }
            if edge.first() == Some(&0) || edge.last() > Some(&n) {
                return Err(Error::Domain(format!(
                    "edge #{} uses vertices outside 1..={n}",
                    j + 1
                )));
            }
        }
        Ok(Hypergraph { vertices, edges })
    }

    /// Edges given by vertex label instead of index.
    pub fn from_labels(vertices: Vec<String>, edges: Vec<Vec<String>>) -> Result<Self> {
        let index: BTreeMap<&String, u64> =
            vertices.iter().enumerate().map(|(i, v)| (v, i as u64 + 1)).collect();
        let resolved = edges
            .iter()
            .enumerate()
            .map(|(j, edge)| {
                edge.iter()
                    .map(|label| {
                        index.get(label).copied().ok_or_else(|| {
                            Error::Domain(format!("edge #{} names unknown vertex {label:?}", j + 1))
                        })
                    })
                    .collect::<Result<BTreeSet<u64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Hypergraph::new(vertices, resolved)
    }

    pub fn n_vertices(&self) -> u64 {
        self.vertices.len() as u64
    }

    pub fn n_edges(&self) -> u64 {
        self.edges.len() as u64
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[BTreeSet<u64>] {
        &self.edges
    }
}

/// Vertices {1..n} with the tail edges E_j = {j, j+1, ..., n}. Vertex n
/// lies in every edge and the singleton edge {n} needs full cover mass,
/// pinning both fractional optima at 1.
pub fn tail_hypergraph(n: u64) -> Result<Hypergraph> {
    if n == 0 {
        return Err(Error::Domain("tail hypergraph needs at least one vertex".into()));
    }
    Hypergraph::new(
        (1..=n).map(|v| v.to_string()).collect(),
        (1..=n).map(|j| (j..=n).collect()).collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    Matching,
    Cover,
}

impl fmt::Display for SolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolutionKind::Matching => "matching",
            SolutionKind::Cover => "cover",
        })
    }
}

/// Nonnegative weights on edges (matching) or vertices (cover); only
/// positive entries are stored and `size` is their sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalSolution {
    pub kind: SolutionKind,
    pub weights: BTreeMap<u64, Rat>,
    pub size: Rat,
}

impl FractionalSolution {
    fn collect(kind: SolutionKind, weights: &[Rat]) -> Result<Self> {
        if weights.iter().any(|w| w < &Rat::zero()) {
            return Err(Error::Domain("fractional weights must be nonnegative".into()));
        }
        let weights: BTreeMap<u64, Rat> = weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(i, w)| (i as u64 + 1, w.clone()))
            .collect();
        let size = weights.values().cloned().sum();
        Ok(FractionalSolution { kind, weights, size })
    }

    pub fn validate(&self, h: &Hypergraph) -> Result<()> {
        let total: Rat = self.weights.values().cloned().sum();
        if total != self.size {
            return Err(Error::Domain("solution size is not the weight sum".into()));
        }
        if self.weights.values().any(|w| w <= &Rat::zero()) {
            return Err(Error::Domain("stored weights must be positive".into()));
        }
        match self.kind {
            SolutionKind::Matching => {
                if self.weights.keys().any(|&e| e == 0 || e > h.n_edges()) {
                    return Err(Error::Domain("matching weight on unknown edge".into()));
                }
                for v in 1..=h.n_vertices() {
                    let load: Rat = h
                        .edges()
                        .iter()
                        .enumerate()
                        .filter(|(_, edge)| edge.contains(&v))
                        .filter_map(|(j, _)| self.weights.get(&(j as u64 + 1)))
                        .cloned()
                        .sum();
                    if load > Rat::one() {
                        return Err(Error::Domain(format!("vertex {v} is overloaded")));
                    }
                }
            }
            SolutionKind::Cover => {
                if self.weights.keys().any(|&v| v == 0 || v > h.n_vertices()) {
                    return Err(Error::Domain("cover weight on unknown vertex".into()));
                }
                for (j, edge) in h.edges().iter().enumerate() {
                    let got: Rat =
                        edge.iter().filter_map(|v| self.weights.get(v)).cloned().sum();
                    if got < Rat::one() {
                        return Err(Error::Domain(format!("edge #{} is uncovered", j + 1)));
                    }
                }
            }
        }
        Ok(())
    }
}

fn matching_lp(h: &Hypergraph) -> Result<(Rat, Vec<Rat>, Vec<Rat>)> {
    let n = h.n_vertices() as usize;
    let m = h.n_edges() as usize;
    let a: Vec<Vec<Rat>> = (1..=h.n_vertices())
        .map(|v| h.edges().iter().map(|e| rat_u64(e.contains(&v) as u64)).collect())
        .collect();
    let solution = simplex_max(&a, &vec![Rat::one(); n], &vec![Rat::one(); m])?;
    Ok((solution.objective, solution.y, solution.dual))
}

/// Maximum fractional matching size with an optimal matching. An empty
/// edge list yields 0 with the empty matching.
pub fn nu_star(h: &Hypergraph) -> Result<(Rat, FractionalSolution)> {
    if h.edges().is_empty() {
        return Ok((
            Rat::zero(),
            FractionalSolution {
                kind: SolutionKind::Matching,
                weights: BTreeMap::new(),
                size: Rat::zero(),
            },
        ));
    }
    let (objective, f, _) = matching_lp(h)?;
    let matching = FractionalSolution::collect(SolutionKind::Matching, &f)?;
    matching.validate(h)?;
    if matching.size != objective {
        return Err(Error::Internal("matching size is off its LP objective".into()));
    }
    Ok((objective, matching))
}

/// Minimum fractional cover size with an optimal cover, read off the dual
/// of the matching LP; always equals the matching optimum. An empty edge
/// list yields 0 with the empty cover.
pub fn tau_star(h: &Hypergraph) -> Result<(Rat, FractionalSolution)> {
    if h.edges().is_empty() {
        return Ok((
            Rat::zero(),
            FractionalSolution {
                kind: SolutionKind::Cover,
                weights: BTreeMap::new(),
                size: Rat::zero(),
            },
        ));
    }
    let (objective, _, g) = matching_lp(h)?;
    let cover = FractionalSolution::collect(SolutionKind::Cover, &g)?;
    cover.validate(h)?;
    if cover.size != objective {
        return Err(Error::Internal("cover size is off its LP objective".into()));
    }
    Ok((objective, cover))
}

/// The incidence game: rows are vertices, columns are edges, and the row
/// player wins when the vertex lies in the edge.
pub fn game_of_hypergraph(h: &Hypergraph) -> Result<FiniteGame> {
    if h.edges().is_empty() {
        return Err(Error::Domain("incidence game needs at least one edge".into()));
    }
    let payoff = (1..=h.n_vertices())
        .map(|v| h.edges().iter().map(|e| rat_u64(e.contains(&v) as u64)).collect())
        .collect();
    FiniteGame::new(
        h.vertex_labels().to_vec(),
        (1..=h.n_edges()).map(|j| j.to_string()).collect(),
        payoff,
    )
}

/// Normalizes a fractional cover into the vertex strategy p_v = g(v)/|g|.
pub fn cover_to_strategy(g: &FractionalSolution) -> Result<MixedStrategy> {
    if g.kind != SolutionKind::Cover {
        return Err(Error::Domain("expected a cover solution".into()));
    }
    if g.size <= Rat::zero() {
        return Err(Error::Domain("cover has no mass to normalize".into()));
    }
    MixedStrategy::new(
        g.weights.iter().map(|(&v, w)| (v, w / &g.size)).collect(),
    )
}

/// Scales a strategy guaranteeing payoff >= alpha against every edge into
/// the cover g(v) = p_v/alpha of size 1/alpha. The guarantee is checked
/// per edge and its failure reported with the violating edge.
pub fn strategy_to_cover(
    h: &Hypergraph,
    p: &MixedStrategy,
    alpha: &Rat,
) -> Result<FractionalSolution> {
    if alpha <= &Rat::zero() {
        return Err(Error::Domain(format!("alpha = {alpha} must be positive")));
    }
    if p.support().last().is_some_and(|&v| v > h.n_vertices()) {
        return Err(Error::Domain("strategy names vertices outside the hypergraph".into()));
    }
    for (j, edge) in h.edges().iter().enumerate() {
        let achieved: Rat =
            p.iter().filter(|(v, _)| edge.contains(*v)).map(|(_, w)| w.clone()).sum();
        if achieved < *alpha {
            return Err(Error::ContractViolated { edge: j as u64 + 1, achieved });
        }
    }
    let weights: BTreeMap<u64, Rat> = p.iter().map(|(&v, w)| (v, w / alpha)).collect();
    let size = Rat::one() / alpha;
    let cover = FractionalSolution { kind: SolutionKind::Cover, weights, size };
    cover.validate(h)?;
    Ok(cover)
}
