//! Named inequality families: triangle, cycle, pentagonal, hypermetric.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::cut::HARD_CAP;
use crate::graph::{Edge, Graph, GraphError, Label};
use crate::inequality::{rat, FormKind, IneqError, Inequality, TriangularForm};
use crate::verify::{self, VerifyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ineq(#[from] IneqError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("F must have odd size, got {0}")]
    EvenF(usize),
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("edge {0} of F is not on the cycle")]
    NotOnCycle(Edge),
    #[error("hypermetric weights must sum to 1, got {0}")]
    BadWeightSum(i64),
    #[error("generated {0} inequality failed its validity re-check")]
    FailedValidity(&'static str),
    #[error("invalid family parameters: {0}")]
    Parameters(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    /// `Δ(u,v;w) <= 0` on `K_3`.
    Triangle,
    /// Cycle `1, ..., n` in `C_n`; `odd` lists 1-based edge positions, edge
    /// `i` joining nodes `i` and `i+1` (edge `n` closes the cycle).
    Cycle { n: usize, odd: Vec<usize> },
    Pentagonal,
    Hypermetric { b: Vec<i64> },
}

impl FamilySpec {
    pub fn build(&self) -> Result<Inequality, CatalogError> {
        match self {
            FamilySpec::Triangle => {
                let g = Arc::new(Graph::complete(3));
                make_triangle(g, FormKind::PlusUv, &lbl("1"), &lbl("2"), &lbl("3"))
            }
            FamilySpec::Cycle { n, odd } => {
                if *n < 3 {
                    return Err(CatalogError::Parameters(format!("cycle length {n} < 3")));
                }
                let g = Arc::new(Graph::cycle(*n));
                let nodes: Vec<Label> = (1..=*n).map(|i| lbl(&i.to_string())).collect();
                let mut f = BTreeSet::new();
                for &i in odd {
                    if i == 0 || i > *n {
                        return Err(CatalogError::Parameters(format!(
                            "edge position {i} outside 1..{n}"
                        )));
                    }
                    f.insert(Edge::new(nodes[i - 1].clone(), nodes[i % n].clone())?);
                }
                make_cycle(g, &nodes, &f)
            }
            FamilySpec::Pentagonal => Ok(make_pentagonal()),
            FamilySpec::Hypermetric { b } => make_hypermetric(b),
        }
    }
}

fn lbl(s: &str) -> Label {
    crate::graph::label(s)
}

/// A single triangular form as the inequality `Δ <= 0` on `g`.
pub fn make_triangle(
    g: Arc<Graph>,
    kind: FormKind,
    u: &Label,
    v: &Label,
    w: &Label,
) -> Result<Inequality, CatalogError> {
    let f = TriangularForm::new(kind, u.clone(), v.clone(), w.clone()).expand()?;
    Ok(Inequality::zero(g).add_form(&rat(1), &f)?)
}

/// `Σ_{e∈F} x_e - Σ_{e∈C\F} x_e <= |F| - 1` for the cycle through `cycle`
/// in order.
pub fn make_cycle(
    g: Arc<Graph>,
    cycle: &[Label],
    f: &BTreeSet<Edge>,
) -> Result<Inequality, CatalogError> {
    let k = cycle.len();
    if k < 3 {
        return Err(CatalogError::NotACycle(format!("{k} nodes")));
    }
    let distinct: BTreeSet<&Label> = cycle.iter().collect();
    if distinct.len() != k {
        return Err(CatalogError::NotACycle("repeated node".into()));
    }
    if f.len() % 2 == 0 {
        return Err(CatalogError::EvenF(f.len()));
    }
    let mut edges = BTreeSet::new();
    for i in 0..k {
        let (a, b) = (&cycle[i], &cycle[(i + 1) % k]);
        if !g.has_edge(a, b) {
            return Err(CatalogError::NotACycle(format!("{a}-{b} is not an edge")));
        }
        edges.insert(Edge::new(a.clone(), b.clone())?);
    }
    if let Some(e) = f.iter().find(|e| !edges.contains(*e)) {
        return Err(CatalogError::NotOnCycle(e.clone()));
    }
    let terms = edges.iter().map(|e| {
        let c = if f.contains(e) { 1 } else { -1 };
        (e.lo().clone(), e.hi().clone(), rat(c))
    });
    Ok(Inequality::from_terms(g, terms, rat(f.len() as i64 - 1))?)
}

/// `x_12 + x_34 + x_35 + x_45 - Σ_{u∈{1,2}, v∈{3,4,5}} x_uv <= 0` on `K_5`.
pub fn make_pentagonal() -> Inequality {
    let mut t = vec![("1", "2", 1), ("3", "4", 1), ("3", "5", 1), ("4", "5", 1)];
    for u in ["1", "2"] {
        for v in ["3", "4", "5"] {
            t.push((u, v, -1));
        }
    }
    Inequality::from_ints(Arc::new(Graph::complete(5)), &t, 0).expect("pentagonal literal")
}

/// `Σ_{i<j} b_i b_j x_ij <= 0` on `K_n`, `n = b.len()`, for `Σ b_i = 1`.
///
/// The result is re-checked by enumeration (up to the enumeration cap)
/// before it is returned.
pub fn make_hypermetric(b: &[i64]) -> Result<Inequality, CatalogError> {
    let sum: i64 = b.iter().sum();
    if sum != 1 {
        return Err(CatalogError::BadWeightSum(sum));
    }
    let n = b.len();
    let g = Arc::new(Graph::complete(n));
    let mut terms = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            terms.push((g.label(i).clone(), g.label(j).clone(), rat(b[i] * b[j])));
        }
    }
    let q = Inequality::from_terms(g, terms, rat(0))?;
    if n <= HARD_CAP && !verify::is_valid(&q)? {
        return Err(CatalogError::FailedValidity("hypermetric"));
    }
    Ok(q)
}
