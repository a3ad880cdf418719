//! Cut vectors and exhaustive enumeration over anchored node subsets.
//!
//! A cut is identified by a bit mask over node indices. The node with the
//! greatest label (the anchor) is never in the mask, so each complementary
//! pair `{S, V \ S}` appears exactly once and there are `2^(|V|-1)` cuts.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError, NodeSet};
use crate::inequality::Inequality;
use crate::linalg::IntBasis;

/// Largest graph whose cuts are ever enumerated.
pub const HARD_CAP: usize = 24;
/// Practical limit for facet checks.
pub const FACET_CAP: usize = 20;

const PAR_THRESHOLD: u64 = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CutError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph has {nodes} nodes, cap is {cap}")]
    CapExceeded { nodes: usize, cap: usize },
    #[error("affine rank of an empty list")]
    Empty,
    #[error("cut vectors come from different graphs")]
    MixedGraphs,
}

pub fn check_cap(g: &Graph, cap: usize) -> Result<(), CutError> {
    let cap = cap.min(HARD_CAP);
    if g.node_count() > cap {
        return Err(CutError::CapExceeded {
            nodes: g.node_count(),
            cap,
        });
    }
    Ok(())
}

/// Number of anchored cuts, `2^(n-1)` (one for the empty graph).
pub fn cut_count(g: &Graph) -> u64 {
    1u64 << g.node_count().saturating_sub(1)
}

/// Node set of a mask.
pub fn mask_to_set(g: &Graph, mask: u32) -> NodeSet {
    (0..g.node_count())
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| g.label(i).clone())
        .collect()
}

/// Anchored mask of `s`: complemented if it contains the anchor.
pub fn set_to_mask(g: &Graph, s: &NodeSet) -> Result<u32, CutError> {
    check_cap(g, HARD_CAP)?;
    let mut m = 0u32;
    for l in s {
        m |= 1 << g.require_node(l)?;
    }
    Ok(anchor_mask(g, m))
}

pub fn anchor_mask(g: &Graph, m: u32) -> u32 {
    let n = g.node_count();
    if n == 0 {
        return 0;
    }
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    if m >> (n - 1) & 1 == 1 {
        !m & full
    } else {
        m
    }
}

/// `δ(S)` as 0/1 entries in edge order.
pub fn cut_bits(g: &Graph, mask: u32) -> Vec<i64> {
    g.edge_pairs()
        .iter()
        .map(|&(i, j)| i64::from((mask >> i ^ mask >> j) & 1))
        .collect()
}

/// The incidence vector of the cut set of `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutVector {
    set: NodeSet,
    mask: u32,
    coords: Vec<i64>,
    edges: Vec<Edge>,
}

impl CutVector {
    /// The anchored representative of the source set.
    pub fn set(&self) -> &NodeSet {
        &self.set
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    /// Entries in the graph's edge order.
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn get(&self, e: &Edge) -> Option<i64> {
        self.edges.iter().position(|x| x == e).map(|k| self.coords[k])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    fn from_mask(g: &Graph, mask: u32) -> Self {
        CutVector {
            set: mask_to_set(g, mask),
            mask,
            coords: cut_bits(g, mask),
            edges: g.edges().collect(),
        }
    }
}

pub fn cut_vector(g: &Graph, s: &NodeSet) -> Result<CutVector, CutError> {
    let mask = set_to_mask(g, s)?;
    Ok(CutVector::from_mask(g, mask))
}

/// All `2^(|V|-1)` anchored cut vectors, in mask order.
pub fn enumerate_cuts(g: &Graph) -> Result<impl Iterator<Item = CutVector> + '_, CutError> {
    check_cap(g, HARD_CAP)?;
    Ok((0..cut_count(g)).map(move |m| CutVector::from_mask(g, m as u32)))
}

/// Affine dimension of a nonempty list of cut vectors.
pub fn affine_rank(vectors: &[CutVector]) -> Result<usize, CutError> {
    let first = vectors.first().ok_or(CutError::Empty)?;
    let d = first.coords.len();
    if vectors.iter().any(|v| v.coords.len() != d || v.edges != first.edges) {
        return Err(CutError::MixedGraphs);
    }
    let mut basis = IntBasis::new(d);
    for v in &vectors[1..] {
        let diff: Vec<i64> = v.coords.iter().zip(&first.coords).map(|(a, b)| a - b).collect();
        basis.insert(&diff);
        if basis.rank() == d {
            break;
        }
    }
    Ok(basis.rank())
}

/// Integer-scaled copy of an inequality for fast evaluation at masks.
#[derive(Clone, Debug)]
pub enum CutEvaluator {
    Small {
        terms: Vec<(u32, i64)>,
        rhs: i64,
    },
    Big {
        terms: Vec<(u32, BigInt)>,
        rhs: BigInt,
    },
}

impl CutEvaluator {
    pub fn new(q: &Inequality) -> Self {
        let g = q.graph();
        let (ints, rhs) = q.scaled_integers();
        let edge_mask = |k: usize| {
            let (i, j) = g.edge_pairs()[k];
            (1u32 << i) | (1u32 << j)
        };
        let bound = BigInt::from(1i64 << 62);
        let total: BigInt = ints.values().map(|c| c.abs()).sum::<BigInt>() + rhs.abs();
        if total < bound {
            CutEvaluator::Small {
                terms: ints
                    .iter()
                    .map(|(&k, c)| (edge_mask(k), c.to_i64().expect("bounded")))
                    .collect(),
                rhs: rhs.to_i64().expect("bounded"),
            }
        } else {
            CutEvaluator::Big {
                terms: ints.into_iter().map(|(k, c)| (edge_mask(k), c)).collect(),
                rhs,
            }
        }
    }

    /// Compares `a^T δ(S)` with `a_0` (scaled).
    pub fn compare(&self, mask: u32) -> Ordering {
        match self {
            CutEvaluator::Small { terms, rhs } => {
                let lhs: i64 = terms
                    .iter()
                    .filter(|(em, _)| (mask & em).count_ones() == 1)
                    .map(|(_, c)| c)
                    .sum();
                lhs.cmp(rhs)
            }
            CutEvaluator::Big { terms, rhs } => {
                let mut lhs = BigInt::zero();
                for (em, c) in terms {
                    if (mask & em).count_ones() == 1 {
                        lhs += c;
                    }
                }
                lhs.cmp(rhs)
            }
        }
    }
}

fn filter_masks<F>(count: u64, pred: F) -> Vec<u32>
where
    F: Fn(u32) -> bool + Sync,
{
    if count >= PAR_THRESHOLD {
        // collect keeps the source order, so the result is deterministic
        (0..count)
            .into_par_iter()
            .filter(|&m| pred(m as u32))
            .map(|m| m as u32)
            .collect()
    } else {
        (0..count).map(|m| m as u32).filter(|&m| pred(m)).collect()
    }
}

/// Masks of all anchored roots, ascending.
pub fn root_masks(q: &Inequality, cap: usize) -> Result<Vec<u32>, CutError> {
    let g = q.graph();
    check_cap(g, cap)?;
    let ev = CutEvaluator::new(q);
    Ok(filter_masks(cut_count(g), |m| ev.compare(m) == Ordering::Equal))
}

/// Anchored subsets `S` with `a^T δ(S) = a_0`.
pub fn roots(q: &Inequality) -> Result<Vec<NodeSet>, CutError> {
    let masks = root_masks(q, HARD_CAP)?;
    Ok(masks.into_iter().map(|m| mask_to_set(q.graph(), m)).collect())
}

/// Smallest anchored mask violating the inequality, if any.
pub fn first_violation(q: &Inequality, cap: usize) -> Result<Option<u32>, CutError> {
    let g = q.graph();
    check_cap(g, cap)?;
    let ev = CutEvaluator::new(q);
    let count = cut_count(g);
    let hit = if count >= PAR_THRESHOLD {
        (0..count)
            .into_par_iter()
            .find_first(|&m| ev.compare(m as u32) == Ordering::Greater)
    } else {
        (0..count).find(|&m| ev.compare(m as u32) == Ordering::Greater)
    };
    Ok(hit.map(|m| m as u32))
}
