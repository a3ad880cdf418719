//! Brute-force ground truth: validity, facetness with certificates, the
//! degree-2 pruning test, and a hull oracle for tiny graphs.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cut::{self, CutError, FACET_CAP, HARD_CAP};
use crate::graph::{Graph, Label, NodeSet};
use crate::inequality::{IneqError, Inequality, Rational};
use crate::linalg::{null_vector, rank_exact, IntBasis, RationalMatrix};

/// Hull oracle limits.
pub const HULL_MAX_EDGES: usize = 12;
pub const HULL_MAX_NODES: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error(transparent)]
    Ineq(#[from] IneqError),
    #[error("inequality is not valid: violated at S = {}", fmt_set(.violating))]
    Invalid { violating: NodeSet },
    #[error("hull oracle needs |E| <= {HULL_MAX_EDGES} and |V| <= {HULL_MAX_NODES}, got |E| = {edges}, |V| = {nodes}")]
    HullCap { edges: usize, nodes: usize },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub fn fmt_set(s: &NodeSet) -> String {
    let items: Vec<String> = s.iter().map(Label::to_string).collect();
    format!("{{{}}}", items.join(","))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validity {
    pub valid: bool,
    /// Anchored violating set with the smallest mask.
    pub violating: Option<NodeSet>,
}

pub fn check_validity(q: &Inequality, cap: usize) -> Result<Validity, VerifyError> {
    let hit = cut::first_violation(q, cap)?;
    Ok(Validity {
        valid: hit.is_none(),
        violating: hit.map(|m| cut::mask_to_set(q.graph(), m)),
    })
}

/// `a^T δ(S) <= a_0` for every cut.
pub fn is_valid(q: &Inequality) -> Result<bool, VerifyError> {
    Ok(check_validity(q, HARD_CAP)?.valid)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetCertificate {
    /// Affinely independent roots, `affine_dim + 1` of them.
    pub roots: Vec<NodeSet>,
    /// Affine dimension of the full root set (`-1` when there are none).
    pub affine_dim: i64,
    /// `|E| - 1`.
    pub need: i64,
}

impl FacetCertificate {
    pub fn is_facet(&self) -> bool {
        self.affine_dim == self.need
    }

    /// Re-checks the certificate from scratch: every listed set is a root
    /// and the listed roots have the claimed affine dimension.
    pub fn verify(&self, q: &Inequality) -> Result<bool, VerifyError> {
        let g = q.graph();
        let mut rows = Vec::new();
        for s in &self.roots {
            if q.evaluate(s) != *q.rhs() {
                return Ok(false);
            }
            let m = cut::set_to_mask(g, s)?;
            let mut row: Vec<i64> = cut::cut_bits(g, m);
            row.push(1);
            rows.push(row);
        }
        let rank = rank_exact(&RationalMatrix::from_int_rows(&rows)) as i64;
        Ok(rank == self.roots.len() as i64 && rank - 1 == self.affine_dim)
    }
}

/// Facet test with the default cap.
pub fn is_facet(q: &Inequality) -> Result<(bool, FacetCertificate), VerifyError> {
    facet_check(q, FACET_CAP)
}

/// Valid inequalities only; the affine dimension of the roots decides.
pub fn facet_check(q: &Inequality, cap: usize) -> Result<(bool, FacetCertificate), VerifyError> {
    let validity = check_validity(q, cap.min(FACET_CAP))?;
    if let Some(violating) = validity.violating {
        return Err(VerifyError::Invalid { violating });
    }
    let g = q.graph();
    let e = g.edge_count();
    let need = e as i64 - 1;
    let masks = cut::root_masks(q, cap.min(FACET_CAP))?;

    // 0 <= a_0 with a_0 >= 0: every cut is a root (or none), no facet
    let trivial = q.edge_coeffs().is_empty();
    let full = if trivial { e + 1 } else { e };

    let mut basis = IntBasis::new(e + 1);
    let mut chosen = Vec::new();
    for &m in &masks {
        let mut row = cut::cut_bits(g, m);
        row.push(1);
        if basis.insert(&row) {
            chosen.push(m);
            if basis.rank() == full {
                break;
            }
        }
    }
    let affine_dim = basis.rank() as i64 - 1;

    if q.rhs().is_zero() && !trivial {
        // cone check: linear rank of the roots must match
        let mut lin = IntBasis::new(e);
        for &m in &masks {
            lin.insert(&cut::cut_bits(g, m));
            if lin.rank() + 1 == e.max(1) {
                break;
            }
        }
        let lin_dim = lin.rank() as i64;
        let capped = affine_dim.min(need.max(0));
        if lin_dim.min(need.max(0)) != capped {
            return Err(VerifyError::Internal(format!(
                "cone rank {lin_dim} disagrees with polytope dimension {affine_dim}"
            )));
        }
    }

    let cert = FacetCertificate {
        roots: chosen.into_iter().map(|m| cut::mask_to_set(g, m)).collect(),
        affine_dim,
        need,
    };
    debug_assert!(cert.verify(q).unwrap_or(false));
    Ok((cert.is_facet(), cert))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degree2Verdict {
    /// Apex `l` of triangle `l,u,v` makes the degree-2 pruning applicable.
    NotFacet { l: Label, u: Label, v: Label },
    Inconclusive,
}

/// Looks for a triangle `l,u,v` where `a_lu` or `a_lv` is nonzero and every
/// other edge at `l` has coefficient zero; such an inequality is not a facet
/// unless it is the triangle inequality on `l,u,v`.
pub fn degree2_prune(q: &Inequality) -> Degree2Verdict {
    let g = q.graph();
    let tri = q.triangle_nodes().map(|t| t.into_iter().collect::<BTreeSet<_>>());
    let coef = |i: usize, j: usize| {
        g.edge_id_by_index(i, j)
            .map(|k| q.coeff_at(k))
            .unwrap_or_else(Rational::zero)
    };
    for l in 0..g.node_count() {
        let nbrs = g.neighbor_indices(l);
        let support: Vec<usize> = nbrs.iter().copied().filter(|&i| !coef(l, i).is_zero()).collect();
        if support.is_empty() || support.len() > 2 {
            continue;
        }
        for (x, &u) in nbrs.iter().enumerate() {
            for &v in &nbrs[x + 1..] {
                if g.edge_id_by_index(u, v).is_none() {
                    continue;
                }
                if !support.iter().all(|&i| i == u || i == v) {
                    continue;
                }
                let (ll, lu, lv) = (g.label(l), g.label(u), g.label(v));
                let nodes: BTreeSet<Label> = [ll.clone(), lu.clone(), lv.clone()].into();
                if tri.as_ref() == Some(&nodes) {
                    continue;
                }
                return Degree2Verdict::NotFacet {
                    l: ll.clone(),
                    u: lu.clone(),
                    v: lv.clone(),
                };
            }
        }
    }
    Degree2Verdict::Inconclusive
}

/// Every facet of `CUT□(G)` for tiny `G`.
///
/// Facets through the origin are the homogeneous hyperplanes spanned by
/// `|E| - 1` independent nonzero cut vectors on which all cuts lie on one
/// side; every other facet is a switching of one of those. Spanning sets are
/// enumerated as greedy (lexicographically first) bases so each hyperplane
/// is produced once.
pub fn hull_oracle(g: &Graph) -> Result<Vec<Inequality>, VerifyError> {
    let e = g.edge_count();
    let n = g.node_count();
    if e > HULL_MAX_EDGES || n > HULL_MAX_NODES {
        return Err(VerifyError::HullCap { edges: e, nodes: n });
    }
    if e == 0 {
        return Ok(Vec::new());
    }
    let count = cut::cut_count(g) as u32;
    let cuts: Vec<Vec<i64>> = (0..count).map(|m| cut::cut_bits(g, m)).collect();
    let nonzero: Vec<usize> = (1..count as usize).collect();

    let mut normals: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    let mut search = HyperplaneSearch {
        cuts: &cuts,
        order: &nonzero,
        dim: e,
        chosen: Vec::new(),
        skipped: Vec::new(),
        out: &mut normals,
    };
    search.run(0, IntBasis::new(e));

    let graph = Arc::new(g.clone());
    let mut facets: BTreeSet<(Vec<BigInt>, BigInt)> = BTreeSet::new();
    for a in normals {
        // homogeneous facet a·x <= 0
        let base = Inequality::from_edge_map(
            graph.clone(),
            a.iter()
                .enumerate()
                .map(|(k, c)| (k, Rational::from_integer(c.clone())))
                .collect(),
            Rational::zero(),
        );
        for m in 0..count {
            let s = cut::mask_to_set(g, m);
            let sw = base.switch(&s)?.normalize();
            facets.insert(dense_key(&sw));
        }
    }
    let out = facets
        .into_iter()
        .map(|(coeffs, rhs)| {
            Inequality::from_edge_map(
                graph.clone(),
                coeffs
                    .into_iter()
                    .enumerate()
                    .map(|(k, c)| (k, Rational::from_integer(c)))
                    .collect(),
                Rational::from_integer(rhs),
            )
        })
        .collect();
    Ok(out)
}

fn dense_key(q: &Inequality) -> (Vec<BigInt>, BigInt) {
    let (ints, rhs) = q.scaled_integers();
    let dense = (0..q.graph().edge_count())
        .map(|k| ints.get(&k).cloned().unwrap_or_else(BigInt::zero))
        .collect();
    (dense, rhs)
}

struct HyperplaneSearch<'a> {
    cuts: &'a [Vec<i64>],
    order: &'a [usize],
    dim: usize,
    chosen: Vec<usize>,
    /// Cuts skipped while independent of the chosen prefix; they must stay
    /// outside the final span for the basis to be greedy.
    skipped: Vec<usize>,
    out: &'a mut BTreeSet<Vec<BigInt>>,
}

impl HyperplaneSearch<'_> {
    fn run(&mut self, pos: usize, basis: IntBasis) {
        if self.skipped.iter().any(|&c| basis.contains(&self.cuts[c])) {
            return;
        }
        if basis.rank() + 1 == self.dim {
            // later cuts in the span would be skipped by the greedy pass too
            self.emit();
            return;
        }
        if pos == self.order.len() {
            return;
        }
        let c = self.order[pos];
        let v = &self.cuts[c];
        if basis.contains(v) {
            self.run(pos + 1, basis);
            return;
        }
        let mut with = basis.clone();
        with.insert(v);
        self.chosen.push(c);
        self.run(pos + 1, with);
        self.chosen.pop();

        self.skipped.push(c);
        self.run(pos + 1, basis);
        self.skipped.pop();
    }

    fn emit(&mut self) {
        let rows: Vec<Vec<BigInt>> = self
            .chosen
            .iter()
            .map(|&c| self.cuts[c].iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let Some(normal) = null_vector(&rows, self.dim) else {
            return;
        };
        let mut pos = false;
        let mut neg = false;
        for v in self.cuts {
            let d: BigInt = v.iter().zip(&normal).map(|(&x, a)| a * x).sum();
            pos |= d.is_positive();
            neg |= d.is_negative();
        }
        if pos && neg {
            return;
        }
        // orient so that every cut satisfies a·x <= 0
        let normal = if pos {
            normal.into_iter().map(|x| -x).collect()
        } else {
            normal
        };
        self.out.insert(normal);
    }
}
