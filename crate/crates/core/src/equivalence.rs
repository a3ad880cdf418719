//! Permutation-switching equivalence on complete and complete multipartite
//! graphs, whose automorphism groups are generated directly from the parts.

use std::collections::{BTreeMap, VecDeque};

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::cut;
use crate::graph::{Graph, Label, NodeSet};
use crate::inequality::{IneqError, Inequality, Rational};
use crate::permutation::Permutation;
use crate::verify::{self, VerifyError};

/// Upper bound on `|Aut(G)| · 2^(n-1)` for exhaustive orbit searches.
pub const SEARCH_BUDGET: u128 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquivError {
    #[error(transparent)]
    Ineq(#[from] IneqError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("unsupported graph {0}: only complete and complete multipartite graphs are handled")]
    UnsupportedGraph(String),
    #[error("search budget exceeded: {group} automorphisms x {switchings} switchings > {SEARCH_BUDGET}")]
    BudgetExceeded { group: u128, switchings: u128 },
    #[error("inequalities live on different graphs ({0} vs {1})")]
    GraphMismatch(String, String),
    #[error("coefficients too large for the orbit search")]
    Overflow,
    #[error(
        "triangle inequality rejected: the bipartite criterion excludes triangle inequalities, \
         whose eliminations can be equivalent even when condition (a) fails"
    )]
    TriangleInput,
    #[error("input is not facet inducing: {0}")]
    NotFacet(String),
    #[error("bad split p={p}, q={q} for {n} nodes (need p+q = n >= 5)")]
    BadSplit { p: usize, q: usize, n: usize },
}

/// `q2 = scale · switch(permute(q1, sigma), s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivWitness {
    pub sigma: Permutation,
    /// The smaller of the two complementary switching sets.
    pub s: NodeSet,
    pub scale: Rational,
}

impl EquivWitness {
    /// Applies the witness to `q1`.
    pub fn apply(&self, q1: &Inequality) -> Result<Inequality, IneqError> {
        let r = q1.permute(&self.sigma)?.switch(&self.s)?;
        let coeffs = r
            .edge_coeffs()
            .iter()
            .map(|(&k, c)| (k, c * &self.scale))
            .collect();
        Ok(Inequality::from_edge_map(
            r.graph_arc().clone(),
            coeffs,
            r.rhs() * &self.scale,
        ))
    }

    pub fn render(&self) -> String {
        format!("sigma={} S={}", self.sigma.cycle_notation(), verify::fmt_set(&self.s))
    }
}

/// Dense coprime integer form in edge order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Dense {
    coeffs: Vec<i128>,
    rhs: i128,
}

impl Dense {
    fn new(q: &Inequality) -> Result<Self, EquivError> {
        let n = q.normalize();
        let (ints, rhs) = n.scaled_integers();
        let mut coeffs = vec![0i128; q.graph().edge_count()];
        for (k, c) in ints {
            coeffs[k] = c.to_i128().ok_or(EquivError::Overflow)?;
        }
        // keep sums of |coefficients| far from overflow
        let total: i128 = coeffs.iter().map(|c| c.abs()).sum();
        if total > i128::from(i64::MAX) {
            return Err(EquivError::Overflow);
        }
        Ok(Dense {
            coeffs,
            rhs: rhs.to_i128().ok_or(EquivError::Overflow)?,
        })
    }

    fn permute(&self, edge_map: &[usize]) -> Dense {
        Dense {
            coeffs: edge_map.iter().map(|&k| self.coeffs[k]).collect(),
            rhs: self.rhs,
        }
    }

    fn switch(&self, g: &Graph, mask: u32) -> Dense {
        let mut coeffs = self.coeffs.clone();
        let mut rhs = self.rhs;
        for (k, &(i, j)) in g.edge_pairs().iter().enumerate() {
            if (mask >> i ^ mask >> j) & 1 == 1 {
                rhs -= coeffs[k];
                coeffs[k] = -coeffs[k];
            }
        }
        Dense { coeffs, rhs }
    }

    fn to_inequality(&self, q: &Inequality) -> Inequality {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(k, &c)| (k, Rational::from_integer(c.into())))
            .collect();
        Inequality::from_edge_map(
            q.graph_arc().clone(),
            coeffs,
            Rational::from_integer(self.rhs.into()),
        )
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Automorphisms of a complete multipartite graph as node-index maps,
/// identity first: permutations inside each part combined with permutations
/// of equal-size parts.
#[derive(Clone, Debug)]
pub struct AutGroup {
    parts: Vec<Vec<usize>>,
    /// Groups of equal-size part indices.
    classes: Vec<Vec<usize>>,
    n: usize,
}

impl AutGroup {
    pub fn of(g: &Graph) -> Result<Self, EquivError> {
        let parts = g
            .multipartite_parts()
            .ok_or_else(|| EquivError::UnsupportedGraph(g.name().to_string()))?;
        Ok(AutGroup::from_parts(parts, g.node_count()))
    }

    /// The subgroup fixing every part setwise, optionally with extra part
    /// swaps allowed between the given classes.
    pub fn from_classes(parts: Vec<Vec<usize>>, classes: Vec<Vec<usize>>, n: usize) -> Self {
        AutGroup { parts, classes, n }
    }

    fn from_parts(parts: Vec<Vec<usize>>, n: usize) -> Self {
        let mut by_size: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, p) in parts.iter().enumerate() {
            by_size.entry(p.len()).or_default().push(i);
        }
        AutGroup {
            parts,
            classes: by_size.into_values().collect(),
            n,
        }
    }

    pub fn size(&self) -> u128 {
        let inner: u128 = self.parts.iter().map(|p| factorial(p.len())).product();
        let outer: u128 = self.classes.iter().map(|c| factorial(c.len())).product();
        inner * outer
    }

    /// All elements in a fixed order, identity first.
    pub fn elements(&self) -> Vec<Vec<usize>> {
        let class_perms: Vec<Vec<Vec<usize>>> =
            self.classes.iter().map(|c| permutations(c.len())).collect();
        let part_perms: Vec<Vec<Vec<usize>>> =
            self.parts.iter().map(|p| permutations(p.len())).collect();
        let radices: Vec<usize> = class_perms
            .iter()
            .chain(&part_perms)
            .map(Vec::len)
            .collect();
        let total: usize = radices.iter().product();
        (0..total)
            .into_par_iter()
            .map(|mut idx| {
                let mut digits = vec![0usize; radices.len()];
                for (d, r) in digits.iter_mut().zip(&radices).rev() {
                    *d = idx % r;
                    idx /= r;
                }
                let (cd, pd) = digits.split_at(class_perms.len());
                // part i goes to part dest[i]
                let mut dest: Vec<usize> = (0..self.parts.len()).collect();
                for ((class, perms), &d) in self.classes.iter().zip(&class_perms).zip(cd) {
                    for (slot, &to) in perms[d].iter().enumerate() {
                        dest[class[slot]] = class[to];
                    }
                }
                let mut sigma = vec![0usize; self.n];
                for (i, part) in self.parts.iter().enumerate() {
                    let inner = &part_perms[i][pd[i]];
                    let target = &self.parts[dest[i]];
                    for (t, &node) in part.iter().enumerate() {
                        sigma[node] = target[inner[t]];
                    }
                }
                sigma
            })
            .collect()
    }
}

fn edge_map(g: &Graph, sigma: &[usize]) -> Option<Vec<usize>> {
    g.edge_pairs()
        .iter()
        .map(|&(i, j)| g.edge_id_by_index(sigma[i], sigma[j]))
        .collect()
}

fn to_permutation(g: &Graph, sigma: &[usize]) -> Permutation {
    Permutation::from_pairs(
        sigma
            .iter()
            .enumerate()
            .map(|(i, &j)| (g.label(i).clone(), g.label(j).clone())),
    )
    .expect("index map is a bijection")
}

fn check_budget(group: u128, g: &Graph) -> Result<(), EquivError> {
    let switchings = u128::from(cut::cut_count(g));
    if group.saturating_mul(switchings) > SEARCH_BUDGET {
        return Err(EquivError::BudgetExceeded { group, switchings });
    }
    Ok(())
}

/// The smaller of `S` and `V \ S`, ties broken by the sorted label lists.
pub fn smaller_side(g: &Graph, s: &NodeSet) -> NodeSet {
    let comp: NodeSet = g.nodes().iter().filter(|l| !s.contains(*l)).cloned().collect();
    match s.len().cmp(&comp.len()) {
        std::cmp::Ordering::Less => s.clone(),
        std::cmp::Ordering::Greater => comp,
        std::cmp::Ordering::Equal => {
            if s.iter().lt(comp.iter()) {
                s.clone()
            } else {
                comp
            }
        }
    }
}

/// Switching mask taking `p` exactly to `q`, solved as a parity problem on
/// the support graph: a coefficient keeps its sign iff its edge does not
/// cross the cut.
fn solve_switch_dense(g: &Graph, p: &Dense, q: &Dense) -> Option<u32> {
    let n = g.node_count();
    let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
    for (k, &(i, j)) in g.edge_pairs().iter().enumerate() {
        let (a, b) = (p.coeffs[k], q.coeffs[k]);
        if a.abs() != b.abs() {
            return None;
        }
        if a != 0 {
            let cross = u32::from(a != b);
            adj[i].push((j, cross));
            adj[j].push((i, cross));
        }
    }
    let mut side: Vec<Option<u32>> = vec![None; n];
    let mut mask = 0u32;
    for start in 0..n {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let sx = side[x].expect("visited");
            for &(y, c) in &adj[x] {
                match side[y] {
                    None => {
                        side[y] = Some(sx ^ c);
                        queue.push_back(y);
                    }
                    Some(sy) if sy != sx ^ c => return None,
                    Some(_) => {}
                }
            }
        }
    }
    for (i, s) in side.iter().enumerate() {
        if *s == Some(1) {
            mask |= 1 << i;
        }
    }
    let sw = p.switch(g, mask);
    (sw == *q).then_some(mask)
}

/// Switching set `S` with `switch(p, S) = q` exactly, by parity solving.
pub fn find_switching(p: &Inequality, q: &Inequality) -> Result<Option<NodeSet>, EquivError> {
    same_graph(p, q)?;
    let g = p.graph();
    cut::check_cap(g, cut::HARD_CAP).map_err(VerifyError::from)?;
    if p.support_size() != q.support_size() {
        return Ok(None);
    }
    // exact comparison: scale both by the same factor
    let (dp, dq) = common_dense(p, q)?;
    Ok(solve_switch_dense(g, &dp, &dq).map(|m| smaller_side(g, &cut::mask_to_set(g, m))))
}

/// Same as [`find_switching`] but tries all `2^(n-1)` anchored sets.
pub fn find_switching_exhaustive(
    p: &Inequality,
    q: &Inequality,
) -> Result<Option<NodeSet>, EquivError> {
    same_graph(p, q)?;
    let g = p.graph();
    cut::check_cap(g, cut::HARD_CAP).map_err(VerifyError::from)?;
    let (dp, dq) = common_dense(p, q)?;
    let hit = (0..cut::cut_count(g))
        .into_par_iter()
        .find_first(|&m| dp.switch(g, m as u32) == dq);
    Ok(hit.map(|m| smaller_side(g, &cut::mask_to_set(g, m as u32))))
}

/// Dense forms of `p` and `q` scaled by one common factor (not normalized
/// separately, so equality stays exact).
fn common_dense(p: &Inequality, q: &Inequality) -> Result<(Dense, Dense), EquivError> {
    let lcm = p
        .edge_coeffs()
        .values()
        .chain(q.edge_coeffs().values())
        .chain([p.rhs(), q.rhs()])
        .fold(num_bigint::BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let dense = |x: &Inequality| -> Result<Dense, EquivError> {
        let conv = |c: &Rational| -> Result<i128, EquivError> {
            (c.numer() * (&lcm / c.denom())).to_i128().ok_or(EquivError::Overflow)
        };
        let mut coeffs = vec![0i128; x.graph().edge_count()];
        for (&k, c) in x.edge_coeffs() {
            coeffs[k] = conv(c)?;
        }
        Ok(Dense {
            coeffs,
            rhs: conv(x.rhs())?,
        })
    };
    Ok((dense(p)?, dense(q)?))
}

fn same_graph(p: &Inequality, q: &Inequality) -> Result<(), EquivError> {
    if p.graph() != q.graph() {
        return Err(EquivError::GraphMismatch(
            p.graph().name().to_string(),
            q.graph().name().to_string(),
        ));
    }
    Ok(())
}

/// Orbit invariant: per node, the sorted absolute coefficients at it; the
/// multiset of these profiles is preserved by automorphisms and switchings.
fn node_profiles(g: &Graph, d: &Dense) -> Vec<Vec<i128>> {
    let mut prof = vec![Vec::new(); g.node_count()];
    for (k, &(i, j)) in g.edge_pairs().iter().enumerate() {
        let c = d.coeffs[k].abs();
        if c != 0 {
            prof[i].push(c);
            prof[j].push(c);
        }
    }
    for p in &mut prof {
        p.sort_unstable();
    }
    prof.sort();
    prof
}

fn witness_scale(q1: &Inequality, q2: &Inequality) -> Rational {
    // normalize divides by a positive factor; recover q2 / normalize(q1)
    let n1 = q1.normalize();
    let n2 = q2.normalize();
    let ratio = |a: &Inequality, b: &Inequality| -> Rational {
        b.edge_coeffs()
            .iter()
            .next()
            .map(|(k, c)| c / a.coeff_at(*k))
            .or_else(|| (!a.rhs().is_zero()).then(|| b.rhs() / a.rhs()))
            .unwrap_or_else(|| Rational::from_integer(1.into()))
    };
    // q1 = n1 * r1, q2 = n2 * r2; witness maps q1 to n2 * r2 = q2
    let r1 = ratio(&n1, q1);
    let r2 = ratio(&n2, q2);
    r2 / r1
}

fn search(
    g: &Graph,
    group: &[Vec<usize>],
    d1: &Dense,
    d2: &Dense,
    exhaustive_switching: bool,
) -> Option<(Vec<usize>, u32)> {
    group.par_iter().find_map_first(|sigma| {
        let em = edge_map(g, sigma)?;
        let p = d1.permute(&em);
        if exhaustive_switching {
            (0..cut::cut_count(g))
                .find(|&m| p.switch(g, m as u32) == *d2)
                .map(|m| (sigma.clone(), m as u32))
        } else {
            solve_switch_dense(g, &p, d2).map(|m| (sigma.clone(), m))
        }
    })
}

/// Exhaustive search over `Aut(G) × switchings`, up to positive scaling.
pub fn are_ps_equivalent(
    q1: &Inequality,
    q2: &Inequality,
) -> Result<(bool, Option<EquivWitness>), EquivError> {
    same_graph(q1, q2)?;
    let g = q1.graph();
    let aut = AutGroup::of(g)?;
    check_budget(aut.size(), g)?;
    let d1 = Dense::new(q1)?;
    let d2 = Dense::new(q2)?;

    let short_circuit = node_profiles(g, &d1) != node_profiles(g, &d2);
    if short_circuit && !cfg!(debug_assertions) {
        return Ok((false, None));
    }
    let group = aut.elements();
    let found = search(g, &group, &d1, &d2, false);
    if short_circuit {
        assert!(found.is_none(), "orbit invariant misclassified an equivalent pair");
        return Ok((false, None));
    }
    Ok(match found {
        None => (false, None),
        Some((sigma, mask)) => {
            let w = EquivWitness {
                sigma: to_permutation(g, &sigma),
                s: smaller_side(g, &cut::mask_to_set(g, mask)),
                scale: witness_scale(q1, q2),
            };
            (true, Some(w))
        }
    })
}

/// Lexicographically least normalized member of the orbit, comparing the
/// dense coefficient vector in edge order and then the right-hand side.
pub fn canonical_form(q: &Inequality) -> Result<Inequality, EquivError> {
    let g = q.graph();
    let aut = AutGroup::of(g)?;
    check_budget(aut.size(), g)?;
    let d = Dense::new(q)?;
    let count = cut::cut_count(g);
    let best = aut
        .elements()
        .par_iter()
        .filter_map(|sigma| {
            let em = edge_map(g, sigma)?;
            let p = d.permute(&em);
            (0..count).map(|m| p.switch(g, m as u32)).min()
        })
        .min()
        .expect("group contains the identity");
    Ok(best.to_inequality(q))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FastVerdict {
    pub equivalent: bool,
    pub witness: Option<EquivWitness>,
}

/// Decides condition (a) of the bipartite equivalence criterion for two
/// facets of `CUT□(K_n)`: the first `p` nodes (in label order) form the A
/// side, the rest the B side. The group is `S_p × S_q`, plus the swap
/// `A_i ↔ B_i` when `p = q`; switchings are enumerated exhaustively.
pub fn fast_equiv_bipartite(
    a: &Inequality,
    b: &Inequality,
    p: usize,
    q: usize,
) -> Result<FastVerdict, EquivError> {
    same_graph(a, b)?;
    let g = a.graph();
    let n = g.node_count();
    if p + q != n || n < 5 || !g.is_complete() {
        return Err(EquivError::BadSplit { p, q, n });
    }
    if a.is_triangle() || b.is_triangle() {
        return Err(EquivError::TriangleInput);
    }
    for x in [a, b] {
        let (facet, cert) = verify::is_facet(x)?;
        if !facet {
            return Err(EquivError::NotFacet(format!(
                "dim={} need={}",
                cert.affine_dim, cert.need
            )));
        }
    }
    let witness = equivalent_under(a, b, &bipartite_group(p, q))?;
    Ok(FastVerdict {
        equivalent: witness.is_some(),
        witness,
    })
}

/// `S_p × S_q` on the nodes in label order, with the swap `A_i ↔ B_i`
/// added when `p = q`.
pub fn bipartite_group(p: usize, q: usize) -> AutGroup {
    let n = p + q;
    let parts = vec![(0..p).collect::<Vec<_>>(), (p..n).collect()];
    let classes = if p == q { vec![vec![0, 1]] } else { vec![vec![0], vec![1]] };
    AutGroup::from_classes(parts, classes, n)
}

/// Equivalence under an explicit subgroup of `Aut(G)`, enumerating every
/// anchored switching for each group element.
pub fn equivalent_under(
    a: &Inequality,
    b: &Inequality,
    group: &AutGroup,
) -> Result<Option<EquivWitness>, EquivError> {
    same_graph(a, b)?;
    let g = a.graph();
    check_budget(group.size(), g)?;
    let d1 = Dense::new(a)?;
    let d2 = Dense::new(b)?;
    Ok(search(g, &group.elements(), &d1, &d2, true).map(|(sigma, mask)| EquivWitness {
        sigma: to_permutation(g, &sigma),
        s: smaller_side(g, &cut::mask_to_set(g, mask)),
        scale: witness_scale(a, b),
    }))
}

/// Labels as `A_1..A_p, B_1..B_q` for the nodes of `g` in order.
pub fn bipartite_relabeling(g: &Graph, p: usize) -> BTreeMap<Label, Label> {
    g.nodes()
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let name = if i < p {
                format!("A_{}", i + 1)
            } else {
                format!("B_{}", i - p + 1)
            };
            (l.clone(), crate::graph::label(name))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_hypermetric, make_pentagonal};
    use crate::graph::{label, node_set};
    use std::sync::Arc;

    fn k3113() -> Arc<Graph> {
        Arc::new(Graph::complete_multipartite(&[3, 1, 1, 3]))
    }

    fn a_prime() -> Inequality {
        let mut t = vec![("3", "4", 1), ("3", "5", 1), ("4", "5", 1), ("1", "6", 1)];
        for (u, v) in [("1", "4"), ("1", "5"), ("2", "4"), ("2", "5")] {
            t.push((u, v, -1));
        }
        for (u, v) in [("2", "6"), ("1", "7"), ("3", "7"), ("2", "8"), ("3", "8")] {
            t.push((u, v, -1));
        }
        Inequality::from_ints(k3113(), &t, 0).unwrap()
    }

    fn triangle_k5() -> Inequality {
        Inequality::from_ints(
            Arc::new(Graph::complete(5)),
            &[("1", "2", 1), ("1", "3", -1), ("2", "3", -1)],
            0,
        )
        .unwrap()
    }

    #[test]
    fn group_sizes() {
        assert_eq!(AutGroup::of(&Graph::complete(5)).unwrap().size(), 120);
        let g = AutGroup::of(&k3113()).unwrap();
        assert_eq!(g.size(), 6 * 6 * 2 * 2);
        let els = g.elements();
        assert_eq!(els.len(), 144);
        assert_eq!(els[0], (0..8).collect::<Vec<_>>());
        let k3113 = k3113();
        assert!(els.iter().all(|s| edge_map(&k3113, s).is_some()));
        let set: std::collections::BTreeSet<_> = els.into_iter().collect();
        assert_eq!(set.len(), 144);
        assert_eq!(AutGroup::of(&Graph::complete_multipartite(&[5, 4])).unwrap().size(), 2880);
        assert!(AutGroup::of(&Graph::cycle(5)).is_err());
    }

    #[test]
    fn switched_copy_is_equivalent() {
        let p = make_pentagonal();
        let s = node_set(["1", "4"]);
        let q = p.switch(&s).unwrap();
        let (eq, w) = are_ps_equivalent(&p, &q).unwrap();
        assert!(eq);
        let w = w.unwrap();
        assert_eq!(w.apply(&p).unwrap(), q);
        assert_eq!(find_switching(&p, &q).unwrap(), Some(s.clone()));
        assert_eq!(find_switching_exhaustive(&p, &q).unwrap(), Some(s));
    }

    #[test]
    fn a_prime_a_double_prime_witness() {
        let a1 = a_prime();
        let a2 = a1.switch(&node_set(["6", "8"])).unwrap();
        let (eq, w) = are_ps_equivalent(&a1, &a2).unwrap();
        assert!(eq);
        let w = w.unwrap();
        assert_eq!(w.render(), "sigma=() S={6,8}");
        assert_eq!(w.apply(&a1).unwrap(), a2);
        assert_eq!(canonical_form(&a1).unwrap(), canonical_form(&a2).unwrap());
    }

    #[test]
    fn pentagonal_vs_triangle() {
        let (eq, w) = are_ps_equivalent(&make_pentagonal(), &triangle_k5()).unwrap();
        assert!(!eq);
        assert!(w.is_none());
    }

    #[test]
    fn scaled_inputs() {
        let p = make_pentagonal();
        let q = Inequality::from_terms(
            p.graph_arc().clone(),
            p.terms().map(|(e, c)| (e.lo().clone(), e.hi().clone(), c * Rational::from_integer(3.into()))),
            Rational::zero(),
        )
        .unwrap();
        let (eq, w) = are_ps_equivalent(&p, &q).unwrap();
        assert!(eq);
        assert_eq!(w.unwrap().apply(&p).unwrap(), q);
        assert_eq!(find_switching(&p, &q).unwrap(), None);
    }

    #[test]
    fn permuted_pentagonal_same_canonical_form() {
        let p = make_pentagonal();
        let sigma = Permutation::transposition(label("4"), label("5"));
        assert_eq!(canonical_form(&p).unwrap(), canonical_form(&p.permute(&sigma).unwrap()).unwrap());
        let h = make_hypermetric(&[1, 1, 1, -1, -1]).unwrap();
        let (eq, w) = are_ps_equivalent(&p, &h).unwrap();
        assert!(eq);
        assert_eq!(w.unwrap().apply(&p).unwrap(), h);
        assert_eq!(canonical_form(&p).unwrap(), canonical_form(&h).unwrap());
    }

    #[test]
    fn canonical_form_is_switch_invariant() {
        let p = make_pentagonal();
        let c = canonical_form(&p).unwrap();
        for m in 0..16u32 {
            let s = cut::mask_to_set(p.graph(), m);
            assert_eq!(canonical_form(&p.switch(&s).unwrap()).unwrap(), c);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = Arc::new(Graph::complete(12));
        let q = Inequality::from_ints(g, &[("1", "2", 1)], 1).unwrap();
        assert!(matches!(
            are_ps_equivalent(&q, &q),
            Err(EquivError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn fast_criterion_basic() {
        let p = make_pentagonal();
        let swap = Permutation::transposition(label("1"), label("2"));
        let q = p.permute(&swap).unwrap();
        assert!(fast_equiv_bipartite(&p, &q, 2, 3).unwrap().equivalent);
        // the -1/-1 pair moves across the split, but switching by {1,3} undoes it
        let cross = Permutation::transposition(label("2"), label("3"));
        let r = p.permute(&cross).unwrap();
        assert!(fast_equiv_bipartite(&p, &r, 2, 3).unwrap().equivalent);
        // on K_6 the isolated node cannot leave its side
        let k6 = Arc::new(Graph::complete(6));
        let lifted = p.zero_lift(k6).unwrap();
        let moved = lifted
            .permute(&Permutation::transposition(label("1"), label("6")))
            .unwrap();
        assert!(!fast_equiv_bipartite(&lifted, &moved, 2, 4).unwrap().equivalent);
        assert!(fast_equiv_bipartite(&lifted, &moved, 3, 3).unwrap().equivalent);
        assert!(are_ps_equivalent(&lifted, &moved).unwrap().0);
        assert_eq!(
            fast_equiv_bipartite(&triangle_k5(), &p, 2, 3),
            Err(EquivError::TriangleInput)
        );
        let bound = Inequality::from_ints(p.graph_arc().clone(), &[("1", "2", 1)], 1).unwrap();
        assert!(matches!(
            fast_equiv_bipartite(&bound, &p, 2, 3),
            Err(EquivError::NotFacet(_))
        ));
        assert!(matches!(
            fast_equiv_bipartite(&p, &p, 2, 2),
            Err(EquivError::BadSplit { .. })
        ));
    }

    #[test]
    fn short_circuit_never_hides_equivalence() {
        // inequivalent pair with equal support sizes and profiles differing
        let g = Arc::new(Graph::complete(5));
        let a = Inequality::from_ints(g.clone(), &[("1", "2", 1)], 1).unwrap();
        let b = Inequality::from_ints(g, &[("1", "2", 2)], 2).unwrap();
        assert!(are_ps_equivalent(&a, &b).unwrap().0);
    }
}
