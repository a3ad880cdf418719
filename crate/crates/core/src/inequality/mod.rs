//! Inequalities `a^T x <= a_0` over the edge set of a graph, and the
//! symmetry and reduction operations on them: switching, permutation,
//! collapsing, zero-lifting and support graphs.

mod form;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use form::{FormChoice, FormExpansion, FormKind, TriangularForm};

use crate::graph::{Edge, Graph, GraphError, Label, NodeSet};
use crate::permutation::Permutation;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IneqError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("coefficient on non-edge {0}-{1}")]
    NotAnEdge(Label, Label),
    #[error("{0} is not a subgraph of {1}")]
    NotSubgraph(String, String),
    #[error("permutation is not a bijection on the node set")]
    NotBijection,
    #[error("permutation is not an automorphism: edge {0} maps to a non-edge")]
    NotAutomorphism(Edge),
    #[error("triangular form needs three distinct nodes")]
    RepeatedFormNode,
    #[error("nonzero coefficient on edge {0} outside the target graph")]
    NonzeroOutside(Edge),
    #[error("inequality lives on {found}, expected {expected}")]
    GraphMismatch { expected: String, found: String },
}

/// `a^T x <= a_0` with exact rational coefficients on the edges of a graph.
///
/// Only nonzero coefficients are stored; equality compares the graph, the
/// nonzero coefficients and the right-hand side without any rescaling.
#[derive(Clone, PartialEq, Eq)]
pub struct Inequality {
    graph: Arc<Graph>,
    coeffs: BTreeMap<usize, Rational>,
    rhs: Rational,
}

impl fmt::Debug for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if c.is_negative() {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            write!(f, "{}x[{}]", c.abs(), e)?;
        }
        write!(f, " <= {} on {}", self.rhs, self.graph.name())
    }
}

impl Inequality {
    pub fn zero(graph: Arc<Graph>) -> Self {
        Inequality {
            graph,
            coeffs: BTreeMap::new(),
            rhs: Rational::zero(),
        }
    }

    /// Builds an inequality from edge terms; repeated edges are summed.
    pub fn from_terms<I>(graph: Arc<Graph>, terms: I, rhs: Rational) -> Result<Self, IneqError>
    where
        I: IntoIterator<Item = (Label, Label, Rational)>,
    {
        let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
        for (u, v, c) in terms {
            if u == v {
                return Err(GraphError::Loop(u).into());
            }
            let k = graph
                .edge_id(&u, &v)
                .ok_or_else(|| IneqError::NotAnEdge(u.clone(), v.clone()))?;
            *coeffs.entry(k).or_insert_with(Rational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(Inequality { graph, coeffs, rhs })
    }

    /// Integer convenience constructor over string labels.
    pub fn from_ints(
        graph: Arc<Graph>,
        terms: &[(&str, &str, i64)],
        rhs: i64,
    ) -> Result<Self, IneqError> {
        let terms = terms
            .iter()
            .map(|&(u, v, c)| Ok((Label::new(u)?, Label::new(v)?, rat(c))))
            .collect::<Result<Vec<_>, GraphError>>()?;
        Inequality::from_terms(graph, terms, rat(rhs))
    }

    pub(crate) fn from_edge_map(
        graph: Arc<Graph>,
        mut coeffs: BTreeMap<usize, Rational>,
        rhs: Rational,
    ) -> Self {
        coeffs.retain(|_, c| !c.is_zero());
        debug_assert!(coeffs.keys().all(|&k| k < graph.edge_count()));
        Inequality { graph, coeffs, rhs }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn rhs(&self) -> &Rational {
        &self.rhs
    }

    /// Nonzero coefficients keyed by edge index.
    pub fn edge_coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.coeffs
    }

    pub fn coeff_at(&self, k: usize) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient on edge `uv`; `None` if `uv` is not an edge.
    pub fn coeff(&self, u: &Label, v: &Label) -> Option<Rational> {
        self.graph.edge_id(u, v).map(|k| self.coeff_at(k))
    }

    /// Coefficient on `uv` by string labels, panicking on non-edges.
    pub fn c(&self, u: &str, v: &str) -> Rational {
        self.coeff(&crate::graph::label(u), &crate::graph::label(v))
            .unwrap_or_else(|| panic!("{u}-{v} is not an edge"))
    }

    /// Nonzero terms in edge order.
    pub fn terms(&self) -> impl Iterator<Item = (Edge, &Rational)> + '_ {
        self.coeffs.iter().map(move |(&k, c)| (self.graph.edge(k), c))
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.rhs.is_zero()
    }

    /// `a^T δ(S)`.
    pub fn evaluate(&self, s: &NodeSet) -> Rational {
        let mut total = Rational::zero();
        for (&k, c) in &self.coeffs {
            let (i, j) = self.graph.edge_pairs()[k];
            if s.contains(self.graph.label(i)) != s.contains(self.graph.label(j)) {
                total += c;
            }
        }
        total
    }

    fn check_subset(&self, s: &NodeSet) -> Result<(), IneqError> {
        for l in s {
            self.graph.require_node(l)?;
        }
        Ok(())
    }

    /// The `S`-switching: negate coefficients on the cut of `S` and replace
    /// the right-hand side by `a_0 - a^T δ(S)`.
    pub fn switch(&self, s: &NodeSet) -> Result<Self, IneqError> {
        self.check_subset(s)?;
        let shift = self.evaluate(s);
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, c)| {
                let (i, j) = self.graph.edge_pairs()[k];
                let crossing = s.contains(self.graph.label(i)) != s.contains(self.graph.label(j));
                (k, if crossing { -c.clone() } else { c.clone() })
            })
            .collect();
        Ok(Inequality {
            graph: self.graph.clone(),
            coeffs,
            rhs: &self.rhs - shift,
        })
    }

    /// The `σ`-permutation: `a'_ij = a_σ(i)σ(j)`; `σ` must be an automorphism.
    pub fn permute(&self, sigma: &Permutation) -> Result<Self, IneqError> {
        let g = &self.graph;
        let image: BTreeSet<&Label> = g.nodes().iter().map(|l| sigma.apply(l)).collect();
        if image.len() != g.node_count() || image.iter().any(|l| !g.has_node(l))
            || sigma.support().any(|l| !g.has_node(l))
        {
            return Err(IneqError::NotBijection);
        }
        let mut coeffs = BTreeMap::new();
        for (k, &(i, j)) in g.edge_pairs().iter().enumerate() {
            let si = sigma.apply(g.label(i));
            let sj = sigma.apply(g.label(j));
            let src = g
                .edge_id(si, sj)
                .ok_or_else(|| IneqError::NotAutomorphism(g.edge(k)))?;
            if let Some(c) = self.coeffs.get(&src) {
                coeffs.insert(k, c.clone());
            }
        }
        Ok(Inequality {
            graph: self.graph.clone(),
            coeffs,
            rhs: self.rhs.clone(),
        })
    }

    /// The `uv`-collapsing onto `G/uv`; the merged node keeps label `u`.
    pub fn collapse(&self, u: &Label, v: &Label) -> Result<Self, IneqError> {
        let g = &self.graph;
        let contracted = Arc::new(g.contract_edge(u, v)?);
        let uv = g.require_edge(u, v)?;
        let mut terms = Vec::new();
        for (&k, c) in &self.coeffs {
            if k == uv {
                continue;
            }
            let e = g.edge(k);
            let a = if e.lo() == v { u.clone() } else { e.lo().clone() };
            let b = if e.hi() == v { u.clone() } else { e.hi().clone() };
            terms.push((a, b, c.clone()));
        }
        Inequality::from_terms(contracted, terms, self.rhs.clone())
    }

    /// Zero-lifting to a supergraph.
    pub fn zero_lift(&self, sup: Arc<Graph>) -> Result<Self, IneqError> {
        if !self.graph.is_subgraph_of(&sup) {
            return Err(IneqError::NotSubgraph(
                self.graph.name().to_string(),
                sup.name().to_string(),
            ));
        }
        self.transfer(sup)
    }

    /// Moves the inequality onto `target`, which must contain every support
    /// edge. Zero coefficients on missing edges are dropped.
    pub fn restrict_to(&self, target: Arc<Graph>) -> Result<Self, IneqError> {
        self.transfer(target)
    }

    fn transfer(&self, target: Arc<Graph>) -> Result<Self, IneqError> {
        let mut coeffs = BTreeMap::new();
        for (e, c) in self.terms() {
            let k = target
                .edge_id(e.lo(), e.hi())
                .ok_or_else(|| IneqError::NonzeroOutside(e.clone()))?;
            coeffs.insert(k, c.clone());
        }
        Ok(Inequality {
            graph: target,
            coeffs,
            rhs: self.rhs.clone(),
        })
    }

    /// Relabels nodes along a bijection onto `target`, which must be the
    /// image of this graph under `map`.
    pub fn relabel(
        &self,
        map: &BTreeMap<Label, Label>,
        target: Arc<Graph>,
    ) -> Result<Self, IneqError> {
        let image: Result<Vec<(Label, Label)>, IneqError> = self
            .graph
            .edges()
            .map(|e| {
                let a = map.get(e.lo()).ok_or_else(|| GraphError::UnknownNode(e.lo().clone()))?;
                let b = map.get(e.hi()).ok_or_else(|| GraphError::UnknownNode(e.hi().clone()))?;
                Ok((a.clone(), b.clone()))
            })
            .collect();
        let image = Graph::new("", map.values().cloned(), image?)?;
        if image != *target {
            return Err(IneqError::GraphMismatch {
                expected: target.name().to_string(),
                found: "relabelled graph".to_string(),
            });
        }
        let terms = self
            .terms()
            .map(|(e, c)| (map[e.lo()].clone(), map[e.hi()].clone(), c.clone()))
            .collect::<Vec<_>>();
        Inequality::from_terms(target, terms, self.rhs.clone())
    }

    /// Subgraph on the nonzero-coefficient edges and their endpoints.
    pub fn support_graph(&self) -> Graph {
        let edges: Vec<Edge> = self.terms().map(|(e, _)| e).collect();
        let nodes: NodeSet = edges
            .iter()
            .flat_map(|e| [e.lo().clone(), e.hi().clone()])
            .collect();
        Graph::new(
            format!("supp({})", self.graph.name()),
            nodes,
            edges.into_iter().map(|e| (e.lo().clone(), e.hi().clone())),
        )
        .expect("support edges are edges of the graph")
    }

    /// Positive rescaling to coprime integers.
    pub fn normalize(&self) -> Self {
        let (ints, rhs) = self.scaled_integers();
        let mut g = rhs.abs();
        for c in ints.values() {
            g = g.gcd(c);
        }
        if g.is_zero() {
            return self.clone();
        }
        let coeffs = ints
            .into_iter()
            .map(|(k, c)| (k, Rational::from_integer(c / &g)))
            .collect();
        Inequality {
            graph: self.graph.clone(),
            coeffs,
            rhs: Rational::from_integer(rhs / &g),
        }
    }

    /// Coefficients and right-hand side multiplied by the lcm of all
    /// denominators.
    pub fn scaled_integers(&self) -> (BTreeMap<usize, BigInt>, BigInt) {
        let mut l = self.rhs.denom().clone();
        for c in self.coeffs.values() {
            l = l.lcm(c.denom());
        }
        let scale = |r: &Rational| r.numer() * (&l / r.denom());
        let ints = self.coeffs.iter().map(|(&k, c)| (k, scale(c))).collect();
        (ints, scale(&self.rhs))
    }

    /// Returns the triangle nodes if this is a positive multiple of one of
    /// the four triangular forms `Δ <= 0` (the triangle inequalities).
    pub fn triangle_nodes(&self) -> Option<[Label; 3]> {
        if self.coeffs.len() != 3 {
            return None;
        }
        let support = self.support_graph();
        if support.node_count() != 3 {
            return None;
        }
        let mags: BTreeSet<Rational> = self.coeffs.values().map(|c| c.abs()).collect();
        if mags.len() != 1 {
            return None;
        }
        let lambda = mags.into_iter().next().expect("one magnitude");
        let positive = self.coeffs.values().filter(|c| c.is_positive()).count();
        let ok = match positive {
            1 => self.rhs.is_zero(),
            3 => self.rhs == lambda * rat(2),
            _ => false,
        };
        ok.then(|| {
            let n = support.nodes();
            [n[0].clone(), n[1].clone(), n[2].clone()]
        })
    }

    pub fn is_triangle(&self) -> bool {
        self.triangle_nodes().is_some()
    }

    /// Adds `weight * Δ` for a triangular form whose edges all exist here.
    pub fn add_form(&self, weight: &Rational, form: &FormExpansion) -> Result<Self, IneqError> {
        let mut coeffs = self.coeffs.clone();
        for (e, &c) in &form.coeffs {
            let k = self
                .graph
                .edge_id(e.lo(), e.hi())
                .ok_or_else(|| IneqError::NotAnEdge(e.lo().clone(), e.hi().clone()))?;
            *coeffs.entry(k).or_insert_with(Rational::zero) += weight * rat(c);
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(Inequality {
            graph: self.graph.clone(),
            coeffs,
            rhs: &self.rhs + weight * rat(form.rhs),
        })
    }

    /// Same coefficients on a graph known to share this node/edge set.
    pub fn with_graph(&self, graph: Arc<Graph>) -> Result<Self, IneqError> {
        if *graph != *self.graph {
            return Err(IneqError::GraphMismatch {
                expected: graph.name().to_string(),
                found: self.graph.name().to_string(),
            });
        }
        Ok(Inequality {
            graph,
            coeffs: self.coeffs.clone(),
            rhs: self.rhs.clone(),
        })
    }

    pub fn is_integral(&self) -> bool {
        self.rhs.denom().is_one() && self.coeffs.values().all(|c| c.denom().is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{label, node_set};

    fn k(n: usize) -> Arc<Graph> {
        Arc::new(Graph::complete(n))
    }

    fn triangle() -> Inequality {
        Inequality::from_ints(k(3), &[("1", "2", 1), ("1", "3", -1), ("2", "3", -1)], 0).unwrap()
    }

    fn pentagonal() -> Inequality {
        let mut t = vec![("1", "2", 1), ("3", "4", 1), ("3", "5", 1), ("4", "5", 1)];
        for u in ["1", "2"] {
            for v in ["3", "4", "5"] {
                t.push((u, v, -1));
            }
        }
        Inequality::from_ints(k(5), &t, 0).unwrap()
    }

    #[test]
    fn switch_triangle_gives_all_plus_form() {
        let s = triangle().switch(&node_set(["3"])).unwrap();
        let expect =
            Inequality::from_ints(k(3), &[("1", "2", 1), ("1", "3", 1), ("2", "3", 1)], 2).unwrap();
        assert_eq!(s, expect);
        assert_eq!(triangle().switch(&NodeSet::new()).unwrap(), triangle());
        assert!(triangle().switch(&node_set(["9"])).is_err());
    }

    #[test]
    fn switch_by_complement_is_identical() {
        let p = pentagonal();
        let a = p.switch(&node_set(["1", "4"])).unwrap();
        let b = p.switch(&node_set(["2", "3", "5"])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pentagonal_fixed_by_transposition_45() {
        let p = pentagonal();
        let sigma = Permutation::transposition(label("4"), label("5"));
        let q = p.permute(&sigma).unwrap();
        assert_eq!(q.c("3", "4"), p.c("3", "5"));
        assert_eq!(q.c("3", "5"), p.c("3", "4"));
        assert_eq!(q, p);
        let sigma = Permutation::transposition(label("1"), label("3"));
        assert_ne!(p.permute(&sigma).unwrap(), p);
    }

    #[test]
    fn permute_rejects_non_automorphism() {
        let c4 = Arc::new(Graph::cycle(4));
        let q = Inequality::from_ints(c4, &[("1", "2", 1)], 1).unwrap();
        let sigma = Permutation::transposition(label("1"), label("2"));
        // (1 2) maps edge 23 to 13, which is a chord
        assert!(matches!(q.permute(&sigma), Err(IneqError::NotAutomorphism(_))));
        let sigma = Permutation::transposition(label("1"), label("7"));
        assert_eq!(q.permute(&sigma), Err(IneqError::NotBijection));
    }

    #[test]
    fn collapse_four_case_formula() {
        let q = Inequality::from_ints(k(3), &[("1", "3", 1), ("2", "3", 1)], 1).unwrap();
        let c = q.collapse(&label("1"), &label("2")).unwrap();
        assert_eq!(c.graph().node_count(), 2);
        assert_eq!(c.c("1", "3"), rat(2));
        assert_eq!(c.rhs(), &rat(1));
        let z = Inequality::zero(k(4)).collapse(&label("1"), &label("2")).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn collapse_one_sided_neighbours() {
        // path 1-2-3 plus pendant 1-4: collapsing 12 keeps a_14 and moves a_23
        let g = Arc::new(
            Graph::new(
                "g",
                node_set(["1", "2", "3", "4"]),
                [("1", "2"), ("2", "3"), ("1", "4")].map(|(a, b)| (label(a), label(b))),
            )
            .unwrap(),
        );
        let q = Inequality::from_ints(g, &[("1", "2", 5), ("2", "3", 3), ("1", "4", -2)], 7)
            .unwrap();
        let c = q.collapse(&label("1"), &label("2")).unwrap();
        assert_eq!(c.c("1", "3"), rat(3));
        assert_eq!(c.c("1", "4"), rat(-2));
        assert_eq!(c.support_size(), 2);
    }

    #[test]
    fn zero_lift_keeps_support() {
        let p = pentagonal();
        let lifted = p.zero_lift(k(6)).unwrap();
        assert_eq!(lifted.graph().edge_count(), 15);
        assert_eq!(lifted.support_size(), 10);
        let t = triangle().zero_lift(k(4)).unwrap();
        assert_eq!(t.support_graph(), triangle().support_graph());
        assert!(p.zero_lift(k(4)).is_err());
    }

    #[test]
    fn support_graphs() {
        assert_eq!(pentagonal().support_graph(), Graph::complete(5));
        let z = Inequality::zero(k(4)).support_graph();
        assert_eq!(z.node_count(), 0);
        assert_eq!(z.edge_count(), 0);
    }

    #[test]
    fn normalize_scales_positively() {
        let q = Inequality::from_terms(
            k(3),
            vec![
                (label("1"), label("2"), Rational::new(2.into(), 3.into())),
                (label("1"), label("3"), Rational::new((-4).into(), 3.into())),
            ],
            rat(2),
        )
        .unwrap();
        let n = q.normalize();
        assert_eq!(n.c("1", "2"), rat(1));
        assert_eq!(n.c("1", "3"), rat(-2));
        assert_eq!(n.rhs(), &rat(3));
        assert_eq!(n.normalize(), n);
    }

    #[test]
    fn triangle_detection() {
        assert!(triangle().is_triangle());
        assert!(triangle().switch(&node_set(["3"])).unwrap().is_triangle());
        assert!(!pentagonal().is_triangle());
        let scaled =
            Inequality::from_ints(k(4), &[("1", "2", 3), ("1", "3", 3), ("2", "3", 3)], 6).unwrap();
        assert!(scaled.is_triangle());
        let bound = Inequality::from_ints(k(3), &[("1", "2", 1)], 1).unwrap();
        assert!(!bound.is_triangle());
    }

    #[test]
    fn coefficient_on_non_edge_rejected() {
        let c4 = Arc::new(Graph::cycle(4));
        let err = Inequality::from_ints(c4, &[("1", "3", 1)], 0).unwrap_err();
        assert!(matches!(err, IneqError::NotAnEdge(..)));
    }
}
