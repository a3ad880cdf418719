//! Triangular elimination of inequalities.
//!
//! Each eliminated edge `u_i v_i` is cancelled by adding `|a_{u_i v_i}|`
//! times a triangular form on `u_i, v_i, w_i`. The canonical choice uses
//! `Δ(u,v;w)` when the coefficient is `<= 0` and `Δ(u,w;v)` otherwise; with
//! that choice collapsing every `w_i` onto `v_i` recovers the input.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cut::FACET_CAP;
use crate::graph::{Edge, EliminationPlan, Graph, GraphError, Label, Layout, NodeSet, PlanEntry};
use crate::inequality::{rat, FormChoice, FormKind, IneqError, Inequality, Rational, TriangularForm};
use crate::verify::{self, VerifyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrielimError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ineq(#[from] IneqError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("form {form} does not cancel coefficient {coef} on edge {u}-{v}")]
    FormDoesNotCancel {
        u: Label,
        v: Label,
        form: FormKind,
        coef: Rational,
    },
    #[error("inequality lives on {found}, layout expects {expected}")]
    GraphMismatch { expected: String, found: String },
    #[error("staged elimination from K_n needs n >= 5, got {0}")]
    TooFewNodes(usize),
    #[error("staged elimination requires a non-triangle inequality")]
    TriangleInput,
    #[error("forms Δ(u,v,w) cannot be collapsed directly; switch by {} first", verify::fmt_set(.0))]
    NeedsSwitching(NodeSet),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// One intermediate graph and inequality of a staged elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub graph: Arc<Graph>,
    pub inequality: Inequality,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationResult {
    pub output: Inequality,
    /// Plan with every form resolved to an explicit kind.
    pub plan_used: EliminationPlan,
    /// `a'_0 - a_0`.
    pub rhs_shift: Rational,
    pub source: Inequality,
    /// Intermediate stages `G^(l)`, empty for single-step eliminations.
    pub stages: Vec<Stage>,
}

fn resolve(entry: &PlanEntry, a: &Rational) -> Result<FormKind, TrielimError> {
    let sign = if a.is_positive() {
        1
    } else if a.is_negative() {
        -1
    } else {
        0
    };
    match entry.form {
        FormChoice::Canonical => Ok(if sign > 0 {
            FormKind::PlusUw
        } else {
            FormKind::PlusUv
        }),
        FormChoice::Explicit(kind) => {
            if FormKind::cancelling(sign).contains(&kind) {
                Ok(kind)
            } else {
                Err(TrielimError::FormDoesNotCancel {
                    u: entry.u.clone(),
                    v: entry.v.clone(),
                    form: kind,
                    coef: a.clone(),
                })
            }
        }
    }
}

/// Eliminates the plan's edges from `ineq`, producing an inequality on
/// `target`, which must be a triangular elimination of `ineq`'s graph.
pub fn eliminate(
    ineq: &Inequality,
    target: Arc<Graph>,
    plan: &EliminationPlan,
) -> Result<EliminationResult, TrielimError> {
    let g = ineq.graph();
    plan.check_target(g, &target)?;

    let mut acc: BTreeMap<Edge, Rational> = ineq
        .terms()
        .map(|(e, c)| (e, c.clone()))
        .collect();
    let mut rhs_shift = Rational::zero();
    let mut resolved = Vec::with_capacity(plan.len());
    for entry in plan.entries() {
        let a = ineq
            .coeff(&entry.u, &entry.v)
            .expect("plan edges checked against the graph");
        let kind = resolve(entry, &a)?;
        resolved.push(PlanEntry::new(
            entry.u.clone(),
            entry.v.clone(),
            entry.w.clone(),
            FormChoice::Explicit(kind),
        ));
        if a.is_zero() {
            continue;
        }
        let weight = a.abs();
        let form = TriangularForm::new(kind, entry.u.clone(), entry.v.clone(), entry.w.clone())
            .expand()?;
        for (e, c) in form.coeffs {
            *acc.entry(e).or_insert_with(Rational::zero) += &weight * rat(c);
        }
        rhs_shift += &weight * rat(form.rhs);
    }
    for entry in plan.entries() {
        let e = Edge::new(entry.u.clone(), entry.v.clone())?;
        if acc.get(&e).is_some_and(|c| !c.is_zero()) {
            return Err(TrielimError::Internal(format!("edge {e} not cancelled")));
        }
    }
    let terms = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (e.lo().clone(), e.hi().clone(), c));
    let output = Inequality::from_terms(target, terms, ineq.rhs() + &rhs_shift)?;
    Ok(EliminationResult {
        output,
        plan_used: EliminationPlan::new(resolved)?,
        rhs_shift,
        source: ineq.clone(),
        stages: Vec::new(),
    })
}

impl EliminationResult {
    pub fn forms(&self) -> Vec<FormKind> {
        self.plan_used
            .entries()
            .iter()
            .map(|e| match e.form {
                FormChoice::Explicit(k) => k,
                FormChoice::Canonical => unreachable!("forms are resolved"),
            })
            .collect()
    }

    fn source_coeff(&self, entry: &PlanEntry) -> Rational {
        self.source
            .coeff(&entry.u, &entry.v)
            .unwrap_or_else(Rational::zero)
    }

    /// Associated nodes whose `Δ(u,v,w)` form carries a nonzero weight.
    pub fn switching_needed(&self) -> NodeSet {
        self.plan_used
            .entries()
            .iter()
            .filter(|e| e.form == FormChoice::Explicit(FormKind::AllPlus))
            .filter(|e| !self.source_coeff(e).is_zero())
            .map(|e| e.w.clone())
            .collect()
    }

    /// Switches by the nodes of [`switching_needed`](Self::switching_needed),
    /// turning each `Δ(u,v,w)` into `Δ(u,v;w)`.
    pub fn normalize_forms(&self) -> Result<EliminationResult, TrielimError> {
        let set = self.switching_needed();
        if set.is_empty() {
            return Ok(self.clone());
        }
        let output = self.output.switch(&set)?;
        let entries = self
            .plan_used
            .entries()
            .iter()
            .map(|e| {
                let mut e = e.clone();
                if set.contains(&e.w) {
                    e.form = FormChoice::Explicit(FormKind::PlusUv);
                }
                e
            })
            .collect();
        Ok(EliminationResult {
            rhs_shift: output.rhs() - self.source.rhs(),
            output,
            plan_used: EliminationPlan::new(entries)?,
            source: self.source.clone(),
            stages: self.stages.clone(),
        })
    }

    /// Drops associated nodes that carry no support, targeting `G' - w_i`.
    pub fn prune_unused(&self) -> Result<EliminationResult, TrielimError> {
        let support = self.output.support_graph();
        let mut g = self.output.graph().clone();
        for e in self.plan_used.entries() {
            if !support.has_node(&e.w) && g.has_node(&e.w) {
                g = g.remove_node(&e.w)?;
            }
        }
        let g = g.with_name(format!("{}_pruned", self.output.graph().name()));
        Ok(EliminationResult {
            output: self.output.restrict_to(Arc::new(g))?,
            ..self.clone()
        })
    }
}

/// Collapses each `w_i` back into the node that restores the source
/// coefficient: onto `v_i` for `Δ(u,v;w)` and `Δ(u,w;v)`, onto `u_i` for
/// `Δ(w,v;u)`. Forms `Δ(u,v,w)` need a switching by `{w_i}` first, reported
/// as [`TrielimError::NeedsSwitching`].
pub fn collapse_back(res: &EliminationResult) -> Result<Inequality, TrielimError> {
    let need = res.switching_needed();
    if !need.is_empty() {
        return Err(TrielimError::NeedsSwitching(need));
    }
    let mut cur = res.output.clone();
    for (entry, kind) in res.plan_used.entries().iter().zip(res.forms()) {
        if !cur.graph().has_node(&entry.w) {
            continue;
        }
        let onto = match kind {
            FormKind::PlusWv => &entry.u,
            _ => &entry.v,
        };
        cur = cur.collapse(onto, &entry.w)?;
    }
    let g = res.source.graph_arc().clone();
    Ok(cur.restrict_to(g)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Pass,
    Fail(String),
    NotGuaranteed(String),
}

impl Check {
    pub fn is_pass(&self) -> bool {
        matches!(self, Check::Pass)
    }

    fn render(&self) -> String {
        match self {
            Check::Pass => "PASS".into(),
            Check::Fail(why) => format!("FAIL {why}"),
            Check::NotGuaranteed(why) => format!("NOT_GUARANTEED {why}"),
        }
    }
}

/// Per-entry data for conditions (ii) and (iii).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryConditions {
    pub entry: PlanEntry,
    /// Nodes of `N_{G'}(w) \ {u,v}` outside `N_G(u) ∩ N_G(v)`.
    pub outside_common: NodeSet,
    /// Literal reading of (iii): the support is not contained in
    /// `{u l, v l : l ∈ N_{G'}(w) \ {u,v}} ∪ {uv}`.
    pub not_covered: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetConditionReport {
    /// (i) the source is facet inducing for `CUT□(G)`.
    pub source_facet: Check,
    /// (ii) neighbourhood containment for every entry.
    pub neighbourhood: Check,
    /// (iii) via the support-graph shortcut (more than three nodes).
    pub support: Check,
    pub support_nodes: usize,
    pub entries: Vec<EntryConditions>,
    /// Whether `{w_i}` is an independent set of `G'`.
    pub w_independent: bool,
}

impl FacetConditionReport {
    pub fn all_pass(&self) -> bool {
        self.source_facet.is_pass() && self.neighbourhood.is_pass() && self.support.is_pass()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let verdict = if self.all_pass() { "PASS" } else { "NOT_GUARANTEED" };
        let _ = writeln!(s, "CONDITIONS {verdict}");
        let _ = writeln!(s, "condition (i): {}", self.source_facet.render());
        let _ = writeln!(s, "condition (ii): {}", self.neighbourhood.render());
        let _ = writeln!(s, "condition (iii): {}", self.support.render());
        for e in &self.entries {
            let _ = writeln!(
                s,
                "entry {}-{} -> {}: outside_common={} literal_iii={}",
                e.entry.u,
                e.entry.v,
                e.entry.w,
                verify::fmt_set(&e.outside_common),
                if e.not_covered { "ok" } else { "covered" }
            );
        }
        let _ = writeln!(
            s,
            "associated nodes independent: {}",
            if self.w_independent { "yes" } else { "no" }
        );
        s
    }
}

/// Evaluates the sufficient conditions for the elimination of `ineq` from
/// `g` to `target` to be facet inducing.
pub fn check_facet_conditions(
    ineq: &Inequality,
    g: &Graph,
    target: &Graph,
    plan: &EliminationPlan,
) -> FacetConditionReport {
    let source_facet = if g.node_count() > FACET_CAP {
        Check::NotGuaranteed(format!("source graph exceeds {FACET_CAP} nodes"))
    } else {
        match verify::is_facet(ineq) {
            Ok((true, _)) => Check::Pass,
            Ok((false, cert)) => Check::Fail(format!("dim={} need={}", cert.affine_dim, cert.need)),
            Err(e) => Check::Fail(e.to_string()),
        }
    };

    let support_graph = ineq.support_graph();
    let support_edges: BTreeSet<Edge> = ineq.terms().map(|(e, _)| e).collect();
    let mut entries = Vec::new();
    let mut bad = Vec::new();
    for entry in plan.entries() {
        let common: NodeSet = match (g.neighbors(&entry.u), g.neighbors(&entry.v)) {
            (Ok(a), Ok(b)) => a.intersection(&b).cloned().collect(),
            _ => NodeSet::new(),
        };
        let nw: NodeSet = target
            .neighbors(&entry.w)
            .unwrap_or_default()
            .into_iter()
            .filter(|l| l != &entry.u && l != &entry.v)
            .collect();
        let outside: NodeSet = nw.difference(&common).cloned().collect();
        if !outside.is_empty() {
            bad.push(format!("{} sees {}", entry.w, verify::fmt_set(&outside)));
        }
        let mut covered: BTreeSet<Edge> = BTreeSet::new();
        if let Ok(e) = Edge::new(entry.u.clone(), entry.v.clone()) {
            covered.insert(e);
        }
        for l in &nw {
            for x in [&entry.u, &entry.v] {
                if let Ok(e) = Edge::new(x.clone(), l.clone()) {
                    covered.insert(e);
                }
            }
        }
        entries.push(EntryConditions {
            entry: entry.clone(),
            outside_common: outside,
            not_covered: !support_edges.is_subset(&covered),
        });
    }
    let neighbourhood = if bad.is_empty() {
        Check::Pass
    } else {
        Check::Fail(bad.join("; "))
    };

    let n = support_graph.node_count();
    let support = if n <= 3 {
        Check::NotGuaranteed(format!("support graph has {n} nodes"))
    } else if !source_facet.is_pass() {
        Check::NotGuaranteed("shortcut needs a facet-inducing source".into())
    } else {
        Check::Pass
    };

    FacetConditionReport {
        source_facet,
        neighbourhood,
        support,
        support_nodes: n,
        entries,
        w_independent: target.is_independent_set(&plan.associated_nodes()),
    }
}

/// Eliminates along a layout one group at a time. Stage `l` joins `W_l` to
/// every node of `G^(l-1)` and removes the clique edges of `V_l`; the final
/// inequality is moved onto the layout's target graph and must coincide with
/// the direct elimination.
pub fn eliminate_multistage(
    ineq: &Inequality,
    layout: &Layout,
) -> Result<EliminationResult, TrielimError> {
    let n = layout.kn.node_count();
    if n < 5 {
        return Err(TrielimError::TooFewNodes(n));
    }
    if *ineq.graph() != layout.kn {
        return Err(TrielimError::GraphMismatch {
            expected: layout.kn.name().to_string(),
            found: ineq.graph().name().to_string(),
        });
    }
    if ineq.is_triangle() {
        return Err(TrielimError::TriangleInput);
    }

    let mut stages = vec![Stage {
        graph: ineq.graph_arc().clone(),
        inequality: ineq.clone(),
    }];
    let mut cur = ineq.clone();
    let mut used: Vec<PlanEntry> = Vec::new();
    for (l, (group, ws)) in layout.groups.iter().zip(&layout.assoc).enumerate() {
        let members: NodeSet = group.iter().cloned().collect();
        let entries: Vec<PlanEntry> = layout
            .plan
            .entries()
            .iter()
            .filter(|e| members.contains(&e.u) && members.contains(&e.v))
            .cloned()
            .collect();
        if entries.is_empty() {
            continue;
        }
        let prev = cur.graph();
        let nodes: Vec<Label> = prev.nodes().iter().chain(ws).cloned().collect();
        let mut edges: Vec<(Label, Label)> = prev
            .edges()
            .filter(|e| !(members.contains(e.lo()) && members.contains(e.hi())))
            .map(|e| (e.lo().clone(), e.hi().clone()))
            .collect();
        for v in prev.nodes() {
            for w in ws {
                edges.push((v.clone(), w.clone()));
            }
        }
        let stage_graph = Arc::new(Graph::new(
            format!("{}_stage{}", layout.kn.name(), l + 1),
            nodes,
            edges,
        )?);
        let sub = EliminationPlan::new(entries)?;
        let res = eliminate(&cur, stage_graph.clone(), &sub)?;
        used.extend(res.plan_used.entries().iter().cloned());
        cur = res.output;
        stages.push(Stage {
            graph: stage_graph,
            inequality: cur.clone(),
        });
    }

    let target = Arc::new(layout.target.clone());
    let output = cur.restrict_to(target.clone())?;
    let direct = eliminate(ineq, target, &layout.plan)?;
    if direct.output != output {
        return Err(TrielimError::Internal(
            "staged elimination differs from the direct one".into(),
        ));
    }
    let order: BTreeMap<&Label, usize> = layout
        .plan
        .entries()
        .iter()
        .enumerate()
        .map(|(i, e)| (&e.w, i))
        .collect();
    used.sort_by_key(|e| order[&e.w]);
    Ok(EliminationResult {
        rhs_shift: output.rhs() - ineq.rhs(),
        output,
        plan_used: EliminationPlan::new(used)?,
        source: ineq.clone(),
        stages,
    })
}
