use std::collections::{BTreeMap, BTreeSet};

use super::{label, Graph, GraphError, Label, NodeSet};
use crate::inequality::FormChoice;

/// One eliminated edge `uv`, its associated fresh node `w`, and the
/// triangular form to use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanEntry {
    pub u: Label,
    pub v: Label,
    pub w: Label,
    pub form: FormChoice,
}

impl PlanEntry {
    pub fn new(u: Label, v: Label, w: Label, form: FormChoice) -> Self {
        PlanEntry { u, v, w, form }
    }

    /// Entry with the default fresh label `W_<u>_<v>` and canonical form.
    pub fn canonical(u: Label, v: Label) -> Self {
        let w = label(format!("W_{u}_{v}"));
        PlanEntry::new(u, v, w, FormChoice::Canonical)
    }
}

/// The eliminated edge set `F` with its node association.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EliminationPlan {
    entries: Vec<PlanEntry>,
}

impl EliminationPlan {
    pub fn new(entries: Vec<PlanEntry>) -> Result<Self, GraphError> {
        let mut ws = BTreeSet::new();
        let mut es = BTreeSet::new();
        for e in &entries {
            if e.u == e.v {
                return Err(GraphError::Loop(e.u.clone()));
            }
            if e.w == e.u || e.w == e.v {
                return Err(GraphError::InvalidPlan(format!(
                    "associated node {} coincides with an endpoint",
                    e.w
                )));
            }
            if !ws.insert(e.w.clone()) {
                return Err(GraphError::InvalidPlan(format!(
                    "associated node {} used twice",
                    e.w
                )));
            }
            let key = (e.u.clone().min(e.v.clone()), e.u.clone().max(e.v.clone()));
            if !es.insert(key) {
                return Err(GraphError::InvalidPlan(format!(
                    "edge {}-{} eliminated twice",
                    e.u, e.v
                )));
            }
        }
        Ok(EliminationPlan { entries })
    }

    pub fn entries(&self) -> &[PlanEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn associated_nodes(&self) -> NodeSet {
        self.entries.iter().map(|e| e.w.clone()).collect()
    }

    pub fn with_forms(&self, forms: &[FormChoice]) -> Self {
        assert_eq!(forms.len(), self.entries.len());
        let entries = self
            .entries
            .iter()
            .zip(forms)
            .map(|(e, f)| PlanEntry { form: *f, ..e.clone() })
            .collect();
        EliminationPlan { entries }
    }

    /// Checks that every `u_i v_i` is an edge of `g` and no `w_i` is a node of `g`.
    pub fn check_against(&self, g: &Graph) -> Result<(), GraphError> {
        for e in &self.entries {
            g.require_edge(&e.u, &e.v)?;
            if g.has_node(&e.w) {
                return Err(GraphError::InvalidPlan(format!(
                    "associated node {} is already a node of {}",
                    e.w,
                    g.name()
                )));
            }
        }
        Ok(())
    }

    /// Checks that `target` is a triangular elimination of `g` for this plan:
    /// `V' = V ∪ {w_i}`, `w_i u_i, w_i v_i ∈ E'` and `E' ∩ E = E \ F`.
    pub fn check_target(&self, g: &Graph, target: &Graph) -> Result<(), GraphError> {
        self.check_against(g)?;
        let expect: NodeSet = g
            .nodes()
            .iter()
            .cloned()
            .chain(self.entries.iter().map(|e| e.w.clone()))
            .collect();
        let have: NodeSet = target.nodes().iter().cloned().collect();
        if expect != have {
            return Err(GraphError::InvalidPlan(format!(
                "target node set differs from V plus associated nodes (target {}, expected {})",
                have.len(),
                expect.len()
            )));
        }
        for e in &self.entries {
            for x in [&e.u, &e.v] {
                if !target.has_edge(&e.w, x) {
                    return Err(GraphError::InvalidPlan(format!(
                        "target lacks edge {}-{}",
                        e.w, x
                    )));
                }
            }
        }
        for edge in g.edges() {
            let eliminated = self.eliminates(edge.lo(), edge.hi());
            let kept = target.has_edge(edge.lo(), edge.hi());
            if eliminated == kept {
                return Err(GraphError::InvalidPlan(format!(
                    "edge {edge} is {} in the target",
                    if kept { "still present" } else { "missing" }
                )));
            }
        }
        Ok(())
    }

    pub fn eliminates(&self, a: &Label, b: &Label) -> bool {
        self.entries
            .iter()
            .any(|e| (&e.u == a && &e.v == b) || (&e.u == b && &e.v == a))
    }
}

/// `G' = (V ∪ {w_i}, (E \ F) ∪ {w_i u_i, w_i v_i} ∪ extra)`.
pub fn build_trielim_graph(
    g: &Graph,
    plan: &EliminationPlan,
    extra_edges: &[(Label, Label)],
) -> Result<Graph, GraphError> {
    plan.check_against(g)?;
    let nodes: Vec<Label> = g
        .nodes()
        .iter()
        .cloned()
        .chain(plan.entries().iter().map(|e| e.w.clone()))
        .collect();
    let mut edges: Vec<(Label, Label)> = g
        .edges()
        .filter(|e| !plan.eliminates(e.lo(), e.hi()))
        .map(|e| (e.lo().clone(), e.hi().clone()))
        .collect();
    for e in plan.entries() {
        edges.push((e.w.clone(), e.u.clone()));
        edges.push((e.w.clone(), e.v.clone()));
    }
    for (a, b) in extra_edges {
        if plan.eliminates(a, b) {
            return Err(GraphError::EliminatedEdgeReintroduced(a.clone(), b.clone()));
        }
        edges.push((a.clone(), b.clone()));
    }
    let out = Graph::new(format!("{}_elim", g.name()), nodes, edges)?;
    plan.check_target(g, &out)?;
    Ok(out)
}

/// Source graph, target graph and plan for a staged elimination from `K_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub kn: Graph,
    pub target: Graph,
    pub plan: EliminationPlan,
    /// The partition `V_1, ..., V_m` of the nodes of `K_n`.
    pub groups: Vec<Vec<Label>>,
    /// `W_l`, in the clique-edge order of `V_l`.
    pub assoc: Vec<Vec<Label>>,
}

fn clique_edges(group: &[Label]) -> Vec<(Label, Label)> {
    let mut g = group.to_vec();
    g.sort();
    let mut out = Vec::new();
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            out.push((g[i].clone(), g[j].clone()));
        }
    }
    out
}

fn complete_graph_name(labels: &[Label]) -> String {
    let n = labels.len();
    let numbered = labels
        .iter()
        .enumerate()
        .all(|(i, l)| l.as_str() == (i + 1).to_string());
    if numbered {
        format!("K{n}")
    } else {
        format!("K{n}_layout")
    }
}

/// `K_n` on `A_1..A_p, B_1..B_q` eliminated to `K_{r,s}` with
/// `r = p + C(q,2)` and `s = q + C(p,2)`.
pub fn build_bipartite_layout(p: usize, q: usize) -> Result<Layout, GraphError> {
    if p + q < 5 {
        return Err(GraphError::TooFewNodes(p + q));
    }
    let a: Vec<Label> = (1..=p).map(|i| label(format!("A_{i}"))).collect();
    let b: Vec<Label> = (1..=q).map(|j| label(format!("B_{j}"))).collect();
    let mut entries = Vec::new();
    let mut b_pairs = Vec::new();
    for (x, y) in clique_edges(&a) {
        let w = label(format!("B_{}_{}", &x.as_str()[2..], &y.as_str()[2..]));
        b_pairs.push(w.clone());
        entries.push(PlanEntry::new(x, y, w, FormChoice::Canonical));
    }
    let mut a_pairs = Vec::new();
    for (x, y) in clique_edges(&b) {
        let w = label(format!("A_{}_{}", &x.as_str()[2..], &y.as_str()[2..]));
        a_pairs.push(w.clone());
        entries.push(PlanEntry::new(x, y, w, FormChoice::Canonical));
    }
    let kn_nodes: Vec<Label> = a.iter().chain(&b).cloned().collect();
    let kn = Graph::complete_on(format!("K{}_A{p}B{q}", p + q), &kn_nodes);
    let side_one: Vec<Label> = a.iter().chain(&a_pairs).cloned().collect();
    let side_two: Vec<Label> = b.iter().chain(&b_pairs).cloned().collect();
    let target = Graph::complete_multipartite_on(
        format!("K{},{}_A{p}B{q}", side_one.len(), side_two.len()),
        &[side_one, side_two],
    )?;
    let plan = EliminationPlan::new(entries)?;
    plan.check_target(&kn, &target)?;
    Ok(Layout {
        kn,
        target,
        plan,
        groups: vec![a, b],
        assoc: vec![b_pairs, a_pairs],
    })
}

/// Grouping for a `K_n` to complete `k`-partite elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPartiteSpec {
    /// `V_1, ..., V_m`, a partition of the nodes of `K_n`.
    pub groups: Vec<Vec<Label>>,
    /// Labels of `W_l` in clique-edge order; `W_<u>_<v>` when absent.
    pub assoc: Option<Vec<Vec<Label>>>,
    /// The parts `V'_1, ..., V'_k` of the target, covering `V` and all `W_l`.
    pub parts: Vec<Vec<Label>>,
}

pub fn build_kpartite_layout(spec: &KPartiteSpec) -> Result<Layout, GraphError> {
    let mut all_v = NodeSet::new();
    for l in spec.groups.iter().flatten() {
        if !all_v.insert(l.clone()) {
            return Err(GraphError::DuplicateNode(l.clone()));
        }
    }
    if spec.groups.iter().any(|g| g.is_empty()) {
        return Err(GraphError::InvalidPlan("empty group".into()));
    }
    if all_v.len() < 5 {
        return Err(GraphError::TooFewNodes(all_v.len()));
    }

    let mut entries = Vec::new();
    let mut assoc = Vec::new();
    for (l, group) in spec.groups.iter().enumerate() {
        let edges = clique_edges(group);
        let ws: Vec<Label> = match &spec.assoc {
            Some(given) => {
                let ws = given.get(l).cloned().unwrap_or_default();
                if ws.len() != edges.len() {
                    return Err(GraphError::InvalidPlan(format!(
                        "group {} has {} clique edges but {} associated labels",
                        l + 1,
                        edges.len(),
                        ws.len()
                    )));
                }
                ws
            }
            None => edges
                .iter()
                .map(|(u, v)| label(format!("W_{u}_{v}")))
                .collect(),
        };
        for ((u, v), w) in edges.into_iter().zip(&ws) {
            if all_v.contains(w) {
                return Err(GraphError::InvalidPlan(format!(
                    "associated node {w} is a node of K_n"
                )));
            }
            entries.push(PlanEntry::new(u, v, w.clone(), FormChoice::Canonical));
        }
        assoc.push(ws);
    }
    let plan = EliminationPlan::new(entries)?;

    let mut part_of: BTreeMap<Label, usize> = BTreeMap::new();
    for (i, part) in spec.parts.iter().enumerate() {
        if part.is_empty() {
            return Err(GraphError::LayoutCondition {
                clause: "partition",
                detail: format!("part {} is empty", i + 1),
            });
        }
        for x in part {
            if part_of.insert(x.clone(), i).is_some() {
                return Err(GraphError::LayoutCondition {
                    clause: "partition",
                    detail: format!("node {x} appears in more than one part"),
                });
            }
        }
    }
    let expected: NodeSet = all_v
        .iter()
        .cloned()
        .chain(assoc.iter().flatten().cloned())
        .collect();
    let covered: NodeSet = part_of.keys().cloned().collect();
    if covered != expected {
        let missing: Vec<String> = expected.difference(&covered).map(|l| l.to_string()).collect();
        let extra: Vec<String> = covered.difference(&expected).map(|l| l.to_string()).collect();
        return Err(GraphError::LayoutCondition {
            clause: "partition",
            detail: format!(
                "parts must cover V and all W_l exactly (missing [{}], unexpected [{}])",
                missing.join(" "),
                extra.join(" ")
            ),
        });
    }

    let single_part = |nodes: &[Label], what: String| -> Result<Option<usize>, GraphError> {
        let ps: BTreeSet<usize> = nodes.iter().map(|x| part_of[x]).collect();
        match ps.len() {
            0 => Ok(None),
            1 => Ok(ps.into_iter().next()),
            _ => Err(GraphError::LayoutCondition {
                clause: "i",
                detail: format!("{what} is split across several parts"),
            }),
        }
    };
    let mut group_parts = Vec::new();
    for (l, group) in spec.groups.iter().enumerate() {
        let vi = single_part(group, format!("V_{}", l + 1))?.expect("nonempty group");
        if let Some(wj) = single_part(&assoc[l], format!("W_{}", l + 1))? {
            if wj == vi {
                return Err(GraphError::LayoutCondition {
                    clause: "i",
                    detail: format!("V_{0} and W_{0} share part {1}", l + 1, vi + 1),
                });
            }
        }
        group_parts.push(vi);
    }
    for l in 0..group_parts.len() {
        for l2 in l + 1..group_parts.len() {
            if group_parts[l] == group_parts[l2] {
                return Err(GraphError::LayoutCondition {
                    clause: "ii",
                    detail: format!(
                        "V_{} and V_{} share part {}",
                        l + 1,
                        l2 + 1,
                        group_parts[l] + 1
                    ),
                });
            }
        }
    }

    let kn_nodes: Vec<Label> = all_v.into_iter().collect();
    let kn = Graph::complete_on(complete_graph_name(&kn_nodes), &kn_nodes);
    let sizes: Vec<String> = spec.parts.iter().map(|p| p.len().to_string()).collect();
    let target =
        Graph::complete_multipartite_on(format!("K{}_layout", sizes.join(",")), &spec.parts)?;
    plan.check_target(&kn, &target)?;
    Ok(Layout {
        kn,
        target,
        plan,
        groups: spec.groups.clone(),
        assoc,
    })
}
