//! Labeled simple undirected graphs.
//!
//! Nodes carry string labels with a natural total order (digit runs compare
//! numerically, so `"9" < "10"`). Node and edge iteration order follows that
//! order, which fixes the coordinate order of every vector over `E`.

mod layout;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub use layout::{
    build_bipartite_layout, build_kpartite_layout, build_trielim_graph, EliminationPlan,
    KPartiteSpec, Layout, PlanEntry,
};

pub type NodeSet = BTreeSet<Label>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid node label {0:?}")]
    InvalidLabel(String),
    #[error("unknown node {0}")]
    UnknownNode(Label),
    #[error("unknown edge {0}-{1}")]
    UnknownEdge(Label, Label),
    #[error("loop at node {0}")]
    Loop(Label),
    #[error("node {0} already exists")]
    DuplicateNode(Label),
    #[error("extra edge {0}-{1} re-introduces an eliminated edge")]
    EliminatedEdgeReintroduced(Label, Label),
    #[error("invalid elimination plan: {0}")]
    InvalidPlan(String),
    #[error("layout needs at least 5 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("layout condition ({clause}) violated: {detail}")]
    LayoutCondition { clause: &'static str, detail: String },
}

/// Opaque node label.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Label(String);

impl Label {
    pub fn new(s: impl Into<String>) -> Result<Self, GraphError> {
        let s = s.into();
        if s.is_empty() || s.chars().any(|c| c.is_whitespace() || c == '#') {
            return Err(GraphError::InvalidLabel(s));
        }
        Ok(Label(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

/// Shorthand for building labels from trusted literals.
///
/// Panics on labels containing whitespace or `#`.
pub fn label(s: impl Into<String>) -> Label {
    Label::new(s).expect("valid label literal")
}

pub fn node_set<I, S>(items: I) -> NodeSet
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    items.into_iter().map(label).collect()
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a.as_bytes(), b.as_bytes());
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let da = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let db = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let na = trim_zeros(&a[..da]);
                let nb = trim_zeros(&b[..db]);
                let ord = na.len().cmp(&nb.len()).then_with(|| na.cmp(nb));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[da..];
                b = &b[db..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

fn trim_zeros(d: &[u8]) -> &[u8] {
    let k = d.iter().take_while(|&&c| c == b'0').count();
    &d[k.min(d.len().saturating_sub(1))..]
}

/// Unordered edge, stored with the smaller label first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(Label, Label);

impl Edge {
    pub fn new(u: Label, v: Label) -> Result<Self, GraphError> {
        match u.cmp(&v) {
            Ordering::Less => Ok(Edge(u, v)),
            Ordering::Greater => Ok(Edge(v, u)),
            Ordering::Equal => Err(GraphError::Loop(u)),
        }
    }

    pub fn lo(&self) -> &Label {
        &self.0
    }

    pub fn hi(&self) -> &Label {
        &self.1
    }

    pub fn contains(&self, x: &Label) -> bool {
        &self.0 == x || &self.1 == x
    }

    /// The endpoint that is not `x`.
    pub fn other(&self, x: &Label) -> Option<&Label> {
        if &self.0 == x {
            Some(&self.1)
        } else if &self.1 == x {
            Some(&self.0)
        } else {
            None
        }
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Simple undirected graph with a deterministic node and edge order.
///
/// Graphs are immutable values; every transformation returns a new graph.
/// Equality compares node and edge sets and ignores the name.
#[derive(Clone)]
pub struct Graph {
    name: String,
    nodes: Vec<Label>,
    index: BTreeMap<Label, usize>,
    edges: Vec<(usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
    adj: Vec<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("name", &self.name)
            .field("nodes", &self.nodes)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn new<N, E>(name: impl Into<String>, nodes: N, edges: E) -> Result<Self, GraphError>
    where
        N: IntoIterator<Item = Label>,
        E: IntoIterator<Item = (Label, Label)>,
    {
        let node_set: BTreeSet<Label> = nodes.into_iter().collect();
        let nodes: Vec<Label> = node_set.into_iter().collect();
        let index: BTreeMap<Label, usize> =
            nodes.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let mut pairs = BTreeSet::new();
        for (u, v) in edges {
            let iu = *index.get(&u).ok_or_else(|| GraphError::UnknownNode(u.clone()))?;
            let iv = *index.get(&v).ok_or_else(|| GraphError::UnknownNode(v.clone()))?;
            if iu == iv {
                return Err(GraphError::Loop(u));
            }
            pairs.insert((iu.min(iv), iu.max(iv)));
        }
        let edges: Vec<(usize, usize)> = pairs.into_iter().collect();
        let edge_index = edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let mut adj = vec![Vec::new(); nodes.len()];
        for &(i, j) in &edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph {
            name: name.into(),
            nodes,
            index,
            edges,
            edge_index,
            adj,
        })
    }

    /// Complete graph on the given labels.
    pub fn complete_on(name: impl Into<String>, labels: &[Label]) -> Self {
        let mut edges = Vec::new();
        for (i, u) in labels.iter().enumerate() {
            for v in &labels[i + 1..] {
                edges.push((u.clone(), v.clone()));
            }
        }
        Graph::new(name, labels.iter().cloned(), edges).expect("complete graph on distinct labels")
    }

    /// `K_n` on labels `1..=n`.
    pub fn complete(n: usize) -> Self {
        let labels: Vec<Label> = (1..=n).map(|i| label(i.to_string())).collect();
        Graph::complete_on(format!("K{n}"), &labels)
    }

    /// Cycle `C_n` on labels `1..=n` with edges `12, 23, ..., n1`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three nodes");
        let labels: Vec<Label> = (1..=n).map(|i| label(i.to_string())).collect();
        let edges = (0..n).map(|i| (labels[i].clone(), labels[(i + 1) % n].clone()));
        Graph::new(format!("C{n}"), labels.clone(), edges).expect("cycle")
    }

    /// Path `P_n` on labels `1..=n`.
    pub fn path(n: usize) -> Self {
        let labels: Vec<Label> = (1..=n).map(|i| label(i.to_string())).collect();
        let edges = labels.windows(2).map(|w| (w[0].clone(), w[1].clone()));
        Graph::new(format!("P{n}"), labels.clone(), edges).expect("path")
    }

    /// Complete multipartite graph on explicit parts.
    pub fn complete_multipartite_on(
        name: impl Into<String>,
        parts: &[Vec<Label>],
    ) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for l in parts.iter().flatten() {
            if !seen.insert(l.clone()) {
                return Err(GraphError::DuplicateNode(l.clone()));
            }
        }
        let mut edges = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            for q in &parts[i + 1..] {
                for u in p {
                    for v in q {
                        edges.push((u.clone(), v.clone()));
                    }
                }
            }
        }
        Graph::new(name, seen, edges)
    }

    /// Complete multipartite graph `K_{s1,...,sk}` with consecutive labels
    /// `1..` assigned part by part.
    pub fn complete_multipartite(sizes: &[usize]) -> Self {
        let mut next = 1;
        let parts: Vec<Vec<Label>> = sizes
            .iter()
            .map(|&s| {
                let p = (next..next + s).map(|i| label(i.to_string())).collect();
                next += s;
                p
            })
            .collect();
        let name = format!(
            "K{}",
            sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
        );
        Graph::complete_multipartite_on(name, &parts).expect("distinct consecutive labels")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(&self, name: impl Into<String>) -> Self {
        Graph {
            name: name.into(),
            ..self.clone()
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[Label] {
        &self.nodes
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.nodes[i]
    }

    pub fn node_index(&self, l: &Label) -> Option<usize> {
        self.index.get(l).copied()
    }

    pub fn require_node(&self, l: &Label) -> Result<usize, GraphError> {
        self.node_index(l).ok_or_else(|| GraphError::UnknownNode(l.clone()))
    }

    pub fn has_node(&self, l: &Label) -> bool {
        self.index.contains_key(l)
    }

    /// Edge endpoints by node index, in edge order.
    pub fn edge_pairs(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> Edge {
        let (i, j) = self.edges[k];
        Edge(self.nodes[i].clone(), self.nodes[j].clone())
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.edges.len()).map(move |k| self.edge(k))
    }

    pub fn edge_id_by_index(&self, i: usize, j: usize) -> Option<usize> {
        self.edge_index.get(&(i.min(j), i.max(j))).copied()
    }

    pub fn edge_id(&self, u: &Label, v: &Label) -> Option<usize> {
        let (i, j) = (self.node_index(u)?, self.node_index(v)?);
        self.edge_id_by_index(i, j)
    }

    pub fn require_edge(&self, u: &Label, v: &Label) -> Result<usize, GraphError> {
        self.edge_id(u, v)
            .ok_or_else(|| GraphError::UnknownEdge(u.clone(), v.clone()))
    }

    pub fn has_edge(&self, u: &Label, v: &Label) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn neighbor_indices(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    /// `N_G(v)`.
    pub fn neighbors(&self, v: &Label) -> Result<NodeSet, GraphError> {
        let i = self.require_node(v)?;
        Ok(self.adj[i].iter().map(|&j| self.nodes[j].clone()).collect())
    }

    pub fn degree(&self, v: &Label) -> Result<usize, GraphError> {
        Ok(self.adj[self.require_node(v)?].len())
    }

    /// `G/uv`: the merged node keeps label `u`, neighbour sets are unioned.
    pub fn contract_edge(&self, u: &Label, v: &Label) -> Result<Graph, GraphError> {
        self.require_edge(u, v)?;
        let nodes = self.nodes.iter().filter(|&x| x != v).cloned();
        let edges = self.edges().filter_map(|e| {
            let a = if e.lo() == v { u.clone() } else { e.lo().clone() };
            let b = if e.hi() == v { u.clone() } else { e.hi().clone() };
            (a != b).then_some((a, b))
        });
        Graph::new(format!("{}/{}-{}", self.name, u, v), nodes, edges)
    }

    /// `G - w`.
    pub fn remove_node(&self, w: &Label) -> Result<Graph, GraphError> {
        self.require_node(w)?;
        let nodes = self.nodes.iter().filter(|&x| x != w).cloned();
        let edges = self
            .edges()
            .filter(|e| !e.contains(w))
            .map(|e| (e.0, e.1));
        Graph::new(format!("{}-{}", self.name, w), nodes, edges)
    }

    /// Subgraph induced by `keep`.
    pub fn induced(&self, keep: &NodeSet) -> Result<Graph, GraphError> {
        for l in keep {
            self.require_node(l)?;
        }
        let edges = self
            .edges()
            .filter(|e| keep.contains(e.lo()) && keep.contains(e.hi()))
            .map(|e| (e.0, e.1));
        Graph::new(self.name.clone(), keep.iter().cloned(), edges)
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.nodes.iter().all(|l| other.has_node(l))
            && self.edges().all(|e| other.has_edge(e.lo(), e.hi()))
    }

    pub fn is_independent_set(&self, set: &NodeSet) -> bool {
        set.iter().all(|a| set.iter().all(|b| a == b || !self.has_edge(a, b)))
    }

    pub fn is_complete(&self) -> bool {
        let n = self.nodes.len();
        self.edges.len() == n * n.saturating_sub(1) / 2
    }

    /// Parts of a complete multipartite graph (non-adjacency classes), or
    /// `None` if the graph is not complete multipartite. `K_n` yields `n`
    /// singleton parts.
    pub fn multipartite_parts(&self) -> Option<Vec<Vec<usize>>> {
        let n = self.nodes.len();
        let mut part_of = vec![usize::MAX; n];
        let mut parts: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            if part_of[i] != usize::MAX {
                continue;
            }
            let class: Vec<usize> = (0..n)
                .filter(|&j| j == i || self.edge_id_by_index(i, j).is_none())
                .collect();
            for &j in &class {
                if part_of[j] != usize::MAX {
                    return None;
                }
                part_of[j] = parts.len();
            }
            parts.push(class);
        }
        for (a, pa) in parts.iter().enumerate() {
            for &i in pa {
                for &j in pa {
                    if i != j && self.edge_id_by_index(i, j).is_some() {
                        return None;
                    }
                }
                for (b, pb) in parts.iter().enumerate() {
                    if a != b && pb.iter().any(|&j| self.edge_id_by_index(i, j).is_none()) {
                        return None;
                    }
                }
            }
        }
        Some(parts)
    }

    /// Node set from label strings, checking membership.
    pub fn node_set_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<NodeSet, GraphError> {
        labels
            .iter()
            .map(|s| {
                let l = Label::new(s.as_ref())?;
                self.require_node(&l)?;
                Ok(l)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: &str, b: &str) -> (Label, Label) {
        (label(a), label(b))
    }

    #[test]
    fn natural_label_order() {
        let mut v = vec![label("10"), label("9"), label("A_1_2"), label("A_2"), label("A_1")];
        v.sort();
        let s: Vec<&str> = v.iter().map(|l| l.as_str()).collect();
        assert_eq!(s, ["9", "10", "A_1", "A_1_2", "A_2"]);
        assert!(label("007") != label("7"));
        assert_ne!(label("007").cmp(&label("7")), Ordering::Equal);
    }

    #[test]
    fn rejects_bad_labels_and_loops() {
        assert!(Label::new("a b").is_err());
        assert!(Label::new("").is_err());
        assert!(Label::new("x#").is_err());
        let err = Graph::new("g", node_set(["1", "2"]), [e("1", "1")]).unwrap_err();
        assert_eq!(err, GraphError::Loop(label("1")));
        let err = Graph::new("g", node_set(["1"]), [e("1", "2")]).unwrap_err();
        assert_eq!(err, GraphError::UnknownNode(label("2")));
    }

    #[test]
    fn contract_triangle_to_edge() {
        let k3 = Graph::complete(3);
        let g = k3.contract_edge(&label("1"), &label("2")).unwrap();
        let expect = Graph::new("", node_set(["1", "3"]), [e("1", "3")]).unwrap();
        assert_eq!(g, expect);
    }

    #[test]
    fn contract_path() {
        let p = Graph::path(3);
        let g = p.contract_edge(&label("2"), &label("3")).unwrap();
        let expect = Graph::new("", node_set(["1", "2"]), [e("1", "2")]).unwrap();
        assert_eq!(g, expect);
        assert!(matches!(
            p.contract_edge(&label("1"), &label("3")),
            Err(GraphError::UnknownEdge(..))
        ));
    }

    #[test]
    fn contract_k3113_edge_16() {
        let g = Graph::complete_multipartite(&[3, 1, 1, 3]);
        let n6 = g.neighbors(&label("6")).unwrap();
        let n1 = g.neighbors(&label("1")).unwrap();
        let c = g.contract_edge(&label("1"), &label("6")).unwrap();
        assert_eq!(c.node_count(), 7);
        let mut expect: NodeSet = n1.union(&n6).cloned().collect();
        expect.remove(&label("1"));
        expect.remove(&label("6"));
        assert_eq!(c.neighbors(&label("1")).unwrap(), expect);
        // hand-computed: 1 gains 2 and 3 from node 6
        assert_eq!(expect, node_set(["2", "3", "4", "5", "7", "8"]));
    }

    #[test]
    fn multipartite_detection() {
        let g = Graph::complete_multipartite(&[3, 1, 1, 3]);
        let parts = g.multipartite_parts().unwrap();
        let sizes: Vec<usize> = parts.iter().map(|p| p.len()).collect();
        assert_eq!(sizes, [3, 1, 1, 3]);
        assert_eq!(g.edge_count(), 22);
        assert_eq!(Graph::complete(5).multipartite_parts().unwrap().len(), 5);
        assert!(Graph::cycle(5).multipartite_parts().is_none());
        assert!(Graph::cycle(4).multipartite_parts().is_some());
    }
}
