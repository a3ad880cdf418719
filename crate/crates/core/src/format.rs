//! Line-oriented text formats: graphs, inequalities, plans, k-partite
//! layout specs, and `.cib` bundles (graph + inequality separated by `---`).
//!
//! Rationals are always written as `p/q`; integers are accepted on input.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::graph::{EliminationPlan, Graph, GraphError, KPartiteSpec, Label, PlanEntry};
use crate::inequality::{FormChoice, IneqError, Inequality, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg} (at {token:?})")]
    Parse {
        line: usize,
        token: String,
        msg: String,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ineq(#[from] IneqError),
    #[error("inequality refers to graph {0}, which is neither given nor built in")]
    UnknownGraph(String),
}

fn perr(line: usize, token: &str, msg: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        token: token.to_string(),
        msg: msg.into(),
    }
}

/// Non-blank, comment-stripped lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn parse_label(line: usize, tok: &str) -> Result<Label, FormatError> {
    Label::new(tok).map_err(|e| perr(line, tok, e.to_string()))
}

pub fn parse_rational(line: usize, tok: &str) -> Result<Rational, FormatError> {
    let bad = || perr(line, tok, "expected a rational p/q");
    let (p, q) = match tok.split_once('/') {
        Some((p, q)) => (p, q),
        None => (tok, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q == BigInt::from(0) {
        return Err(perr(line, tok, "zero denominator"));
    }
    Ok(Rational::new(p, q))
}

pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn expect_len(line: usize, toks: &[&str], n: usize, what: &str) -> Result<(), FormatError> {
    if toks.len() != n {
        let tok = toks.get(n).or(toks.last()).copied().unwrap_or("");
        return Err(perr(line, tok, format!("malformed {what} line")));
    }
    Ok(())
}

// ---- graphs

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("graph {}\n", g.name());
    for l in g.nodes() {
        let _ = writeln!(s, "node {l}");
    }
    for e in g.edges() {
        let _ = writeln!(s, "edge {} {}", e.lo(), e.hi());
    }
    s
}

pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    parse_graph_at(text, 0)
}

fn parse_graph_at(text: &str, offset: usize) -> Result<Graph, FormatError> {
    let mut name = None;
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (ln, toks) in lines(text) {
        let ln = ln + offset;
        match toks[0] {
            "graph" if name.is_none() => {
                expect_len(ln, &toks, 2, "graph")?;
                name = Some(toks[1].to_string());
            }
            _ if name.is_none() => return Err(perr(ln, toks[0], "expected `graph <name>` header")),
            "node" => {
                expect_len(ln, &toks, 2, "node")?;
                let l = parse_label(ln, toks[1])?;
                if nodes.contains(&l) {
                    return Err(perr(ln, toks[1], "duplicate node"));
                }
                nodes.push(l);
            }
            "edge" => {
                expect_len(ln, &toks, 3, "edge")?;
                let (u, v) = (parse_label(ln, toks[1])?, parse_label(ln, toks[2])?);
                if u == v {
                    return Err(perr(ln, toks[2], "loop edge"));
                }
                if !nodes.contains(&u) {
                    return Err(perr(ln, toks[1], "edge endpoint is not a declared node"));
                }
                if !nodes.contains(&v) {
                    return Err(perr(ln, toks[2], "edge endpoint is not a declared node"));
                }
                edges.push((u, v));
            }
            t => return Err(perr(ln, t, "unknown directive")),
        }
    }
    let name = name.ok_or_else(|| perr(offset + 1, "", "empty graph file"))?;
    Ok(Graph::new(name, nodes, edges)?)
}

/// `K<n>`, `C<n>`, `P<n>` and `K<a>,<b>,...` on labels `1..`.
pub fn builtin_graph(name: &str) -> Option<Graph> {
    let num = |s: &str| s.parse::<usize>().ok().filter(|&n| (1..=64).contains(&n));
    if let Some(rest) = name.strip_prefix('K') {
        if rest.contains(',') {
            let sizes: Option<Vec<usize>> = rest.split(',').map(num).collect();
            return sizes.map(|s| Graph::complete_multipartite(&s));
        }
        return num(rest).map(Graph::complete);
    }
    if let Some(rest) = name.strip_prefix('C') {
        return num(rest).filter(|&n| n >= 3).map(Graph::cycle);
    }
    if let Some(rest) = name.strip_prefix('P') {
        return num(rest).map(Graph::path);
    }
    None
}

// ---- inequalities

pub fn write_inequality(q: &Inequality) -> String {
    let mut s = format!("ineq over {}\n", q.graph().name());
    for (e, c) in q.terms() {
        let _ = writeln!(s, "coef {} {} {}", e.lo(), e.hi(), fmt_rational(c));
    }
    let _ = writeln!(s, "rhs {}", fmt_rational(q.rhs()));
    s
}

/// Parses an inequality; its graph is `graph` when given (names must match),
/// otherwise a built-in graph named in the header.
pub fn parse_inequality(text: &str, graph: Option<Arc<Graph>>) -> Result<Inequality, FormatError> {
    parse_inequality_at(text, graph, 0)
}

fn parse_inequality_at(
    text: &str,
    graph: Option<Arc<Graph>>,
    offset: usize,
) -> Result<Inequality, FormatError> {
    let mut it = lines(text).map(|(l, t)| (l + offset, t));
    let (ln, toks) = it.next().ok_or_else(|| perr(offset + 1, "", "empty inequality file"))?;
    if toks.len() != 3 || toks[0] != "ineq" || toks[1] != "over" {
        return Err(perr(ln, toks[0], "expected `ineq over <graph>` header"));
    }
    let gname = toks[2];
    let g = match graph {
        Some(g) if g.name() == gname => g,
        Some(g) => {
            return Err(perr(
                ln,
                gname,
                format!("inequality is over {gname} but the graph is {}", g.name()),
            ))
        }
        None => Arc::new(
            builtin_graph(gname).ok_or_else(|| FormatError::UnknownGraph(gname.to_string()))?,
        ),
    };
    let mut terms = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut rhs = None;
    for (ln, toks) in it {
        if rhs.is_some() {
            return Err(perr(ln, toks[0], "content after the rhs line"));
        }
        match toks[0] {
            "coef" => {
                expect_len(ln, &toks, 4, "coef")?;
                let (u, v) = (parse_label(ln, toks[1])?, parse_label(ln, toks[2])?);
                if u == v {
                    return Err(perr(ln, toks[2], "loop edge"));
                }
                if !g.has_edge(&u, &v) {
                    return Err(perr(ln, toks[2], format!("{u}-{v} is not an edge of {gname}")));
                }
                if !seen.insert((u.clone().min(v.clone()), u.clone().max(v.clone()))) {
                    return Err(perr(ln, toks[2], "duplicate coefficient"));
                }
                terms.push((u, v, parse_rational(ln, toks[3])?));
            }
            "rhs" => {
                expect_len(ln, &toks, 2, "rhs")?;
                rhs = Some(parse_rational(ln, toks[1])?);
            }
            t => return Err(perr(ln, t, "unknown directive")),
        }
    }
    let rhs = rhs.ok_or_else(|| perr(offset + text.lines().count(), "", "missing rhs line"))?;
    Ok(Inequality::from_terms(g, terms, rhs)?)
}

// ---- bundles

pub fn write_bundle(q: &Inequality) -> String {
    format!("{}---\n{}", write_graph(q.graph()), write_inequality(q))
}

/// Reads either a `.cib` bundle or a bare inequality over a built-in graph
/// (or over `graph`, when supplied).
pub fn parse_inequality_doc(
    text: &str,
    graph: Option<Arc<Graph>>,
) -> Result<Inequality, FormatError> {
    let mut sections = Vec::new();
    let mut start = 0;
    let mut buf = String::new();
    for (i, l) in text.lines().enumerate() {
        if l.trim() == "---" {
            sections.push((start, std::mem::take(&mut buf)));
            start = i + 1;
        } else {
            buf.push_str(l);
            buf.push('\n');
        }
    }
    sections.push((start, buf));
    match sections.as_slice() {
        [(off, ineq)] => parse_inequality_at(ineq, graph, *off),
        [(goff, g), (ioff, ineq)] => {
            let g = Arc::new(parse_graph_at(g, *goff)?);
            parse_inequality_at(ineq, Some(g), *ioff)
        }
        _ => Err(perr(sections[2].0, "---", "a bundle has exactly two sections")),
    }
}

// ---- plans

pub fn write_plan(p: &EliminationPlan) -> String {
    let mut s = String::new();
    for e in p.entries() {
        let _ = writeln!(s, "elim {} {} -> {} {}", e.u, e.v, e.w, e.form);
    }
    s
}

pub fn parse_plan(text: &str) -> Result<EliminationPlan, FormatError> {
    let mut entries = Vec::new();
    for (ln, toks) in lines(text) {
        if toks[0] != "elim" {
            return Err(perr(ln, toks[0], "expected `elim <u> <v> -> <w> [form]`"));
        }
        if !(5..=6).contains(&toks.len()) || toks[3] != "->" {
            let tok = toks.get(3).copied().unwrap_or(toks[0]);
            return Err(perr(ln, tok, "expected `elim <u> <v> -> <w> [form]`"));
        }
        let form = match toks.get(5) {
            Some(f) => f
                .parse::<FormChoice>()
                .map_err(|_| perr(ln, f, "unknown form (uv.w, wv.u, uw.v, uvw, canonical)"))?,
            None => FormChoice::Canonical,
        };
        let (u, v, w) = (
            parse_label(ln, toks[1])?,
            parse_label(ln, toks[2])?,
            parse_label(ln, toks[4])?,
        );
        if u == v {
            return Err(perr(ln, toks[2], "loop edge"));
        }
        entries.push(PlanEntry::new(u, v, w, form));
    }
    Ok(EliminationPlan::new(entries)?)
}

// ---- k-partite specs

/// `group <labels...> [-> <w labels...>]` lines for `V_1..V_m`, then
/// `part <labels...>` lines for the target parts.
pub fn write_kpartite(spec: &KPartiteSpec) -> String {
    let mut s = String::new();
    for (i, g) in spec.groups.iter().enumerate() {
        s.push_str("group");
        for l in g {
            let _ = write!(s, " {l}");
        }
        if let Some(a) = &spec.assoc {
            s.push_str(" ->");
            for l in a.get(i).into_iter().flatten() {
                let _ = write!(s, " {l}");
            }
        }
        s.push('\n');
    }
    for p in &spec.parts {
        s.push_str("part");
        for l in p {
            let _ = write!(s, " {l}");
        }
        s.push('\n');
    }
    s
}

pub fn parse_kpartite(text: &str) -> Result<KPartiteSpec, FormatError> {
    let mut groups = Vec::new();
    let mut assoc: Vec<Option<Vec<Label>>> = Vec::new();
    let mut parts = Vec::new();
    for (ln, toks) in lines(text) {
        let labels = |ts: &[&str]| -> Result<Vec<Label>, FormatError> {
            ts.iter().map(|t| parse_label(ln, t)).collect()
        };
        match toks[0] {
            "group" => {
                let rest = &toks[1..];
                match rest.iter().position(|t| *t == "->") {
                    Some(k) => {
                        groups.push(labels(&rest[..k])?);
                        assoc.push(Some(labels(&rest[k + 1..])?));
                    }
                    None => {
                        groups.push(labels(rest)?);
                        assoc.push(None);
                    }
                }
            }
            "part" => parts.push(labels(&toks[1..])?),
            t => return Err(perr(ln, t, "expected `group` or `part`")),
        }
    }
    let assoc = if assoc.iter().all(Option::is_none) {
        None
    } else if assoc.iter().all(Option::is_some) {
        Some(assoc.into_iter().flatten().collect())
    } else {
        return Err(perr(0, "->", "either every group names its W labels or none does"));
    };
    Ok(KPartiteSpec {
        groups,
        assoc,
        parts,
    })
}
