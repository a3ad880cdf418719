//! Command-line front end. [`run`] is the whole program minus process I/O,
//! so tests can drive it directly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::catalog::FamilySpec;
use crate::cut::{FACET_CAP, HARD_CAP};
use crate::equivalence::{self, EquivWitness};
use crate::format;
use crate::graph::{build_bipartite_layout, build_kpartite_layout, build_trielim_graph, Graph};
use crate::inequality::Inequality;
use crate::trielim::{self, EliminationResult};
use crate::verify::{self, fmt_set};

pub const DEFAULT_MAX_NODES: usize = 16;

/// Exit code 0 on success, 1 on a negative verdict, 2 on usage, parse or
/// cap errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> Self {
        CommandResult { code: 0, stdout, stderr: String::new() }
    }

    fn verdict(positive: bool, stdout: String) -> Self {
        CommandResult { code: if positive { 0 } else { 1 }, stdout, stderr: String::new() }
    }

    fn usage(msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        CommandResult { code: 2, stdout: String::new(), stderr }
    }
}

#[derive(Parser, Debug)]
#[command(name = "cutlift", version, about = "Triangular elimination and verification for cut-polytope inequalities")]
struct Cli {
    /// Refuse inputs with more nodes than this (at most the enumeration hard cap).
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_NODES)]
    max_nodes: usize,
    /// Graph file for inequalities over a graph that is not built in.
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Lift an inequality by triangular elimination.
    Lift(LiftArgs),
    /// Check validity or facetness by cut enumeration.
    Verify(VerifyArgs),
    /// Decide permutation-switching equivalence.
    Equiv(EquivArgs),
    /// Generate a catalog inequality.
    Catalog(CatalogArgs),
    /// List every facet of the cut polytope of a tiny graph.
    Hull,
    /// Print the canonical orbit representative.
    Canon {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Args, Debug)]
struct LiftArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, conflicts_with_all = ["bipartite", "kpartite"])]
    plan: Option<PathBuf>,
    /// Target graph for `--plan` (file or built-in name); defaults to the
    /// plain triangular elimination graph.
    #[arg(long, requires = "plan")]
    target: Option<String>,
    #[arg(long, num_args = 2, value_names = ["P", "Q"], conflicts_with = "kpartite")]
    bipartite: Option<Vec<usize>>,
    #[arg(long)]
    kpartite: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    check_conditions: bool,
    /// Drop associated nodes left without support.
    #[arg(long)]
    prune: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, conflicts_with = "valid", required_unless_present = "valid")]
    facet: bool,
    #[arg(long)]
    valid: bool,
    #[arg(long)]
    certificate: bool,
}

#[derive(Args, Debug)]
struct EquivArgs {
    first: PathBuf,
    second: PathBuf,
    /// Use the bipartite criterion on `K_n` with the first `P` labels as the A side.
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    fast_bipartite: Option<Vec<usize>>,
    /// Also run the brute-force search on the `K_{r,s}` eliminations.
    #[arg(long, requires = "fast_bipartite")]
    cross_check: bool,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    /// triangle | cycle | pentagonal | hypermetric
    family: String,
    #[arg(long)]
    n: Option<usize>,
    /// Cycle edge positions with coefficient +1 (edge i joins i and i+1).
    #[arg(long = "F", value_delimiter = ',')]
    f: Vec<usize>,
    /// Hypermetric weights.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    b: Vec<i64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Honors `CUTLIFT_THREADS` by sizing the global rayon pool.
pub fn init_threads() {
    if let Some(n) = std::env::var("CUTLIFT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialization is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CommandResult::ok(text)
                }
                _ => CommandResult::usage(text),
            };
        }
    };
    if cli.max_nodes > HARD_CAP {
        return CommandResult::usage(format!(
            "--max-nodes {} exceeds the hard cap of {HARD_CAP} nodes",
            cli.max_nodes
        ));
    }
    let ctx = Ctx { max_nodes: cli.max_nodes, graph: cli.graph };
    let out = match cli.cmd {
        Cmd::Lift(a) => ctx.lift(a),
        Cmd::Verify(a) => ctx.verify(a),
        Cmd::Equiv(a) => ctx.equiv(a),
        Cmd::Catalog(a) => ctx.catalog(a),
        Cmd::Hull => ctx.hull(),
        Cmd::Canon { input } => ctx.canon(&input),
    };
    out.unwrap_or_else(CommandResult::usage)
}

struct Ctx {
    max_nodes: usize,
    graph: Option<PathBuf>,
}

type Res = Result<CommandResult, String>;

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_out(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn err<E: std::fmt::Display>(path: &Path) -> impl Fn(E) -> String + '_ {
    move |e| format!("{}: {e}", path.display())
}

/// A graph file, or a built-in name such as `K5` when no such file exists.
fn load_graph(spec: &str) -> Result<Graph, String> {
    let p = Path::new(spec);
    if p.exists() {
        return format::parse_graph(&read(p)?).map_err(err(p));
    }
    format::builtin_graph(spec).ok_or_else(|| format!("{spec}: no such file or built-in graph"))
}

fn witness_line(w: &EquivWitness) -> String {
    let mut s = format!("EQUIV {}", w.render());
    if w.scale != crate::inequality::rat(1) {
        let _ = write!(s, " scale={}", format::fmt_rational(&w.scale));
    }
    s
}

impl Ctx {
    fn check_cap(&self, g: &Graph) -> Result<(), String> {
        if g.node_count() > self.max_nodes {
            return Err(format!(
                "refusing {}: {} nodes exceed the --max-nodes cap of {} (hard cap {HARD_CAP})",
                g.name(),
                g.node_count(),
                self.max_nodes
            ));
        }
        Ok(())
    }

    fn load_ineq(&self, path: &Path) -> Result<Inequality, String> {
        let g = match &self.graph {
            Some(gp) => Some(Arc::new(format::parse_graph(&read(gp)?).map_err(err(gp))?)),
            None => None,
        };
        format::parse_inequality_doc(&read(path)?, g).map_err(err(path))
    }

    fn lift(&self, a: LiftArgs) -> Res {
        let src = self.load_ineq(&a.input)?;
        let mut report = None;
        let res: EliminationResult = if let Some(pq) = &a.bipartite {
            let (p, q) = (pq[0], pq[1]);
            let layout = build_bipartite_layout(p, q).map_err(|e| e.to_string())?;
            if p + q != src.graph().node_count() || !src.graph().is_complete() {
                return Err(format!(
                    "--bipartite {p} {q} needs an inequality on K_{} (got {} with {} nodes)",
                    p + q,
                    src.graph().name(),
                    src.graph().node_count()
                ));
            }
            self.check_cap(&layout.target)?;
            let map = equivalence::bipartite_relabeling(src.graph(), p);
            let kn = Arc::new(layout.kn.clone());
            let src = src.relabel(&map, kn).map_err(|e| e.to_string())?;
            if a.check_conditions {
                report = Some(trielim::check_facet_conditions(&src, &layout.kn, &layout.target, &layout.plan));
            }
            trielim::eliminate_multistage(&src, &layout).map_err(|e| e.to_string())?
        } else if let Some(kp) = &a.kpartite {
            let spec = format::parse_kpartite(&read(kp)?).map_err(err(kp))?;
            let layout = build_kpartite_layout(&spec).map_err(|e| e.to_string())?;
            self.check_cap(&layout.target)?;
            let src = src.with_graph(Arc::new(layout.kn.clone())).map_err(|e| e.to_string())?;
            if a.check_conditions {
                report = Some(trielim::check_facet_conditions(&src, &layout.kn, &layout.target, &layout.plan));
            }
            trielim::eliminate_multistage(&src, &layout).map_err(|e| e.to_string())?
        } else if let Some(pp) = &a.plan {
            let plan = format::parse_plan(&read(pp)?).map_err(err(pp))?;
            let target = match &a.target {
                Some(t) => load_graph(t)?,
                None => build_trielim_graph(src.graph(), &plan, &[]).map_err(|e| e.to_string())?,
            };
            self.check_cap(&target)?;
            if a.check_conditions {
                report = Some(trielim::check_facet_conditions(&src, src.graph(), &target, &plan));
            }
            trielim::eliminate(&src, Arc::new(target), &plan).map_err(|e| e.to_string())?
        } else {
            return Err("lift needs one of --plan, --bipartite or --kpartite".into());
        };
        let res = if a.prune { res.prune_unused().map_err(|e| e.to_string())? } else { res };

        let out = &res.output;
        let bundle = format::write_bundle(out);
        let mut s = format!(
            "LIFTED graph={} nodes={} edges={} support={} rhs={}\n",
            out.graph().name(),
            out.graph().node_count(),
            out.graph().edge_count(),
            out.support_size(),
            format::fmt_rational(out.rhs())
        );
        let mut positive = true;
        if let Some(r) = report {
            positive = r.all_pass();
            s.push_str(&r.render());
        }
        match &a.out {
            Some(p) => write_out(p, &bundle)?,
            None => s.push_str(&bundle),
        }
        Ok(CommandResult::verdict(positive, s))
    }

    fn verify(&self, a: VerifyArgs) -> Res {
        let q = self.load_ineq(&a.input)?;
        self.check_cap(q.graph())?;
        let validity = verify::check_validity(&q, self.max_nodes).map_err(|e| e.to_string())?;
        if let Some(s) = validity.violating {
            return Ok(CommandResult::verdict(false, format!("INVALID violating={}\n", fmt_set(&s))));
        }
        let n = q.graph().node_count();
        if n > FACET_CAP {
            if a.facet {
                return Err(format!("refusing facet check: {n} nodes exceed the facet cap of {FACET_CAP}"));
            }
            return Ok(CommandResult::ok("VALID\n".into()));
        }
        let (facet, cert) = verify::facet_check(&q, self.max_nodes).map_err(|e| e.to_string())?;
        let word = match (a.facet, facet) {
            (false, _) => "VALID",
            (true, true) => "FACET",
            (true, false) => "NOT_FACET",
        };
        let mut s = format!("{word} dim={} need={}\n", cert.affine_dim, cert.need);
        if a.certificate {
            for r in &cert.roots {
                let _ = writeln!(s, "root {}", fmt_set(r));
            }
        }
        Ok(CommandResult::verdict(!a.facet || facet, s))
    }

    fn equiv(&self, a: EquivArgs) -> Res {
        let q1 = self.load_ineq(&a.first)?;
        let q2 = self.load_ineq(&a.second)?;
        self.check_cap(q1.graph())?;
        let Some(pq) = &a.fast_bipartite else {
            let (eq, w) = equivalence::are_ps_equivalent(&q1, &q2).map_err(|e| e.to_string())?;
            let line = w.as_ref().map(witness_line).unwrap_or_else(|| "NOT_EQUIV".into());
            return Ok(CommandResult::verdict(eq, line + "\n"));
        };
        let (p, q) = (pq[0], pq[1]);
        let fast = equivalence::fast_equiv_bipartite(&q1, &q2, p, q).map_err(|e| e.to_string())?;
        let mut s = fast
            .witness
            .as_ref()
            .map(witness_line)
            .unwrap_or_else(|| "NOT_EQUIV".into());
        s.push('\n');
        if !a.cross_check {
            return Ok(CommandResult::verdict(fast.equivalent, s));
        }
        let layout = build_bipartite_layout(p, q).map_err(|e| e.to_string())?;
        self.check_cap(&layout.target)?;
        let map = equivalence::bipartite_relabeling(q1.graph(), p);
        let kn = Arc::new(layout.kn.clone());
        let lift = |x: &Inequality| -> Result<Inequality, String> {
            let x = x.relabel(&map, kn.clone()).map_err(|e| e.to_string())?;
            Ok(trielim::eliminate_multistage(&x, &layout).map_err(|e| e.to_string())?.output)
        };
        let (l1, l2) = (lift(&q1)?, lift(&q2)?);
        let (brute, w) = equivalence::are_ps_equivalent(&l1, &l2).map_err(|e| e.to_string())?;
        let _ = writeln!(
            s,
            "brute {}",
            w.as_ref().map(witness_line).unwrap_or_else(|| "NOT_EQUIV".into())
        );
        if brute != fast.equivalent {
            s.push_str("MISMATCH\n");
            return Ok(CommandResult { code: 2, stdout: s, stderr: String::new() });
        }
        Ok(CommandResult::verdict(fast.equivalent, s))
    }

    fn catalog(&self, a: CatalogArgs) -> Res {
        let spec = match a.family.as_str() {
            "triangle" => FamilySpec::Triangle,
            "pentagonal" => FamilySpec::Pentagonal,
            "cycle" => FamilySpec::Cycle {
                n: a.n.ok_or("cycle needs --n")?,
                odd: a.f.clone(),
            },
            "hypermetric" => {
                if let Some(n) = a.n {
                    if n != a.b.len() {
                        return Err(format!("--n {n} but {} weights given", a.b.len()));
                    }
                }
                FamilySpec::Hypermetric { b: a.b.clone() }
            }
            f => return Err(format!("unknown family {f} (triangle, cycle, pentagonal, hypermetric)")),
        };
        let q = spec.build().map_err(|e| e.to_string())?;
        let text = format::write_inequality(&q);
        match &a.out {
            Some(p) => {
                write_out(p, &text)?;
                Ok(CommandResult::ok(format!("WROTE {}\n", p.display())))
            }
            None => Ok(CommandResult::ok(text)),
        }
    }

    fn hull(&self) -> Res {
        let gp = self.graph.as_ref().ok_or("hull needs --graph")?;
        let g = load_graph(&gp.to_string_lossy())?;
        let facets = verify::hull_oracle(&g).map_err(|e| e.to_string())?;
        let mut s = format!("FACETS count={}\n", facets.len());
        for f in &facets {
            s.push_str(&format::write_inequality(f));
        }
        Ok(CommandResult::ok(s))
    }

    fn canon(&self, input: &Path) -> Res {
        let q = self.load_ineq(input)?;
        self.check_cap(q.graph())?;
        let c = equivalence::canonical_form(&q).map_err(|e| e.to_string())?;
        Ok(CommandResult::ok(format::write_inequality(&c)))
    }
}
