//! Command-line front end. Every run produces a [`RunReport`]; exit codes are
//! 0 (verified, rigid, certified), 1 (failed, inconclusive, refused), 2 (input error).

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::corresp::isometry_check;
use crate::error::{Error, Result};
use crate::fingroup::FiniteGroup;
use crate::frucht::{
    classical_frucht, combine_directed, combine_undirected, directed_label_degrees, measured_degree_spectrum,
    quantum_frucht_pipeline, undirected_label_degrees, ClassicalGraph, Mode,
};
use crate::io::{parse_json, to_json, GroupFile, IrrepsFile, OperatorFile, ProjectionFile, SCHEMA_VERSION};
use crate::linalg::CVec;
use crate::qgroup::{cayley_graph, central_projection, fourier_multiplier, function_algebra, GroupDual};
use crate::qspace::{verify_quantum_graph, QuantumGraph};
use crate::rigidity::{
    closure_check, convolution_generation_test, gap_certificate, rigid_projection_search, rigidity_verdict,
    ClosureStart, SEPARATION_TOL,
};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const TOL_ENV: &str = "QFRUCHT_TOL";

#[derive(Parser, Debug)]
#[command(
    name = "qfrucht",
    version,
    about = "Quantum graphs, quantum Cayley graphs, Frucht-type combinations and rigidity checks"
)]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Numerical tolerance (default 1e-9, or the QFRUCHT_TOL environment variable).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads for trial loops; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Write the report here instead of standard output.
    #[arg(long, short = 'o', global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Group arguments are a JSON file path or `named:<NAME>` (Zn, Sn, An, Dn, Q8).
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a group and print its structure.
    Group { group: String },
    /// Compute the unitary irreducibles from the regular representation.
    Irreps { group: String },
    /// Quantum Cayley graph of a projection on a group dual.
    Cayley {
        #[arg(long)]
        dual: String,
        #[arg(long, conflicts_with = "central")]
        projection: Option<PathBuf>,
        /// Central projection on these irreducible indices.
        #[arg(long, value_delimiter = ',')]
        central: Option<Vec<usize>>,
        /// Write the adjacency operator as JSON.
        #[arg(long)]
        adjacency_out: Option<PathBuf>,
    },
    /// Check the quantum adjacency axioms for an operator file.
    Verify { operator: PathBuf },
    /// Level-set verdict for a projection on a group dual.
    Rigidity {
        #[arg(long)]
        dual: String,
        #[arg(long, conflicts_with = "central")]
        projection: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        central: Option<Vec<usize>>,
    },
    /// Random search for a rigid projection.
    RigidSearch {
        #[arg(long)]
        dual: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        projection_out: Option<PathBuf>,
    },
    /// Close diagonal matrix coefficients under pointwise product and convolution.
    ClosureCheck {
        group: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Start from the trivial block only.
        #[arg(long)]
        trivial_only: bool,
    },
    /// Perfectness plus rigid projection for a group.
    GapCert {
        group: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Combine quantum graphs (operator files) or classical graphs (graph files).
    Combine {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(required = true)]
        graphs: Vec<PathBuf>,
        #[arg(long)]
        adjacency_out: Option<PathBuf>,
    },
    /// Coloured family of a group dual combined into one undirected quantum graph.
    Frucht {
        #[arg(long)]
        dual: String,
        /// Use the commutative algebra of functions on the group instead of the dual.
        #[arg(long)]
        function_algebra: bool,
        #[arg(long)]
        adjacency_out: Option<PathBuf>,
    },
    /// Classical graph with automorphism group isomorphic to the given group.
    ClassicalFrucht {
        group: String,
        #[arg(long, value_enum, default_value_t = Mode::Directed)]
        mode: Mode,
        /// Fail unless the automorphism group is verified to be the group.
        #[arg(long)]
        verify_aut: bool,
        #[arg(long)]
        graph_out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Isometry between the edge and group-side correspondences.
    CorrespCheck {
        #[arg(long)]
        dual: String,
        /// Irreducible indices; all when omitted.
        #[arg(long, value_delimiter = ',')]
        irreps: Option<Vec<usize>>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Group { .. } => "group",
            Command::Irreps { .. } => "irreps",
            Command::Cayley { .. } => "cayley",
            Command::Verify { .. } => "verify",
            Command::Rigidity { .. } => "rigidity",
            Command::RigidSearch { .. } => "rigid-search",
            Command::ClosureCheck { .. } => "closure-check",
            Command::GapCert { .. } => "gap-cert",
            Command::Combine { .. } => "combine",
            Command::Frucht { .. } => "frucht",
            Command::ClassicalFrucht { .. } => "classical-frucht",
            Command::CorrespCheck { .. } => "corresp-check",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub version: String,
    pub command: Vec<String>,
    pub subcommand: String,
    pub seed: u64,
    pub tol: f64,
    pub jobs: usize,
    pub inputs: Vec<InputDigest>,
    pub status: String,
    pub exit_code: i32,
    pub elapsed_ms: f64,
    pub result: Value,
    pub error: Option<String>,
}

#[derive(Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: Option<RunReport>,
    pub stdout: String,
    pub stderr: String,
}

struct Ctx {
    seed: u64,
    tol: f64,
    jobs: usize,
    inputs: Vec<InputDigest>,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let sha256 = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.push(InputDigest { path: path.display().to_string(), sha256 });
        String::from_utf8(bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    fn group_file(&mut self, source: &str) -> Result<GroupFile> {
        match source.strip_prefix("named:") {
            Some(name) => Ok(GroupFile { named: Some(name.to_string()), ..GroupFile::default() }),
            None => {
                let p = Path::new(source);
                let text = self.read(p)?;
                parse_json(&text, source)
            }
        }
    }

    fn group(&mut self, source: &str) -> Result<FiniteGroup> {
        self.group_file(source)?.build()
    }

    fn dual(&mut self, source: &str) -> Result<GroupDual> {
        let (seed, tol) = (self.seed, self.tol);
        self.group_file(source)?.build_dual(seed, tol)
    }

    fn projection(&mut self, dual: &GroupDual, file: Option<&Path>, central: Option<&[usize]>) -> Result<CVec> {
        match (file, central) {
            (Some(f), _) => {
                let text = self.read(f)?;
                parse_json::<ProjectionFile>(&text, &f.display().to_string())?.build(dual)
            }
            (None, Some(s)) => Ok(dual.to_block(&central_projection(dual, s)?)),
            (None, None) => Err(Error::Input("give --projection or --central".into())),
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn graph_summary(g: &QuantumGraph) -> Value {
    let r = g.report();
    json!({
        "blocks": g.space().blocks(),
        "dimension": g.space().dim(),
        "flags": g.flags(),
        "residuals": {
            "schur": r.schur_residual,
            "real": r.real_residual,
            "adjoint": r.adjoint_residual,
            "loop": r.loop_residual,
            "in_degree": r.in_degree_residual,
            "out_degree": r.out_degree_residual,
        },
        "degree": r.degree,
        "tol": r.tol,
    })
}

type Handled = (&'static str, i32, Value);

fn pass(ok: bool, fail_status: &'static str) -> (&'static str, i32) {
    if ok {
        ("ok", 0)
    } else {
        (fail_status, 1)
    }
}

fn execute(cmd: &Command, ctx: &mut Ctx) -> Result<Handled> {
    let tol = ctx.tol;
    match cmd {
        Command::Group { group } => {
            let g = ctx.group(group)?;
            let labels: Vec<String> = (0..g.order()).map(|k| g.label(k)).collect();
            Ok((
                "ok",
                0,
                json!({ "structure": g.structure_report(), "labels": labels, "group": GroupFile::from_group(&g) }),
            ))
        }
        Command::Irreps { group } => {
            let d = ctx.dual(group)?;
            let checks: Vec<Value> = d
                .irreps()
                .iter()
                .map(|r| json!({ "dim": r.dim(), "homomorphism": r.homomorphism_residual(d.group()), "unitarity": r.unitarity_residual(), "character_norm": r.character_norm() }))
                .collect();
            Ok(("ok", 0, json!({ "irreps": IrrepsFile::from_irreps(d.group(), d.irreps()), "checks": checks })))
        }
        Command::Cayley { dual, projection, central, adjacency_out } => {
            let d = ctx.dual(dual)?;
            let p = ctx.projection(&d, projection.as_deref(), central.as_deref())?;
            let (g, info) = cayley_graph(d.qgroup(), &p, tol)?;
            let op = OperatorFile::from_op(g.adjacency());
            if let Some(path) = adjacency_out {
                write_file(path, &to_json(&op))?;
            }
            Ok(("ok", 0, json!({ "graph": graph_summary(&g), "cayley": info, "adjacency": op })))
        }
        Command::Verify { operator } => {
            let text = ctx.read(operator)?;
            let a = parse_json::<OperatorFile>(&text, &operator.display().to_string())?.build()?;
            let r = verify_quantum_graph(&a, tol);
            let (status, code) = pass(r.is_quantum_graph(), "failed");
            Ok((status, code, json!({ "report": r, "flags": r.flags() })))
        }
        Command::Rigidity { dual, projection, central } => {
            let d = ctx.dual(dual)?;
            let p = ctx.projection(&d, projection.as_deref(), central.as_deref())?;
            let (idem, sa) = d.qgroup().projection_residuals(&p);
            if idem > tol.max(1e-8) || sa > tol.max(1e-8) {
                return Err(Error::NotProjection { idempotent: idem, selfadjoint: sa });
            }
            let t = fourier_multiplier(&d, &p);
            let verdict = rigidity_verdict(d.group(), &t, SEPARATION_TOL);
            let generation = convolution_generation_test(d.qgroup(), &p);
            let (status, code) = pass(verdict.kind.is_rigid(), "inconclusive");
            Ok((
                status,
                code,
                json!({ "verdict": verdict.kind, "detail": verdict, "multiplier": t, "generation": generation }),
            ))
        }
        Command::RigidSearch { dual, trials, projection_out } => {
            let d = ctx.dual(dual)?;
            let r = rigid_projection_search(&d, ctx.seed, *trials, SEPARATION_TOL, ctx.jobs)?;
            let pf = ProjectionFile::block(&CVec::from_vec(r.projection.clone()));
            if let Some(path) = projection_out {
                write_file(path, &to_json(&pf))?;
            }
            let (status, code) = pass(r.verdict.kind.is_rigid(), "inconclusive");
            Ok((status, code, json!({ "verdict": r.verdict.kind, "search": r, "projection": pf })))
        }
        Command::ClosureCheck { group, trials, trivial_only } => {
            let d = ctx.dual(group)?;
            let start = if *trivial_only { ClosureStart::TrivialOnly } else { ClosureStart::AllDiagonal };
            let runs = closure_check(d.group(), d.irreps(), ctx.seed, *trials, start);
            let expected = if *trivial_only { 1 } else { d.order() };
            let (status, code) = pass(runs.iter().all(|r| r.final_dim == expected), "failed");
            Ok((status, code, json!({ "start": start, "expected": expected, "runs": runs })))
        }
        Command::GapCert { group, trials } => {
            let d = ctx.dual(group)?;
            let c = gap_certificate(&d, ctx.seed, *trials, SEPARATION_TOL, ctx.jobs);
            let (status, code) = pass(c.issued, "refused");
            Ok((
                status,
                code,
                json!({ "certificate": c, "lie_witness_note": "additional numerical check; not part of the certificate" }),
            ))
        }
        Command::Combine { mode, graphs, adjacency_out } => {
            let mut inputs = Vec::with_capacity(graphs.len());
            for path in graphs {
                let text = ctx.read(path)?;
                let name = path.display().to_string();
                let v: Value = parse_json(&text, &name)?;
                let op = if v.get("adj").is_some() {
                    parse_json::<ClassicalGraph>(&text, &name)?.to_linop()
                } else {
                    parse_json::<OperatorFile>(&text, &name)?.build()?
                };
                inputs.push(QuantumGraph::new(op, tol)?);
            }
            let c = match mode {
                Mode::Directed => combine_directed(&inputs, tol)?,
                Mode::Undirected => combine_undirected(&inputs, tol)?,
            };
            let degs: Vec<f64> = c.degrees.iter().map(|d| d.re).collect();
            let predicted = match mode {
                Mode::Directed => directed_label_degrees(&degs),
                Mode::Undirected => undirected_label_degrees(&degs),
            };
            let spectrum = measured_degree_spectrum(c.graph.adjacency(), tol)?;
            let op = OperatorFile::from_op(c.graph.adjacency());
            if let Some(path) = adjacency_out {
                write_file(path, &to_json(&op))?;
            }
            let f = c.graph.flags();
            let ok = f.loopless && (*mode == Mode::Directed || f.undirected);
            let (status, code) = pass(ok, "failed");
            Ok((
                status,
                code,
                json!({ "mode": mode, "order": c.order, "input_degrees": degs, "predicted_degrees": predicted, "degree_spectrum": spectrum, "graph": graph_summary(&c.graph), "adjacency": op }),
            ))
        }
        Command::Frucht { dual, function_algebra: fa, adjacency_out } => {
            let (g, report) = if *fa {
                let group = ctx.group(dual)?;
                quantum_frucht_pipeline(&function_algebra(&group), None, tol)?
            } else {
                let d = ctx.dual(dual)?;
                quantum_frucht_pipeline(d.qgroup(), Some(&d), tol)?
            };
            if let Some(path) = adjacency_out {
                write_file(path, &to_json(&OperatorFile::from_op(g.adjacency())))?;
            }
            let f = g.flags();
            let ok = f.schur_idempotent && f.real && f.undirected && f.loopless && !report.degree_collision;
            let (status, code) = pass(ok, "failed");
            Ok((status, code, json!({ "report": report, "graph": graph_summary(&g) })))
        }
        Command::ClassicalFrucht { group, mode, verify_aut, graph_out, dot } => {
            let g = ctx.group(group)?;
            let r = classical_frucht(&g, *mode)?;
            if let Some(path) = graph_out {
                write_file(path, &to_json(&r.graph))?;
            }
            if let Some(path) = dot {
                write_file(path, &r.graph.to_dot("frucht"))?;
            }
            let (status, code) = pass(!*verify_aut || r.verified, "failed");
            Ok((
                status,
                code,
                json!({
                    "mode": r.mode,
                    "vertices": r.graph.n(),
                    "edges": r.graph.edges().len(),
                    "aut_order": r.aut.order,
                    "aut_generators": r.aut.generators,
                    "right_translations": r.right_translations,
                    "label_preserving": r.label_preserving,
                    "verified": r.verified,
                }),
            ))
        }
        Command::CorrespCheck { dual, irreps, samples } => {
            let d = ctx.dual(dual)?;
            let subset = irreps.clone().unwrap_or_else(|| (0..d.irreps().len()).collect());
            let r = isometry_check(d.qgroup(), &subset, *samples, ctx.seed, tol)?;
            let (status, code) = pass(r.identity_verified, "failed");
            Ok((status, code, json!({ "report": r })))
        }
    }
}

fn resolve_tol(flag: Option<f64>) -> std::result::Result<f64, String> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var(TOL_ENV) {
        Ok(s) => s.trim().parse::<f64>().map_err(|_| format!("{TOL_ENV}={s:?} is not a number")),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

/// Parses `argv` (program name first), runs the command and renders the report.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { exit_code: code, report: None, stdout, stderr };
        }
    };
    let start = Instant::now();
    let tol = resolve_tol(cli.tol);
    let mut ctx =
        Ctx { seed: cli.seed, tol: *tol.as_ref().unwrap_or(&DEFAULT_TOL), jobs: cli.jobs.max(1), inputs: Vec::new() };
    let outcome = match tol {
        Ok(t) if t.is_finite() && t > 0.0 => execute(&cli.command, &mut ctx),
        Ok(t) => Err(Error::Input(format!("tolerance must be positive, got {t}"))),
        Err(msg) => Err(Error::Input(msg)),
    };
    let (status, exit_code, result, error) = match outcome {
        Ok((s, c, v)) => (s, c, v, None),
        Err(e) => {
            let (s, c) = if e.is_refusal() { ("refused", 1) } else { ("input_error", 2) };
            (s, c, Value::Null, Some(e.to_string()))
        }
    };
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        version: crate::VERSION.to_string(),
        command: args.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
        subcommand: cli.command.name().to_string(),
        seed: cli.seed,
        tol: ctx.tol,
        jobs: ctx.jobs,
        inputs: ctx.inputs,
        status: status.to_string(),
        exit_code,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        result,
        error: error.clone(),
    };
    let rendered = to_json(&report);
    let mut stdout = String::new();
    let mut stderr = error.map(|e| format!("error: {e}\n")).unwrap_or_default();
    match &cli.out {
        Some(path) => {
            if let Err(e) = write_file(path, &rendered) {
                stderr.push_str(&format!("error: {e}\n"));
                return Outcome { exit_code: 2, report: Some(report), stdout, stderr };
            }
            stdout = format!("{}: {} (exit {exit_code})\n", report.subcommand, report.status);
        }
        None => {
            stdout = rendered;
            stdout.push('\n');
        }
    }
    Outcome { exit_code, report: Some(report), stdout, stderr }
}
