//! Subcommand implementations. Each returns the text for stdout.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use matchkern::chain::{kernelize_chain, Bipartition};
use matchkern::fes::kernelize_fes;
use matchkern::fvs::{kernelize_fvs, FvsOptions};
use matchkern::gen::{self, Generated};
use matchkern::solver::max_matching_general;
use matchkern::{
    lift_certificate, verify_matching, GraphError, Instance, Kernel, ReductionTrace, Vertex,
};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::format::{self, InstanceFile};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "matchkern",
    version,
    about = "Kernelize, solve and verify maximum matching instances"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shrink an instance and write the kernel, report and trace.
    Kernelize(KernelizeArgs),
    /// Compute a maximum matching, directly or through a kernel.
    Solve(SolveArgs),
    /// Check a matching file against a graph.
    Verify(VerifyArgs),
    /// Write a seeded random instance.
    Gen(GenArgs),
    /// Time the kernelizer on growing instances; prints CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    Fes,
    Fvs,
    Chain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    ForestPlusEdges,
    ForestPlusVertices,
    ChainPlusVertices,
    Gnm,
}

#[derive(Debug, Args)]
pub struct KernelizeArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub param: Param,
    /// Decision target; overrides a `t` line in the input.
    #[arg(long)]
    pub target: Option<usize>,
    /// Deletion set for fvs or chain, comma-separated 1-based ids.
    #[arg(long)]
    pub x: Option<String>,
    /// Run every fvs pass even when the parameter is large.
    #[arg(long)]
    pub force: bool,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub emit: Option<PathBuf>,
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub input: PathBuf,
    /// Kernel file written by `kernelize --emit`; needs `--trace`.
    #[arg(long, requires = "trace")]
    pub kernel: Option<PathBuf>,
    #[arg(long, requires = "kernel")]
    pub trace: Option<PathBuf>,
    /// Certificate output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub input: PathBuf,
    pub matching: PathBuf,
    /// Also require this many edges.
    #[arg(long)]
    pub expect: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Edge count for gnm.
    #[arg(long, default_value_t = 200)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "forest-plus-edges")]
    pub family: Family,
    #[arg(long, value_enum, default_value = "fes")]
    pub param: Param,
    /// Comma-separated vertex counts.
    #[arg(long, default_value = "10000,20000,40000,80000")]
    pub n: String,
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Timed repetitions per size; the median is reported.
    #[arg(long, default_value_t = 5)]
    pub runs: usize,
}

pub fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Kernelize(a) => kernelize(&a),
        Command::Solve(a) => solve(&a),
        Command::Verify(a) => verify(&a),
        Command::Gen(a) => generate(&a),
        Command::Bench(a) => bench(&a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, data: &[u8]) -> Result<()> {
    fs::write(path, data).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn read_instance(path: &Path) -> Result<InstanceFile> {
    format::parse_instance(&read(path)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn parse_ids(list: &str, n: usize) -> Result<Vec<Vertex>> {
    list.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| match t.trim().parse::<usize>() {
            Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
            _ => Err(CliError::Usage(format!("bad vertex id {t:?} in --x"))),
        })
        .collect()
}

/// A finished kernel, compacted, with its JSON report.
pub struct KernelRun {
    pub kernel: InstanceFile,
    pub trace: ReductionTrace,
    pub report: Value,
}

fn finish<R: Serialize>(
    mut kern: Kernel<R>,
    sides: Option<&Bipartition>,
    decided: bool,
    started: Instant,
) -> Result<KernelRun> {
    let elapsed = started.elapsed();
    let old = kern.compact();
    let mut report =
        serde_json::to_value(&kern.report).map_err(|e| CliError::Invariant(e.to_string()))?;
    let offset = kern.instance.offset;
    if !decided {
        let kopt = max_matching_general(&kern.instance.graph).size();
        report["kernel_optimum"] = json!(kopt);
        if kern.instance.target.is_none() {
            report["optimum"] = json!(kopt + offset);
        }
    }
    report["elapsed_ms"] = json!(elapsed.as_secs_f64() * 1e3);
    let mut file = InstanceFile::new(kern.instance.graph);
    file.comments.push(format!("kernel offset {offset}"));
    file.target = kern.instance.target.map(|t| t.max(0) as usize);
    file.sides = sides.map(|p| old.iter().map(|&v| p.is_b(v)).collect());
    Ok(KernelRun {
        kernel: file,
        trace: kern.trace,
        report,
    })
}

/// Runs one kernelizer on a parsed instance.
pub fn kernelize_file(
    file: &InstanceFile,
    param: Param,
    target: Option<usize>,
    x: Option<Vec<Vertex>>,
    force: bool,
) -> Result<KernelRun> {
    let inst = Instance::new(file.graph.clone(), target.or(file.target));
    let started = Instant::now();
    match param {
        Param::Fes => {
            let k = kernelize_fes(&inst);
            let decided = k.report.decided_yes;
            finish(k, None, decided, started)
        }
        Param::Fvs => {
            let k = kernelize_fvs(&inst, &FvsOptions { x, force })
                .map_err(|e| CliError::Usage(format!("fvs: {e}")))?;
            let decided = k.report.decided_yes;
            finish(k, None, decided, started)
        }
        Param::Chain => {
            let parts = file.bipartition().map_err(|e| match e {
                GraphError::NotBipartite(u, v) => CliError::Usage(format!(
                    "chain needs a bipartite graph; edge {} {} joins one side",
                    u + 1,
                    v + 1
                )),
                e => CliError::Usage(format!("chain: {e}")),
            })?;
            let k = kernelize_chain(&inst, &parts, x.as_deref())
                .map_err(|e| CliError::Usage(format!("chain: {e}")))?;
            let decided = k.report.verdict.is_some();
            finish(k, Some(&parts), decided, started)
        }
    }
}

fn kernelize(a: &KernelizeArgs) -> Result<String> {
    let file = read_instance(&a.input)?;
    let x =
        a.x.as_deref()
            .map(|s| parse_ids(s, file.graph.capacity()))
            .transpose()?;
    let run = kernelize_file(&file, a.param, a.target, x, a.force)?;
    if let Some(p) = &a.emit {
        write(p, format::write_instance(&run.kernel).as_bytes())?;
    }
    if let Some(p) = &a.trace {
        write(p, &run.trace.to_bytes())?;
    }
    let json = serde_json::to_string_pretty(&run.report).expect("plain JSON");
    match &a.report {
        Some(p) => {
            write(p, json.as_bytes())?;
            Ok(String::new())
        }
        None => Ok(json + "\n"),
    }
}

fn solve(a: &SolveArgs) -> Result<String> {
    let file = read_instance(&a.input)?;
    let g = &file.graph;
    let m = match (&a.kernel, &a.trace) {
        (Some(kp), Some(tp)) => {
            let kernel = read_instance(kp)?;
            let bytes =
                fs::read(tp).map_err(|e| CliError::Usage(format!("{}: {e}", tp.display())))?;
            let trace = ReductionTrace::read_from(&mut bytes.as_slice())
                .map_err(|e| CliError::Parse(format!("{}: {e}", tp.display())))?;
            let km = max_matching_general(&kernel.graph);
            lift_certificate(&trace, &km, g).map_err(|e| CliError::Invariant(e.to_string()))?
        }
        _ => max_matching_general(g),
    };
    if !verify_matching(g, &m) {
        return Err(CliError::Invariant("certificate is not a matching".into()));
    }
    if let Some(p) = &a.out {
        write(p, format::write_matching(&m).as_bytes())?;
    }
    Ok(format!("optimum {}\n", m.size()))
}

fn verify(a: &VerifyArgs) -> Result<String> {
    let file = read_instance(&a.input)?;
    let m = format::parse_matching(&read(&a.matching)?, file.graph.capacity())
        .map_err(|e| CliError::Parse(format!("{}: {e}", a.matching.display())))?;
    m.validate(&file.graph)
        .map_err(|e| CliError::Invariant(format!("invalid: {e}")))?;
    if let Some(want) = a.expect {
        if m.size() != want {
            return Err(CliError::Invariant(format!(
                "invalid: {} edges, expected {want}",
                m.size()
            )));
        }
    }
    Ok(format!("valid {}\n", m.size()))
}

pub fn generate_family(family: Family, n: usize, k: usize, m: usize, seed: u64) -> Generated {
    match family {
        Family::ForestPlusEdges => gen::forest_plus_edges(n, k, seed),
        Family::ForestPlusVertices => gen::forest_plus_vertices(n, k, seed),
        Family::ChainPlusVertices => gen::chain_plus_vertices(n, k, seed),
        Family::Gnm => gen::gnm(n, m, seed),
    }
}

fn generate(a: &GenArgs) -> Result<String> {
    let g = generate_family(a.family, a.n, a.k, a.m, a.seed);
    let mut file = InstanceFile::new(g.graph);
    let name = a
        .family
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    file.comments.push(match a.family {
        Family::Gnm => format!("{name} n={} m={} seed={}", a.n, a.m, a.seed),
        _ => format!("{name} n={} k={} seed={}", a.n, a.k, a.seed),
    });
    if !g.planted.is_empty() {
        let ids: Vec<String> = g.planted.iter().map(|v| (v + 1).to_string()).collect();
        file.comments.push(format!("planted {}", ids.join(",")));
    }
    file.sides = g.sides;
    let text = format::write_instance(&file);
    match &a.out {
        Some(p) => {
            write(p, text.as_bytes())?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// Median kernelization time in milliseconds over `runs` repetitions, with
/// the last run's report.
pub fn time_kernelize(file: &InstanceFile, param: Param, runs: usize) -> Result<(f64, Value)> {
    let mut times = Vec::with_capacity(runs);
    let mut last = Value::Null;
    for _ in 0..runs.max(1) {
        let started = Instant::now();
        let run = kernelize_file(file, param, None, None, false)?;
        times.push(started.elapsed().as_secs_f64() * 1e3);
        last = run.report;
    }
    times.sort_by(f64::total_cmp);
    Ok((times[times.len() / 2], last))
}

fn bench(a: &BenchArgs) -> Result<String> {
    let mut out = String::from("n,m,k,n_out,m_out,millis\n");
    for tok in a.n.split(',') {
        let n: usize = tok
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad size {tok:?}")))?;
        let g = generate_family(a.family, n, a.k, 2 * n, a.seed);
        let mut file = InstanceFile::new(g.graph);
        file.sides = g.sides;
        let (ms, report) = time_kernelize(&file, a.param, a.runs)?;
        out += &format!(
            "{n},{},{},{},{},{ms:.3}\n",
            file.graph.m_live(),
            report["k"],
            report["n_out"],
            report["m_out"]
        );
    }
    Ok(out)
}
