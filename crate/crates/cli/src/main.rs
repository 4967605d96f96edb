use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ginv_core::block4::{nilpotency, BlockMatrix2x2};
use ginv_core::format::{parse_matrix, write_json, write_text};
use ginv_core::gen::{generate_batch, Family, GenConfig, Instance};
use ginv_core::inverse::{core_probe, group_probe, projection_residual};
use ginv_core::suite::{check_instance, run_suite, SuiteConfig, SuiteId};
use ginv_core::{
    core_inverse, core_inverse_via_projection, drazin_inverse, group_inverse, is_ep, is_projection,
    moore_penrose, ComplexMatrix, Error, Outcome, TheoremId, TheoremVerdict, Tolerance,
};

#[derive(Parser)]
#[command(name = "ginv", version, about = "Generalized inverses and executable core-inverse results")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a generalized inverse of the matrix in FILE.
    Inv {
        kind: InvKind,
        file: PathBuf,
        /// Output file; defaults to stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Test a predicate on the matrix in FILE.
    Check {
        predicate: Predicate,
        file: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Run a checker over generated instances.
    Suite {
        /// Result id (thm2.4, lem4.1, ...) or `all`.
        id: String,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1..8", value_parser = parse_dims)]
        dims: (usize, usize),
        #[command(flatten)]
        tol: TolArgs,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write generated instances and a manifest to a directory.
    Gen {
        /// Family name (ep-triangular, block4, ...) or a result id.
        family: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1..8", value_parser = parse_dims)]
        dims: (usize, usize),
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FileFormat::Text)]
        format: FileFormat,
    },
    /// Check one result on matrices read from files.
    ///
    /// Pair results take `a b`, lem2.1 and lem2.3 take `p a`, lem4.1 takes
    /// `B C`, and block results take `A B C D` or one file with `--split n`.
    Verify {
        id: String,
        files: Vec<PathBuf>,
        /// Split a single 2n x 2n file into n x n blocks.
        #[arg(long)]
        split: Option<usize>,
        #[command(flatten)]
        tol: TolArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum InvKind {
    Mp,
    Group,
    Drazin,
    Core,
    CoreProj,
}

#[derive(Clone, Copy, ValueEnum)]
enum Predicate {
    Ep,
    Projection,
    CoreInvertible,
    Nilpotent,
}

#[derive(Clone, Copy, ValueEnum)]
enum FileFormat {
    Text,
    Json,
}

#[derive(Args)]
struct TolArgs {
    #[arg(long, default_value_t = 1e-9)]
    rtol: f64,
    #[arg(long, default_value_t = 1e-12)]
    atol: f64,
}

impl TolArgs {
    fn get(&self) -> Result<Tolerance, Failure> {
        Tolerance::new(self.atol, self.rtol).map_err(Failure::usage)
    }
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (s, s),
    };
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("invalid dimension range `{s}`"));
    let (lo, hi) = (num(lo)?, num(hi)?);
    if lo == 0 || lo > hi {
        return Err(format!("invalid dimension range `{s}`"));
    }
    Ok((lo, hi))
}

/// An error with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(e: impl ToString) -> Self {
        Self { code: 2, msg: e.to_string() }
    }
}

fn read_matrix(path: &Path) -> Result<(ComplexMatrix, bool), Failure> {
    let src = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let m = parse_matrix(&src).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok((m, src.trim_start().starts_with('{')))
}

fn write_out(path: Option<&Path>, body: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn cmd_inv(kind: InvKind, file: &Path, out: Option<&Path>, tol: Tolerance) -> Result<u8, Failure> {
    let (a, json) = read_matrix(file)?;
    let result = match kind {
        InvKind::Mp => Ok(moore_penrose(&a, tol)),
        InvKind::Group => group_inverse(&a, tol),
        InvKind::Drazin => drazin_inverse(&a, tol).map(|d| d.inverse),
        InvKind::Core => core_inverse(&a, tol),
        InvKind::CoreProj => core_inverse_via_projection(&a, tol),
    };
    match result {
        Ok(x) => {
            let body = if json { format!("{}\n", write_json(&x)) } else { write_text(&x) };
            write_out(out, &body)?;
            Ok(0)
        }
        Err(e @ (Error::NotGroupInvertible { .. } | Error::NotCoreInvertible { .. })) => Err(Failure {
            code: 3,
            msg: e.to_string(),
        }),
        Err(e) => Err(Failure::usage(e)),
    }
}

fn cmd_check(pred: Predicate, file: &Path, tol: Tolerance) -> Result<u8, Failure> {
    let (a, _) = read_matrix(file)?;
    let (holds, details): (bool, Vec<(&str, String)>) = match pred {
        Predicate::Projection => {
            let holds = is_projection(&a, tol).map_err(Failure::usage)?;
            (holds, vec![("residual", format!("{:e}", projection_residual(&a)))])
        }
        Predicate::Ep => {
            let holds = is_ep(&a, tol).map_err(Failure::usage)?;
            let probe = group_probe(&a, tol).map_err(Failure::usage)?;
            let mut d = vec![("rank", probe.rank.to_string()), ("min_cosine", format!("{:e}", probe.min_cosine))];
            if let Some(g) = probe.inverse() {
                let e = &a * g;
                let herm = (&e.adjoint() - &e).norm_fro() / (1.0 + e.norm_fro());
                d.push(("hermitian_residual", format!("{herm:e}")));
            }
            (holds, d)
        }
        Predicate::CoreInvertible => {
            let probe = core_probe(&a, tol).map_err(Failure::usage)?;
            let rank_sq = (&a * &a).rank(tol);
            (
                probe.core_invertible(),
                vec![("rank", probe.rank.to_string()), ("rank_sq", rank_sq.to_string())],
            )
        }
        Predicate::Nilpotent => {
            if !a.is_square() {
                return Err(Failure::usage(Error::NotSquare { rows: a.rows(), cols: a.cols() }));
            }
            let c = nilpotency(&a, tol);
            (c.holds, vec![("residual", format!("{:e}", c.residual))])
        }
    };
    println!("{holds}");
    for (k, v) in details {
        println!("{k}: {v}");
    }
    Ok(if holds { 0 } else { 1 })
}

fn cmd_suite(
    id: &str,
    instances: usize,
    seed: u64,
    dims: (usize, usize),
    tol: Tolerance,
    report: Option<&Path>,
) -> Result<u8, Failure> {
    let suite: SuiteId = id.parse().map_err(Failure::usage)?;
    let cfg = SuiteConfig {
        suite,
        instances,
        seed,
        dims,
        tol,
    };
    let rep = run_suite(&cfg).map_err(Failure::usage)?;
    for (name, s) in &rep.per_theorem {
        let table: Vec<String> = s.truth_table.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!(
            "{name}: pass={} fail={} not_met={} ambiguous={} [{}]",
            s.counts.pass,
            s.counts.fail,
            s.counts.not_met,
            s.counts.ambiguous,
            table.join(" ")
        );
    }
    let a = &rep.aggregate;
    println!(
        "total: pass={} fail={} not_met={} ambiguous={} ({} ms)",
        a.pass, a.fail, a.not_met, a.ambiguous, rep.duration_ms
    );
    if let Some(path) = report {
        write_out(Some(path), &format!("{}\n", rep.to_json()))?;
    }
    Ok(if rep.ok() { 0 } else { 1 })
}

#[derive(Serialize)]
struct ManifestEntry {
    index: usize,
    seed: u64,
    n: usize,
    rank: usize,
    files: BTreeMap<String, String>,
    theorem: Option<String>,
    hypotheses: BTreeMap<String, f64>,
}

fn instance_residuals(family: Family, inst: &Instance, tol: Tolerance) -> BTreeMap<String, f64> {
    if let Some(t) = family.theorem() {
        return match check_instance(t, inst, tol) {
            Ok(v) => v.hypotheses.into_iter().map(|(k, c)| (k, c.residual)).collect(),
            Err(_) => BTreeMap::new(),
        };
    }
    let a = inst.lead();
    let mut out = BTreeMap::new();
    if let Ok(p) = core_probe(a, tol) {
        let r = match &p.inverse {
            Some(x) => ginv_core::verify_axioms(ginv_core::InverseKind::Core, a, x, tol)
                .map(|rep| rep.max_residual())
                .unwrap_or(f64::INFINITY),
            None => f64::INFINITY,
        };
        out.insert("core axioms".to_owned(), r);
    }
    if family == Family::Ep {
        if let Some(g) = group_probe(a, tol).ok().and_then(|p| p.into_inverse()) {
            let e = a * &g;
            out.insert(
                "aa^# hermitian".to_owned(),
                (&e.adjoint() - &e).norm_fro() / (1.0 + e.norm_fro()),
            );
        }
    }
    out
}

fn cmd_gen(
    family: &str,
    count: usize,
    seed: u64,
    dims: (usize, usize),
    out: &Path,
    format: FileFormat,
) -> Result<u8, Failure> {
    let family: Family = family.parse().map_err(Failure::usage)?;
    let cfg = GenConfig {
        seed,
        dim_range: dims,
        rank_range: (0, usize::MAX),
        count,
    };
    cfg.validate().map_err(Failure::usage)?;
    fs::create_dir_all(out).map_err(|e| Failure::usage(format!("{}: {e}", out.display())))?;
    let tol = Tolerance::default();
    let ext = match format {
        FileFormat::Text => "mat",
        FileFormat::Json => "json",
    };
    let mut entries = Vec::with_capacity(count);
    for g in generate_batch(family, &cfg) {
        let mut files = BTreeMap::new();
        for (name, m) in g.instance.matrices() {
            let file = format!("{:04}_{name}.{ext}", g.index);
            let body = match format {
                FileFormat::Text => write_text(m),
                FileFormat::Json => format!("{}\n", write_json(m)),
            };
            write_out(Some(&out.join(&file)), &body)?;
            files.insert(name.to_owned(), file);
        }
        entries.push(ManifestEntry {
            index: g.index,
            seed: g.seed,
            n: g.n,
            rank: g.r,
            files,
            theorem: family.theorem().map(|t| t.as_str().to_owned()),
            hypotheses: instance_residuals(family, &g.instance, tol),
        });
    }
    let manifest = json!({
        "family": family.as_str(),
        "seed": seed,
        "dims": [dims.0, dims.1],
        "count": count,
        "instances": entries,
    });
    let body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_out(Some(&out.join("manifest.json")), &format!("{body}\n"))?;
    println!("wrote {count} instances to {}", out.display());
    Ok(0)
}

fn verdict_json(v: &TheoremVerdict) -> serde_json::Value {
    json!({
        "theorem": v.theorem,
        "outcome": v.outcome(),
        "hypotheses": v.hypotheses,
        "side1": v.side1,
        "side2": v.side2,
        "recorded": v.recorded,
        "ill_conditioned": v.ill_conditioned,
        "max_residual": v.max_residual(),
        "witness_norms": v.witness_norms(),
    })
}

fn cmd_verify(id: &str, files: &[PathBuf], split: Option<usize>, tol: Tolerance) -> Result<u8, Failure> {
    let theorem: TheoremId = id.parse().map_err(Failure::usage)?;
    let mats = files
        .iter()
        .map(|f| read_matrix(f).map(|(m, _)| m))
        .collect::<Result<Vec<_>, _>>()?;
    let block_ids = [
        TheoremId::Theorem4_2,
        TheoremId::Corollary4_3,
        TheoremId::Theorem4_4,
        TheoremId::Corollary4_5,
    ];
    let given = mats.len();
    let wrong_count = |want: &str| Failure::usage(format!("{id} expects {want}, got {given} file(s)"));
    let mut mats = mats.into_iter();
    let inst = if block_ids.contains(&theorem) {
        let blocks = match (split, mats.len()) {
            (Some(n), 1) => BlockMatrix2x2::split(&mats.next().unwrap(), n),
            (None, 4) => {
                let [a, b, c, d]: [ComplexMatrix; 4] = mats.collect::<Vec<_>>().try_into().unwrap();
                BlockMatrix2x2::new(a, b, c, d)
            }
            _ => return Err(wrong_count("four block files or one file with --split")),
        };
        Instance::Block(blocks.map_err(Failure::usage)?)
    } else {
        if split.is_some() {
            return Err(Failure::usage("--split applies to block results only"));
        }
        let [x, y]: [ComplexMatrix; 2] = mats.collect::<Vec<_>>().try_into().map_err(|_| wrong_count("two files"))?;
        match theorem {
            TheoremId::Lemma2_1 | TheoremId::Lemma2_3 => Instance::Pierce { p: x, a: y },
            TheoremId::Lemma4_1 => Instance::Antidiag { b: x, c: y },
            _ => Instance::Pair { a: x, b: y },
        }
    };
    let v = check_instance(theorem, &inst, tol).map_err(Failure::usage)?;
    println!("{}", serde_json::to_string_pretty(&verdict_json(&v)).expect("verdict serializes"));
    Ok(if v.outcome() == Outcome::Fail { 1 } else { 0 })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.cmd {
        Cmd::Inv { kind, file, out, tol } => cmd_inv(kind, &file, out.as_deref(), tol.get()?),
        Cmd::Check { predicate, file, tol } => cmd_check(predicate, &file, tol.get()?),
        Cmd::Suite {
            id,
            instances,
            seed,
            dims,
            tol,
            report,
        } => cmd_suite(&id, instances, seed, dims, tol.get()?, report.as_deref()),
        Cmd::Gen {
            family,
            count,
            seed,
            dims,
            out,
            format,
        } => cmd_gen(&family, count, seed, dims, &out, format),
        Cmd::Verify { id, files, split, tol } => cmd_verify(&id, &files, split, tol.get()?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("ginv: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
