use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use hadamard_core::blocks::{n_eq4, n_printed, BlockSpec};
use hadamard_core::catalog::coverage;
use hadamard_core::hmat::{parse, render, HmatFile, HmatKind};
use hadamard_core::manifest::{
    chain_artifact, conference_artifact, double_artifact, reproduce, theorem_artifact,
    theorem_manifest, Artifact, Manifest,
};
use hadamard_core::seeds::SkewChain;
use hadamard_core::theorem::{
    construct_with, first_passing, params_for_q, validate_params, variant_search,
    ConstructionContext, Theorem, DEFAULT_BUDGET,
};
use hadamard_core::verify::{is_conference_core, is_hadamard, is_skew_hadamard, property_suite};

#[derive(Parser)]
#[command(
    name = "hadamard",
    version,
    about = "Build and verify Hadamard matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build H' = S (x) M + I (x) N for one theorem and verify it.
    Build {
        #[arg(long)]
        theorem: Theorem,
        #[arg(long)]
        q: u32,
        /// Defaults to the value forced by q.
        #[arg(long, allow_negative_numbers = true)]
        s: Option<i64>,
        /// `printed`, `pair`, `search`, or an explicit grid such as `[[+P,+Q],[-Q,+P]]`.
        #[arg(long, default_value = "printed")]
        variant: String,
        /// Explicit M grid; defaults to the theorem's M.
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conference matrix of order q.
    Conference {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Paley skew Hadamard matrix of order q + 1.
    Paley {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Skew Hadamard matrix from a seed chain, e.g. Paley(q=3) doubled 3 times.
    Chain {
        /// Paley seed q; omit for the order-1 seed.
        #[arg(long)]
        paley_q: Option<u32>,
        #[arg(long, default_value_t = 0)]
        doublings: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Double a skew Hadamard matrix read from a file.
    Double {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify an HMAT file.
    Verify {
        path: PathBuf,
        /// Overrides the kind recorded in the file.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// Run the conference matrix property suite.
    Props {
        #[arg(long)]
        q: u32,
    },
    /// Try the bounded family of block choices and report every outcome.
    Variants {
        #[arg(long)]
        theorem: Theorem,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// List the verified routes to every order 4t up to a bound.
    Catalog {
        #[arg(long)]
        max_order: usize,
        /// Also write the entries as TOML.
        #[arg(long)]
        rows: Option<PathBuf>,
    },
    /// Rebuild an artifact from its manifest.
    Rebuild {
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compare the rebuilt matrix with this file byte for byte.
        #[arg(long)]
        check: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Hadamard,
    Skew,
    Conference,
}

impl From<KindArg> for HmatKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Hadamard => HmatKind::Hadamard,
            KindArg::Skew => HmatKind::Skew,
            KindArg::Conference => HmatKind::Conference,
        }
    }
}

enum Outcome {
    Pass,
    Fail,
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

type Run = Result<Outcome, Usage>;

/// Report lines go to stdout when the matrix goes to a file, stderr otherwise.
struct Report {
    to_stdout: bool,
}

impl Report {
    fn new(out: &Option<PathBuf>) -> Self {
        Report {
            to_stdout: out.is_some(),
        }
    }

    fn line(&self, s: impl AsRef<str>) {
        if self.to_stdout {
            println!("{}", s.as_ref());
        } else {
            eprintln!("{}", s.as_ref());
        }
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    out.with_extension("manifest.toml")
}

fn emit(
    file: &HmatFile,
    manifest: Option<&Manifest>,
    out: &Option<PathBuf>,
    report: &Report,
) -> Result<(), Usage> {
    let text = render(file);
    match out {
        Some(path) => {
            fs::write(path, text)
                .map_err(|e| Usage(format!("cannot write {}: {e}", path.display())))?;
            report.line(format!("wrote {}", path.display()));
            if let Some(m) = manifest {
                let mpath = manifest_path(path);
                fs::write(&mpath, m.to_toml()?)
                    .map_err(|e| Usage(format!("cannot write {}: {e}", mpath.display())))?;
                report.line(format!("wrote {}", mpath.display()));
            }
        }
        None => {
            io::stdout()
                .lock()
                .write_all(text.as_bytes())
                .map_err(|e| Usage(format!("cannot write to stdout: {e}")))?;
        }
    }
    Ok(())
}

fn emit_artifact(a: &Artifact, out: &Option<PathBuf>, report: &Report) -> Run {
    report.line(format!(
        "{} order={} verdict={}",
        a.manifest.artifact, a.manifest.order, a.manifest.certificate.verdict
    ));
    if let Some(w) = &a.manifest.certificate.witness {
        report.line(format!("witness: {w}"));
        return Ok(Outcome::Fail);
    }
    emit(&a.file, Some(&a.manifest), out, report)?;
    Ok(Outcome::Pass)
}

fn read_hmat(path: &Path) -> Result<HmatFile, Usage> {
    let text = fs::read_to_string(path)
        .map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn build(
    theorem: Theorem,
    q: u32,
    s: Option<i64>,
    variant: &str,
    m: Option<&str>,
    out: &Option<PathBuf>,
) -> Run {
    let report = Report::new(out);
    let params = match s {
        Some(s) => validate_params(theorem, q, s)?,
        None => params_for_q(theorem, q)?,
    };
    let start = Instant::now();
    let result = if variant == "search" {
        if m.is_some() {
            return Err(Usage("--m cannot be combined with --variant search".into()));
        }
        match first_passing(&params, DEFAULT_BUDGET)? {
            Some(r) => r,
            None => {
                report.line(format!(
                    "theorem {theorem} q={q} s={}: no passing block choice within budget {DEFAULT_BUDGET}",
                    params.s
                ));
                return Ok(Outcome::Fail);
            }
        }
    } else {
        let ctx = ConstructionContext::new(&params)?;
        let m_spec = match m {
            Some(text) => text.parse::<BlockSpec>()?,
            None => ctx.default_m()?,
        };
        let n_spec = match variant {
            "printed" => n_printed(theorem.n_case()),
            "pair" => n_eq4(theorem.n_case())?,
            text => text.parse::<BlockSpec>()?,
        };
        construct_with(&params, &m_spec, &n_spec)?
    };
    let elapsed = start.elapsed();
    report.line(format!(
        "theorem {theorem} q={q} s={} order={} seed={}",
        params.s, params.order, params.seed_chain
    ));
    report.line(format!("M = {}", result.m_spec.encoding()));
    report.line(format!(
        "N = {} ({})",
        result.n_spec.encoding(),
        result.n_spec.label
    ));
    report.line(format!(
        "commutator zero: {}  gram identity: {}",
        result.commutator_residual_zero, result.gram_residual_zero
    ));
    report.line(format!("{}", result.certificate));
    report.line(format!("elapsed: {:.3} s", elapsed.as_secs_f64()));
    match theorem_artifact(&result) {
        Some(a) => {
            emit(&a.file, Some(&a.manifest), out, &report)?;
            Ok(Outcome::Pass)
        }
        None => {
            if let Some(path) = out {
                let mpath = manifest_path(path);
                fs::write(&mpath, theorem_manifest(&result).to_toml()?)
                    .map_err(|e| Usage(format!("cannot write {}: {e}", mpath.display())))?;
                report.line(format!(
                    "wrote {} (no matrix: verification failed)",
                    mpath.display()
                ));
            }
            Ok(Outcome::Fail)
        }
    }
}

fn verify(path: &Path, kind: Option<KindArg>) -> Run {
    let file = read_hmat(path)?;
    let kind = kind
        .map(HmatKind::from)
        .or(file.kind)
        .unwrap_or(HmatKind::Hadamard);
    let cert = match kind {
        HmatKind::Hadamard => is_hadamard(&file.matrix),
        HmatKind::Skew => is_skew_hadamard(&file.matrix),
        HmatKind::Conference => is_conference_core(&file.matrix, file.matrix.rows()),
    };
    println!("{kind} {cert}");
    println!("elapsed: {:.3} s", cert.elapsed.as_secs_f64());
    Ok(if cert.passed() {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn props(q: u32) -> Run {
    let report = property_suite(q)?;
    print!("{report}");
    Ok(if report.all_passed() {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn variants(theorem: Theorem, q: u32, budget: usize) -> Run {
    let params = params_for_q(theorem, q)?;
    let start = Instant::now();
    let report = variant_search(&params, budget)?;
    println!(
        "theorem {theorem} q={q} s={} order={} budget={}",
        params.s, params.order, report.budget
    );
    for (i, o) in report.outcomes.iter().enumerate() {
        let witness = o
            .witness
            .as_ref()
            .map(|w| format!("  {w}"))
            .unwrap_or_default();
        println!(
            "{i:>5}  {}  commutator={:<5}  gram={:<5}  M={}  N={}  {}{witness}",
            o.verdict,
            if o.commutator_residual_zero {
                "zero"
            } else {
                "non0"
            },
            if o.gram_residual_zero { "ok" } else { "off" },
            o.m,
            o.n,
            o.n_label,
        );
    }
    let tried = report.outcomes.len();
    let n_tried = tried.min(report.n_family_size);
    println!("N family: {n_tried} of {} tried", report.n_family_size);
    if report.family_size > report.n_family_size {
        println!(
            "M crossing: {} of {} tried",
            tried - n_tried,
            report.family_size - report.n_family_size
        );
    }
    println!("passes: {}", report.passes.len());
    println!(
        "complete: {}",
        if report.complete() {
            "yes"
        } else {
            "no (budget)"
        }
    );
    println!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    Ok(if report.passes.is_empty() {
        Outcome::Fail
    } else {
        Outcome::Pass
    })
}

fn catalog(max_order: usize, rows: &Option<PathBuf>) -> Run {
    let c = coverage(max_order)?;
    print!("{c}");
    if let Some(path) = rows {
        fs::write(path, c.to_toml()?)
            .map_err(|e| Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(Outcome::Pass)
}

fn rebuild(manifest: &Path, out: &Option<PathBuf>, check: &Option<PathBuf>) -> Run {
    let report = Report::new(out);
    let text = fs::read_to_string(manifest)
        .map_err(|e| Usage(format!("cannot read {}: {e}", manifest.display())))?;
    let m = Manifest::from_toml(&text)?;
    let Some(file) = reproduce(&m)? else {
        report.line("manifest records a failed construction; nothing to rebuild");
        return Ok(Outcome::Fail);
    };
    if let Some(path) = check {
        let existing =
            fs::read(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
        if existing != render(&file).as_bytes() {
            report.line(format!("rebuilt matrix differs from {}", path.display()));
            return Ok(Outcome::Fail);
        }
        report.line(format!("rebuilt matrix is identical to {}", path.display()));
    }
    emit(&file, None, out, &report)?;
    Ok(Outcome::Pass)
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::Build {
            theorem,
            q,
            s,
            variant,
            m,
            out,
        } => build(theorem, q, s, &variant, m.as_deref(), &out),
        Command::Conference { q, out } => {
            emit_artifact(&conference_artifact(q)?, &out, &Report::new(&out))
        }
        Command::Paley { q, out } => {
            if q % 4 != 3 {
                return Err(Usage(format!(
                    "q = {q}: Paley skew seeds need q ≡ 3 (mod 4)"
                )));
            }
            let a = chain_artifact(SkewChain {
                paley_q: Some(q),
                doublings: 0,
            })?;
            emit_artifact(&a, &out, &Report::new(&out))
        }
        Command::Chain {
            paley_q,
            doublings,
            out,
        } => emit_artifact(
            &chain_artifact(SkewChain { paley_q, doublings })?,
            &out,
            &Report::new(&out),
        ),
        Command::Double { input, out } => {
            let file = read_hmat(&input)?;
            let input_manifest = fs::read_to_string(manifest_path(&input))
                .ok()
                .and_then(|t| Manifest::from_toml(&t).ok());
            let name = input.display().to_string();
            let a = double_artifact(&file.matrix, &name, input_manifest.as_ref())?;
            emit_artifact(&a, &out, &Report::new(&out))
        }
        Command::Verify { path, kind } => verify(&path, kind),
        Command::Props { q } => props(q),
        Command::Variants { theorem, q, budget } => variants(theorem, q, budget),
        Command::Catalog { max_order, rows } => catalog(max_order, &rows),
        Command::Rebuild {
            manifest,
            out,
            check,
        } => rebuild(&manifest, &out, &check),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {}", msg.lines().next().unwrap_or(""));
            ExitCode::from(2)
        }
    }
}
