//! `spread`: spreads and principal angles of user matrices, seeded
//! verification campaigns, fixed-instance reproductions and equality-witness
//! runs.
//!
//! Exit status: 0 success, 1 a check failed, 2 usage, parse or input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use spectral_spread::campaign::{self, CampaignConfig, DimRange};
use spectral_spread::io::read_matrix;
use spectral_spread::linalg::{eigenvalues, CMatrix, HermitianMatrix};
use spectral_spread::subspaces::{angle_spread_check, principal_angles, Isometry};
use spectral_spread::{spread, SpreadError};

#[derive(Parser)]
#[command(name = "spread", version, about = "Spectral spread of Hermitian matrices and its inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print shortest round-trip decimals instead of 6 significant digits.
    #[arg(long, global = true)]
    full_precision: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the machine-readable document here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues, spread and positive spread of a Hermitian matrix file.
    Spread {
        /// Whitespace-separated rows, or a JSON matrix document.
        matrix: PathBuf,
    },
    /// Run a seeded verification campaign.
    Verify {
        /// Campaign config (JSON); flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Master seed; required here or in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Trials per check [default: 1000].
        #[arg(long)]
        trials: Option<usize>,
        /// Inclusive dimension range [default: 2..12].
        #[arg(long, value_name = "LO..HI")]
        dims: Option<DimRange>,
        /// Worker threads (default: one per processor).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Relative tolerance for every check.
        #[arg(long)]
        tol: Option<f64>,
        /// Comma-separated check ids.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
    },
    /// Reproduce the three fixed instances and their expected failures.
    Counterexamples,
    /// Principal angles between range(S) and range(T), or range(e^{iX} S).
    Angles {
        /// n x k matrix with orthonormal columns.
        s: PathBuf,
        /// Second n x k basis.
        t: Option<PathBuf>,
        /// Hermitian n x n generator; compares S with e^{iX} S.
        #[arg(long = "exp", value_name = "X", conflicts_with = "t")]
        exp: Option<PathBuf>,
        /// Orthonormalize non-isometric inputs instead of rejecting them.
        #[arg(long)]
        orthonormalize: bool,
    },
    /// Equality-witness constructions; every deviation must be <= 1e-10.
    Sharpness {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random instances per dimension.
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, value_name = "LO..HI", default_value = "1..12")]
        dims: DimRange,
    },
}

enum Failure {
    Usage(String),
    Check,
}

impl From<SpreadError> for Failure {
    fn from(e: SpreadError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

struct Printer {
    full: bool,
}

impl Printer {
    fn num(&self, x: f64) -> String {
        if self.full {
            return format!("{x}");
        }
        let rounded: f64 = format!("{x:.5e}").parse().unwrap_or(x);
        let mag = rounded.abs();
        if mag != 0.0 && !(1e-4..1e6).contains(&mag) {
            format!("{rounded:e}")
        } else {
            format!("{rounded}")
        }
    }

    fn vec(&self, v: &[f64]) -> String {
        let items: Vec<String> = v.iter().map(|&x| self.num(x)).collect();
        format!("({})", items.join(", "))
    }
}

fn emit(cli: &Cli, document: &str) -> CmdResult {
    match &cli.out {
        Some(path) => std::fs::write(path, document)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{document}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn read(path: &Path) -> Result<CMatrix, Failure> {
    read_matrix(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_spread(cli: &Cli, path: &Path) -> CmdResult {
    let a = HermitianMatrix::new(read(path)?)?;
    let l = eigenvalues(&a)?;
    let sv = spread(&a)?;
    match cli.format {
        Format::Text => {
            let p = Printer { full: cli.full_precision };
            let doc = format!(
                "lambda      {}\nlambda_asc  {}\nspread      {}\nspread_plus {}",
                p.vec(l.values()),
                p.vec(&l.ascending()),
                p.vec(&sv.full),
                p.vec(&sv.plus)
            );
            emit(cli, &doc)
        }
        Format::Json => emit(
            cli,
            &pretty(&json!({
                "lambda": l.values(),
                "lambda_ascending": l.ascending(),
                "spread": sv.full,
                "spread_plus": sv.plus,
            })),
        ),
        Format::Csv => {
            let asc = l.ascending();
            let mut doc = String::from("index,lambda,lambda_ascending,spread,spread_plus\n");
            for i in 0..a.dim() {
                let plus = sv.plus.get(i).map(|v| v.to_string()).unwrap_or_default();
                doc.push_str(&format!("{},{},{},{},{}\n", i + 1, l.values()[i], asc[i], sv.full[i], plus));
            }
            emit(cli, doc.trim_end())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    cli: &Cli,
    config: Option<&Path>,
    seed: Option<u64>,
    trials: Option<usize>,
    dims: Option<DimRange>,
    jobs: usize,
    tol: Option<f64>,
    checks: Option<&Vec<String>>,
) -> CmdResult {
    let mut cfg = match config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            CampaignConfig::from_json(&text)?
        }
        None => CampaignConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = Some(s);
    }
    if cfg.seed.is_none() {
        return Err(Failure::Usage("verify needs --seed (or \"seed\" in the config); there is no default".into()));
    }
    if let Some(t) = trials {
        cfg.trials = t;
    }
    if let Some(d) = dims {
        cfg.dims = d;
    }
    if let Some(c) = checks {
        cfg.checks = c.clone();
    }
    if let Some(t) = tol {
        cfg.tolerances = cfg.checks.iter().map(|id| (id.clone(), t)).collect();
    }
    let out_path = cli.out.clone().or_else(|| cfg.output.clone().map(PathBuf::from));
    let doc = campaign::run_campaign(&cfg, jobs)?;

    let p = Printer { full: cli.full_precision };
    for c in &doc.checks {
        let status = if c.probe {
            "PROBE"
        } else if c.passed() {
            "PASS"
        } else {
            "FAIL"
        };
        let mut line = format!(
            "{status:5} {:24} trials={} failures={} errors={} min_margin={}",
            c.check_id,
            c.trials,
            c.failures,
            c.errors,
            c.min_margin.map_or("-".into(), |m| p.num(m))
        );
        if let Some(n) = c.counterexamples {
            line.push_str(&format!(" counterexamples={n}"));
        }
        if let Some(f) = &c.first_failure {
            line.push_str(&format!(" first_failure=(seed {}, trial {})", f.seed, f.trial));
        }
        eprintln!("{line}");
    }
    let body = match cli.format {
        Format::Csv => doc.to_csv().trim_end().to_owned(),
        _ => doc.to_json(),
    };
    let written = match &out_path {
        Some(path) => std::fs::write(path, &body).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{body}");
            Ok(())
        }
    };
    written?;
    if doc.passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_counterexamples(cli: &Cli) -> CmdResult {
    let doc = campaign::counterexamples()?;
    match cli.format {
        Format::Json => emit(cli, &pretty(&serde_json::to_value(&doc).expect("serializable")))?,
        Format::Csv => {
            let mut body = String::from("instance,quantity,index,expected,computed,tolerance,ok\n");
            for inst in &doc.instances {
                for q in &inst.quantities {
                    for (i, (e, c)) in q.expected.iter().zip(&q.computed).enumerate() {
                        body.push_str(&format!("{},{},{},{e},{c},{},{}\n", inst.instance, q.label, i + 1, q.tolerance, q.ok));
                    }
                }
            }
            emit(cli, body.trim_end())?
        }
        Format::Text => {
            let p = Printer { full: cli.full_precision };
            let mut body = String::new();
            for inst in &doc.instances {
                body.push_str(&format!("{}\n", inst.instance));
                for q in &inst.quantities {
                    body.push_str(&format!(
                        "  {:28} expected {:32} computed {:40} tol {} {}\n",
                        q.label,
                        p.vec(&q.expected),
                        p.vec(&q.computed),
                        p.num(q.tolerance),
                        if q.ok { "ok" } else { "MISMATCH" }
                    ));
                }
                body.push_str(&format!(
                    "  expected failure: {} -> {}\n",
                    inst.expected_failure,
                    if inst.failure_detected { "detected" } else { "NOT DETECTED" }
                ));
            }
            body.push_str(if doc.passed { "all instances reproduced" } else { "some instances did not reproduce" });
            emit(cli, &body)?
        }
    }
    if doc.passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn load_isometry(path: &Path, orthonormalize: bool) -> Result<(Isometry, bool), Failure> {
    let m = read(path)?;
    match Isometry::new(m.clone()) {
        Ok(s) => Ok((s, false)),
        Err(e) if orthonormalize => {
            eprintln!("note: {} is not an isometry ({e}); orthonormalizing its columns", path.display());
            Ok((Isometry::orthonormalize(&m)?, true))
        }
        Err(e) => Err(Failure::Usage(format!("{}: {e} (pass --orthonormalize to accept spanning sets)", path.display()))),
    }
}

fn cmd_angles(cli: &Cli, s_path: &Path, t_path: Option<&Path>, exp: Option<&Path>, orthonormalize: bool) -> CmdResult {
    let (s, s_fixed) = load_isometry(s_path, orthonormalize)?;
    let (t, t_fixed, report, generator) = match (t_path, exp) {
        (Some(tp), None) => {
            let (t, fixed) = load_isometry(tp, orthonormalize)?;
            (t, fixed, None, None)
        }
        (None, Some(xp)) => {
            let x = HermitianMatrix::new(read(xp)?)?;
            let t = s.moved_by(&spectral_spread::linalg::unitary_exp(&x)?)?;
            let report = angle_spread_check(&s, &x)?;
            (t, false, Some(report), Some(spread(&x)?.plus))
        }
        _ => return Err(Failure::Usage("angles needs either T or --exp X".into())),
    };
    let angles = principal_angles(&s, &t)?;
    let verdict_ok = report.as_ref().is_none_or(|r| r.verdict);
    match cli.format {
        Format::Text => {
            let p = Printer { full: cli.full_precision };
            let mut body = format!("radians {}\ndegrees {}", p.vec(angles.values()), p.vec(&angles.degrees()));
            if let (Some(r), Some(plus)) = (&report, &generator) {
                let half: Vec<f64> = plus.iter().map(|v| v / 2.0).collect();
                body.push_str(&format!(
                    "\nhalf_spread_plus_x {}\nangles submajorized by half spread: {} (min margin {})",
                    p.vec(&half),
                    r.verdict,
                    p.num(r.min_margin())
                ));
            }
            emit(cli, &body)?
        }
        _ => {
            let doc = json!({
                "radians": angles.values(),
                "degrees": angles.degrees(),
                "orthonormalized": {"s": s_fixed, "t": t_fixed},
                "report": report,
            });
            emit(cli, &pretty(&doc))?
        }
    }
    if verdict_ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_sharpness(cli: &Cli, seed: u64, trials: usize, dims: DimRange) -> CmdResult {
    if dims.lo < 1 || dims.hi > 64 || dims.lo > dims.hi {
        return Err(Failure::Usage(format!("dims {dims} must satisfy 1 <= LO <= HI <= 64")));
    }
    let doc = campaign::sharpness(seed, trials, dims)?;
    match cli.format {
        Format::Text => {
            let p = Printer { full: cli.full_precision };
            let worst = |name: &str| {
                doc.cases.iter().filter(|c| c.instance == name).map(|c| c.max_deviation).fold(0.0, f64::max)
            };
            let body = format!(
                "hat_witness   max deviation {}\nnegation_pair max deviation {}\n{} (tolerance {})",
                p.num(worst("hat_witness")),
                p.num(worst("negation_pair")),
                if doc.passed { "sharp" } else { "NOT SHARP" },
                p.num(doc.tolerance)
            );
            emit(cli, &body)?
        }
        Format::Json => emit(cli, &pretty(&serde_json::to_value(&doc).expect("serializable")))?,
        Format::Csv => {
            let mut body = String::from("instance,dim,trial,max_deviation,ok\n");
            for c in &doc.cases {
                body.push_str(&format!("{},{},{},{:e},{}\n", c.instance, c.dim, c.trial, c.max_deviation, c.ok));
            }
            emit(cli, body.trim_end())?
        }
    }
    if doc.passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spread { matrix } => cmd_spread(&cli, matrix),
        Command::Verify { config, seed, trials, dims, jobs, tol, checks } => {
            cmd_verify(&cli, config.as_deref(), *seed, *trials, *dims, *jobs, *tol, checks.as_ref())
        }
        Command::Counterexamples => cmd_counterexamples(&cli),
        Command::Angles { s, t, exp, orthonormalize } => cmd_angles(&cli, s, t.as_deref(), exp.as_deref(), *orthonormalize),
        Command::Sharpness { seed, trials, dims } => cmd_sharpness(&cli, *seed, *trials, *dims),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
