use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::ToPrimitive;
use serde_json::json;

use sliceq::classify::classify;
use sliceq::expr::parse;
use sliceq::identities::{commutation_defect, decomposition_defect, leibniz_defect};
use sliceq::numdiff::{
    verify_fueter, verify_harmonicity, verify_lemma_dbar, NestedConfig, StencilConfig,
    VerificationReport,
};
use sliceq::sampling::{SamplePlan, DEFAULT_SEED};
use sliceq::slicefn::{PointHn, SliceFunction};
use sliceq::stem::{spherical_value_h, stem_tensor};
use sliceq::tensoralgebra::SubsetIndex;
use sliceq::{classify::is_circular_wrt, Error, StemFunction};

#[derive(Parser)]
#[command(name = "sliceq", version, about = "Slice functions of several quaternionic variables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Polynomial expression such as "x1*x3 + x2*x3^2*k"
    expr: String,
    /// Number of variables
    #[arg(short = 'n', long = "arity")]
    arity: usize,
    /// Emit JSON
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the stem function components
    Stem(Common),
    /// Report slice, slice regular and circular membership per variable
    Classify(Common),
    /// Evaluate at a point given as semicolon-separated 4-tuples
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        at: String,
    },
    /// Check one identity on the given function
    Verify {
        theorem: Theorem,
        #[command(flatten)]
        common: Common,
        /// Second factor for leibniz and subalgebra
        #[arg(long = "with")]
        other: Option<String>,
        /// Variable index; all variables when omitted
        #[arg(long = "var")]
        var: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    Leibniz,
    Representation,
    Harmonicity,
    Fueter,
    LemmaDbar,
    Commutation,
    Subalgebra,
}

enum Outcome {
    Done,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = match &cli.command {
        Command::Stem(c) | Command::Classify(c) => c.json,
        Command::Eval { common, .. } | Command::Verify { common, .. } => common.json,
    };
    match run(cli.command) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            let obj = json!({ "error": e.kind(), "message": e.to_string() });
            if json {
                println!("{obj}");
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}

fn stem_of(c: &Common) -> Result<StemFunction, Error> {
    parse(&c.expr, c.arity)?.to_stem()
}

fn run(cmd: Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Stem(c) => {
            let f = stem_of(&c)?;
            if c.json {
                println!("{}", f.to_json_string());
            } else {
                for k in SubsetIndex::all(f.arity()) {
                    println!("F_{k} = {}", f.component(k));
                }
            }
            Ok(Outcome::Done)
        }
        Command::Classify(c) => {
            let report = classify(&stem_of(&c)?)?;
            if c.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{report}");
            }
            Ok(Outcome::Done)
        }
        Command::Eval { common, at } => {
            let f = SliceFunction::new(stem_of(&common)?);
            let x: PointHn = at.parse()?;
            let v = f.evaluate(&x)?;
            if common.json {
                println!("{}", json!({ "point": x, "value": v.components() }));
            } else {
                println!("{v}");
            }
            Ok(Outcome::Done)
        }
        Command::Verify {
            theorem,
            common,
            other,
            var,
            seed,
            step,
            tol,
        } => {
            let f = stem_of(&common)?;
            let g = match &other {
                Some(src) => parse(src, common.arity)?.to_stem()?,
                None => f.clone(),
            };
            let n = f.arity();
            let vars: Vec<usize> = match var {
                Some(h) if h == 0 || h > n => return Err(Error::IndexOutOfRange { index: h, arity: n }),
                Some(h) => vec![h],
                None => (1..=n).collect(),
            };
            let plan = SamplePlan::new(seed);
            let report = verify(theorem, &f, &g, &vars, &plan, step, tol)?;
            if common.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                println!("{report}");
            }
            Ok(if report.pass { Outcome::Done } else { Outcome::Failed })
        }
    }
}

fn exact_report(theorem: &str, statement: &str, defects: &[StemFunction], seed: u64) -> VerificationReport {
    let worst = defects
        .iter()
        .map(|d| d.max_abs_coeff().to_f64().unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    VerificationReport::new(theorem, statement, defects.len(), worst, 0.0, seed)
}

fn merge(reports: Vec<VerificationReport>) -> VerificationReport {
    let first = &reports[0];
    let samples = reports.iter().map(|r| r.samples).sum();
    let worst = reports.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    VerificationReport::new(&first.theorem, &first.statement, samples, worst, first.tolerance, first.seed)
}

fn stencil(default: StencilConfig, step: Option<f64>, tol: Option<f64>) -> StencilConfig {
    let cfg = step.map_or(default, |s| default.with_step(s));
    tol.map_or(cfg, |t| cfg.with_tolerance(t))
}

fn nested(default: NestedConfig, step: Option<f64>, tol: Option<f64>) -> NestedConfig {
    let mut cfg = default;
    if let Some(s) = step {
        cfg.outer.step = s;
    }
    if let Some(t) = tol {
        cfg.tolerance = t;
    }
    cfg
}

fn verify(
    theorem: Theorem,
    f: &StemFunction,
    g: &StemFunction,
    vars: &[usize],
    plan: &SamplePlan,
    step: Option<f64>,
    tol: Option<f64>,
) -> Result<VerificationReport, Error> {
    let seed = plan.seed;
    match theorem {
        Theorem::Representation => {
            let d = vars.iter().map(|&h| decomposition_defect(f, h)).collect::<Result<Vec<_>, _>>()?;
            Ok(exact_report("representation", "F = F°_h + Im(Z_h) ⊗ F'_h", &d, seed))
        }
        Theorem::Leibniz => {
            let d = vars.iter().map(|&h| leibniz_defect(f, g, h)).collect::<Result<Vec<_>, _>>()?;
            Ok(exact_report("leibniz", "(F⊗G)'_h = F'_h ⊗ G°_h + F°_h ⊗ G'_h", &d, seed))
        }
        Theorem::Commutation => {
            let mut d = Vec::new();
            for &i in vars {
                for j in (1..=f.arity()).filter(|&j| j != i) {
                    d.push(commutation_defect(f, i, j)?);
                }
            }
            Ok(exact_report("commutation", "(F'_i)'_j = (F'_j)'_i", &d, seed))
        }
        Theorem::Subalgebra => {
            let mut failures = 0;
            for &h in vars {
                let set = SubsetIndex::singleton(h);
                let p = stem_tensor(&spherical_value_h(f, h)?, &spherical_value_h(g, h)?)?;
                if !is_circular_wrt(&p, set)?.holds {
                    failures += 1;
                }
            }
            Ok(VerificationReport::new(
                "subalgebra",
                "F°_h ⊗ G°_h is circular in x_h",
                vars.len(),
                failures as f64,
                0.0,
                seed,
            ))
        }
        Theorem::LemmaDbar => {
            let cfg = stencil(StencilConfig::first_derivative(), step, tol);
            let r = vars.iter().map(|&h| verify_lemma_dbar(f, h, plan, &cfg)).collect::<Result<Vec<_>, _>>()?;
            Ok(merge(r))
        }
        Theorem::Harmonicity => {
            let cfg = stencil(StencilConfig::laplacian(), step, tol);
            let r = vars.iter().map(|&h| verify_harmonicity(f, h, plan, &cfg)).collect::<Result<Vec<_>, _>>()?;
            Ok(merge(r))
        }
        Theorem::Fueter => {
            let cfg = nested(NestedConfig::fueter(), step, tol);
            let r = vars.iter().map(|&h| verify_fueter(f, h, plan, &cfg)).collect::<Result<Vec<_>, _>>()?;
            Ok(merge(r))
        }
    }
}
