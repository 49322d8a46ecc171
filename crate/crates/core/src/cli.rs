//! Command-line interface. Every command prints one JSON document on
//! standard output. Errors go to standard error as `{"error": …}` with exit
//! code 2 for malformed or invalid input and 3 for numerical failures.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::diophantine::{
    decide_all_shrink_preserving, decide_preserve, decide_shrink, eigenvalue_selection_exists,
    frobenius_number, Decision, Verdict,
};
use crate::error::{Error, Result};
use crate::io::{load_input, ClosureOptions, LoadedAlgebra};
use crate::mapbuilder::{build_block_map, ShrinkMapSpec, SourcePipeline};
use crate::verify::{
    check_multiplicative, check_preserving, check_shrinking, DEFAULT_SAMPLES, DEFAULT_TOL,
};
use crate::wedderburn::{wedderburn_profile, WedderburnProfile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "spshrink",
    version,
    about = "Spectrum-shrinking and spectrum-preserving maps between finite-dimensional complex algebras"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Seed for every randomized stage.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Take the transitive closure of quasi-order inputs.
    #[arg(long, global = true)]
    close: bool,
    /// Add the diagonal to quasi-order inputs.
    #[arg(long = "reflexive-close", global = true)]
    reflexive_close: bool,
    /// Worker threads for sample-level parallelism.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Wedderburn profile of an algebra.
    Analyze { a: PathBuf },
    /// Decide whether shrinking (default) or preserving maps A → B exist, or
    /// whether every shrinking map is preserving.
    Decide {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, conflicts_with = "all_preserving")]
        preserving: bool,
        #[arg(long = "all-preserving")]
        all_preserving: bool,
    },
    /// Build a block map A → B and write it as JSON.
    Construct {
        a: PathBuf,
        b: PathBuf,
        /// Use a covering family, so the map preserves spectra.
        #[arg(long, conflicts_with = "non_preserving")]
        preserving: bool,
        /// Use a family that misses a source block, when one exists.
        #[arg(long = "non-preserving")]
        non_preserving: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a constructed map on random elements.
    Verify {
        a: PathBuf,
        b: PathBuf,
        map: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Frobenius number of the given block sizes.
    Frobenius {
        #[arg(required = true, num_args = 1..)]
        ks: Vec<usize>,
    },
    /// Whether some maximal ideal has codimension one.
    Eigsel { a: PathBuf },
}

struct Context {
    seed: u64,
    tol: f64,
    closure: ClosureOptions,
}

impl Context {
    fn load(&self, path: &Path) -> Result<LoadedAlgebra> {
        load_input(path, self.closure)
    }

    fn profile(&self, loaded: &LoadedAlgebra) -> Result<WedderburnProfile> {
        wedderburn_profile(&loaded.algebra, self.seed, self.tol)
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = write!(
                if e.use_stderr() {
                    err as &mut dyn Write
                } else {
                    out as &mut dyn Write
                },
                "{e}"
            );
            return code;
        }
    };
    let result = match cli.global.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
        {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Error::Internal(format!("thread pool: {e}"))),
        },
        None => execute(&cli),
    };
    match result {
        Ok(value) => {
            let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            if writeln!(out, "{text}").is_err() {
                return EXIT_INPUT;
            }
            EXIT_OK
        }
        Err(e) => {
            let code = exit_code(&e);
            let _ = writeln!(err, "{}", json!({ "error": e.to_string() }));
            code
        }
    }
}

/// 3 for numerical and internal failures, 2 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numeric() || matches!(e, Error::Internal(_)) {
        EXIT_NUMERIC
    } else {
        EXIT_INPUT
    }
}

fn execute(cli: &Cli) -> Result<Value> {
    let g = &cli.global;
    if !(g.tol.is_finite() && g.tol > 0.0) {
        return Err(Error::Schema(format!(
            "--tol must be positive, got {}",
            g.tol
        )));
    }
    let ctx = Context {
        seed: g.seed,
        tol: g.tol,
        closure: ClosureOptions {
            reflexive: g.reflexive_close,
            transitive: g.close,
        },
    };
    match &cli.command {
        Command::Analyze { a } => {
            let loaded = ctx.load(a)?;
            Ok(serde_json::to_value(ctx.profile(&loaded)?.summary()).expect("summary serializes"))
        }
        Command::Decide {
            a,
            b,
            preserving,
            all_preserving,
        } => {
            let (la, pa, pb) = load_pair(&ctx, a, b)?;
            let d = if *preserving {
                decide_preserve(&pa.ks, &pb.ks)?
            } else if *all_preserving {
                decide_all_shrink_preserving(&pa.ks, &pb.ks, is_sma(&la, &pa))?
            } else {
                decide_shrink(&pa.ks, &pb.ks)?
            };
            Ok(decision_json(&d))
        }
        Command::Construct {
            a,
            b,
            preserving,
            non_preserving,
            output,
        } => {
            let (la, pa, pb) = load_pair(&ctx, a, b)?;
            let d = if *preserving {
                decide_preserve(&pa.ks, &pb.ks)?
            } else if *non_preserving {
                decide_all_shrink_preserving(&pa.ks, &pb.ks, is_sma(&la, &pa))?
            } else {
                decide_shrink(&pa.ks, &pb.ks)?
            };
            let usable = match d.verdict {
                Verdict::No => *non_preserving && d.witness.is_some(),
                _ => !*non_preserving && d.witness.is_some(),
            };
            if !usable {
                return Ok(json!({ "decision": decision_json(&d), "output": Value::Null }));
            }
            let family = d.witness.clone().expect("checked above");
            let source =
                SourcePipeline::prepare(&la.algebra, la.certificate.as_ref(), ctx.seed, ctx.tol)?;
            let spec = build_block_map(source, &pb.ks, &family)?;
            let text = serde_json::to_string_pretty(&spec).expect("spec serializes");
            std::fs::write(output, text + "\n")?;
            Ok(json!({
                "decision": decision_json(&d),
                "output": output.display().to_string(),
                "covering": spec.is_covering(),
            }))
        }
        Command::Verify { a, b, map, samples } => {
            let la = ctx.load(a)?;
            let lb = ctx.load(b)?;
            let text = std::fs::read_to_string(map)?;
            let spec: ShrinkMapSpec = serde_json::from_str(&text)
                .map_err(|e| Error::Schema(format!("{}: {e}", map.display())))?;
            spec.validate()?;
            if spec.source.dim() != la.algebra.dim() {
                return Err(Error::DimensionMismatch {
                    expected: la.algebra.dim(),
                    got: spec.source.dim(),
                });
            }
            let pb = ctx.profile(&lb)?;
            let mut targets = spec.targets.clone();
            targets.sort_unstable();
            if targets != pb.ks {
                return Err(Error::Schema(format!(
                    "map targets {:?} do not match the profile {:?} of B",
                    spec.targets, pb.ks
                )));
            }
            let cert = la.certificate.as_ref();
            let shrinking = check_shrinking(&la.algebra, cert, &spec, *samples, ctx.tol, ctx.seed)?;
            let preserving =
                check_preserving(&la.algebra, cert, &spec, *samples, ctx.tol, ctx.seed)?;
            let multiplicative =
                check_multiplicative(&la.algebra, &spec, *samples, ctx.tol, ctx.seed)?;
            let covering = spec.is_covering();
            let claim_ok = if covering {
                preserving.passed()
            } else {
                shrinking.passed()
            };
            let pass = claim_ok && multiplicative.passed();
            Ok(json!({
                "claim": if covering { "preserving" } else { "shrinking" },
                "covering": covering,
                "verdict": if pass { "pass" } else { "fail" },
                "shrinking": shrinking,
                "preserving": preserving,
                "multiplicative": multiplicative,
            }))
        }
        Command::Frobenius { ks } => Ok(json!(frobenius_number(ks)?)),
        Command::Eigsel { a } => {
            let p = ctx.profile(&ctx.load(a)?)?;
            Ok(json!({ "ks": p.ks, "exists": eigenvalue_selection_exists(&p.ks) }))
        }
    }
}

fn load_pair(
    ctx: &Context,
    a: &Path,
    b: &Path,
) -> Result<(LoadedAlgebra, WedderburnProfile, WedderburnProfile)> {
    let la = ctx.load(a)?;
    let lb = ctx.load(b)?;
    let pa = ctx.profile(&la)?;
    let pb = ctx.profile(&lb)?;
    Ok((la, pa, pb))
}

/// Structural matrix algebras, including semisimple ones (a direct sum of
/// full matrix algebras is structural after a change of basis).
fn is_sma(loaded: &LoadedAlgebra, profile: &WedderburnProfile) -> bool {
    loaded.certificate.is_some() || profile.is_semisimple()
}

fn decision_json(d: &Decision) -> Value {
    serde_json::to_value(d).expect("decision serializes")
}
