//! Command line driver. [`run`] takes the arguments and output streams so
//! tests can call it in-process.

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use quiverhh::algebra::Presentation;
use quiverhh::field::FieldSpec;
use quiverhh::io::{
    export_dot, parse_field, parse_input, AnalyzeReport, BasisKind, BasisReport, FacesReport, OracleReport,
    ProblemSpec,
};
use quiverhh::oracle::{cross_check, random_presentations, RandomConfig};
use quiverhh::planar::{build_embedding, FaceSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "quiverhh", version, about = "Derivations and HH^1 of quiver algebras kQ/I")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Override the input's field: Q, F<p> or F:<p>.
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<FieldSpec>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    Diff,
    H1,
    Hh1,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimensions, structural flags and the numbers behind the formulas.
    Analyze { file: PathBuf },
    /// Explicit operator bases, or the dimension when none is available.
    Basis {
        file: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Faces of the embedding given by the rotation lines.
    Faces { file: PathBuf },
    /// Compare formula dimensions with the brute-force oracle.
    Oracle {
        file: Option<PathBuf>,
        /// Also check this many random instances.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Graphviz rendering of the quiver.
    ExportDot { file: PathBuf },
}

/// A failed command: exit code plus message for stderr.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(e: impl Display) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

struct Ctx<'a> {
    json: bool,
    field: Option<FieldSpec>,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit<R: Serialize + Display>(&mut self, report: &R) -> Result<(), Failure> {
        let written = if self.json {
            let text = serde_json::to_string_pretty(report).map_err(Failure::input)?;
            writeln!(self.out, "{text}")
        } else {
            write!(self.out, "{report}")
        };
        written.map_err(|e| Failure {
            code: EXIT_USAGE,
            message: format!("cannot write output: {e}"),
        })
    }
}

fn load(path: &Path) -> Result<ProblemSpec, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_input(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn embedding(spec: &ProblemSpec, p: &Presentation) -> Result<Option<FaceSet>, Failure> {
    spec.rotation_system(p.quiver())
        .map(|rot| build_embedding(p.quiver(), &rot).map_err(Failure::input))
        .transpose()
}

fn execute(cmd: Command, ctx: &mut Ctx<'_>) -> Result<(), Failure> {
    match cmd {
        Command::Analyze { file } => {
            let p = load(&file)?.presentation(ctx.field).map_err(Failure::input)?;
            ctx.emit(&AnalyzeReport::new(&p))
        }
        Command::Basis { file, which } => {
            let spec = load(&file)?;
            let p = spec.presentation(ctx.field).map_err(Failure::input)?;
            let faces = embedding(&spec, &p)?;
            let kind = match which {
                Which::Diff => BasisKind::Diff,
                Which::H1 => BasisKind::H1,
                Which::Hh1 => BasisKind::Hh1,
            };
            let report = BasisReport::new(&p, faces.as_ref(), kind);
            ctx.emit(&report)?;
            match report.unavailable {
                Some(reason) => Err(Failure {
                    code: EXIT_HYPOTHESIS,
                    message: format!("no explicit {kind} basis: {reason}"),
                }),
                None => Ok(()),
            }
        }
        Command::Faces { file } => {
            let spec = load(&file)?;
            let p = spec.presentation(ctx.field).map_err(Failure::input)?;
            let faces = embedding(&spec, &p)?.ok_or_else(|| Failure::input("input has no rotation lines"))?;
            ctx.emit(&FacesReport::new(&p, &faces))
        }
        Command::Oracle { file, random, seed } => {
            if file.is_none() && random.is_none() {
                return Err(Failure {
                    code: EXIT_USAGE,
                    message: "oracle needs a FILE, --random N, or both".into(),
                });
            }
            let mut checks = Vec::new();
            if let Some(file) = &file {
                let p = load(file)?.presentation(ctx.field).map_err(Failure::input)?;
                checks.push((file.display().to_string(), cross_check(&p)));
            }
            if let Some(count) = random {
                let cfg = RandomConfig {
                    field: ctx.field.unwrap_or(FieldSpec::Rationals),
                    ..RandomConfig::default()
                };
                for (i, p) in random_presentations(seed, count, &cfg).iter().enumerate() {
                    checks.push((format!("random #{i}"), cross_check(p)));
                }
            }
            let report = OracleReport::new(random.map(|_| seed), checks);
            ctx.emit(&report)?;
            if report.all_agree {
                Ok(())
            } else {
                Err(Failure {
                    code: EXIT_MISMATCH,
                    message: "formula and oracle disagree".into(),
                })
            }
        }
        Command::ExportDot { file } => {
            let spec = load(&file)?;
            write!(ctx.out, "{}", export_dot(&spec)).map_err(Failure::input)
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mut ctx = Ctx {
        json: cli.json,
        field: cli.field,
        out,
    };
    match execute(cli.command, &mut ctx) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
