use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use stabtilt_core::tilting::MAX_STEPS;
use stabtilt_core::{CentralCharge, Error, Quiver};

mod commands;

#[derive(Debug, Parser)]
#[command(name = "stabtilt", version, about = "Stable classes of acyclic quivers by simple tilts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Type, radical vector or growth data, Cartan and Coxeter matrices.
    Info {
        quiver: PathBuf,
    },
    /// Enumerate stable classes with the mutation method.
    Stables {
        quiver: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = DirectionArg::Ccw)]
        direction: DirectionArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Defect, root type and postprojective/preinjective/regular verdict.
    Classify {
        quiver: PathBuf,
        /// Comma-separated dimension vector, e.g. `1,2`.
        #[arg(long)]
        class: String,
    },
    /// Look for equal phases among the classes of a bilateral run.
    Rigidity {
        quiver: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Report on an explicit representation, or search a dimension box.
    Oracle {
        quiver: PathBuf,
        /// Representation file `{"p", "dims", "maps"}`.
        #[arg(long, conflicts_with = "dim_box")]
        rep: Option<PathBuf>,
        /// Charge file or inline pairs.
        #[arg(long)]
        charge: Option<String>,
        /// Upper corner of the dimension box, e.g. `3,3`.
        #[arg(long = "box", requires = "charge")]
        dim_box: Option<String>,
        /// Field sizes tried for the box search.
        #[arg(long, default_value = "2,3")]
        primes: String,
    },
    /// Move one charge value along a segment and record the first stables.
    Sweep {
        quiver: PathBuf,
        #[arg(long)]
        charge: String,
        /// 1-based vertex whose charge moves.
        #[arg(long)]
        vertex: usize,
        /// End value `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = 11)]
        samples: usize,
        /// Stables recorded per sample.
        #[arg(long, default_value_t = 10)]
        first: usize,
        #[arg(long, value_enum, default_value_t = DirectionArg::Ccw)]
        direction: DirectionArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Charge file `{"Z": [[re, im], ...]}` or inline pairs `[-1,1],[1,1]`.
    #[arg(long, allow_hyphen_values = true)]
    charge: String,
    #[arg(long, default_value_t = 50)]
    max_steps: usize,
    /// Stop once two successive phases are this close to a limit ray.
    #[arg(long)]
    stop_gap: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Ccw,
    Cw,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Input(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

type Outcome = Result<(), Failure>;

fn read_quiver(path: &Path) -> Result<Quiver, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(Quiver::from_json(&text)?)
}

/// A path to a charge file, or the inline form.
fn read_charge(arg: &str, q: &Quiver) -> Result<CentralCharge, Failure> {
    let path = Path::new(arg);
    let z = if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
        CentralCharge::from_json(&text)?
    } else {
        CentralCharge::parse_inline(arg)?
    };
    z.check_quiver(q)?;
    Ok(z)
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, Failure> {
    text.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| Failure::Input(format!("bad {what} {text:?}"))))
        .collect()
}

fn check_run_args(run: &RunArgs) -> Outcome {
    if run.max_steps == 0 || run.max_steps > MAX_STEPS {
        let e = if run.max_steps == 0 {
            Error::InvalidArgument("max-steps must be at least 1".into())
        } else {
            Error::GuardExceeded(format!("max-steps {} > {MAX_STEPS}", run.max_steps))
        };
        return Err(e.into());
    }
    if let Some(g) = run.stop_gap {
        if !(g > 0.0 && g < 1.0) {
            return Err(Failure::Input(format!("stop-gap {g} not in (0, 1)")));
        }
    }
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Info { quiver } => commands::info(&read_quiver(&quiver)?, out),
        Command::Stables { quiver, run, direction, format } => {
            check_run_args(&run)?;
            let q = read_quiver(&quiver)?;
            let z = read_charge(&run.charge, &q)?;
            commands::stables(&q, &z, direction, run.max_steps, run.stop_gap, format, out)
        }
        Command::Classify { quiver, class } => {
            let q = read_quiver(&quiver)?;
            let class: Vec<i64> = parse_list(&class, "class")?;
            commands::classify(&q, &class.into(), out)
        }
        Command::Rigidity { quiver, run } => {
            check_run_args(&run)?;
            let q = read_quiver(&quiver)?;
            let z = read_charge(&run.charge, &q)?;
            commands::rigidity(&q, &z, run.max_steps, run.stop_gap, out)
        }
        Command::Oracle { quiver, rep, charge, dim_box, primes } => {
            let q = read_quiver(&quiver)?;
            let z = charge.as_deref().map(|c| read_charge(c, &q)).transpose()?;
            match (rep, dim_box) {
                (Some(path), None) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
                    let rep = stabtilt_core::Representation::from_json(&q, &text)?;
                    commands::oracle_rep(&rep, z.as_ref(), out)
                }
                (None, Some(b)) => {
                    let bounds: Vec<usize> = parse_list(&b, "box")?;
                    let primes: Vec<u32> = parse_list(&primes, "prime list")?;
                    let z = z.expect("clap requires --charge with --box");
                    commands::oracle_box(&q, &z, &primes, &bounds, out)
                }
                _ => Err(Failure::Input("give either --rep or --box".into())),
            }
        }
        Command::Sweep { quiver, charge, vertex, to, samples, first, direction, format } => {
            let q = read_quiver(&quiver)?;
            let z = read_charge(&charge, &q)?;
            let end: Vec<String> = parse_list(&to, "end value")?;
            let [re, im] = end.as_slice() else {
                return Err(Failure::Input(format!("--to expects re,im, got {to:?}")));
            };
            let end = stabtilt_core::RationalComplex::parse(re, im)?;
            if vertex == 0 || vertex > q.vertex_count() {
                return Err(Error::Index { index: vertex, n: q.vertex_count() }.into());
            }
            let dir = match direction {
                DirectionArg::Ccw => stabtilt_core::Direction::Ccw,
                DirectionArg::Cw => stabtilt_core::Direction::Cw,
                DirectionArg::Both => return Err(Failure::Input("sweep runs one direction".into())),
            };
            if first == 0 || first > MAX_STEPS {
                return Err(Failure::Input(format!("--first {first} not in 1..={MAX_STEPS}")));
            }
            let charges = z.along_segment(vertex - 1, &end, samples)?;
            commands::sweep(&q, &charges, vertex - 1, dir, first, format, out)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::GuardExceeded(_) => 3,
        Error::PhaseTie(..) => 4,
        Error::Invariant(_) | Error::NoConvergence(_) | Error::NegativeExt(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = dispatch(cli, &mut out).and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            let _ = out.flush();
            eprintln!("stabtilt: {e}");
            if let Error::PhaseTie(a, b) = &e {
                eprintln!("{}", serde_json::json!({ "witness": [a, b] }));
            }
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Input(msg)) => {
            eprintln!("stabtilt: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("stabtilt: {e}");
            ExitCode::from(1)
        }
    }
}
