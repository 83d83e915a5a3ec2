//! The `cardred` command line tool.
//!
//! Exit status: 0 when a command succeeds (for `check`: a model was found),
//! 1 when `check` exhausts its bound without finding a model, 2 on any
//! error, including an exceeded deadline.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use cardred_core::c2::psi_tbox;
use cardred_core::generators::{domino_tcbox, random, tile_torus, torus_tcbox, torus_tibox, DominoSpec};
use cardred_core::model_finder::{find_model, SearchError, SearchOptions, Verdict};
use cardred_core::reductions::{
    internalise, nominal_atoms, phi, satisfiability_box, singleton_cardinalities, spy_names,
};
use cardred_core::semantics::{extension, Interpretation};
use cardred_core::syntax::{parse_concept, parse_tbox, Name, TBox};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_MODEL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "cardred",
    version,
    about = "Reductions between cardinality restrictions, nominals and two-variable counting logic",
    after_help = "Exit status: 0 success / model found, 1 no model up to the bound, 2 error or timeout."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a TBox file and print it in canonical form.
    Parse { path: PathBuf },
    /// Search for a model with at most BOUND elements.
    Check {
        path: PathBuf,
        #[arg(long, default_value_t = 4)]
        bound: usize,
        /// Distinct individual names denote distinct elements.
        #[arg(long)]
        una: bool,
        /// Give up after this many seconds.
        #[arg(long)]
        deadline: Option<f64>,
        /// Extra individual name to interpret (repeatable).
        #[arg(long = "individual")]
        individuals: Vec<String>,
        /// Search this many domain sizes concurrently; the witness is then not canonical.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Translate a TBox into another formalism.
    Translate {
        path: PathBuf,
        #[arg(long)]
        to: Target,
    },
    /// Print a generated TBox.
    Generate {
        #[command(subcommand)]
        gadget: Gadget,
    },
    /// Search for a tiling of the S x T torus.
    Tile {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// Print the extension of a concept in an interpretation.
    Eval { model: PathBuf, concept: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// Two-variable counting logic (cardinality restrictions only).
    C2,
    /// Cardinality restrictions to GCIs over fresh nominals.
    Nominals,
    /// GCIs with nominals to nominal-free cardinality restrictions.
    Cardinalities,
    /// GCIs to a single concept, emitted as `card atleast 1 : C`.
    Internalise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Style {
    Card,
    Gci,
}

#[derive(Subcommand, Debug)]
pub enum Gadget {
    /// The 2^n x 2^n torus.
    Torus {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Style::Card)]
        style: Style,
    },
    /// The torus as cardinality restrictions.
    TorusCard {
        #[arg(long)]
        n: usize,
    },
    /// The torus as GCIs with a single nominal.
    TorusGci {
        #[arg(long)]
        n: usize,
    },
    /// The torus plus a tiling by the domino system in SPEC.
    Domino {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// A random small TBox.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Style::Card)]
        style: Style,
        /// Maximal number of statements.
        #[arg(long, default_value_t = 3)]
        size: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Number of individual names (o1, o2, ...) available.
        #[arg(long, default_value_t = 0)]
        nominals: usize,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Output(#[from] std::io::Error),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn input_error(path: &Path, e: impl ToString) -> CliError {
    CliError::Input { path: path.to_owned(), message: e.to_string() }
}

fn read_tbox(path: &Path) -> Result<TBox, CliError> {
    parse_tbox(&read(path)?).map_err(|e| input_error(path, e))
}

fn read_spec(path: &Path) -> Result<DominoSpec, CliError> {
    read(path)?.parse().map_err(|e| input_error(path, e))
}

fn invalid(e: impl ToString) -> CliError {
    CliError::Invalid(e.to_string())
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
/// Returns the process exit status.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Parse { path } => {
            write!(out, "{}", read_tbox(&path)?)?;
        }
        Command::Check { path, bound, una, deadline, individuals, workers } => {
            let tbox = read_tbox(&path)?;
            let mut opts = SearchOptions::new(bound).unique_names(una).workers(workers);
            if let Some(secs) = deadline {
                let d = Duration::try_from_secs_f64(secs)
                    .map_err(|_| invalid("--deadline must be a nonnegative number"))?;
                opts = opts.deadline(d);
            }
            for ind in individuals {
                opts = opts.individual(Name::new(&ind).map_err(invalid)?);
            }
            return match find_model(&tbox, &opts)? {
                Verdict::Consistent { model, canonical } => {
                    // The verdict is a comment so that the output parses as an interpretation.
                    writeln!(out, "# consistent")?;
                    if !canonical {
                        writeln!(out, "# witness from a parallel search; not canonical")?;
                    }
                    write!(out, "{model}")?;
                    Ok(EXIT_OK)
                }
                Verdict::NoModelUpTo(k) => {
                    writeln!(out, "no model up to {k}")?;
                    Ok(EXIT_NO_MODEL)
                }
            };
        }
        Command::Translate { path, to } => translate(&read_tbox(&path)?, to, out, err)?,
        Command::Generate { gadget } => generate(gadget, out)?,
        Command::Tile { spec, s, t } => {
            let spec = read_spec(&spec)?;
            match tile_torus(&spec.system, s, t, &spec.init).map_err(invalid)? {
                Some(tiling) => write!(out, "{tiling}")?,
                None => writeln!(out, "no tiling")?,
            }
        }
        Command::Eval { model, concept } => {
            let i: Interpretation = read(&model)?.parse().map_err(|e| input_error(&model, e))?;
            let c = parse_concept(&concept).map_err(invalid)?;
            writeln!(out, "{}", extension(&i, &c).map_err(invalid)?)?;
        }
    }
    Ok(EXIT_OK)
}

fn translate(tbox: &TBox, to: Target, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match (to, tbox) {
        (Target::C2, TBox::Card(t)) => writeln!(out, "{}", psi_tbox(t).map_err(invalid)?)?,
        (Target::Nominals, TBox::Card(t)) => {
            if !t.signature().individuals.is_empty() {
                writeln!(err, "warning: the input already contains nominals")?;
            }
            let (ti, ledger) = phi(t);
            for (index, r, noms) in ledger.iter() {
                let list: Vec<&str> = noms.iter().map(Name::as_str).collect();
                writeln!(out, "# {index}: {r} -> [{}]", list.join(", "))?;
            }
            write!(out, "{ti}")?;
        }
        (Target::Cardinalities, TBox::Incl(t)) => {
            for (o, a) in nominal_atoms(t) {
                writeln!(out, "# {a} stands for {{{o}}}")?;
            }
            write!(out, "{}", singleton_cardinalities(t))?;
        }
        (Target::Internalise, TBox::Incl(t)) => {
            let names = spy_names(t);
            writeln!(out, "# spy role: {}", names.spy)?;
            writeln!(out, "# spy individual: {}", names.individual)?;
            write!(out, "{}", satisfiability_box(internalise(t)))?;
        }
        (Target::C2 | Target::Nominals, TBox::Incl(_)) => {
            return Err(invalid("this translation expects cardinality restrictions (`card` statements)"))
        }
        (Target::Cardinalities | Target::Internalise, TBox::Card(_)) => {
            return Err(invalid("this translation expects GCIs (`gci` statements)"))
        }
    }
    Ok(())
}

fn generate(gadget: Gadget, out: &mut dyn Write) -> Result<(), CliError> {
    let text = match gadget {
        Gadget::Torus { n, style: Style::Card } | Gadget::TorusCard { n } => {
            torus_tcbox(n).map_err(invalid)?.to_string()
        }
        Gadget::Torus { n, style: Style::Gci } | Gadget::TorusGci { n } => torus_tibox(n).map_err(invalid)?.to_string(),
        Gadget::Domino { spec, n } => {
            let spec = read_spec(&spec)?;
            domino_tcbox(n, &spec.system, &spec.init).map_err(invalid)?.to_string()
        }
        Gadget::Random { seed, style, size, depth, nominals } => {
            let names: Vec<String> = (1..=nominals).map(|k| format!("o{k}")).collect();
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            let shape = random::Shape::small(2, 1).depth(depth).with_nominals(&names);
            let mut rng = random::rng(seed);
            match style {
                Style::Card => random::tcbox(&mut rng, &shape, size).to_string(),
                Style::Gci => random::tibox(&mut rng, &shape, size).to_string(),
            }
        }
    };
    write!(out, "{text}")?;
    Ok(())
}
