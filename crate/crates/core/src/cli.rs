//! The `entropy-adjoint` command line.
//!
//! Exit codes: 0 when the checked property holds (or the command succeeded),
//! 1 when it fails, 2 on malformed or inconsistent input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::galois::{self, check_connection, derive_operators, extract_cores, Connection, MonotoneMap, Side};
use crate::model;
use crate::space::Space;
use crate::szilard;
use crate::toy::{self, ToyCase};
use crate::transfer::{empirical_table, exhaustive_table, match_case_patterns, Functor};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "entropy-adjoint", version, about = "Check Galois connections between entropy systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Model files of a connection `F: C → D`, `G: D → C`.
#[derive(Debug, clap::Args)]
pub struct PairArgs {
    /// System or order file for C
    #[arg(long)]
    pub source: PathBuf,
    /// System or order file for D
    #[arg(long)]
    pub target: PathBuf,
    /// Map file for F: C → D
    #[arg(long = "left")]
    pub left: PathBuf,
    /// Map file for G: D → C
    #[arg(long = "right")]
    pub right: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SideArg {
    /// Find G with F ⊣ G
    Right,
    /// Find F with F ⊣ G
    Left,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FunctorArg {
    /// Carry steps from C with F
    Left,
    /// Carry steps from D with G
    Right,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ToyArg {
    Case1,
    Case2,
    Case3,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run both adjunction criteria on a pair of maps
    Check {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Construct the adjoint of a monotone map
    Synthesize {
        /// Source system of the given map
        #[arg(long)]
        source: PathBuf,
        /// Target system of the given map
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        map: PathBuf,
        /// Which adjoint to construct
        #[arg(long, value_enum, default_value = "right")]
        side: SideArg,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Tabulate how reversibility of steps transfers along a connection
    Classify {
        #[command(flatten)]
        pair: PairArgs,
        /// Steps file; every grid step is used when omitted
        #[arg(long)]
        steps: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "left")]
        functor: FunctorArg,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Closure GF and interior FG of a connection with their laws
    Closure {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// The order-isomorphic cores G[D] and F[C]
    Core {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Hasse diagram of a finite order in DOT
    Hasse {
        #[arg(long)]
        input: PathBuf,
        /// Collapse mutually related elements first
        #[arg(long)]
        quotient: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Szilard engine ledger as CSV
    Szilard {
        #[arg(long, default_value_t = 300.0)]
        temperature: f64,
        #[arg(long, default_value_t = 1)]
        cycles: u64,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[arg(long = "memory-bits", default_value_t = 2)]
        memory_bits: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Reproduce one of the worked toy connections
    Toy {
        #[arg(value_enum)]
        case: ToyArg,
    },
}

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_HOLDS };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(code) => code,
        Err(Error::Unverified) => {
            let _ = writeln!(err, "error: {}", Error::Unverified);
            EXIT_FAILS
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn verdict(holds: bool) -> i32 {
    if holds {
        EXIT_HOLDS
    } else {
        EXIT_FAILS
    }
}

fn emit(text: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Error::Invalid(format!("cannot write output: {e}"))),
    }
}

fn load_pair(pair: &PairArgs) -> Result<(MonotoneMap, MonotoneMap)> {
    let c = model::load_space(&pair.source)?;
    let d = model::load_space(&pair.target)?;
    let f = model::load_map(&pair.left, c.clone(), d.clone())?;
    let g = model::load_map(&pair.right, d, c)?;
    Ok((f, g))
}

fn load_connection(pair: &PairArgs) -> Result<Connection> {
    let (f, g) = load_pair(pair)?;
    check_connection(&f, &g)
}

fn list(space: &Space, states: &[crate::space::State]) -> String {
    let items: Vec<String> = states.iter().map(|s| space.render(s)).collect();
    format!("{{{}}}", items.join(", "))
}

fn execute(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Check { pair } => {
            let conn = load_connection(pair)?;
            emit(&conn.to_string(), None, out)?;
            Ok(verdict(conn.is_verified()))
        }
        Command::Synthesize { source, target, map, side, output } => {
            let c = model::load_space(source)?;
            let d = model::load_space(target)?;
            let m = model::load_map(map, c, d)?;
            let side = match side {
                SideArg::Right => Side::RightOf,
                SideArg::Left => Side::LeftOf,
            };
            match galois::synthesize_adjoint(&m, side)? {
                Some(adj) => {
                    let json = serde_json::to_string_pretty(&model::map_to_value(&adj)).expect("json values serialize");
                    emit(&(json + "\n"), output.as_deref(), out)?;
                    Ok(EXIT_HOLDS)
                }
                None => {
                    let which = if side == Side::RightOf { "right" } else { "left" };
                    let _ = writeln!(err, "no {which} adjoint exists for {m}");
                    Ok(EXIT_FAILS)
                }
            }
        }
        Command::Classify { pair, steps, functor, output } => {
            let conn = load_connection(pair)?;
            let functor = match functor {
                FunctorArg::Left => Functor::Left,
                FunctorArg::Right => Functor::Right,
            };
            let table = match steps {
                Some(path) => {
                    let system = match functor {
                        Functor::Left => conn.source().clone(),
                        Functor::Right => conn.target().clone(),
                    };
                    empirical_table(&conn, functor, &model::load_steps(path, system)?)?
                }
                None => exhaustive_table(&conn, functor)?,
            };
            emit(&table.to_csv(), output.as_deref(), out)?;
            let names: Vec<&str> = match_case_patterns(&table).iter().map(|p| p.name()).collect();
            let _ = writeln!(
                err,
                "matching patterns: {}",
                if names.is_empty() { "none".to_string() } else { names.join(", ") }
            );
            Ok(EXIT_HOLDS)
        }
        Command::Closure { pair, output } => {
            let conn = load_connection(pair)?;
            let ops = derive_operators(&conn)?;
            emit(&ops.to_string(), output.as_deref(), out)?;
            Ok(verdict(ops.closure_ok() && ops.interior_ok()))
        }
        Command::Core { pair, output } => {
            let conn = load_connection(pair)?;
            let cores = extract_cores(&conn)?;
            let mut text = String::new();
            text.push_str(&format!("core of C = G[D]: {}\n", list(conn.source(), &cores.source_core)));
            text.push_str(&format!("core of D = F[C]: {}\n", list(conn.target(), &cores.target_core)));
            text.push_str(&format!("mutually inverse: {}\n", cores.mutually_inverse));
            text.push_str(&format!("F restricted is an order-embedding: {}\n", cores.f_embedding));
            text.push_str(&format!("G restricted is an order-embedding: {}\n", cores.g_embedding));
            text.push_str(&format!("cores closed under F and G: {}\n", cores.closed));
            text.push_str(&format!(
                "order-isomorphic: {}\n",
                if cores.order_isomorphic() { "yes" } else { "no" }
            ));
            emit(&text, output.as_deref(), out)?;
            Ok(verdict(cores.order_isomorphic()))
        }
        Command::Hasse { input, quotient, output } => {
            let space = model::load_space(input)?;
            let order = space
                .finite_order()
                .ok_or_else(|| Error::Unsupported("Hasse diagrams need a finite carrier".into()))?;
            let dot = if *quotient {
                order.quotient_adiabats().0.hasse_edges()?.to_dot()
            } else {
                order.hasse_edges()?.to_dot()
            };
            emit(&dot, output.as_deref(), out)?;
            Ok(EXIT_HOLDS)
        }
        Command::Szilard { temperature, cycles, eta, memory_bits, output } => {
            let ledger = szilard::simulate(*temperature, *memory_bits, *eta, *cycles)?;
            emit(&ledger.to_csv(), output.as_deref(), out)?;
            let audit = szilard::audit_ledger(&ledger);
            let _ = write!(err, "{audit}");
            Ok(verdict(audit.passes))
        }
        Command::Toy { case } => {
            let case = match case {
                ToyArg::Case1 => ToyCase::Case1,
                ToyArg::Case2 => ToyCase::Case2,
                ToyArg::Case3 => ToyCase::Case3,
            };
            let outcome = toy::run(case, model::default_grid_n()?)?;
            emit(&outcome.render(), None, out)?;
            Ok(verdict(outcome.connection.is_verified()))
        }
    }
}
