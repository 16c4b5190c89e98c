//! Command-line front end: every computation of the library as a batch
//! subcommand with json, csv or aligned-text output.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 on
//! invalid input.

mod commands;
mod dictionary;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use render::Format;

/// Degree cap for ring computations without `--unsafe-large`.
pub const RING_CAP: usize = 7;
/// Degree cap for exhaustive Mackey suites without `--unsafe-large`.
pub const MACKEY_CAP: usize = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<epi_mackey::Error> for CliError {
    fn from(e: epi_mackey::Error) -> Self {
        use epi_mackey::Error as E;
        match e {
            E::Inconsistent(_) | E::Overflow(_) => CliError::Internal(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "epi-mackey", version, about = "Exact surjection-category, Burnside, Mackey and cube computations")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    pub format: Format,
    /// Lift the default degree caps.
    #[arg(long, global = true)]
    pub unsafe_large: bool,
    /// Run batch checks on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Surjection counts Surj(k, i) for k, i <= max.
    SurjTable {
        #[arg(long, default_value_t = 8)]
        max: usize,
    },
    /// Isomorphism classes of Epi_{d,r} in basis order.
    Objects {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        r: usize,
    },
    /// Morphisms between two objects given by fiber sizes, e.g. 2,1.
    Hom {
        #[arg(long, value_parser = parse_tuple)]
        source: ::std::vec::Vec<usize>,
        #[arg(long, value_parser = parse_tuple)]
        target: ::std::vec::Vec<usize>,
        /// Also list the maps.
        #[arg(long)]
        list: bool,
    },
    /// Pullback of X -f-> E <-g- Y, maps given as 1-based value lists.
    Pullback {
        #[arg(long, value_parser = parse_tuple)]
        x: ::std::vec::Vec<usize>,
        #[arg(long, value_parser = parse_tuple)]
        y: ::std::vec::Vec<usize>,
        #[arg(long, value_parser = parse_tuple)]
        e: ::std::vec::Vec<usize>,
        #[arg(long, value_parser = parse_tuple)]
        f: ::std::vec::Vec<usize>,
        #[arg(long, value_parser = parse_tuple)]
        g: ::std::vec::Vec<usize>,
        /// Size bound on components; defaults to |X| + |Y|.
        #[arg(long)]
        d: Option<usize>,
    },
    /// Composite of two connected spans, each given by feet and the pair
    /// list of its legs, e.g. --first-pairs 1:1,2:1.
    SpanCompose {
        #[arg(long, value_parser = parse_tuple)]
        first_left: ::std::vec::Vec<usize>,
        #[arg(long, value_parser = parse_tuple)]
        first_right: ::std::vec::Vec<usize>,
        #[arg(long, value_parser = parse_pairs)]
        first_pairs: ::std::vec::Vec<(usize, usize)>,
        #[arg(long, value_parser = parse_tuple)]
        second_left: ::std::vec::Vec<usize>,
        #[arg(long, value_parser = parse_tuple)]
        second_right: ::std::vec::Vec<usize>,
        #[arg(long, value_parser = parse_pairs)]
        second_pairs: ::std::vec::Vec<(usize, usize)>,
        #[arg(long)]
        d: usize,
    },
    /// Basis, structure constants and marks of A(d, r).
    Ring {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        r: usize,
    },
    /// The marks matrix of A(d, r) with its checks.
    Marks {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        r: usize,
    },
    /// Image of the augmentation ideal I(d) under the mark at [k].
    Ideal {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        /// Join the image with pZ.
        #[arg(long)]
        p: Option<u64>,
    },
    /// The Segal table for a prime p.
    Segal {
        #[arg(long)]
        p: u64,
    },
    /// The representable Mackey functor at an object, with its axiom check.
    MackeyRepresentable {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, value_parser = parse_tuple)]
        at: ::std::vec::Vec<usize>,
    },
    /// Checks Mackey data read from a json file.
    MackeyCheck {
        #[arg(long)]
        input: PathBuf,
    },
    /// Right Kan extension test for a cube diagram, read from json or drawn
    /// at random.
    CubeCheck {
        /// Diagram json; omit to draw a random diagram.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Sub-poset: truncated, full or at-least:N.
        #[arg(long, default_value = "truncated")]
        sub: String,
        /// Shape of the random diagram.
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also answer with the pointwise oracle.
        #[arg(long)]
        oracle: bool,
        /// Print the tuple of the first failing unit cube.
        #[arg(long)]
        emit_failing: bool,
        /// Print the diagram itself.
        #[arg(long)]
        show_diagram: bool,
    },
    /// Exhaustive pigeonhole arithmetic for one (d, r, s).
    Pigeonhole {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
    },
    /// Every exhaustive suite at bounds derived from d.
    VerifyAll {
        #[arg(long, default_value_t = 4)]
        d: usize,
    },
    /// The dictionary between equivariant notions and their calculus
    /// counterparts.
    Dictionary,
}

fn parse_tuple(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("bad entry {t:?}: {e}")))
        .collect()
}

fn parse_pairs(s: &str) -> Result<Vec<(usize, usize)>, String> {
    s.split(',')
        .map(|t| {
            let (a, b) = t.split_once(':').ok_or_else(|| format!("expected a:b, got {t:?}"))?;
            let a = a.trim().parse::<usize>().map_err(|e| e.to_string())?;
            let b = b.trim().parse::<usize>().map_err(|e| e.to_string())?;
            Ok((a, b))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let outcome = commands::run(&cli).and_then(|report| Ok((report.render(cli.format, name)?, report.pass)));
    match outcome {
        Ok((text, pass)) => {
            print!("{text}");
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e @ CliError::Internal(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::SurjTable { .. } => "surj-table",
        Command::Objects { .. } => "objects",
        Command::Hom { .. } => "hom",
        Command::Pullback { .. } => "pullback",
        Command::SpanCompose { .. } => "span-compose",
        Command::Ring { .. } => "ring",
        Command::Marks { .. } => "marks",
        Command::Ideal { .. } => "ideal",
        Command::Segal { .. } => "segal",
        Command::MackeyRepresentable { .. } => "mackey-representable",
        Command::MackeyCheck { .. } => "mackey-check",
        Command::CubeCheck { .. } => "cube-check",
        Command::Pigeonhole { .. } => "pigeonhole",
        Command::VerifyAll { .. } => "verify-all",
        Command::Dictionary => "dictionary",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parsers() {
        assert_eq!(parse_tuple("2, 1").unwrap(), vec![2, 1]);
        assert!(parse_tuple("2,x").is_err());
        assert_eq!(parse_pairs("1:1,2:1").unwrap(), vec![(1, 1), (2, 1)]);
        assert!(parse_pairs("1-1").is_err());
    }
}
