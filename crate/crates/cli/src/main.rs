mod commands;
mod failure;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twistdecomp::tolerance::TOL_SCALE_ENV;
use twistdecomp::Tolerances;

use failure::Failure;

#[derive(Parser, Debug)]
#[command(name = "twistdecomp", version, about = "Twisted representations of finite groups and their decomposition along a normal subgroup")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed for the randomized splitting and for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    pub tol_unitary: Option<f64>,
    #[arg(long, global = true)]
    pub tol_cocycle: Option<f64>,
    #[arg(long, global = true)]
    pub tol_snap: Option<f64>,
    #[arg(long, global = true)]
    pub tol_rep: Option<f64>,
    #[arg(long, global = true)]
    pub tol_rep_numeric: Option<f64>,
    #[arg(long, global = true)]
    pub tol_character: Option<f64>,
    #[arg(long, global = true)]
    pub tol_scalar: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Order, elements, center and normal subgroups of a group.
    Group {
        /// `dihedral:<n>`, `cyclic:<n>`, `table:<file>` or `perm:<file>`.
        group: String,
    },
    /// Irreducible projective representations over a cocycle.
    Irr {
        group: String,
        /// `trivial`, `dihedral_alpha:<n>` or a cocycle file.
        cocycle: String,
        /// Include the representing matrices in the export.
        #[arg(long)]
        matrices: bool,
    },
    /// Decomposition of the twisted representation ring along a normal subgroup.
    Decompose {
        group: String,
        /// Comma-separated generator words of the normal subgroup, e.g. `a2` or `a,b`.
        #[arg(long = "A", value_name = "WORDS", default_value = "")]
        normal: String,
        cocycle: String,
        /// `normalized` or `perturbed:<seed>`.
        #[arg(long, default_value = "normalized")]
        convention: String,
        /// Root-of-unity lattice for the coboundary diagnostic on each β; 0 disables it.
        #[arg(long, default_value_t = 8)]
        coboundary_lattice: u32,
    },
    /// Ranks of twisted K⁰ of a finite G-set on both sides of the decomposition.
    Kgset {
        group: String,
        #[arg(long = "A", value_name = "WORDS", default_value = "")]
        normal: String,
        cocycle: String,
        /// A G-set file, or `point`, `empty`, `cosets:<words>`.
        gset: String,
    },
    /// Runs a named invariant suite and prints a pass/fail matrix.
    Verify {
        /// dihedral-family, sum-of-squares, action-laws, random-gsets, phase-robustness
        suite: String,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long)]
        group: Option<String>,
        #[arg(long = "A", value_name = "WORDS")]
        normal: Option<String>,
        #[arg(long)]
        cocycle: Option<String>,
        /// Number of randomized cases.
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

impl Common {
    pub fn tolerances(&self) -> Result<Tolerances, Failure> {
        if let Ok(raw) = std::env::var(TOL_SCALE_ENV) {
            match raw.trim().parse::<f64>() {
                Ok(f) if f > 0.0 && f.is_finite() => {}
                _ => return Err(Failure::usage(format!("{TOL_SCALE_ENV} must be a positive number, got `{raw}`"))),
            }
        }
        let mut t = Tolerances::from_env();
        let overrides = [
            (self.tol_unitary, &mut t.unitary, "--tol-unitary"),
            (self.tol_cocycle, &mut t.cocycle, "--tol-cocycle"),
            (self.tol_snap, &mut t.snap, "--tol-snap"),
            (self.tol_rep, &mut t.rep, "--tol-rep"),
            (self.tol_rep_numeric, &mut t.rep_numeric, "--tol-rep-numeric"),
            (self.tol_character, &mut t.character, "--tol-character"),
            (self.tol_scalar, &mut t.scalar, "--tol-scalar"),
        ];
        for (value, slot, flag) in overrides {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Failure::usage(format!("{flag} must be positive, got {v}")));
                }
                *slot = v;
            }
        }
        Ok(t)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(&cli.common),
    }
}
