use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use multilevy::montecarlo::ToleranceTier;
use multilevy::symbolcalc::Method;

#[derive(Debug, Parser)]
#[command(name = "multilevy", version, about = "Multiparameter operator families, their symbols and the Goursat problem")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Grid points per axis (power of two). Chosen automatically when absent.
    #[arg(long, global = true)]
    pub grid_n: Option<usize>,
    /// Frequency spacing. Chosen automatically when absent.
    #[arg(long, global = true)]
    pub grid_dxi: Option<f64>,
    /// Monte Carlo tolerance tier; defaults to the family's tail class.
    #[arg(long, global = true, value_enum)]
    pub tol_tier: Option<Tier>,
    /// Worker threads; output does not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Tier {
    Strict,
    HeavyTail,
}

impl From<Tier> for ToleranceTier {
    fn from(t: Tier) -> Self {
        match t {
            Tier::Strict => ToleranceTier::Strict,
            Tier::HeavyTail => ToleranceTier::HeavyTail,
        }
    }
}

/// Time arguments: `--s`/`--t` for up to two times, `--times` for any.
#[derive(Debug, Clone, Args)]
pub struct Times {
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["s", "t"])]
    pub times: Option<Vec<f64>>,
}

impl Times {
    pub fn resolve(&self, k: usize) -> Result<Vec<f64>, String> {
        let v = match &self.times {
            Some(v) => v.clone(),
            None => [self.s, self.t].into_iter().flatten().collect(),
        };
        if v.len() != k {
            return Err(format!("the family has {k} time parameters but {} were given", v.len()));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ApplyMethod {
    Multiplier,
    Convolution,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SymbolMethod {
    SetPartition,
    ClosedForm,
    FiniteDifference,
    All,
}

impl SymbolMethod {
    pub fn methods(self) -> Vec<Method> {
        match self {
            SymbolMethod::SetPartition => vec![Method::SetPartition],
            SymbolMethod::ClosedForm => vec![Method::ClosedForm],
            SymbolMethod::FiniteDifference => vec![Method::FiniteDifference],
            SymbolMethod::All => vec![Method::SetPartition, Method::ClosedForm, Method::FiniteDifference],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Core,
    Goursat,
    Montecarlo,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density of the measure at the given times.
    Density {
        #[arg(long)]
        family: PathBuf,
        #[command(flatten)]
        times: Times,
        /// Accept a symbol that has not decayed at the cutoff.
        #[arg(long)]
        allow_undecayed: bool,
    },
    /// Apply the operator to a field.
    Apply {
        #[arg(long)]
        family: PathBuf,
        #[command(flatten)]
        times: Times,
        /// Field file (`.csv` or `.mlvf`); a random smooth field when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "multiplier")]
        method: ApplyMethod,
        /// Also write the result in the binary field format.
        #[arg(long)]
        binary: bool,
    },
    /// Tabulate the derived symbol on the frequency grid.
    Symbol {
        #[arg(long)]
        family: PathBuf,
        #[command(flatten)]
        times: Times,
        #[arg(long, value_enum, default_value = "set-partition")]
        method: SymbolMethod,
        #[arg(long, default_value_t = multilevy::symbolcalc::DEFAULT_FD_STEP)]
        fd_step: f64,
    },
    /// Solve the characteristic problem described by a JSON file.
    Goursat {
        #[arg(long)]
        problem: PathBuf,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "core")]
        suite: Suite,
    },
    /// Draw samples from the measure at the given times.
    Sample {
        #[arg(long)]
        family: PathBuf,
        #[command(flatten)]
        times: Times,
        /// Number of draws.
        #[arg(long, default_value_t = 100_000)]
        m: usize,
    },
    /// Fit growth orders of the time partials.
    Growth {
        #[arg(long)]
        family: PathBuf,
        #[command(flatten)]
        times: Times,
        /// Multi-index such as `1,0`; repeatable. All 0/1 indices when absent.
        #[arg(long)]
        sigma: Vec<String>,
        #[arg(long, default_value_t = 10.0)]
        r_min: f64,
        #[arg(long, default_value_t = 1e4)]
        r_max: f64,
        #[arg(long, default_value_t = 32)]
        count: usize,
    },
}
