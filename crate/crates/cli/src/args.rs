use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use lossdiv::PartialLoss;

#[derive(Debug, Parser)]
#[command(
    name = "lossdiv",
    version,
    about = "Discriminator losses as f-divergences on finite distributions"
)]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Pass/fail tolerance; each subcommand documents its default.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reproduce the loss/generator table: scale-affine fits and minimizer checks.
    Table(TableArgs),
    /// Check inf-risk = -1/2 D_f on random distribution pairs.
    Verify(VerifyArgs),
    /// D_f between two distribution files.
    Divergence(DivergenceArgs),
    /// Tabulate the generated f against its tabulated form, and optionally f*.
    Conjugate(ConjugateArgs),
    /// Evaluate the variational lower bound for witnesses.
    Bound(BoundArgs),
    /// Run the generation game against a target distribution.
    Train(TrainArgs),
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Cost parameter used for the cost-weighted row.
    #[arg(long, default_value_t = 0.3)]
    pub cw: f64,
    /// Number of log-spaced fit samples on [0.01, 100].
    #[arg(long, default_value_t = 25)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_loss)]
    pub loss: PartialLoss,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 1e-3)]
    pub min_mass: f64,
}

#[derive(Debug, Args)]
pub struct DivergenceArgs {
    #[arg(long, value_parser = parse_loss)]
    pub loss: PartialLoss,
    #[arg(long)]
    pub pg: PathBuf,
    #[arg(long)]
    pub pr: PathBuf,
    /// Use the tabulated closed form of f (default).
    #[arg(long, conflicts_with = "numeric_f")]
    pub table_f: bool,
    /// Use f generated from the loss by the supremum.
    #[arg(long)]
    pub numeric_f: bool,
}

#[derive(Debug, Args)]
pub struct ConjugateArgs {
    #[arg(long, value_parser = parse_loss)]
    pub loss: PartialLoss,
    /// `lo:hi:n`, log-spaced.
    #[arg(long, value_parser = parse_grid, default_value = "0.01:100:200")]
    pub s_grid: Grid,
    /// Use the swapped-partials generator.
    #[arg(long)]
    pub dual: bool,
    /// `lo:hi:n`, linearly spaced values of t for f*(t).
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub conjugate_grid: Option<Grid>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long, value_parser = parse_loss)]
    pub loss: PartialLoss,
    #[arg(long)]
    pub pr: PathBuf,
    #[arg(long)]
    pub pg: PathBuf,
    /// `optimal` or `random:N`.
    #[arg(long, value_parser = parse_witness, default_value = "optimal")]
    pub witness: WitnessSpec,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, value_parser = parse_loss)]
    pub loss: PartialLoss,
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long, default_value_t = 5000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 0.5)]
    pub lr: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub fd_step: f64,
    /// Stop once TV to the target falls below this.
    #[arg(long, default_value_t = 1e-4)]
    pub stop_tv: f64,
    /// Plain (unpreconditioned) gradient ascent.
    #[arg(long)]
    pub plain: bool,
    /// Trace CSV destination; defaults to the main output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WitnessSpec {
    Optimal,
    Random(usize),
}

impl std::fmt::Display for WitnessSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WitnessSpec::Optimal => f.write_str("optimal"),
            WitnessSpec::Random(n) => write!(f, "random:{n}"),
        }
    }
}

fn parse_loss(s: &str) -> Result<PartialLoss, String> {
    PartialLoss::from_str(s).map_err(|e| e.to_string())
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(format!("expected lo:hi:n, got `{s}`"));
    };
    let lo: f64 = lo.parse().map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: f64 = hi.parse().map_err(|_| format!("bad upper bound `{hi}`"))?;
    let n: usize = n.parse().map_err(|_| format!("bad point count `{n}`"))?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) || n == 0 {
        return Err(format!("grid `{s}` needs finite lo <= hi and n >= 1"));
    }
    Ok(Grid { lo, hi, n })
}

fn parse_witness(s: &str) -> Result<WitnessSpec, String> {
    match s.split_once(':') {
        None if s == "optimal" => Ok(WitnessSpec::Optimal),
        Some(("random", n)) => n
            .parse()
            .ok()
            .filter(|&n: &usize| n > 0)
            .map(WitnessSpec::Random)
            .ok_or_else(|| format!("bad witness count `{n}`")),
        _ => Err(format!("expected `optimal` or `random:N`, got `{s}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(
            parse_grid("0.1:10:5").unwrap(),
            Grid {
                lo: 0.1,
                hi: 10.0,
                n: 5
            }
        );
        assert!(parse_grid("1:0:5").is_err());
        assert!(parse_grid("1:2").is_err());
    }

    #[test]
    fn witnesses() {
        assert_eq!(parse_witness("optimal").unwrap(), WitnessSpec::Optimal);
        assert_eq!(parse_witness("random:7").unwrap(), WitnessSpec::Random(7));
        assert!(parse_witness("random:0").is_err());
        assert!(parse_witness("best").is_err());
    }
}
