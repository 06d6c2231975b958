use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "coarse",
    version,
    about = "Word metrics, smoothed lengths and the alpha pseudometric on finitely generated groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dump the open ball {x : l(x) < radius}
    Ball(BallArgs),
    /// Evaluate a length function at elements
    Length(LengthArgs),
    /// Per-annulus extremes of l1/l2 over the annuli of l2
    Ratio(ProfileArgs),
    /// Tail-window estimate of alpha(l1, l2)
    Alpha(ProfileArgs),
    /// Pairwise alpha estimates over a family and their maximum
    Diameter(DiameterArgs),
    /// sup of l_{B(R)}/l over a ball, for each smoothing radius R
    SmoothConv(SmoothArgs),
    /// alpha(r rho_{B(r)}, l) for each r
    WordConv(WordConvArgs),
    /// R-chain geodesicity scan on a finite metric space
    Chains(ChainsArgs),
    /// Two-point homogeneity scan under an isometry action
    Homog(HomogArgs),
    /// Run a named verification scenario
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Node cap for explorations (COARSE_BUDGET is used when absent)
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long, value_enum)]
    pub out: Option<Format>,
}

#[derive(Args, Debug)]
pub struct BallArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub length: String,
    #[arg(long)]
    pub radius: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct LengthArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub length: String,
    /// Elements in canonical syntax, e.g. 3, (2,-1), (s^1,4), (t^1,(2,-3)), aB
    #[arg(required = true, allow_hyphen_values = true)]
    pub elements: Vec<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub l1: String,
    #[arg(long)]
    pub l2: String,
    #[arg(long, default_value_t = 100.0)]
    pub rmax: f64,
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rmin: f64,
    /// Tail window in annuli (default: a quarter of the non-empty annuli)
    #[arg(long)]
    pub window: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct DiameterArgs {
    #[arg(long)]
    pub group: String,
    /// A length spec; repeat for each member of the family
    #[arg(long = "length", required = true)]
    pub lengths: Vec<String>,
    #[arg(long, default_value_t = 100.0)]
    pub rmax: f64,
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    #[arg(long)]
    pub window: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SmoothArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub length: String,
    /// Smoothing radii R, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    pub radii: Vec<f64>,
    /// Radius of the sampled ball
    #[arg(long)]
    pub radius: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct WordConvArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub length: String,
    /// Generating radii r, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    pub radii: Vec<f64>,
    #[arg(long, default_value_t = 1000.0)]
    pub rmax: f64,
    #[arg(long)]
    pub window: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ChainsArgs {
    /// Built-in space (grid:l1:N, grid:l2:N, tree:K:D, cycle:N, line:N) or a CSV distance matrix
    #[arg(long)]
    pub space: String,
    /// Step bounds R, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    pub radii: Vec<f64>,
    /// Number of sampled chain sources
    #[arg(long, default_value_t = 64)]
    pub sources: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report one chain from this point label (requires --to)
    #[arg(long, requires = "to")]
    pub from: Option<String>,
    #[arg(long, requires = "from")]
    pub to: Option<String>,
    #[arg(long, value_enum)]
    pub out: Option<Format>,
}

#[derive(Args, Debug)]
pub struct HomogArgs {
    #[arg(long)]
    pub space: String,
    /// translations, translations+rot4, dihedral, or a CSV file of maps
    #[arg(long)]
    pub action: String,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub margin: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub out: Option<Format>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Scenario id (see `coarse verify list`)
    pub scenario: String,
    #[arg(long)]
    pub group: Option<String>,
    /// Generating sets, separated by ';'
    #[arg(long)]
    pub gens: Option<String>,
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub margin: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}
