use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use snpcut::modelsel::FilterRule;
use snpcut::netbuild::{NetworkKind, DEFAULT_WINDOW};
use snpcut::selection::Solver;
use snpcut::sim::{Method, ScenarioKind};

#[derive(Debug, Parser)]
#[command(
    name = "snpcut",
    version,
    about = "Network-guided SNP selection by exact minimum cut"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a SNP-SNP network edge list from a SNP map.
    BuildNetwork(BuildNetworkArgs),
    /// Select SNPs for fixed lambda and eta.
    Select(SelectArgs),
    /// Choose lambda and eta by cross-validation and report the stable selection.
    Cv(CvArgs),
    /// Run a simulation study of causal-SNP recovery.
    Simulate(SimulateArgs),
    /// Cross-validated ridge predictivity of a SNP selection.
    Evaluate(EvaluateArgs),
    /// Univariate per-SNP tests with Bonferroni correction.
    Baseline(BaselineArgs),
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::BuildNetwork(a) => &a.common,
            Command::Select(a) => &a.common,
            Command::Cv(a) => &a.common,
            Command::Simulate(a) => &a.common,
            Command::Evaluate(a) => &a.common,
            Command::Baseline(a) => &a.common,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Base seed for every random stream.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// New or empty directory receiving all outputs.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NetworkChoice {
    /// sequence neighbours
    Gs,
    /// SNPs inside the same gene body
    Gm,
    /// SNPs within --window of the same gene
    GmWindow,
    /// gm-window plus links between SNPs of interacting genes
    Gi,
}

impl NetworkChoice {
    pub fn kind(self, window: u64) -> NetworkKind {
        match self {
            NetworkChoice::Gs => NetworkKind::Gs,
            NetworkChoice::Gm => NetworkKind::Gm { window: 0 },
            NetworkChoice::GmWindow => NetworkKind::Gm { window },
            NetworkChoice::Gi => NetworkKind::Gi { window },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverChoice {
    /// Boykov-Kolmogorov augmenting paths
    Bk,
    /// Dinic blocking flows
    Dinic,
}

impl From<SolverChoice> for Solver {
    fn from(s: SolverChoice) -> Solver {
        match s {
            SolverChoice::Bk => Solver::BoykovKolmogorov,
            SolverChoice::Dinic => Solver::Dinic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterChoice {
    Mean,
    AnyFold,
}

impl From<FilterChoice> for FilterRule {
    fn from(f: FilterChoice) -> FilterRule {
        match f {
            FilterChoice::Mean => FilterRule::MeanCardinality,
            FilterChoice::AnyFold => FilterRule::AnyFold,
        }
    }
}

/// Where the network comes from: built from annotation, or read as an edge list.
#[derive(Debug, Clone, Args, Serialize)]
pub struct NetworkArgs {
    #[arg(long, value_enum, default_value = "gs")]
    pub network: NetworkChoice,
    /// SNP map TSV (snp_id, chrom, pos).
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// Gene annotation TSV (gene_id, chrom, start, end).
    #[arg(long)]
    pub genes: Option<PathBuf>,
    /// Gene interaction TSV (gene_id_a, gene_id_b).
    #[arg(long)]
    pub interactions: Option<PathBuf>,
    /// Base pairs around a gene body that count as near the gene.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: u64,
    /// Precomputed edge list (snp_id_a, snp_id_b, weight) instead of building one.
    #[arg(long, conflicts_with_all = ["map", "genes", "interactions"])]
    pub network_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DataArgs {
    /// Genotype TSV (iid, then one column per SNP; cells 0, 1, 2 or NA).
    #[arg(long)]
    pub genotypes: PathBuf,
    /// Phenotype TSV (iid, value).
    #[arg(long)]
    pub phenotype: PathBuf,
    /// Covariate TSV with header (iid, c1, ..., ck).
    #[arg(long)]
    pub covariates: Option<PathBuf>,
    /// Add this many leading genotype principal components as covariates.
    #[arg(long, default_value_t = 0)]
    pub pcs: usize,
    /// Drop SNPs whose minor allele frequency is below this value.
    #[arg(long, default_value_t = 0.1)]
    pub maf: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BuildNetworkArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "gs")]
    pub network: NetworkChoice,
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long)]
    pub genes: Option<PathBuf>,
    #[arg(long)]
    pub interactions: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SelectArgs {
    #[command(flatten)]
    pub common: Common,
    /// Precomputed scores TSV (snp_id, c) instead of genotypes and phenotype.
    #[arg(long, conflicts_with_all = ["genotypes", "phenotype", "covariates"])]
    pub scores: Option<PathBuf>,
    #[arg(long, requires = "phenotype")]
    pub genotypes: Option<PathBuf>,
    #[arg(long, requires = "genotypes")]
    pub phenotype: Option<PathBuf>,
    #[arg(long)]
    pub covariates: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub pcs: usize,
    #[arg(long, default_value_t = 0.1)]
    pub maf: f64,
    /// Divide scores by the residual sum of squares.
    #[arg(long)]
    pub normalize_phenotype: bool,
    #[command(flatten)]
    pub net: NetworkArgs,
    /// Connectivity penalty.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    /// Per-SNP sparsity penalty.
    #[arg(long, allow_negative_numbers = true)]
    pub eta: f64,
    #[arg(long, value_enum, default_value = "bk")]
    pub solver: SolverChoice,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CvArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub net: NetworkArgs,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    /// Comma-separated values or log:lo,hi,count.
    #[arg(long, default_value = "log:0.001,1000,7")]
    pub lambda_grid: String,
    #[arg(long, default_value = "log:0.001,1000,7")]
    pub eta_grid: String,
    /// Ignore grid cells selecting more than this fraction of SNPs.
    #[arg(long, default_value_t = 0.01)]
    pub max_selected_frac: f64,
    /// Compare the limit with the mean fold size or with every fold.
    #[arg(long, value_enum, default_value = "mean")]
    pub filter: FilterChoice,
    #[arg(long)]
    pub normalize_phenotype: bool,
    #[arg(long, value_enum, default_value = "bk")]
    pub solver: SolverChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    Univariate,
    Snpcut,
    Oracle,
    Random,
}

impl MethodChoice {
    pub fn method(self, alpha: f64) -> Method {
        match self {
            MethodChoice::Univariate => Method::Univariate { alpha },
            MethodChoice::Snpcut => Method::NetworkCut,
            MethodChoice::Oracle => Method::Oracle,
            MethodChoice::Random => Method::Random,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimNetworkChoice {
    Gs,
    Gm,
    Gi,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Scenarios a to f (comma-separated).
    #[arg(long, value_delimiter = ',', default_value = "a,b,c,d,e,f", value_parser = parse_scenario)]
    pub scenario: Vec<ScenarioKind>,
    #[arg(long, default_value_t = 30)]
    pub repeats: usize,
    /// Individuals.
    #[arg(long, default_value_t = 200)]
    pub m: usize,
    /// SNPs.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub n_causal: usize,
    /// Lower bound of the allele-frequency distribution.
    #[arg(long, default_value_t = 0.1)]
    pub maf_low: f64,
    /// Expected share of phenotypic variance explained by the causal SNPs.
    #[arg(long, default_value_t = 0.5)]
    pub heritability: f64,
    #[arg(long, default_value_t = 1.0)]
    pub noise_sd: f64,
    #[arg(long, default_value_t = 0.0)]
    pub remove_edges_frac: f64,
    #[arg(
        long,
        value_delimiter = ',',
        value_enum,
        default_value = "univariate,snpcut"
    )]
    pub methods: Vec<MethodChoice>,
    /// Networks used by the snpcut method (gm and gi use --window).
    #[arg(long, value_delimiter = ',', value_enum, default_value = "gs,gm,gi")]
    pub networks: Vec<SimNetworkChoice>,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: u64,
    /// Family-wise level of the univariate baseline.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    #[arg(long, default_value = "log:0.001,1000,7")]
    pub lambda_grid: String,
    #[arg(long, default_value = "log:0.001,1000,7")]
    pub eta_grid: String,
    #[arg(long, default_value_t = 0.1)]
    pub max_selected_frac: f64,
}

fn parse_scenario(s: &str) -> Result<ScenarioKind, String> {
    s.parse().map_err(|e: snpcut::Error| e.to_string())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub genotypes: PathBuf,
    #[arg(long)]
    pub phenotype: PathBuf,
    /// Selected SNP ids, one per line.
    #[arg(long)]
    pub selection: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    #[arg(long, default_value_t = snpcut::modelsel::DEFAULT_RIDGE_PENALTY)]
    pub ridge_penalty: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BaselineArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
}
