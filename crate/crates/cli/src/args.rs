use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use racg_core::coxeter::Word;
use racg_core::exact::{format_rational, parse_rational};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "racg",
    version,
    about = "Deformed right-angled Coxeter group representations and contraction checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Built-in graph: free(k), cycle(k) or complete2(k).
    #[arg(
        long,
        global = true,
        default_value = "free(3)",
        conflicts_with = "graph"
    )]
    pub preset: String,
    /// Graph file, either JSON `{"k": .., "infinite_edges": [[i, j], ..]}` or a preset name.
    #[arg(long, global = true)]
    pub graph: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<String>,
    /// Size of the worker pool; defaults to one per core.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub workers: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exceptional values and signature segments of the deformation.
    Profile(ProfileArgs),
    /// Exact matrices of the deformed representation and its normalization.
    Rep(RepArgs),
    /// Perron-Frobenius data of the adjacency matrix.
    Perron,
    /// Orbit of the Perron point in the normalized model.
    Orbit(OrbitArgs),
    /// Cocycle values on a ball of the group.
    Cocycle(OrbitArgs),
    /// Contraction evidence between two deformation parameters.
    Verify(VerifyArgs),
    /// Colored polytope constructions and their Lipschitz maps.
    Coloring(ColoringArgs),
    /// Machine-readable dumps of the graph, representation or cocycle.
    Export(ExportArgs),
}

/// Deformation parameter as an exact rational "p/q".
pub fn rational_arg(s: &str) -> Result<String, String> {
    parse_rational(s)
        .map(|r| format_rational(&r))
        .map_err(|e| e.to_string())
}

pub fn word_arg(s: &str) -> Result<String, String> {
    Word::parse(s)
        .map(|_| s.trim().to_string())
        .map_err(|e| e.to_string())
}

/// Range "lo:hi" of two rationals with `lo < hi`.
pub fn range_arg(s: &str) -> Result<String, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let (lo, hi) = (
        parse_rational(lo).map_err(|e| e.to_string())?,
        parse_rational(hi).map_err(|e| e.to_string())?,
    );
    if lo >= hi {
        return Err("empty range".into());
    }
    Ok(format!("{}:{}", format_rational(&lo), format_rational(&hi)))
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProfileArgs {
    /// Parameter range "lo:hi"; defaults to a bound on the roots up to -1.
    #[arg(long, allow_hyphen_values = true, value_parser = range_arg)]
    pub range: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RepArgs {
    /// Deformation parameter, an exact rational such as -5/2.
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    pub t: String,
    /// Word as dot-separated 1-based generators, or "e".
    #[arg(long, default_value = "e", value_parser = word_arg)]
    pub word: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OrbitArgs {
    /// Deformation parameter, an exact rational such as -5/2.
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    pub t: String,
    /// Maximum word length.
    #[arg(long, default_value_t = 3)]
    pub len: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Source deformation parameter.
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    pub t: String,
    /// Target deformation parameter, at least the source.
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    pub s: String,
    /// Maximum word length of the orbit sample.
    #[arg(long, default_value_t = 6)]
    pub len: usize,
    /// Pairs closer than this are excluded from the contraction ratio.
    #[arg(long, default_value_t = racg_core::verify::DEFAULT_SEPARATION, value_parser = positive)]
    pub separation: f64,
    /// Null vectors sampled for the quadric identity.
    #[arg(long, default_value_t = 1000)]
    pub quadric_samples: usize,
    /// Random translates for the affine equivariance check.
    #[arg(long, default_value_t = 10)]
    pub translates: usize,
    /// Scale of the random affine probe point.
    #[arg(long, default_value_t = 0.3, value_parser = positive)]
    pub affine_scale: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(group(ArgGroup::new("construction").required(true).args(["kgon", "cell120", "margulis"])))]
pub struct ColoringArgs {
    /// Right-angled regular k-gon in H^2, colored with two colors.
    #[arg(long)]
    pub kgon: Option<usize>,
    /// Right-angled 120-cell in H^4 with its five-coloring.
    #[arg(long = "120cell")]
    pub cell120: bool,
    /// Margulis-type example with this many disjoint walls.
    #[arg(long)]
    pub margulis: Option<usize>,
    /// Source deformation parameter.
    #[arg(long, default_value_t = 0.3, value_parser = positive)]
    pub t: f64,
    /// Target deformation parameter.
    #[arg(long, default_value_t = 0.4, value_parser = positive)]
    pub s: f64,
    /// Random pairs for the empirical Lipschitz ratio.
    #[arg(long, default_value_t = 10_000)]
    pub pairs: usize,
    /// Euclidean radius of the Klein-model ball the pairs are drawn from.
    #[arg(long, default_value_t = 0.9, value_parser = positive)]
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExportKind {
    Graph,
    Rep,
    Cocycle,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExportArgs {
    /// What to dump.
    #[arg(value_enum)]
    pub kind: ExportKind,
    /// Deformation parameter; required for `rep` and `cocycle`.
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    pub t: Option<String>,
    /// Word for a single representation matrix, as for `rep`.
    #[arg(long, default_value = "e", value_parser = word_arg)]
    pub word: String,
    /// Maximum word length of the cocycle table.
    #[arg(long, default_value_t = 2)]
    pub len: usize,
}
