use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "clifwave", version, about = "Clifford Cl(n,0) wavelet transform over SIM(n), n = 2, 3")]
pub struct Cli {
    /// Worker threads for parallel loops [default: all cores]
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// TOML profile; flags override its values, which override built-in defaults
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// More log output (-v info, -vv debug)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a Clifford Gabor mother wavelet and report its component means
    Gabor {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Output CLWF file
        #[arg(short, long, default_value = "gabor.clwf")]
        output: PathBuf,
    },
    /// Wavelet transform of a signal over the group grid
    Transform {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Input signal (CLWF field) [default: first signal of the seeded test suite]
        #[arg(short, long)]
        input: Option<PathBuf>,
        /// Output coefficient file
        #[arg(short, long, default_value = "coeffs.clwf")]
        output: PathBuf,
        /// Also write the transformed signal to this file
        #[arg(long, value_name = "FILE")]
        save_signal: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Method::Spectral)]
        method: Method,
    },
    /// Reconstruct a signal from coefficients and report the reconstruction error
    Invert {
        /// Coefficient file written by `transform`
        #[arg(short, long)]
        input: PathBuf,
        /// Output signal file
        #[arg(short, long, default_value = "reconstruction.clwf")]
        output: PathBuf,
        /// Reference signal [default: the signal recorded in the coefficient file]
        #[arg(long, value_name = "FILE")]
        reference: Option<PathBuf>,
        /// Largest acceptable relative L2 error; exceeding it exits with status 1
        #[arg(long, default_value_t = 0.05)]
        bound: f64,
    },
    /// Admissibility constant of the configured mother wavelet
    Admissibility {
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Run the identity suite; exit status 0 iff every check passes
    Verify {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Also write the report to this file
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
    },
    /// Export group-node coordinates and coefficient moduli as delimited text
    ExportPlot {
        /// Coefficient file
        #[arg(short, long)]
        input: PathBuf,
        /// Output text file
        #[arg(short, long, default_value = "plot.tsv")]
        output: PathBuf,
        /// Field delimiter
        #[arg(long, default_value = "\t")]
        delimiter: String,
        /// Only this scale index
        #[arg(long)]
        scale: Option<usize>,
        /// Only this rotation index
        #[arg(long)]
        rotation: Option<usize>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Spectral,
    Direct,
}

/// Profile overrides shared by the commands that build a profile.
#[derive(Args, Debug, Default, Clone)]
pub struct ProfileArgs {
    /// Algebra dimension, 2 or 3 [default: 2]
    #[arg(long)]
    pub n: Option<usize>,
    /// Samples per axis [default: 64 for n=2, 24 for n=3]
    #[arg(long)]
    pub grid: Option<usize>,
    /// Edge length of the centered box [default: 24 for n=2, 16 for n=3]
    #[arg(long)]
    pub extent: Option<f64>,
    /// Scale range and count as MIN,MAX,J [default: 0.5,4,16 for n=2, 0.8,2.4,6 for n=3]
    #[arg(long, value_name = "MIN,MAX,J")]
    pub scales: Option<String>,
    /// Rotation count K; 0 selects the octahedral group for n=3 [default: 16 for n=2, 0 for n=3]
    #[arg(long)]
    pub rotations: Option<usize>,
    /// Gabor widths, one per axis [default: 1,...,1]
    #[arg(long, value_name = "S1,S2[,S3]")]
    pub sigma: Option<String>,
    /// Gabor carrier, one component per axis [default: 3,0 for n=2, 2,0,0 for n=3]
    #[arg(long, value_name = "W1,W2[,W3]")]
    pub omega0: Option<String>,
    /// Gabor amplitude as a multivector, e.g. "1", "e1" or "2+0.5e12"; even or odd for n=2 [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub amplitude: Option<String>,
    /// Use the mother wavelet stored in this CLWF file instead of the Gabor flags
    #[arg(long, value_name = "FILE")]
    pub wavelet: Option<PathBuf>,
    /// Seed of the test-signal suite [default: 20]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of test signals [default: 20 for n=2, 4 for n=3]
    #[arg(long)]
    pub signals: Option<usize>,
}
