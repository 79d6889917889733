use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diffeo_core::complexes::{DEFAULT_DEPTH, DEFAULT_FREQ, DEFAULT_HEADROOM, DEFAULT_POLY_DEG};

mod commands;
mod render;

/// Exact de Rham cohomology of chart-and-relation presentations.
#[derive(Parser, Debug)]
#[command(name = "diffeo", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub profile: Profile,
}

#[derive(Args, Clone, Debug)]
pub struct Profile {
    /// Frequencies `k + Σ m_j c_j` with `|k|, |m_j| ≤ N`.
    #[arg(long, global = true, value_name = "N")]
    pub freq: Option<u32>,
    /// Explicit frequencies, e.g. `1/2,a`; closed under negation, 0 added.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "freq")]
    pub freq_list: Option<Vec<String>>,
    #[arg(long, global = true, value_name = "D", default_value_t = DEFAULT_POLY_DEG)]
    pub poly_deg: u32,
    #[arg(long, global = true, value_name = "H", default_value_t = DEFAULT_HEADROOM)]
    pub headroom: u32,
    /// Composition depth for horizontality saturation.
    #[arg(long, global = true, value_name = "K", default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
    #[arg(long, global = true, value_name = "R")]
    pub max_degree: Option<usize>,
    #[arg(long, global = true, value_name = "S", default_value_t = 0)]
    pub seed: u64,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

impl Profile {
    pub fn freq_n(&self) -> u32 {
        self.freq.unwrap_or(DEFAULT_FREQ)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theory {
    Kernel,
    BottTu,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Notion {
    Chart,
    Horizontal,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and check a presentation and its truncation window.
    Validate { file: PathBuf },
    /// Cohomology of global forms.
    Cohomology { file: PathBuf },
    /// Kernel-relative or Bott–Tu relative cohomology of a plot.
    Relative {
        file: PathBuf,
        #[arg(long, value_enum)]
        theory: Theory,
        /// `NAME` or `join:A,B,...`
        #[arg(long)]
        plot: String,
    },
    /// The presentation of a join and the cohomology of its horizontal forms.
    Join {
        file: PathBuf,
        #[arg(long)]
        plot: String,
    },
    /// Cochain-level exactness of the Mayer–Vietoris sequence of two charts.
    MvCheck {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Exactness of the long exact sequence of the Bott–Tu complex.
    LesCheck {
        file: PathBuf,
        #[arg(long)]
        plot: String,
    },
    /// The contracting homotopy `h` with `dh + hd = id` for a quotient plot.
    HomotopyCheck {
        file: PathBuf,
        #[arg(long)]
        plot: String,
    },
    /// Cup product of two basis classes, given as `degree:index`.
    Cup {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    CupLength { file: PathBuf },
    /// Relative cup product of basis classes of two plots.
    RelCup {
        file: PathBuf,
        #[arg(long, value_enum)]
        theory: Theory,
        #[arg(long)]
        left_plot: String,
        #[arg(long)]
        right_plot: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Lift a horizontal form on one chart to the join with another.
    Lift {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
    },
    /// Nullity of a family of charts and the resulting bound on cup length.
    HcatCheck {
        file: PathBuf,
        #[arg(long, value_enum)]
        notion: Notion,
        #[arg(long, value_delimiter = ',')]
        family: Vec<String>,
    },
    /// Run every invariant suite over the bundled examples.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = commands::run(&cli);
    for d in &report.diagnostics {
        eprintln!("{d}");
    }
    if cli.profile.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", render::text(&report));
    }
    ExitCode::from(report.exit_code as u8)
}
