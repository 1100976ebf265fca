//! Command-line driver for fence solves and verification campaigns.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 input error, 3 internal or solver error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use poincare_core::fencesolver::{SolverOptions, Which};
use poincare_core::harness::*;
use poincare_core::{Error, Result};

#[derive(Parser)]
#[command(name = "poincare-fence", version, about = "Shortest-fence constants of convex planar bodies and verification campaigns")]
struct Cli {
    /// Seed of randomized campaigns.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Tolerance of the main inequality check (campaign default when omitted).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Oracle lattice resolution; 0 disables the oracle.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_GRID)]
    grid: usize,
    /// Output directory; results go to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    Sigma1,
    Mu1,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    SinSin,
    Uniform,
}

#[derive(Clone, Copy, ValueEnum)]
enum CampaignArg {
    Bonnesen,
    Constwidth,
    Series,
    Oned,
    Perturb,
    Appendix,
    Partition,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the fence problem for every body of a spec file.
    Fence {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = WhichArg::Sigma1)]
        which: WhichArg,
    },
    /// Constant-width lower bound on the bodies of a spec file, or on the random sweep.
    Cw {
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
    /// One-dimensional weighted bounds on random weight corpora.
    Oned {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2, 3])]
        m: Vec<u32>,
    },
    /// Balanced equipartition of a field on the unit square.
    Partition {
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long, value_enum, default_value_t = FieldArg::SinSin)]
        field: FieldArg,
    },
    /// Corner perturbations of the Reuleaux triangle along a decreasing ladder.
    Perturb {
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
    },
    /// Nonlinear-eigenvalue constant along a decreasing exponent ladder.
    Appendix {
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1.0)]
        k_infinity: f64,
        #[arg(long, default_value_t = APPENDIX_RATIO)]
        ratio: f64,
    },
    /// Run a campaign with its acceptance defaults.
    Verify {
        campaign: CampaignArg,
        /// Instance count of randomized campaigns.
        #[arg(long)]
        count: Option<usize>,
    },
}

fn cw_instances(specs: Vec<BodySpec>) -> Result<Vec<(String, BodySpec)>> {
    specs
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let is_ball = match s.parse()? {
                ParsedBody::Width(r) => r.l1_distance_to_ball() < 1e-12,
                ParsedBody::Body(_) => false,
            };
            Ok((if is_ball { "ball".to_string() } else { format!("body-{i:04}") }, s))
        })
        .collect()
}

fn run_campaign(cli: &Cli, cfg: &CampaignConfig) -> Result<CampaignResult> {
    match &cli.command {
        Command::Fence { spec, which } => {
            let which = match which {
                WhichArg::Sigma1 => Which::Sigma1,
                WhichArg::Mu1 => Which::Mu1,
            };
            campaign_fence(&read_specs(spec)?, which, cfg)
        }
        Command::Cw { spec: Some(path), .. } => constwidth_on(cfg, &cw_instances(read_specs(path)?)?),
        Command::Cw { spec: None, count } => campaign_constwidth(cfg, *count),
        Command::Oned { count, m } => campaign_oned(cfg, *count, m),
        Command::Partition { depth, field } => campaign_partition(
            *depth,
            match field {
                FieldArg::SinSin => PartitionField::SinSin,
                FieldArg::Uniform => PartitionField::Uniform,
            },
        ),
        Command::Perturb { eps } => campaign_perturb(&eps.clone().unwrap_or_else(default_eps_ladder)),
        Command::Appendix { p, k_infinity, ratio } => {
            campaign_appendix(&p.clone().unwrap_or_else(default_p_ladder), *k_infinity, *ratio)
        }
        Command::Verify { campaign, count } => match campaign {
            CampaignArg::Bonnesen => campaign_bonnesen(cfg, count.unwrap_or(200)),
            CampaignArg::Constwidth => campaign_constwidth(cfg, count.unwrap_or(50)),
            CampaignArg::Series => campaign_series(&default_series_grid()),
            CampaignArg::Oned => campaign_oned(cfg, count.unwrap_or(200), &[1, 2, 3]),
            CampaignArg::Perturb => campaign_perturb(&default_eps_ladder()),
            CampaignArg::Appendix => campaign_appendix(&default_p_ladder(), 1.0, APPENDIX_RATIO),
            CampaignArg::Partition => campaign_partition(3, PartitionField::SinSin),
        },
    }
}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::DomainError(format!("tolerance {t} must be finite and nonnegative")));
        }
    }
    let cfg = CampaignConfig { seed: cli.seed, tol: cli.tol, grid: cli.grid, solver: SolverOptions::default() };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| Error::SolverFailed(format!("thread pool: {e}")))?;
    let result = pool.install(|| run_campaign(cli, &cfg))?;
    let format = match cli.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    match &cli.out {
        Some(dir) => {
            for path in emit(&result, format, dir)? {
                eprintln!("wrote {}", path.display());
            }
        }
        None => {
            let text = match format {
                Format::Csv => result.csv.clone(),
                Format::Json => manifest_json(&result)?,
            };
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    for c in &result.checks {
        let tag = match (c.asserted, c.pass) {
            (false, _) => "INFO",
            (true, true) => "PASS",
            (true, false) => "FAIL",
        };
        eprintln!("{tag} {}: {}", c.name, c.detail);
    }
    eprintln!("{} {} in {:.2} s", result.campaign, if result.pass { "passed" } else { "failed" }, result.wall_time_s);
    Ok(result.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 3 })
        }
    }
}
