//! `srips`: selective Rips persistence experiments on geodesic spaces.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric or budget
//! error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use srips_core::{build_filtration, localize_bar, reduce, Error, Result};

use srips_cli::config::{preset, ExperimentConfig, ParamsConfig, ScaleSpec};
use srips_cli::pipeline;

#[derive(Parser)]
#[command(name = "srips", version, about = "Selective Rips persistence experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ConfigSource {
    /// Named preset: fig6-selective, fig6-rips, fig8-mixed, circle.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// TOML experiment config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the seed of the preset or config.
    #[arg(long)]
    seed: Option<u64>,
}

impl ConfigSource {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut config = match (&self.preset, &self.config) {
            (Some(name), None) => preset(name, self.seed.unwrap_or(0))?,
            (None, Some(path)) => ExperimentConfig::from_toml(&fs::read_to_string(path)?)?,
            _ => {
                return Err(Error::InvalidParams(
                    "provide exactly one of --preset or --config".into(),
                ))
            }
        };
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        Ok(config)
    }
}

#[derive(Args)]
struct ParamFlags {
    /// Diameter scale map: identity, linear:S or capped:OFFSET,S.
    #[arg(long, default_value = "identity")]
    a: String,
    /// Cluster scale map, same forms; must stay below a.
    #[arg(long, default_value = "identity")]
    b: String,
    #[arg(long, default_value_t = 3)]
    max_clusters: usize,
    #[arg(long, default_value_t = 3)]
    max_dim: usize,
    #[arg(long)]
    r_max: f64,
    /// Field characteristic.
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long)]
    simplex_budget: Option<usize>,
}

impl ParamFlags {
    fn to_config(&self) -> Result<ParamsConfig> {
        Ok(ParamsConfig {
            a: ScaleSpec::parse(&self.a)?,
            b: ScaleSpec::parse(&self.b)?,
            max_clusters: self.max_clusters,
            max_dim: self.max_dim,
            r_max: self.r_max,
            p: self.p,
            simplex_budget: self.simplex_budget,
        })
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample and thin a point cloud, written as x,y,z CSV.
    Sample {
        #[command(flatten)]
        source: ConfigSource,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the geodesic metric of a cloud CSV.
    Metric {
        #[arg(long)]
        cloud: PathBuf,
        #[arg(long)]
        link_radius: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build and export the selective Rips filtration of a metric file.
    Filtrate {
        #[arg(long)]
        metric: PathBuf,
        #[command(flatten)]
        params: ParamFlags,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reduce the filtration of a metric file to a diagram CSV.
    Persist {
        #[arg(long)]
        metric: PathBuf,
        #[command(flatten)]
        params: ParamFlags,
        #[arg(long)]
        out: PathBuf,
        /// Also write simplex counts per dimension.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Localize the most prominent bar of a metric file's diagram.
    Localize {
        #[arg(long)]
        metric: PathBuf,
        #[command(flatten)]
        params: ParamFlags,
        /// Restrict to bars of this dimension.
        #[arg(long)]
        dim: Option<u8>,
        /// Writes PREFIX.json and PREFIX_path.csv.
        #[arg(long)]
        out_prefix: PathBuf,
    },
    /// Run a full experiment and write its artifact bundle.
    Experiment {
        #[command(flatten)]
        source: ConfigSource,
        /// Override the config's output directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Greedy matching distance between two diagram CSVs.
    Compare {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for configuration problems, 3 for numeric/budget failures.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParams(_) | Error::Parse(_) | Error::Io(_) => 2,
        _ => 3,
    }
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Sample { source, out } => {
            let config = source.load()?;
            let (cloud, _, _) = pipeline::build_space(&config)?;
            let cloud = cloud.ok_or_else(|| {
                Error::InvalidParams(format!(
                    "sampler of {:?} is an exact model with no ambient cloud",
                    config.name
                ))
            })?;
            let mut f = fs::File::create(&out)?;
            srips_core::io::write_cloud(&cloud, &mut f)?;
            eprintln!("wrote {} points to {}", cloud.len(), out.display());
        }
        Cmd::Metric { cloud, link_radius, out } => {
            let cloud = srips_core::io::read_cloud(open(&cloud)?)?;
            let metric = srips_core::build_geodesic_metric(&cloud, link_radius)?;
            let mut f = fs::File::create(&out)?;
            srips_core::io::write_metric(&metric, &mut f)?;
            eprintln!("wrote {}x{} metric to {}", metric.len(), metric.len(), out.display());
        }
        Cmd::Filtrate { metric, params, out } => {
            let metric = srips_core::io::read_metric(open(&metric)?)?;
            let filtration = build_filtration(&metric, &params.to_config()?.to_params()?)?;
            let mut f = fs::File::create(&out)?;
            filtration.write_text(&metric, &mut f)?;
            eprintln!("wrote {} simplices to {}", filtration.len(), out.display());
        }
        Cmd::Persist { metric, params, out, stats } => {
            let metric = srips_core::io::read_metric(open(&metric)?)?;
            let p = params.p;
            let filtration = build_filtration(&metric, &params.to_config()?.to_params()?)?;
            let diagram = reduce(&filtration, p)?;
            let mut f = fs::File::create(&out)?;
            diagram.write_csv(&filtration, &mut f)?;
            if let Some(stats) = stats {
                let counts = filtration.count_by_dim();
                let mut text = String::new();
                for (d, c) in counts.iter().enumerate() {
                    text.push_str(&format!("dim{d} {c}\n"));
                }
                fs::write(stats, text)?;
            }
            eprintln!("wrote {} bars to {}", diagram.bars.len(), out.display());
        }
        Cmd::Localize { metric, params, dim, out_prefix } => {
            let metric = srips_core::io::read_metric(open(&metric)?)?;
            let p = params.p;
            let filtration = build_filtration(&metric, &params.to_config()?.to_params()?)?;
            let diagram = reduce(&filtration, p)?;
            let bar = diagram
                .bars
                .iter()
                .filter(|b| (b.dim == 1 && !b.is_infinite()) || b.dim == 2)
                .filter(|b| dim.map_or(true, |d| b.dim == d))
                .max_by(|a, b| a.lifespan().total_cmp(&b.lifespan()).then(a.dim.cmp(&b.dim)))
                .ok_or_else(|| Error::NoAttribution {
                    reason: "no localizable bar in the diagram".into(),
                })?;
            let found = localize_bar(bar, &filtration, &metric)?;
            let death = found
                .bar_death
                .map(|d| d.to_string())
                .unwrap_or_else(|| "null".into());
            fs::write(
                out_prefix.with_extension("json"),
                format!(
                    "{{\n  \"triple\": [{}, {}, {}],\n  \"total_length\": {},\n  \"bar\": {{\"dim\": {}, \"birth\": {}, \"death\": {}}}\n}}\n",
                    found.triple[0],
                    found.triple[1],
                    found.triple[2],
                    found.total_length,
                    found.bar_dim.unwrap_or(0),
                    found.bar_birth.unwrap_or(0.0),
                    death,
                ),
            )?;
            let mut csv = String::from("leg,point\n");
            for (leg, path) in found.paths.iter().enumerate() {
                for &pt in path {
                    csv.push_str(&format!("{leg},{pt}\n"));
                }
            }
            let mut path_file = out_prefix.as_os_str().to_owned();
            path_file.push("_path.csv");
            fs::write(PathBuf::from(path_file), csv)?;
            eprintln!(
                "localized triple {:?}, length {:.4}",
                found.triple, found.total_length
            );
        }
        Cmd::Experiment { source, out_dir } => {
            let mut config = source.load()?;
            if let Some(dir) = out_dir {
                config.output_dir = dir;
            }
            let outcome = pipeline::run_pipeline(&config)?;
            pipeline::write_bundle(&outcome, &outcome.config.output_dir.clone())?;
            pipeline::write_summary(&outcome, &mut std::io::stderr())?;
            eprintln!("bundle written to {}", outcome.config.output_dir.display());
        }
        Cmd::Compare { left, right, tolerance } => {
            let a = srips_core::io::read_diagram_csv(open(&left)?)?;
            let b = srips_core::io::read_diagram_csv(open(&right)?)?;
            let report = srips_core::compare_diagrams(&a, &b, tolerance);
            for dim in &report.per_dim {
                println!(
                    "dim {}: distance {:.6}, matched {}, diagonal {}+{}",
                    dim.dim,
                    dim.distance,
                    dim.pairs.len(),
                    dim.diagonal_left.len(),
                    dim.diagonal_right.len()
                );
            }
            println!(
                "overall distance {:.6} (tolerance {}): {}",
                report.distance,
                report.tolerance,
                if report.within_tolerance { "within" } else { "exceeded" }
            );
        }
    }
    Ok(())
}

fn open(path: &PathBuf) -> Result<std::io::BufReader<fs::File>> {
    Ok(std::io::BufReader::new(fs::File::open(path)?))
}
