use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gc_vsa::run::{execute, headline, parse_override, Experiment, RunConfig, RunError};

/// Grid-cell VSA experiments.
#[derive(Parser)]
#[command(name = "gcvsa", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Flat TOML file with run settings.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for module orientations and experiment randomness.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of consecutive seeds to run.
    #[arg(long)]
    seeds: Option<usize>,
    /// Worker threads for seed sweeps.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Override any setting, e.g. `--set n_theta=17`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Track a random walk by binding displacement encodings.
    PathIntegration {
        #[command(flatten)]
        common: Common,
        /// Time steps of the walk.
        #[arg(long)]
        steps: Option<usize>,
        /// Side of the square arena in pixels.
        #[arg(long)]
        arena: Option<usize>,
    },
    /// Encode a five-object scene and recover each object's place and time.
    Scene {
        #[command(flatten)]
        common: Common,
        /// Identity whose resonator trace is written.
        #[arg(long)]
        query: Option<String>,
        /// Objects placed in the scene.
        #[arg(long)]
        items: Option<usize>,
        /// Resonator iteration budget per query.
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Map a member of one family tree onto another.
    FamilyTree {
        #[command(flatten)]
        common: Common,
        /// Member of the first tree to map.
        #[arg(long)]
        probe: Option<String>,
    },
    /// Receptive field of one neuron and the position similarity kernel.
    Kernel {
        #[command(flatten)]
        common: Common,
        /// Scale index of the neuron.
        #[arg(long)]
        scale: Option<usize>,
        /// Orientation index of the neuron.
        #[arg(long)]
        orientation: Option<usize>,
        /// Side of the receptive-field image in pixels.
        #[arg(long)]
        size: Option<usize>,
    },
    /// Rotate an encoded point and decode position and angle.
    Rotate {
        #[command(flatten)]
        common: Common,
        /// Distance of the encoded point from the origin.
        #[arg(long)]
        radius: Option<f64>,
        /// Rotation angle in degrees.
        #[arg(long, allow_hyphen_values = true)]
        angle: Option<f64>,
    },
}

fn put<T: Into<toml::Value>>(map: &mut BTreeMap<String, toml::Value>, key: &str, v: Option<T>) {
    if let Some(v) = v {
        map.insert(key.to_string(), v.into());
    }
}

fn int(v: Option<usize>) -> Option<i64> {
    v.map(|x| x as i64)
}

fn resolve(cli: Cli) -> Result<(RunConfig, usize), RunError> {
    let mut o = BTreeMap::new();
    let (experiment, common) = match cli.command {
        Command::PathIntegration {
            common,
            steps,
            arena,
        } => {
            put(&mut o, "steps", int(steps));
            put(&mut o, "arena", int(arena));
            (Experiment::PathIntegration, common)
        }
        Command::Scene {
            common,
            query,
            items,
            max_iter,
        } => {
            put(&mut o, "query", query);
            put(&mut o, "n_items", int(items));
            put(&mut o, "max_iter", int(max_iter));
            (Experiment::Scene, common)
        }
        Command::FamilyTree { common, probe } => {
            put(&mut o, "probe", probe);
            (Experiment::FamilyTree, common)
        }
        Command::Kernel {
            common,
            scale,
            orientation,
            size,
        } => {
            put(&mut o, "scale", int(scale));
            put(&mut o, "orientation", int(orientation));
            put(&mut o, "field_size", int(size));
            (Experiment::Kernel, common)
        }
        Command::Rotate {
            common,
            radius,
            angle,
        } => {
            put(&mut o, "radius", radius);
            put(&mut o, "angle_deg", angle);
            (Experiment::Rotate, common)
        }
    };
    let mut overrides = BTreeMap::new();
    for s in &common.set {
        let (k, v) = parse_override(s)?;
        overrides.insert(k, v);
    }
    overrides.extend(o);
    overrides.insert("experiment".into(), experiment.name().into());
    if let Some(seed) = common.seed {
        let seed = i64::try_from(seed)
            .map_err(|_| RunError::Validation("seed must be below 2^63".into()))?;
        overrides.insert("seed".into(), seed.into());
    }
    put(&mut overrides, "seeds", int(common.seeds));
    if let Some(out) = &common.out {
        overrides.insert("out".into(), out.display().to_string().into());
    }
    if common.jobs == 0 {
        return Err(RunError::Validation("--jobs must be at least 1".into()));
    }
    Ok((
        RunConfig::load(common.config.as_deref(), &overrides)?,
        common.jobs,
    ))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = resolve(cli).and_then(|(cfg, jobs)| {
        let metrics = execute(&cfg, jobs)?;
        Ok((cfg, metrics))
    });
    match result {
        Ok((cfg, metrics)) => {
            println!(
                "{} -> {} {}",
                cfg.experiment.name(),
                cfg.out.display(),
                headline(&metrics)
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("gcvsa: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
