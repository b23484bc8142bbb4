//! Experiment runner behind the `gcvsa` binary: a flat TOML run
//! configuration, dispatch, and artifact files.
//!
//! Every run writes `metrics.json` and a `config.toml` holding all resolved
//! settings; feeding that file back through `--config` repeats the run.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::GridConfig;
use crate::error::VsaError;
use crate::experiments::path_integration::{run_with, PathIntegrationParams, PathIntegrator};
use crate::experiments::scene::{SceneEncoder, SceneParams, SceneQuery};
use crate::experiments::trajectory::TrajectoryParams;
use crate::experiments::{analogy, FamilyTree, TreeSymbols};
use crate::raster::Grid2D;
use crate::resonator::{Projection, ResonatorOptions};
use crate::rotation::{angle_profile, decode_angle, rotate, write_profile_csv};
use crate::spatial::{
    receptive_field, similarity_kernel, Lattice, ModuleGeometry, Neuron, Point2D, PositionCodebook,
    Rect,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    PathIntegration,
    Scene,
    FamilyTree,
    Kernel,
    Rotate,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::PathIntegration => "path-integration",
            Experiment::Scene => "scene",
            Experiment::FamilyTree => "family-tree",
            Experiment::Kernel => "kernel",
            Experiment::Rotate => "rotate",
        }
    }
}

/// All settings of one invocation. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    /// Seeds both the module orientations and the experiment's randomness.
    pub seed: u64,
    /// Seeds `seed, seed + 1, ...` to sweep; artifacts other than
    /// `metrics.json` come from the first.
    pub seeds: usize,
    pub out: PathBuf,

    pub n: usize,
    pub n_theta: usize,
    pub n_s: usize,
    pub s_min: f64,
    pub growth: f64,

    // path integration
    pub arena: usize,
    pub steps: usize,
    pub smoothing: f64,
    pub noise_std: f64,
    pub max_speed: f64,

    // scene
    pub n_items: usize,
    pub extent_x: usize,
    pub extent_y: usize,
    pub extent_t: usize,
    pub max_iter: usize,
    pub low_confidence: f64,
    pub projection: Projection,
    /// Identity whose resonator trace is written to `trace.csv`.
    pub query: String,

    // family tree
    pub probe: String,

    // kernel
    pub scale: usize,
    pub orientation: usize,
    pub neuron_i: usize,
    pub neuron_j: usize,
    pub neuron_k: usize,
    pub field_size: usize,
    pub kernel_radius: usize,

    // rotate
    pub radius: f64,
    pub direction_deg: f64,
    pub angle_deg: f64,
    pub decode_extent: f64,
    pub decode_step: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let grid = GridConfig::default();
        let traj = TrajectoryParams::default();
        let scene = SceneParams::default();
        Self {
            experiment: Experiment::PathIntegration,
            seed: 0,
            seeds: 1,
            out: PathBuf::from("gcvsa-out"),
            n: grid.n,
            n_theta: grid.n_theta,
            n_s: grid.n_s,
            s_min: grid.s_min,
            growth: grid.growth,
            arena: 64,
            steps: 100,
            smoothing: traj.smoothing,
            noise_std: traj.noise_std,
            max_speed: traj.max_speed,
            n_items: scene.n_items,
            extent_x: scene.extent_x,
            extent_y: scene.extent_y,
            extent_t: scene.extent_t,
            max_iter: scene.resonator.max_iter,
            low_confidence: scene.low_confidence,
            projection: Projection::Rectified,
            query: "grape".into(),
            probe: "Charles".into(),
            scale: 0,
            orientation: 0,
            neuron_i: 0,
            neuron_j: 0,
            neuron_k: 0,
            field_size: 128,
            kernel_radius: 32,
            radius: 6.0,
            direction_deg: 0.0,
            angle_deg: 90.0,
            decode_extent: 10.0,
            decode_step: 0.5,
        }
    }
}

/// Failure of a run, split by exit status.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    /// Bad configuration or arguments (exit status 1).
    #[error("{0}")]
    Validation(String),
    /// Failure while running (exit status 2).
    #[error(transparent)]
    Runtime(#[from] VsaError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Validation(_) => 1,
            RunError::Runtime(_) => 2,
        }
    }
}

fn invalid(msg: impl Into<String>) -> RunError {
    RunError::Validation(msg.into())
}

impl RunConfig {
    /// Parses a flat TOML document, then applies `overrides` (keys to TOML
    /// values) on top.
    pub fn from_toml_with(
        text: &str,
        overrides: &BTreeMap<String, toml::Value>,
    ) -> Result<Self, RunError> {
        let mut table: toml::Table = text.parse().map_err(|e| invalid(format!("config: {e}")))?;
        for (k, v) in overrides {
            table.insert(k.clone(), v.clone());
        }
        let cfg: RunConfig = table
            .try_into()
            .map_err(|e| invalid(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(
        path: Option<&Path>,
        overrides: &BTreeMap<String, toml::Value>,
    ) -> Result<Self, RunError> {
        let text = match path {
            Some(p) => fs::read_to_string(p)
                .map_err(|e| invalid(format!("cannot read {}: {e}", p.display())))?,
            None => String::new(),
        };
        Self::from_toml_with(&text, overrides)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat config serialises")
    }

    pub fn grid(&self) -> GridConfig {
        GridConfig {
            n: self.n,
            n_theta: self.n_theta,
            n_s: self.n_s,
            s_min: self.s_min,
            growth: self.growth,
            seed: self.seed,
        }
    }

    pub fn trajectory(&self) -> TrajectoryParams {
        TrajectoryParams {
            smoothing: self.smoothing,
            noise_std: self.noise_std,
            max_speed: self.max_speed,
            ..TrajectoryParams::default()
        }
    }

    pub fn scene(&self) -> SceneParams {
        let base = SceneParams::default();
        SceneParams {
            n_items: self.n_items,
            extent_x: self.extent_x,
            extent_y: self.extent_y,
            extent_t: self.extent_t,
            low_confidence: self.low_confidence,
            resonator: ResonatorOptions {
                max_iter: self.max_iter,
                projection: self.projection,
                ..base.resonator
            },
            ..base
        }
    }

    pub fn validate(&self) -> Result<(), RunError> {
        self.grid().validate().map_err(|e| invalid(e.to_string()))?;
        if self.seeds == 0 {
            return Err(invalid("seeds must be at least 1"));
        }
        if self
            .seed
            .checked_add(self.seeds as u64 - 1)
            .is_none_or(|last| last > i64::MAX as u64)
        {
            return Err(invalid("seed range must stay below 2^63"));
        }
        match self.experiment {
            Experiment::PathIntegration => {
                if self.arena < 2 || self.steps == 0 {
                    return Err(invalid("arena must be >= 2 and steps >= 1"));
                }
                if !(0.0..=1.0).contains(&self.smoothing)
                    || !(self.max_speed > 0.0)
                    || !(self.noise_std >= 0.0)
                {
                    return Err(invalid("trajectory parameters out of range"));
                }
            }
            Experiment::Scene => {
                self.scene()
                    .validate()
                    .map_err(|e| invalid(e.to_string()))?;
                if self.max_iter == 0 {
                    return Err(invalid("max_iter must be at least 1"));
                }
                if !self.scene().vocabulary.contains(&self.query) {
                    return Err(invalid(format!("unknown query identity {:?}", self.query)));
                }
            }
            Experiment::FamilyTree => {
                if FamilyTree::tree_a().path_of(&self.probe).is_none() {
                    return Err(invalid(format!(
                        "probe {:?} is not in the first tree",
                        self.probe
                    )));
                }
            }
            Experiment::Kernel => {
                let n = self.n;
                if self.scale >= self.n_s
                    || self.orientation >= self.n_theta
                    || self.neuron_i >= n
                    || self.neuron_j >= n
                    || self.neuron_k >= n
                {
                    return Err(invalid("neuron address out of range"));
                }
                if self.field_size < 3 || self.kernel_radius == 0 {
                    return Err(invalid("field_size must be >= 3 and kernel_radius >= 1"));
                }
            }
            Experiment::Rotate => {
                if !(self.radius.is_finite()
                    && self.angle_deg.is_finite()
                    && self.direction_deg.is_finite())
                {
                    return Err(invalid("rotation parameters must be finite"));
                }
                if !(self.decode_step > 0.0 && self.decode_extent > 0.0) {
                    return Err(invalid("decode_step and decode_extent must be positive"));
                }
                if self.n_theta < 2 {
                    return Err(invalid("rotation needs n_theta >= 2"));
                }
            }
        }
        Ok(())
    }
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn point_json(p: Point2D) -> Value {
    json!([p.x, p.y])
}

fn write_json(path: &Path, v: &Value) -> Result<(), RunError> {
    let mut text = serde_json::to_string_pretty(v).expect("json values serialise");
    text.push('\n');
    fs::write(path, text).map_err(|e| RunError::Runtime(e.into()))
}

fn write_pgm(path: &Path, g: &Grid2D) -> Result<(), RunError> {
    fs::write(path, g.to_pgm()).map_err(|e| RunError::Runtime(e.into()))
}

fn create(path: &Path) -> Result<BufWriter<fs::File>, RunError> {
    Ok(BufWriter::new(
        fs::File::create(path).map_err(VsaError::from)?,
    ))
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

/// Runs `f` over the seed range, in parallel on `jobs` threads when more
/// than one. Results keep seed order.
fn sweep<T: Send>(
    cfg: &RunConfig,
    jobs: usize,
    f: impl Fn(u64) -> Result<T, RunError> + Sync,
) -> Result<Vec<T>, RunError> {
    use rayon::prelude::*;
    let seeds: Vec<u64> = (0..cfg.seeds as u64).map(|i| cfg.seed + i).collect();
    if jobs <= 1 || seeds.len() == 1 {
        return seeds.into_iter().map(&f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| invalid(format!("thread pool: {e}")))?;
    pool.install(|| seeds.into_par_iter().map(&f).collect())
}

fn shared_grid(cfg: &RunConfig, seed: u64) -> Result<Arc<GridConfig>, RunError> {
    Ok(cfg.grid().with_seed(seed).shared()?)
}

/// Validates `cfg`, creates the output directory and runs the experiment.
/// Returns the metrics written to `metrics.json`.
pub fn execute(cfg: &RunConfig, jobs: usize) -> Result<Value, RunError> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out).map_err(|e| RunError::Runtime(e.into()))?;
    fs::write(cfg.out.join("config.toml"), cfg.to_toml())
        .map_err(|e| RunError::Runtime(e.into()))?;
    let mut metrics = match cfg.experiment {
        Experiment::PathIntegration => path_integration(cfg, jobs)?,
        Experiment::Scene => scene(cfg, jobs)?,
        Experiment::FamilyTree => family_tree(cfg, jobs)?,
        Experiment::Kernel => kernel(cfg)?,
        Experiment::Rotate => rotation(cfg)?,
    };
    let geometry = ModuleGeometry::new(&shared_grid(cfg, cfg.seed)?);
    metrics["orientation_offsets_rad"] = json!(geometry
        .offsets()
        .iter()
        .map(|&x| round6(x))
        .collect::<Vec<_>>());
    write_json(&cfg.out.join("metrics.json"), &metrics)?;
    Ok(metrics)
}

fn path_integration(cfg: &RunConfig, jobs: usize) -> Result<Value, RunError> {
    let params = PathIntegrationParams {
        arena: cfg.arena,
        steps: cfg.steps,
        trajectory: cfg.trajectory(),
        map_steps: vec![0, cfg.steps / 2, cfg.steps],
    };
    let results = sweep(cfg, jobs, |seed| {
        let pi = PathIntegrator::new(&shared_grid(cfg, seed)?, cfg.arena)?;
        Ok(run_with(&pi, &params, seed)?)
    })?;
    let first = &results[0];

    let mut w = csv::Writer::from_writer(create(&cfg.out.join("trajectory.csv"))?);
    let io = |e: csv::Error| RunError::Runtime(VsaError::Io(e.into()));
    w.write_record(["t", "x", "y", "x_hat", "y_hat"])
        .map_err(io)?;
    for (t, (p, d)) in first
        .trajectory
        .positions
        .iter()
        .zip(&first.decoded)
        .enumerate()
    {
        w.write_record([
            t.to_string(),
            p.x.to_string(),
            p.y.to_string(),
            d.x.to_string(),
            d.y.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| RunError::Runtime(e.into()))?;
    for (t, map) in &first.maps {
        write_pgm(&cfg.out.join(format!("map_t{t:03}.pgm")), map)?;
    }

    let runs: Vec<Value> = (0..results.len())
        .map(|i| {
            let r = &results[i];
            json!({
                "seed": cfg.seed + i as u64,
                "mse": round6(r.mse),
                "max_error": round6(r.max_error),
                "home_vector": point_json(r.home_vector),
                "true_home_vector": point_json(Point2D::new(round6(r.true_home_vector.x), round6(r.true_home_vector.y))),
            })
        })
        .collect();
    Ok(json!({
        "experiment": cfg.experiment.name(),
        "seed": cfg.seed,
        "steps": cfg.steps,
        "arena": cfg.arena,
        "mse": round6(first.mse),
        "max_error": round6(first.max_error),
        "median_mse": round6(median(results.iter().map(|r| r.mse).collect())),
        "runs": runs,
    }))
}

fn scene(cfg: &RunConfig, jobs: usize) -> Result<Value, RunError> {
    use rand::SeedableRng;
    let params = cfg.scene();
    let reports = sweep(cfg, jobs, |seed| {
        let grid = shared_grid(cfg, seed)?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let encoder = SceneEncoder::new(&grid, &params, &mut rng)?;
        let items = crate::experiments::scene::random_scene(&params, &mut rng)?;
        let scene = encoder.encode_scene(&items)?;
        let results = items
            .iter()
            .map(|it| encoder.query(&scene, &SceneQuery::by_identity(&it.identity), &params))
            .collect::<Result<Vec<_>, _>>()?;
        let absent = match params.vocabulary.get(params.n_items) {
            Some(name) => Some(encoder.query(&scene, &SceneQuery::by_identity(name), &params)?),
            None => None,
        };
        let traced = if results.iter().any(|r| r.answer.identity == cfg.query) {
            None
        } else {
            Some(encoder.query(&scene, &SceneQuery::by_identity(&cfg.query), &params)?)
        };
        Ok((
            crate::experiments::SceneReport {
                items,
                results,
                absent,
            },
            traced,
        ))
    })?;

    let (first, traced) = &reports[0];
    let trace_source = first
        .results
        .iter()
        .find(|r| r.answer.identity == cfg.query)
        .or(traced.as_ref());
    if let Some(state) = trace_source.and_then(|r| r.resonator.as_ref()) {
        state.write_trace_csv(create(&cfg.out.join("trace.csv"))?)?;
    }

    let runs: Vec<Value> = reports
        .iter()
        .enumerate()
        .map(|(i, (rep, _))| {
            let objects: Vec<Value> = rep
                .items
                .iter()
                .zip(&rep.results)
                .map(|(item, r)| {
                    let st = r.resonator.as_ref();
                    json!({
                        "identity": item.identity,
                        "truth": [item.x, item.y, item.t],
                        "recovered": [r.answer.x, r.answer.y, r.answer.t],
                        "correct": *item == r.answer,
                        "confidence": round6(r.confidence),
                        "iterations": st.map_or(0, |s| s.iterations),
                        "restarts": st.map_or(0, |s| s.restarts),
                        "converged": st.is_some_and(|s| s.converged),
                    })
                })
                .collect();
            json!({
                "seed": cfg.seed + i as u64,
                "correct": rep.correct(),
                "all_correct": rep.all_correct(),
                "max_iterations": rep.max_iterations(),
                "objects": objects,
                "absent": rep.absent.as_ref().map(|a| json!({
                    "identity": a.query.identity,
                    "confidence": round6(a.confidence),
                    "low_confidence": a.low_confidence,
                })),
            })
        })
        .collect();
    let all = reports.iter().filter(|(r, _)| r.all_correct()).count();
    let objects: usize = reports.iter().map(|(r, _)| r.items.len()).sum();
    let correct: usize = reports.iter().map(|(r, _)| r.correct()).sum();
    Ok(json!({
        "experiment": cfg.experiment.name(),
        "seed": cfg.seed,
        "accuracy": round6(correct as f64 / objects as f64),
        "runs_all_correct": all,
        "run_count": reports.len(),
        "max_iterations": reports.iter().map(|(r, _)| r.max_iterations()).max().unwrap_or(0),
        "runs": runs,
    }))
}

fn family_tree(cfg: &RunConfig, jobs: usize) -> Result<Value, RunError> {
    let (a, b) = (FamilyTree::tree_a(), FamilyTree::tree_b());
    let runs = sweep(cfg, jobs, |seed| {
        let grid = shared_grid(cfg, seed)?;
        let symbols = TreeSymbols::random(&grid, &[&a, &b], seed)?;
        let probe = analogy(&a, &b, &cfg.probe, &symbols)?;
        let mut all = Vec::new();
        for name in a.names() {
            let r = analogy(&a, &b, name, &symbols)?;
            let expected = b
                .name_at(a.path_of(name).expect("name from tree"))
                .expect("same shape");
            all.push(json!({"probe": name, "answer": r.answer, "correct": r.answer == expected}));
        }
        Ok((probe, all))
    })?;
    let (first, _) = &runs[0];
    let correct: usize = runs
        .iter()
        .map(|(_, all)| all.iter().filter(|v| v["correct"] == json!(true)).count())
        .sum();
    let profile: BTreeMap<String, f64> = first
        .profile
        .iter()
        .map(|(k, s)| (k.clone(), round6(*s)))
        .collect();
    Ok(json!({
        "experiment": cfg.experiment.name(),
        "seed": cfg.seed,
        "probe": first.probe,
        "answer": first.answer,
        "similarity": round6(first.similarity),
        "profile": profile,
        "accuracy": round6(correct as f64 / (5 * runs.len()) as f64),
        "runs": runs.iter().enumerate().map(|(i, (_, all))| json!({"seed": cfg.seed + i as u64, "probes": all})).collect::<Vec<_>>(),
    }))
}

fn kernel(cfg: &RunConfig) -> Result<Value, RunError> {
    let grid = shared_grid(cfg, cfg.seed)?;
    let geom = ModuleGeometry::new(&grid);
    let neuron = Neuron::new(
        cfg.scale,
        cfg.orientation,
        cfg.neuron_i,
        cfg.neuron_j,
        cfg.neuron_k,
    );
    let size = cfg.field_size;
    let field_lattice = Lattice::new(Rect::arena(size), 1.0)?;
    let field = receptive_field(neuron, &field_lattice, &geom)?;
    write_pgm(&cfg.out.join("map_receptive_field.pgm"), &field)?;
    field.write_csv(create(&cfg.out.join("receptive_field.csv"))?)?;

    let r = cfg.kernel_radius as f64;
    let kernel_lattice = Lattice::new(Rect::centered(r), 1.0)?;
    let kernel = similarity_kernel(&geom, Point2D::default(), &kernel_lattice);
    write_pgm(&cfg.out.join("map_kernel.pgm"), &kernel)?;

    let basis = geom.lattice_vectors(cfg.scale, cfg.orientation);
    let far = kernel_lattice
        .points()
        .zip(kernel.values())
        .filter(|(p, _)| p.norm() > 4.0)
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(json!({
        "experiment": cfg.experiment.name(),
        "seed": cfg.seed,
        "scale": cfg.scale,
        "scale_px": round6(geom.scales()[cfg.scale]),
        "orientation": cfg.orientation,
        "orientation_rad": round6(geom.orientation(cfg.scale, cfg.orientation)),
        "lattice_spacing_px": round6(basis[0].norm()),
        "lattice_vectors": [point_json(Point2D::new(round6(basis[0].x), round6(basis[0].y))),
                            point_json(Point2D::new(round6(basis[1].x), round6(basis[1].y)))],
        "field_min": round6(field.min()),
        "field_max": round6(field.max()),
        "kernel_max_beyond_4px": round6(far),
    }))
}

fn rotation(cfg: &RunConfig) -> Result<Value, RunError> {
    let grid = shared_grid(cfg, cfg.seed)?;
    let geom = ModuleGeometry::new(&grid);
    let lattice = Lattice::new(Rect::centered(cfg.decode_extent), cfg.decode_step)?;
    let book = PositionCodebook::build(&geom, lattice)?;
    let p = Point2D::new(cfg.radius, 0.0).rotated(cfg.direction_deg.to_radians());
    let alpha = cfg.angle_deg.to_radians();
    let v = geom.encode(p);
    let rotated = rotate(&v, alpha)?;
    let expected = p.rotated(alpha);
    let (decoded, sim) = book.decode(&rotated)?;
    write_pgm(&cfg.out.join("map_before.pgm"), &book.similarity_map(&v)?)?;
    write_pgm(
        &cfg.out.join("map_after.pgm"),
        &book.similarity_map(&rotated)?,
    )?;
    let profile = angle_profile(&rotated, &v)?;
    write_profile_csv(&profile, create(&cfg.out.join("angle_profile.csv"))?)?;
    let angle = match decode_angle(&rotated, &v) {
        Ok(a) => Some(a),
        Err(VsaError::AngleUndecodable(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let angle_error = angle.map(|a| {
        let d = (a - alpha).rem_euclid(TAU);
        round6(d.min(TAU - d))
    });
    Ok(json!({
        "experiment": cfg.experiment.name(),
        "seed": cfg.seed,
        "point": point_json(Point2D::new(round6(p.x), round6(p.y))),
        "angle_rad": round6(alpha),
        "expected": point_json(Point2D::new(round6(expected.x), round6(expected.y))),
        "decoded": point_json(decoded),
        "decoded_similarity": round6(sim),
        "position_error": round6(decoded.distance(expected)),
        "decoded_angle_rad": angle.map(round6),
        "angle_error_rad": angle_error,
        "angle_undecodable": angle.is_none(),
    }))
}

/// Key names accepted in configuration files and `--set`.
pub fn config_keys() -> Vec<String> {
    match toml::Value::try_from(RunConfig::default()) {
        Ok(toml::Value::Table(t)) => t.keys().cloned().collect(),
        _ => Vec::new(),
    }
}

/// Parses `key=value`; the value is read as TOML and falls back to a
/// plain string.
pub fn parse_override(s: &str) -> Result<(String, toml::Value), RunError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| invalid(format!("expected key=value, got {s:?}")))?;
    let key = k.trim().to_string();
    let raw = v.trim();
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    Ok((key, value))
}

/// One-line summary of the headline metrics.
pub fn headline(metrics: &Value) -> String {
    let pick = [
        "mse",
        "median_mse",
        "accuracy",
        "answer",
        "lattice_spacing_px",
        "position_error",
        "decoded_angle_rad",
    ];
    pick.iter()
        .filter_map(|k| metrics.get(*k).map(|v| format!("{k}={v}")))
        .collect::<Vec<_>>()
        .join(" ")
}
