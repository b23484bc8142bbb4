//! Resonator network: factorizes a bound product into one entry per
//! codebook by alternating unbinding and codebook projection.
//!
//! Each factor update unbinds the composite by the current estimates of
//! all other factors, reads the residual out against that factor's
//! codebook, and rebuilds the estimate as a similarity-weighted
//! superposition. Factors are updated one after another in codebook
//! order, always using the freshest estimates.
//!
//! With [`Projection::Rectified`] (the default) negative similarities are
//! dropped before superposing and the result is rescaled to the norm of a
//! pure vector. Once the cleaned keys stop changing, a short coordinate
//! sweep picks each factor's best entry with the others fixed. If the
//! resulting product explains the composite poorly the search is restarted
//! from estimates restricted to contiguous windows of the two largest
//! codebooks, within a shared iteration budget.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::codebook::{argmax, Codebook};
use crate::config::same_config;
use crate::error::{Result, VsaError};
use crate::tensor::{phases_from_spectrum, GcTensor};

/// How a superposition becomes the next estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Projection {
    /// Negative weights clipped to zero, result L2-normalised.
    #[default]
    Rectified,
    /// Raw similarity weights; every module is snapped back to a pure
    /// vector with the same phases.
    Pure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonatorOptions {
    /// Iteration budget shared by all restarts.
    pub max_iter: usize,
    /// Relative estimate change below which an iteration counts as a fixed
    /// point even if keys are still settling.
    pub tol: f64,
    /// Consecutive iterations with unchanged keys that end a run.
    pub stable_iters: usize,
    pub projection: Projection,
    /// Run the coordinate sweep after each run.
    pub refine: bool,
    /// Number of windows per restarted codebook; 0 or 1 disables restarts.
    pub restart_windows: usize,
    /// Cosine between composite and reconstructed product required to
    /// accept a solution.
    pub min_confidence: f64,
}

impl Default for ResonatorOptions {
    fn default() -> Self {
        Self {
            max_iter: 100,
            tol: 1e-4,
            stable_iters: 3,
            projection: Projection::Rectified,
            refine: true,
            restart_windows: 4,
            min_confidence: 0.2,
        }
    }
}

impl ResonatorOptions {
    /// Plain resonator: pure projection, no sweep, no restarts.
    pub fn plain() -> Self {
        Self {
            projection: Projection::Pure,
            refine: false,
            restart_windows: 0,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct ResonatorState {
    /// Final estimate per factor.
    pub estimates: Vec<GcTensor>,
    /// Cleaned-up row index per factor.
    pub keys: Vec<usize>,
    /// `trace[iteration][factor]` is the codebook similarity profile of
    /// that factor's estimate after the iteration.
    pub trace: Vec<Vec<Vec<f64>>>,
    pub iterations: usize,
    pub converged: bool,
    /// Cosine between the composite and the bound product of the cleaned
    /// entries.
    pub confidence: f64,
    /// Runs started after the first one.
    pub restarts: usize,
}

impl ResonatorState {
    /// `iteration,factor,index,similarity` rows, one per trace value.
    pub fn write_trace_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| VsaError::Io(e.into());
        wr.write_record(["iteration", "factor", "index", "similarity"])
            .map_err(io)?;
        for (it, factors) in self.trace.iter().enumerate() {
            for (f, sims) in factors.iter().enumerate() {
                for (i, s) in sims.iter().enumerate() {
                    wr.write_record([
                        (it + 1).to_string(),
                        f.to_string(),
                        i.to_string(),
                        s.to_string(),
                    ])
                    .map_err(io)?;
                }
            }
        }
        wr.flush()?;
        Ok(())
    }
}

/// Rescales every module's fundamental bins to unit amplitude, keeping
/// phases. The result is a pure vector.
pub fn normalize_to_pure(v: &GcTensor) -> GcTensor {
    phases_from_spectrum(v.config(), &v.spectrum()).materialize()
}

fn bind_all<'a>(
    mut items: impl Iterator<Item = &'a GcTensor>,
    identity: &GcTensor,
) -> Result<GcTensor> {
    let Some(first) = items.next() else {
        return Ok(identity.clone());
    };
    let mut acc = first.clone();
    for v in items {
        acc = acc.bind(v)?;
    }
    Ok(acc)
}

struct Resonator<'a> {
    composite: &'a GcTensor,
    codebooks: &'a [Codebook],
    opts: &'a ResonatorOptions,
    identity: GcTensor,
    pure_norm: f64,
}

struct Run {
    estimates: Vec<GcTensor>,
    keys: Vec<usize>,
    trace: Vec<Vec<Vec<f64>>>,
    stable: bool,
}

impl<'a> Resonator<'a> {
    fn project(&self, v: GcTensor) -> GcTensor {
        match self.opts.projection {
            Projection::Pure => normalize_to_pure(&v),
            Projection::Rectified => {
                let n = v.norm();
                if n == 0.0 {
                    v
                } else {
                    v.scaled(self.pure_norm / n)
                }
            }
        }
    }

    fn window(&self, f: usize, range: std::ops::Range<usize>) -> Result<GcTensor> {
        let cb = &self.codebooks[f];
        let w: Vec<f64> = (0..cb.len())
            .map(|i| if range.contains(&i) { 1.0 } else { 0.0 })
            .collect();
        Ok(self.project(cb.superpose(&w)?))
    }

    fn others(&self, est: &[GcTensor], f: usize) -> Result<GcTensor> {
        bind_all(
            est.iter()
                .enumerate()
                .filter(|(j, _)| *j != f)
                .map(|(_, v)| v),
            &self.identity,
        )
    }

    fn run(&self, init: Vec<GcTensor>, budget: usize) -> Result<Run> {
        let mut est = init;
        let mut trace = Vec::new();
        let mut keys: Vec<usize> = Vec::new();
        let mut same = 0usize;
        let mut stable = false;
        for _ in 0..budget {
            let mut max_change = 0.0f64;
            for f in 0..self.codebooks.len() {
                let cb = &self.codebooks[f];
                let residual = self.composite.unbind(&self.others(&est, f)?)?;
                let sims = match cb.similarities(&residual) {
                    Ok(s) => s,
                    Err(VsaError::ZeroNorm) => vec![1.0; cb.len()],
                    Err(e) => return Err(e),
                };
                let weights: Vec<f64> = match self.opts.projection {
                    Projection::Pure => sims,
                    Projection::Rectified => {
                        if sims.iter().any(|&s| s > 0.0) {
                            sims.iter().map(|&s| s.max(0.0)).collect()
                        } else {
                            vec![1.0; sims.len()]
                        }
                    }
                };
                let next = self.project(cb.superpose(&weights)?);
                let old_norm = est[f].norm().max(1e-300);
                let diff = next.add(&est[f].negated())?.norm() / old_norm;
                max_change = max_change.max(diff);
                est[f] = next;
            }
            let profiles: Vec<Vec<f64>> = est
                .iter()
                .zip(self.codebooks)
                .map(|(e, cb)| cb.similarities(e).unwrap_or_else(|_| vec![0.0; cb.len()]))
                .collect();
            let new_keys: Vec<usize> = profiles.iter().map(|p| argmax(p).0).collect();
            trace.push(profiles);
            if new_keys == keys {
                same += 1;
            } else {
                same = 1;
                keys = new_keys;
            }
            if same >= self.opts.stable_iters || max_change < self.opts.tol {
                stable = true;
                break;
            }
        }
        Ok(Run {
            estimates: est,
            keys,
            trace,
            stable,
        })
    }

    /// Coordinate ascent over cleaned entries.
    fn refine(&self, keys: &mut [usize]) -> Result<()> {
        for _ in 0..10 {
            let before = keys.to_vec();
            for f in 0..keys.len() {
                let entries: Vec<GcTensor> = keys
                    .iter()
                    .enumerate()
                    .map(|(j, &k)| self.codebooks[j].entry(k))
                    .collect();
                let residual = self.composite.unbind(&self.others(&entries, f)?)?;
                if let Ok((k, _)) = self.codebooks[f].cleanup_index(&residual) {
                    keys[f] = k;
                }
            }
            if keys == before.as_slice() {
                break;
            }
        }
        Ok(())
    }

    fn confidence(&self, keys: &[usize]) -> Result<f64> {
        let entries: Vec<GcTensor> = keys
            .iter()
            .enumerate()
            .map(|(j, &k)| self.codebooks[j].entry(k))
            .collect();
        let product = bind_all(entries.iter(), &self.identity)?;
        match self.composite.cosine_similarity(&product) {
            Err(VsaError::ZeroNorm) => Ok(0.0),
            other => other,
        }
    }

    fn initial_states(&self) -> Result<Vec<Vec<GcTensor>>> {
        let uniform: Vec<GcTensor> = (0..self.codebooks.len())
            .map(|f| self.window(f, 0..self.codebooks[f].len()))
            .collect::<Result<_>>()?;
        let mut inits = vec![uniform.clone()];
        let parts = self.opts.restart_windows;
        if parts < 2 {
            return Ok(inits);
        }
        // two largest codebooks; earlier index wins ties
        let mut order: Vec<usize> = (0..self.codebooks.len()).collect();
        order.sort_by_key(|&f| std::cmp::Reverse(self.codebooks[f].len()));
        let chosen = &order[..2];
        let windows = |f: usize| -> Result<Vec<GcTensor>> {
            let len = self.codebooks[f].len();
            let p = parts.min(len);
            (0..p)
                .map(|i| self.window(f, i * len / p..(i + 1) * len / p))
                .collect()
        };
        let (a, b) = (chosen[0].min(chosen[1]), chosen[0].max(chosen[1]));
        let wa = windows(a)?;
        let wb = windows(b)?;
        for va in &wa {
            for vb in &wb {
                let mut init = uniform.clone();
                init[a] = va.clone();
                init[b] = vb.clone();
                inits.push(init);
            }
        }
        Ok(inits)
    }
}

/// Factorizes `composite` into one entry per codebook.
pub fn factorize(
    composite: &GcTensor,
    codebooks: &[Codebook],
    opts: &ResonatorOptions,
) -> Result<ResonatorState> {
    if codebooks.len() < 2 {
        return Err(VsaError::InvalidArgument(format!(
            "factorization needs at least two codebooks, got {}",
            codebooks.len()
        )));
    }
    for cb in codebooks {
        if cb.is_empty() {
            return Err(VsaError::Empty("factor codebook has no entries"));
        }
        if !same_config(cb.config(), composite.config()) {
            return Err(VsaError::ConfigMismatch);
        }
    }
    if composite.is_zero() {
        return Err(VsaError::ZeroNorm);
    }
    if opts.max_iter == 0 {
        return Err(VsaError::InvalidArgument(
            "max_iter must be at least 1".into(),
        ));
    }
    let identity = GcTensor::identity(composite.config());
    let res = Resonator {
        composite,
        codebooks,
        opts,
        pure_norm: identity.norm(),
        identity,
    };

    let mut trace = Vec::new();
    let mut used = 0usize;
    let mut runs = 0usize;
    let mut best: Option<(f64, Vec<usize>, Vec<GcTensor>, bool)> = None;
    for init in res.initial_states()? {
        if used >= opts.max_iter {
            break;
        }
        let run = res.run(init, opts.max_iter - used)?;
        runs += 1;
        used += run.trace.len();
        trace.extend(run.trace);
        let mut keys = run.keys;
        if opts.refine {
            res.refine(&mut keys)?;
        }
        let conf = res.confidence(&keys)?;
        let better = best.as_ref().is_none_or(|b| conf > b.0);
        if better {
            best = Some((conf, keys, run.estimates, run.stable));
        }
        if conf > opts.min_confidence && run.stable {
            break;
        }
    }
    let (confidence, keys, estimates, stable) = best.expect("at least one run");
    Ok(ResonatorState {
        estimates,
        keys,
        iterations: trace.len(),
        trace,
        converged: stable && confidence >= opts.min_confidence,
        confidence,
        restarts: runs.saturating_sub(1),
    })
}
