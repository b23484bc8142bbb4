//! Spatio-temporal scenes: a bundle of `identity (*) X^x (*) Y^y (*) T^t`
//! terms queried by unbinding known features.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codebook::{Codebook, Key};
use crate::config::GridConfig;
use crate::error::{Result, VsaError};
use crate::resonator::{factorize, ResonatorOptions, ResonatorState};
use crate::spatial::ModuleGeometry;
use crate::tensor::{bundle, GcTensor, PhaseTensor};

pub const DEFAULT_VOCABULARY: [&str; 8] = [
    "apple", "banana", "grape", "cherry", "lemon", "orange", "pear", "plum",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SceneItem {
    pub identity: String,
    pub x: i64,
    pub y: i64,
    pub t: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneParams {
    /// Objects in the scene: the first `n_items` names of the vocabulary.
    pub n_items: usize,
    pub extent_x: usize,
    pub extent_y: usize,
    pub extent_t: usize,
    /// Every identity the identity codebook knows, present or not.
    pub vocabulary: Vec<String>,
    /// Below this similarity a query answer is flagged as unreliable.
    pub low_confidence: f64,
    pub resonator: ResonatorOptions,
}

impl Default for SceneParams {
    fn default() -> Self {
        Self {
            n_items: 5,
            extent_x: 64,
            extent_y: 64,
            extent_t: 4,
            vocabulary: DEFAULT_VOCABULARY.iter().map(|s| s.to_string()).collect(),
            low_confidence: 0.2,
            resonator: ResonatorOptions {
                max_iter: 50,
                ..ResonatorOptions::default()
            },
        }
    }
}

impl SceneParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_items == 0 || self.n_items > self.vocabulary.len() {
            return Err(VsaError::InvalidArgument(format!(
                "n_items must be between 1 and the vocabulary size {}",
                self.vocabulary.len()
            )));
        }
        if self.extent_x == 0 || self.extent_y == 0 || self.extent_t == 0 {
            return Err(VsaError::InvalidArgument(
                "codebook extents must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Features of a scene term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Feature {
    Identity,
    X,
    Y,
    T,
}

impl Feature {
    pub const ALL: [Feature; 4] = [Feature::Identity, Feature::X, Feature::Y, Feature::T];

    pub fn name(self) -> &'static str {
        match self {
            Feature::Identity => "identity",
            Feature::X => "x",
            Feature::Y => "y",
            Feature::T => "t",
        }
    }
}

/// Known features of a query; `None` marks an unknown.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SceneQuery {
    pub identity: Option<String>,
    pub x: Option<i64>,
    pub y: Option<i64>,
    pub t: Option<i64>,
}

impl SceneQuery {
    pub fn by_identity(name: &str) -> Self {
        Self {
            identity: Some(name.to_string()),
            ..Self::default()
        }
    }

    pub fn by_position(x: i64, y: i64, t: i64) -> Self {
        Self {
            identity: None,
            x: Some(x),
            y: Some(y),
            t: Some(t),
        }
    }

    fn key(&self, f: Feature) -> Option<Key> {
        match f {
            Feature::Identity => self.identity.as_deref().map(Key::symbol),
            Feature::X => self.x.map(Key::Index),
            Feature::Y => self.y.map(Key::Index),
            Feature::T => self.t.map(Key::Index),
        }
    }
}

#[derive(Debug, Clone)]
pub struct QueryResult {
    pub query: SceneQuery,
    /// Every feature, either the cue or the recovered value.
    pub answer: SceneItem,
    pub confidence: f64,
    pub low_confidence: bool,
    /// Present when two or more features were unknown.
    pub resonator: Option<ResonatorState>,
    /// Unknown features in the resonator's factor order.
    pub unknowns: Vec<Feature>,
}

/// Codebooks and generators for one scene vocabulary.
#[derive(Debug, Clone)]
pub struct SceneEncoder {
    config: Arc<GridConfig>,
    codebooks: [Codebook; 4],
}

impl SceneEncoder {
    /// `X` and `Y` are the spatial generators of the config's geometry;
    /// the time generator and identity symbols are drawn from `rng`.
    pub fn new<R: Rng + ?Sized>(
        config: &Arc<GridConfig>,
        params: &SceneParams,
        rng: &mut R,
    ) -> Result<Self> {
        params.validate()?;
        let gens = ModuleGeometry::new(config).generators();
        let gt = PhaseTensor::random(config, rng);
        let mut identities = Codebook::new(config);
        for name in &params.vocabulary {
            identities.insert(
                Key::symbol(name.as_str()),
                &GcTensor::random_symbol(config, rng),
            )?;
        }
        let fpe = |g: &PhaseTensor, extent: usize| {
            Codebook::build(config, (0..extent as i64).map(Key::Index).collect(), |k| {
                let Key::Index(i) = k else { unreachable!() };
                g.fractional_power(*i as f64).materialize()
            })
        };
        let xs = fpe(&gens.gx, params.extent_x)?;
        let ys = fpe(&gens.gy, params.extent_y)?;
        let ts = fpe(&gt, params.extent_t)?;
        Ok(Self {
            config: Arc::clone(config),
            codebooks: [identities, xs, ys, ts],
        })
    }

    pub fn codebook(&self, f: Feature) -> &Codebook {
        &self.codebooks[f as usize]
    }

    fn vector(&self, f: Feature, key: &Key) -> Result<GcTensor> {
        self.codebook(f)
            .get(key)
            .ok_or_else(|| VsaError::UnknownKey(format!("{} {key}", f.name())))
    }

    pub fn item_vector(&self, item: &SceneItem) -> Result<GcTensor> {
        let id = self.vector(Feature::Identity, &Key::symbol(item.identity.as_str()))?;
        let x = self.vector(Feature::X, &Key::Index(item.x))?;
        let y = self.vector(Feature::Y, &Key::Index(item.y))?;
        let t = self.vector(Feature::T, &Key::Index(item.t))?;
        id.bind(&x)?.bind(&y)?.bind(&t)
    }

    pub fn encode_scene(&self, items: &[SceneItem]) -> Result<GcTensor> {
        if items.is_empty() {
            return Err(VsaError::Empty("scene has no items"));
        }
        let terms = items
            .iter()
            .map(|i| self.item_vector(i))
            .collect::<Result<Vec<_>>>()?;
        bundle(&terms, None)
    }

    /// Unbinds the known features, then recovers the unknown ones by direct
    /// cleanup (one unknown) or the resonator (several).
    pub fn query(
        &self,
        scene: &GcTensor,
        query: &SceneQuery,
        params: &SceneParams,
    ) -> Result<QueryResult> {
        let mut residual = scene.clone();
        let mut unknowns = Vec::new();
        let mut keys: [Option<Key>; 4] = Default::default();
        for f in Feature::ALL {
            match query.key(f) {
                Some(k) => {
                    residual = residual.unbind(&self.vector(f, &k)?)?;
                    keys[f as usize] = Some(k);
                }
                None => unknowns.push(f),
            }
        }
        let mut resonator = None;
        let confidence = match unknowns.len() {
            0 => scene.cosine_similarity(&self.item_vector(&answer_from(&keys)?)?)?,
            1 => {
                let f = unknowns[0];
                let (k, s) = self.codebook(f).cleanup(&residual)?;
                keys[f as usize] = Some(k);
                s
            }
            _ => {
                let cbs: Vec<Codebook> =
                    unknowns.iter().map(|&f| self.codebook(f).clone()).collect();
                let state = factorize(&residual, &cbs, &params.resonator)?;
                for (&f, &k) in unknowns.iter().zip(&state.keys) {
                    keys[f as usize] = Some(self.codebook(f).key(k).clone());
                }
                let c = state.confidence;
                resonator = Some(state);
                c
            }
        };
        Ok(QueryResult {
            query: query.clone(),
            answer: answer_from(&keys)?,
            confidence,
            low_confidence: confidence < params.low_confidence,
            resonator,
            unknowns,
        })
    }

    pub fn config(&self) -> &Arc<GridConfig> {
        &self.config
    }
}

fn answer_from(keys: &[Option<Key>; 4]) -> Result<SceneItem> {
    let int = |k: &Option<Key>| match k {
        Some(Key::Index(i)) => Ok(*i),
        _ => Err(VsaError::InvalidArgument("expected an index key".into())),
    };
    let identity = match &keys[0] {
        Some(Key::Symbol(s)) => s.clone(),
        _ => return Err(VsaError::InvalidArgument("expected a symbol key".into())),
    };
    Ok(SceneItem {
        identity,
        x: int(&keys[1])?,
        y: int(&keys[2])?,
        t: int(&keys[3])?,
    })
}

/// The first `n_items` vocabulary names at uniform random positions and
/// times.
pub fn random_scene<R: Rng + ?Sized>(params: &SceneParams, rng: &mut R) -> Result<Vec<SceneItem>> {
    params.validate()?;
    Ok(params.vocabulary[..params.n_items]
        .iter()
        .map(|name| SceneItem {
            identity: name.clone(),
            x: rng.random_range(0..params.extent_x as i64),
            y: rng.random_range(0..params.extent_y as i64),
            t: rng.random_range(0..params.extent_t as i64),
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct SceneReport {
    pub items: Vec<SceneItem>,
    /// One identity-cued query per item, in item order.
    pub results: Vec<QueryResult>,
    /// Identity-cued query for a vocabulary name absent from the scene.
    pub absent: Option<QueryResult>,
}

impl SceneReport {
    pub fn correct(&self) -> usize {
        self.items
            .iter()
            .zip(&self.results)
            .filter(|(item, r)| **item == r.answer)
            .count()
    }

    pub fn all_correct(&self) -> bool {
        self.correct() == self.items.len()
    }

    pub fn max_iterations(&self) -> usize {
        self.results
            .iter()
            .filter_map(|r| r.resonator.as_ref().map(|s| s.iterations))
            .max()
            .unwrap_or(0)
    }
}

/// Builds a random scene from `seed` and queries every object by identity.
pub fn run_scene_experiment(
    config: &Arc<GridConfig>,
    params: &SceneParams,
    seed: u64,
) -> Result<SceneReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let encoder = SceneEncoder::new(config, params, &mut rng)?;
    let items = random_scene(params, &mut rng)?;
    let scene = encoder.encode_scene(&items)?;
    let results = items
        .iter()
        .map(|item| encoder.query(&scene, &SceneQuery::by_identity(&item.identity), params))
        .collect::<Result<Vec<_>>>()?;
    let absent = match params.vocabulary.get(params.n_items) {
        Some(name) => Some(encoder.query(&scene, &SceneQuery::by_identity(name), params)?),
        None => None,
    };
    Ok(SceneReport {
        items,
        results,
        absent,
    })
}
