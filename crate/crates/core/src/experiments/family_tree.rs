//! Binary family trees as hypervectors, and analogies between two trees.
//!
//! A node at path `d_1 d_2 ... d_k` (each `L` or `R`) contributes
//! `name (*) D_1 (*) P(D_2) (*) P^2(D_3) ...`, where `P` is a one-step
//! permutation of the orientation axis. Without the permutation the
//! address would forget the order of turns, since binding commutes.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codebook::{Codebook, Key};
use crate::config::GridConfig;
use crate::error::{Result, VsaError};
use crate::rotation::permute_orientation;
use crate::tensor::{bundle, GcTensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    L,
    R,
}

/// Names keyed by their path from the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTree {
    nodes: BTreeMap<Vec<Direction>, String>,
}

impl FamilyTree {
    /// Checks that the paths are prefix-closed and names are unique.
    pub fn new(nodes: BTreeMap<Vec<Direction>, String>) -> Result<Self> {
        if !nodes.contains_key(&Vec::new()) {
            return Err(VsaError::InvalidArgument("tree has no root".into()));
        }
        for path in nodes.keys() {
            if !path.is_empty() && !nodes.contains_key(&path[..path.len() - 1]) {
                return Err(VsaError::InvalidArgument(format!(
                    "node {path:?} has no parent"
                )));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for name in nodes.values() {
            if !seen.insert(name) {
                return Err(VsaError::DuplicateKey(name.clone()));
            }
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &BTreeMap<Vec<Direction>, String> {
        &self.nodes
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.nodes.values().map(String::as_str)
    }

    pub fn path_of(&self, name: &str) -> Option<&[Direction]> {
        self.nodes
            .iter()
            .find(|(_, n)| *n == name)
            .map(|(p, _)| p.as_slice())
    }

    pub fn name_at(&self, path: &[Direction]) -> Option<&str> {
        self.nodes.get(path).map(String::as_str)
    }

    fn from_list(list: [(&[Direction], &str); 5]) -> Self {
        Self::new(
            list.iter()
                .map(|(p, n)| (p.to_vec(), n.to_string()))
                .collect(),
        )
        .expect("well-formed")
    }

    /// Alice with children Bob (L) and Charles (R); Bob's children are
    /// Dora (L) and Emil (R).
    pub fn tree_a() -> Self {
        use Direction::*;
        Self::from_list([
            (&[], "Alice"),
            (&[L], "Bob"),
            (&[R], "Charles"),
            (&[L, L], "Dora"),
            (&[L, R], "Emil"),
        ])
    }

    /// Same shape as [`FamilyTree::tree_a`]: Fred, George, Harry, Igor, James.
    pub fn tree_b() -> Self {
        use Direction::*;
        Self::from_list([
            (&[], "Fred"),
            (&[L], "George"),
            (&[R], "Harry"),
            (&[L, L], "Igor"),
            (&[L, R], "James"),
        ])
    }
}

/// Random direction vectors and name symbols.
#[derive(Debug, Clone)]
pub struct TreeSymbols {
    pub left: GcTensor,
    pub right: GcTensor,
    pub names: Codebook,
}

impl TreeSymbols {
    /// Draws `L`, `R` and one symbol per distinct name of `trees`.
    pub fn random(config: &Arc<GridConfig>, trees: &[&FamilyTree], seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let left = GcTensor::random_symbol(config, &mut rng);
        let right = GcTensor::random_symbol(config, &mut rng);
        let mut names = Codebook::new(config);
        for tree in trees {
            for name in tree.names() {
                let key = Key::symbol(name);
                if names.index_of(&key).is_none() {
                    names.insert(key, &GcTensor::random_symbol(config, &mut rng))?;
                }
            }
        }
        Ok(Self { left, right, names })
    }

    pub fn name(&self, name: &str) -> Result<GcTensor> {
        self.names
            .get(&Key::symbol(name))
            .ok_or_else(|| VsaError::UnknownKey(name.to_string()))
    }

    /// `D_1 (*) P(D_2) (*) ...`; the identity for the root.
    pub fn address(&self, path: &[Direction]) -> Result<GcTensor> {
        let mut acc = GcTensor::identity(self.names.config());
        for (depth, d) in path.iter().enumerate() {
            let dir = match d {
                Direction::L => &self.left,
                Direction::R => &self.right,
            };
            acc = acc.bind(&permute_orientation(dir, depth as i64))?;
        }
        Ok(acc)
    }

    /// Sub-codebook of the names in `tree`, in tree order.
    pub fn names_of(&self, tree: &FamilyTree) -> Result<Codebook> {
        let entries = tree
            .names()
            .map(|n| Ok((Key::symbol(n), self.name(n)?)))
            .collect::<Result<Vec<_>>>()?;
        Codebook::from_entries(self.names.config(), entries)
    }
}

pub fn encode_tree(tree: &FamilyTree, symbols: &TreeSymbols) -> Result<GcTensor> {
    let terms = tree
        .nodes()
        .iter()
        .map(|(path, name)| symbols.name(name)?.bind(&symbols.address(path)?))
        .collect::<Result<Vec<_>>>()?;
    bundle(&terms, None)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalogyResult {
    pub probe: String,
    pub answer: String,
    pub similarity: f64,
    /// Similarity to every name of the target tree, in tree order.
    pub profile: Vec<(String, f64)>,
}

/// Maps `probe` from `tree_a` into `tree_b` through
/// `M = unbind(F_B, F_A)`.
pub fn analogy(
    tree_a: &FamilyTree,
    tree_b: &FamilyTree,
    probe: &str,
    symbols: &TreeSymbols,
) -> Result<AnalogyResult> {
    if tree_a.path_of(probe).is_none() {
        return Err(VsaError::UnknownKey(probe.to_string()));
    }
    let fa = encode_tree(tree_a, symbols)?;
    let fb = encode_tree(tree_b, symbols)?;
    let mapping = fb.unbind(&fa)?;
    let target = symbols.name(probe)?.bind(&mapping)?;
    let names = symbols.names_of(tree_b)?;
    let profile: Vec<(String, f64)> = names
        .readout(&target)?
        .into_iter()
        .map(|(k, s)| (k.to_string(), s))
        .collect();
    let (key, similarity) = names.cleanup(&target)?;
    Ok(AnalogyResult {
        probe: probe.to_string(),
        answer: key.to_string(),
        similarity,
        profile,
    })
}

/// Draws symbols from `seed` and answers `probe`.
pub fn run_family_tree_analogy(
    config: &Arc<GridConfig>,
    tree_a: &FamilyTree,
    tree_b: &FamilyTree,
    probe: &str,
    seed: u64,
) -> Result<AnalogyResult> {
    let symbols = TreeSymbols::random(config, &[tree_a, tree_b], seed)?;
    analogy(tree_a, tree_b, probe, &symbols)
}
