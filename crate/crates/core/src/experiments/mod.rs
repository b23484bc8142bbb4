//! Seeded end-to-end experiments: path integration, scene queries and
//! family-tree analogies.

pub mod family_tree;
pub mod path_integration;
pub mod scene;
pub mod trajectory;

pub use family_tree::{
    analogy, encode_tree, run_family_tree_analogy, AnalogyResult, Direction, FamilyTree,
    TreeSymbols,
};
pub use path_integration::{
    run_path_integration, PathIntegrationParams, PathIntegrationResult, PathIntegrator,
};
pub use scene::{
    run_scene_experiment, SceneEncoder, SceneItem, SceneParams, SceneQuery, SceneReport,
};
pub use trajectory::{generate_trajectory, Trajectory, TrajectoryParams};
