//! Encodes a scene of objects at positions and times, then asks where and
//! when each object is, factorizing the unknowns with the resonator.

use gc_vsa::experiments::scene::random_scene;
use gc_vsa::experiments::{SceneEncoder, SceneParams, SceneQuery};
use gc_vsa::GridConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gc_vsa::Result<()> {
    let config = GridConfig::default().shared()?;
    let params = SceneParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let encoder = SceneEncoder::new(&config, &params, &mut rng)?;
    let items = random_scene(&params, &mut rng)?;
    let scene = encoder.encode_scene(&items)?;

    for item in &items {
        let r = encoder.query(&scene, &SceneQuery::by_identity(&item.identity), &params)?;
        let iters = r.resonator.as_ref().map_or(0, |s| s.iterations);
        println!(
            "{:<7} true ({:2}, {:2}, t={})  answer ({:2}, {:2}, t={})  confidence {:.3}  iterations {iters}",
            item.identity, item.x, item.y, item.t, r.answer.x, r.answer.y, r.answer.t, r.confidence
        );
    }

    let first = &items[0];
    let r = encoder.query(
        &scene,
        &SceneQuery::by_position(first.x, first.y, first.t),
        &params,
    )?;
    println!(
        "what is at ({}, {}, t={})? {} ({:.3})",
        first.x, first.y, first.t, r.answer.identity, r.confidence
    );

    let absent = &params.vocabulary[params.n_items];
    let r = encoder.query(&scene, &SceneQuery::by_identity(absent), &params)?;
    println!(
        "{absent} (not in the scene): confidence {:.3}, flagged {}",
        r.confidence, r.low_confidence
    );
    Ok(())
}
