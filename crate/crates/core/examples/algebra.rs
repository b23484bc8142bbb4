//! Binding, unbinding, bundling and similarity on random symbols.

use gc_vsa::{bundle, GcTensor, GridConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gc_vsa::Result<()> {
    let config = GridConfig::default().shared()?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    println!(
        "dimension {} ({} modules of {}^3)",
        config.dim(),
        config.module_count(),
        config.n
    );

    let colour = GcTensor::random_symbol(&config, &mut rng);
    let red = GcTensor::random_symbol(&config, &mut rng);
    let shape = GcTensor::random_symbol(&config, &mut rng);
    let round = GcTensor::random_symbol(&config, &mut rng);

    let record = bundle([&colour.bind(&red)?, &shape.bind(&round)?], None)?;
    let what_colour = record.unbind(&colour)?;
    println!(
        "unbind(record, colour) vs red   {:+.3}",
        what_colour.cosine_similarity(&red)?
    );
    println!(
        "unbind(record, colour) vs round {:+.3}",
        what_colour.cosine_similarity(&round)?
    );

    let pair = red.bind(&round)?;
    println!(
        "exact inverse error {:.2e}",
        pair.unbind(&round)?.max_abs_diff(&red)
    );
    println!(
        "bound pair vs its factors {:+.3} {:+.3}",
        pair.cosine_similarity(&red)?,
        pair.cosine_similarity(&round)?
    );
    Ok(())
}
