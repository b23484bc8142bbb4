//! Factorizes a product of three codebook entries with the resonator and
//! compares the default and plain update rules.

use gc_vsa::codebook::{Codebook, Key};
use gc_vsa::resonator::{factorize, ResonatorOptions};
use gc_vsa::{GridConfig, PhaseTensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> gc_vsa::Result<()> {
    let config = GridConfig::default().shared()?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let books = [16usize, 16, 8]
        .iter()
        .map(|&len| {
            let g = PhaseTensor::random(&config, &mut rng);
            Codebook::from_entries(
                &config,
                (0..len).map(|i| {
                    (
                        Key::Index(i as i64),
                        g.fractional_power(i as f64).materialize(),
                    )
                }),
            )
        })
        .collect::<gc_vsa::Result<Vec<_>>>()?;

    let truth: Vec<usize> = books.iter().map(|b| rng.random_range(0..b.len())).collect();
    let composite = books[0]
        .entry(truth[0])
        .bind(&books[1].entry(truth[1]))?
        .bind(&books[2].entry(truth[2]))?;
    println!("true keys {truth:?}");

    for (label, opts) in [
        ("default", ResonatorOptions::default()),
        ("plain", ResonatorOptions::plain()),
    ] {
        let st = factorize(&composite, &books, &opts)?;
        println!(
            "{label:<8} keys {:?}  iterations {}  restarts {}  confidence {:.3}  converged {}",
            st.keys, st.iterations, st.restarts, st.confidence, st.converged
        );
    }
    Ok(())
}
