//! Builds a symbolic codebook, cleans up a noisy vector, and round-trips
//! the codebook through its binary file format.

use gc_vsa::codebook::{Codebook, Key};
use gc_vsa::{bundle, GcTensor, GridConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gc_vsa::Result<()> {
    let config = GridConfig::default().shared()?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let names = ["apple", "banana", "cherry", "grape"];
    let book = Codebook::from_entries(
        &config,
        names
            .iter()
            .map(|n| (Key::symbol(*n), GcTensor::random_symbol(&config, &mut rng)))
            .collect::<Vec<_>>(),
    )?;

    let noisy = bundle(
        [&book.entry(2), &GcTensor::random_symbol(&config, &mut rng)],
        None,
    )?;
    for (key, s) in book.readout(&noisy)? {
        println!("{:<8} {s:+.3}", key.to_string());
    }
    let (key, s) = book.cleanup(&noisy)?;
    println!("cleanup -> {key} ({s:.3})");

    let path = std::env::temp_dir().join("gcvsa-example.codebook");
    book.save(&path)?;
    let back = Codebook::load(&path)?;
    let dev = (0..book.len())
        .map(|i| back.entry(i).max_abs_diff(&book.entry(i)))
        .fold(0.0, f64::max);
    println!(
        "reloaded {} entries from {}, max deviation {dev:.1e}",
        back.len(),
        path.display()
    );
    Ok(())
}
