//! Writes the spatial firing map of one neuron and the similarity kernel
//! as PGM images, and prints the lattice spacing of each scale.

use gc_vsa::spatial::{
    receptive_field, similarity_kernel, Lattice, ModuleGeometry, Neuron, Point2D, Rect,
};
use gc_vsa::GridConfig;

fn main() -> gc_vsa::Result<()> {
    let out = std::env::temp_dir().join("gcvsa-receptive-field");
    std::fs::create_dir_all(&out)?;
    let config = GridConfig::default().shared()?;
    let geometry = ModuleGeometry::new(&config);

    for s in 0..config.n_s {
        let [a, b] = geometry.lattice_vectors(s, 0);
        println!(
            "scale {s}: lattice spacing {:.3} px, {:.3} px",
            a.norm(),
            b.norm()
        );
    }

    let neuron = Neuron::new(config.n_s - 1, 0, 0, 0, 0);
    let field = receptive_field(neuron, &Lattice::new(Rect::arena(128), 1.0)?, &geometry)?;
    let path = out.join("receptive_field.pgm");
    field.write_pgm(std::fs::File::create(&path)?)?;
    println!(
        "firing range [{:.3}, {:.3}] written to {}",
        field.min(),
        field.max(),
        path.display()
    );

    let kernel = similarity_kernel(
        &geometry,
        Point2D::default(),
        &Lattice::new(Rect::centered(16.0), 0.5)?,
    );
    let path = out.join("kernel.pgm");
    kernel.write_pgm(std::fs::File::create(&path)?)?;
    println!("kernel written to {}", path.display());
    Ok(())
}
