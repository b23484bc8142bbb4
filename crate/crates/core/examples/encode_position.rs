//! Encodes 2D points, shifts them by binding and decodes them with a
//! lattice codebook.

use gc_vsa::spatial::{Lattice, ModuleGeometry, Point2D, PositionCodebook, Rect};
use gc_vsa::GridConfig;

fn main() -> gc_vsa::Result<()> {
    let config = GridConfig::default().shared()?;
    let geometry = ModuleGeometry::new(&config);
    println!("scales {:?}", geometry.scales());

    let book = PositionCodebook::build(&geometry, Lattice::new(Rect::arena(64), 1.0)?)?;
    for p in [
        Point2D::new(3.0, 5.0),
        Point2D::new(31.4, 12.6),
        Point2D::new(60.0, 60.0),
    ] {
        let (hat, sim) = book.decode(&geometry.encode(p))?;
        println!(
            "({:5.1}, {:5.1}) -> ({:4.1}, {:4.1})  similarity {sim:.3}",
            p.x, p.y, hat.x, hat.y
        );
    }

    let start = Point2D::new(10.0, 10.0);
    let shift = Point2D::new(7.0, -3.0);
    let moved = geometry.encode(start).bind(&geometry.encode(shift))?;
    let (hat, _) = book.decode(&moved)?;
    println!(
        "encode(start) bound with encode(shift) decodes to ({}, {})",
        hat.x, hat.y
    );

    let g = geometry.generators();
    println!(
        "generator powers vs direct encoding, max deviation {:.2e}",
        g.encode(Point2D::new(2.5, -1.5))
            .max_abs_diff(&geometry.encode(Point2D::new(2.5, -1.5)))
    );
    Ok(())
}
