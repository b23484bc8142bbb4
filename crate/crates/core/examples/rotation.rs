//! Rotates an encoded position about the origin and reads the angle back.

use gc_vsa::rotation::{angle_profile, decode_angle, profile_ratio, rotate};
use gc_vsa::spatial::{Lattice, ModuleGeometry, Point2D, PositionCodebook, Rect};
use gc_vsa::GridConfig;

fn main() -> gc_vsa::Result<()> {
    let config = GridConfig::default().shared()?;
    let geometry = ModuleGeometry::new(&config);
    let book = PositionCodebook::build(&geometry, Lattice::new(Rect::centered(10.0), 0.5)?)?;

    let p = Point2D::new(6.0, 2.0);
    let v = geometry.encode(p);
    for deg in [30.0f64, 90.0, 137.0, -60.0] {
        let alpha = deg.to_radians();
        let rotated = rotate(&v, alpha)?;
        let (hat, _) = book.decode(&rotated)?;
        let expect = p.rotated(alpha);
        let angle = decode_angle(&rotated, &v)?.to_degrees();
        let ratio = profile_ratio(&angle_profile(&rotated, &v)?);
        println!(
            "{deg:6.1} deg: decoded ({:5.1}, {:5.1}) expected ({:5.2}, {:5.2}), angle read {angle:6.1} deg, peak/mean {ratio:.2}",
            hat.x, hat.y, expect.x, expect.y
        );
    }
    Ok(())
}
