//! Expected number of chordal interface edges within distance delta of the
//! boundary, and its power law in delta.

use hexperc::stats::{interface_boundary_decay, midpoint_quad};
use hexperc::{Point, Square};

fn main() -> hexperc::Result<()> {
    let radius = 64.0;
    let q = midpoint_quad(radius)?;
    let d = interface_boundary_decay(
        &q,
        &Square::axis(Point::default(), radius),
        &[2.0, 4.0, 8.0],
        300,
        14,
    )?;
    for r in &d.rows {
        println!(
            "delta {:>2}: {:.2} +- {:.2}",
            r.delta, r.mass.mean, r.mass.stderr
        );
    }
    println!(
        "exponent {:.3} +- {:.3} (expected {:.3})",
        d.fit.slope,
        d.fit.slope_stderr,
        13.0 / 12.0
    );
    Ok(())
}
