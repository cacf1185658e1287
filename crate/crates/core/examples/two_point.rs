//! Two-point connection probability: the same at different angles, and of
//! the order of the squared one-arm probability to half the distance.

use hexperc::stats::{two_point_isotropy, two_point_scaling};

fn main() -> hexperc::Result<()> {
    let rows = two_point_isotropy(32.0, &[0.0, std::f64::consts::FRAC_PI_6], 1.0, 4000, 6)?;
    for r in &rows {
        println!(
            "angle {:.3}: {:.4} +- {:.4}",
            r.angle, r.estimate.mean, r.estimate.stderr
        );
    }
    for s in two_point_scaling(&[16.0, 32.0, 64.0], 1.0, 4000, 8)? {
        println!(
            "d = {:>3}: normalized {:.3} +- {:.3}",
            s.d, s.normalized.mean, s.normalized.stderr
        );
    }
    Ok(())
}
