//! The pivotal count in a box scales by lambda to the 3/4 when the box is
//! dilated by lambda.

use hexperc::measures::scaling_covariance_experiment;
use hexperc::{Point, Square};

fn main() -> hexperc::Result<()> {
    let row = scaling_covariance_experiment(
        &Square::axis(Point::default(), 64.0),
        &Square::axis(Point::default(), 16.0),
        2.0,
        1500,
        12,
    )?;
    println!(
        "base {:.2}, dilated {:.2}, ratio {:.3} +- {:.3} (expected {:.3})",
        row.base.mean,
        row.scaled.mean,
        row.ratio.mean,
        row.ratio.stderr,
        2f64.powf(0.75)
    );
    Ok(())
}
