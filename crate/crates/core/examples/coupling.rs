//! Inner fingerprints of four-arm configurations under two outer shapes.
//! The excess total variation over the sampling floor fades as R/r grows,
//! and reversing colors leaves the law unchanged.

use hexperc::coupling::{color_switch_experiment, coupling_tv_experiment, OuterGeometry};

fn main() -> hexperc::Result<()> {
    let n = 1500;
    for k in [4.0, 8.0] {
        let row = coupling_tv_experiment(
            8.0,
            8.0 * k,
            OuterGeometry::Centered,
            OuterGeometry::Offset,
            8,
            n,
            1,
            1 << 30,
        )?;
        println!(
            "R/r = {k}: excess TV {:.3} +- {:.3}",
            row.tv.excess(),
            row.tv.excess_stderr()
        );
    }
    let sw = color_switch_experiment(8.0, 32.0, 8, n, 2, 1 << 30)?;
    println!(
        "color switch: excess TV {:.3} +- {:.3}",
        sw.tv.excess(),
        sw.tv.excess_stderr()
    );
    Ok(())
}
