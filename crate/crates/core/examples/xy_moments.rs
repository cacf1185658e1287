//! X counts sites with four arms to the outer box, Y counts grid cells with
//! four arms around them; beta makes their means agree. The relative second
//! moment of X - beta Y shrinks with the grid spacing.

use hexperc::measures::{xy_l2_experiment, XySetup};

fn main() -> hexperc::Result<()> {
    let setup = XySetup::default();
    for (inv, n) in [(8u32, 600u64), (16, 300)] {
        let (row, beta) = xy_l2_experiment(&setup, 1.0 / inv as f64, n, 60, 21)?;
        println!(
            "eps 1/{inv}: beta {:.2} (acceptance {:.2}), E[X] {:.1}, E[Y] {:.2}, ratio {:.3} +- {:.3}",
            row.beta,
            beta.acceptance_rate(),
            row.mean_x,
            row.mean_y,
            row.ratio.mean,
            row.ratio.stderr
        );
    }
    Ok(())
}
