//! Arm probabilities from a single site across a mesh ladder and the
//! fitted exponents. Larger `n` and finer ladders tighten the fit.

use hexperc::arms::ArmPattern;
use hexperc::stats::{alpha_ladder, ladder_fit};

fn main() -> hexperc::Result<()> {
    let n: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(20_000);
    for p in [ArmPattern::one_arm(), ArmPattern::four_arm()] {
        let rows = alpha_ladder(&p, &[16, 32, 64, 128], n, 11)?;
        for r in &rows {
            println!(
                "{p:>5}  1/mesh = {:>4}  alpha = {:.5} +- {:.5}",
                (1.0 / r.mesh).round(),
                r.value,
                r.stderr
            );
        }
        let fit = ladder_fit(&rows, None)?;
        println!(
            "{p:>5}  slope {:.3} +- {:.3}\n",
            fit.slope, fit.slope_stderr
        );
    }
    Ok(())
}
