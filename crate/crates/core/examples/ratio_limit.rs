//! Ratio of four-arm probabilities to radii 1/2 and 1 as the mesh shrinks,
//! estimated on shared samples.

use hexperc::arms::ArmPattern;
use hexperc::stats::ratio_limit_experiment;

fn main() -> hexperc::Result<()> {
    let tab = ratio_limit_experiment(&ArmPattern::four_arm(), 0.5, &[16, 32, 64], 40_000, 3)?;
    for r in &tab.rows {
        println!(
            "mesh {:.5}  ratio {:.3} +- {:.3}",
            r.mesh, r.ratio.mean, r.ratio.stderr
        );
    }
    println!("successive differences {:?}", tab.successive);
    println!("limit predicted by the exponent: {:.3}", 2f64.powf(1.25));
    Ok(())
}
