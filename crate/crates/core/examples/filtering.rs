//! Ordered tilings of a box and the domination of their importance
//! measures: finer tilings mark more sites.

use hexperc::measures::{
    refines, rho_measure, site_set, square_tiling, tiling_measure, EnhancedTiling,
};
use hexperc::{Point, RandomField, Square};

fn main() -> hexperc::Result<()> {
    let domain = site_set(&Square::axis(Point::default(), 16.0));
    let rho = 4.0;
    let fine = square_tiling(rho, &domain)?;
    let balls = EnhancedTiling::site_balls(&domain, rho)?;
    let coarse = square_tiling(2.0 * rho, &domain)?;
    println!(
        "fine tiling refines balls: {}",
        refines(&fine, &balls, &domain)?
    );
    println!(
        "balls refine coarse tiling: {}",
        refines(&balls, &coarse, &domain)?
    );
    for i in 0..5 {
        let c = RandomField::new(13, i);
        let a = tiling_measure(&c, &fine, &domain, 1.0)?;
        let b = rho_measure(&c, &domain, rho, 1.0);
        let d = tiling_measure(&c, &coarse, &domain, 1.0)?;
        println!(
            "sample {i}: {} >= {} >= {} important sites",
            a.count(),
            b.count(),
            d.count()
        );
        assert!(a.dominates(&b) && b.dominates(&d));
    }
    Ok(())
}
