//! Pivotal sites of a square for the left-right crossing, found by the chord
//! map in one pass and confirmed by flipping each site.

use hexperc::arms::pivotal_by_flip;
use hexperc::measures::pivotal_measure;
use hexperc::{Configuration, Point, Quad, Square};
use std::sync::Arc;

fn main() -> hexperc::Result<()> {
    let q = Quad::from_square(&Square::axis(Point::default(), 12.0))?;
    let region = Arc::new(q.sites().clone());
    for i in 0..5 {
        let c = Configuration::sample(region.clone(), 9, i)?;
        let m = pivotal_measure(&c, &q, 1.0);
        let flips = q
            .sites()
            .iter()
            .filter(|&x| pivotal_by_flip(&c, x, &q).unwrap_or(false))
            .count();
        println!(
            "sample {i}: {} pivotal sites, {flips} by flipping",
            m.count()
        );
    }
    Ok(())
}
