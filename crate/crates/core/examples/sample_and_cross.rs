//! Draws configurations on a square and checks crossings both ways: by
//! cluster search and by following the exploration interface.

use hexperc::connectivity::has_crossing;
use hexperc::explore::crossing_by_interface;
use hexperc::{Configuration, Point, Quad, RandomField, Square};
use std::sync::Arc;

fn main() -> hexperc::Result<()> {
    let sq = Square::axis(Point::default(), 24.0);
    let q = Quad::from_square(&sq)?;
    let n = 2000;
    let mut open = 0;
    for i in 0..n {
        let c = RandomField::new(7, i);
        let by_clusters = has_crossing(&c, &q, true)?;
        assert_eq!(by_clusters, crossing_by_interface(&c, &q)?);
        // exactly one of the open and closed crossings exists
        assert_ne!(by_clusters, has_crossing(&c, &q, false)?);
        open += by_clusters as u32;
    }
    println!("left-right open crossing of a square of radius 24: {open}/{n}");

    let c = Configuration::sample(Arc::new(q.sites().clone()), 7, 0)?;
    println!(
        "sample 0 has {} open sites out of {}",
        c.open_count(),
        c.region().len()
    );
    Ok(())
}
