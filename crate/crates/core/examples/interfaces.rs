//! Interfaces of one configuration: the chordal interface of a square and
//! the crossing interfaces of an annulus, with their endpoints.

use hexperc::explore::{chordal_interface, crossing_interfaces, radial_exploration, Annular};
use hexperc::{Annulus, Point, Quad, RandomField, Square};

fn main() -> hexperc::Result<()> {
    let c = RandomField::new(5, 1);
    let q = Quad::from_square(&Square::axis(Point::default(), 32.0))?;
    let t = chordal_interface(&c, &q)?;
    println!("chordal interface: {} edges", t.len());

    let ann = Annular::from_annulus(&Annulus::new(Point::default(), 4.0, 40.0)?)?;
    let cs = crossing_interfaces(&c, &ann);
    println!("annulus A(4, 40): {} crossing interfaces", cs.len());
    for x in &cs {
        let (a, b) = (x.inner_end.point(), x.outer_end.point());
        println!(
            "  open on the {}: inner end ({:.1}, {:.1}), outer end ({:.1}, {:.1})",
            if x.left_open { "left " } else { "right" },
            a.x,
            a.y,
            b.x,
            b.y
        );
    }
    let radial = radial_exploration(&c, &ann);
    println!(
        "radial exploration reaches the outside: {}",
        radial.reached_outer()
    );
    Ok(())
}
