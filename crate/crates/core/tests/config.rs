use std::sync::Arc;

use hexperc::config::{Reversed, Wired};
use hexperc::stats::{par_sums, Estimate};
use hexperc::{Coloring, Configuration, Error, Hex, Point, RandomField, Region, SiteSet, Square};
use proptest::prelude::*;

fn region(radius: f64) -> Arc<SiteSet> {
    Arc::new(Square::axis(Point::default(), radius).sites(1.0))
}

#[test]
fn same_arguments_give_same_bits() {
    let r = region(12.0);
    let a = Configuration::sample(r.clone(), 3, 17).unwrap();
    let b = Configuration::sample(r.clone(), 3, 17).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, Configuration::sample(r, 3, 18).unwrap());
}

#[test]
fn open_density_is_one_half() {
    // 10^6 site draws across samples; 4 sigma is 0.002
    let n = 1_000_000u64;
    let [open] = par_sums(0..n, |i| {
        [RandomField::new(99, i / 1000).is_open(Hex::new((i % 1000) as i32, 7)) as i64]
    });
    assert!((open as f64 / n as f64 - 0.5).abs() < 0.002, "{open}");
}

#[test]
fn color_flip_preserves_the_law() {
    // statistic: number of open neighbor pairs along one axis in a box
    let sites = region(6.0);
    let stat = |c: &dyn Fn(Hex) -> bool| {
        sites
            .iter()
            .filter(|&h| c(h) && c(h + Hex::new(1, 0)))
            .count() as i64
    };
    let n = 20_000u64;
    let [a, a2, b, b2] = par_sums(0..n, |i| {
        let f = RandomField::new(5, i);
        let x = stat(&|h| f.is_open(h));
        let y = stat(&|h| Reversed(f).is_open(h));
        [x, x * x, y, y * y]
    });
    let ea = Estimate::from_moments(n, a as f64, a2 as f64);
    let eb = Estimate::from_moments(n, b as f64, b2 as f64);
    assert!(ea.z_distance(&eb) < 4.0, "{ea:?} {eb:?}");
}

#[test]
fn queries_outside_the_region_fail() {
    let c = Configuration::sample(region(3.0), 1, 0).unwrap();
    assert!(matches!(
        c.state(Hex::new(100, 0)),
        Err(Error::OutsideRegion(_))
    ));
    assert!(c.flip(Hex::new(100, 0)).is_err());
    assert!(c.try_open(Hex::new(100, 0)).is_none());
    assert!(matches!(
        Configuration::sample(Arc::new(SiteSet::default()), 1, 0),
        Err(Error::EmptyRegion)
    ));
}

#[test]
fn flipping_in_an_all_open_box() {
    let r = region(4.0);
    let c = Configuration::from_fn(r.clone(), |_| true);
    let x = Hex::ORIGIN;
    let f = c.flip(x).unwrap();
    assert!(!f.state(x).unwrap());
    for n in x.neighbors() {
        assert!(f.state(n).unwrap());
    }
    assert_eq!(f.open_count(), r.len() - 1);
}

#[test]
fn wired_and_reversed_views() {
    let f = RandomField::new(2, 2);
    let hole = SiteSet::from_sites([Hex::ORIGIN]);
    let w = Wired {
        base: f,
        region: &hole,
        open: false,
    };
    assert!(!w.is_open(Hex::ORIGIN));
    let h = Hex::new(3, 1);
    assert_eq!(w.is_open(h), f.is_open(h));
    assert_eq!(Reversed(f).is_open(h), !f.is_open(h));
}

#[test]
fn pattern_configurations() {
    let r = Arc::new(SiteSet::from_sites([
        Hex::new(0, 0),
        Hex::new(1, 0),
        Hex::new(2, 0),
    ]));
    let c = Configuration::from_pattern(r.clone(), 0b101).unwrap();
    assert_eq!(c.open_count(), 2);
    assert!(!c.state(r.sites()[1]).unwrap());
    assert_eq!(c.reversed().open_count(), 1);
    let big = region(10.0);
    assert!(matches!(
        Configuration::from_pattern(big, 1),
        Err(Error::RegionTooLarge { .. })
    ));
}

proptest! {
    #[test]
    fn flip_twice_is_identity(seed in any::<u64>(), q in -5i32..5, r in -5i32..5) {
        let c = Configuration::sample(region(7.0), seed, 0).unwrap();
        let x = Hex::new(q, r);
        prop_assume!(c.region().contains(x));
        let f = c.flip(x).unwrap();
        prop_assert_eq!(&f.flip(x).unwrap(), &c);
        let diff = f.open_count() as i64 - c.open_count() as i64;
        prop_assert!(diff == 1 || diff == -1);
    }

    #[test]
    fn dump_round_trips(seed in any::<u64>(), index in 0u64..1000, radius in 1.0f64..9.0) {
        let c = Configuration::sample(region(radius), seed, index).unwrap();
        let mut buf = Vec::new();
        c.dump(&mut buf).unwrap();
        let back = Configuration::load(&buf[..]).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!((back.seed, back.index), (seed, index));
    }

    #[test]
    fn sum_over_shards_ignores_their_order(seed in any::<u64>(), cut in 1u64..199) {
        let f = |i: u64| RandomField::new(seed, i).is_open(Hex::ORIGIN) as i64 + 2 * RandomField::new(seed, i).is_open(Hex::new(1, 1)) as i64;
        let [whole] = par_sums(0..200, |i| [f(i)]);
        let [a] = par_sums(cut..200, |i| [f(i)]);
        let [b] = par_sums(0..cut, |i| [f(i)]);
        prop_assert_eq!(whole, a + b);
    }
}

#[test]
fn corrupted_dumps_are_rejected() {
    let c = Configuration::sample(region(2.0), 1, 1).unwrap();
    let mut buf = Vec::new();
    c.dump(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let (head, body) = text.split_once('\n').unwrap();
    assert!(Configuration::load(format!("{head}\n1o\n").as_bytes()).is_err());
    assert!(Configuration::load(format!("{head}\n{}x\n", body.trim()).as_bytes()).is_err());
    assert!(Configuration::load("".as_bytes()).is_err());
}
