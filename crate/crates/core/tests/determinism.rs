use hexperc::acceptance::{determinism_probe, with_workers};
use hexperc::coupling::{separation_statistic, ConditionalSampler};
use hexperc::stats::par_sums;
use hexperc::{Coloring, RandomField};

#[test]
fn probe_tables_do_not_depend_on_workers() {
    let one = with_workers(1, || determinism_probe(11)).unwrap().unwrap();
    let four = with_workers(4, || determinism_probe(11)).unwrap().unwrap();
    assert_eq!(one, four);
    let other = with_workers(1, || determinism_probe(12)).unwrap().unwrap();
    assert_ne!(one, other);
}

#[test]
fn rejection_sampling_keeps_index_order() {
    let draw = || {
        let s = ConditionalSampler::new(2, 1 << 16).unwrap();
        s.collect(300, false, |i| {
            RandomField::new(2, i)
                .is_open(hexperc::Hex::ORIGIN)
                .then_some(i)
        })
        .unwrap()
    };
    let a = with_workers(1, draw).unwrap();
    let b = with_workers(4, draw).unwrap();
    assert_eq!(a.samples, b.samples);
    assert_eq!(a.attempts, b.attempts);
    assert!(a.samples.windows(2).all(|w| w[0].0 < w[1].0));
}

#[test]
fn conditioned_statistics_do_not_depend_on_workers() {
    let run = || separation_statistic(4.0, 16.0, 100, 8, 1 << 22).unwrap();
    let (a, b) = (with_workers(1, run).unwrap(), with_workers(3, run).unwrap());
    assert_eq!(a.histogram, b.histogram);
    assert_eq!(a.attempts, b.attempts);
    let sums = |w| {
        with_workers(w, || {
            par_sums(0..10_000, |i| {
                [{
                    let c = RandomField::new(5, i);
                    hexperc::Hex::ORIGIN
                        .neighbors()
                        .iter()
                        .filter(|h| c.is_open(**h))
                        .count() as i64
                }]
            })
        })
        .unwrap()
    };
    assert_eq!(sums(1), sums(4));
}
