//! Exhaustive enumeration on small geometries against the fast algorithms.

use hexperc::oracle::{check_arm_events, check_crossings};

fn main() {
    for a in check_crossings()
        .into_iter()
        .chain(check_arm_events(&["O", "OC", "OCOC"]))
    {
        println!(
            "{:<12} {:<28} {:>2} sites  {:>8} configurations  {} disagreements",
            a.predicate, a.geometry, a.sites, a.configs, a.disagreements
        );
    }
}
