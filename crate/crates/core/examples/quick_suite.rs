//! Runs acceptance checks on reduced samples; pass criterion numbers as
//! arguments to pick a subset.

use hexperc::acceptance::{run_suite, Profile, SuiteConfig};

fn main() {
    let ids: Vec<u8> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let ids = if ids.is_empty() { vec![2, 13, 15] } else { ids };
    let cfg = SuiteConfig {
        seed: 1,
        profile: Profile::Quick,
    };
    run_suite(&ids, &cfg, |o| println!("{}", o.line()));
}
