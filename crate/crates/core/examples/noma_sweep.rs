//! Prints a PLR-versus-load table for one NOMA strategy.
//!
//! cargo run --release -p gfra-core --example noma_sweep -- lowrate 4 200000

use std::time::Instant;

use gfra_core::noma::{estimate_plr, NomaConfig, Strategy};
use gfra_core::rng::RngPlan;

fn main() {
    let mut args = std::env::args().skip(1);
    let strategy: Strategy = args.next().unwrap_or_else(|| "lowrate".into()).parse().unwrap();
    let d: u32 = args.next().map_or(4, |s| s.parse().unwrap());
    let frames: u64 = args.next().map_or(100_000, |s| s.parse().unwrap());
    println!("load_g,packets,losses,plr,ci_lo,ci_hi,mean_sic_iters,seconds");
    for load_g in [0.25, 0.5, 1.0, 1.5, 2.0, 2.25, 2.5, 2.75, 3.0] {
        let cfg = NomaConfig {
            d,
            strategy,
            load_g,
            ..NomaConfig::default()
        };
        let t = Instant::now();
        let est = estimate_plr(&cfg, frames, RngPlan::new(1)).unwrap();
        println!(
            "{load_g},{},{},{:.3e},{:.3e},{:.3e},{:.2},{:.1}",
            est.packets(),
            est.losses(),
            est.point.plr,
            est.point.ci.lower,
            est.point.ci.upper,
            est.mean_sic_iters(),
            t.elapsed().as_secs_f64()
        );
    }
}
