//! Monte Carlo simulation of uplink grant-free random access for traffic
//! that must arrive within a millisecond with a loss rate near 10⁻⁵.
//!
//! * [`harq`]: latency CCDFs of reactive, grant-based, K-repetition,
//!   proactive and power-boosted retransmission.
//! * [`hybrid`]: dedicated first attempts plus a shared retransmission pool
//!   resolved by interference cancellation.
//! * [`noma`]: sparse multi-slot NOMA frames with selection, chase and
//!   joint low-rate decoding.
//! * [`phy`], [`timing`]: finite blocklength error model, fading, power
//!   control and the NR time base.
//! * [`stats`], [`rng`], [`report`], [`config`]: confidence intervals,
//!   load search, reproducible parallel replication, CSV tables and
//!   scenario files.
//!
//! ```
//! use gfra_core::hybrid::{hybrid_outage, HybridConfig};
//! use gfra_core::rng::RngPlan;
//! use gfra_core::timing::TimingConfig;
//!
//! let out = hybrid_outage(&HybridConfig::default(), &TimingConfig::default(), 2_000, RngPlan::new(1)).unwrap();
//! assert!(out.plr() < 0.1);
//! ```

pub mod config;
pub mod error;
pub mod harq;
pub mod hybrid;
pub mod noma;
pub mod phy;
pub mod report;
pub mod rng;
pub mod stats;
pub mod timing;

pub use error::{Error, Result};

// The book's snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/numerology.md")]
    mod numerology {}
    #[doc = include_str!("../../../book/src/finite-blocklength.md")]
    mod finite_blocklength {}
    #[doc = include_str!("../../../book/src/harq.md")]
    mod harq {}
    #[doc = include_str!("../../../book/src/hybrid.md")]
    mod hybrid {}
    #[doc = include_str!("../../../book/src/noma.md")]
    mod noma {}
    #[doc = include_str!("../../../book/src/statistics.md")]
    mod statistics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
