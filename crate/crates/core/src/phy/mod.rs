//! Physical-layer abstraction: power control, block fading, SINR and the
//! finite-blocklength packet error model.

mod fbl;
mod power;

pub use fbl::{
    capacity_bits, dispersion_bits2, per_joint, per_joint_equal_n, per_normal_approx, q_function, required_blocklength,
    FblCodeSpec, BLOCKLENGTH_CAP,
};
pub use power::{tx_power_dbm, PowerControlConfig};

use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

pub fn linear_to_db(x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(10.0 * x.log10())
    } else {
        Err(Error::Domain(format!("cannot express {x} in dB")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fading {
    /// Unit-mean exponential power gain, constant over one slot and
    /// independent across slots and users.
    #[default]
    RayleighBlock,
    None,
}

impl std::str::FromStr for Fading {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "rayleigh" | "rayleigh_block" => Ok(Self::RayleighBlock),
            "none" | "awgn" => Ok(Self::None),
            other => Err(format!("unknown fading '{other}' (rayleigh_block, none)")),
        }
    }
}

/// Mean SNR of the desired link and its fading model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub avg_snr_db: f64,
    pub fading: Fading,
}

impl Default for LinkBudget {
    fn default() -> Self {
        Self {
            avg_snr_db: 9.0,
            fading: Fading::RayleighBlock,
        }
    }
}

impl LinkBudget {
    pub fn avg_snr(&self) -> f64 {
        db_to_linear(self.avg_snr_db)
    }

    /// One block-fading power gain (1.0 without fading).
    pub fn gain<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.fading {
            Fading::RayleighBlock => channel_gain_sample(rng),
            Fading::None => 1.0,
        }
    }
}

/// Draws a Rayleigh block-fading power gain |h|^2 ~ Exp(1).
pub fn channel_gain_sample<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Exp1)
}

/// Signal to interference plus noise ratio with interference treated as noise.
pub fn sinr(desired: f64, interferers: &[f64], noise: f64) -> f64 {
    desired / (noise + interferers.iter().sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_stream;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn db_conversions() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert_relative_eq!(db_to_linear(10.0), 10.0);
        assert_relative_eq!(db_to_linear(9.0), 7.943282347242815, max_relative = 1e-14);
        assert!(linear_to_db(0.0).is_err());
        assert!(linear_to_db(-1.0).is_err());
    }

    proptest! {
        #[test]
        fn db_round_trip(x in -200.0f64..200.0) {
            let back = linear_to_db(db_to_linear(x)).unwrap();
            prop_assert!((back - x).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn sinr_examples() {
        assert_relative_eq!(sinr(7.943, &[], 1.0), 7.943);
        assert_relative_eq!(sinr(8.0, &[4.0, 4.0], 1.0), 8.0 / 9.0);
        assert_eq!(sinr(0.0, &[3.0, 1.0], 1.0), 0.0);
    }

    #[test]
    fn rayleigh_gain_statistics() {
        let mut rng = derive_stream(2024, 0);
        let n = 1_000_000;
        let mut sum = 0.0;
        let mut below = 0u64;
        for _ in 0..n {
            let g = channel_gain_sample(&mut rng);
            assert!(g >= 0.0);
            sum += g;
            if g < 0.1349 {
                below += 1;
            }
        }
        let mean = sum / n as f64;
        assert!((mean - 1.0).abs() < 0.005, "mean {mean}");
        let frac = below as f64 / n as f64;
        let expected = 1.0 - (-0.1349f64).exp();
        assert!((frac - expected).abs() < 0.002, "cdf {frac} vs {expected}");
    }
}
