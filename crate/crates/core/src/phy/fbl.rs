//! Finite-blocklength packet error probability.
//!
//! Error probability of a k-bit message sent over n complex channel uses of
//! an AWGN channel at SINR s, Gaussian inputs, normal approximation:
//!
//! ```text
//! eps = Q( (n C(s) - k + 0.5 log2 n) / sqrt(n V(s)) )
//! C(s) = log2(1 + s)
//! V(s) = (1 - (1 + s)^-2) (log2 e)^2
//! ```
//!
//! Joint decoding over slots with different SINRs sums the information and
//! the dispersion of the parallel sub-channels:
//!
//! ```text
//! eps = Q( (sum n_i C(s_i) - k + 0.5 log2(sum n_i)) / sqrt(sum n_i V(s_i)) )
//! ```

use std::f64::consts::{LOG2_E, SQRT_2};

use crate::error::{config_err, Error, Result};

/// Largest blocklength searched by [`required_blocklength`].
pub const BLOCKLENGTH_CAP: u64 = 1 << 20;

const Q_ARG_LIMIT: f64 = 38.0;

/// One coded transmission unit: `k_bits` of payload over `n_re` channel uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FblCodeSpec {
    pub k_bits: u32,
    pub n_re: u32,
}

impl FblCodeSpec {
    pub fn new(k_bits: u32, n_re: u32) -> Result<Self> {
        if k_bits == 0 || n_re == 0 {
            return Err(config_err(format!(
                "code needs k_bits >= 1 and n_re >= 1 (got k = {k_bits}, n = {n_re})"
            )));
        }
        Ok(Self { k_bits, n_re })
    }
}

/// Standard normal tail probability. Clamped to 1 / 0 outside [-38, 38].
pub fn q_function(x: f64) -> f64 {
    if x.is_nan() {
        return 1.0;
    }
    if x <= -Q_ARG_LIMIT {
        1.0
    } else if x >= Q_ARG_LIMIT {
        0.0
    } else {
        0.5 * libm::erfc(x / SQRT_2)
    }
}

pub fn capacity_bits(sinr: f64) -> f64 {
    sinr.ln_1p() * LOG2_E
}

/// Channel dispersion in bits^2 per channel use.
pub fn dispersion_bits2(sinr: f64) -> f64 {
    let a = 1.0 + sinr;
    (1.0 - 1.0 / (a * a)) * LOG2_E * LOG2_E
}

fn eps_from_terms(info: f64, k_bits: f64, total_n: f64, dispersion: f64) -> f64 {
    if dispersion <= 0.0 {
        // Zero SINR everywhere: no information gets through.
        return if k_bits > 0.0 { 1.0 } else { 0.0 };
    }
    let num = info - k_bits + 0.5 * total_n.log2();
    q_function(num / dispersion.sqrt()).clamp(0.0, 1.0)
}

/// Packet error probability of `spec` at linear SINR `sinr`.
///
/// ```
/// use gfra_core::phy::{per_normal_approx, FblCodeSpec};
/// let code = FblCodeSpec::new(256, 240).unwrap();
/// let eps = per_normal_approx(code, 1.0);
/// assert!((eps - 0.7332).abs() < 1e-3);
/// assert_eq!(per_normal_approx(code, 0.0), 1.0);
/// ```
pub fn per_normal_approx(spec: FblCodeSpec, sinr: f64) -> f64 {
    let s = sinr.max(0.0);
    let n = spec.n_re as f64;
    eps_from_terms(n * capacity_bits(s), spec.k_bits as f64, n, n * dispersion_bits2(s))
}

/// Joint decoding of one codeword spread over slots of lengths `slot_lengths`
/// received at `slot_sinrs`.
pub fn per_joint(slot_lengths: &[u32], slot_sinrs: &[f64], k_bits: u32) -> Result<f64> {
    if slot_lengths.is_empty() || slot_lengths.len() != slot_sinrs.len() {
        return Err(Error::Domain(format!(
            "joint decoding needs matching non-empty slot lists (got {} lengths, {} SINRs)",
            slot_lengths.len(),
            slot_sinrs.len()
        )));
    }
    let (mut info, mut disp, mut total) = (0.0, 0.0, 0.0);
    for (&n, &s) in slot_lengths.iter().zip(slot_sinrs) {
        let (n, s) = (n as f64, s.max(0.0));
        info += n * capacity_bits(s);
        disp += n * dispersion_bits2(s);
        total += n;
    }
    Ok(eps_from_terms(info, k_bits as f64, total, disp))
}

/// [`per_joint`] for equally long slots, without allocating.
pub fn per_joint_equal_n(n_re: u32, slot_sinrs: &[f64], k_bits: u32) -> f64 {
    let (mut info, mut disp) = (0.0, 0.0);
    for &s in slot_sinrs {
        let s = s.max(0.0);
        info += capacity_bits(s);
        disp += dispersion_bits2(s);
    }
    let n = n_re as f64;
    eps_from_terms(n * info, k_bits as f64, n * slot_sinrs.len() as f64, n * disp)
}

/// Smallest blocklength `n` with `per_normal_approx((k, n), sinr) <= target_eps`.
///
/// The search doubles an upper bracket from 1 and bisects inside it. Returns
/// [`Error::Infeasible`] when even [`BLOCKLENGTH_CAP`] channel uses miss the
/// target.
pub fn required_blocklength(k_bits: u32, target_eps: f64, sinr: f64) -> Result<u64> {
    if !(target_eps > 0.0 && target_eps < 1.0) {
        return Err(Error::Domain(format!("target eps {target_eps} outside (0, 1)")));
    }
    if sinr.is_nan() || sinr <= 0.0 || k_bits == 0 {
        return Err(Error::Domain(format!(
            "sizing needs sinr > 0 and k >= 1 (got sinr = {sinr}, k = {k_bits})"
        )));
    }
    let eps_at = |n: u64| {
        let n = n as f64;
        eps_from_terms(n * capacity_bits(sinr), k_bits as f64, n, n * dispersion_bits2(sinr))
    };
    let infeasible = || Error::Infeasible {
        k_bits,
        target_eps,
        sinr,
        cap: BLOCKLENGTH_CAP,
    };

    let mut hi = 1u64;
    while eps_at(hi) > target_eps {
        if hi >= BLOCKLENGTH_CAP {
            return Err(infeasible());
        }
        hi = (hi * 2).min(BLOCKLENGTH_CAP);
    }
    // eps_at(lo) > target, eps_at(hi) <= target
    let mut lo = hi / 2;
    if lo == 0 {
        return Ok(hi);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if eps_at(mid) <= target_eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // 60-digit erfc reference values.
    const Q_REF: [(f64, f64); 14] = [
        (-37.0, 1.0),
        (-8.0, 0.999_999_999_999_999_3),
        (-1.5, 0.933_192_798_731_141_9),
        (-0.6224, 0.733_160_559_779_829_1),
        (0.0, 0.5),
        (0.3, 0.382_088_577_811_047_4),
        (1.0, 0.15865525393145705),
        (2.5, 0.006_209_665_325_776_135),
        (5.0, 2.866_515_718_791_939e-7),
        (8.35, 3.41314832645814e-17),
        (10.0, 7.619_853_024_160_525e-24),
        (20.0, 2.7536241186062337e-89),
        (30.0, 4.906_713_927_148_187e-198),
        (37.5, 4.605_353_009_581_955e-308),
    ];

    fn rel_err(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn code(k: u32, n: u32) -> FblCodeSpec {
        FblCodeSpec::new(k, n).unwrap()
    }

    #[test]
    fn q_function_matches_reference() {
        for (x, q) in Q_REF {
            assert!(rel_err(q_function(x), q) < 1e-12, "Q({x}) = {} vs {q}", q_function(x));
        }
        assert_eq!(q_function(38.5), 0.0);
        assert_eq!(q_function(-38.5), 1.0);
        assert_eq!(q_function(1e6), 0.0);
        assert_eq!(q_function(-1e6), 1.0);
    }

    #[test]
    fn normal_approx_examples() {
        assert!(rel_err(per_normal_approx(code(256, 240), 1.0), 0.733_152_307_644_016_4) < 1e-10);
        assert!(per_normal_approx(code(256, 240), 7.943) <= 1e-30);
        assert!(rel_err(per_normal_approx(code(256, 240), 1.986), 8.858_806_089_279_959e-10) < 1e-9);
        assert!(rel_err(per_normal_approx(code(64, 100), 0.5), 0.580_393_211_123_868) < 1e-10);
        assert!(rel_err(per_normal_approx(code(500, 1000), 0.3), 0.999_967_870_571_379_7) < 1e-10);
        for (k, n) in [(1, 1), (256, 240), (10_000, 5)] {
            assert_eq!(per_normal_approx(code(k, n), 0.0), 1.0);
        }
    }

    #[test]
    fn joint_examples() {
        for s in [0.1, 1.0, 5.0] {
            assert_eq!(
                per_joint(&[240], &[s], 256).unwrap(),
                per_normal_approx(code(256, 240), s)
            );
        }
        let two = per_joint(&[240, 240], &[1.0, 1.0], 256).unwrap();
        assert!(rel_err(two, 3.534_400_237_006_522e-17) < 1e-9, "{two}");
        assert_eq!(per_joint(&[240, 240, 240], &[0.0; 3], 256).unwrap(), 1.0);
        assert!(per_joint(&[], &[], 256).is_err());
        assert!(per_joint(&[240], &[1.0, 2.0], 256).is_err());
    }

    #[test]
    fn required_blocklength_examples() {
        assert_eq!(required_blocklength(256, 0.5, 1.0).unwrap(), 253);
        let s9 = crate::phy::db_to_linear(9.0);
        assert_eq!(required_blocklength(256, 0.1, s9).unwrap(), 86);
        assert_eq!(required_blocklength(256, 1e-4, s9).unwrap(), 97);
        assert_eq!(required_blocklength(256, 1e-5, s9).unwrap(), 100);
        assert!(matches!(
            required_blocklength(10_000, 1e-9, 1e-6),
            Err(Error::Infeasible { .. })
        ));
        assert!(required_blocklength(256, 0.0, 1.0).is_err());
        assert!(required_blocklength(256, 1.0, 1.0).is_err());
        assert!(required_blocklength(256, 0.1, 0.0).is_err());
    }

    #[test]
    fn required_blocklength_decreasing_in_sinr() {
        let mut prev = u64::MAX;
        for i in 0..40 {
            let s = 0.05 * 1.25f64.powi(i);
            let n = required_blocklength(256, 1e-5, s).unwrap();
            assert!(n <= prev);
            prev = n;
        }
    }

    proptest! {
        #[test]
        fn eps_in_unit_interval(k in 1u32..5000, n in 1u32..5000, s in 0.0f64..1e6) {
            let e = per_normal_approx(code(k, n), s);
            prop_assert!((0.0..=1.0).contains(&e));
        }

        #[test]
        fn eps_strictly_decreasing_in_sinr(k in 16u32..1024, n in 16u32..1024, s in 0.01f64..20.0) {
            let c = code(k, n);
            let (a, b) = (per_normal_approx(c, s), per_normal_approx(c, s * 1.01));
            if a > 1e-300 && a < 1.0 - 1e-15 {
                prop_assert!(b < a);
            }
        }

        #[test]
        fn eps_monotone_in_n_and_k(k in 16u32..1024, n in 16u32..1024, s in 0.01f64..20.0) {
            let c = code(k, n);
            let e = per_normal_approx(c, s);
            prop_assert!(per_normal_approx(code(k + 1, n), s) >= e);
            if n as f64 >= k as f64 / capacity_bits(s) {
                prop_assert!(per_normal_approx(code(k, n + 1), s) <= e);
            }
        }

        #[test]
        fn joint_equal_sinr_matches_long_block(d in 1u32..14, n in 1u32..500, k in 1u32..2000, s in 0.0f64..30.0) {
            let lens = vec![n; d as usize];
            let sinrs = vec![s; d as usize];
            let joint = per_joint(&lens, &sinrs, k).unwrap();
            let long = per_normal_approx(code(k, n * d), s);
            prop_assert!((joint - long).abs() <= 1e-9 * long.max(1e-300) + 1e-300,
                "joint {} long {}", joint, long);
            let fast = per_joint_equal_n(n, &sinrs, k);
            prop_assert!((fast - joint).abs() <= 1e-9 * joint.max(1e-300) + 1e-300);
        }

        #[test]
        fn required_blocklength_is_minimal(k in 1u32..2000, log_eps in -9.0f64..-0.05, s_db in -10.0f64..25.0) {
            let eps = 10f64.powf(log_eps);
            let s = crate::phy::db_to_linear(s_db);
            let n = required_blocklength(k, eps, s).unwrap();
            prop_assert!(per_normal_approx(code(k, n as u32), s) <= eps);
            if n > 1 {
                prop_assert!(per_normal_approx(code(k, n as u32 - 1), s) > eps);
            }
        }
    }

    #[test]
    fn extreme_arguments_clamped() {
        for s in [1e-300, 1e-12, 1e6, 1e300] {
            for (k, n) in [(1, 1), (1_000_000, 1), (1, 1_000_000)] {
                let e = per_normal_approx(code(k, n), s);
                assert!((0.0..=1.0).contains(&e), "{k} {n} {s} -> {e}");
            }
        }
    }
}
