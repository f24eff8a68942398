//! Estimation and reporting: latency CCDFs, exact binomial intervals and the
//! load-threshold search.

use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

/// Two-sided confidence interval for a probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfInterval {
    pub lower: f64,
    pub upper: f64,
    pub confidence: f64,
}

impl ConfInterval {
    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }
}

/// Confidence level used for every reported interval unless stated otherwise.
pub const DEFAULT_CONFIDENCE: f64 = 0.95;

/// Quantile of Beta(a, b) by bisection on the regularized incomplete beta.
fn beta_quantile(q: f64, a: f64, b: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if beta_reg(a, b, mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exact Clopper–Pearson interval for `losses` out of `trials`.
///
/// ```
/// use gfra_core::stats::cp_interval;
/// let ci = cp_interval(0, 1000, 0.95);
/// assert_eq!(ci.lower, 0.0);
/// assert!((ci.upper - (1.0 - 0.025f64.powf(1.0 / 1000.0))).abs() < 1e-12);
/// ```
pub fn cp_interval(losses: u64, trials: u64, confidence: f64) -> ConfInterval {
    assert!(
        trials >= 1 && losses <= trials,
        "need 0 <= losses <= trials, trials >= 1"
    );
    let alpha = 1.0 - confidence;
    let (x, n) = (losses as f64, trials as f64);
    let lower = if losses == 0 {
        0.0
    } else if losses == trials {
        (alpha / 2.0).powf(1.0 / n)
    } else {
        beta_quantile(alpha / 2.0, x, n - x + 1.0)
    };
    let upper = if losses == trials {
        1.0
    } else if losses == 0 {
        1.0 - (alpha / 2.0).powf(1.0 / n)
    } else {
        beta_quantile(1.0 - alpha / 2.0, x + 1.0, n - x)
    };
    ConfInterval {
        lower,
        upper,
        confidence,
    }
}

/// Empirical latency survival function; undelivered packets count as
/// infinitely late.
#[derive(Debug, Clone, PartialEq)]
pub struct Ccdf {
    /// Sorted distinct latencies with their multiplicities.
    support: Vec<(f64, u64)>,
    /// `above[i]` = delivered samples strictly later than `support[i]`.
    above: Vec<u64>,
    delivered: u64,
    misses: u64,
}

impl Ccdf {
    pub fn from_samples(samples_ms: &[f64], misses: u64) -> Result<Self> {
        Self::from_weighted(samples_ms.iter().map(|&t| (t, 1)), misses)
    }

    /// Builds the CCDF from `(latency_ms, count)` pairs in any order.
    pub fn from_weighted<I: IntoIterator<Item = (f64, u64)>>(points: I, misses: u64) -> Result<Self> {
        let mut pts: Vec<(f64, u64)> = points.into_iter().filter(|p| p.1 > 0).collect();
        if pts.iter().any(|p| !p.0.is_finite()) {
            return Err(Error::Domain("latency samples must be finite".into()));
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut support: Vec<(f64, u64)> = Vec::with_capacity(pts.len());
        for (t, c) in pts {
            match support.last_mut() {
                Some(last) if last.0 == t => last.1 += c,
                _ => support.push((t, c)),
            }
        }
        let delivered: u64 = support.iter().map(|p| p.1).sum();
        if delivered + misses == 0 {
            return Err(Error::Domain("CCDF of an empty sample".into()));
        }
        let mut above = Vec::with_capacity(support.len());
        let mut remaining = delivered;
        for &(_, c) in &support {
            remaining -= c;
            above.push(remaining);
        }
        Ok(Self {
            support,
            above,
            delivered,
            misses,
        })
    }

    pub fn total(&self) -> u64 {
        self.delivered + self.misses
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    /// Number of packets later than `t_ms` (misses included).
    pub fn exceed_count(&self, t_ms: f64) -> u64 {
        let idx = self.support.partition_point(|p| p.0 <= t_ms);
        let late = if idx == 0 { self.delivered } else { self.above[idx - 1] };
        late + self.misses
    }

    /// P(latency > t_ms), right-continuous.
    pub fn survival_at(&self, t_ms: f64) -> f64 {
        self.exceed_count(t_ms) as f64 / self.total() as f64
    }

    /// `(latency_ms, P(latency > latency_ms))` at every support point.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let total = self.total() as f64;
        self.support
            .iter()
            .zip(&self.above)
            .map(|(&(t, _), &a)| (t, (a + self.misses) as f64 / total))
            .collect()
    }

    pub fn support(&self) -> impl Iterator<Item = f64> + '_ {
        self.support.iter().map(|p| p.0)
    }

    /// CCDF of the union of two disjoint sample sets.
    pub fn merge(&self, other: &Ccdf) -> Ccdf {
        Self::from_weighted(
            self.support.iter().chain(&other.support).copied(),
            self.misses + other.misses,
        )
        .expect("both inputs are non-empty")
    }
}

/// Outage probability at a latency budget: the survival function evaluated
/// right-continuously at `budget_ms`.
pub fn outage_at(ccdf: &Ccdf, budget_ms: f64) -> f64 {
    ccdf.survival_at(budget_ms)
}

/// One packet-loss-rate estimate at a given load.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlrPoint {
    pub load_g: f64,
    pub trials: u64,
    pub losses: u64,
    pub plr: f64,
    pub ci: ConfInterval,
}

impl PlrPoint {
    pub fn from_counts(load_g: f64, losses: u64, trials: u64) -> Self {
        let trials_nz = trials.max(1);
        Self {
            load_g,
            trials,
            losses,
            plr: losses as f64 / trials_nz as f64,
            ci: cp_interval(losses.min(trials_nz), trials_nz, DEFAULT_CONFIDENCE),
        }
    }

    /// A point with a degenerate interval, for deterministic runners.
    pub fn exact(load_g: f64, plr: f64) -> Self {
        Self {
            load_g,
            trials: 0,
            losses: 0,
            plr,
            ci: ConfInterval {
                lower: plr,
                upper: plr,
                confidence: 1.0,
            },
        }
    }

    pub fn certified_below(&self, target: f64) -> bool {
        self.ci.upper < target
    }

    pub fn certified_above(&self, target: f64) -> bool {
        self.ci.lower > target
    }
}

/// Loss-rate-versus-load points.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlrCurve {
    pub points: Vec<PlrPoint>,
}

/// Result of [`supported_load`].
#[derive(Debug, Clone, PartialEq)]
pub struct SupportedLoad {
    /// Largest load whose PLR interval lies entirely below the target.
    pub load: f64,
    /// Smallest load whose PLR interval lies entirely above the target.
    pub upper_load: f64,
    pub below: PlrPoint,
    pub above: PlrPoint,
    /// False when refinement stopped at a point whose interval straddled the
    /// target before reaching the requested tolerance.
    pub resolved: bool,
    pub evaluations: Vec<PlrPoint>,
}

/// Finds the largest load meeting `target_plr` by bisection over `bracket`.
///
/// Both bracket ends must be certified by their confidence intervals: the
/// lower end strictly below the target, the upper end strictly above.
/// Refinement continues while the bracket is wider than `rel_tol` times the
/// current lower end.
pub fn supported_load<F>(mut runner: F, target_plr: f64, rel_tol: f64, bracket: (f64, f64)) -> Result<SupportedLoad>
where
    F: FnMut(f64) -> PlrPoint,
{
    let (mut lo, mut hi) = bracket;
    assert!(lo < hi && rel_tol > 0.0);
    let mut evaluations = Vec::new();
    let mut below = runner(lo);
    evaluations.push(below);
    let mut above = runner(hi);
    evaluations.push(above);
    if !below.certified_below(target_plr) || !above.certified_above(target_plr) {
        return Err(Error::LoadNotFound {
            lo,
            hi,
            plr_lo: below.plr,
            plr_hi: above.plr,
        });
    }

    let mut resolved = true;
    while hi - lo > rel_tol * lo.max(f64::MIN_POSITIVE) {
        let mid = 0.5 * (lo + hi);
        let p = runner(mid);
        evaluations.push(p);
        if p.certified_below(target_plr) {
            lo = mid;
            below = p;
        } else if p.certified_above(target_plr) {
            hi = mid;
            above = p;
        } else {
            resolved = false;
            break;
        }
    }
    Ok(SupportedLoad {
        load: lo,
        upper_load: hi,
        below,
        above,
        resolved,
        evaluations,
    })
}
