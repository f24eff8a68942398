use crate::error::{config_err, Error, Result};

/// Open-loop fractional power control with a per-attempt boost.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerControlConfig {
    pub p_max_dbm: f64,
    /// Target receive power per resource block.
    pub p0_dbm: f64,
    /// Fractional path-loss compensation factor in [0, 1].
    pub alpha: f64,
    /// Boost g(k) for attempt k = 1, 2, ... Attempts past the end of the list
    /// hold the last step; an empty list means no boost.
    pub boost_steps_db: Vec<f64>,
}

impl Default for PowerControlConfig {
    fn default() -> Self {
        Self {
            p_max_dbm: 23.0,
            p0_dbm: -90.0,
            alpha: 1.0,
            boost_steps_db: vec![0.0],
        }
    }
}

impl PowerControlConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(config_err(format!("alpha = {} must lie in [0, 1]", self.alpha)));
        }
        if self.boost_steps_db.windows(2).any(|w| w[1] < w[0]) {
            return Err(config_err("boost_steps_db must be non-decreasing"));
        }
        Ok(())
    }

    pub fn boost_db(&self, attempt_k: u32) -> f64 {
        let idx = (attempt_k.max(1) - 1) as usize;
        self.boost_steps_db
            .get(idx)
            .or_else(|| self.boost_steps_db.last())
            .copied()
            .unwrap_or(0.0)
    }
}

/// `P = min(P_max, P0 + 10 log10(M) + alpha * PL + g(k))` in dBm.
pub fn tx_power_dbm(pc: &PowerControlConfig, m_rb: u32, pl_db: f64, attempt_k: u32) -> Result<f64> {
    if m_rb == 0 {
        return Err(Error::Domain("m_rb must be at least 1".into()));
    }
    if attempt_k == 0 {
        return Err(Error::Domain("attempts are numbered from 1".into()));
    }
    let open_loop = pc.p0_dbm + 10.0 * (m_rb as f64).log10() + pc.alpha * pl_db + pc.boost_db(attempt_k);
    Ok(open_loop.min(pc.p_max_dbm))
}
