//! NR numerology and the integer time base used by the engines.
//!
//! All schedules are kept in whole mini-slots. Latencies are counted in OFDM
//! symbols so that sub-mini-slot arrival offsets stay exact; with
//! [`Alignment::Immediate`] every latency is a whole number of mini-slots.

use crate::error::{config_err, Result};

/// Subcarrier spacings defined for NR, in kHz.
pub const VALID_SCS_KHZ: [u32; 5] = [15, 30, 60, 120, 240];

/// OFDM symbols per slot with normal cyclic prefix.
pub const SYMBOLS_PER_SLOT: u32 = 14;

/// How a packet arriving between mini-slot boundaries waits for its first
/// transmission opportunity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Alignment {
    /// The packet arrives exactly on a boundary and transmits at once.
    #[default]
    Immediate,
    /// The packet arrives on a uniformly chosen symbol boundary inside the
    /// previous mini-slot and waits for the next mini-slot to start.
    NextBoundary,
}

impl std::str::FromStr for Alignment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "immediate" => Ok(Self::Immediate),
            "next_boundary" | "next-boundary" => Ok(Self::NextBoundary),
            other => Err(format!("unknown alignment '{other}' (immediate, next_boundary)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingConfig {
    pub scs_khz: u32,
    pub symbols_per_minislot: u32,
    /// UE processing between receiving a NACK and retransmitting.
    pub ue_proc_minislots: u32,
    pub bs_proc_minislots: u32,
    pub feedback_minislots: u32,
    pub alignment: Alignment,
}

impl Default for TimingConfig {
    fn default() -> Self {
        Self {
            scs_khz: 60,
            symbols_per_minislot: 2,
            ue_proc_minislots: 1,
            bs_proc_minislots: 1,
            feedback_minislots: 1,
            alignment: Alignment::Immediate,
        }
    }
}

impl TimingConfig {
    pub fn validate(&self) -> Result<()> {
        check_numerology(self.scs_khz, self.symbols_per_minislot)
    }

    pub fn minislot_ms(&self) -> f64 {
        self.symbols_per_minislot as f64 * symbol_duration_ms(self.scs_khz)
    }

    pub fn symbol_ms(&self) -> f64 {
        symbol_duration_ms(self.scs_khz)
    }

    /// Mini-slots from the start of one reactive attempt to the start of the
    /// next: transmission, BS processing, feedback and UE processing.
    pub fn harq_rtt_minislots(&self) -> u64 {
        1 + self.bs_proc_minislots as u64 + self.feedback_minislots as u64 + self.ue_proc_minislots as u64
    }

    /// Converts a latency counted in OFDM symbols to milliseconds.
    pub fn symbols_to_ms(&self, symbols: u64) -> f64 {
        symbols as f64 * self.symbol_ms()
    }

    pub fn minislots_to_symbols(&self, minislots: u64) -> u64 {
        minislots * self.symbols_per_minislot as u64
    }
}

fn check_numerology(scs_khz: u32, symbols: u32) -> Result<()> {
    let mut problems = Vec::new();
    if !VALID_SCS_KHZ.contains(&scs_khz) {
        problems.push(format!("scs_khz = {scs_khz} is not one of {VALID_SCS_KHZ:?}"));
    }
    if !(1..=SYMBOLS_PER_SLOT).contains(&symbols) {
        problems.push(format!("symbols = {symbols} is outside 1..={SYMBOLS_PER_SLOT}"));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(config_err(problems.join("; ")))
    }
}

fn symbol_duration_ms(scs_khz: u32) -> f64 {
    1.0 / (SYMBOLS_PER_SLOT as f64 * (scs_khz as f64 / 15.0))
}

/// Duration of a transmission of `symbols` OFDM symbols at the given
/// subcarrier spacing, in milliseconds.
///
/// A 15 kHz slot of 14 symbols lasts 1 ms and the symbol duration scales
/// inversely with the spacing. A full slot (14 symbols) is accepted here even
/// though mini-slots are limited to 13 symbols.
///
/// ```
/// use gfra_core::timing::minislot_duration_ms;
/// let d = minislot_duration_ms(60, 2).unwrap();
/// assert!((d - 0.035714).abs() < 1e-6);
/// ```
pub fn minislot_duration_ms(scs_khz: u32, symbols: u32) -> Result<f64> {
    check_numerology(scs_khz, symbols)?;
    Ok(symbols as f64 * symbol_duration_ms(scs_khz))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn durations() {
        assert_relative_eq!(minislot_duration_ms(60, 2).unwrap(), 2.0 / 56.0);
        assert!((minislot_duration_ms(60, 2).unwrap() - 0.035714).abs() < 1e-6);
        assert_relative_eq!(minislot_duration_ms(15, 14).unwrap(), 1.0);
        assert_relative_eq!(minislot_duration_ms(120, 7).unwrap(), 0.0625);
    }

    #[test]
    fn rejects_bad_numerology() {
        assert!(minislot_duration_ms(45, 2).is_err());
        assert!(minislot_duration_ms(60, 0).is_err());
        assert!(minislot_duration_ms(60, 15).is_err());
        let err = minislot_duration_ms(45, 0).unwrap_err().to_string();
        assert!(err.contains("scs_khz") && err.contains("symbols"));
    }

    #[test]
    fn linear_in_symbols_inverse_in_scs() {
        for &scs in &VALID_SCS_KHZ {
            let one = minislot_duration_ms(scs, 1).unwrap();
            for sym in 1..=SYMBOLS_PER_SLOT {
                assert_relative_eq!(minislot_duration_ms(scs, sym).unwrap(), sym as f64 * one);
            }
            assert_relative_eq!(one * scs as f64, minislot_duration_ms(15, 1).unwrap() * 15.0);
        }
    }

    #[test]
    fn default_rtt_is_four_minislots() {
        assert_eq!(TimingConfig::default().harq_rtt_minislots(), 4);
    }
}
