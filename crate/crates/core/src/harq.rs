//! Grant-based baseline and the grant-free HARQ schemes as discrete-time
//! schedules over mini-slots.
//!
//! Every transmission occupies one mini-slot. After an attempt ends the BS
//! spends `bs_proc` mini-slots decoding and `feedback` mini-slots sending
//! ACK/NACK; the UE needs `ue_proc` more before it can transmit again. One-way
//! latency runs from packet arrival to the end of BS processing of the first
//! successful attempt.
//!
//! Attempts of one packet share a single uniform draw `U`: attempt `j`
//! delivers when the probability of not having decoded after attempts
//! `1..=j` is at most `U`. That probability never increases with `j`, so
//! combining later attempts can only help.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{config_err, Result};
use crate::phy::{db_to_linear, per_normal_approx, tx_power_dbm, FblCodeSpec, LinkBudget, PowerControlConfig};
use crate::rng::{replicate, RngPlan, Stream};
use crate::stats::{cp_interval, Ccdf, ConfInterval, DEFAULT_CONFIDENCE};
use crate::timing::{Alignment, TimingConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarqScheme {
    /// Reactive HARQ after a scheduling request/grant exchange.
    GrantBased { scheduling_delay_minislots: u32 },
    /// Retransmit after each NACK.
    Reactive,
    /// `k` back-to-back transmissions, feedback only after the last.
    KRepetition { k: u32 },
    /// Back-to-back transmissions stopped by the first ACK that reaches the UE.
    Proactive { max_tx: u32 },
    /// Reactive with the power-control boost step applied per attempt.
    ReactiveBoost,
}

impl HarqScheme {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::KRepetition { k: 0 } => Err(config_err("K-repetition needs K >= 1")),
            Self::Proactive { max_tx: 0 } => Err(config_err("proactive needs max_tx >= 1")),
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Self::GrantBased { .. } => "grant_based".into(),
            Self::Reactive => "reactive".into(),
            Self::KRepetition { k } => format!("krep{k}"),
            Self::Proactive { max_tx } => format!("proactive{max_tx}"),
            Self::ReactiveBoost => "reactive_boost".into(),
        }
    }

    fn boosts(&self) -> bool {
        matches!(self, Self::ReactiveBoost)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Combining {
    None,
    #[default]
    Chase,
}

impl std::str::FromStr for Combining {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Self::None),
            "chase" | "cc" => Ok(Self::Chase),
            other => Err(format!("unknown combining '{other}' (none, chase)")),
        }
    }
}

/// Per-attempt decoding derived from the link budget and finite-blocklength
/// error model.
#[derive(Debug, Clone, PartialEq)]
pub struct FblAttemptModel {
    pub code: FblCodeSpec,
    /// SNR at the first-attempt transmit power.
    pub link: LinkBudget,
    pub power: PowerControlConfig,
    pub path_loss_db: f64,
    pub m_rb: u32,
    pub combining: Combining,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AttemptModel {
    /// Success probability of each attempt given all earlier ones failed,
    /// attempts independent. Attempts past the end hold the last value.
    Fixed(Vec<f64>),
    Fbl(FblAttemptModel),
}

impl AttemptModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Fixed(p) => {
                if p.is_empty() || p.iter().any(|x| !(0.0..=1.0).contains(x)) {
                    return Err(config_err("success probabilities must be a non-empty list in [0, 1]"));
                }
                Ok(())
            }
            Self::Fbl(m) => {
                m.power.validate()?;
                if m.m_rb == 0 {
                    return Err(config_err("m_rb must be at least 1"));
                }
                Ok(())
            }
        }
    }
}

/// Error probability after Chase-combining attempts received at the given
/// SINRs (energy adds up before one decoding pass).
pub fn chase_combined_eps(attempt_sinrs: &[f64], code: FblCodeSpec) -> f64 {
    debug_assert!(!attempt_sinrs.is_empty());
    per_normal_approx(code, attempt_sinrs.iter().sum())
}

/// One planned transmission, in mini-slots from the first opportunity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduledAttempt {
    pub start: u64,
    /// When ACK/NACK for this attempt reaches the UE; `None` for repetitions
    /// that get no individual feedback.
    pub feedback_ready: Option<u64>,
}

/// Planned attempt times for `scheme`, at most `max_attempts` of them.
pub fn attempt_schedule(scheme: HarqScheme, timing: &TimingConfig, max_attempts: u32) -> Vec<ScheduledAttempt> {
    let fb_delay = 1 + timing.bs_proc_minislots as u64 + timing.feedback_minislots as u64;
    let rtt = timing.harq_rtt_minislots();
    let reactive = |offset: u64, n: u32| {
        (0..n as u64)
            .map(|j| {
                let start = offset + j * rtt;
                ScheduledAttempt {
                    start,
                    feedback_ready: Some(start + fb_delay),
                }
            })
            .collect()
    };
    match scheme {
        HarqScheme::Reactive | HarqScheme::ReactiveBoost => reactive(0, max_attempts),
        HarqScheme::GrantBased {
            scheduling_delay_minislots,
        } => reactive(scheduling_delay_minislots as u64, max_attempts),
        HarqScheme::KRepetition { k } => {
            let n = k.min(max_attempts) as u64;
            (0..n)
                .map(|j| ScheduledAttempt {
                    start: j,
                    feedback_ready: (j + 1 == n).then_some(j + fb_delay),
                })
                .collect()
        }
        HarqScheme::Proactive { max_tx } => (0..max_tx.min(max_attempts) as u64)
            .map(|j| ScheduledAttempt {
                start: j,
                feedback_ready: Some(j + fb_delay),
            })
            .collect(),
    }
}

/// The trace of one packet through a scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct HarqTimeline {
    /// Arrival-to-first-opportunity wait, in OFDM symbols.
    pub wait_symbols: u64,
    pub attempt_starts: Vec<u64>,
    pub feedback_times: Vec<Option<u64>>,
    /// Latency in OFDM symbols, `None` when every attempt failed.
    pub delivery_symbols: Option<u64>,
    pub attempts_used: u32,
}

struct PacketResult {
    latency_symbols: Option<u64>,
    attempts_used: u32,
}

pub(crate) fn draw_wait<R: Rng + ?Sized>(timing: &TimingConfig, rng: &mut R) -> u64 {
    match timing.alignment {
        Alignment::Immediate => 0,
        Alignment::NextBoundary => rng.random_range(1..=timing.symbols_per_minislot as u64),
    }
}

/// Walks the schedule for one packet. Draw order: wait, U, then one fading
/// gain per attempt in order.
fn run_packet<R: Rng + ?Sized>(
    scheme: HarqScheme,
    schedule: &[ScheduledAttempt],
    model: &AttemptModel,
    timing: &TimingConfig,
    rng: &mut R,
) -> PacketResult {
    let wait = draw_wait(timing, rng);
    let u: f64 = rng.random();
    let mut cum_fail = 1.0;
    let mut sinr_sum = 0.0;
    for (j, att) in schedule.iter().enumerate() {
        let k = j as u32 + 1;
        cum_fail = match model {
            AttemptModel::Fixed(p) => {
                let pj = p.get(j).or(p.last()).copied().unwrap_or(0.0);
                cum_fail * (1.0 - pj)
            }
            AttemptModel::Fbl(m) => {
                let boost_db = if scheme.boosts() {
                    let first = tx_power_dbm(&m.power, m.m_rb, m.path_loss_db, 1).unwrap_or(0.0);
                    tx_power_dbm(&m.power, m.m_rb, m.path_loss_db, k).unwrap_or(0.0) - first
                } else {
                    0.0
                };
                let s = m.link.avg_snr() * db_to_linear(boost_db) * m.link.gain(rng);
                match m.combining {
                    Combining::None => cum_fail * per_normal_approx(m.code, s),
                    Combining::Chase => {
                        sinr_sum += s;
                        per_normal_approx(m.code, sinr_sum)
                    }
                }
            }
        };
        if cum_fail <= u {
            let end_of_processing = att.start + 1 + timing.bs_proc_minislots as u64;
            let used = match scheme {
                HarqScheme::KRepetition { .. } => schedule.len() as u32,
                HarqScheme::Proactive { .. } => {
                    // attempts starting before the UE has processed the ACK still go out
                    let stop = att.feedback_ready.unwrap_or(u64::MAX) + timing.ue_proc_minislots as u64;
                    schedule.iter().filter(|a| a.start < stop).count() as u32
                }
                _ => k,
            };
            return PacketResult {
                latency_symbols: Some(wait + timing.minislots_to_symbols(end_of_processing)),
                attempts_used: used,
            };
        }
    }
    PacketResult {
        latency_symbols: None,
        attempts_used: schedule.len() as u32,
    }
}

/// Traces a single packet, mainly for inspection and tests.
pub fn trace_packet(
    scheme: HarqScheme,
    model: &AttemptModel,
    timing: &TimingConfig,
    max_attempts: u32,
    rng: &mut Stream,
) -> HarqTimeline {
    let schedule = attempt_schedule(scheme, timing, max_attempts);
    let mut probe = rng.clone();
    let wait_symbols = draw_wait(timing, &mut probe);
    let r = run_packet(scheme, &schedule, model, timing, rng);
    HarqTimeline {
        wait_symbols,
        attempt_starts: schedule.iter().map(|a| a.start).collect(),
        feedback_times: schedule.iter().map(|a| a.feedback_ready).collect(),
        delivery_symbols: r.latency_symbols,
        attempts_used: r.attempts_used,
    }
}

/// Aggregated latency statistics of one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct HarqOutcome {
    pub label: String,
    pub symbol_ms: f64,
    /// Latency in OFDM symbols -> packet count, delivered packets only.
    pub histogram: BTreeMap<u64, u64>,
    pub misses: u64,
    pub packets: u64,
    /// Transmissions actually sent, summed over packets.
    pub transmissions: u64,
}

impl HarqOutcome {
    pub fn latency_ms(&self, symbols: u64) -> f64 {
        symbols as f64 * self.symbol_ms
    }

    pub fn ccdf(&self) -> Ccdf {
        Ccdf::from_weighted(
            self.histogram.iter().map(|(&s, &c)| (self.latency_ms(s), c)),
            self.misses,
        )
        .expect("at least one packet simulated")
    }

    /// Fraction of packets later than `budget_ms` (or lost) with its
    /// Clopper–Pearson interval.
    pub fn outage(&self, budget_ms: f64) -> (f64, ConfInterval) {
        let late = self.ccdf().exceed_count(budget_ms);
        (
            late as f64 / self.packets as f64,
            cp_interval(late, self.packets, DEFAULT_CONFIDENCE),
        )
    }

    pub fn mean_transmissions(&self) -> f64 {
        self.transmissions as f64 / self.packets as f64
    }
}

#[derive(Default)]
struct Tally {
    histogram: BTreeMap<u64, u64>,
    misses: u64,
    packets: u64,
    transmissions: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
        self.misses += other.misses;
        self.packets += other.packets;
        self.transmissions += other.transmissions;
        self
    }
}

/// Simulates `n_packets` independent packets; packet `i` uses stream `i`.
///
/// Packets still undelivered after `max_attempts`, or delivered later than
/// `deadline_ms`, count as misses.
pub fn simulate_harq(
    scheme: HarqScheme,
    model: &AttemptModel,
    timing: &TimingConfig,
    max_attempts: u32,
    n_packets: u64,
    deadline_ms: Option<f64>,
    plan: RngPlan,
) -> Result<HarqOutcome> {
    scheme.validate()?;
    model.validate()?;
    timing.validate()?;
    if n_packets == 0 || max_attempts == 0 {
        return Err(config_err("need at least one packet and one attempt"));
    }
    let schedule = attempt_schedule(scheme, timing, max_attempts);
    let symbol_ms = timing.symbol_ms();
    let tally = replicate(
        plan,
        n_packets,
        Tally::default,
        |t, _, rng| {
            let r = run_packet(scheme, &schedule, model, timing, rng);
            t.packets += 1;
            t.transmissions += r.attempts_used as u64;
            match r.latency_symbols {
                Some(l) if deadline_ms.is_none_or(|d| l as f64 * symbol_ms <= d + 1e-12) => {
                    *t.histogram.entry(l).or_default() += 1;
                }
                _ => t.misses += 1,
            }
        },
        Tally::merge,
    );
    Ok(HarqOutcome {
        label: scheme.label(),
        symbol_ms,
        histogram: tally.histogram,
        misses: tally.misses,
        packets: tally.packets,
        transmissions: tally.transmissions,
    })
}
