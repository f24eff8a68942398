//! Dedicated first transmission plus blind retransmissions over a small
//! shared pool, resolved with successive interference cancellation.
//!
//! Each of the `N` users owns a dedicated resource for its initial attempt
//! (round 0). In rounds `1..d` it sends a replica on one of `R` shared
//! resources, one mini-slot after the other and without waiting for
//! feedback. After every round the receiver cancels the replicas of users it
//! already decoded and retries the rest until nothing changes.
//!
//! Every user has one uniform draw `U` per cycle and is decoded once its
//! error probability, given the replicas received so far and the current
//! cancellations, is at most `U`.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{config_err, Result};
use crate::harq::{draw_wait, Combining};
use crate::phy::{db_to_linear, per_normal_approx, required_blocklength, FblCodeSpec, LinkBudget};
use crate::rng::{replicate, RngPlan};
use crate::stats::{cp_interval, ConfInterval, DEFAULT_CONFIDENCE};
use crate::timing::TimingConfig;

/// When a shared replica can be decoded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SharedRule {
    /// A replica is usable only when every other replica on its resource has
    /// been cancelled; it then fails with probability `eps_shared`.
    CollisionChannel { eps_shared: f64 },
    /// Every replica, the dedicated one included, sees fading and the
    /// uncancelled interference on its resource, and errors follow the
    /// finite-blocklength model. `initial_bler` is not used.
    SinrBased { code: FblCodeSpec, link: LinkBudget },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RetxSelection {
    /// Independent uniform pick per user and round.
    #[default]
    Uniform,
    /// User `u` uses resource `(u + r - 1) mod R` in round `r`.
    FixedSequence,
}

impl std::str::FromStr for RetxSelection {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" | "uniform_random" | "random" => Ok(Self::Uniform),
            "fixed_sequence" | "sequence" => Ok(Self::FixedSequence),
            other => Err(format!(
                "unknown retx selection '{other}' (uniform_random, fixed_sequence)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum HybridArrival {
    /// Every user has a packet in every cycle.
    #[default]
    FullBuffer,
    /// Poisson arrivals per user; a user is active when at least one packet
    /// arrived during the cycle.
    Poisson { rate_per_cycle: f64 },
}

impl HybridArrival {
    pub fn activity(&self) -> f64 {
        match *self {
            Self::FullBuffer => 1.0,
            Self::Poisson { rate_per_cycle } => -(-rate_per_cycle).exp_m1(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridConfig {
    pub n_users: u32,
    pub pool_size: u32,
    /// Total attempts per packet, the dedicated one included.
    pub attempts: u32,
    pub initial_bler: f64,
    pub shared_rule: SharedRule,
    /// Retransmit whatever the outcome of earlier rounds. When false, a user
    /// stops as soon as it is decoded (the receiver outcome is assumed known
    /// to the user without delay).
    pub blind: bool,
    pub combining: Combining,
    pub retx_selection: RetxSelection,
    pub arrival: HybridArrival,
}

impl Default for HybridConfig {
    fn default() -> Self {
        Self {
            n_users: 10,
            pool_size: 1,
            attempts: 2,
            initial_bler: 0.1,
            shared_rule: SharedRule::CollisionChannel { eps_shared: 0.0 },
            blind: true,
            combining: Combining::Chase,
            retx_selection: RetxSelection::Uniform,
            arrival: HybridArrival::FullBuffer,
        }
    }
}

impl HybridConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.n_users == 0 {
            problems.push("n_users must be >= 1".to_string());
        }
        if self.attempts == 0 {
            problems.push("attempts must be >= 1".to_string());
        }
        if self.pool_size == 0 && self.attempts > 1 {
            problems.push("pool_size = 0 is only allowed with attempts = 1".to_string());
        }
        if !(0.0..=1.0).contains(&self.initial_bler) {
            problems.push(format!("initial_bler = {} must lie in [0, 1]", self.initial_bler));
        }
        if let SharedRule::CollisionChannel { eps_shared } = self.shared_rule {
            if !(0.0..=1.0).contains(&eps_shared) {
                problems.push(format!("eps_shared = {eps_shared} must lie in [0, 1]"));
            }
        }
        if let HybridArrival::Poisson { rate_per_cycle } = self.arrival {
            if !(rate_per_cycle >= 0.0 && rate_per_cycle.is_finite()) {
                problems.push(format!("arrival rate {rate_per_cycle} must be finite and >= 0"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(config_err(problems.join("; ")))
        }
    }
}

/// Random inputs of one cycle. Shared-round vectors are indexed
/// `(round - 1) * N + user`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HybridDraws {
    pub active: Vec<bool>,
    /// Arrival-to-first-opportunity wait in OFDM symbols.
    pub wait_symbols: Vec<u64>,
    pub uniforms: Vec<f64>,
    pub choices: Vec<u32>,
    /// Dedicated-resource gain per user (SINR rule only, else empty).
    pub dedicated_gains: Vec<f64>,
    /// Shared-replica gain per user and round (SINR rule only, else empty).
    pub shared_gains: Vec<f64>,
}

impl HybridDraws {
    /// Draw order per user: activity, wait, `U`; then the pool choices round
    /// by round; then the gains.
    pub fn draw<R: Rng + ?Sized>(cfg: &HybridConfig, timing: &TimingConfig, rng: &mut R) -> Self {
        let n = cfg.n_users as usize;
        let rounds = cfg.attempts.saturating_sub(1) as usize;
        let p_active = cfg.arrival.activity();
        let mut d = HybridDraws::default();
        for _ in 0..n {
            d.active.push(p_active >= 1.0 || rng.random::<f64>() < p_active);
            d.wait_symbols.push(draw_wait(timing, rng));
            d.uniforms.push(rng.random());
        }
        for r in 0..rounds {
            for u in 0..n {
                let c = match cfg.retx_selection {
                    RetxSelection::Uniform => rng.random_range(0..cfg.pool_size),
                    RetxSelection::FixedSequence => ((u + r) % cfg.pool_size as usize) as u32,
                };
                d.choices.push(c);
            }
        }
        if let SharedRule::SinrBased { link, .. } = cfg.shared_rule {
            d.dedicated_gains = (0..n).map(|_| link.gain(rng)).collect();
            d.shared_gains = (0..n * rounds).map(|_| link.gain(rng)).collect();
        }
        d
    }
}

/// What happened to one user in one cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UserOutcome {
    pub active: bool,
    /// Round (0 = dedicated) after which the user was decoded.
    pub delivered_round: Option<u32>,
    pub latency_symbols: Option<u64>,
    /// Transmissions the user sent.
    pub resources_consumed: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridFrame {
    pub users: Vec<UserOutcome>,
    /// SIC passes summed over rounds.
    pub sic_iterations: u32,
}

/// Pool occupancy and decoding progress of one cycle.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PoolState {
    /// `occupants[(round - 1) * R + resource]`: users transmitting there.
    pub occupants: Vec<Vec<usize>>,
    pub decoded: Vec<bool>,
    /// Shared rounds received so far.
    pub rounds_received: usize,
}

struct Frame<'a> {
    cfg: &'a HybridConfig,
    draws: &'a HybridDraws,
    pool: PoolState,
    /// (round, resource) of each replica a user sent, per user.
    sent: Vec<Vec<(usize, usize)>>,
}

impl Frame<'_> {
    fn is_clean(&self, user: usize, slot: usize) -> bool {
        self.pool.occupants[slot]
            .iter()
            .all(|&v| v == user || self.pool.decoded[v])
    }

    fn replica_sinr(&self, user: usize, round: usize, slot: usize, snr: f64) -> f64 {
        let n = self.cfg.n_users as usize;
        let gain = |v: usize| self.draws.shared_gains[(round - 1) * n + v];
        let interference: f64 = self.pool.occupants[slot]
            .iter()
            .filter(|&&v| v != user && !self.pool.decoded[v])
            .map(|&v| gain(v))
            .sum();
        snr * gain(user) / (1.0 + snr * interference)
    }

    /// Error probability of `user` given the replicas received so far.
    fn eps(&self, user: usize) -> f64 {
        let r_pool = self.cfg.pool_size as usize;
        let received = self.sent[user]
            .iter()
            .filter(|&&(round, _)| round <= self.pool.rounds_received)
            .map(|&(round, res)| (round, (round - 1) * r_pool + res));
        match self.cfg.shared_rule {
            SharedRule::CollisionChannel { eps_shared } => {
                // combining or not, each clean replica is one more independent chance
                let clean = received.filter(|&(_, slot)| self.is_clean(user, slot)).count();
                self.cfg.initial_bler * eps_shared.powi(clean as i32)
            }
            SharedRule::SinrBased { code, link } => {
                let snr = link.avg_snr();
                let dedicated = snr * self.draws.dedicated_gains[user];
                let sinrs = std::iter::once(dedicated)
                    .chain(received.map(|(round, slot)| self.replica_sinr(user, round, slot, snr)));
                match self.cfg.combining {
                    Combining::Chase => per_normal_approx(code, sinrs.sum()),
                    Combining::None => sinrs.map(|s| per_normal_approx(code, s)).product(),
                }
            }
        }
    }
}

/// Runs one cycle on explicit draws.
pub fn simulate_hybrid_frame_with(cfg: &HybridConfig, timing: &TimingConfig, draws: &HybridDraws) -> HybridFrame {
    let n = cfg.n_users as usize;
    let r_pool = cfg.pool_size as usize;
    let rounds = cfg.attempts as usize - 1;
    let mut f = Frame {
        cfg,
        draws,
        pool: PoolState {
            occupants: vec![Vec::new(); rounds * r_pool],
            decoded: vec![false; n],
            rounds_received: 0,
        },
        sent: vec![Vec::new(); n],
    };
    let mut users: Vec<UserOutcome> = (0..n)
        .map(|u| UserOutcome {
            active: draws.active[u],
            delivered_round: None,
            latency_symbols: None,
            resources_consumed: draws.active[u] as u32,
        })
        .collect();
    let mut iterations = 0;
    for round in 0..=rounds {
        if round > 0 {
            for u in 0..n {
                if users[u].active && (cfg.blind || !f.pool.decoded[u]) {
                    let res = draws.choices[(round - 1) * n + u] as usize;
                    f.pool.occupants[(round - 1) * r_pool + res].push(u);
                    f.sent[u].push((round, res));
                    users[u].resources_consumed += 1;
                }
            }
        }
        f.pool.rounds_received = round;
        loop {
            iterations += 1;
            let newly: Vec<usize> = (0..n)
                .filter(|&u| users[u].active && !f.pool.decoded[u])
                .filter(|&u| draws.uniforms[u] >= f.eps(u))
                .collect();
            if newly.is_empty() {
                break;
            }
            for u in newly {
                f.pool.decoded[u] = true;
                users[u].delivered_round = Some(round as u32);
                let end_of_processing = round as u64 + 1 + timing.bs_proc_minislots as u64;
                users[u].latency_symbols = Some(draws.wait_symbols[u] + timing.minislots_to_symbols(end_of_processing));
            }
        }
    }
    HybridFrame {
        users,
        sic_iterations: iterations,
    }
}

pub fn simulate_hybrid_frame<R: Rng + ?Sized>(cfg: &HybridConfig, timing: &TimingConfig, rng: &mut R) -> HybridFrame {
    let draws = HybridDraws::draw(cfg, timing, rng);
    simulate_hybrid_frame_with(cfg, timing, &draws)
}

/// Aggregate of [`hybrid_outage`].
#[derive(Debug, Clone, PartialEq)]
pub struct HybridOutcome {
    pub frames: u64,
    pub packets: u64,
    pub losses: u64,
    pub symbol_ms: f64,
    /// Latency in OFDM symbols -> delivered packets.
    pub histogram: BTreeMap<u64, u64>,
    /// Deliveries per round, index 0 = dedicated resource.
    pub round_deliveries: Vec<u64>,
    pub transmissions: u64,
    pub sic_iterations: u64,
}

impl HybridOutcome {
    pub fn plr(&self) -> f64 {
        if self.packets == 0 {
            0.0
        } else {
            self.losses as f64 / self.packets as f64
        }
    }

    pub fn ci(&self) -> ConfInterval {
        cp_interval(self.losses, self.packets.max(1), DEFAULT_CONFIDENCE)
    }

    /// Mean latency of delivered packets.
    pub fn mean_latency_ms(&self) -> f64 {
        let (sum, count) = self
            .histogram
            .iter()
            .fold((0u64, 0u64), |(s, c), (&l, &n)| (s + l * n, c + n));
        if count == 0 {
            f64::NAN
        } else {
            sum as f64 / count as f64 * self.symbol_ms
        }
    }

    /// Smallest latency not exceeded by a fraction `q` of the delivered
    /// packets.
    pub fn latency_quantile_ms(&self, q: f64) -> f64 {
        let delivered: u64 = self.histogram.values().sum();
        if delivered == 0 {
            return f64::NAN;
        }
        let need = (q * delivered as f64).ceil().max(1.0) as u64;
        let mut seen = 0;
        for (&l, &n) in &self.histogram {
            seen += n;
            if seen >= need {
                return l as f64 * self.symbol_ms;
            }
        }
        unreachable!("histogram total covers every quantile")
    }
}

struct Tally {
    packets: u64,
    losses: u64,
    histogram: BTreeMap<u64, u64>,
    rounds: Vec<u64>,
    transmissions: u64,
    iterations: u64,
}

/// Packet loss over `n_frames` cycles; cycle `i` uses stream `i`.
pub fn hybrid_outage(cfg: &HybridConfig, timing: &TimingConfig, n_frames: u64, plan: RngPlan) -> Result<HybridOutcome> {
    cfg.validate()?;
    timing.validate()?;
    if n_frames == 0 {
        return Err(config_err("need at least one frame"));
    }
    let rounds = cfg.attempts as usize;
    let tally = replicate(
        plan,
        n_frames,
        || Tally {
            packets: 0,
            losses: 0,
            histogram: BTreeMap::new(),
            rounds: vec![0; rounds],
            transmissions: 0,
            iterations: 0,
        },
        |t, _, rng| {
            let frame = simulate_hybrid_frame(cfg, timing, rng);
            t.iterations += frame.sic_iterations as u64;
            for u in frame.users.iter().filter(|u| u.active) {
                t.packets += 1;
                t.transmissions += u.resources_consumed as u64;
                match (u.delivered_round, u.latency_symbols) {
                    (Some(r), Some(l)) => {
                        t.rounds[r as usize] += 1;
                        *t.histogram.entry(l).or_default() += 1;
                    }
                    _ => t.losses += 1,
                }
            }
        },
        |mut a, b| {
            a.packets += b.packets;
            a.losses += b.losses;
            for (k, v) in b.histogram {
                *a.histogram.entry(k).or_default() += v;
            }
            for (x, y) in a.rounds.iter_mut().zip(b.rounds) {
                *x += y;
            }
            a.transmissions += b.transmissions;
            a.iterations += b.iterations;
            a
        },
    );
    Ok(HybridOutcome {
        frames: n_frames,
        packets: tally.packets,
        losses: tally.losses,
        symbol_ms: timing.symbol_ms(),
        histogram: tally.histogram,
        round_deliveries: tally.rounds,
        transmissions: tally.transmissions,
        sic_iterations: tally.iterations,
    })
}

/// Link used to size every transmission for [`resource_efficiency`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FblSizing {
    pub k_bits: u32,
    pub snr_db: f64,
    /// End-to-end loss target of the single-shot reference.
    pub target_e2e: f64,
}

/// Resource elements provisioned per cycle for the whole group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResourceEfficiency {
    /// Blocklength of one single-shot transmission at `target_e2e`.
    pub n_single: u64,
    /// Blocklength of the dedicated attempt at `initial_bler`.
    pub n_initial: u64,
    /// Blocklength of one pool resource at `eps_shared` (0 without a pool).
    pub n_shared: u64,
    pub single_shot_re: u64,
    pub hybrid_re: u64,
    /// Expected REs of reactive HARQ with the same first attempt, where a
    /// retransmission is sent only after a NACK.
    pub reactive_re: f64,
    /// `hybrid_re / single_shot_re`.
    pub re_ratio: f64,
    pub single_shot_bits_per_re: f64,
    pub hybrid_bits_per_re: f64,
    pub reactive_bits_per_re: f64,
}

impl ResourceEfficiency {
    /// Relative bits-per-RE gain of the hybrid scheme over single shot.
    pub fn efficiency_gain(&self) -> f64 {
        self.hybrid_bits_per_re / self.single_shot_bits_per_re - 1.0
    }
}

/// Compares provisioning of the hybrid scheme with single-shot and reactive
/// transmission. `delivered_fraction` is the hybrid scheme's delivery ratio,
/// usually from [`hybrid_outage`].
///
/// The shared error rate must be positive (an error-free resource needs
/// infinite blocklength); only the collision-channel rule can be sized.
pub fn resource_efficiency(
    cfg: &HybridConfig,
    sizing: FblSizing,
    delivered_fraction: f64,
) -> Result<ResourceEfficiency> {
    cfg.validate()?;
    let SharedRule::CollisionChannel { eps_shared } = cfg.shared_rule else {
        return Err(config_err("resource sizing needs the collision-channel rule"));
    };
    if !(0.0..=1.0).contains(&delivered_fraction) {
        return Err(config_err(format!(
            "delivered fraction {delivered_fraction} must lie in [0, 1]"
        )));
    }
    let s = db_to_linear(sizing.snr_db);
    let k = sizing.k_bits;
    let n_users = cfg.n_users as u64;
    let retx_rounds = cfg.attempts as u64 - 1;
    let n_single = required_blocklength(k, sizing.target_e2e, s)?;
    let n_initial = required_blocklength(k, cfg.initial_bler, s)?;
    let n_shared = if retx_rounds == 0 || cfg.pool_size == 0 {
        0
    } else {
        required_blocklength(k, eps_shared, s)?
    };
    let single_shot_re = n_users * n_single;
    let hybrid_re = n_users * n_initial + cfg.pool_size as u64 * n_shared * retx_rounds;
    let expected_tx: f64 = (0..cfg.attempts).map(|j| cfg.initial_bler.powi(j as i32)).sum();
    let reactive_re = n_users as f64 * n_initial as f64 * expected_tx;
    let reactive_delivered = 1.0 - cfg.initial_bler.powi(cfg.attempts as i32);
    let bits = (n_users * k as u64) as f64;
    Ok(ResourceEfficiency {
        n_single,
        n_initial,
        n_shared,
        single_shot_re,
        hybrid_re,
        reactive_re,
        re_ratio: hybrid_re as f64 / single_shot_re as f64,
        single_shot_bits_per_re: bits * (1.0 - sizing.target_e2e) / single_shot_re as f64,
        hybrid_bits_per_re: bits * delivered_fraction / hybrid_re as f64,
        reactive_bits_per_re: bits * reactive_delivered / reactive_re,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_stream;

    fn draws_for(cfg: &HybridConfig, uniforms: Vec<f64>, choices: Vec<u32>) -> HybridDraws {
        let n = cfg.n_users as usize;
        HybridDraws {
            active: vec![true; n],
            wait_symbols: vec![0; n],
            uniforms,
            choices,
            ..HybridDraws::default()
        }
    }

    fn pair() -> HybridConfig {
        HybridConfig {
            n_users: 2,
            ..HybridConfig::default()
        }
    }

    #[test]
    fn perfect_dedicated_link_delivers_in_round_zero() {
        let cfg = HybridConfig {
            initial_bler: 0.0,
            ..HybridConfig::default()
        };
        let t = TimingConfig::default();
        let f = simulate_hybrid_frame(&cfg, &t, &mut derive_stream(1, 0));
        for u in &f.users {
            assert_eq!(u.delivered_round, Some(0));
            assert_eq!(u.latency_symbols, Some(t.minislots_to_symbols(2)));
        }
        let out = hybrid_outage(&cfg, &t, 1000, RngPlan::new(1)).unwrap();
        assert_eq!(out.losses, 0);
    }

    #[test]
    fn decoded_replica_frees_the_pool() {
        let cfg = pair();
        let t = TimingConfig::default();
        // initial bler 0.1: U = 0.5 decodes, U = 0.05 fails
        let f = simulate_hybrid_frame_with(&cfg, &t, &draws_for(&cfg, vec![0.5, 0.05], vec![0, 0]));
        assert_eq!(f.users[0].delivered_round, Some(0));
        assert_eq!(f.users[1].delivered_round, Some(1));
        let gap = f.users[1].latency_symbols.unwrap() - f.users[0].latency_symbols.unwrap();
        assert_eq!(gap, t.minislots_to_symbols(1));
        assert_eq!(f.users[1].resources_consumed, 2);
    }

    #[test]
    fn double_failure_collides() {
        let cfg = pair();
        let f = simulate_hybrid_frame_with(
            &cfg,
            &TimingConfig::default(),
            &draws_for(&cfg, vec![0.01, 0.05], vec![0, 0]),
        );
        assert!(f.users.iter().all(|u| u.delivered_round.is_none()));
    }

    #[test]
    fn non_blind_users_stop_after_success() {
        let cfg = HybridConfig { blind: false, ..pair() };
        let f = simulate_hybrid_frame_with(
            &cfg,
            &TimingConfig::default(),
            &draws_for(&cfg, vec![0.5, 0.05], vec![0, 0]),
        );
        assert_eq!(f.users[0].resources_consumed, 1);
        assert_eq!(f.users[1].delivered_round, Some(1));
    }

    #[test]
    fn fixed_sequence_spreads_users() {
        let cfg = HybridConfig {
            n_users: 3,
            pool_size: 3,
            attempts: 3,
            retx_selection: RetxSelection::FixedSequence,
            ..HybridConfig::default()
        };
        let d = HybridDraws::draw(&cfg, &TimingConfig::default(), &mut derive_stream(1, 0));
        assert_eq!(d.choices, vec![0, 1, 2, 1, 2, 0]);
    }

    #[test]
    fn single_attempt_allows_empty_pool() {
        let cfg = HybridConfig {
            pool_size: 0,
            attempts: 1,
            ..HybridConfig::default()
        };
        assert!(cfg.validate().is_ok());
        assert!(HybridConfig {
            pool_size: 0,
            ..HybridConfig::default()
        }
        .validate()
        .is_err());
        let out = hybrid_outage(&cfg, &TimingConfig::default(), 20_000, RngPlan::new(2)).unwrap();
        assert!(out.ci().contains(0.1));
    }

    #[test]
    fn degenerate_provisioning_is_single_shot() {
        let cfg = HybridConfig {
            pool_size: 0,
            attempts: 1,
            initial_bler: 1e-5,
            ..HybridConfig::default()
        };
        let sizing = FblSizing {
            k_bits: 256,
            snr_db: 9.0,
            target_e2e: 1e-5,
        };
        let e = resource_efficiency(&cfg, sizing, 1.0 - 1e-5).unwrap();
        assert_eq!(e.hybrid_re, e.single_shot_re);
        assert_eq!(e.re_ratio, 1.0);
        assert_eq!(e.n_shared, 0);
    }

    #[test]
    fn provisioning_at_9db() {
        let cfg = HybridConfig {
            shared_rule: SharedRule::CollisionChannel { eps_shared: 1e-4 },
            ..HybridConfig::default()
        };
        let sizing = FblSizing {
            k_bits: 256,
            snr_db: 9.0,
            target_e2e: 1e-5,
        };
        let e = resource_efficiency(&cfg, sizing, 0.94).unwrap();
        assert_eq!((e.n_single, e.n_initial, e.n_shared), (100, 86, 97));
        assert_eq!(e.hybrid_re, 957);
        assert_eq!(e.single_shot_re, 1000);
        assert!(e.re_ratio < 1.0);
    }

    #[test]
    fn provisioning_where_single_shot_fills_1024_re() {
        let cfg = HybridConfig {
            shared_rule: SharedRule::CollisionChannel { eps_shared: 1e-4 },
            ..HybridConfig::default()
        };
        let sizing = FblSizing {
            k_bits: 256,
            snr_db: -5.4,
            target_e2e: 1e-5,
        };
        let e = resource_efficiency(&cfg, sizing, 1.0).unwrap();
        assert_eq!((e.n_single, e.n_initial, e.n_shared), (1027, 776, 976));
        assert!((e.re_ratio - 8736.0 / 10270.0).abs() < 1e-15);
        assert!((e.reactive_re - 8536.0).abs() < 1e-9);
    }

    #[test]
    fn pool_amortizes_over_users() {
        let sizing = FblSizing {
            k_bits: 256,
            snr_db: 9.0,
            target_e2e: 1e-5,
        };
        let per_user = |n_users| {
            let cfg = HybridConfig {
                n_users,
                shared_rule: SharedRule::CollisionChannel { eps_shared: 1e-4 },
                ..HybridConfig::default()
            };
            let e = resource_efficiency(&cfg, sizing, 1.0).unwrap();
            (
                e.hybrid_re as f64 / n_users as f64,
                e.single_shot_re as f64 / n_users as f64,
            )
        };
        let (h10, s10) = per_user(10);
        let (h20, s20) = per_user(20);
        assert!(h20 < h10);
        assert_eq!(s10, s20);
    }

    #[test]
    fn error_free_pool_cannot_be_sized() {
        let sizing = FblSizing {
            k_bits: 256,
            snr_db: 9.0,
            target_e2e: 1e-5,
        };
        assert!(resource_efficiency(&HybridConfig::default(), sizing, 1.0).is_err());
    }

    #[test]
    fn sinr_rule_runs_and_chase_helps() {
        let rule = SharedRule::SinrBased {
            code: FblCodeSpec::new(256, 240).unwrap(),
            link: LinkBudget::default(),
        };
        let t = TimingConfig::default();
        let base = HybridConfig {
            n_users: 4,
            pool_size: 2,
            attempts: 3,
            shared_rule: rule,
            ..HybridConfig::default()
        };
        let cc = hybrid_outage(&base, &t, 20_000, RngPlan::new(5)).unwrap();
        let none = hybrid_outage(
            &HybridConfig {
                combining: Combining::None,
                ..base
            },
            &t,
            20_000,
            RngPlan::new(5),
        )
        .unwrap();
        assert!(cc.losses <= none.losses);
        assert!(cc.plr() < 0.05);
    }

    #[test]
    fn latency_quantiles() {
        let cfg = HybridConfig::default();
        let t = TimingConfig::default();
        let out = hybrid_outage(&cfg, &t, 10_000, RngPlan::new(3)).unwrap();
        let r0 = t.symbols_to_ms(t.minislots_to_symbols(2));
        let r1 = t.symbols_to_ms(t.minislots_to_symbols(3));
        assert_eq!(out.latency_quantile_ms(0.5), r0);
        assert_eq!(out.latency_quantile_ms(0.99999), r1);
        assert!(out.mean_latency_ms() > r0 && out.mean_latency_ms() < r1);
    }
}
