//! Sparse NOMA contention frames resolved by successive interference
//! cancellation.
//!
//! Each active user picks `d` of the `S` slots of a frame uniformly at random
//! and sends its packet in all of them. The receiver treats residual
//! interference as noise, decodes whichever users it can, cancels them
//! perfectly from every slot they occupy and tries again until nothing
//! changes. How the `d` received copies are used depends on [`Strategy`].
//!
//! Each user gets one uniform draw `U` per frame and is decoded as soon as
//! its error probability at the current cancellation state drops to `U` or
//! below. Cancelling interference only raises SINRs, so the set of decoded
//! users at the fixed point does not depend on the order of cancellation.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{config_err, Result};
use crate::phy::{channel_gain_sample, db_to_linear, per_joint_equal_n, per_normal_approx, FblCodeSpec};
use crate::rng::{replicate, RngPlan};
use crate::stats::PlrPoint;

/// How the receiver uses the `d` copies of a packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Slot-wise decoding, as in coded random access.
    Selection,
    /// Maximum ratio combining of all copies before decoding.
    Chase,
    /// One low-rate codeword spread over the `d` slots, decoded jointly.
    LowRate,
}

impl Strategy {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Selection => "selection",
            Self::Chase => "chase",
            Self::LowRate => "lowrate",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "selection" | "sc" => Ok(Self::Selection),
            "chase" | "cc" => Ok(Self::Chase),
            "lowrate" | "low_rate" | "coding" => Ok(Self::LowRate),
            other => Err(format!("unknown strategy '{other}' (selection, chase, lowrate)")),
        }
    }
}

/// Which slots selection combining may decode from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionMode {
    /// Only the slot with the highest SINR.
    #[default]
    BestSlotOnly,
    /// Every slot is an independent decoding attempt.
    AnySlot,
}

impl std::str::FromStr for SelectionMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "best_slot_only" | "best" => Ok(Self::BestSlotOnly),
            "any_slot" | "any" => Ok(Self::AnySlot),
            other => Err(format!("unknown selection mode '{other}' (best_slot_only, any_slot)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Arrival {
    /// `load_g * S` users in every frame; a fractional part is resolved by
    /// one Bernoulli draw so the mean stays exact.
    Deterministic,
    /// Poisson number of users per frame with mean `load_g * S`.
    Poisson,
    /// Exactly this many users in every frame.
    Fixed(u32),
}

impl Arrival {
    pub fn label(&self) -> String {
        match self {
            Self::Deterministic => "deterministic_users".into(),
            Self::Poisson => "poisson_users".into(),
            Self::Fixed(k) => format!("fixed_users:{k}"),
        }
    }
}

impl std::str::FromStr for Arrival {
    type Err = String;

    /// `deterministic_users`, `poisson_users` or `fixed_users:K`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "deterministic" | "deterministic_users" => Ok(Self::Deterministic),
            "poisson" | "poisson_users" => Ok(Self::Poisson),
            _ => {
                let k = s
                    .strip_prefix("fixed_users:")
                    .or_else(|| s.strip_prefix("fixed:"))
                    .ok_or_else(|| {
                        format!("unknown arrival '{s}' (deterministic_users, poisson_users, fixed_users:K)")
                    })?;
                k.trim()
                    .parse()
                    .map(Self::Fixed)
                    .map_err(|_| format!("fixed_users needs a non-negative user count, got '{k}'"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NomaConfig {
    pub slots_per_frame: u32,
    pub re_per_slot: u32,
    pub payload_bits: u32,
    /// Slots used per packet, `1..=slots_per_frame`.
    pub d: u32,
    pub avg_snr_db: f64,
    /// Offered packets per slot.
    pub load_g: f64,
    pub arrival: Arrival,
    pub strategy: Strategy,
    pub selection_mode: SelectionMode,
    pub max_sic_iters: u32,
}

impl Default for NomaConfig {
    fn default() -> Self {
        Self {
            slots_per_frame: 14,
            re_per_slot: 240,
            payload_bits: 256,
            d: 4,
            avg_snr_db: 9.0,
            load_g: 1.0,
            arrival: Arrival::Deterministic,
            strategy: Strategy::LowRate,
            selection_mode: SelectionMode::BestSlotOnly,
            max_sic_iters: 1000,
        }
    }
}

impl NomaConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.slots_per_frame == 0 || self.slots_per_frame > 255 {
            problems.push(format!(
                "slots_per_frame = {} must lie in 1..=255",
                self.slots_per_frame
            ));
        }
        if !(1..=self.slots_per_frame).contains(&self.d) {
            problems.push(format!("d = {} must lie in 1..={}", self.d, self.slots_per_frame));
        }
        if self.re_per_slot == 0 || self.payload_bits == 0 {
            problems.push("re_per_slot and payload_bits must be >= 1".to_string());
        }
        if !(self.load_g >= 0.0 && self.load_g.is_finite()) {
            problems.push(format!("load_g = {} must be finite and >= 0", self.load_g));
        }
        if !self.avg_snr_db.is_finite() {
            problems.push("avg_snr_db must be finite".to_string());
        }
        if self.max_sic_iters == 0 {
            problems.push("max_sic_iters must be >= 1".to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(config_err(problems.join("; ")))
        }
    }

    pub fn code(&self) -> FblCodeSpec {
        FblCodeSpec {
            k_bits: self.payload_bits,
            n_re: self.re_per_slot,
        }
    }

    pub fn snr(&self) -> f64 {
        db_to_linear(self.avg_snr_db)
    }
}

/// One contention frame: who transmits where and through which channel.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrameAllocation {
    pub n_users: usize,
    pub d: usize,
    pub n_slots: usize,
    /// Chosen slot of user `u`, copy `j` at `u * d + j`; distinct per user.
    pub slots: Vec<u8>,
    /// Channel power gain matching each entry of `slots`.
    pub gains: Vec<f64>,
    /// Common linear average SNR.
    pub snr: f64,
    // users per slot, CSR: occupants[offsets[t]..offsets[t+1]] = (user, copy index)
    offsets: Vec<usize>,
    occupants: Vec<(u32, u8)>,
}

impl FrameAllocation {
    /// Builds a frame from explicit slot choices and gains (`d` per user).
    pub fn new(n_slots: usize, d: usize, slots: Vec<u8>, gains: Vec<f64>, snr: f64) -> Self {
        assert_eq!(slots.len(), gains.len());
        assert!(d > 0 && slots.len().is_multiple_of(d));
        let mut f = Self {
            n_users: slots.len() / d,
            d,
            n_slots,
            slots,
            gains,
            snr,
            ..Self::default()
        };
        f.index_slots();
        f
    }

    fn index_slots(&mut self) {
        self.offsets.clear();
        self.offsets.resize(self.n_slots + 1, 0);
        for &t in &self.slots {
            self.offsets[t as usize + 1] += 1;
        }
        for t in 0..self.n_slots {
            self.offsets[t + 1] += self.offsets[t];
        }
        self.occupants.clear();
        self.occupants.resize(self.slots.len(), (0, 0));
        let mut fill = self.offsets.clone();
        // users visited in index order, so each slot lists occupants ascending
        for (i, &t) in self.slots.iter().enumerate() {
            let (u, j) = (i / self.d, i % self.d);
            self.occupants[fill[t as usize]] = (u as u32, j as u8);
            fill[t as usize] += 1;
        }
    }

    pub fn user_slots(&self, u: usize) -> &[u8] {
        &self.slots[u * self.d..(u + 1) * self.d]
    }

    pub fn user_gains(&self, u: usize) -> &[f64] {
        &self.gains[u * self.d..(u + 1) * self.d]
    }

    pub fn slot_occupants(&self, t: usize) -> impl Iterator<Item = usize> + '_ {
        self.occupants[self.offsets[t]..self.offsets[t + 1]]
            .iter()
            .map(|o| o.0 as usize)
    }

    /// SINR of each copy of `user` when every user flagged in `decoded` has
    /// been cancelled. Noise power is 1.
    pub fn user_sinrs_into(&self, decoded: &[bool], user: usize, out: &mut Vec<f64>) {
        out.clear();
        for (j, &t) in self.user_slots(user).iter().enumerate() {
            let t = t as usize;
            let mut interference = 0.0;
            for &(v, jv) in &self.occupants[self.offsets[t]..self.offsets[t + 1]] {
                let v = v as usize;
                if v != user && !decoded[v] {
                    interference += self.gains[v * self.d + jv as usize];
                }
            }
            out.push(self.snr * self.gains[user * self.d + j] / (1.0 + self.snr * interference));
        }
    }
}

/// Per-copy SINRs of `user` given the cancelled set.
pub fn user_sinr_per_slot(alloc: &FrameAllocation, decoded: &[bool], user: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(alloc.d);
    alloc.user_sinrs_into(decoded, user, &mut out);
    out
}

/// Draws the number of active users, their slot subsets and fading gains.
///
/// Draw order: user count, then per user `d` slot picks followed by `d`
/// gains.
pub fn build_frame<R: Rng + ?Sized>(cfg: &NomaConfig, rng: &mut R) -> FrameAllocation {
    let mut f = FrameAllocation::default();
    build_frame_into(cfg, rng, &mut f);
    f
}

fn draw_user_count<R: Rng + ?Sized>(cfg: &NomaConfig, rng: &mut R) -> usize {
    match cfg.arrival {
        Arrival::Fixed(k) => k as usize,
        Arrival::Deterministic => {
            let mean = cfg.load_g * cfg.slots_per_frame as f64;
            let whole = mean.floor();
            let extra = rng.random::<f64>() < mean - whole;
            whole as usize + extra as usize
        }
        Arrival::Poisson => {
            let mean = cfg.load_g * cfg.slots_per_frame as f64;
            if mean <= 0.0 {
                0
            } else {
                Poisson::new(mean).expect("positive finite mean").sample(rng) as usize
            }
        }
    }
}

fn build_frame_into<R: Rng + ?Sized>(cfg: &NomaConfig, rng: &mut R, f: &mut FrameAllocation) {
    let s = cfg.slots_per_frame as usize;
    let d = cfg.d as usize;
    let k = draw_user_count(cfg, rng);
    f.n_users = k;
    f.d = d;
    f.n_slots = s;
    f.snr = cfg.snr();
    f.slots.clear();
    f.gains.clear();
    let mut pool: Vec<u8> = (0..s as u8).collect();
    for _ in 0..k {
        // partial Fisher-Yates: uniform over all d-subsets
        for j in 0..d {
            let pick = rng.random_range(j..s);
            pool.swap(j, pick);
            f.slots.push(pool[j]);
        }
        for _ in 0..d {
            f.gains.push(channel_gain_sample(rng));
        }
    }
    f.index_slots();
}

/// Error probability of one packet from the SINRs of its copies.
pub fn strategy_eps(strategy: Strategy, mode: SelectionMode, slot_sinrs: &[f64], code: FblCodeSpec) -> f64 {
    match strategy {
        Strategy::Selection => match mode {
            SelectionMode::BestSlotOnly => {
                let best = slot_sinrs.iter().copied().fold(0.0, f64::max);
                per_normal_approx(code, best)
            }
            SelectionMode::AnySlot => slot_sinrs.iter().map(|&s| per_normal_approx(code, s)).product(),
        },
        Strategy::Chase => per_normal_approx(code, slot_sinrs.iter().sum()),
        Strategy::LowRate => per_joint_equal_n(code.n_re, slot_sinrs, code.k_bits),
    }
}

/// Decoding state of one frame.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SicState {
    pub decoded: Vec<bool>,
    /// The coupled decoding threshold of each user.
    pub uniforms: Vec<f64>,
    pub iterations: u32,
    /// Error probability of each user at the final cancellation state
    /// (0 for decoded users).
    pub eps: Vec<f64>,
}

impl SicState {
    pub fn delivered(&self) -> usize {
        self.decoded.iter().filter(|&&d| d).count()
    }
}

/// Draws one uniform per user, then runs synchronous SIC.
pub fn sic_decode<R: Rng + ?Sized>(alloc: &FrameAllocation, cfg: &NomaConfig, rng: &mut R) -> SicState {
    let uniforms: Vec<f64> = (0..alloc.n_users).map(|_| rng.random()).collect();
    sic_decode_with(alloc, cfg, uniforms)
}

/// Synchronous SIC with given per-user thresholds: each pass evaluates all
/// undecoded users against the current cancelled set and cancels every user
/// with `U >= eps` at once.
pub fn sic_decode_with(alloc: &FrameAllocation, cfg: &NomaConfig, uniforms: Vec<f64>) -> SicState {
    let mut scratch = Scratch::default();
    let mut state = SicState {
        uniforms,
        ..SicState::default()
    };
    run_sic(alloc, cfg, &mut state, &mut scratch);
    state
}

#[derive(Default)]
struct Scratch {
    sinrs: Vec<f64>,
    newly: Vec<usize>,
}

fn run_sic(alloc: &FrameAllocation, cfg: &NomaConfig, state: &mut SicState, scratch: &mut Scratch) {
    let k = alloc.n_users;
    let code = cfg.code();
    state.decoded.clear();
    state.decoded.resize(k, false);
    state.eps.clear();
    state.eps.resize(k, 1.0);
    state.iterations = 0;
    let mut remaining = k;
    while remaining > 0 && state.iterations < cfg.max_sic_iters {
        state.iterations += 1;
        scratch.newly.clear();
        for u in 0..k {
            if state.decoded[u] {
                continue;
            }
            alloc.user_sinrs_into(&state.decoded, u, &mut scratch.sinrs);
            let e = strategy_eps(cfg.strategy, cfg.selection_mode, &scratch.sinrs, code);
            state.eps[u] = e;
            if state.uniforms[u] >= e {
                scratch.newly.push(u);
            }
        }
        if scratch.newly.is_empty() {
            break;
        }
        for &u in &scratch.newly {
            state.decoded[u] = true;
            state.eps[u] = 0.0;
        }
        remaining -= scratch.newly.len();
    }
}

/// Outcome of [`estimate_plr`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NomaEstimate {
    pub strategy: Strategy,
    pub d: u32,
    pub frames: u64,
    pub point: PlrPoint,
    pub sic_iterations: u64,
}

impl NomaEstimate {
    pub fn packets(&self) -> u64 {
        self.point.trials
    }

    pub fn losses(&self) -> u64 {
        self.point.losses
    }

    pub fn mean_sic_iters(&self) -> f64 {
        if self.frames == 0 {
            0.0
        } else {
            self.sic_iterations as f64 / self.frames as f64
        }
    }
}

struct Tally {
    packets: u64,
    losses: u64,
    iterations: u64,
    frame: FrameAllocation,
    state: SicState,
    scratch: Scratch,
}

impl Tally {
    fn new() -> Self {
        Self {
            packets: 0,
            losses: 0,
            iterations: 0,
            frame: FrameAllocation::default(),
            state: SicState::default(),
            scratch: Scratch::default(),
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.packets += other.packets;
        self.losses += other.losses;
        self.iterations += other.iterations;
        self
    }
}

/// Packet loss rate over `n_frames` frames; frame `i` uses stream `i`.
pub fn estimate_plr(cfg: &NomaConfig, n_frames: u64, plan: RngPlan) -> Result<NomaEstimate> {
    cfg.validate()?;
    if n_frames == 0 {
        return Err(config_err("need at least one frame"));
    }
    let tally = replicate(
        plan,
        n_frames,
        Tally::new,
        |t, _, rng| {
            build_frame_into(cfg, rng, &mut t.frame);
            t.state.uniforms.clear();
            t.state
                .uniforms
                .extend((0..t.frame.n_users).map(|_| rng.random::<f64>()));
            run_sic(&t.frame, cfg, &mut t.state, &mut t.scratch);
            let k = t.frame.n_users as u64;
            t.packets += k;
            t.losses += k - t.state.delivered() as u64;
            t.iterations += t.state.iterations as u64;
        },
        Tally::merge,
    );
    Ok(NomaEstimate {
        strategy: cfg.strategy,
        d: cfg.d,
        frames: n_frames,
        point: PlrPoint::from_counts(cfg.load_g, tally.losses, tally.packets),
        sic_iterations: tally.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_stream;
    use approx::assert_relative_eq;

    const SNR_9DB: f64 = 7.943;

    fn cfg(strategy: Strategy, d: u32) -> NomaConfig {
        NomaConfig {
            d,
            strategy,
            ..NomaConfig::default()
        }
    }

    #[test]
    fn full_occupancy_when_d_equals_s() {
        let c = NomaConfig {
            d: 14,
            arrival: Arrival::Fixed(5),
            ..NomaConfig::default()
        };
        let f = build_frame(&c, &mut derive_stream(1, 0));
        for u in 0..5 {
            let mut s = f.user_slots(u).to_vec();
            s.sort();
            assert_eq!(s, (0..14).collect::<Vec<u8>>());
        }
    }

    #[test]
    fn slot_subsets_are_distinct_and_gains_positive() {
        let c = NomaConfig {
            d: 5,
            arrival: Arrival::Fixed(50),
            ..NomaConfig::default()
        };
        let f = build_frame(&c, &mut derive_stream(3, 0));
        for u in 0..50 {
            let mut s = f.user_slots(u).to_vec();
            s.sort();
            s.dedup();
            assert_eq!(s.len(), 5);
        }
        assert!(f.gains.iter().all(|&g| g > 0.0));
    }

    #[test]
    fn single_slot_choice_is_uniform() {
        let c = NomaConfig {
            d: 1,
            arrival: Arrival::Fixed(1),
            ..NomaConfig::default()
        };
        let n = 140_000;
        let mut counts = [0u64; 14];
        for i in 0..n {
            let f = build_frame(&c, &mut derive_stream(8, i));
            counts[f.slots[0] as usize] += 1;
        }
        let expected = n as f64 / 14.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // chi-square 0.99 quantile, 13 degrees of freedom
        assert!(chi2 < 27.688, "chi2 = {chi2}");
    }

    #[test]
    fn poisson_user_count_mean() {
        let c = NomaConfig {
            load_g: 2.0,
            arrival: Arrival::Poisson,
            ..NomaConfig::default()
        };
        let n = 100_000u64;
        let total: usize = (0..n).map(|i| draw_user_count(&c, &mut derive_stream(4, i))).sum();
        let mean = total as f64 / n as f64;
        assert!((mean - 28.0).abs() < 0.2, "mean {mean}");
    }

    #[test]
    fn deterministic_user_count_keeps_mean() {
        let c = NomaConfig {
            load_g: 1.25,
            ..NomaConfig::default()
        };
        let n = 20_000u64;
        let counts: Vec<usize> = (0..n).map(|i| draw_user_count(&c, &mut derive_stream(6, i))).collect();
        assert!(counts.iter().all(|&k| k == 17 || k == 18));
        let mean = counts.iter().sum::<usize>() as f64 / n as f64;
        assert!((mean - 17.5).abs() < 0.02, "mean {mean}");
        let whole = NomaConfig { load_g: 2.0, ..c };
        assert_eq!(draw_user_count(&whole, &mut derive_stream(6, 0)), 28);
    }

    #[test]
    fn arrival_parsing() {
        assert_eq!("poisson_users".parse::<Arrival>(), Ok(Arrival::Poisson));
        assert_eq!("fixed_users:28".parse::<Arrival>(), Ok(Arrival::Fixed(28)));
        assert_eq!("deterministic_users".parse::<Arrival>(), Ok(Arrival::Deterministic));
        assert!("fixed_users:x".parse::<Arrival>().is_err());
        for a in [Arrival::Poisson, Arrival::Fixed(3), Arrival::Deterministic] {
            assert_eq!(a.label().parse::<Arrival>(), Ok(a));
        }
    }

    #[test]
    fn sinr_examples() {
        let alone = FrameAllocation::new(14, 1, vec![3], vec![1.0], SNR_9DB);
        assert_relative_eq!(user_sinr_per_slot(&alone, &[false], 0)[0], SNR_9DB);
        let pair = FrameAllocation::new(14, 1, vec![2, 2], vec![1.0, 1.0], 8.0);
        assert_relative_eq!(user_sinr_per_slot(&pair, &[false, false], 0)[0], 8.0 / 9.0);
        assert_relative_eq!(user_sinr_per_slot(&pair, &[false, true], 0)[0], 8.0);
    }

    #[test]
    fn strategies_coincide_for_one_slot() {
        let code = FblCodeSpec::new(256, 240).unwrap();
        for s in [0.3, 1.0, 1.07, 2.0] {
            let sel = strategy_eps(Strategy::Selection, SelectionMode::BestSlotOnly, &[s], code);
            let any = strategy_eps(Strategy::Selection, SelectionMode::AnySlot, &[s], code);
            let cc = strategy_eps(Strategy::Chase, SelectionMode::BestSlotOnly, &[s], code);
            let lr = strategy_eps(Strategy::LowRate, SelectionMode::BestSlotOnly, &[s], code);
            assert_eq!(sel, any);
            assert_eq!(sel, cc);
            assert!((sel - lr).abs() <= 1e-12 * sel);
        }
    }

    #[test]
    fn chase_two_unit_slots() {
        let code = FblCodeSpec::new(256, 240).unwrap();
        let e = strategy_eps(Strategy::Chase, SelectionMode::BestSlotOnly, &[1.0, 1.0], code);
        assert!(((e - 5.617_962_621_447_018e-10) / 5.617_962_621_447_018e-10).abs() < 1e-8);
    }

    #[test]
    fn lone_user_decodes_in_first_pass() {
        for strategy in [Strategy::Selection, Strategy::Chase, Strategy::LowRate] {
            for d in [1usize, 2, 4] {
                let f = FrameAllocation::new(14, d, (0..d as u8).collect(), vec![1.0; d], SNR_9DB);
                let st = sic_decode_with(&f, &cfg(strategy, d as u32), vec![0.5]);
                assert_eq!(st.decoded, vec![true]);
                assert_eq!(st.iterations, 1);
            }
        }
    }

    #[test]
    fn near_far_pair_resolves_in_two_passes() {
        let f = FrameAllocation::new(14, 1, vec![0, 0], vec![4.0, 0.25], SNR_9DB);
        let c = cfg(Strategy::Chase, 1);
        let mut rng_free = vec![false, false];
        let strong = user_sinr_per_slot(&f, &rng_free, 0)[0];
        assert!((strong - 10.64).abs() < 0.01);
        rng_free[0] = true;
        let weak = user_sinr_per_slot(&f, &rng_free, 1)[0];
        assert!((weak - 1.986).abs() < 0.001);
        let st = sic_decode_with(&f, &c, vec![0.5, 0.5]);
        assert_eq!(st.decoded, vec![true, true]);
        assert_eq!(st.iterations, 2);
    }

    #[test]
    fn symmetric_collision_deadlocks() {
        let f = FrameAllocation::new(14, 1, vec![5, 5], vec![1.0, 1.0], SNR_9DB);
        let st = sic_decode_with(&f, &cfg(Strategy::Chase, 1), vec![0.5, 0.5]);
        assert_eq!(st.decoded, vec![false, false]);
        assert_eq!(st.iterations, 1);
        assert!((st.eps[0] - 0.954).abs() < 1e-3);
    }

    #[test]
    fn empty_frame_counts_nothing() {
        let c = NomaConfig {
            load_g: 0.0,
            ..NomaConfig::default()
        };
        let est = estimate_plr(&c, 100, RngPlan::new(1)).unwrap();
        assert_eq!(est.packets(), 0);
        assert_eq!(est.losses(), 0);
    }

    #[test]
    fn invalid_configs() {
        assert!(NomaConfig {
            d: 0,
            ..NomaConfig::default()
        }
        .validate()
        .is_err());
        assert!(NomaConfig {
            d: 15,
            ..NomaConfig::default()
        }
        .validate()
        .is_err());
        assert!(NomaConfig {
            load_g: -1.0,
            ..NomaConfig::default()
        }
        .validate()
        .is_err());
    }
}
