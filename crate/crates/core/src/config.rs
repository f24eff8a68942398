//! Scenario files: `key = value` lines grouped under `[scenario]`,
//! `[timing]`, `[phy]` and `[output]`. Lines starting with `#` or `;` are
//! comments. Every key is optional except `scenario.kind`; unknown keys and
//! bad values are reported together.
//!
//! ```text
//! [scenario]
//! kind = noma
//! strategy = lowrate
//! d = 4
//! load = 2.0
//! ```

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use ini::{Ini, ParseOption};

use crate::error::{Error, Result};
use crate::harq::{AttemptModel, Combining, FblAttemptModel, HarqScheme};
use crate::hybrid::{FblSizing, HybridArrival, HybridConfig, RetxSelection, SharedRule};
use crate::noma::{Arrival, NomaConfig, SelectionMode, Strategy};
use crate::phy::{Fading, FblCodeSpec, LinkBudget, PowerControlConfig};
use crate::timing::{Alignment, TimingConfig, VALID_SCS_KHZ};

pub const SECTIONS: [&str; 4] = ["scenario", "timing", "phy", "output"];

/// Every accepted key as `section.key`, with a one-line description.
pub const KEYS: &[(&str, &str)] = &[
    ("scenario.kind", "harq | hybrid | noma (required)"),
    ("scenario.seed", "master seed, default 1"),
    (
        "scenario.replications",
        "packets (harq), cycles (hybrid) or frames (noma); default 100000",
    ),
    (
        "scenario.scheme",
        "harq: reactive | grant_based | krep | proactive | reactive_boost",
    ),
    ("scenario.k", "harq krep: repetitions K, default 2"),
    (
        "scenario.max_tx",
        "harq proactive: transmissions before giving up, default 4",
    ),
    ("scenario.max_attempts", "harq: attempt limit, default 4"),
    (
        "scenario.scheduling_delay_minislots",
        "harq grant_based: request/grant delay, default 28",
    ),
    (
        "scenario.success_probs",
        "harq: per-attempt success probabilities, e.g. 0.9, 1.0; omit to use the [phy] link",
    ),
    (
        "scenario.deadline_ms",
        "harq: latency budget for the outage table, default 1.0",
    ),
    ("scenario.n_users", "hybrid: N, default 10"),
    ("scenario.pool_size", "hybrid: shared resources R, default 1"),
    (
        "scenario.attempts",
        "hybrid: d including the dedicated attempt, default 2",
    ),
    (
        "scenario.initial_bler",
        "hybrid: error rate of the dedicated attempt, default 0.1",
    ),
    (
        "scenario.shared_rule",
        "hybrid: collision_channel | sinr_based, default collision_channel",
    ),
    (
        "scenario.eps_shared",
        "hybrid collision_channel: error rate of a clean replica, default 0",
    ),
    (
        "scenario.blind",
        "hybrid: retransmit regardless of earlier outcome, default true",
    ),
    ("scenario.retx_selection", "hybrid: uniform_random | fixed_sequence"),
    (
        "scenario.arrival_rate",
        "hybrid: Poisson packets per user per cycle; omit for full buffer",
    ),
    (
        "scenario.sizing_snr_db",
        "hybrid: SNR used to size resources for bits_per_re, default -5.4",
    ),
    (
        "scenario.sizing_target",
        "hybrid: single-shot loss target for sizing, default 1e-5",
    ),
    (
        "scenario.strategy",
        "noma: selection | chase | lowrate, default lowrate",
    ),
    ("scenario.d", "noma: slots per packet, default 4"),
    ("scenario.load", "noma: offered packets per slot G, default 1.0"),
    ("scenario.slots_per_frame", "noma: S, default 14"),
    (
        "scenario.arrival",
        "noma: deterministic_users | poisson_users | fixed_users:K",
    ),
    ("scenario.selection_mode", "noma: best_slot_only | any_slot"),
    ("scenario.max_sic_iters", "noma: SIC pass limit, default 1000"),
    (
        "scenario.target_plr",
        "noma: run a supported-load search for this loss rate",
    ),
    ("scenario.rel_tol", "noma search: relative bracket width, default 0.05"),
    (
        "scenario.load_min",
        "noma search: lower end of the load bracket, default 0.25",
    ),
    (
        "scenario.load_max",
        "noma search: upper end of the load bracket, default 3.0",
    ),
    ("timing.scs_khz", "15 | 30 | 60 | 120 | 240, default 60"),
    ("timing.symbols_per_minislot", "1..=13, default 2"),
    ("timing.ue_proc_minislots", "default 1"),
    ("timing.bs_proc_minislots", "default 1"),
    ("timing.feedback_minislots", "default 1"),
    ("timing.alignment", "immediate | next_boundary"),
    ("phy.k_bits", "payload in bits, default 256"),
    ("phy.n_re", "resource elements per transmission or slot, default 240"),
    ("phy.avg_snr_db", "average SNR, default 9"),
    ("phy.fading", "rayleigh_block | none"),
    ("phy.combining", "none | chase, default chase"),
    ("phy.p_max_dbm", "default 23"),
    ("phy.p0_dbm", "default -90"),
    ("phy.alpha", "path-loss compensation in [0, 1], default 1"),
    ("phy.boost_steps_db", "power boost per attempt, e.g. 0, 3, 6"),
    ("phy.path_loss_db", "default 100"),
    ("phy.m_rb", "resource blocks, default 1"),
    ("output.dir", "directory for CSV files and the manifest, default out"),
    ("output.prefix", "file name prefix, default the scenario kind"),
];

/// Validated `section.key -> value` pairs before typing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawConfig {
    pub entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let (raw, problems) = Self::parse_lenient(text)?;
        if problems.is_empty() {
            Ok(raw)
        } else {
            Err(Error::Config(problems.join("\n")))
        }
    }

    /// Like [`RawConfig::parse`] but keeps the recognised entries next to
    /// the structural problems. Only a syntax error fails outright.
    pub fn parse_lenient(text: &str) -> Result<(Self, Vec<String>)> {
        let opt = ParseOption {
            enabled_quote: true,
            enabled_escape: false,
            ..ParseOption::default()
        };
        let ini = Ini::load_from_str_opt(text, opt).map_err(|e| Error::Config(format!("syntax: {e}")))?;
        let mut problems = Vec::new();
        let mut entries = BTreeMap::new();
        for (section, props) in ini.iter() {
            let Some(section) = section else {
                for (k, _) in props.iter() {
                    problems.push(format!("key '{k}' appears before any section header"));
                }
                continue;
            };
            if !SECTIONS.contains(&section) {
                problems.push(format!(
                    "unknown section [{section}] (expected one of {})",
                    SECTIONS.join(", ")
                ));
                continue;
            }
            for (k, v) in props.iter() {
                let key = format!("{section}.{k}");
                if entries.insert(key.clone(), v.trim().to_string()).is_some() {
                    problems.push(format!("{key} given more than once"));
                }
            }
        }
        let mut raw = RawConfig { entries };
        problems.extend(raw.unknown_keys());
        raw.entries.retain(|k, _| KEYS.iter().any(|(known, _)| known == k));
        Ok((raw, problems))
    }

    fn unknown_keys(&self) -> Vec<String> {
        self.entries
            .keys()
            .filter(|k| !KEYS.iter().any(|(known, _)| known == k))
            .map(|k| format!("unknown key {k}"))
            .collect()
    }

    /// Sets `section.key = value`, replacing any value from the file.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KEYS.iter().any(|(known, _)| *known == key) {
            return Err(Error::Config(format!("unknown key {key}")));
        }
        self.entries.insert(key.to_string(), value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// The effective configuration as a file, in key order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for section in SECTIONS {
            let prefix = format!("{section}.");
            let keys: Vec<_> = self.entries.iter().filter(|(k, _)| k.starts_with(&prefix)).collect();
            if keys.is_empty() {
                continue;
            }
            out.push_str(&format!("[{section}]\n"));
            for (k, v) in keys {
                out.push_str(&format!("{} = {v}\n", &k[prefix.len()..]));
            }
        }
        out
    }
}

/// Collects typed values and every problem met on the way.
struct Reader<'a> {
    raw: &'a RawConfig,
    problems: Vec<String>,
}

impl Reader<'_> {
    fn get<T: FromStr>(&mut self, key: &str, default: T) -> T
    where
        T::Err: Display,
    {
        match self.raw.get(key) {
            None => default,
            Some(v) => match v.parse() {
                Ok(x) => x,
                Err(e) => {
                    self.problems.push(format!("{key} = '{v}': {e}"));
                    default
                }
            },
        }
    }

    fn opt<T: FromStr>(&mut self, key: &str) -> Option<T>
    where
        T::Err: Display,
    {
        self.raw.get(key)?;
        let v: Option<T> = self.raw.get(key).and_then(|v| match v.parse() {
            Ok(x) => Some(x),
            Err(e) => {
                self.problems.push(format!("{key} = '{v}': {e}"));
                None
            }
        });
        v
    }

    fn ranged(&mut self, key: &str, default: f64, lo: f64, hi: f64) -> f64 {
        let x: f64 = self.get(key, default);
        if !(lo..=hi).contains(&x) {
            self.problems.push(format!("{key} = {x} out of range [{lo}, {hi}]"));
        }
        x
    }

    fn at_least<T: FromStr + PartialOrd + Display + Copy>(&mut self, key: &str, default: T, min: T) -> T
    where
        T::Err: Display,
    {
        let x = self.get(key, default);
        if x < min {
            self.problems.push(format!("{key} = {x} must be >= {min}"));
        }
        x
    }

    fn list(&mut self, key: &str) -> Option<Vec<f64>> {
        let v = self.raw.get(key)?;
        let parsed: std::result::Result<Vec<f64>, _> = v
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse::<f64>)
            .collect();
        match parsed {
            Ok(xs) => Some(xs),
            Err(e) => {
                self.problems.push(format!("{key} = '{v}': {e}"));
                None
            }
        }
    }

    /// Keys that belong to a different scenario kind are rejected.
    fn forbid_others(&mut self, allowed: &[&str]) {
        for k in self.raw.entries.keys() {
            if let Some(name) = k.strip_prefix("scenario.") {
                let common = ["kind", "seed", "replications"];
                if !common.contains(&name) && !allowed.contains(&name) {
                    self.problems.push(format!("{k} does not apply to this scenario kind"));
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: String,
    pub prefix: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarqScenario {
    pub scheme: HarqScheme,
    pub model: AttemptModel,
    pub max_attempts: u32,
    pub deadline_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridScenario {
    pub config: HybridConfig,
    pub sizing: FblSizing,
}

/// Parameters of a supported-load search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadSearch {
    pub target_plr: f64,
    pub rel_tol: f64,
    pub bracket: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NomaScenario {
    pub config: NomaConfig,
    pub search: Option<LoadSearch>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Harq(HarqScenario),
    Hybrid(HybridScenario),
    Noma(NomaScenario),
}

impl Scenario {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Harq(_) => "harq",
            Self::Hybrid(_) => "hybrid",
            Self::Noma(_) => "noma",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub replications: u64,
    pub timing: TimingConfig,
    pub output: OutputConfig,
    pub scenario: Scenario,
}

impl ScenarioConfig {
    pub fn from_text(text: &str) -> Result<Self> {
        let (raw, mut problems) = RawConfig::parse_lenient(text)?;
        match Self::from_raw(&raw) {
            Ok(c) if problems.is_empty() => Ok(c),
            Ok(_) => Err(Error::Config(problems.join("\n"))),
            Err(Error::Config(typed)) => {
                problems.push(typed);
                Err(Error::Config(problems.join("\n")))
            }
            Err(e) => Err(e),
        }
    }

    /// Types and validates every value, reporting all problems at once.
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let mut r = Reader {
            raw,
            problems: Vec::new(),
        };
        let seed = r.get("scenario.seed", 1u64);
        let replications = r.at_least("scenario.replications", 100_000u64, 1);

        let timing = TimingConfig {
            scs_khz: r.get("timing.scs_khz", 60),
            symbols_per_minislot: r.get("timing.symbols_per_minislot", 2),
            ue_proc_minislots: r.get("timing.ue_proc_minislots", 1),
            bs_proc_minislots: r.get("timing.bs_proc_minislots", 1),
            feedback_minislots: r.get("timing.feedback_minislots", 1),
            alignment: r.get("timing.alignment", Alignment::Immediate),
        };
        if !VALID_SCS_KHZ.contains(&timing.scs_khz) {
            r.problems.push(format!(
                "timing.scs_khz = {} must be one of {VALID_SCS_KHZ:?}",
                timing.scs_khz
            ));
        }
        if !(1..=13).contains(&timing.symbols_per_minislot) {
            r.problems.push(format!(
                "timing.symbols_per_minislot = {} out of range [1, 13]",
                timing.symbols_per_minislot
            ));
        }

        let k_bits = r.at_least("phy.k_bits", 256u32, 1);
        let n_re = r.at_least("phy.n_re", 240u32, 1);
        let avg_snr_db: f64 = r.get("phy.avg_snr_db", 9.0);
        let fading = r.get("phy.fading", Fading::RayleighBlock);
        let combining = r.get("phy.combining", Combining::Chase);
        let alpha = r.ranged("phy.alpha", 1.0, 0.0, 1.0);
        let power = PowerControlConfig {
            p_max_dbm: r.get("phy.p_max_dbm", 23.0),
            p0_dbm: r.get("phy.p0_dbm", -90.0),
            alpha,
            boost_steps_db: r.list("phy.boost_steps_db").unwrap_or_else(|| vec![0.0]),
        };
        if power.boost_steps_db.windows(2).any(|w| w[1] < w[0]) {
            r.problems.push("phy.boost_steps_db must be non-decreasing".into());
        }
        let path_loss_db: f64 = r.get("phy.path_loss_db", 100.0);
        let m_rb = r.at_least("phy.m_rb", 1u32, 1);
        let link = LinkBudget { avg_snr_db, fading };
        let code = FblCodeSpec { k_bits, n_re };

        let kind: Option<String> = r.opt("scenario.kind");
        let scenario = match kind.as_deref() {
            Some("harq") => Some(Scenario::Harq(harq_scenario(
                &mut r,
                code,
                link,
                power,
                path_loss_db,
                m_rb,
                combining,
            ))),
            Some("hybrid") => Some(Scenario::Hybrid(hybrid_scenario(&mut r, code, link, combining))),
            Some("noma") => Some(Scenario::Noma(noma_scenario(&mut r, code, avg_snr_db))),
            Some(other) => {
                r.problems
                    .push(format!("scenario.kind = '{other}' must be harq, hybrid or noma"));
                None
            }
            None => {
                r.problems.push("missing [scenario] section or its kind key".into());
                None
            }
        };

        let output = OutputConfig {
            dir: r.get("output.dir", "out".to_string()),
            prefix: r.get("output.prefix", kind.clone().unwrap_or_default()),
        };
        if !r.problems.is_empty() {
            return Err(Error::Config(r.problems.join("\n")));
        }
        Ok(ScenarioConfig {
            seed,
            replications,
            timing,
            output,
            scenario: scenario.expect("kind checked above"),
        })
    }
}

fn harq_scenario(
    r: &mut Reader,
    code: FblCodeSpec,
    link: LinkBudget,
    power: PowerControlConfig,
    path_loss_db: f64,
    m_rb: u32,
    combining: Combining,
) -> HarqScenario {
    r.forbid_others(&[
        "scheme",
        "k",
        "max_tx",
        "max_attempts",
        "scheduling_delay_minislots",
        "success_probs",
        "deadline_ms",
    ]);
    let name: String = r.get("scenario.scheme", "reactive".to_string());
    let k = r.at_least("scenario.k", 2u32, 1);
    let max_tx = r.at_least("scenario.max_tx", 4u32, 1);
    let scheme = match name.to_ascii_lowercase().as_str() {
        "reactive" => HarqScheme::Reactive,
        "grant_based" | "gb" => HarqScheme::GrantBased {
            scheduling_delay_minislots: r.get("scenario.scheduling_delay_minislots", 28),
        },
        "krep" | "k_repetition" => HarqScheme::KRepetition { k },
        "proactive" => HarqScheme::Proactive { max_tx },
        "reactive_boost" | "boost" => HarqScheme::ReactiveBoost,
        other => {
            r.problems.push(format!(
                "scenario.scheme = '{other}' must be reactive, grant_based, krep, proactive or reactive_boost"
            ));
            HarqScheme::Reactive
        }
    };
    let model = match r.list("scenario.success_probs") {
        Some(p) => {
            if p.is_empty() || p.iter().any(|x| !(0.0..=1.0).contains(x)) {
                r.problems
                    .push("scenario.success_probs must be a non-empty list in [0, 1]".into());
            }
            AttemptModel::Fixed(p)
        }
        None => AttemptModel::Fbl(FblAttemptModel {
            code,
            link,
            power,
            path_loss_db,
            m_rb,
            combining,
        }),
    };
    let default_attempts = match scheme {
        HarqScheme::KRepetition { k } => k,
        HarqScheme::Proactive { max_tx } => max_tx,
        _ => 4,
    };
    HarqScenario {
        scheme,
        model,
        max_attempts: r.at_least("scenario.max_attempts", default_attempts, 1),
        deadline_ms: r.ranged("scenario.deadline_ms", 1.0, 0.0, f64::MAX),
    }
}

fn hybrid_scenario(r: &mut Reader, code: FblCodeSpec, link: LinkBudget, combining: Combining) -> HybridScenario {
    r.forbid_others(&[
        "n_users",
        "pool_size",
        "attempts",
        "initial_bler",
        "shared_rule",
        "eps_shared",
        "blind",
        "retx_selection",
        "arrival_rate",
        "sizing_snr_db",
        "sizing_target",
    ]);
    let defaults = HybridConfig::default();
    let rule: String = r.get("scenario.shared_rule", "collision_channel".to_string());
    let eps_shared = r.ranged("scenario.eps_shared", 0.0, 0.0, 1.0);
    let shared_rule = match rule.as_str() {
        "collision_channel" | "collision" => SharedRule::CollisionChannel { eps_shared },
        "sinr_based" | "sinr" => SharedRule::SinrBased { code, link },
        other => {
            r.problems.push(format!(
                "scenario.shared_rule = '{other}' must be collision_channel or sinr_based"
            ));
            defaults.shared_rule
        }
    };
    let arrival = match r.opt::<f64>("scenario.arrival_rate") {
        None => HybridArrival::FullBuffer,
        Some(rate) => {
            if !(rate >= 0.0 && rate.is_finite()) {
                r.problems
                    .push(format!("scenario.arrival_rate = {rate} must be finite and >= 0"));
            }
            HybridArrival::Poisson { rate_per_cycle: rate }
        }
    };
    let config = HybridConfig {
        n_users: r.at_least("scenario.n_users", defaults.n_users, 1),
        pool_size: r.get("scenario.pool_size", defaults.pool_size),
        attempts: r.at_least("scenario.attempts", defaults.attempts, 1),
        initial_bler: r.ranged("scenario.initial_bler", defaults.initial_bler, 0.0, 1.0),
        shared_rule,
        blind: r.get("scenario.blind", true),
        combining,
        retx_selection: r.get("scenario.retx_selection", RetxSelection::Uniform),
        arrival,
    };
    if config.pool_size == 0 && config.attempts > 1 {
        r.problems
            .push("scenario.pool_size = 0 is only allowed with attempts = 1".into());
    }
    let sizing = FblSizing {
        k_bits: code.k_bits,
        snr_db: r.get("scenario.sizing_snr_db", -5.4),
        target_e2e: r.ranged("scenario.sizing_target", 1e-5, f64::MIN_POSITIVE, 1.0),
    };
    HybridScenario { config, sizing }
}

fn noma_scenario(r: &mut Reader, code: FblCodeSpec, avg_snr_db: f64) -> NomaScenario {
    r.forbid_others(&[
        "strategy",
        "d",
        "load",
        "slots_per_frame",
        "arrival",
        "selection_mode",
        "max_sic_iters",
        "target_plr",
        "rel_tol",
        "load_min",
        "load_max",
    ]);
    let defaults = NomaConfig::default();
    let slots_per_frame: u32 = r.get("scenario.slots_per_frame", defaults.slots_per_frame);
    if !(1..=255).contains(&slots_per_frame) {
        r.problems.push(format!(
            "scenario.slots_per_frame = {slots_per_frame} out of range [1, 255]"
        ));
    }
    let d: u32 = r.get("scenario.d", defaults.d);
    if d == 0 || d > slots_per_frame {
        r.problems
            .push(format!("scenario.d = {d} out of range [1, {slots_per_frame}]"));
    }
    let config = NomaConfig {
        slots_per_frame,
        re_per_slot: code.n_re,
        payload_bits: code.k_bits,
        d,
        avg_snr_db,
        load_g: r.ranged("scenario.load", defaults.load_g, 0.0, 1e6),
        arrival: r.get("scenario.arrival", Arrival::Deterministic),
        strategy: r.get("scenario.strategy", Strategy::LowRate),
        selection_mode: r.get("scenario.selection_mode", SelectionMode::BestSlotOnly),
        max_sic_iters: r.at_least("scenario.max_sic_iters", defaults.max_sic_iters, 1),
    };
    let search = r.opt::<f64>("scenario.target_plr").map(|target_plr| {
        if !(target_plr > 0.0 && target_plr < 1.0) {
            r.problems
                .push(format!("scenario.target_plr = {target_plr} out of range (0, 1)"));
        }
        let lo = r.ranged("scenario.load_min", 0.25, 0.0, 1e6);
        let hi = r.ranged("scenario.load_max", 3.0, 0.0, 1e6);
        if lo >= hi {
            r.problems.push(format!(
                "scenario.load_min = {lo} must be below scenario.load_max = {hi}"
            ));
        }
        LoadSearch {
            target_plr,
            rel_tol: r.ranged("scenario.rel_tol", 0.05, 1e-6, 1.0),
            bracket: (lo, hi),
        }
    });
    NomaScenario { config, search }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn book_lists_every_key() {
        let book = include_str!("../../../book/src/cli.md");
        for (key, _) in KEYS {
            let (section, name) = key.split_once('.').unwrap();
            assert!(book.contains(&format!("### [{section}]")), "{section}");
            assert!(book.contains(&format!("| `{name}` |")), "{key} missing from the book");
        }
    }

    #[test]
    fn minimal_noma_gets_defaults() {
        let c = ScenarioConfig::from_text("[scenario]\nkind = noma\nstrategy = lowrate\nd = 4\nload = 2.0\n").unwrap();
        let Scenario::Noma(n) = c.scenario else {
            panic!("not noma")
        };
        assert_eq!(n.config.slots_per_frame, 14);
        assert_eq!(n.config.re_per_slot, 240);
        assert_eq!(n.config.payload_bits, 256);
        assert_eq!(n.config.avg_snr_db, 9.0);
        assert_eq!(n.config.load_g, 2.0);
        assert_eq!(n.config.strategy, Strategy::LowRate);
        assert_eq!(n.search, None);
        assert_eq!(c.seed, 1);
        assert_eq!(c.timing, TimingConfig::default());
        assert_eq!(c.output.prefix, "noma");
    }

    #[test]
    fn alpha_out_of_range_names_key_and_range() {
        let err = ScenarioConfig::from_text("[scenario]\nkind = harq\n[phy]\nalpha = 1.5\n").unwrap_err();
        let Error::Config(msg) = err else { panic!("{err:?}") };
        assert!(msg.contains("phy.alpha = 1.5 out of range [0, 1]"), "{msg}");
    }

    #[test]
    fn all_problems_reported_together() {
        let text = "[scenario]\nkind = noma\nd = 0\nbogus = 1\n[timing]\nscs_khz = 45\n[phy]\nk_bits = x\n";
        let Error::Config(msg) = ScenarioConfig::from_text(text).unwrap_err() else {
            panic!()
        };
        for needle in [
            "unknown key scenario.bogus",
            "scenario.d = 0",
            "timing.scs_khz = 45",
            "phy.k_bits = 'x'",
        ] {
            assert!(msg.contains(needle), "missing {needle} in {msg}");
        }
    }

    #[test]
    fn missing_scenario_is_an_error() {
        let msg = ScenarioConfig::from_text("[timing]\nscs_khz = 30\n")
            .unwrap_err()
            .to_string();
        assert!(msg.contains("missing [scenario]"), "{msg}");
    }

    #[test]
    fn structural_errors() {
        assert!(RawConfig::parse("seed = 3\n[scenario]\nkind = noma\n").is_err());
        assert!(RawConfig::parse("[scenario]\nkind = noma\n[extra]\nx = 1\n").is_err());
        assert!(RawConfig::parse("[scenario]\nkind = noma\nkind = harq\n").is_err());
        let msg = ScenarioConfig::from_text("[scenario]\nkind = noma\nscheme = reactive\n")
            .unwrap_err()
            .to_string();
        assert!(msg.contains("does not apply"), "{msg}");
    }

    #[test]
    fn overrides_and_echo() {
        let mut raw =
            RawConfig::parse("# comment\n[scenario]\nkind = harq\nseed = 3\nsuccess_probs = 0.9, 1.0\n").unwrap();
        raw.set("scenario.seed", "7").unwrap();
        assert!(raw.set("scenario.nope", "1").is_err());
        let c = ScenarioConfig::from_raw(&raw).unwrap();
        assert_eq!(c.seed, 7);
        let Scenario::Harq(h) = &c.scenario else { panic!() };
        assert_eq!(h.model, AttemptModel::Fixed(vec![0.9, 1.0]));
        let again = ScenarioConfig::from_text(&raw.to_text()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn harq_and_hybrid_defaults() {
        let c = ScenarioConfig::from_text("[scenario]\nkind = harq\nscheme = krep\nk = 3\n").unwrap();
        let Scenario::Harq(h) = c.scenario else { panic!() };
        assert_eq!(h.scheme, HarqScheme::KRepetition { k: 3 });
        assert_eq!(h.max_attempts, 3);
        assert!(matches!(h.model, AttemptModel::Fbl(_)));
        let c = ScenarioConfig::from_text("[scenario]\nkind = hybrid\n").unwrap();
        let Scenario::Hybrid(h) = c.scenario else { panic!() };
        assert_eq!(h.config, HybridConfig::default());
        assert_eq!(h.sizing.snr_db, -5.4);
    }

    #[test]
    fn every_key_has_a_known_section() {
        for (k, _) in KEYS {
            let (section, _) = k.split_once('.').unwrap();
            assert!(SECTIONS.contains(&section), "{k}");
        }
    }
}
