use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use gfra_core::config::{HarqScenario, HybridScenario, NomaScenario, RawConfig, Scenario, ScenarioConfig};
use gfra_core::harq::simulate_harq;
use gfra_core::hybrid::{hybrid_outage, resource_efficiency};
use gfra_core::noma::{estimate_plr, NomaConfig, NomaEstimate};
use gfra_core::report::{self, Table};
use gfra_core::rng::RngPlan;
use gfra_core::stats::{supported_load, SupportedLoad};
use gfra_core::{Error, Result};
use serde_json::{json, Value};

/// One sweep dimension: a config key and its values.
#[derive(Debug, Clone)]
pub struct Axis {
    pub key: String,
    pub values: Vec<String>,
}

impl Axis {
    pub fn parse(spec: &str) -> Result<Self> {
        let (key, values) = spec
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("sweep axis '{spec}' must look like section.key=v1,v2")))?;
        let values: Vec<String> = values
            .split(',')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .map(String::from)
            .collect();
        if values.is_empty() {
            return Err(Error::Config(format!("sweep axis '{key}' has no values")));
        }
        let key = key.trim().to_string();
        if key == "scenario.kind" {
            return Err(Error::Config("scenario.kind cannot be swept".into()));
        }
        Ok(Self { key, values })
    }
}

#[derive(Debug, Clone)]
pub struct Grid {
    pub axes: Vec<Axis>,
}

impl Grid {
    fn points(&self) -> Vec<Vec<(String, String)>> {
        let mut points = vec![Vec::new()];
        for axis in &self.axes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.values.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push((axis.key.clone(), v.clone()));
                        q
                    })
                })
                .collect();
        }
        points
    }
}

struct Run {
    dir: PathBuf,
    outputs: Vec<String>,
    runtimes: Vec<Value>,
    extra: serde_json::Map<String, Value>,
}

impl Run {
    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| Error::Io(format!("writing {}: {e}", path.display())))?;
        self.outputs.push(path.display().to_string());
        Ok(())
    }

    fn timed<T>(&mut self, label: String, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let t0 = Instant::now();
        let out = f()?;
        self.runtimes
            .push(json!({ "run": label, "seconds": t0.elapsed().as_secs_f64() }));
        Ok(out)
    }
}

pub fn execute(raw: &RawConfig, grid: Option<&Grid>, gnuplot_hints: bool) -> Result<()> {
    let base = ScenarioConfig::from_raw(raw)?;
    let dir = PathBuf::from(&base.output.dir);
    fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("creating {}: {e}", dir.display())))?;
    let mut run = Run {
        dir,
        outputs: Vec::new(),
        runtimes: Vec::new(),
        extra: serde_json::Map::new(),
    };
    match grid {
        None => run_single(&base, &mut run)?,
        Some(grid) => run_sweep(raw, &base, grid, &mut run)?,
    }
    write_manifest(raw, &base, grid, &mut run)?;
    if gnuplot_hints {
        print_hints(&base, grid.is_some(), &run.outputs);
    }
    Ok(())
}

fn plan(cfg: &ScenarioConfig) -> RngPlan {
    RngPlan::new(cfg.seed)
}

/// Main table of one scenario: header plus rows.
fn scenario_rows(cfg: &ScenarioConfig, run: &mut Run) -> Result<(&'static [&'static str], Vec<Vec<String>>)> {
    match &cfg.scenario {
        Scenario::Harq(h) => {
            let out = harq(cfg, h, run)?;
            Ok((
                &report::HARQ_OUTAGE_HEADER,
                vec![report::harq_outage_row(&out, h.deadline_ms)],
            ))
        }
        Scenario::Hybrid(h) => Ok((&report::HYBRID_HEADER, vec![hybrid(cfg, h, run)?])),
        Scenario::Noma(n) => {
            if n.search.is_some() {
                return Err(Error::Config(
                    "scenario.target_plr cannot be combined with a sweep".into(),
                ));
            }
            let est = noma_point(cfg, &n.config, run)?;
            Ok((&report::NOMA_HEADER, vec![report::noma_row(&est)]))
        }
    }
}

fn harq(cfg: &ScenarioConfig, h: &HarqScenario, run: &mut Run) -> Result<gfra_core::harq::HarqOutcome> {
    let label = format!("harq {}", h.scheme.label());
    let out = run.timed(label, || {
        simulate_harq(
            h.scheme,
            &h.model,
            &cfg.timing,
            h.max_attempts,
            cfg.replications,
            None,
            plan(cfg),
        )
    })?;
    let (outage, ci) = out.outage(h.deadline_ms);
    eprintln!(
        "{}: {} packets, outage at {} ms = {outage:.3e} {}",
        out.label,
        out.packets,
        h.deadline_ms,
        report::fmt_ci(&ci)
    );
    Ok(out)
}

fn hybrid(cfg: &ScenarioConfig, h: &HybridScenario, run: &mut Run) -> Result<Vec<String>> {
    let c = &h.config;
    let label = format!(
        "hybrid N={} R={} d={} eps1={}",
        c.n_users, c.pool_size, c.attempts, c.initial_bler
    );
    let out = run.timed(label.clone(), || {
        hybrid_outage(c, &cfg.timing, cfg.replications, plan(cfg))
    })?;
    let bits_per_re = resource_efficiency(c, h.sizing, 1.0 - out.plr())
        .ok()
        .map(|e| e.hybrid_bits_per_re);
    eprintln!(
        "{label}: {} packets, {} lost, PLR {:.3e} {}",
        out.packets,
        out.losses,
        out.plr(),
        report::fmt_ci(&out.ci())
    );
    Ok(report::hybrid_row(c, &out, bits_per_re))
}

fn noma_point(cfg: &ScenarioConfig, c: &NomaConfig, run: &mut Run) -> Result<NomaEstimate> {
    let label = format!("noma {} d={} G={}", c.strategy.label(), c.d, c.load_g);
    let est = run.timed(label.clone(), || estimate_plr(c, cfg.replications, plan(cfg)))?;
    eprintln!(
        "{label}: {} frames, {} packets, {} lost, PLR {:.3e} {}",
        est.frames,
        est.packets(),
        est.losses(),
        est.point.plr,
        report::fmt_ci(&est.point.ci)
    );
    Ok(est)
}

fn run_single(cfg: &ScenarioConfig, run: &mut Run) -> Result<()> {
    let prefix = cfg.output.prefix.clone();
    match &cfg.scenario {
        Scenario::Harq(h) => {
            let out = harq(cfg, h, run)?;
            let hist = report::to_csv(&report::HARQ_HISTOGRAM_HEADER, &report::harq_histogram_rows(&out))?;
            run.write(&format!("{prefix}_histogram.csv"), &hist)?;
            let outage = report::to_csv(
                &report::HARQ_OUTAGE_HEADER,
                &[report::harq_outage_row(&out, h.deadline_ms)],
            )?;
            run.write(&format!("{prefix}_outage.csv"), &outage)?;
            let ccdf = report::to_csv(&report::CCDF_HEADER, &report::ccdf_rows(&out.ccdf()))?;
            run.write(&format!("{prefix}_ccdf.csv"), &ccdf)?;
        }
        Scenario::Hybrid(h) => {
            let row = hybrid(cfg, h, run)?;
            run.write(
                &format!("{prefix}.csv"),
                &report::to_csv(&report::HYBRID_HEADER, &[row])?,
            )?;
        }
        Scenario::Noma(NomaScenario { config, search: None }) => {
            let est = noma_point(cfg, config, run)?;
            run.write(
                &format!("{prefix}.csv"),
                &report::to_csv(&report::NOMA_HEADER, &[report::noma_row(&est)])?,
            )?;
        }
        Scenario::Noma(NomaScenario {
            config,
            search: Some(search),
        }) => {
            config.validate()?;
            let mut estimates = Vec::new();
            let t0 = Instant::now();
            let found = supported_load(
                |g| {
                    let c = NomaConfig {
                        load_g: g,
                        ..config.clone()
                    };
                    let est = estimate_plr(&c, cfg.replications, plan(cfg)).expect("config validated above");
                    eprintln!(
                        "  G = {g}: {} packets, {} lost, PLR {:.3e} {}",
                        est.packets(),
                        est.losses(),
                        est.point.plr,
                        report::fmt_ci(&est.point.ci)
                    );
                    estimates.push(est);
                    est.point
                },
                search.target_plr,
                search.rel_tol,
                search.bracket,
            );
            run.runtimes
                .push(json!({ "run": "noma supported_load", "seconds": t0.elapsed().as_secs_f64() }));
            let rows: Vec<Vec<String>> = estimates.iter().map(report::noma_row).collect();
            run.write(&format!("{prefix}.csv"), &report::to_csv(&report::NOMA_HEADER, &rows)?)?;
            let found: SupportedLoad = found?;
            eprintln!(
                "supported load {} (next {} above target){}",
                found.load,
                found.upper_load,
                if found.resolved {
                    ""
                } else {
                    ", stopped at an unresolved point"
                }
            );
            run.extra.insert(
                "supported_load".into(),
                json!({
                    "target_plr": search.target_plr,
                    "load": found.load,
                    "upper_load": found.upper_load,
                    "resolved": found.resolved,
                    "evaluations": found.evaluations.len(),
                }),
            );
        }
    }
    Ok(())
}

fn run_sweep(raw: &RawConfig, base: &ScenarioConfig, grid: &Grid, run: &mut Run) -> Result<()> {
    let keys: Vec<&str> = grid.axes.iter().map(|a| a.key.as_str()).collect();
    let mut table: Option<Table<Vec<u8>>> = None;
    for point in grid.points() {
        let mut r = raw.clone();
        for (k, v) in &point {
            r.set(k, v.clone())?;
        }
        let cfg = ScenarioConfig::from_raw(&r)?;
        let (header, rows) = scenario_rows(&cfg, run)?;
        let t = match &mut table {
            Some(t) => t,
            None => table.insert(Table::new(Vec::new(), &keys, header)?),
        };
        let prefix: Vec<String> = point.iter().map(|(_, v)| v.clone()).collect();
        for row in rows {
            t.row(&prefix, &row)?;
        }
    }
    let bytes = table.expect("grid has at least one point").finish()?;
    run.write(&format!("{}_sweep.csv", base.output.prefix), &bytes)
}

fn write_manifest(raw: &RawConfig, cfg: &ScenarioConfig, grid: Option<&Grid>, run: &mut Run) -> Result<()> {
    let mut manifest = json!({
        "tool": "gfra-sim",
        "version": env!("CARGO_PKG_VERSION"),
        "scenario": cfg.scenario.kind(),
        "seed": cfg.seed,
        "replications": cfg.replications,
        "config": raw.to_text(),
        "resolved": format!("{cfg:#?}"),
        "sweep": grid.map(|g| g.axes.iter().map(|a| json!({ "key": a.key, "values": a.values })).collect::<Vec<_>>()),
        "runtimes": run.runtimes,
        "outputs": run.outputs,
    });
    if let Value::Object(m) = &mut manifest {
        m.extend(run.extra.clone());
    }
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Io(e.to_string()))?;
    let path: PathBuf = run.dir.join("manifest.json");
    fs::write(&path, text + "\n").map_err(|e| Error::Io(format!("writing {}: {e}", path.display())))
}

fn print_hints(cfg: &ScenarioConfig, sweep: bool, outputs: &[String]) {
    let file = |suffix: &str| {
        outputs
            .iter()
            .find(|o| o.ends_with(suffix))
            .map(|o| Path::new(o).display().to_string())
    };
    println!("# gnuplot");
    println!("set datafile separator ','");
    match (&cfg.scenario, sweep) {
        (Scenario::Harq(_), false) => {
            if let Some(f) = file("_ccdf.csv") {
                println!("set logscale y; set xlabel 'latency [ms]'; set ylabel 'CCDF'");
                println!("plot '{f}' every ::1 using 1:2 with steps title 'latency CCDF'");
            }
        }
        (Scenario::Noma(_), false) => {
            if let Some(f) = file(".csv") {
                println!("set logscale y; set xlabel 'load G'; set ylabel 'PLR'");
                println!("plot '{f}' every ::1 using 3:7:8:9 with yerrorbars title 'PLR'");
            }
        }
        _ => {
            if let Some(f) = outputs.first() {
                println!("set logscale y");
                println!("plot '{f}' every ::1 using 1:(column(\"plr\")) with linespoints");
            }
        }
    }
}
