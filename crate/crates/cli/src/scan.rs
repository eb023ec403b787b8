//! Threshold scans over `(n, c)` grids and bisection on the constant `c`.

use std::io::Write;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use cliquetile_core::harness::{
    check_alpha_interval, decide_trial, edge_probability, mix_seed, prepare_trial, wilson, Base, Outcome, TrialResult,
    TrialSpec, WILSON_Z95,
};
use cliquetile_core::tiling::{Deadline, NoDeadline};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseKind {
    LowerBound,
    Random,
}

impl std::str::FromStr for BaseKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lower-bound" => Ok(BaseKind::LowerBound),
            "random" | "random-min-degree" => Ok(BaseKind::Random),
            _ => bail!("unknown base {s:?}; expected lower-bound or random"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub r: usize,
    pub k: usize,
    pub base: BaseKind,
    /// Minimum-degree fraction; required for the random base, derived from
    /// `gamma` for the lower-bound base.
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub gamma: Option<f64>,
    pub n: Vec<usize>,
    pub c: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Per-trial solver timeout; 0 disables it.
    #[serde(default)]
    pub timeout_ms: u64,
    #[serde(default)]
    pub pipeline: bool,
    /// Write zero timings so that repeated runs give identical files.
    #[serde(default)]
    pub no_timing: bool,
    /// Worker threads; 0 uses the rayon default.
    #[serde(default)]
    pub threads: usize,
}

impl ScanConfig {
    pub fn base(&self) -> Result<Base> {
        match self.base {
            BaseKind::LowerBound => {
                let gamma = self.gamma.context("the lower-bound base needs --gamma")?;
                if !(0.0..1.0).contains(&gamma) {
                    bail!("gamma = {gamma} outside [0, 1)");
                }
                Ok(Base::LowerBound { gamma })
            }
            BaseKind::Random => Ok(Base::Random {
                alpha: self.alpha.context("the random base needs --alpha")?,
            }),
        }
    }

    pub fn alpha(&self) -> Result<f64> {
        Ok(self.base()?.alpha(self.r, self.k))
    }

    /// Checks the grid and the alpha interval; returns warnings to print.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        let base = self.base()?;
        if let (BaseKind::LowerBound, Some(a)) = (self.base, self.alpha) {
            let derived = base.alpha(self.r, self.k);
            if (a - derived).abs() > 1e-9 {
                warnings.push(format!("alpha {a} ignored; the lower-bound base has alpha {derived}"));
            }
        }
        if let Some(w) = check_alpha_interval(self.r, self.k, base.alpha(self.r, self.k))? {
            warnings.push(w);
        }
        if self.n.is_empty() || self.c.is_empty() {
            bail!("n and c grids must be nonempty");
        }
        if let Some(n) = self.n.iter().find(|&&n| n == 0 || n % self.r != 0) {
            bail!("every n must be a positive multiple of r={}, got {n}", self.r);
        }
        if let Some(c) = self.c.iter().find(|&&c| !(c.is_finite() && c >= 0.0)) {
            bail!("c values must be finite and nonnegative, got {c}");
        }
        if self.trials == 0 {
            bail!("trials must be positive");
        }
        Ok(warnings)
    }

    fn cells(&self) -> Vec<(usize, f64)> {
        self.n
            .iter()
            .flat_map(|&n| self.c.iter().map(move |&c| (n, c)))
            .collect()
    }
}

/// `LO:HI:geom:STEPS`, `LO:HI:lin:STEPS`, or a comma-separated list.
pub fn parse_c_grid(s: &str) -> Result<Vec<f64>> {
    let fields: Vec<&str> = s.split(':').collect();
    if fields.len() == 1 {
        return parse_list(s);
    }
    let [lo, hi, kind, steps] = fields.as_slice() else {
        bail!("c grid must be LO:HI:geom:STEPS or a list, got {s:?}");
    };
    let lo: f64 = lo.parse().context("bad LO")?;
    let hi: f64 = hi.parse().context("bad HI")?;
    let steps: usize = steps.parse().context("bad STEPS")?;
    if steps == 0 || lo.is_nan() || hi.is_nan() || lo > hi {
        bail!("c grid needs LO <= HI and STEPS >= 1");
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let t = |i: usize| i as f64 / (steps - 1) as f64;
    match *kind {
        "geom" => {
            if lo <= 0.0 {
                bail!("a geometric grid needs LO > 0");
            }
            Ok((0..steps).map(|i| lo * (hi / lo).powf(t(i))).collect())
        }
        "lin" => Ok((0..steps).map(|i| lo + (hi - lo) * t(i)).collect()),
        _ => bail!("grid kind must be geom or lin, got {kind:?}"),
    }
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    s.split(',')
        .map(|x| x.trim().parse::<T>().with_context(|| format!("bad list entry {x:?}")))
        .collect()
}

/// One CSV row, columns in output order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub r: usize,
    pub k: usize,
    pub base: String,
    pub alpha: f64,
    pub gamma: Option<f64>,
    pub n: usize,
    pub c: f64,
    pub p: f64,
    pub trial: usize,
    pub seed: u64,
    pub outcome: String,
    pub leftover: usize,
    pub solver_ms: u64,
    pub total_ms: u64,
}

pub const CSV_COLUMNS: [&str; 14] = [
    "r",
    "k",
    "base",
    "alpha",
    "gamma",
    "n",
    "c",
    "p",
    "trial",
    "seed",
    "outcome",
    "leftover",
    "solver_ms",
    "total_ms",
];

#[derive(Clone, Debug, Serialize)]
pub struct StageJson {
    pub stage: u8,
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct JsonRecord {
    #[serde(flatten)]
    pub record: TrialRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stages: Option<Vec<StageJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parts: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct TrialRow {
    pub cell: usize,
    pub record: TrialRecord,
    pub result: TrialResult,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellSummary {
    pub n: usize,
    pub c: f64,
    pub p: f64,
    pub trials: usize,
    pub tiled: usize,
    pub timeouts: usize,
    pub rate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

struct InstantDeadline(Instant);

impl Deadline for InstantDeadline {
    fn expired(&self) -> bool {
        Instant::now() >= self.0
    }
}

fn run_one(cfg: &ScanConfig, base: Base, alpha: f64, cell: usize, n: usize, c: f64, trial: usize) -> Result<TrialRow> {
    let seed = mix_seed(cfg.seed, cell as u64, trial as u64);
    let spec = TrialSpec {
        r: cfg.r,
        k: cfg.k,
        base,
        n,
        c,
        seed,
        pipeline: cfg.pipeline,
    };
    let start = Instant::now();
    let inst = prepare_trial(&spec)?;
    let solve_start = Instant::now();
    let result = if cfg.timeout_ms == 0 {
        decide_trial(&spec, &inst, &NoDeadline)?
    } else {
        decide_trial(
            &spec,
            &inst,
            &InstantDeadline(solve_start + Duration::from_millis(cfg.timeout_ms)),
        )?
    };
    let (solver_ms, total_ms) = if cfg.no_timing {
        (0, 0)
    } else {
        (
            solve_start.elapsed().as_millis() as u64,
            start.elapsed().as_millis() as u64,
        )
    };
    let record = TrialRecord {
        r: cfg.r,
        k: cfg.k,
        base: base.name().to_string(),
        alpha,
        gamma: match base {
            Base::LowerBound { gamma } => Some(gamma),
            Base::Random { .. } => None,
        },
        n,
        c,
        p: result.p,
        trial,
        seed,
        outcome: result.outcome.label(),
        leftover: result.leftover,
        solver_ms,
        total_ms,
    };
    Ok(TrialRow { cell, record, result })
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("building the worker pool")
}

/// Runs every trial of every cell in parallel; rows come back ordered by
/// cell, then trial, whatever the scheduling.
pub fn run_scan(cfg: &ScanConfig) -> Result<Vec<TrialRow>> {
    cfg.validate()?;
    let base = cfg.base()?;
    let alpha = cfg.alpha()?;
    let jobs: Vec<(usize, usize, f64, usize)> = cfg
        .cells()
        .into_iter()
        .enumerate()
        .flat_map(|(cell, (n, c))| (0..cfg.trials).map(move |t| (cell, n, c, t)))
        .collect();
    pool(cfg.threads)?.install(|| {
        jobs.par_iter()
            .map(|&(cell, n, c, t)| run_one(cfg, base, alpha, cell, n, c, t))
            .collect::<Result<Vec<_>>>()
    })
}

pub fn summarize(cfg: &ScanConfig, rows: &[TrialRow]) -> Vec<CellSummary> {
    cfg.cells()
        .into_iter()
        .enumerate()
        .map(|(cell, (n, c))| {
            let mine: Vec<&TrialRow> = rows.iter().filter(|r| r.cell == cell).collect();
            let tiled = mine.iter().filter(|r| r.result.outcome == Outcome::Tiled).count();
            let timeouts = mine.iter().filter(|r| r.result.outcome == Outcome::Timeout).count();
            let (wilson_lo, wilson_hi) = wilson(tiled, mine.len(), WILSON_Z95);
            CellSummary {
                n,
                c,
                p: edge_probability(c, n, cfg.k),
                trials: mine.len(),
                tiled,
                timeouts,
                rate: if mine.is_empty() {
                    0.0
                } else {
                    tiled as f64 / mine.len() as f64
                },
                wilson_lo,
                wilson_hi,
            }
        })
        .collect()
}

pub fn write_csv<W: Write>(out: W, rows: &[TrialRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(CSV_COLUMNS)?;
    }
    for row in rows {
        w.serialize(&row.record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_jsonl<W: Write>(mut out: W, rows: &[TrialRow]) -> Result<()> {
    for row in rows {
        let rep = row.result.pipeline.as_ref();
        let rec = JsonRecord {
            record: row.record.clone(),
            stages: rep.map(|p| {
                p.stages
                    .iter()
                    .map(|s| StageJson {
                        stage: s.stage.id(),
                        name: s.stage.name(),
                        ok: s.ok,
                        detail: s.detail.clone(),
                    })
                    .collect()
            }),
            structure_size: rep.map(|p| p.structure_size),
            parts: rep.map(|p| p.parts),
        };
        serde_json::to_writer(&mut out, &rec)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_summary<W: Write>(mut out: W, summary: &[CellSummary]) -> Result<()> {
    writeln!(
        out,
        "{:>6} {:>10} {:>12} {:>7} {:>6} {:>8} {:>7} {:>17}",
        "n", "c", "p", "trials", "tiled", "timeout", "rate", "wilson95"
    )?;
    for s in summary {
        writeln!(
            out,
            "{:>6} {:>10.4} {:>12.6e} {:>7} {:>6} {:>8} {:>7.3} [{:.3}, {:.3}]",
            s.n, s.c, s.p, s.trials, s.tiled, s.timeouts, s.rate, s.wilson_lo, s.wilson_hi
        )?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BisectStatus {
    Converged,
    /// Even the smallest `c` tried reaches the target.
    CollapsedLow,
    /// Even the largest `c` tried stays below the target.
    NotBracketed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BisectResult {
    pub c_star: f64,
    pub lo: f64,
    pub hi: f64,
    pub status: BisectStatus,
    pub evaluations: Vec<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BisectParams {
    pub lo: f64,
    pub hi: f64,
    pub target: f64,
    /// Stop once `hi / lo <= 1 + tolerance`.
    pub tolerance: f64,
    /// Each widening step scales the offending end by this factor.
    pub widen_factor: f64,
    pub max_widen: usize,
}

impl Default for BisectParams {
    fn default() -> Self {
        BisectParams {
            lo: 0.1,
            hi: 10.0,
            target: 0.5,
            tolerance: 0.05,
            widen_factor: 4.0,
            max_widen: 4,
        }
    }
}

/// Geometric bisection for the smallest `c` with `rate(c) >= target`,
/// assuming `rate` is nondecreasing in `c`. A bracket that does not straddle
/// the target is widened up to `max_widen` times at the offending end.
pub fn bisect_constant(mut rate: impl FnMut(f64) -> Result<f64>, params: &BisectParams) -> Result<BisectResult> {
    let BisectParams {
        mut lo,
        mut hi,
        target,
        tolerance,
        widen_factor,
        max_widen,
    } = *params;
    if !(lo > 0.0 && lo < hi && tolerance > 0.0 && widen_factor > 1.0) {
        bail!("bisection needs 0 < lo < hi, tolerance > 0 and widen factor > 1");
    }
    let mut evals = Vec::new();
    let mut eval = |c: f64, evals: &mut Vec<(f64, f64)>| -> Result<f64> {
        let v = rate(c)?;
        evals.push((c, v));
        Ok(v)
    };
    let mut widened = 0;
    while eval(lo, &mut evals)? >= target {
        if widened == max_widen {
            return Ok(BisectResult {
                c_star: lo,
                lo,
                hi: lo,
                status: BisectStatus::CollapsedLow,
                evaluations: evals,
            });
        }
        hi = lo;
        lo /= widen_factor;
        widened += 1;
    }
    widened = 0;
    while eval(hi, &mut evals)? < target {
        if widened == max_widen {
            return Ok(BisectResult {
                c_star: hi,
                lo: hi,
                hi,
                status: BisectStatus::NotBracketed,
                evaluations: evals,
            });
        }
        lo = hi;
        hi *= widen_factor;
        widened += 1;
    }
    while hi / lo > 1.0 + tolerance {
        let mid = (lo * hi).sqrt();
        if eval(mid, &mut evals)? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(BisectResult {
        c_star: (lo * hi).sqrt(),
        lo,
        hi,
        status: BisectStatus::Converged,
        evaluations: evals,
    })
}

/// Tiling rate of one `(n, c)` cell under `cfg`.
pub fn cell_rate(cfg: &ScanConfig, n: usize, c: f64) -> Result<f64> {
    let one = ScanConfig {
        n: vec![n],
        c: vec![c],
        ..cfg.clone()
    };
    let rows = run_scan(&one)?;
    Ok(summarize(&one, &rows)[0].rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> ScanConfig {
        ScanConfig {
            r: 3,
            k: 2,
            base: BaseKind::LowerBound,
            alpha: None,
            gamma: Some(0.1),
            n: vec![12],
            c: vec![0.5, 5.0],
            trials: 4,
            seed: 7,
            timeout_ms: 0,
            pipeline: false,
            no_timing: true,
            threads: 2,
        }
    }

    #[test]
    fn grids() {
        let g = parse_c_grid("1:100:geom:3").unwrap();
        assert!((g[1] - 10.0).abs() < 1e-9 && (g[2] - 100.0).abs() < 1e-9);
        assert_eq!(parse_c_grid("0:1:lin:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_c_grid("0.05,5").unwrap(), vec![0.05, 5.0]);
        assert!(parse_c_grid("0:1:geom:3").is_err());
        assert!(parse_c_grid("1:2:cubic:3").is_err());
        assert!(parse_c_grid("2:1:lin:3").is_err());
    }

    #[test]
    fn validation() {
        assert!(config().validate().is_ok());
        let mut bad = config();
        bad.n = vec![10];
        assert!(bad.validate().is_err());
        let edgeless = ScanConfig {
            k: 3,
            base: BaseKind::Random,
            alpha: Some(0.0),
            gamma: None,
            ..config()
        };
        let msg = format!("{}", edgeless.validate().unwrap_err());
        assert!(msg.contains("interval"), "{msg}");
    }

    #[test]
    fn rows_are_ordered_and_deterministic() {
        let cfg = config();
        let a = run_scan(&cfg).unwrap();
        assert_eq!(a.len(), 8);
        for (i, row) in a.iter().enumerate() {
            assert_eq!(row.cell, i / 4);
            assert_eq!(row.record.trial, i % 4);
        }
        let mut x = Vec::new();
        let mut y = Vec::new();
        write_csv(&mut x, &a).unwrap();
        write_csv(&mut y, &run_scan(&ScanConfig { threads: 1, ..cfg }).unwrap()).unwrap();
        assert_eq!(x, y);
        let header = String::from_utf8(x).unwrap();
        assert!(header.starts_with(&CSV_COLUMNS.join(",")));
    }

    #[test]
    fn summary_counts_rows() {
        let cfg = config();
        let rows = run_scan(&cfg).unwrap();
        let s = summarize(&cfg, &rows);
        assert_eq!(s.iter().map(|c| c.trials).sum::<usize>(), rows.len());
        assert!(s.iter().all(|c| c.wilson_lo <= c.rate && c.rate <= c.wilson_hi));
    }

    #[test]
    fn bisection_on_a_step() {
        let r = bisect_constant(|c| Ok(if c >= 2.0 { 1.0 } else { 0.0 }), &BisectParams::default()).unwrap();
        assert_eq!(r.status, BisectStatus::Converged);
        assert!(r.lo < 2.0 && 2.0 <= r.hi && r.hi / r.lo <= 1.05);
        let all = bisect_constant(|_| Ok(1.0), &BisectParams::default()).unwrap();
        assert_eq!(all.status, BisectStatus::CollapsedLow);
        let none = bisect_constant(|_| Ok(0.0), &BisectParams::default()).unwrap();
        assert_eq!(none.status, BisectStatus::NotBracketed);
        let far = bisect_constant(|c| Ok(if c >= 50.0 { 1.0 } else { 0.0 }), &BisectParams::default()).unwrap();
        assert_eq!(far.status, BisectStatus::Converged);
        assert!(far.lo < 50.0 && 50.0 <= far.hi);
    }
}
