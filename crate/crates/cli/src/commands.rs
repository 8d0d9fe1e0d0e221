use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use dbbound::ic_uc::{self, sumrate_vs_h};
use dbbound::mac_nf;
use dbbound::mac_uc;
use dbbound::regions::{format_sig9, linspace, union_frontier_par, DEFAULT_R1_POINTS};
use dbbound::{ChannelParams, RatePolytope, RegionFrontier};
use serde::Serialize;
use serde_json::json;

use crate::config::{Bound, Model, RunConfig};
use crate::output::{self, Exact, GridMeta, Sidecar};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Polytope family for the configured bound.
pub fn family(cfg: &RunConfig) -> Result<Vec<RatePolytope>, CliError> {
    let g = &cfg.grid;
    let fam = match (cfg.channel(), cfg.bound) {
        (ChannelParams::MacNf(p), Bound::Db) => match cfg.model {
            Model::MacNfCommon => mac_nf::db_region_nf_common(&p, g),
            _ if cfg.full_range => mac_nf::db_region_nf_bruteforce(&p, g),
            _ => mac_nf::db_region_nf(&p, g),
        },
        (ChannelParams::MacNf(p), Bound::Cutset) => mac_nf::cutset_region_nf(&p, g),
        (ChannelParams::MacNf(p), Bound::Nofb) => Ok(vec![mac_nf::nofeedback_capacity(&p)]),
        (ChannelParams::MacNf(p), Bound::Ozarow) => mac_nf::ozarow_reference(&p, g),
        (ChannelParams::MacUc(p), Bound::Db) => mac_uc::db_region_uc(&p, g),
        (ChannelParams::MacUc(p), Bound::Cutset) => mac_uc::cutset_region_uc(&p, g),
        (ChannelParams::MacUc(p), Bound::Nocoop) => Ok(vec![mac_uc::nocoop_capacity(&p)]),
        (ChannelParams::MacUc(p), Bound::Totalcoop) => {
            let s = mac_uc::total_coop_line(&p);
            Ok(vec![RatePolytope::pentagon(s, s, s)])
        }
        (ChannelParams::IcUc(p), Bound::Db) => ic_uc::db_region_ic(&p, g),
        (ChannelParams::IcUc(p), Bound::Cutset) => ic_uc::cutset_region_ic(&p, g),
        (ChannelParams::IcUc(p), Bound::Nocoop) => Ok(vec![ic_uc::nocoop_polytope_ic(&p)]),
        (_, b) => {
            return Err(CliError::Config(format!(
                "bound: `{b}` is not available for {}",
                cfg.model
            )))
        }
    };
    fam.map_err(CliError::from_core)
}

fn extent(fam: &[RatePolytope]) -> f64 {
    fam.iter().map(RatePolytope::r1_extent).fold(0.0, f64::max)
}

fn r1_grid(hi: f64) -> Vec<f64> {
    if hi > 0.0 {
        linspace(0.0, hi, DEFAULT_R1_POINTS)
    } else {
        vec![0.0]
    }
}

/// Frontier of the configured bound on `grid`. Cut-set families that are
/// monotone in the correlation are evaluated exactly; everything else is the
/// union of the sampled family.
fn frontier_on(
    cfg: &RunConfig,
    fam: &[RatePolytope],
    grid: &[f64],
    meta: String,
) -> Result<RegionFrontier, CliError> {
    let f = match (cfg.channel(), cfg.bound) {
        (ChannelParams::MacNf(p), Bound::Cutset) => mac_nf::cutset_frontier_nf(&p, grid),
        (ChannelParams::MacNf(p), Bound::Ozarow) => mac_nf::ozarow_frontier(&p, grid),
        (ChannelParams::MacUc(p), Bound::Cutset) => mac_uc::cutset_frontier_uc(&p, grid),
        _ => union_frontier_par(fam, grid),
    };
    let mut f = f.map_err(CliError::from_core)?;
    f.meta = meta;
    Ok(f)
}

fn sidecar(cfg: &RunConfig, command: &'static str, unit: &'static str) -> Sidecar {
    Sidecar {
        tool: "dbbound",
        version: env!("CARGO_PKG_VERSION"),
        command,
        model: cfg.model.to_string(),
        bound: (command == "bound").then(|| cfg.bound.to_string()),
        unit,
        params: cfg.params.iter().map(|(k, v)| (k.to_string(), Exact::from(*v))).collect(),
        grid: GridMeta {
            corr_step: cfg.grid.corr_step.into(),
            fine_samples: cfg.grid.fine_samples,
        },
        full_range: cfg.full_range,
        extra: BTreeMap::new(),
        wall_time_s: 0.0,
    }
}

pub struct BoundOptions {
    pub output: Option<PathBuf>,
    pub format: Format,
    pub convexify: bool,
    pub nats: bool,
}

#[derive(Serialize)]
struct FrontierJson<'a> {
    model: String,
    bound: String,
    unit: &'static str,
    convexified: bool,
    samples: &'a [(f64, f64)],
}

pub fn cmd_bound(cfg: &RunConfig, opts: &BoundOptions) -> Result<(), CliError> {
    let start = Instant::now();
    let fam = family(cfg)?;
    let meta = format!("{} {}", cfg.model, cfg.bound);
    let raw = frontier_on(cfg, &fam, &r1_grid(extent(&fam)), meta)?;
    let (envelope, improves) = raw.convexify();
    if improves {
        eprintln!("note: the concave envelope strictly enlarges this union");
    }
    let mut f = if opts.convexify { envelope } else { raw };
    let unit = if opts.nats { "nats" } else { "bits" };
    if opts.nats {
        f = f.scaled(std::f64::consts::LN_2);
    }

    let body = match opts.format {
        Format::Csv => f.to_csv_with_header(&format!("r1_{unit},r2_{unit}")),
        Format::Json => {
            let j = FrontierJson {
                model: cfg.model.to_string(),
                bound: cfg.bound.to_string(),
                unit,
                convexified: opts.convexify,
                samples: &f.samples,
            };
            serde_json::to_string_pretty(&j).expect("frontier serializes") + "\n"
        }
    };
    let sum = f.max_sum_rate();
    eprintln!(
        "{} {}: {} samples, R1 up to {} {unit}, max sum rate {} {unit}",
        cfg.model,
        cfg.bound,
        f.len(),
        format_sig9(f.r1_max()),
        format_sig9(sum)
    );

    match &opts.output {
        None => print!("{body}"),
        Some(path) => {
            output::write_atomic(path, body.as_bytes())?;
            let mut sc = sidecar(cfg, "bound", unit);
            sc.extra.insert("format".into(), json!(format!("{:?}", opts.format).to_lowercase()));
            sc.extra.insert("convexified".into(), json!(opts.convexify));
            sc.extra.insert("envelope_improves".into(), json!(improves));
            sc.extra.insert("samples".into(), json!(f.len()));
            sc.extra.insert("max_sum_rate".into(), json!(Exact::from(sum)));
            sc.wall_time_s = start.elapsed().as_secs_f64();
            output::write_sidecar(path, &sc)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub a: String,
    pub b: String,
    pub tol: f64,
    pub a_subset_b: bool,
    pub b_subset_a: bool,
    pub relation: &'static str,
    /// Largest vertical excess of B over A on the shared `R₁` grid.
    pub max_gap: f64,
    pub max_gap_r1: f64,
    pub max_gap_at_sum_point: bool,
    pub a_max_sum: f64,
    pub b_max_sum: f64,
}

/// Both frontiers are sampled on one shared `R₁` grid so the comparison is
/// point by point.
pub fn compare(
    a: &RunConfig,
    b: &RunConfig,
    tol: f64,
    names: (&Path, &Path),
) -> Result<CompareReport, CliError> {
    let fa = family(a)?;
    let fb = family(b)?;
    let grid = r1_grid(extent(&fa).max(extent(&fb)));
    let a_f = frontier_on(a, &fa, &grid, "a".into())?;
    let b_f = frontier_on(b, &fb, &grid, "b".into())?;
    let a_sub = dbbound::frontier_subset(&a_f, &b_f, tol);
    let b_sub = dbbound::frontier_subset(&b_f, &a_f, tol);
    let (mut gap, mut at) = (0.0, 0.0);
    for &(r1, ra) in &a_f.samples {
        let rb = b_f.value_at(r1).unwrap_or(0.0);
        if rb - ra > gap {
            (gap, at) = (rb - ra, r1);
        }
    }
    // Beyond A's extent B's own height is the gap.
    for &(r1, rb) in b_f.samples.iter().filter(|s| s.0 > a_f.r1_max()) {
        if rb > gap {
            (gap, at) = (rb, r1);
        }
    }
    let step = grid.get(1).copied().unwrap_or(0.0);
    let at_sum = a_f
        .sum_point()
        .zip(b_f.sum_point())
        .is_some_and(|(pa, pb)| (at - pa.0).abs() <= 2.0 * step || (at - pb.0).abs() <= 2.0 * step);
    let relation = match (a_sub, b_sub) {
        (true, true) => "A = B",
        (true, false) => "A ⊂ B, strict",
        (false, true) => "B ⊂ A, strict",
        (false, false) => "incomparable",
    };
    Ok(CompareReport {
        a: names.0.display().to_string(),
        b: names.1.display().to_string(),
        tol,
        a_subset_b: a_sub,
        b_subset_a: b_sub,
        relation,
        max_gap: gap,
        max_gap_r1: at,
        max_gap_at_sum_point: gap > tol && at_sum,
        a_max_sum: a_f.max_sum_rate(),
        b_max_sum: b_f.max_sum_rate(),
    })
}

/// `h_min, h_min + step, …` up to `h_max` (inclusive within rounding).
pub fn h_values(h_min: f64, h_max: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(h_min >= 0.0 && h_min.is_finite()) {
        return Err(CliError::Config(format!("h-min: {h_min} must be a finite value >= 0")));
    }
    if !(h_max >= h_min && h_max.is_finite()) {
        return Err(CliError::Config(format!("h-max: {h_max} must be finite and >= h-min")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(CliError::Config(format!("step: {step} must be > 0")));
    }
    let n = ((h_max - h_min) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| h_min + k as f64 * step).collect())
}

pub fn cmd_sweep_h(cfg: &RunConfig, hs: &[f64], out: Option<&Path>) -> Result<(), CliError> {
    let start = Instant::now();
    let ChannelParams::IcUc(p) = cfg.channel() else {
        return Err(CliError::Config(format!("model: sweep-h needs ic-uc, got {}", cfg.model)));
    };
    let rows = sumrate_vs_h(&p, hs, &cfg.grid).map_err(CliError::from_core)?;
    let mut body = String::from("h,db_sum_bits,cs_sum_bits\n");
    for r in &rows {
        body.push_str(&format!(
            "{},{},{}\n",
            format_sig9(r.h),
            format_sig9(r.db_sum),
            format_sig9(r.cs_sum)
        ));
    }
    match out {
        None => print!("{body}"),
        Some(path) => {
            output::write_atomic(path, body.as_bytes())?;
            let mut sc = sidecar(cfg, "sweep-h", "bits");
            sc.params.remove("h12");
            sc.params.remove("h21");
            sc.extra.insert(
                "h".into(),
                json!(hs.iter().map(|h| Exact::from(*h)).collect::<Vec<_>>()),
            );
            sc.wall_time_s = start.elapsed().as_secs_f64();
            output::write_sidecar(path, &sc)?;
        }
    }
    Ok(())
}

/// Runs every suite; returns whether all passed.
pub fn cmd_verify(seed: u64, n: usize, out: Option<&Path>) -> Result<bool, CliError> {
    eprintln!("verify: seed {seed}, {n} draws per suite");
    let report = dbbound::verify::run_all(seed, n).map_err(CliError::from_core)?;
    for s in &report.suites {
        eprintln!(
            "  {:<24} {:>6}/{:<6} worst {:.3e} (tol {:.0e})",
            s.name, s.passed, s.draws, s.worst, s.tolerance
        );
    }
    let body = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    match out {
        None => print!("{body}"),
        Some(path) => output::write_atomic(path, body.as_bytes())?,
    }
    Ok(report.passed)
}
