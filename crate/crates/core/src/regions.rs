//! Rate-region geometry: pentagon-type polytopes, sampled union frontiers and
//! inclusion tests.
//!
//! Every region produced by this crate is a union of polytopes of the form
//! `{R₁ ≤ a, R₂ ≤ b, R₁ + R₂ ≤ s}`. Several individual or sum constraints
//! collapse to their minimum, so a polytope is stored as the triple
//! `(a, b, s)`. Families can run to millions of members, which is why the
//! union is accumulated into a fixed-size table rather than materialized.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::RHO_MAX;

/// Half-plane `w1·R₁ + w2·R₂ ≤ c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub w1: f64,
    pub w2: f64,
    pub c: f64,
}

impl Constraint {
    pub fn r1(c: f64) -> Self {
        Self { w1: 1.0, w2: 0.0, c }
    }
    pub fn r2(c: f64) -> Self {
        Self { w1: 0.0, w2: 1.0, c }
    }
    pub fn sum(c: f64) -> Self {
        Self { w1: 1.0, w2: 1.0, c }
    }
}

/// `{R₁ ≤ r1_max, R₂ ≤ r2_max, R₁ + R₂ ≤ sum_max, R ≥ 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePolytope {
    pub r1_max: f64,
    pub r2_max: f64,
    pub sum_max: f64,
}

impl RatePolytope {
    pub fn pentagon(r1_max: f64, r2_max: f64, sum_max: f64) -> Self {
        debug_assert!(r1_max >= 0.0 && r2_max >= 0.0 && sum_max >= 0.0);
        Self {
            r1_max,
            r2_max,
            sum_max,
        }
    }

    /// Intersects the given half-planes. Only the weights `(1,0)`, `(0,1)`
    /// and `(1,1)` are supported; missing kinds are unconstrained.
    pub fn from_constraints(constraints: &[Constraint]) -> Result<Self> {
        let mut p = Self::pentagon(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        for k in constraints {
            if !(k.c >= 0.0) {
                return Err(Error::InvalidParams {
                    field: "c",
                    value: k.c,
                    reason: "rate bounds must be nonnegative",
                });
            }
            match (k.w1, k.w2) {
                (w1, w2) if w1 == 1.0 && w2 == 0.0 => p.r1_max = p.r1_max.min(k.c),
                (w1, w2) if w1 == 0.0 && w2 == 1.0 => p.r2_max = p.r2_max.min(k.c),
                (w1, w2) if w1 == 1.0 && w2 == 1.0 => p.sum_max = p.sum_max.min(k.c),
                (w1, _) => {
                    return Err(Error::InvalidParams {
                        field: "w1",
                        value: w1,
                        reason: "weights must be (1,0), (0,1) or (1,1)",
                    })
                }
            }
        }
        Ok(p)
    }

    pub fn constraints(&self) -> [Constraint; 3] {
        [
            Constraint::r1(self.r1_max),
            Constraint::r2(self.r2_max),
            Constraint::sum(self.sum_max),
        ]
    }

    /// Largest feasible `R₁` (the sum constraint can cut the individual one).
    pub fn r1_extent(&self) -> f64 {
        self.r1_max.min(self.sum_max)
    }

    pub fn r2_extent(&self) -> f64 {
        self.r2_max.min(self.sum_max)
    }

    pub fn max_sum(&self) -> f64 {
        self.sum_max.min(self.r1_extent() + self.r2_extent())
    }

    pub fn contains(&self, r1: f64, r2: f64, tol: f64) -> bool {
        r1 >= -tol
            && r2 >= -tol
            && r1 <= self.r1_max + tol
            && r2 <= self.r2_max + tol
            && r1 + r2 <= self.sum_max + tol
    }

    /// Scales every bound, e.g. to convert bits to nats.
    pub fn scaled(&self, k: f64) -> Self {
        Self::pentagon(self.r1_max * k, self.r2_max * k, self.sum_max * k)
    }
}

/// `max{R₂ ≥ 0 : (r1, R₂) ∈ p}`, or `None` when `r1` is outside the polytope.
pub fn polytope_max_r2(p: &RatePolytope, r1: f64) -> Option<f64> {
    if r1 < 0.0 || r1 > p.r1_max || r1 > p.sum_max {
        return None;
    }
    Some(p.r2_max.min(p.sum_max - r1))
}

/// Largest `R₁ + R₂` over the union of a family.
pub fn max_sum_rate<'a, I>(family: I) -> Result<f64>
where
    I: IntoIterator<Item = &'a RatePolytope>,
{
    family
        .into_iter()
        .map(RatePolytope::max_sum)
        .reduce(f64::max)
        .ok_or(Error::EmptyFamily)
}

/// Correlation sweep resolution shared by the region generators.
///
/// `corr_step` spaces the outer `(ρ₁ₜ, ρ₂ₜ)` grid; `fine_samples` sets the
/// spacing `1/(fine_samples-1)` of the inner one-dimensional sweeps (the
/// `ρ₁₂` offset for the feedback MAC and `ρ` for the cut-set bounds).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub corr_step: f64,
    pub fine_samples: usize,
}

impl SweepGrid {
    pub const fn new(corr_step: f64, fine_samples: usize) -> Self {
        Self {
            corr_step,
            fine_samples,
        }
    }

    /// Default for the feedback MAC; the frontier is insensitive to the outer grid.
    pub const fn feedback_default() -> Self {
        Self::new(0.05, 1001)
    }

    /// Default for the cooperation models: 201×201 over `[0, 1-1e-6]²`.
    pub const fn cooperation_default() -> Self {
        Self::new(0.005, 1001)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.corr_step > 0.0 && self.corr_step <= 0.2) {
            return Err(Error::InvalidGrid("corr_step must lie in (0, 0.2]"));
        }
        if self.fine_samples < 2 {
            return Err(Error::InvalidGrid("fine_samples must be >= 2"));
        }
        Ok(())
    }

    pub fn fine_step(&self) -> f64 {
        1.0 / (self.fine_samples - 1) as f64
    }

    /// `{0, step, 2·step, …} ∩ [0, 1-1e-6)` followed by `1-1e-6`.
    pub fn corr_values(&self) -> Vec<f64> {
        step_values(self.corr_step, RHO_MAX)
    }

    /// The correlation grid mirrored onto `[-(1-1e-6), 1-1e-6]`.
    pub fn symmetric_corr_values(&self) -> Vec<f64> {
        let pos = self.corr_values();
        let mut out: Vec<f64> = pos.iter().skip(1).rev().map(|v| -v).collect();
        out.extend(pos);
        out
    }

    /// Fine sweep over `[0, hi]`, always including `hi`.
    pub fn fine_values(&self, hi: f64) -> Vec<f64> {
        step_values(self.fine_step(), hi)
    }
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self::feedback_default()
    }
}

fn step_values(step: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let v = k as f64 * step;
        if v >= hi - 1e-12 {
            break;
        }
        out.push(v);
        k += 1;
    }
    out.push(hi.max(0.0));
    out
}

/// `n` evenly spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Default `R₁` grid points.
pub const DEFAULT_R1_POINTS: usize = 401;

/// `DEFAULT_R1_POINTS` points from 0 to the largest feasible `R₁` of the family.
pub fn default_r1_grid(family: &[RatePolytope]) -> Result<Vec<f64>> {
    let hi = family
        .iter()
        .map(RatePolytope::r1_extent)
        .reduce(f64::max)
        .ok_or(Error::EmptyFamily)?;
    if hi <= 0.0 {
        return Ok(vec![0.0]);
    }
    Ok(linspace(0.0, hi, DEFAULT_R1_POINTS))
}

const GRID_TOL: f64 = 1e-12;

/// Pointwise maximum of pentagon profiles over a fixed `R₁` grid.
///
/// A pentagon's profile is `b'` on `[0, s-b']` and `s - r₁` on `[s-b', a']`
/// with `a' = min(a, s)`, `b' = min(b, s)`. The first piece is a prefix
/// maximum; the second is a range-chmax of `s`, stored in a sparse table and
/// pushed down once at the end. Adding a polytope costs `O(log n)`.
#[derive(Debug, Clone)]
pub struct FrontierAccumulator {
    grid: Vec<f64>,
    // flat[i]: largest b' among polytopes whose flat piece reaches grid[i]
    flat_end: Vec<f64>,
    // levels[k][i]: chmax of s over indices [i, i + 2^k)
    levels: Vec<Vec<f64>>,
    // largest index covered by any polytope
    reach: Option<usize>,
}

impl FrontierAccumulator {
    pub fn new(grid: Vec<f64>) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::InvalidGrid("r1 grid is empty"));
        }
        if grid[0] < 0.0 || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid(
                "r1 grid must be nonnegative and strictly increasing",
            ));
        }
        let n = grid.len();
        let depth = usize::BITS as usize - n.leading_zeros() as usize;
        Ok(Self {
            flat_end: vec![f64::NEG_INFINITY; n],
            levels: vec![vec![f64::NEG_INFINITY; n]; depth],
            grid,
            reach: None,
        })
    }

    /// Number of grid points `≤ x` (with a small tolerance).
    fn count_le(&self, x: f64) -> usize {
        self.grid.partition_point(|&g| g <= x + GRID_TOL)
    }

    /// Index of the first grid point `≥ x`.
    fn first_ge(&self, x: f64) -> usize {
        self.grid.partition_point(|&g| g < x - GRID_TOL)
    }

    pub fn add(&mut self, p: &RatePolytope) {
        let a = p.r1_extent();
        let b = p.r2_extent();
        let s = p.sum_max;
        let end = self.count_le(a);
        if end == 0 {
            return;
        }
        let last = end - 1;
        self.reach = Some(self.reach.map_or(last, |r| r.max(last)));

        let knee = s - b;
        let flat_last = self.count_le(knee.min(a)).checked_sub(1);
        if let Some(i) = flat_last {
            if b > self.flat_end[i] {
                self.flat_end[i] = b;
            }
        }
        let lo = self.first_ge(knee).max(flat_last.map_or(0, |i| i + 1));
        if lo <= last {
            self.chmax_range(lo, last, s);
        }
    }

    fn chmax_range(&mut self, lo: usize, hi: usize, v: f64) {
        let len = hi - lo + 1;
        let k = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let row = &mut self.levels[k];
        let j = hi + 1 - (1 << k);
        if v > row[lo] {
            row[lo] = v;
        }
        if v > row[j] {
            row[j] = v;
        }
    }

    pub fn extend<'a, I: IntoIterator<Item = &'a RatePolytope>>(&mut self, family: I) {
        for p in family {
            self.add(p);
        }
    }

    /// Pointwise max with another accumulator over the same grid.
    pub fn merge(&mut self, other: &Self) {
        assert_eq!(self.grid, other.grid, "accumulators use different grids");
        for (x, y) in self.flat_end.iter_mut().zip(&other.flat_end) {
            *x = x.max(*y);
        }
        for (row, orow) in self.levels.iter_mut().zip(&other.levels) {
            for (x, y) in row.iter_mut().zip(orow) {
                *x = x.max(*y);
            }
        }
        self.reach = match (self.reach, other.reach) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }

    pub fn is_empty(&self) -> bool {
        self.reach.is_none()
    }

    pub fn finish(mut self, meta: impl Into<String>) -> Result<RegionFrontier> {
        let reach = self.reach.ok_or(Error::EmptyFamily)?;
        let n = self.grid.len();
        for k in (1..self.levels.len()).rev() {
            let half = 1 << (k - 1);
            let (lower, upper) = self.levels.split_at_mut(k);
            let (src, dst) = (&upper[0], &mut lower[k - 1]);
            for i in 0..n {
                let v = src[i];
                if v == f64::NEG_INFINITY {
                    continue;
                }
                dst[i] = dst[i].max(v);
                if i + half < n {
                    dst[i + half] = dst[i + half].max(v);
                }
            }
        }
        let sums = &self.levels[0];
        let mut r2 = vec![f64::NEG_INFINITY; reach + 1];
        let mut flat = f64::NEG_INFINITY;
        for i in (0..=reach).rev() {
            flat = flat.max(self.flat_end[i]);
            r2[i] = flat.max(sums[i] - self.grid[i]);
        }
        // Downward closure: a point reachable at larger R₁ is reachable here.
        for i in (0..reach).rev() {
            r2[i] = r2[i].max(r2[i + 1]);
        }
        let samples = self.grid[..=reach]
            .iter()
            .zip(r2)
            .map(|(&r1, r2)| (r1, r2.max(0.0)))
            .collect();
        Ok(RegionFrontier {
            samples,
            meta: meta.into(),
        })
    }
}

/// Sampled Pareto boundary of a union of polytopes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionFrontier {
    pub samples: Vec<(f64, f64)>,
    pub meta: String,
}

/// Frontier of the union of `family` sampled on `r1_grid`.
pub fn union_frontier<'a, I>(family: I, r1_grid: &[f64]) -> Result<RegionFrontier>
where
    I: IntoIterator<Item = &'a RatePolytope>,
{
    let mut acc = FrontierAccumulator::new(r1_grid.to_vec())?;
    acc.extend(family);
    acc.finish("union")
}

/// As [`union_frontier`], splitting the family across threads.
pub fn union_frontier_par(family: &[RatePolytope], r1_grid: &[f64]) -> Result<RegionFrontier> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let empty = FrontierAccumulator::new(r1_grid.to_vec())?;
    let chunk = family.len().div_ceil(64).max(4096);
    let chunks: Vec<&[RatePolytope]> = family.chunks(chunk).collect();
    let parts = crate::par::map_collect(&chunks, |c| {
        let mut acc = empty.clone();
        acc.extend(c.iter());
        acc
    });
    let mut acc = empty;
    for p in &parts {
        acc.merge(p);
    }
    acc.finish("union")
}

/// Frontier on the default `R₁` grid for the family.
pub fn family_frontier(family: &[RatePolytope], meta: impl Into<String>) -> Result<RegionFrontier> {
    let grid = default_r1_grid(family)?;
    let mut f = union_frontier_par(family, &grid)?;
    f.meta = meta.into();
    Ok(f)
}

/// Largest `x ∈ [lo, hi]` with `pred(x)`, for `pred` true on a prefix of the
/// interval. `None` if `pred(lo)` fails.
fn last_true(lo: f64, hi: f64, pred: impl Fn(f64) -> bool) -> Option<f64> {
    if !pred(lo) {
        return None;
    }
    if pred(hi) {
        return Some(hi);
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if pred(m) {
            a = m;
        } else {
            b = m;
        }
    }
    Some(a)
}

/// Exact frontier of `⋃_{ρ ∈ [lo, hi]} bounds(ρ)` sampled on `r1_grid`, for
/// families whose individual bounds are nonincreasing in `ρ` and whose sum
/// bound is nondecreasing (every cut-set family here).
///
/// For fixed `R₁` the feasible `ρ` form an interval and `min(R₂ bound,
/// sum − R₁)` is unimodal on it, so three bisections give the optimum. A
/// sampled union only approaches this from below.
pub fn monotone_family_frontier<F>(bounds: F, lo: f64, hi: f64, r1_grid: &[f64]) -> Result<RegionFrontier>
where
    F: Fn(f64) -> RatePolytope,
{
    if r1_grid.is_empty() || r1_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid("R1 grid must be non-empty and strictly increasing"));
    }
    if !(lo <= hi) {
        return Err(Error::InvalidGrid("correlation range must satisfy lo <= hi"));
    }
    let mut samples = Vec::with_capacity(r1_grid.len());
    for &r1 in r1_grid {
        // Largest ρ keeping R₁ within its individual bound.
        let Some(r_ind) = last_true(lo, hi, |r| bounds(r).r1_max >= r1) else {
            break;
        };
        // Smallest ρ whose sum bound admits R₁, found on the reflected axis.
        let Some(neg) = last_true(-hi, -lo, |r| bounds(-r).sum_max >= r1) else {
            break;
        };
        let r_sum = -neg;
        if r_sum > r_ind {
            break;
        }
        let cross = last_true(lo, hi, |r| {
            let q = bounds(r);
            q.sum_max - r1 <= q.r2_max
        })
        .unwrap_or(lo);
        let rho = cross.clamp(r_sum, r_ind);
        let q = bounds(rho);
        samples.push((r1, q.r2_max.min(q.sum_max - r1).max(0.0)));
    }
    if samples.is_empty() {
        return Err(Error::EmptyFamily);
    }
    Ok(RegionFrontier {
        samples,
        meta: "union".into(),
    })
}

impl RegionFrontier {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn r1_max(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.0)
    }

    pub fn r1_values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.0).collect()
    }

    /// Linear interpolation; `None` past the last sample.
    pub fn value_at(&self, r1: f64) -> Option<f64> {
        let s = &self.samples;
        let first = s.first()?;
        if r1 <= first.0 {
            return Some(first.1);
        }
        let i = s.partition_point(|p| p.0 < r1);
        if i == s.len() {
            return None;
        }
        let (x0, y0) = s[i - 1];
        let (x1, y1) = s[i];
        if x1 == r1 {
            return Some(y1);
        }
        Some(y0 + (y1 - y0) * (r1 - x0) / (x1 - x0))
    }

    pub fn max_sum_rate(&self) -> f64 {
        self.samples
            .iter()
            .map(|&(a, b)| a + b)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Sample with the largest `R₁ + R₂`.
    pub fn sum_point(&self) -> Option<(f64, f64)> {
        self.samples
            .iter()
            .copied()
            .max_by(|x, y| (x.0 + x.1).total_cmp(&(y.0 + y.1)))
    }

    /// Whether `r2` is nonincreasing and `r1` strictly increasing.
    pub fn is_monotone(&self) -> bool {
        self.samples
            .windows(2)
            .all(|w| w[1].0 > w[0].0 && w[1].1 <= w[0].1)
    }

    /// Largest deviation from `other`, in bits.
    ///
    /// At every sample of either frontier the vertical distance to the other
    /// is measured; a sample beyond the other's last `R₁` contributes its
    /// horizontal overshoot instead.
    pub fn gap(&self, other: &RegionFrontier) -> f64 {
        one_sided_gap(self, other).max(one_sided_gap(other, self))
    }

    /// Upper concave envelope, resampled on the same `R₁` values, and
    /// whether it lies strictly above the raw union anywhere.
    pub fn convexify(&self) -> (RegionFrontier, bool) {
        let mut hull: Vec<(f64, f64)> = Vec::new();
        for &p in &self.samples {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
                if cross >= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        let env = RegionFrontier {
            samples: hull,
            meta: String::new(),
        };
        let mut improved = false;
        let samples = self
            .samples
            .iter()
            .map(|&(r1, r2)| {
                let v = env.value_at(r1).unwrap_or(r2).max(r2);
                if v > r2 + 1e-9 {
                    improved = true;
                }
                (r1, v)
            })
            .collect();
        (
            RegionFrontier {
                samples,
                meta: format!("{} (concave envelope)", self.meta),
            },
            improved,
        )
    }

    /// Every coordinate multiplied by `k`.
    pub fn scaled(&self, k: f64) -> RegionFrontier {
        RegionFrontier {
            samples: self.samples.iter().map(|&(a, b)| (a * k, b * k)).collect(),
            meta: self.meta.clone(),
        }
    }

    /// CSV with header `r1_bits,r2_bits`.
    pub fn to_csv(&self) -> String {
        self.to_csv_with_header("r1_bits,r2_bits")
    }

    pub fn to_csv_with_header(&self, header: &str) -> String {
        let mut out = String::with_capacity(24 * (self.samples.len() + 1));
        out.push_str(header);
        out.push('\n');
        for &(a, b) in &self.samples {
            out.push_str(&format_sig9(a));
            out.push(',');
            out.push_str(&format_sig9(b));
            out.push('\n');
        }
        out
    }
}

fn one_sided_gap(a: &RegionFrontier, b: &RegionFrontier) -> f64 {
    let bmax = b.r1_max();
    a.samples
        .iter()
        .map(|&(r1, r2)| match b.value_at(r1) {
            Some(v) => (r2 - v).abs(),
            None => r1 - bmax,
        })
        .fold(0.0, f64::max)
}

/// Whether every sample of `inner` lies under `outer` within `tol` bits.
///
/// `outer` is linearly interpolated and treated as infeasible beyond its
/// last sample (plus `tol`).
pub fn frontier_subset(inner: &RegionFrontier, outer: &RegionFrontier, tol: f64) -> bool {
    let omax = outer.r1_max();
    inner.samples.iter().all(|&(r1, r2)| {
        match outer.value_at(r1) {
            Some(v) => r2 <= v + tol,
            None => r1 <= omax + tol && outer.samples.last().is_some_and(|l| r2 <= l.1 + tol),
        }
    })
}

/// Nine significant digits, fixed notation for moderate magnitudes and
/// exponent notation otherwise, trailing zeros trimmed.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mant, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mant.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
