//! Acceptance checks. Each test prints one `PASS`/`FAIL` line.
//!
//! Reference values are computed here from first principles (analytic
//! constants, dense scans) rather than taken from the library under test.

use std::time::Instant;

use dbbound::covariance::lambda_bound;
use dbbound::ic_uc::{cutset_region_ic, db_region_ic, nocoop_polytope_ic, sumrate_vs_h, IcUcParams};
use dbbound::mac_nf::{
    alpha_star, cutset_region_nf, db_feasible_nf, db_region_nf, MacNfParams,
};
use dbbound::mac_uc::{cutset_region_uc, db_region_uc, MacUcParams};
use dbbound::regions::{
    default_r1_grid, family_frontier, linspace, union_frontier_par, RatePolytope, SweepGrid,
};
use dbbound::sampling;
use dbbound::verify::{self, fastpath_equivalence};
use dbbound::{max_sum_rate, CorrelationTriple, RegionFrontier};

fn report(name: &str, ok: bool, detail: impl AsRef<str>) {
    println!("{} {name}: {}", if ok { "PASS" } else { "FAIL" }, detail.as_ref());
    assert!(ok, "{name}: {}", detail.as_ref());
}

fn log2h(x: f64) -> f64 {
    0.5 * x.log2()
}

/// Largest vertical distance between a frontier and a reference profile on
/// the frontier's samples, plus the distance between their right ends.
fn deviation(f: &RegionFrontier, reference: impl Fn(f64) -> Option<f64>, ref_r1_max: f64) -> f64 {
    let vertical = f
        .samples
        .iter()
        .map(|&(r1, r2)| match reference(r1) {
            Some(v) => (r2 - v).abs(),
            None => r1 - ref_r1_max,
        })
        .fold(0.0, f64::max);
    vertical.max((f.r1_max() - ref_r1_max).abs())
}

fn pentagon_profile(a: f64, b: f64, s: f64) -> impl Fn(f64) -> Option<f64> {
    move |r1| (r1 <= a + 1e-12).then(|| b.min(s - r1))
}

#[test]
fn oracle_equivalence() {
    let start = Instant::now();
    let suites = [
        verify::suite_oracle_mac_nf(2024, 1000),
        verify::suite_oracle_mac_uc(2024, 1000),
        verify::suite_oracle_ic_uc(2024, 1000),
    ];
    let secs = start.elapsed().as_secs_f64();
    let ok = suites.iter().all(|s| s.ok()) && secs < 30.0;
    let detail = suites
        .iter()
        .map(|s| format!("{} {}/{} worst {:.2e}", s.name, s.passed, s.draws, s.worst))
        .collect::<Vec<_>>()
        .join("; ");
    report("oracle equivalence", ok, format!("{detail}; {secs:.1} s"));
}

#[test]
fn mac_nf_limit_laws() {
    let grid = SweepGrid::feedback_default();

    let far = family_frontier(&db_region_nf(&MacNfParams::unit(1e8), &grid).unwrap(), "db").unwrap();
    let nofb = pentagon_profile(0.5, 0.5, log2h(3.0));
    let dev_far = deviation(&far, nofb, 0.5);

    // Noiseless-feedback region by a dense scan over ρ at unit powers: the
    // union over ρ ≤ ρ* of pentagons with individual bounds ½log(2-ρ²) and sum
    // bound ½log(3+2ρ), where ρ* balances the two.
    let rhos = linspace(0.0, 1.0, 200_001);
    let pent: Vec<(f64, f64)> = rhos
        .iter()
        .map(|&r| (log2h(2.0 - r * r), log2h(3.0 + 2.0 * r)))
        .take_while(|&(ind, sum)| sum <= 2.0 * ind + 1e-15)
        .collect();
    let ozarow = |r1: f64| {
        pent.iter()
            .filter(|&&(ind, _)| r1 <= ind + 1e-12)
            .map(|&(ind, sum)| ind.min(sum - r1))
            .reduce(f64::max)
    };
    let near = family_frontier(&db_region_nf(&MacNfParams::unit(1e-8), &grid).unwrap(), "db").unwrap();
    let dev_near = deviation(&near, ozarow, 0.5);

    report(
        "MAC-NF limit laws",
        far.len() == 401 && near.len() == 401 && dev_far <= 1e-3 && dev_near <= 1e-3,
        format!(
            "sigma=1e8 vs no-feedback: {dev_far:.2e} bits (max sum {:.5}); sigma=1e-8 vs noiseless feedback: {dev_near:.2e} bits",
            far.max_sum_rate()
        ),
    );
}

#[test]
fn feedback_noise_ordering() {
    let grid = SweepGrid::feedback_default();
    let nofb = log2h(3.0);
    let db: Vec<f64> = [10.0, 5.0, 2.0]
        .iter()
        .map(|&s| max_sum_rate(&db_region_nf(&MacNfParams::unit(s), &grid).unwrap()).unwrap())
        .collect();
    let cs: Vec<Vec<RatePolytope>> = [2.0, 5.0, 10.0]
        .iter()
        .map(|&s| cutset_region_nf(&MacNfParams::unit(s), &grid).unwrap())
        .collect();
    let cs_sum = max_sum_rate(&cs[0]).unwrap();
    let chain = [nofb, db[0], db[1], db[2], cs_sum];
    let strict = chain.windows(2).all(|w| w[1] - w[0] >= 1e-4);
    let insensitive = cs.iter().all(|c| c == &cs[0]);
    report(
        "feedback-noise ordering",
        strict && insensitive,
        format!(
            "no-FB {:.5} < DB(10) {:.5} < DB(5) {:.5} < DB(2) {:.5} < CS {:.5}; cut-set identical across sigma: {insensitive}",
            chain[0], chain[1], chain[2], chain[3], chain[4]
        ),
    );
}

#[test]
fn alpha_star_solver() {
    let root = verify::suite_alpha_star(7, 1000);
    let deriv = verify::suite_dg_dalpha(7, 1000);

    // g at unit powers, σ_Z² = 1, feedback noise 1 and ρ₁ₜ = ρ₂ₜ = 0:
    // 2(1-α²) + (1-α²)²/1.5 - 2 - 2α.
    let g = |a: f64| 2.0 * (1.0 - a * a) + (1.0 - a * a).powi(2) / 1.5 - 2.0 - 2.0 * a;
    let scan = (0..=100_000)
        .map(|k| k as f64 * 1e-5)
        .find(|&a| g(a) < 0.0)
        .unwrap();
    let got = alpha_star(0.0, 0.0, &MacNfParams::unit(1.0)).unwrap();
    let reference_ok = (got - 0.2391).abs() <= 1e-3 && (got - scan).abs() <= 1e-5;
    report(
        "alpha* solver",
        root.ok() && deriv.ok() && reference_ok,
        format!(
            "bisection vs scan {}/{} worst {:.2e}; dg/dalpha {}/{} worst rel {:.2e}; alpha* = {got:.6} (scan {scan:.5})",
            root.passed, root.draws, root.worst, deriv.passed, deriv.draws, deriv.worst
        ),
    );
}

#[test]
fn fastpath_vs_bruteforce() {
    let grid = SweepGrid::feedback_default();
    let mut ok = true;
    let mut parts = Vec::new();
    for s in [0.3, 1.0, 2.0, 5.0, 10.0] {
        let g = fastpath_equivalence(&MacNfParams::unit(s), &grid).unwrap();
        ok &= g.max_gap <= 2.0 * g.r1_step;
        parts.push(format!("sigma={s}: {:.2e} (limit {:.2e})", g.max_gap, 2.0 * g.r1_step));
    }
    report("fast path vs brute force", ok, parts.join("; "));
}

#[test]
fn mac_uc_limits() {
    let grid = SweepGrid::cooperation_default();
    let total = log2h(5.0);
    let line = |r1: f64| (r1 <= total + 1e-12).then_some(total - r1);

    let near = MacUcParams::unit().with_coop_noise(1e-8);
    let db_near = family_frontier(&db_region_uc(&near, &grid).unwrap(), "db").unwrap();
    let cs_near = family_frontier(&cutset_region_uc(&near, &grid).unwrap(), "cs").unwrap();
    let dev_db = deviation(&db_near, line, total);
    let dev_cs = deviation(&cs_near, line, total);

    let far = MacUcParams::unit().with_coop_noise(1e8);
    let db_far = family_frontier(&db_region_uc(&far, &grid).unwrap(), "db").unwrap();
    let dev_nocoop = deviation(&db_far, pentagon_profile(0.5, 0.5, log2h(3.0)), 0.5);
    let cs_far_sum = max_sum_rate(&cutset_region_uc(&far, &grid).unwrap()).unwrap();
    let excess = cs_far_sum - log2h(3.0);

    report(
        "MAC-UC limits",
        dev_db <= 1e-3 && dev_cs <= 1e-3 && dev_nocoop <= 1e-3 && excess >= 0.05,
        format!(
            "sigma=1e-8: DB {dev_db:.2e}, CS {dev_cs:.2e} from total-cooperation line; sigma=1e8: DB {dev_nocoop:.2e} from no-cooperation, CS sum exceeds it by {excess:.4}"
        ),
    );
}

#[test]
fn markov_db_equivalence() {
    let uc = verify::suite_markov_mac_uc(11, 1000);
    let ic = verify::suite_markov_ic_uc(11, 1000);
    report(
        "Markov/DB equivalence",
        uc.ok() && ic.ok(),
        format!(
            "MAC-UC {}/{}, IC-UC {}/{} (worst Markov gap {:.2e}, {:.2e})",
            uc.passed, uc.draws, ic.passed, ic.draws, uc.worst, ic.worst
        ),
    );
}

/// DB ⊆ CS with both unions sampled on the cut-set frontier's `R₁` grid.
fn ic_db_within_cs(p: &IcUcParams, grid: &SweepGrid) -> (bool, f64) {
    let db = db_region_ic(p, grid).unwrap();
    let cs = cutset_region_ic(p, grid).unwrap();
    let r1 = default_r1_grid(&cs).unwrap();
    let fdb = union_frontier_par(&db, &r1).unwrap();
    let fcs = union_frontier_par(&cs, &r1).unwrap();
    let excess = fdb
        .samples
        .iter()
        .zip(&fcs.samples)
        .map(|(d, c)| d.1 - c.1)
        .fold(f64::NEG_INFINITY, f64::max);
    (
        fdb.len() <= fcs.len() && dbbound::frontier_subset(&fdb, &fcs, 1e-9),
        excess,
    )
}

#[test]
fn ic_uc_inclusions() {
    let grid = SweepGrid::cooperation_default();
    let strong = IcUcParams::unit().with_coop_gain(2.0);
    let weak = IcUcParams {
        a: 0.5,
        b: 0.5,
        ..IcUcParams::unit().with_coop_gain(0.1)
    };
    let (ok_strong, ex_strong) = ic_db_within_cs(&strong, &grid);
    let (ok_weak, ex_weak) = ic_db_within_cs(&weak, &grid);

    let coarse = SweepGrid::new(0.02, 1001);
    let mut random_ok = 0;
    let mut random_worst = f64::NEG_INFINITY;
    for i in 0..50 {
        let p = sampling::ic_uc(&mut sampling::rng_for(99, 0, i));
        let (ok, ex) = ic_db_within_cs(&p, &coarse);
        random_ok += ok as usize;
        random_worst = random_worst.max(ex);
    }

    let half_cross = IcUcParams {
        a: 0.5,
        b: 0.5,
        ..IcUcParams::unit()
    };
    let hs: Vec<f64> = (0..=60).map(|k| k as f64 * 0.05).collect();
    let sweep = sumrate_vs_h(&half_cross, &hs, &grid).unwrap();
    let below = sweep.iter().all(|s| s.db_sum <= s.cs_sum + 1e-12);
    let nocoop = nocoop_polytope_ic(&half_cross).max_sum();
    let at_zero = (sweep[0].db_sum - nocoop).abs();

    report(
        "IC-UC inclusions",
        ok_strong && ok_weak && random_ok == 50 && below && at_zero <= 1e-9,
        format!(
            "strong {ok_strong} (max excess {ex_strong:.1e}), weak {ok_weak} (max excess {ex_weak:.1e}), random {random_ok}/50 (max excess {random_worst:.1e}); sweep db<=cs {below}; |db_sum(0) - no-cooperation| = {at_zero:.1e}"
        ),
    );
}

#[test]
fn epi_bound() {
    let s = verify::suite_epi(5, 10_000);
    report(
        "EPI bound",
        s.ok(),
        format!("{}/{} pass, largest |lhs - rhs| {:.2e} nats", s.passed, s.draws, s.worst),
    );
}

#[test]
fn common_feedback_remark() {
    let distinct = MacNfParams::unit(1.0);
    let common = MacNfParams::common(1.0, 1.0, 1.0, 1.0);
    let grid = SweepGrid::feedback_default();
    let corr = grid.symmetric_corr_values();
    let ts = linspace(-1.0, 1.0, 2 * grid.fine_samples - 1);
    let (mut points, mut violations, mut strict) = (0usize, 0usize, 0usize);
    for &a in &corr {
        for &b in &corr {
            let lam = lambda_bound(a, b);
            for &t in &ts {
                let rho = CorrelationTriple {
                    rho12: a * b + lam * t,
                    rho1t: a,
                    rho2t: b,
                };
                let c = db_feasible_nf(&rho, &common);
                let d = db_feasible_nf(&rho, &distinct);
                points += 1;
                violations += (c && !d) as usize;
                strict += (d && !c) as usize;
            }
        }
    }
    report(
        "common-feedback remark",
        violations == 0 && strict > 0,
        format!("{points} grid points: common-only {violations}, distinct-only {strict}"),
    );
}
