//! WebAssembly bindings for the demo page in `www/`.
//!
//! Frontiers cross the boundary as flat `[r1, r2, r1, r2, ...]` arrays in bits.

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use dbbound::ic_uc::{sumrate_vs_h, IcUcParams};
use dbbound::mac_nf::{cutset_frontier_nf, db_region_nf, nofeedback_capacity, MacNfParams};
use dbbound::mac_uc::{cutset_frontier_uc, db_region_uc, nocoop_capacity, MacUcParams};
use dbbound::regions::{default_r1_grid, union_frontier, SweepGrid};
use dbbound::{RegionFrontier, Result};
use wasm_bindgen::prelude::*;

/// Three frontiers on one shared `R₁` grid: the dependence-balance bound, the
/// cut-set bound, and a reference capacity region.
#[wasm_bindgen]
pub struct Curves {
    db: Vec<f64>,
    cutset: Vec<f64>,
    reference: Vec<f64>,
    sums: [f64; 3],
}

#[wasm_bindgen]
impl Curves {
    pub fn db(&self) -> Vec<f64> {
        self.db.clone()
    }

    pub fn cutset(&self) -> Vec<f64> {
        self.cutset.clone()
    }

    pub fn reference(&self) -> Vec<f64> {
        self.reference.clone()
    }

    /// Maximum sum rates in the same order.
    pub fn sums(&self) -> Vec<f64> {
        self.sums.to_vec()
    }
}

fn flat(f: &RegionFrontier) -> Vec<f64> {
    f.samples.iter().flat_map(|&(a, b)| [a, b]).collect()
}

fn curves(db: RegionFrontier, cs: RegionFrontier, reference: RegionFrontier) -> Curves {
    Curves {
        sums: [db.max_sum_rate(), cs.max_sum_rate(), reference.max_sum_rate()],
        db: flat(&db),
        cutset: flat(&cs),
        reference: flat(&reference),
    }
}

fn js(e: dbbound::Error) -> JsError {
    JsError::new(&e.to_string())
}

pub fn feedback_mac(p: f64, sz: f64, sfb: f64) -> Result<Curves> {
    let params = MacNfParams::distinct(p, p, sz, sfb, sfb);
    params.validate()?;
    let db = db_region_nf(&params, &SweepGrid::feedback_default())?;
    let cs = [dbbound::mac_nf::cutset_polytope_nf(0.0, &params)];
    let grid = default_r1_grid(&cs)?;
    Ok(curves(
        union_frontier(&db, &grid)?,
        cutset_frontier_nf(&params, &grid)?,
        union_frontier(&[nofeedback_capacity(&params)], &grid)?,
    ))
}

pub fn cooperative_mac(p: f64, sz: f64, scoop: f64, h12: f64, h21: f64) -> Result<Curves> {
    let params = MacUcParams {
        p1: p,
        p2: p,
        sigma_z2: sz,
        sigma_z1_2: scoop,
        sigma_z2_2: scoop,
        h12,
        h21,
        ..MacUcParams::unit()
    };
    params.validate()?;
    let db = db_region_uc(&params, &SweepGrid::new(0.01, 501))?;
    let cs = [dbbound::mac_uc::cutset_polytope_uc(0.0, &params)];
    let grid = default_r1_grid(&cs)?;
    Ok(curves(
        union_frontier(&db, &grid)?,
        cutset_frontier_uc(&params, &grid)?,
        union_frontier(&[nocoop_capacity(&params)], &grid)?,
    ))
}

/// `[h, db_sum, cs_sum, ...]` for `h ∈ {0, step, ..., h_max}`.
pub fn interference_sweep(cross: f64, h_max: f64, step: f64) -> Result<Vec<f64>> {
    let params = IcUcParams {
        a: cross,
        b: cross,
        ..IcUcParams::unit()
    };
    params.validate()?;
    if !(step > 0.0 && h_max >= 0.0 && h_max / step <= 1000.0) {
        return Err(dbbound::Error::InvalidGrid("need step > 0 and at most 1000 points"));
    }
    let n = (h_max / step + 1e-9).floor() as usize;
    let hs: Vec<f64> = (0..=n).map(|k| k as f64 * step).collect();
    let rows = sumrate_vs_h(&params, &hs, &SweepGrid::new(0.02, 201))?;
    Ok(rows.iter().flat_map(|r| [r.h, r.db_sum, r.cs_sum]).collect())
}

/// Feedback MAC with `P₁ = P₂ = p`, receiver noise `sz` and feedback noise
/// `sfb` on both links; the reference is the no-feedback region.
#[wasm_bindgen(js_name = feedbackMac)]
pub fn feedback_mac_js(p: f64, sz: f64, sfb: f64) -> std::result::Result<Curves, JsError> {
    feedback_mac(p, sz, sfb).map_err(js)
}

/// Cooperative MAC with unit direct gains; the reference is the region
/// without cooperation.
#[wasm_bindgen(js_name = cooperativeMac)]
pub fn cooperative_mac_js(
    p: f64,
    sz: f64,
    scoop: f64,
    h12: f64,
    h21: f64,
) -> std::result::Result<Curves, JsError> {
    cooperative_mac(p, sz, scoop, h12, h21).map_err(js)
}

/// Interference channel with unit powers and noises and cross gains
/// `a = b = cross`: sum-rate bounds against the cooperation gain.
#[wasm_bindgen(js_name = interferenceSweep)]
pub fn interference_sweep_js(cross: f64, h_max: f64, step: f64) -> std::result::Result<Vec<f64>, JsError> {
    interference_sweep(cross, h_max, step).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(v: &[f64]) -> Vec<(f64, f64)> {
        v.chunks(2).map(|c| (c[0], c[1])).collect()
    }

    #[test]
    fn feedback_curves_are_nested() {
        let c = feedback_mac(1.0, 1.0, 2.0).unwrap();
        let (db, cs, nofb) = (pairs(&c.db()), pairs(&c.cutset()), pairs(&c.reference()));
        assert_eq!(db.len(), cs.len());
        for i in 0..db.len() {
            assert_eq!(db[i].0, cs[i].0);
            assert!(db[i].1 <= cs[i].1 + 1e-12);
            if i < nofb.len() {
                assert!(nofb[i].1 <= db[i].1 + 1e-12);
            }
        }
        let s = c.sums();
        assert!(s[2] < s[0] && s[0] < s[1]);
    }

    #[test]
    fn cooperative_curves_are_nested() {
        let c = cooperative_mac(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let s = c.sums();
        assert!(s[2] <= s[0] + 1e-12 && s[0] <= s[1] + 1e-12);
    }

    #[test]
    fn sweep_layout_and_rejections() {
        let v = interference_sweep(0.5, 1.0, 0.5).unwrap();
        assert_eq!(v.len(), 9);
        assert_eq!([v[0], v[3], v[6]], [0.0, 0.5, 1.0]);
        assert!(v.chunks(3).all(|r| r[1] <= r[2]));
        assert!(interference_sweep(0.5, 1.0, 0.0).is_err());
        assert!(feedback_mac(-1.0, 1.0, 1.0).is_err());
    }
}
