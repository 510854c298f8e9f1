//! CSV trace and JSON summary emission.
//!
//! Floats are written with the shortest round-trip decimal representation, so
//! identical runs yield byte-identical files.

use glsim_core::{EnergyLedger, ModelParams};
use std::fmt::Write as _;

pub const CSV_HEADER: &str = "t, V_norm, F, E, L2_interior, Lp1_interior, \
                              bd_L2, bd_Lp1, cum_ut_bd, cum_lap, cum_L2p, cum_flux";

pub const SCHEMA: &str = "glsim-report-v1";

/// Indices of the ledger rows to emit: every `stride`-th step plus the final
/// step. The ledger itself holds every step, since the cumulative integrals
/// need them all.
pub fn row_indices(len: usize, stride: usize) -> Vec<usize> {
    assert!(stride >= 1 && len >= 1);
    let mut idx: Vec<usize> = (0..len).step_by(stride).collect();
    if *idx.last().unwrap() != len - 1 {
        idx.push(len - 1);
    }
    idx
}

/// Renders the ledger as CSV text with LF line endings, subsampled by
/// `stride`.
pub fn ledger_csv(ledger: &EnergyLedger, params: &ModelParams, stride: usize) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    let inv_p1 = 1.0 / (params.p + 1.0);
    for k in row_indices(ledger.times.len(), stride) {
        let cols = [
            ledger.times[k],
            ledger.v_norm[k],
            ledger.energy_f[k],
            ledger.energy_e[k],
            ledger.l2_interior[k],
            ledger.lp1_pow_interior[k].powf(inv_p1),
            ledger.bd_l2_sq[k].sqrt(),
            ledger.bd_lp1_pow[k].powf(inv_p1),
            ledger.cum_ut_bd[k],
            ledger.cum_lap[k],
            ledger.cum_l2p[k],
            ledger.cum_flux[k],
        ];
        for (i, c) in cols.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{c}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Serializes a JSON value with a trailing newline. `serde_json` maps keep
/// keys sorted, so the layout is stable across runs.
pub fn json_text(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).unwrap();
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use glsim_core::{bump_field, BcVariant, RadialGrid, SchemeConfig};

    fn tiny_ledger() -> (EnergyLedger, ModelParams) {
        let grid = RadialGrid::build(1, 0.0, 1.0, 16).unwrap();
        let params = ModelParams {
            lambda: 1.0,
            alpha: 1.0,
            kappa: 1.0,
            beta: 1.0,
            gamma: 0.0,
            p: 3.0,
            dim: 1,
        };
        let scheme = SchemeConfig::new(BcVariant::Dynamic, 0.01, 0.05);
        let u0 = bump_field(&grid, 1.0, 0.45, 0.25);
        let (_, ledger) = glsim_core::run(&grid, &params, &scheme, &u0, 1).unwrap();
        (ledger, params)
    }

    #[test]
    fn csv_has_header_and_strictly_increasing_times() {
        let (ledger, params) = tiny_ledger();
        let text = ledger_csv(&ledger, &params, 1);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let mut prev = f64::NEG_INFINITY;
        let mut rows = 0;
        for line in lines {
            assert_eq!(line.split(',').count(), 12, "{line}");
            let t: f64 = line.split(',').next().unwrap().parse().unwrap();
            assert!(t > prev);
            prev = t;
            rows += 1;
        }
        assert_eq!(rows, 6);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn stride_keeps_every_kth_row_and_the_final_one() {
        assert_eq!(row_indices(6, 1), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(row_indices(6, 2), vec![0, 2, 4, 5]);
        assert_eq!(row_indices(7, 3), vec![0, 3, 6]);
        assert_eq!(row_indices(1, 10), vec![0]);
    }

    #[test]
    fn csv_floats_roundtrip() {
        let (ledger, params) = tiny_ledger();
        let text = ledger_csv(&ledger, &params, 1);
        let last = text.lines().last().unwrap();
        let v: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(v, *ledger.v_norm.last().unwrap());
    }
}
