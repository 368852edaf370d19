//! Closed-form bounds.
//!
//! The optimizer chooses the vertex degree `p` that maximizes
//! `alpha_d(p) = (2^(p-d) C(p,d)^(2d-3))^(1/(2p-3))`; `beta_d` is taken at the
//! same `p`. Everything is evaluated in log space.

mod classic;
mod table;

use serde::{Deserialize, Serialize};

use crate::util::ln_binomial;
use crate::{check_dimension, Error, Result};

pub use classic::{
    bezout_bound, bm_basis, borcea_streinu_bound, bregman_minc, corollary_bound, corollary_bound_with,
    new_closed_bound,
    BregmanMinc, ClosedFormBound,
};
pub use table::{bm_comparison, format_table1_csv, format_table1_text, table1, BmComparisonRow, Table1Row};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaBeta {
    pub d: u32,
    pub alpha: f64,
    pub beta: f64,
    pub p_star: u32,
    /// `2 * alpha`, the exponential basis of the embedding bound.
    pub base: f64,
    pub ln_alpha: f64,
    pub ln_beta: f64,
}

/// Search window for the optimizer.
pub fn window(d: u32) -> std::ops::RangeInclusive<u32> {
    d..=4 * d + 60
}

pub fn ln_alpha_at(p: u32, d: u32) -> f64 {
    let (p64, d64) = (p as f64, d as f64);
    ((p64 - d64) * std::f64::consts::LN_2 + (2.0 * d64 - 3.0) * ln_binomial(p as u64, d as u64))
        / (2.0 * p64 - 3.0)
}

pub fn ln_beta_at(p: u32, d: u32) -> f64 {
    (std::f64::consts::LN_2 - 2.0 * ln_binomial(p as u64, d as u64)) / (2.0 * p as f64 - 3.0)
}

/// `ln W(p)` with `W(p) = C(p,d)^2 ((p-d+1)/(p+1))^(2p-3) / 2`.
pub fn ln_w(p: u32, d: u32) -> f64 {
    let (p64, d64) = (p as f64, d as f64);
    2.0 * ln_binomial(p as u64, d as u64) + (2.0 * p64 - 3.0) * ((p64 - d64 + 1.0) / (p64 + 1.0)).ln()
        - std::f64::consts::LN_2
}

/// Positions `p` in the window where `ln W` changes sign between `p-1` and `p`.
pub fn ln_w_sign_changes(d: u32) -> Vec<u32> {
    let values: Vec<(u32, f64)> = window(d).map(|p| (p, ln_w(p, d))).collect();
    values
        .windows(2)
        .filter(|w| (w[0].1 < 0.0) != (w[1].1 < 0.0))
        .map(|w| w[1].0)
        .collect()
}

pub fn alpha_beta(d: u32) -> Result<AlphaBeta> {
    check_dimension(d)?;
    let (p_star, ln_alpha) = window(d)
        .map(|p| (p, ln_alpha_at(p, d)))
        .fold((d, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    let changes = ln_w_sign_changes(d);
    if changes.len() != 1 {
        return Err(Error::Integrity(format!(
            "ln W has {} sign changes on [{}, {}] for d = {d}",
            changes.len(),
            window(d).start(),
            window(d).end()
        )));
    }
    if changes[0] != p_star || p_star == *window(d).end() {
        return Err(Error::Integrity(format!(
            "maximizer p = {p_star} disagrees with the sign change of ln W at p = {}",
            changes[0]
        )));
    }
    let ln_beta = ln_beta_at(p_star, d);
    let alpha = ln_alpha.exp();
    Ok(AlphaBeta { d, alpha, beta: ln_beta.exp(), p_star, base: 2.0 * alpha, ln_alpha, ln_beta })
}

/// `C(p-h, d-h) / alpha * beta^(p-h-d)`; the elimination bound closes by
/// induction exactly when this is at most 1.
pub fn c_factor(p: u32, h: u32, d: u32, ab: &AlphaBeta) -> f64 {
    (ln_binomial((p - h) as u64, (d - h) as u64) - ab.ln_alpha + (p as f64 - h as f64 - d as f64) * ab.ln_beta)
        .exp()
}

/// `(d, p, h, value)` for every pair in the sweep with `c_factor > 1`.
pub fn c_factor_violations(max_d: u32, tolerance: f64) -> Result<Vec<(u32, u32, u32, f64)>> {
    let mut out = Vec::new();
    for d in 2..=max_d {
        let ab = alpha_beta(d)?;
        for p in d..=6 * d {
            for h in 0..=d {
                if (p == d + 1 && h == d - 1) || (p == d && h == d) {
                    continue;
                }
                let c = c_factor(p, h, d, &ab);
                if c > 1.0 + tolerance {
                    out.push((d, p, h, c));
                }
            }
        }
    }
    Ok(out)
}
