use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{alpha_beta, bm_basis, bregman_minc};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub d: u32,
    /// `2 alpha_d`.
    pub this: f64,
    /// `2 sqrt(C(2d, d))`.
    pub bm: f64,
    /// `2^d`.
    pub bezout: u64,
}

pub fn table1(ds: impl IntoIterator<Item = u32>) -> Result<Vec<Table1Row>> {
    ds.into_iter()
        .map(|d| {
            Ok(Table1Row { d, this: alpha_beta(d)?.base, bm: bm_basis(d), bezout: 1u64.checked_shl(d).unwrap_or(0) })
        })
        .collect()
}

/// Five significant figures, keeping trailing zeros.
pub fn sig5(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..=10).contains(&magnitude) {
        return format!("{x:.4e}");
    }
    let decimals = (4 - magnitude).max(0) as usize;
    let text = format!("{x:.decimals$}");
    // rounding may carry into a new digit, e.g. 9.99996 -> 10.0000
    if text.trim_start_matches('-').replace('.', "").trim_start_matches('0').len() > 5 && decimals > 0 {
        return format!("{x:.prec$}", prec = decimals - 1);
    }
    text
}

fn bezout_text(b: u64) -> String {
    if b == 0 { "overflow".into() } else { b.to_string() }
}

pub fn format_table1_text(rows: &[Table1Row]) -> String {
    let mut cols: Vec<[String; 4]> = vec![["d".into(), "this".into(), "B-M".into(), "Bez.".into()]];
    cols.extend(rows.iter().map(|r| [r.d.to_string(), sig5(r.this), sig5(r.bm), bezout_text(r.bezout)]));
    let width = cols.iter().flat_map(|c| c.iter().map(String::len)).max().unwrap_or(0);
    let mut out = String::new();
    for field in 0..4 {
        for (i, col) in cols.iter().enumerate() {
            if i == 0 {
                let _ = write!(out, "{:<5}", col[field]);
            } else {
                let _ = write!(out, " {:>width$}", col[field]);
            }
        }
        out.push('\n');
    }
    out
}

pub fn format_table1_csv(rows: &[Table1Row]) -> String {
    let mut out = String::from("d,this,bm,bezout\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.d, sig5(r.this), sig5(r.bm), bezout_text(r.bezout));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BmComparisonRow {
    pub n: u64,
    pub k: u64,
    pub formula: f64,
    pub bregman_minc: f64,
    pub formula_tighter: bool,
}

/// Planar `alpha^n beta^(k-1)` against the Brègman–Minc value for all
/// `1 <= k <= n + 1 <= max_n + 1`.
pub fn bm_comparison(max_n: u64) -> Result<Vec<BmComparisonRow>> {
    let ab = alpha_beta(2)?;
    let mut rows = Vec::new();
    for n in 1..=max_n {
        for k in 1..=n + 1 {
            let formula = (n as f64 * ab.ln_alpha + (k as f64 - 1.0) * ab.ln_beta).exp();
            let bm = bregman_minc(n, k, 2)?.value;
            rows.push(BmComparisonRow { n, k, formula, bregman_minc: bm, formula_tighter: formula <= bm * (1.0 + 1e-12) });
        }
    }
    Ok(rows)
}
