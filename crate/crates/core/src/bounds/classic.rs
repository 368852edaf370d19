use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::{alpha_beta, AlphaBeta};
use crate::util::{binomial, factorial, ln_big};
use crate::{check_dimension, Error, Result};

/// `(2^d)^(n-d)`.
pub fn bezout_bound(n: u64, d: u32) -> Result<BigUint> {
    check_dimension(d)?;
    if n < d as u64 {
        return Err(Error::InvalidSize(format!("bezout bound needs n >= d, got n = {n}, d = {d}")));
    }
    Ok(BigUint::one() << (d as u64 * (n - d as u64)))
}

/// `2 * prod_{m=0}^{n-d-2} C(n-1+m, n-d-1-m) / C(2m+1, m)`, exactly.
pub fn borcea_streinu_bound(n: u64, d: u32) -> Result<BigRational> {
    check_dimension(d)?;
    let d = d as u64;
    if n < d + 1 {
        return Err(Error::InvalidSize(format!("borcea-streinu bound needs n > d, got n = {n}, d = {d}")));
    }
    let mut acc = BigRational::from_integer(BigInt::from(2));
    for m in 0..n - d - 1 {
        let num = binomial(n - 1 + m, n - d - 1 - m);
        let den = binomial(2 * m + 1, m);
        acc *= BigRational::new(num.into(), den.into());
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BregmanMinc {
    pub value: f64,
    /// Present when both fractional exponents are integers.
    #[serde(skip)]
    pub exact: Option<BigRational>,
    /// The formula was carried over from the planar case to `d > 2`.
    pub extended: bool,
}

/// `(d!)^(k/d) * ((2d)!)^((dn-k)/(2d)) * (d!)^(-n)`.
pub fn bregman_minc(n: u64, k: u64, d: u32) -> Result<BregmanMinc> {
    check_dimension(d)?;
    let (df, d2f) = (factorial(d as u64), factorial(2 * d as u64));
    let dn = d as i64 * n as i64;
    let rest = dn - k as i64;
    let value = (k as f64 / d as f64 * ln_big(&df) + rest as f64 / (2.0 * d as f64) * ln_big(&d2f)
        - n as f64 * ln_big(&df))
    .exp();
    let exact = (k.is_multiple_of(d as u64) && rest.rem_euclid(2 * d as i64) == 0).then(|| {
        let pow = |base: &BigUint, e: i64| -> BigRational {
            let x = BigRational::from_integer(BigInt::from(base.pow(e.unsigned_abs() as u32)));
            if e >= 0 { x } else { x.recip() }
        };
        pow(&df, (k / d as u64) as i64 - n as i64) * pow(&d2f, rest / (2 * d as i64))
    });
    Ok(BregmanMinc { value, exact, extended: d > 2 })
}

/// `2 sqrt(C(2d, d))`.
pub fn bm_basis(d: u32) -> f64 {
    2.0 * binomial(2 * d as u64, d as u64).to_f64().unwrap_or(f64::INFINITY).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormBound {
    /// `beta^(3d-2) * (2 alpha)^e`; the planar value for `d = 2`.
    pub literal: f64,
    /// `beta^(3d-4) * (2 alpha)^e`.
    pub variant: f64,
    /// `2^e`, below which no embedding bound can go once every orientation
    /// count is at least 1.
    pub floor: f64,
    /// Exact value of the planar bound when it is rational.
    #[serde(skip)]
    pub exact: Option<BigRational>,
    pub exponent: u64,
}

impl ClosedFormBound {
    /// The variant, raised to the floor when it falls below it.
    pub fn effective(&self) -> f64 {
        self.variant.max(self.floor)
    }
}

/// Closed-form embedding bound for a minimally rigid graph with `n`
/// vertices. The exponent of `2 alpha` is `n - d`, or `n - 2` when no
/// `d`-clique is available.
pub fn new_closed_bound(n: u64, d: u32, has_clique: bool) -> Result<ClosedFormBound> {
    let ab = alpha_beta(d)?;
    if n < d as u64 {
        return Err(Error::InvalidSize(format!("closed bound needs n >= d, got n = {n}, d = {d}")));
    }
    let exponent = n - if has_clique { d as u64 } else { 2 };
    let ln_base = ab.base.ln() * exponent as f64;
    let variant = (ab.ln_beta * (3 * d - 4) as f64 + ln_base).exp();
    let literal = if d == 2 { variant } else { (ab.ln_beta * (3 * d - 2) as f64 + ln_base).exp() };
    let exact = (d == 2).then(|| planar_exact(exponent)).flatten();
    let variant = exact.as_ref().and_then(|x| x.to_f64()).unwrap_or(variant);
    let literal = if d == 2 { variant } else { literal };
    Ok(ClosedFormBound { literal, variant, floor: (exponent as f64).exp2(), exact, exponent })
}

/// `(768^e / 324)^(1/5)` when that is rational.
fn planar_exact(e: u64) -> Option<BigRational> {
    let fifth = BigRational::new(BigInt::from(BigUint::from(768u32).pow(e as u32)), BigInt::from(324));
    let root = |x: &BigInt| -> Option<BigInt> {
        let r = x.nth_root(5);
        (Pow::pow(&r, 5u32) == *x).then_some(r)
    };
    Some(BigRational::new(root(fifth.numer())?, root(fifth.denom())?))
}

/// `alpha^n' * beta^(k'-c')` over the components with more than one vertex.
///
/// Components are `(vertices, hanging edges)`. Fails with an integrity error
/// when a component carries fewer hanging edges than a fixed clique forces.
pub fn corollary_bound(components: &[(u64, u64)], d: u32) -> Result<f64> {
    let ab = alpha_beta(d)?;
    corollary_bound_with(components, &ab)
}

pub fn corollary_bound_with(components: &[(u64, u64)], ab: &AlphaBeta) -> Result<f64> {
    let d = ab.d as u64;
    let (mut n, mut k, mut c) = (0u64, 0u64, 0u64);
    for &(ni, ki) in components.iter().filter(|(ni, _)| *ni > 1) {
        if d > 2 && ni >= d && ki < d * (d + 1) / 2 {
            return Err(Error::Integrity(format!(
                "component with {ni} vertices has {ki} hanging edges, fewer than {}",
                d * (d + 1) / 2
            )));
        }
        n += ni;
        k += ki;
        c += 1;
    }
    if d == 2 && k < 3 * c {
        return Err(Error::Integrity(format!("{k} hanging edges over {c} components, fewer than 3 per component")));
    }
    if c == 0 {
        return Ok(1.0);
    }
    Ok((n as f64 * ab.ln_alpha + (k as f64 - c as f64) * ab.ln_beta).exp())
}
