//! Ryser's formula, exact arithmetic. General matrices sum over column
//! subsets in Gray-code order; the incidence matrix, whose rows come in
//! groups of `d` equal copies, sums over how many rows of each group are
//! chosen, which takes `(d+1)^(rows/d)` terms instead of `2^rows`.

use std::time::Instant;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::util::factorial;
use crate::{check_dimension, Clique, Error, Graph, Result};

/// Largest matrix side accepted (2^30 subsets).
pub const MAX_RYSER_SIDE: usize = 30;
const DEADLINE_POLL: u64 = 1 << 16;

/// Rows of `A_{G,K_d}`: `d` copies of the incidence row of each vertex
/// outside the clique, over the edges that are not clique edges.
pub fn incidence_matrix(g: &Graph, k: &Clique, d: u32) -> Result<Vec<Vec<u8>>> {
    check_dimension(d)?;
    Clique::new(g, k.members())?;
    let columns: Vec<_> = g.edges().filter(|&(u, v)| !(k.contains(u) && k.contains(v))).collect();
    let mut rows = Vec::new();
    for v in g.vertices().filter(|&v| !k.contains(v)) {
        let row: Vec<u8> = columns.iter().map(|&(a, b)| u8::from(a == v || b == v)).collect();
        for _ in 0..d {
            rows.push(row.clone());
        }
    }
    Ok(rows)
}

pub fn incidence_permanent(g: &Graph, k: &Clique, d: u32) -> Result<BigUint> {
    incidence_permanent_with(g, k, d, None)
}

/// Permanent of `A_{G,K_d}`, evaluated on distinct rows with multiplicity `d`.
pub fn incidence_permanent_with(g: &Graph, k: &Clique, d: u32, deadline: Option<Instant>) -> Result<BigUint> {
    check_dimension(d)?;
    if k.len() != d as usize {
        return Err(Error::InvalidSize(format!("clique has {} vertices, dimension is {d}", k.len())));
    }
    Clique::new(g, k.members())?;
    let columns: Vec<_> = g.edges().filter(|&(u, v)| !(k.contains(u) && k.contains(v))).collect();
    let free: Vec<_> = g.vertices().filter(|&v| !k.contains(v)).collect();
    let rows = free.len() * d as usize;
    if rows != columns.len() {
        return Err(Error::DimensionMismatch { rows, cols: columns.len() });
    }
    let groups: Vec<(Vec<usize>, u32)> = free
        .iter()
        .map(|&v| {
            let cols = columns
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| a == v || b == v)
                .map(|(j, _)| j)
                .collect();
            (cols, d)
        })
        .collect();
    ryser_repeated_rows(&groups, columns.len(), deadline)
}

/// Permanent of a square 0/1 matrix.
pub fn permanent(matrix: &[Vec<u8>]) -> Result<BigUint> {
    let n = matrix.len();
    if let Some(bad) = matrix.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { rows: n, cols: bad.len() });
    }
    let groups: Vec<(Vec<usize>, u32)> = matrix
        .iter()
        .map(|r| ((0..n).filter(|&j| r[j] != 0).collect(), 1))
        .collect();
    ryser(&groups, n, None)
}

/// `per(A) = (-1)^n * sum_S (-1)^|S| * prod_i (sum_{j in S} a_ij)`, where
/// identical rows are grouped as `(columns with a one, multiplicity)`.
fn ryser(groups: &[(Vec<usize>, u32)], n: usize, deadline: Option<Instant>) -> Result<BigUint> {
    let rows: usize = groups.iter().map(|(_, m)| *m as usize).sum();
    if rows != n {
        return Err(Error::DimensionMismatch { rows, cols: n });
    }
    if n > MAX_RYSER_SIDE {
        return Err(Error::PermanentTooLarge { side: n, max: MAX_RYSER_SIDE });
    }
    if n == 0 {
        return Ok(BigUint::one());
    }
    if groups.iter().any(|(cols, _)| cols.is_empty()) {
        return Ok(BigUint::zero());
    }
    let mut by_column: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (gi, (cols, _)) in groups.iter().enumerate() {
        for &j in cols {
            by_column[j].push(gi);
        }
    }

    let mut sums = vec![0i64; groups.len()];
    let mut zero_groups = groups.len();
    let mut in_set = vec![false; n];
    let mut set_size = 0usize;
    let mut small: i128 = 0;
    let mut big = BigInt::zero();

    for step in 1u64..(1u64 << n) {
        if step % DEADLINE_POLL == 0 {
            if let Some(deadline) = deadline {
                if Instant::now() >= deadline {
                    return Err(Error::Timeout);
                }
            }
        }
        let j = step.trailing_zeros() as usize;
        let delta = if in_set[j] { -1 } else { 1 };
        in_set[j] = !in_set[j];
        set_size = (set_size as i64 + delta) as usize;
        for &gi in &by_column[j] {
            if sums[gi] == 0 {
                zero_groups -= 1;
            }
            sums[gi] += delta;
            if sums[gi] == 0 {
                zero_groups += 1;
            }
        }
        if zero_groups > 0 {
            continue;
        }
        let negative = (n - set_size) % 2 == 1;
        match product_i128(&sums, groups) {
            Some(p) => {
                let term = if negative { -p } else { p };
                match small.checked_add(term) {
                    Some(s) => small = s,
                    None => {
                        big += BigInt::from(small) + BigInt::from(term);
                        small = 0;
                    }
                }
            }
            None => {
                let p = product_big(&sums, groups);
                if negative {
                    big -= p;
                } else {
                    big += p;
                }
            }
        }
    }
    big += BigInt::from(small);
    match big.sign() {
        Sign::Minus => Err(Error::Integrity("negative permanent".into())),
        _ => Ok(big.magnitude().clone()),
    }
}

/// `per(A) = sum_k (-1)^(n - |k|) prod_g C(m_g, k_g) prod_j (sum_g k_g a_gj)`
/// over `0 <= k_g <= m_g`, for rows grouped as in [`ryser`].
fn ryser_repeated_rows(groups: &[(Vec<usize>, u32)], n: usize, deadline: Option<Instant>) -> Result<BigUint> {
    let rows: usize = groups.iter().map(|(_, m)| *m as usize).sum();
    if rows != n {
        return Err(Error::DimensionMismatch { rows, cols: n });
    }
    if n > MAX_RYSER_SIDE {
        return Err(Error::PermanentTooLarge { side: n, max: MAX_RYSER_SIDE });
    }
    if deadline.is_some_and(|t| Instant::now() >= t) {
        return Err(Error::Timeout);
    }
    if n == 0 {
        return Ok(BigUint::one());
    }
    let mut col_sums = vec![0i64; n];
    let mut zero_cols = n;
    let mut k = vec![0u32; groups.len()];
    let mut chosen = 0usize;
    let binom: Vec<Vec<i128>> = groups
        .iter()
        .map(|(_, m)| (0..=*m as u64).map(|i| binomial_i128(*m as u64, i)).collect())
        .collect();
    let mut small: i128 = 0;
    let mut big = BigInt::zero();
    let mut ticks = 0u64;

    loop {
        // advance the mixed-radix counter, updating column sums
        let mut g = 0;
        loop {
            if g == groups.len() {
                big += BigInt::from(small);
                return match big.sign() {
                    Sign::Minus => Err(Error::Integrity("negative permanent".into())),
                    _ => Ok(big.magnitude().clone()),
                };
            }
            let (cols, m) = &groups[g];
            let delta = if k[g] == *m { -(*m as i64) } else { 1 };
            for &j in cols {
                if col_sums[j] == 0 {
                    zero_cols -= 1;
                }
                col_sums[j] += delta;
                if col_sums[j] == 0 {
                    zero_cols += 1;
                }
            }
            chosen = (chosen as i64 + delta) as usize;
            if k[g] == *m {
                k[g] = 0;
                g += 1;
            } else {
                k[g] += 1;
                break;
            }
        }
        ticks += 1;
        if ticks.is_multiple_of(DEADLINE_POLL) && deadline.is_some_and(|t| Instant::now() >= t) {
            return Err(Error::Timeout);
        }
        if zero_cols > 0 {
            continue;
        }
        let negative = (n - chosen) % 2 == 1;
        let weights = k.iter().zip(&binom).map(|(&kg, b)| b[kg as usize]);
        let term = col_sums
            .iter()
            .map(|&c| c as i128)
            .chain(weights)
            .try_fold(1i128, |acc, x| acc.checked_mul(x));
        match term.and_then(|t| small.checked_add(if negative { -t } else { t })) {
            Some(s) => small = s,
            None => {
                let t = col_sums
                    .iter()
                    .map(|&c| BigInt::from(c))
                    .chain(k.iter().zip(&binom).map(|(&kg, b)| BigInt::from(b[kg as usize])))
                    .fold(BigInt::one(), |acc, x| acc * x);
                if negative {
                    big -= t;
                } else {
                    big += t;
                }
            }
        }
    }
}

fn binomial_i128(n: u64, k: u64) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

fn product_i128(sums: &[i64], groups: &[(Vec<usize>, u32)]) -> Option<i128> {
    let mut acc: i128 = 1;
    for (s, (_, m)) in sums.iter().zip(groups) {
        for _ in 0..*m {
            acc = acc.checked_mul(*s as i128)?;
        }
    }
    Some(acc)
}

fn product_big(sums: &[i64], groups: &[(Vec<usize>, u32)]) -> BigInt {
    sums.iter()
        .zip(groups)
        .fold(BigInt::one(), |acc, (s, (_, m))| acc * BigInt::from(*s).pow(*m))
}

/// `per / (d!)^(n - d)` as an exact rational.
pub fn b_from_permanent(per: &BigUint, n_vertices: usize, d: u32) -> BigRational {
    let exponent = n_vertices.saturating_sub(d as usize) as u32;
    let denom = factorial(d as u64).pow(exponent);
    BigRational::new(BigInt::from(per.clone()), BigInt::from(denom))
}
