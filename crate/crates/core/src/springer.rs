//! Type-A nilpotent orbits and Springer fibers: orbit dimensions, fiber
//! dimensions, and point counts of fibers over small finite fields.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fplinalg::FpPoly;
use crate::polyq::{rat, FitError, PolyQ};
use crate::rootdata::is_prime;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpringerError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("n = {0} exceeds the point-count budget (n <= {MAX_N})")]
    TooLarge(usize),
    #[error("q = {0} is not a supported prime power")]
    UnsupportedField(u32),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error("fitted Poincaré polynomial for {partition} is not a nonnegative integer polynomial of degree {degree}: {poly}")]
    BadFit { partition: Partition, degree: usize, poly: String },
    #[error("point-count total {counted} disagrees with the multinomial {expected} for {partition}")]
    CrossCheck { partition: Partition, counted: u64, expected: u64 },
}

pub const MAX_N: usize = 4;

/// Prime powers with field tables available, in increasing order.
pub const SUPPORTED_Q: [u32; 9] = [2, 3, 4, 5, 7, 8, 9, 11, 13];

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self, SpringerError> {
        if parts.contains(&0) {
            return Err(SpringerError::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.is_empty() {
            return Err(SpringerError::InvalidPartition("empty partition".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn transpose(&self) -> Partition {
        let first = self.0[0];
        Partition((1..=first).map(|k| self.0.iter().filter(|&&l| l >= k).count()).collect())
    }

    /// All partitions of n in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn go(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if left == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for k in (1..=left.min(max)).rev() {
                cur.push(k);
                go(left - k, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Dominance order: true when self ⊵ other.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let (mut a, mut b) = (0, 0);
        for i in 0..self.0.len().max(other.0.len()) {
            a += self.0.get(i).copied().unwrap_or(0);
            b += other.0.get(i).copied().unwrap_or(0);
            if a < b {
                return false;
            }
        }
        true
    }

    /// Strictly upper-triangular Jordan form: ones on the superdiagonal inside each block.
    pub fn jordan_superdiagonal(&self) -> Vec<bool> {
        let n = self.size();
        let mut sup = vec![false; n.saturating_sub(1)];
        let mut start = 0;
        for &l in &self.0 {
            for i in start..start + l - 1 {
                sup[i] = true;
            }
            start += l;
        }
        sup
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = SpringerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = t
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| SpringerError::InvalidPartition(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(parts)
    }
}

/// n² − Σ (λ'_i)²
pub fn orbit_dim(lambda: &Partition) -> usize {
    let n = lambda.size();
    n * n - lambda.transpose().0.iter().map(|c| c * c).sum::<usize>()
}

/// dim B − orbit_dim / 2 with dim B = n(n−1)/2.
pub fn springer_fiber_dim(lambda: &Partition) -> usize {
    let n = lambda.size();
    let od = orbit_dim(lambda);
    debug_assert!(od % 2 == 0);
    n * (n - 1) / 2 - od / 2
}

/// Σ binom(λ'_i, 2), an independent formula for the fiber dimension.
pub fn springer_fiber_dim_by_columns(lambda: &Partition) -> usize {
    lambda.transpose().0.iter().map(|c| c * (c.saturating_sub(1)) / 2).sum()
}

/// n! / ∏ λ_i!
pub fn multinomial(lambda: &Partition) -> u64 {
    let fact = |k: usize| (1..=k as u64).product::<u64>();
    fact(lambda.size()) / lambda.0.iter().map(|&l| fact(l)).product::<u64>()
}

/// Arithmetic in GF(q) via addition and multiplication tables. Elements are
/// 0..q, read as base-p coefficient vectors of polynomials modulo a fixed
/// irreducible.
#[derive(Clone, Debug)]
pub struct SmallField {
    q: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl SmallField {
    pub fn new(q: u32) -> Result<Self, SpringerError> {
        let (p, k) = prime_power(q).ok_or(SpringerError::UnsupportedField(q))?;
        if !SUPPORTED_Q.contains(&q) {
            return Err(SpringerError::UnsupportedField(q));
        }
        let modulus = (0..p.pow(k))
            .map(|idx| {
                let mut c: Vec<u32> = (0..k).map(|i| idx / p.pow(i) % p).collect();
                c.push(1);
                FpPoly::new(p, c)
            })
            .find(|f| f.is_irreducible())
            .expect("irreducible polynomials exist in every degree");
        let digits = |x: u32| -> Vec<u32> { (0..k).map(|i| x / p.pow(i) % p).collect() };
        let encode = |f: &FpPoly| -> u32 { f.coeffs().iter().enumerate().map(|(i, &c)| c * p.pow(i as u32)).sum() };
        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&FpPoly::new(p, s));
                let prod = FpPoly::new(p, da).mul(&FpPoly::new(p, db)).divrem(&modulus).1;
                mul[(a * q + b) as usize] = encode(&prod);
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add[(a * q + b) as usize] == 0).expect("additive inverse")).collect();
        let inv = (0..q)
            .map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[(a * q + b) as usize] == 1).expect("field") })
            .collect();
        Ok(SmallField { q, add, mul, neg, inv })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "zero has no inverse");
        self.inv[a as usize]
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    fn matmul(&self, a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let n = a.len();
        let m = b.first().map_or(0, |r| r.len());
        (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| (0..b.len()).fold(0, |acc, k| self.add(acc, self.mul(a[i][k], b[k][j]))))
                    .collect()
            })
            .collect()
    }

    fn rank(&self, m: &[Vec<u32>]) -> usize {
        let mut a = m.to_vec();
        let rows = a.len();
        let cols = a.first().map_or(0, |r| r.len());
        let mut r = 0;
        for c in 0..cols {
            let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
                continue;
            };
            a.swap(piv, r);
            let inv = self.inv(a[r][c]);
            for i in r + 1..rows {
                if a[i][c] == 0 {
                    continue;
                }
                let f = self.mul(a[i][c], inv);
                for j in c..cols {
                    a[i][j] = self.sub(a[i][j], self.mul(f, a[r][j]));
                }
            }
            r += 1;
        }
        r
    }

    fn nullspace(&self, m: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let mut a = m.to_vec();
        let rows = a.len();
        let cols = a.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
                continue;
            };
            a.swap(piv, r);
            let inv = self.inv(a[r][c]);
            for j in c..cols {
                a[r][j] = self.mul(a[r][j], inv);
            }
            for i in 0..rows {
                if i == r || a[i][c] == 0 {
                    continue;
                }
                let f = a[i][c];
                for j in c..cols {
                    a[i][j] = self.sub(a[i][j], self.mul(f, a[r][j]));
                }
            }
            pivots.push(c);
            r += 1;
        }
        (0..cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![0; cols];
                v[free] = 1;
                for (row, &c) in pivots.iter().enumerate() {
                    v[c] = self.neg(a[row][free]);
                }
                v
            })
            .collect()
    }
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    if !is_prime(p) {
        return None;
    }
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

/// Jordan type of a nilpotent matrix from the ranks of its powers.
fn jordan_type(field: &SmallField, x: &[Vec<u32>]) -> Vec<usize> {
    let n = x.len();
    let mut ranks = vec![n];
    let mut power = x.to_vec();
    while *ranks.last().expect("nonempty") > 0 {
        ranks.push(field.rank(&power));
        power = field.matmul(&power, x);
        assert!(ranks.len() <= n + 2, "matrix is not nilpotent");
    }
    // blocks of size ≥ k: ranks[k−1] − ranks[k]; the transpose gives the parts
    let cols: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).filter(|&c| c > 0).collect();
    let mut parts: Vec<usize> = (1..=cols.first().copied().unwrap_or(0))
        .map(|k| cols.iter().filter(|&&c| c >= k).count())
        .collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

fn jordan_matrix(lambda: &[usize]) -> Vec<Vec<u32>> {
    let n: usize = lambda.iter().sum();
    let mut x = vec![vec![0; n]; n];
    let mut start = 0;
    for &l in lambda {
        for i in start..start + l - 1 {
            x[i][i + 1] = 1;
        }
        start += l;
    }
    x
}

/// Lines of GF(q)^m as normalized representatives (first nonzero entry 1).
fn projective_points(field: &SmallField, m: usize) -> Vec<Vec<u32>> {
    let q = field.q() as usize;
    let mut out = Vec::new();
    for lead in 0..m {
        let free = m - lead - 1;
        for idx in 0..q.pow(free as u32) {
            let mut v = vec![0; m];
            v[lead] = 1;
            let mut r = idx;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = (r % q) as u32;
                r /= q;
            }
            out.push(v);
        }
    }
    out
}

/// Matrix of x acting on V / span(v) for v ∈ ker x.
fn quotient_action(field: &SmallField, x: &[Vec<u32>], v: &[u32]) -> Vec<Vec<u32>> {
    let n = x.len();
    let j = v.iter().position(|&a| a != 0).expect("nonzero vector");
    let vinv = field.inv(v[j]);
    let keep: Vec<usize> = (0..n).filter(|&i| i != j).collect();
    let mut out = vec![vec![0; n - 1]; n - 1];
    for (c, &i) in keep.iter().enumerate() {
        // column i of x, reduced modulo v
        let col: Vec<u32> = (0..n).map(|r| x[r][i]).collect();
        let f = field.mul(col[j], vinv);
        for (r, &k) in keep.iter().enumerate() {
            out[r][c] = field.sub(col[k], field.mul(f, v[k]));
        }
    }
    out
}

fn count_by_type(field: &SmallField, lambda: &[usize], memo: &mut HashMap<Vec<usize>, u64>) -> u64 {
    if lambda.iter().sum::<usize>() <= 1 {
        return 1;
    }
    if let Some(&c) = memo.get(lambda) {
        return c;
    }
    let x = jordan_matrix(lambda);
    let kernel = field.nullspace(&x);
    let mut total = 0;
    for coeffs in projective_points(field, kernel.len()) {
        let n = x.len();
        let mut v = vec![0; n];
        for (c, k) in coeffs.iter().zip(&kernel) {
            for i in 0..n {
                v[i] = field.add(v[i], field.mul(*c, k[i]));
            }
        }
        let ty = jordan_type(field, &quotient_action(field, &x, &v));
        total += count_by_type(field, &ty, memo);
    }
    memo.insert(lambda.to_vec(), total);
    total
}

/// Number of complete flags over GF(q) stable under a nilpotent of Jordan
/// type λ (x F_i ⊆ F_{i−1}).
pub fn point_count(lambda: &Partition, q: u32) -> Result<u64, SpringerError> {
    if lambda.size() > MAX_N {
        return Err(SpringerError::TooLarge(lambda.size()));
    }
    let field = SmallField::new(q)?;
    Ok(count_by_type(&field, &lambda.0, &mut HashMap::new()))
}

/// Point counts fitted to a polynomial in q.
#[derive(Clone, Debug, Serialize)]
pub struct PoincareFit {
    pub partition: Partition,
    pub samples: Vec<(u32, u64)>,
    /// Coefficients from the constant term up.
    pub coefficients: Vec<i64>,
    pub total: u64,
}

impl PoincareFit {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, q: u64) -> u64 {
        self.coefficients.iter().rev().fold(0i64, |acc, &c| acc * q as i64 + c) as u64
    }

    pub fn display_poly(&self) -> String {
        let mut terms = Vec::new();
        for (k, &c) in self.coefficients.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let t = match (k, c) {
                (0, c) => c.to_string(),
                (1, 1) => "q".into(),
                (1, c) => format!("{c}q"),
                (k, 1) => format!("q^{k}"),
                (k, c) => format!("{c}q^{k}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Fits the point counts to a polynomial of degree dim B_λ and checks it.
pub fn poincare_fit(lambda: &Partition) -> Result<PoincareFit, SpringerError> {
    let d = springer_fiber_dim(lambda);
    let npts = (d + 2).max(4);
    let qs = &SUPPORTED_Q[..npts.min(SUPPORTED_Q.len())];
    let samples: Vec<(u32, u64)> = qs.iter().map(|&q| point_count(lambda, q).map(|c| (q, c))).collect::<Result<_, _>>()?;
    let pts: Vec<(Vec<i64>, BigRational)> = samples.iter().map(|&(q, c)| (vec![q as i64], rat(c as i64))).collect();
    let poly = PolyQ::fit(1, &pts, d)?;
    let coefficients: Option<Vec<i64>> = (0..=d)
        .map(|k| {
            let c = poly.coefficient(&[k as u32]);
            (c.is_integer() && !c.is_negative()).then(|| c.to_integer()).and_then(|n: BigInt| n.to_i64())
        })
        .collect();
    let bad = || SpringerError::BadFit { partition: lambda.clone(), degree: d, poly: poly.to_string() };
    let coefficients = coefficients.ok_or_else(bad)?;
    if poly.degree() != d || poly.coefficient(&[d as u32]).is_zero() {
        return Err(bad());
    }
    let total = coefficients.iter().sum::<i64>() as u64;
    Ok(PoincareFit { partition: lambda.clone(), samples, coefficients, total })
}

/// dim H*(B_λ) from the point-count fit, cross-checked against n!/∏λ_i!.
pub fn cohomology_total_dim(lambda: &Partition) -> Result<u64, SpringerError> {
    let fit = poincare_fit(lambda)?;
    let expected = multinomial(lambda);
    if fit.total != expected {
        return Err(SpringerError::CrossCheck { partition: lambda.clone(), counted: fit.total, expected });
    }
    Ok(fit.total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    /// Independent oracle: enumerate sequences of vectors v_1, …, v_n with
    /// x v_i ∈ span(v_1..v_{i−1}) and v_i outside it, then divide by the
    /// number of sequences per flag.
    fn brute_force_count(lambda: &Partition, q: u32) -> u64 {
        let field = SmallField::new(q).unwrap();
        let x = jordan_matrix(lambda.parts());
        let n = x.len();
        let vectors: Vec<Vec<u32>> = (0..(q as usize).pow(n as u32))
            .map(|mut idx| {
                (0..n)
                    .map(|_| {
                        let d = (idx % q as usize) as u32;
                        idx /= q as usize;
                        d
                    })
                    .collect()
            })
            .collect();
        fn in_span(field: &SmallField, span: &[Vec<u32>], v: &[u32]) -> bool {
            let mut rows = span.to_vec();
            let r = field.rank(&rows);
            rows.push(v.to_vec());
            field.rank(&rows) == r
        }
        fn dfs(field: &SmallField, x: &[Vec<u32>], vectors: &[Vec<u32>], chosen: &mut Vec<Vec<u32>>) -> u64 {
            let n = x.len();
            if chosen.len() == n {
                return 1;
            }
            let mut total = 0;
            for v in vectors {
                let xv: Vec<u32> = (0..n)
                    .map(|i| (0..n).fold(0, |acc, k| field.add(acc, field.mul(x[i][k], v[k]))))
                    .collect();
                if in_span(field, chosen, v) || !in_span(field, chosen, &xv) {
                    continue;
                }
                chosen.push(v.clone());
                total += dfs(field, x, vectors, chosen);
                chosen.pop();
            }
            total
        }
        let sequences = dfs(&field, &x, &vectors, &mut Vec::new());
        let q = q as u64;
        let per_flag: u64 = (1..=n as u32).map(|i| q.pow(i) - q.pow(i - 1)).product();
        assert_eq!(sequences % per_flag, 0);
        sequences / per_flag
    }

    #[test]
    fn field_tables_are_fields() {
        for q in SUPPORTED_Q {
            let f = SmallField::new(q).unwrap();
            for a in 1..q {
                assert_eq!(f.mul(a, f.inv(a)), 1);
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                }
            }
        }
        assert!(SmallField::new(6).is_err());
        assert!(SmallField::new(16).is_err());
    }

    #[test]
    fn orbit_and_fiber_dims() {
        assert_eq!(orbit_dim(&part("1,1,1")), 0);
        assert_eq!(orbit_dim(&part("3")), 6);
        assert_eq!(orbit_dim(&part("2,1")), 4);
        assert_eq!(springer_fiber_dim(&part("3")), 0);
        assert_eq!(springer_fiber_dim(&part("1,1,1")), 3);
        assert_eq!(springer_fiber_dim(&part("2,1")), 1);
        for n in 1..=6 {
            for l in Partition::all(n) {
                assert_eq!(springer_fiber_dim(&l), springer_fiber_dim_by_columns(&l), "{l}");
                assert_eq!(l.transpose().transpose(), l);
            }
        }
    }

    #[test]
    fn point_counts_match_examples() {
        assert_eq!(point_count(&part("3"), 2).unwrap(), 1);
        assert_eq!(point_count(&part("3"), 5).unwrap(), 1);
        assert_eq!(point_count(&part("1,1,1"), 2).unwrap(), 21);
        assert_eq!(point_count(&part("2,1"), 2).unwrap(), 5);
        assert!(matches!(point_count(&part("5"), 2), Err(SpringerError::TooLarge(5))));
    }

    #[test]
    fn recursion_agrees_with_brute_force() {
        for n in 1..=3 {
            for l in Partition::all(n) {
                for q in [2, 3, 4] {
                    assert_eq!(point_count(&l, q).unwrap(), brute_force_count(&l, q), "{l} q={q}");
                }
            }
        }
        for l in Partition::all(4) {
            assert_eq!(point_count(&l, 2).unwrap(), brute_force_count(&l, 2), "{l}");
        }
    }

    #[test]
    fn totals_and_polynomials() {
        assert_eq!(cohomology_total_dim(&part("3")).unwrap(), 1);
        assert_eq!(cohomology_total_dim(&part("1,1,1")).unwrap(), 6);
        let f = poincare_fit(&part("2,1")).unwrap();
        assert_eq!(f.coefficients, vec![1, 2]);
        assert_eq!(f.display_poly(), "2q + 1");
        let full = poincare_fit(&part("1,1,1")).unwrap();
        assert_eq!(full.coefficients, vec![1, 2, 2, 1]);
    }

    #[test]
    fn dominance() {
        assert!(part("3").dominates(&part("2,1")));
        assert!(part("2,1").dominates(&part("1,1,1")));
        assert!(!part("1,1,1").dominates(&part("2,1")));
        assert!(part("3,1").dominates(&part("2,2")));
    }
}
