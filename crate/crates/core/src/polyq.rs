//! Exact multivariate polynomials with rational coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FitError {
    #[error("fit is underdetermined: rank {rank} < {unknowns} monomials")]
    Underdetermined { rank: usize, unknowns: usize },
    #[error("no polynomial of degree <= {degree} reproduces the samples (nonzero residual)")]
    Residual { degree: usize },
    #[error("sample has {found} coordinates, expected {expected}")]
    Arity { found: usize, expected: usize },
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Σ c_e x^e over Q in a fixed number of variables; no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyQ {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl PolyQ {
    pub fn zero(nvars: usize) -> Self {
        PolyQ { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut f = PolyQ::zero(nvars);
        f.add_term(vec![0; nvars], c);
        f
    }

    pub fn one(nvars: usize) -> Self {
        PolyQ::constant(nvars, BigRational::one())
    }

    /// The coordinate function x_i.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut f = PolyQ::zero(nvars);
        f.add_term(e, BigRational::one());
        f
    }

    /// Σ c_i x_i + c0
    pub fn affine(coeffs: &[BigRational], c0: BigRational) -> Self {
        let n = coeffs.len();
        let mut f = PolyQ::constant(n, c0);
        for (i, c) in coeffs.iter().enumerate() {
            f = f.add(&PolyQ::var(n, i).scale(c));
        }
        f
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().sum::<u32>() as usize).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    fn same_ring(&self, other: &PolyQ) {
        assert_eq!(self.nvars, other.nvars, "polynomials in different numbers of variables");
    }

    pub fn add(&self, other: &PolyQ) -> PolyQ {
        self.same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PolyQ) -> PolyQ {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &BigRational) -> PolyQ {
        if c.is_zero() {
            return PolyQ::zero(self.nvars);
        }
        PolyQ { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &PolyQ) -> PolyQ {
        self.same_ring(other);
        let mut out = PolyQ::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> PolyQ {
        (0..k).fold(PolyQ::one(self.nvars), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.nvars, "evaluation point has the wrong arity");
        let mut s = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t *= xi;
                }
            }
            s += t;
        }
        s
    }

    pub fn eval_int(&self, x: &[i64]) -> BigRational {
        let xs: Vec<BigRational> = x.iter().map(|&a| rat(a)).collect();
        self.eval(&xs)
    }

    /// Substitutes polynomial `subs[i]` (in a common ring) for variable i.
    pub fn compose(&self, subs: &[PolyQ]) -> PolyQ {
        assert_eq!(subs.len(), self.nvars, "substitution has the wrong arity");
        let target = subs.first().map_or(0, |s| s.nvars);
        let mut out = PolyQ::zero(target);
        for (e, c) in &self.terms {
            let mut t = PolyQ::constant(target, c.clone());
            for (s, &k) in subs.iter().zip(e) {
                t = t.mul(&s.pow(k));
            }
            out = out.add(&t);
        }
        out
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Coefficients as (exponents, "num/den") pairs in monomial order.
    pub fn to_terms(&self) -> Vec<(Vec<u32>, String)> {
        self.terms.iter().map(|(e, c)| (e.clone(), c.to_string())).collect()
    }

    /// The unique polynomial of total degree ≤ `max_degree` through the samples.
    pub fn fit(nvars: usize, samples: &[(Vec<i64>, BigRational)], max_degree: usize) -> Result<PolyQ, FitError> {
        for (x, _) in samples {
            if x.len() != nvars {
                return Err(FitError::Arity { found: x.len(), expected: nvars });
            }
        }
        let monos = monomials(nvars, max_degree);
        let rows: Vec<Vec<BigRational>> = samples
            .iter()
            .map(|(x, _)| {
                monos
                    .iter()
                    .map(|e| x.iter().zip(e).fold(BigRational::one(), |acc, (&xi, &k)| acc * rat(xi.pow(k))))
                    .collect()
            })
            .collect();
        let rhs: Vec<BigRational> = samples.iter().map(|(_, v)| v.clone()).collect();
        let sol = solve_exact(rows, rhs).map_err(|e| match e {
            SolveError::Inconsistent => FitError::Residual { degree: max_degree },
            SolveError::Underdetermined { rank } => FitError::Underdetermined { rank, unknowns: monos.len() },
        })?;
        let mut f = PolyQ::zero(nvars);
        for (e, c) in monos.into_iter().zip(sol) {
            f.add_term(e, c);
        }
        for (x, v) in samples {
            if &f.eval_int(x) != v {
                return Err(FitError::Residual { degree: max_degree });
            }
        }
        Ok(f)
    }
}

impl fmt::Debug for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Exponent vectors of total degree ≤ d, graded then lexicographic.
pub fn monomials(nvars: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..=d {
        let mut cur = vec![0u32; nvars];
        compositions(nvars, total as u32, 0, &mut cur, &mut out);
    }
    out
}

fn compositions(n: usize, left: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if n == 0 {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if i == n - 1 {
        cur[i] = left;
        out.push(cur.clone());
        return;
    }
    for k in (0..=left).rev() {
        cur[i] = k;
        compositions(n, left - k, i + 1, cur, out);
    }
    cur[i] = 0;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    Inconsistent,
    Underdetermined { rank: usize },
}

/// Solves A·x = b exactly; the solution must exist and be unique.
pub fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Result<Vec<BigRational>, SolveError> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(piv, r);
        b.swap(piv, r);
        let inv = a[r][c].recip();
        for j in c..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..cols {
                let t = &f * &a[r][j];
                a[i][j] -= t;
            }
            let t = &f * &b[r];
            b[i] -= t;
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if b[r..].iter().any(|x| !x.is_zero()) {
        return Err(SolveError::Inconsistent);
    }
    if pivots.len() < cols {
        return Err(SolveError::Underdetermined { rank: pivots.len() });
    }
    let mut x = vec![BigRational::zero(); cols];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = b[row].clone();
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_compose() {
        let x = PolyQ::var(2, 0);
        let y = PolyQ::var(2, 1);
        let f = x.add(&y).pow(2);
        assert_eq!(f.coefficient(&[1, 1]), rat(2));
        assert_eq!(f.degree(), 2);
        // (x+y)^2 at x = t, y = −t vanishes
        let t = PolyQ::var(1, 0);
        let g = f.compose(&[t.clone(), t.scale(&rat(-1))]);
        assert!(g.is_zero());
        assert_eq!(f.eval_int(&[2, 3]), rat(25));
        assert_eq!(monomials(2, 2).len(), 6);
    }

    #[test]
    fn fit_recovers_polynomials() {
        let samples: Vec<(Vec<i64>, BigRational)> =
            (0..5).map(|q| (vec![q], rat(2 * q * q + q + 1))).collect();
        let f = PolyQ::fit(1, &samples, 2).unwrap();
        assert_eq!(f.coefficient(&[2]), rat(2));
        assert_eq!(f.coefficient(&[0]), rat(1));
        assert_eq!(PolyQ::fit(1, &samples, 1).unwrap_err(), FitError::Residual { degree: 1 });
        assert!(matches!(PolyQ::fit(1, &samples[..2], 2), Err(FitError::Underdetermined { .. })));
        let half: Vec<(Vec<i64>, BigRational)> =
            (0..4).flat_map(|a| (0..3).map(move |b| (vec![a, b], rat_frac(a * b, 2)))).collect();
        let h = PolyQ::fit(2, &half, 2).unwrap();
        assert_eq!(h.coefficient(&[1, 1]), rat_frac(1, 2));
        assert!(!h.has_integer_coefficients());
    }

    #[test]
    fn display_is_readable() {
        let f = PolyQ::var(1, 0).scale(&rat(5)).sub(&PolyQ::one(1));
        assert_eq!(f.to_string(), "5*x0 - 1");
    }
}
