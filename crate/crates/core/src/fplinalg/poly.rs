//! Univariate polynomials over F_p and characteristic polynomials.

use super::{inv_mod, FpMatrix};

/// Coefficients stored low degree first, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u32,
    coeffs: Vec<u32>,
}

impl FpPoly {
    pub fn new(p: u32, coeffs: Vec<u32>) -> Self {
        let mut f = FpPoly { p, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        f.trim();
        f
    }

    pub fn zero(p: u32) -> Self {
        FpPoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u32) -> Self {
        FpPoly::new(p, vec![1])
    }

    /// x − c
    pub fn linear(p: u32, c: u32) -> Self {
        FpPoly::new(p, vec![(p - c % p) % p, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial given degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u32) -> u32 {
        let p = self.p as u64;
        self.coeffs.iter().rev().fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p) as u32
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + b) % self.p
            })
            .collect();
        FpPoly::new(self.p, c)
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p as u64;
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + a as u64 * b as u64) % p;
            }
        }
        FpPoly::new(self.p, c.into_iter().map(|x| x as u32).collect())
    }

    pub fn scale(&self, s: u32) -> FpPoly {
        let p = self.p as u64;
        FpPoly::new(self.p, self.coeffs.iter().map(|&c| (c as u64 * s as u64 % p) as u32).collect())
    }

    /// Quotient and remainder of division by a nonzero polynomial.
    pub fn divrem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p as u64;
        let mut r = self.coeffs.clone();
        let dn = d.coeffs.len();
        if r.len() < dn {
            return (FpPoly::zero(self.p), self.clone());
        }
        let inv = inv_mod(d.leading(), self.p) as u64;
        let mut q = vec![0u32; r.len() - dn + 1];
        for k in (0..q.len()).rev() {
            let c = r[k + dn - 1] as u64 * inv % p;
            q[k] = c as u32;
            if c == 0 {
                continue;
            }
            for (j, &b) in d.coeffs.iter().enumerate() {
                let x = &mut r[k + j];
                *x = ((*x as u64 + (p - c) * b as u64) % p) as u32;
            }
        }
        (FpPoly::new(self.p, q), FpPoly::new(self.p, r))
    }

    pub fn divides(&self, f: &FpPoly) -> bool {
        f.divrem(self).1.is_zero()
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.p))
    }

    /// Irreducibility test by trial division with every monic polynomial of
    /// degree at most half of ours. Only intended for small degrees.
    pub fn is_irreducible(&self) -> bool {
        let d = self.degree();
        if self.is_zero() || d == 0 {
            return false;
        }
        (1..=d / 2).all(|k| monic_polys(self.p, k).iter().all(|g| !g.divides(self)))
    }

    /// Distinct monic irreducible factors of degree ≤ `max_degree`, ordered by degree.
    pub fn small_irreducible_factors(&self, max_degree: usize) -> Vec<FpPoly> {
        let mut out = Vec::new();
        for k in 1..=max_degree.min(self.degree()) {
            for g in monic_polys(self.p, k) {
                if g.is_irreducible() && g.divides(self) {
                    out.push(g);
                }
            }
        }
        out
    }

    /// g(A) by Horner's rule.
    pub fn eval_matrix(&self, a: &FpMatrix) -> FpMatrix {
        assert!(a.is_square());
        let n = a.rows();
        let mut acc = FpMatrix::zeros(self.p, n, n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(a).add(&FpMatrix::scalar(self.p, n, c));
        }
        acc
    }
}

/// Every monic polynomial of degree k over F_p.
fn monic_polys(p: u32, k: usize) -> Vec<FpPoly> {
    let count = (p as usize).pow(k as u32);
    (0..count)
        .map(|mut idx| {
            let mut c = Vec::with_capacity(k + 1);
            for _ in 0..k {
                c.push((idx % p as usize) as u32);
                idx /= p as usize;
            }
            c.push(1);
            FpPoly::new(p, c)
        })
        .collect()
}

/// Characteristic polynomial det(x·I − A) via reduction to upper Hessenberg form.
pub fn charpoly(a: &FpMatrix) -> FpPoly {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let p = a.p();
    let p64 = p as u64;
    let n = a.rows();
    let mut h: Vec<Vec<u64>> = (0..n).map(|i| a.row(i).iter().map(|&x| x as u64).collect()).collect();
    for m in 1..n.saturating_sub(1) {
        let Some(piv) = (m..n).find(|&i| h[i][m - 1] != 0) else {
            continue;
        };
        if piv != m {
            h.swap(piv, m);
            for row in h.iter_mut() {
                row.swap(piv, m);
            }
        }
        let inv = inv_mod(h[m][m - 1] as u32, p) as u64;
        for i in m + 1..n {
            let u = h[i][m - 1] * inv % p64;
            if u == 0 {
                continue;
            }
            // row_i -= u·row_m, then col_m += u·col_i keeps the similarity
            for j in 0..n {
                h[i][j] = (h[i][j] + (p64 - u) * h[m][j]) % p64;
            }
            for row in h.iter_mut() {
                row[m] = (row[m] + u * row[i]) % p64;
            }
        }
    }
    // p_k(x) = (x − h_kk) p_{k−1} − Σ_{i<k} h_ik (∏_{j=i+1}^{k} h_{j,j−1}) p_{i−1}
    let mut polys: Vec<FpPoly> = vec![FpPoly::one(p)];
    for k in 0..n {
        let mut pk = FpPoly::linear(p, h[k][k] as u32).mul(&polys[k]);
        let mut t = 1u64;
        for i in (0..k).rev() {
            t = t * h[i + 1][i] % p64;
            if t == 0 {
                break;
            }
            let c = t * h[i][k] % p64;
            if c != 0 {
                pk = pk.add(&polys[i].scale((p64 - c) as u32));
            }
        }
        polys.push(pk);
    }
    polys.pop().expect("n+1 polynomials")
}
