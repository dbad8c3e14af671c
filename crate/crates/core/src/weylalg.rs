//! Crystalline differential operators on affine n-space over F_p: the Weyl
//! algebra in normal order, symbols, the p-center, point modules and
//! p-curvature of connections.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::fplinalg::{pow_mod, reduce, AlgebraModule, FpMatrix, ModuleError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("operands live in different algebras: (p={0}, n={1}) vs (p={2}, n={3})")]
    Mismatch(u32, usize, u32, usize),
    #[error("total degree {degree} exceeds the cap {cap} = 4p")]
    DegreeCap { degree: u32, cap: u32 },
    #[error("connection is not flat: [∇_{0}, ∇_{1}] ≠ 0")]
    NotFlat(usize, usize),
    #[error("p-curvature component {0} still involves derivatives")]
    NotLinear(usize),
    #[error("p-curvature component {0} is not parallel for ∇_{1}")]
    NotParallel(usize, usize),
    #[error("connection matrices have inconsistent shapes")]
    Shape,
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// C(n, k) mod p by Lucas' theorem.
pub fn binom_mod(mut n: u64, mut k: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (ni, ki) = (n % p64, k % p64);
        if ki > ni {
            return 0;
        }
        let mut c = 1u64;
        for t in 0..ki {
            c = c * ((ni - t) % p64) % p64;
        }
        let mut f = 1u64;
        for t in 1..=ki {
            f = f * t % p64;
        }
        acc = acc * c % p64 * crate::fplinalg::inv_mod(f as u32, p) as u64 % p64;
        n /= p64;
        k /= p64;
    }
    acc as u32
}

/// K(K−1)…(K−T+1) mod p.
fn falling(k: u32, t: u32, p: u32) -> u32 {
    let p64 = p as u64;
    (0..t).fold(1u64, |acc, s| acc * ((k - s) as u64 % p64) % p64) as u32
}

/// A commutative polynomial over F_p. Used both for functions of x and for
/// symbols in (x, ξ), where the first n variables are x and the last n are ξ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CommPoly {
    p: u32,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, u32>,
}

impl CommPoly {
    pub fn zero(p: u32, nvars: usize) -> Self {
        CommPoly { p, nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(p: u32, exps: Vec<u32>, c: i64) -> Self {
        let mut f = CommPoly::zero(p, exps.len());
        f.add_term(exps, reduce(c, p));
        f
    }

    pub fn constant(p: u32, nvars: usize, c: i64) -> Self {
        CommPoly::monomial(p, vec![0; nvars], c)
    }

    pub fn var(p: u32, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        CommPoly::monomial(p, e, 1)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, u32> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Vec<u32>, c: u32) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                let v = (*o.get() + c) % self.p;
                if v == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: u32) -> CommPoly {
        let mut out = CommPoly::zero(self.p, self.nvars);
        for (e, &v) in &self.terms {
            out.add_term(e.clone(), (v as u64 * c as u64 % self.p as u64) as u32);
        }
        out
    }

    pub fn sub(&self, other: &CommPoly) -> CommPoly {
        self.add(&other.scale(self.p - 1))
    }

    pub fn mul(&self, other: &CommPoly) -> CommPoly {
        let mut out = CommPoly::zero(self.p, self.nvars);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, (c1 as u64 * c2 as u64 % self.p as u64) as u32);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> CommPoly {
        (0..k).fold(CommPoly::constant(self.p, self.nvars, 1), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self, i: usize) -> CommPoly {
        let mut out = CommPoly::zero(self.p, self.nvars);
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, (c as u64 * (e[i] % self.p) as u64 % self.p as u64) as u32);
        }
        out
    }

    /// {f, g} = Σ_i (∂f/∂ξ_i ∂g/∂x_i − ∂f/∂x_i ∂g/∂ξ_i) on 2n variables (x, ξ).
    pub fn poisson(&self, other: &CommPoly) -> CommPoly {
        let n = self.nvars / 2;
        let mut out = CommPoly::zero(self.p, self.nvars);
        for i in 0..n {
            out = out.add(&self.derivative(n + i).mul(&other.derivative(i)));
            out = out.sub(&self.derivative(i).mul(&other.derivative(n + i)));
        }
        out
    }

    /// Uniformly random polynomial with monomials of total degree ≤ d.
    pub fn random<R: Rng>(rng: &mut R, p: u32, nvars: usize, d: u32, nterms: usize) -> CommPoly {
        let mut f = CommPoly::zero(p, nvars);
        for _ in 0..nterms {
            let mut e = vec![0u32; nvars];
            let mut left = rng.gen_range(0..=d);
            for slot in e.iter_mut() {
                let k = rng.gen_range(0..=left);
                *slot = k;
                left -= k;
            }
            f.add_term(e, rng.gen_range(1..p));
        }
        f
    }
}

impl fmt::Debug for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, &c)| {
                let m: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("v{}", i + 1) } else { format!("v{}^{k}", i + 1) })
                    .collect();
                match (m.is_empty(), c) {
                    (true, c) => c.to_string(),
                    (false, 1) => m.join("*"),
                    (false, c) => format!("{c}*{}", m.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Σ c_{J,I} x^J ∂^I in normal order over F_p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylAlgElement {
    p: u32,
    n: usize,
    terms: BTreeMap<(Vec<u32>, Vec<u32>), u32>,
}

impl WeylAlgElement {
    pub fn zero(p: u32, n: usize) -> Self {
        WeylAlgElement { p, n, terms: BTreeMap::new() }
    }

    /// c · x^J ∂^I
    pub fn monomial(p: u32, j: Vec<u32>, i: Vec<u32>, c: i64) -> Self {
        assert_eq!(j.len(), i.len());
        let mut a = WeylAlgElement::zero(p, j.len());
        a.add_term(j, i, reduce(c, p));
        a
    }

    pub fn constant(p: u32, n: usize, c: i64) -> Self {
        WeylAlgElement::monomial(p, vec![0; n], vec![0; n], c)
    }

    pub fn x(p: u32, n: usize, k: usize) -> Self {
        let mut j = vec![0; n];
        j[k] = 1;
        WeylAlgElement::monomial(p, j, vec![0; n], 1)
    }

    pub fn d(p: u32, n: usize, k: usize) -> Self {
        let mut i = vec![0; n];
        i[k] = 1;
        WeylAlgElement::monomial(p, vec![0; n], i, 1)
    }

    /// Multiplication operator by a function of x.
    pub fn from_function(f: &CommPoly) -> Self {
        let n = f.nvars;
        let mut a = WeylAlgElement::zero(f.p, n);
        for (e, &c) in &f.terms {
            a.add_term(e.clone(), vec![0; n], c);
        }
        a
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<(Vec<u32>, Vec<u32>), u32> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(j, i)| j.iter().sum::<u32>() + i.iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// Order in ∂.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|(_, i)| i.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, j: Vec<u32>, i: Vec<u32>, c: u32) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        match self.terms.entry((j, i)) {
            Entry::Occupied(mut o) => {
                let v = (*o.get() + c) % self.p;
                if v == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    fn check(&self, other: &WeylAlgElement) -> Result<(), WeylError> {
        if self.p != other.p || self.n != other.n {
            return Err(WeylError::Mismatch(self.p, self.n, other.p, other.n));
        }
        Ok(())
    }

    fn cap(&self) -> Result<(), WeylError> {
        let cap = 4 * self.p;
        let degree = self.degree();
        if degree > cap {
            return Err(WeylError::DegreeCap { degree, cap });
        }
        Ok(())
    }

    pub fn add(&self, other: &WeylAlgElement) -> Result<WeylAlgElement, WeylError> {
        self.check(other)?;
        let mut out = self.clone();
        for ((j, i), &c) in &other.terms {
            out.add_term(j.clone(), i.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: u32) -> WeylAlgElement {
        let mut out = WeylAlgElement::zero(self.p, self.n);
        for ((j, i), &v) in &self.terms {
            out.add_term(j.clone(), i.clone(), (v as u64 * c as u64 % self.p as u64) as u32);
        }
        out
    }

    pub fn sub(&self, other: &WeylAlgElement) -> Result<WeylAlgElement, WeylError> {
        self.add(&other.scale(self.p - 1))
    }

    /// Normal-ordered product, using ∂^I x^K = Σ_T C(I,T) K!/(K−T)! x^{K−T} ∂^{I−T}.
    pub fn mul(&self, other: &WeylAlgElement) -> Result<WeylAlgElement, WeylError> {
        self.check(other)?;
        self.cap()?;
        other.cap()?;
        let p = self.p;
        let mut out = WeylAlgElement::zero(p, self.n);
        for ((j1, i1), &c1) in &self.terms {
            for ((k2, l2), &c2) in &other.terms {
                let c = c1 as u64 * c2 as u64 % p as u64;
                let bounds: Vec<u32> = i1.iter().zip(k2).map(|(a, b)| *a.min(b)).collect();
                for t in box_iter(&bounds) {
                    let mut coef = c;
                    for v in 0..self.n {
                        coef = coef * binom_mod(i1[v] as u64, t[v] as u64, p) as u64 % p as u64;
                        coef = coef * falling(k2[v], t[v], p) as u64 % p as u64;
                        if coef == 0 {
                            break;
                        }
                    }
                    if coef == 0 {
                        continue;
                    }
                    let j: Vec<u32> = (0..self.n).map(|v| j1[v] + k2[v] - t[v]).collect();
                    let i: Vec<u32> = (0..self.n).map(|v| i1[v] - t[v] + l2[v]).collect();
                    out.add_term(j, i, coef as u32);
                }
            }
        }
        out.cap()?;
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<WeylAlgElement, WeylError> {
        let mut acc = WeylAlgElement::constant(self.p, self.n, 1);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn commutator(&self, other: &WeylAlgElement) -> Result<WeylAlgElement, WeylError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Order-k part as a polynomial in (x, ξ).
    pub fn principal_part(&self, k: u32) -> CommPoly {
        let mut f = CommPoly::zero(self.p, 2 * self.n);
        for ((j, i), &c) in &self.terms {
            if i.iter().sum::<u32>() == k {
                f.add_term(j.iter().chain(i).copied().collect(), c);
            }
        }
        f
    }

    /// Principal symbol: the top-order part in ∂, read in (x, ξ).
    pub fn symbol(&self) -> CommPoly {
        self.principal_part(self.order())
    }

    /// Applies the operator to a function of x.
    pub fn act_on_poly(&self, f: &CommPoly) -> CommPoly {
        assert_eq!(f.nvars, self.n, "function in the wrong number of variables");
        let p = self.p;
        let mut out = CommPoly::zero(p, self.n);
        for ((j, i), &c) in &self.terms {
            for (k, &fc) in &f.terms {
                if i.iter().zip(k).any(|(a, b)| a > b) {
                    continue;
                }
                let mut coef = c as u64 * fc as u64 % p as u64;
                for v in 0..self.n {
                    coef = coef * falling(k[v], i[v], p) as u64 % p as u64;
                }
                let e: Vec<u32> = (0..self.n).map(|v| k[v] - i[v] + j[v]).collect();
                out.add_term(e, coef as u32);
            }
        }
        out
    }

    /// A monomial on which the operator acts nonzero, valid whenever every
    /// ∂-exponent is below p.
    pub fn faithfulness_witness(&self) -> Option<CommPoly> {
        let minimal = self
            .terms
            .keys()
            .map(|(_, i)| i)
            .find(|i| !self.terms.keys().any(|(_, i2)| i2 != *i && i2.iter().zip(i.iter()).all(|(a, b)| a <= b)))?;
        let f = CommPoly::monomial(self.p, minimal.clone(), 1);
        (!self.act_on_poly(&f).is_zero()).then_some(f)
    }

    /// Commutes with every x_i and ∂_i.
    pub fn is_central(&self) -> Result<bool, WeylError> {
        for k in 0..self.n {
            let x = WeylAlgElement::x(self.p, self.n, k);
            let d = WeylAlgElement::d(self.p, self.n, k);
            if !self.commutator(&x)?.is_zero() || !self.commutator(&d)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every stored exponent is divisible by p.
    pub fn has_p_divisible_exponents(&self) -> bool {
        self.terms.keys().all(|(j, i)| j.iter().chain(i).all(|&e| e % self.p == 0))
    }

    /// Random element with monomials of total degree ≤ d.
    pub fn random<R: Rng>(rng: &mut R, p: u32, n: usize, d: u32, nterms: usize) -> WeylAlgElement {
        let f = CommPoly::random(rng, p, 2 * n, d, nterms);
        let mut a = WeylAlgElement::zero(p, n);
        for (e, &c) in &f.terms {
            a.add_term(e[..n].to_vec(), e[n..].to_vec(), c);
        }
        a
    }
}

impl fmt::Debug for WeylAlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for WeylAlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|((j, i), &c)| {
                let mut m = Vec::new();
                for (v, &k) in j.iter().enumerate().filter(|(_, &k)| k > 0) {
                    m.push(if k == 1 { format!("x{}", v + 1) } else { format!("x{}^{k}", v + 1) });
                }
                for (v, &k) in i.iter().enumerate().filter(|(_, &k)| k > 0) {
                    m.push(if k == 1 { format!("d{}", v + 1) } else { format!("d{}^{k}", v + 1) });
                }
                match (m.is_empty(), c) {
                    (true, c) => c.to_string(),
                    (false, 1) => m.join("*"),
                    (false, c) => format!("{c}*{}", m.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// All integer vectors t with 0 ≤ t ≤ bounds componentwise.
fn box_iter(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(bounds.len())];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=b).map(move |t| {
                    let mut w = v.clone();
                    w.push(t);
                    w
                })
            })
            .collect();
    }
    out
}

/// ι(D) = D^p − D^{[p]} for the vector field D = Σ g_i ∂_i, where D^{[p]} is
/// the vector field with coefficients D^p(x_j).
pub fn iota(vf: &[CommPoly]) -> Result<WeylAlgElement, WeylError> {
    let n = vf.len();
    assert!(n > 0, "vector field on zero variables");
    let p = vf[0].p;
    let mut d = WeylAlgElement::zero(p, n);
    for (k, g) in vf.iter().enumerate() {
        d = d.add(&WeylAlgElement::from_function(g).mul(&WeylAlgElement::d(p, n, k))?)?;
    }
    let dp = d.pow(p)?;
    let mut restricted = WeylAlgElement::zero(p, n);
    for j in 0..n {
        let hj = dp.act_on_poly(&CommPoly::var(p, n, j));
        restricted = restricted.add(&WeylAlgElement::from_function(&hj).mul(&WeylAlgElement::d(p, n, j))?)?;
    }
    dp.sub(&restricted)
}

/// A point of F_p^n together with a covector, recording ∂_i^p ↦ ω_i^p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointData {
    pub p: u32,
    pub a: Vec<u32>,
    pub omega: Vec<u32>,
}

impl PointData {
    pub fn new(p: u32, a: Vec<u32>, omega: Vec<u32>) -> Self {
        assert_eq!(a.len(), omega.len());
        PointData { p, a: a.into_iter().map(|v| v % p).collect(), omega: omega.into_iter().map(|v| v % p).collect() }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }
}

/// The p^n-dimensional module on the basis ∂^I, 0 ≤ I_k < p, where ∂_k raises
/// I_k (wrapping to ω_k^p at p) and x_k − a_k lowers it with coefficient −I_k.
/// Generators are named x1.., d1...
pub fn point_module(pt: &PointData) -> Result<AlgebraModule, WeylError> {
    let p = pt.p;
    let n = pt.n();
    let dim = (p as usize).pow(n as u32);
    let stride = |k: usize| (p as usize).pow(k as u32);
    let digit = |idx: usize, k: usize| (idx / stride(k)) % p as usize;
    let mut gens = Vec::new();
    for k in 0..n {
        let mut x = FpMatrix::scalar(p, dim, pt.a[k]);
        for idx in 0..dim {
            let ik = digit(idx, k);
            if ik > 0 {
                x.set(idx - stride(k), idx, p - ik as u32);
            }
        }
        gens.push((format!("x{}", k + 1), x));
    }
    for k in 0..n {
        let mut d = FpMatrix::zeros(p, dim, dim);
        let wp = pow_mod(pt.omega[k], p as u64, p);
        for idx in 0..dim {
            if digit(idx, k) + 1 < p as usize {
                d.set(idx + stride(k), idx, 1);
            } else {
                d.set(idx - (p as usize - 1) * stride(k), idx, wp);
            }
        }
        gens.push((format!("d{}", k + 1), d));
    }
    Ok(AlgebraModule::new(p, dim, gens)?)
}

/// Rank of the span of the operators x^J ∂^I (J, I < p) on the point module.
pub fn matrix_algebra_rank(pt: &PointData) -> Result<usize, WeylError> {
    let m = point_module(pt)?;
    let n = pt.n();
    let p = pt.p;
    let dim = m.dim();
    let xs: Vec<&FpMatrix> = (0..n).map(|k| &m.gens()[k].1).collect();
    let ds: Vec<&FpMatrix> = (0..n).map(|k| &m.gens()[n + k].1).collect();
    let powers = |g: &[&FpMatrix]| -> Vec<Vec<FpMatrix>> {
        g.iter()
            .map(|a| {
                let mut v = vec![FpMatrix::identity(p, dim)];
                for e in 1..p {
                    v.push(v[e as usize - 1].mul(a));
                }
                v
            })
            .collect()
    };
    let xp = powers(&xs);
    let dp = powers(&ds);
    let exps = box_iter(&vec![p - 1; n]);
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(exps.len() * exps.len());
    for j in &exps {
        let xj = (0..n).fold(FpMatrix::identity(p, dim), |acc, k| acc.mul(&xp[k][j[k] as usize]));
        for i in &exps {
            let di = (0..n).fold(FpMatrix::identity(p, dim), |acc, k| acc.mul(&dp[k][i[k] as usize]));
            rows.push(xj.mul(&di).entries().to_vec());
        }
    }
    let flat = FpMatrix::from_fn(p, rows.len(), dim * dim, |r, c| rows[r][c]);
    Ok(flat.rank())
}

/// True when the x^J ∂^I span all of End of the point module (rank p^{2n}).
pub fn verify_matrix_algebra(pt: &PointData) -> Result<bool, WeylError> {
    let expected = (pt.p as usize).pow(2 * pt.n() as u32);
    Ok(matrix_algebra_rank(pt)? == expected)
}

/// r × r matrix of operators.
pub type OpMatrix = Vec<Vec<WeylAlgElement>>;

fn op_mul(a: &OpMatrix, b: &OpMatrix) -> Result<OpMatrix, WeylError> {
    let r = a.len();
    let (p, n) = (a[0][0].p, a[0][0].n);
    let mut out = vec![vec![WeylAlgElement::zero(p, n); r]; r];
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j])?)?;
            }
        }
    }
    Ok(out)
}

fn op_commutator_is_zero(a: &OpMatrix, b: &OpMatrix) -> Result<bool, WeylError> {
    let ab = op_mul(a, b)?;
    let ba = op_mul(b, a)?;
    Ok(ab.iter().zip(&ba).all(|(r1, r2)| r1.iter().zip(r2).all(|(x, y)| x == y)))
}

/// p-curvature of the connection ∇_i = ∂_i + A_i on the free module of rank r.
/// `a[i]` is the r × r matrix A_i of functions. Returns ψ_i = ∇_i^p − ∂_i^p,
/// after checking flatness, that ψ_i is O-linear, and that it is parallel.
pub fn p_curvature(a: &[Vec<Vec<CommPoly>>]) -> Result<Vec<Vec<Vec<CommPoly>>>, WeylError> {
    let n = a.len();
    if n == 0 || a[0].is_empty() {
        return Err(WeylError::Shape);
    }
    let r = a[0].len();
    let p = a[0][0][0].p;
    for ai in a {
        if ai.len() != r || ai.iter().any(|row| row.len() != r || row.iter().any(|f| f.nvars != n || f.p != p)) {
            return Err(WeylError::Shape);
        }
    }
    let nabla: Vec<OpMatrix> = (0..n)
        .map(|i| {
            (0..r)
                .map(|s| {
                    (0..r)
                        .map(|t| {
                            let f = WeylAlgElement::from_function(&a[i][s][t]);
                            if s == t {
                                f.add(&WeylAlgElement::d(p, n, i)).expect("same algebra")
                            } else {
                                f
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            if !op_commutator_is_zero(&nabla[i], &nabla[j])? {
                return Err(WeylError::NotFlat(i, j));
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut pw = nabla[i].clone();
        for _ in 1..p {
            pw = op_mul(&pw, &nabla[i])?;
        }
        let dp = WeylAlgElement::d(p, n, i).pow(p)?;
        for (s, row) in pw.iter_mut().enumerate() {
            row[s] = row[s].sub(&dp)?;
        }
        if pw.iter().flatten().any(|e| e.order() > 0) {
            return Err(WeylError::NotLinear(i));
        }
        for (j, nj) in nabla.iter().enumerate() {
            if !op_commutator_is_zero(&pw, nj)? {
                return Err(WeylError::NotParallel(i, j));
            }
        }
        out.push(pw.iter().map(|row| row.iter().map(|e| e.principal_part(0).restrict_x(n)).collect()).collect());
    }
    Ok(out)
}

impl CommPoly {
    /// Drops the ξ half of a 2n-variable polynomial that does not involve ξ.
    fn restrict_x(&self, n: usize) -> CommPoly {
        let mut f = CommPoly::zero(self.p, n);
        for (e, &c) in &self.terms {
            debug_assert!(e[n..].iter().all(|&k| k == 0));
            f.add_term(e[..n].to_vec(), c);
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lucas() {
        assert_eq!(binom_mod(5, 2, 7), 3);
        assert_eq!(binom_mod(10, 3, 5), 0); // 120
        assert_eq!(binom_mod(12, 6, 5), 4); // 924
    }

    #[test]
    fn commutation_relation() {
        let p = 5;
        let d = WeylAlgElement::d(p, 1, 0);
        let x = WeylAlgElement::x(p, 1, 0);
        let dx = d.mul(&x).unwrap();
        let want = WeylAlgElement::monomial(p, vec![1], vec![1], 1).add(&WeylAlgElement::constant(p, 1, 1)).unwrap();
        assert_eq!(dx, want);
        let x2 = WeylAlgElement::x(p, 2, 1);
        let x1 = WeylAlgElement::x(p, 2, 0);
        assert_eq!(x1.mul(&x2).unwrap(), WeylAlgElement::monomial(p, vec![1, 1], vec![0, 0], 1));
    }

    #[test]
    fn sum_cubed_in_char_three() {
        let p = 3;
        let s = WeylAlgElement::d(p, 1, 0).add(&WeylAlgElement::x(p, 1, 0)).unwrap();
        let cube = s.pow(3).unwrap();
        let want = WeylAlgElement::monomial(p, vec![3], vec![0], 1).add(&WeylAlgElement::monomial(p, vec![0], vec![3], 1)).unwrap();
        assert_eq!(cube, want);
    }

    #[test]
    fn symbols() {
        let p = 5;
        let a = WeylAlgElement::monomial(p, vec![0], vec![2], 1).add(&WeylAlgElement::monomial(p, vec![1], vec![1], 1)).unwrap();
        assert_eq!(a.symbol(), CommPoly::monomial(p, vec![0, 2], 1));
    }

    #[test]
    fn derivative_action() {
        let p = 5;
        let d = WeylAlgElement::d(p, 1, 0);
        let f = CommPoly::monomial(p, vec![2], 1);
        assert_eq!(d.act_on_poly(&f), CommPoly::monomial(p, vec![1], 2));
        let xp = CommPoly::monomial(p, vec![5], 1);
        assert!(d.act_on_poly(&xp).is_zero());
    }

    #[test]
    fn iota_examples() {
        let p = 3;
        let n = 2;
        let zero = CommPoly::zero(p, n);
        let one = CommPoly::constant(p, n, 1);
        let d1 = iota(&[one.clone(), zero.clone()]).unwrap();
        assert_eq!(d1, WeylAlgElement::d(p, n, 0).pow(p).unwrap());
        let d2 = iota(&[zero.clone(), one.clone()]).unwrap();
        assert_eq!(iota(&[one.clone(), one.clone()]).unwrap(), d1.add(&d2).unwrap());
        // ι(x_1 ∂_1) = x_1^p ι(∂_1)
        let x1 = CommPoly::var(p, n, 0);
        let lhs = iota(&[x1.clone(), zero]).unwrap();
        let rhs = WeylAlgElement::from_function(&x1.pow(p)).mul(&d1).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn centrality_examples() {
        let p = 3;
        assert!(WeylAlgElement::monomial(p, vec![3, 0], vec![0, 0], 1).is_central().unwrap());
        assert!(!WeylAlgElement::x(p, 2, 0).is_central().unwrap());
        let e = WeylAlgElement::monomial(p, vec![0, 6], vec![0, 0], 1)
            .add(&WeylAlgElement::monomial(p, vec![0, 0], vec![3, 0], 1))
            .unwrap();
        assert!(e.is_central().unwrap());
        assert!(e.has_p_divisible_exponents());
    }

    #[test]
    fn degree_cap_is_enforced() {
        let p = 3;
        let big = WeylAlgElement::monomial(p, vec![13], vec![0], 1);
        assert!(matches!(big.mul(&big), Err(WeylError::DegreeCap { .. })));
    }

    #[test]
    fn point_module_relations() {
        for (p, n, omega) in [(3, 1, vec![0]), (3, 1, vec![1]), (3, 2, vec![2, 0]), (5, 1, vec![2])] {
            let pt = PointData::new(p, vec![1; n], omega.clone());
            let m = point_module(&pt).unwrap();
            for k in 0..n {
                let x = m.gen(&format!("x{}", k + 1)).unwrap();
                let d = m.gen(&format!("d{}", k + 1)).unwrap();
                assert_eq!(d.commutator(x), FpMatrix::identity(p, m.dim()));
                let wp = pow_mod(omega[k], p as u64, p);
                assert_eq!(d.pow(p as u64), FpMatrix::scalar(p, m.dim(), wp));
            }
        }
        let small = PointData::new(3, vec![0], vec![0]);
        let m = point_module(&small).unwrap();
        assert!(m.gen("d1").unwrap().pow(3).is_zero());
    }

    #[test]
    fn matrix_algebra_ranks() {
        assert_eq!(matrix_algebra_rank(&PointData::new(3, vec![0], vec![1])).unwrap(), 9);
        assert_eq!(matrix_algebra_rank(&PointData::new(3, vec![0, 0], vec![0, 0])).unwrap(), 81);
        assert_eq!(matrix_algebra_rank(&PointData::new(5, vec![0], vec![2])).unwrap(), 25);
    }

    #[test]
    fn p_curvature_examples() {
        let p = 3;
        let zero = vec![vec![vec![CommPoly::zero(p, 1)]]];
        assert!(p_curvature(&zero).unwrap()[0][0][0].is_zero());
        let x = vec![vec![vec![CommPoly::var(p, 1, 0)]]];
        assert_eq!(p_curvature(&x).unwrap()[0][0][0], CommPoly::monomial(p, vec![3], 1));
        let c = vec![vec![vec![CommPoly::constant(5, 1, 2)]]];
        assert_eq!(p_curvature(&c).unwrap()[0][0][0], CommPoly::constant(5, 1, 32));
        // A_1 = x_2, A_2 = 0 is not flat
        let bad = vec![vec![vec![CommPoly::var(p, 2, 1)]], vec![vec![CommPoly::zero(p, 2)]]];
        assert_eq!(p_curvature(&bad).unwrap_err(), WeylError::NotFlat(0, 1));
    }

    #[test]
    fn poisson_matches_commutator() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let a = WeylAlgElement::random(&mut rng, 5, 2, 3, 4);
            let b = WeylAlgElement::random(&mut rng, 5, 2, 3, 4);
            let (m, n) = (a.order(), b.order());
            if m + n == 0 {
                continue;
            }
            let br = a.commutator(&b).unwrap();
            assert_eq!(br.principal_part(m + n - 1), a.symbol().poisson(&b.symbol()), "{a} / {b}");
        }
    }
}
