//! Borel–Weil–Bott for line bundles on G/B in characteristic zero, Euler
//! characteristic polynomials of K-classes, and long-exact-sequence
//! bookkeeping for filtered bundles.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::polyq::{rat, rat_frac, PolyQ};
use crate::rootdata::{RootDatum, RootError, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BwbError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("Euler polynomial has degree {degree}, above the declared support dimension {bound}")]
    SupportBound { degree: usize, bound: usize },
    #[error("Euler polynomial has degree {degree} > dim G/B = {dim}")]
    DegreeTooLarge { degree: usize, dim: usize },
}

/// χ(O_λ) = ∏_{α>0} ⟨λ+ρ, α̌⟩ / ∏_{α>0} ⟨ρ, α̌⟩.
pub fn weyl_euler_char(rd: &RootDatum, lambda: &Weight) -> Result<i64, BwbError> {
    rd.check_weight(lambda)?;
    let shifted = lambda.add(rd.rho());
    let num: i128 = rd.positive_roots().iter().map(|a| rd.pair(&shifted, a) as i128).product();
    let den = rd.r_constant() as i128;
    debug_assert_eq!(num % den, 0, "Weyl dimension quotient is integral");
    Ok((num / den) as i64)
}

/// μ ↦ χ(O_μ) as a polynomial in the fundamental-weight coordinates of μ.
pub fn weyl_polynomial(rd: &RootDatum) -> PolyQ {
    let r = rd.rank();
    let rho = rd.rho();
    let mut f = PolyQ::one(r);
    for a in rd.positive_roots() {
        let coeffs: Vec<BigRational> = a.iter().map(|&c| rat(c)).collect();
        f = f.mul(&PolyQ::affine(&coeffs, rat(rd.pair(rho, a))));
    }
    f.scale(&rat_frac(1, rd.r_constant()))
}

/// A formal integer combination of line bundles, optionally tagged with the
/// dimension of its support.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct KClass {
    pub terms: BTreeMap<Weight, i64>,
    pub support_dim: Option<usize>,
}

impl KClass {
    pub fn zero() -> Self {
        KClass::default()
    }

    pub fn line(lambda: Weight) -> Self {
        KClass::zero().plus(lambda, 1)
    }

    pub fn plus(mut self, lambda: Weight, c: i64) -> Self {
        let e = self.terms.entry(lambda.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&lambda);
        }
        self
    }

    pub fn add(&self, other: &KClass) -> KClass {
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out = out.plus(w.clone(), c);
        }
        out.support_dim = match (self.support_dim, other.support_dim) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        out
    }

    pub fn scale(&self, c: i64) -> KClass {
        let mut out = KClass { terms: BTreeMap::new(), support_dim: self.support_dim };
        for (w, &k) in &self.terms {
            out = out.plus(w.clone(), k * c);
        }
        out
    }

    pub fn with_support(mut self, dim: usize) -> Self {
        self.support_dim = Some(dim);
        self
    }

    /// Twist by O_μ.
    pub fn twist(&self, mu: &Weight) -> KClass {
        KClass {
            terms: self.terms.iter().map(|(w, &c)| (w.add(mu), c)).collect(),
            support_dim: self.support_dim,
        }
    }
}

/// μ ↦ χ(F ⊗ O_μ) for the class F.
pub fn euler_poly(rd: &RootDatum, c: &KClass) -> Result<PolyQ, BwbError> {
    let r = rd.rank();
    let w = weyl_polynomial(rd);
    let mut out = PolyQ::zero(r);
    for (lambda, &k) in &c.terms {
        rd.check_weight(lambda)?;
        let shift: Vec<PolyQ> = (0..r)
            .map(|i| PolyQ::var(r, i).add(&PolyQ::constant(r, rat(lambda.coords()[i]))))
            .collect();
        out = out.add(&w.compose(&shift).scale(&rat(k)));
    }
    let degree = out.degree();
    let dim = rd.num_positive_roots();
    if degree > dim {
        return Err(BwbError::DegreeTooLarge { degree, dim });
    }
    if let Some(bound) = c.support_dim {
        if degree > bound {
            return Err(BwbError::SupportBound { degree, bound });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Bwb {
    /// λ+ρ is on a wall: all cohomology vanishes.
    Vanishing,
    /// Cohomology is concentrated in `degree` = ℓ(w), where it is the
    /// irreducible of highest weight w•λ.
    Concentrated { degree: usize, weight: Weight, dim: i64 },
}

pub fn bwb(rd: &RootDatum, lambda: &Weight) -> Result<Bwb, BwbError> {
    rd.check_weight(lambda)?;
    let mut mu = lambda.add(rd.rho());
    if rd.positive_roots().iter().any(|a| rd.pair(&mu, a) == 0) {
        return Ok(Bwb::Vanishing);
    }
    let mut length = 0;
    while let Some(i) = (0..rd.rank()).find(|&i| mu.coords()[i] < 0) {
        mu = rd.reflect(i, &mu);
        length += 1;
    }
    let weight = mu.sub(rd.rho());
    let dim = weyl_euler_char(rd, &weight)?;
    Ok(Bwb::Concentrated { degree: length, weight, dim })
}

/// dim H^i(G/B, O_λ) for i = 0..=dim G/B.
pub fn line_cohomology(rd: &RootDatum, lambda: &Weight) -> Result<Vec<i64>, BwbError> {
    let mut h = vec![0; rd.num_positive_roots() + 1];
    if let Bwb::Concentrated { degree, dim, .. } = bwb(rd, lambda)? {
        h[degree] = dim;
    }
    Ok(h)
}

/// Cohomology of a class whose nonzero line-bundle terms all have positive
/// coefficients, read as a direct sum. Terms with vanishing cohomology may
/// carry any sign. None when the class does not have that shape.
pub fn class_cohomology(rd: &RootDatum, c: &KClass) -> Result<Option<Vec<i64>>, BwbError> {
    let mut h = vec![0; rd.num_positive_roots() + 1];
    for (lambda, &k) in &c.terms {
        let lh = line_cohomology(rd, lambda)?;
        if lh.iter().all(|&d| d == 0) {
            continue;
        }
        if k < 0 {
            return Ok(None);
        }
        for (a, b) in h.iter_mut().zip(&lh) {
            *a += k * b;
        }
    }
    Ok(Some(h))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SequenceCohomology {
    Exact(Vec<i64>),
    /// Long exact sequences could not be resolved; only χ is known.
    Undetermined { euler: i64 },
}

/// Cohomology of a bundle with a filtration whose successive quotients are
/// `pieces` (subobject first). Connecting maps H^i(P_j) → H^{i+1}(P_j') with
/// j' < j are the only obstruction; when none can be nonzero the dimensions
/// simply add.
pub fn cohomology_from_sequence(rd: &RootDatum, pieces: &[KClass]) -> Result<SequenceCohomology, BwbError> {
    let n = rd.num_positive_roots();
    let mut euler = 0i64;
    for piece in pieces {
        let e = euler_poly(rd, piece)?.eval_int(&vec![0; rd.rank()]);
        assert!(e.is_integer());
        euler += i64::try_from(e.to_integer()).expect("small Euler characteristic");
    }
    let mut known = Vec::with_capacity(pieces.len());
    for piece in pieces {
        match class_cohomology(rd, piece)? {
            Some(h) => known.push(h),
            None => return Ok(SequenceCohomology::Undetermined { euler }),
        }
    }
    for j in 0..known.len() {
        for jp in 0..j {
            for i in 0..n {
                if known[j][i] != 0 && known[jp][i + 1] != 0 {
                    return Ok(SequenceCohomology::Undetermined { euler });
                }
            }
        }
    }
    let mut h = vec![0; n + 1];
    for k in &known {
        for (a, b) in h.iter_mut().zip(k) {
            *a += b;
        }
    }
    Ok(SequenceCohomology::Exact(h))
}

/// Checks euler_poly(O_{pν})(μ) = p^{dim B} · euler_poly(O_ν)((μ + (1−p)ρ)/p)
/// as polynomials, and pointwise on μ = pκ − ρ for κ in a small box.
pub fn frobenius_identity_check(rd: &RootDatum, nu: &Weight, p: u32) -> Result<bool, BwbError> {
    rd.check_prime(p)?;
    let r = rd.rank();
    let pi = p as i64;
    let lhs = euler_poly(rd, &KClass::line(nu.scale(pi)))?;
    let base = euler_poly(rd, &KClass::line(nu.clone()))?;
    let inv_p = rat_frac(1, pi);
    let subs: Vec<PolyQ> = (0..r)
        .map(|i| {
            let shift = rat_frac((1 - pi) * rd.rho().coords()[i], pi);
            PolyQ::var(r, i).scale(&inv_p).add(&PolyQ::constant(r, shift))
        })
        .collect();
    let scale = BigRational::from_integer(BigInt::from(pi).pow(rd.num_positive_roots() as u32));
    let rhs = base.compose(&subs).scale(&scale);
    if lhs != rhs {
        return Ok(false);
    }
    for kappa in crate::rootdata::box_points(&vec![-2; r], &vec![2; r]) {
        let mu: Vec<i64> = kappa.iter().zip(rd.rho().coords()).map(|(k, rho)| pi * k - rho).collect();
        // there the substitution lands on the integral weight κ − ρ
        let at: Vec<i64> = kappa.iter().zip(rd.rho().coords()).map(|(k, rho)| k - rho).collect();
        if lhs.eval_int(&mu) != base.eval_int(&at) * &scale {
            return Ok(false);
        }
    }
    Ok(true)
}

/// χ(O_λ) = (−1)^{dim B} χ(O_{−λ−2ρ}).
pub fn serre_check(rd: &RootDatum, lambda: &Weight) -> Result<bool, BwbError> {
    let dual = lambda.scale(-1).sub(&rd.rho().scale(2));
    let sign = if rd.num_positive_roots() % 2 == 0 { 1 } else { -1 };
    Ok(weyl_euler_char(rd, lambda)? == sign * weyl_euler_char(rd, &dual)?)
}
