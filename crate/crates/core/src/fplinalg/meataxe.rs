//! Matrix-presented modules and a Meataxe for their composition factors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{charpoly, rank_nullspace, EchelonSpace, FpMatrix, FpPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("generator {name} is {rows}x{cols}, expected {dim}x{dim}")]
    GeneratorShape { name: String, rows: usize, cols: usize, dim: usize },
    #[error("generator {name} is over F_{found}, module is over F_{expected}")]
    MixedPrime { name: String, expected: u32, found: u32 },
    #[error("modules are over different primes ({0} and {1})")]
    PrimeMismatch(u32, u32),
    #[error("generator sets differ: {0:?} vs {1:?}")]
    GeneratorMismatch(Vec<String>, Vec<String>),
    #[error("cannot spin the zero vector")]
    ZeroVector,
    #[error("vector has length {found}, module has dimension {dim}")]
    VectorLength { found: usize, dim: usize },
    #[error("subspace is not stable under generator {0}")]
    NotInvariant(String),
    #[error("seeds span a proper submodule of dimension {span} < {dim}")]
    NotGenerating { span: usize, dim: usize },
    #[error("linear system with {unknowns} unknowns exceeds the dense budget")]
    TooLarge { unknowns: usize },
    #[error("no split or irreducibility certificate after {0} random elements")]
    Exhausted(usize),
}

/// A finite-dimensional module over F_p given by named generator matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraModule {
    p: u32,
    dim: usize,
    gens: Vec<(String, FpMatrix)>,
}

impl AlgebraModule {
    pub fn new(p: u32, dim: usize, gens: Vec<(String, FpMatrix)>) -> Result<Self, ModuleError> {
        for (name, m) in &gens {
            if m.p() != p {
                return Err(ModuleError::MixedPrime { name: name.clone(), expected: p, found: m.p() });
            }
            if m.rows() != dim || m.cols() != dim {
                return Err(ModuleError::GeneratorShape { name: name.clone(), rows: m.rows(), cols: m.cols(), dim });
            }
        }
        Ok(AlgebraModule { p, dim, gens })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[(String, FpMatrix)] {
        &self.gens
    }

    pub fn gen(&self, name: &str) -> Option<&FpMatrix> {
        self.gens.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    pub fn gen_names(&self) -> Vec<String> {
        self.gens.iter().map(|(n, _)| n.clone()).collect()
    }

    /// Errors unless `other` has the same prime and the same generator names in order.
    pub fn check_compatible(&self, other: &AlgebraModule) -> Result<(), ModuleError> {
        if self.p != other.p {
            return Err(ModuleError::PrimeMismatch(self.p, other.p));
        }
        let (a, b) = (self.gen_names(), other.gen_names());
        if a != b {
            return Err(ModuleError::GeneratorMismatch(a, b));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &AlgebraModule) -> Result<AlgebraModule, ModuleError> {
        self.check_compatible(other)?;
        let d = self.dim + other.dim;
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|((n, a), (_, b))| {
                let m = FpMatrix::from_fn(self.p, d, d, |i, j| match (i < self.dim, j < self.dim) {
                    (true, true) => a.get(i, j),
                    (false, false) => b.get(i - self.dim, j - self.dim),
                    _ => 0,
                });
                (n.clone(), m)
            })
            .collect();
        AlgebraModule::new(self.p, d, gens)
    }

    /// Lie-algebra tensor product: each generator acts as X⊗1 + 1⊗Y.
    pub fn tensor(&self, other: &AlgebraModule) -> Result<AlgebraModule, ModuleError> {
        self.check_compatible(other)?;
        let ia = FpMatrix::identity(self.p, self.dim);
        let ib = FpMatrix::identity(self.p, other.dim);
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|((n, a), (_, b))| (n.clone(), a.kron(&ib).add(&ia.kron(b))))
            .collect();
        AlgebraModule::new(self.p, self.dim * other.dim, gens)
    }

    pub fn transposed(&self) -> AlgebraModule {
        AlgebraModule {
            p: self.p,
            dim: self.dim,
            gens: self.gens.iter().map(|(n, m)| (n.clone(), m.transpose())).collect(),
        }
    }

    /// Action on an invariant subspace, in the given basis.
    pub fn submodule(&self, basis: &[Vec<u32>]) -> Result<AlgebraModule, ModuleError> {
        Ok(self.split(basis)?.0)
    }

    /// Submodule and quotient module for an invariant subspace.
    pub fn split(&self, basis: &[Vec<u32>]) -> Result<(AlgebraModule, AlgebraModule), ModuleError> {
        let k = basis.len();
        let mut space = EchelonSpace::new(self.p, self.dim);
        let mut cols: Vec<Vec<u32>> = Vec::with_capacity(self.dim);
        for v in basis {
            if v.len() != self.dim {
                return Err(ModuleError::VectorLength { found: v.len(), dim: self.dim });
            }
            assert!(space.insert(v), "dependent basis passed to split");
            cols.push(v.clone());
        }
        for i in 0..self.dim {
            let mut e = vec![0u32; self.dim];
            e[i] = 1;
            if space.insert(&e) {
                cols.push(e);
            }
        }
        let b = FpMatrix::from_columns(self.p, self.dim, &cols);
        let binv = b.inverse().expect("completed basis is invertible");
        let mut sub = Vec::new();
        let mut quo = Vec::new();
        for (name, g) in &self.gens {
            let conj = binv.mul(&g.mul(&b));
            if !conj.submatrix(k..self.dim, 0..k).is_zero() {
                return Err(ModuleError::NotInvariant(name.clone()));
            }
            sub.push((name.clone(), conj.submatrix(0..k, 0..k)));
            quo.push((name.clone(), conj.submatrix(k..self.dim, k..self.dim)));
        }
        Ok((AlgebraModule::new(self.p, k, sub)?, AlgebraModule::new(self.p, self.dim - k, quo)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// The i-th seed vector.
    Seed(usize),
    /// Generator `gen` applied to basis vector `parent`.
    Gen { gen: usize, parent: usize },
}

/// Basis of a spun submodule, each vector recording how it was reached.
#[derive(Clone, Debug)]
pub struct StandardBasis {
    pub vectors: Vec<Vec<u32>>,
    pub provenance: Vec<Provenance>,
}

impl StandardBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Smallest generator-stable subspace containing `v`.
pub fn spin(m: &AlgebraModule, v: &[u32]) -> Result<StandardBasis, ModuleError> {
    if v.iter().all(|&a| a == 0) {
        return Err(ModuleError::ZeroVector);
    }
    spin_many(m, &[v.to_vec()])
}

/// Smallest generator-stable subspace containing all seeds. Seeds already in
/// the span are skipped.
pub fn spin_many(m: &AlgebraModule, seeds: &[Vec<u32>]) -> Result<StandardBasis, ModuleError> {
    let mut space = EchelonSpace::new(m.p, m.dim);
    let mut basis = StandardBasis { vectors: Vec::new(), provenance: Vec::new() };
    for (s, seed) in seeds.iter().enumerate() {
        if seed.len() != m.dim {
            return Err(ModuleError::VectorLength { found: seed.len(), dim: m.dim });
        }
        if !space.insert(seed) {
            continue;
        }
        let mut next = basis.vectors.len();
        basis.vectors.push(seed.clone());
        basis.provenance.push(Provenance::Seed(s));
        while next < basis.vectors.len() {
            for (g, (_, mat)) in m.gens.iter().enumerate() {
                let w = mat.mul_vec(&basis.vectors[next]);
                if space.insert(&w) {
                    basis.vectors.push(w);
                    basis.provenance.push(Provenance::Gen { gen: g, parent: next });
                }
            }
            next += 1;
        }
    }
    Ok(basis)
}

/// A linear combination of words in the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordElement {
    terms: Vec<(u32, Vec<usize>)>,
}

impl WordElement {
    fn random(rng: &mut ChaCha8Rng, ngens: usize, p: u32) -> WordElement {
        if ngens == 0 {
            return WordElement { terms: Vec::new() };
        }
        let nterms = rng.gen_range(2..=5);
        let terms = (0..nterms)
            .map(|_| {
                let len = rng.gen_range(1..=3);
                let word = (0..len).map(|_| rng.gen_range(0..ngens)).collect();
                (rng.gen_range(1..p), word)
            })
            .collect();
        WordElement { terms }
    }

    pub fn eval(&self, m: &AlgebraModule) -> FpMatrix {
        let mut acc = FpMatrix::zeros(m.p, m.dim, m.dim);
        for (c, word) in &self.terms {
            let mut prod = m.gens[word[0]].1.clone();
            for &g in &word[1..] {
                prod = prod.mul(&m.gens[g].1);
            }
            acc = acc.add_scaled(&prod, *c);
        }
        acc
    }
}

/// Witness that a module is irreducible: `factor(element)` has nullity equal to
/// its degree, and `vector` in that kernel spins to the whole module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub element: WordElement,
    pub factor: FpPoly,
    pub vector: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct CompositionFactor {
    pub module: AlgebraModule,
    pub multiplicity: usize,
    pub certificate: Certificate,
}

impl CompositionFactor {
    pub fn dim(&self) -> usize {
        self.module.dim
    }

    /// Isomorphism test against an arbitrary module with the same generators.
    pub fn is_isomorphic_to(&self, other: &AlgebraModule) -> Result<bool, ModuleError> {
        iso_by_certificate(&self.module, &self.certificate, other)
    }
}

enum Step {
    Split(Vec<Vec<u32>>),
    Irreducible(Certificate),
}

const MAX_ATTEMPTS: usize = 2000;

fn meataxe_step(m: &AlgebraModule, rng: &mut ChaCha8Rng) -> Result<Step, ModuleError> {
    let d = m.dim;
    if d == 1 {
        let element = WordElement::random(rng, m.gens.len(), m.p);
        let a = element.eval(m);
        let factor = FpPoly::linear(m.p, a.get(0, 0));
        return Ok(Step::Irreducible(Certificate { element, factor, vector: vec![1] }));
    }
    let dual = m.transposed();
    for _ in 0..MAX_ATTEMPTS {
        let element = WordElement::random(rng, m.gens.len(), m.p);
        let a = element.eval(m);
        let cp = charpoly(&a);
        for g in cp.small_irreducible_factors(3) {
            let ga = g.eval_matrix(&a);
            let kernel = rank_nullspace(&ga).nullspace;
            let v = kernel[0].clone();
            let sb = spin(m, &v)?;
            if sb.len() < d {
                return Ok(Step::Split(sb.vectors));
            }
            let kt = rank_nullspace(&ga.transpose()).nullspace;
            let st = spin(&dual, &kt[0])?;
            if st.len() < d {
                // the annihilator of a proper dual submodule is a proper submodule
                let w = FpMatrix::from_columns(m.p, d, &st.vectors).transpose();
                return Ok(Step::Split(rank_nullspace(&w).nullspace));
            }
            if kernel.len() == g.degree() {
                return Ok(Step::Irreducible(Certificate { element, factor: g, vector: v }));
            }
        }
    }
    Err(ModuleError::Exhausted(MAX_ATTEMPTS))
}

/// Composition factors with multiplicities, grouped up to isomorphism.
/// Deterministic for a given seed; factors are ordered by dimension and then
/// by discovery order.
pub fn composition_factors(m: &AlgebraModule, seed: u64) -> Result<Vec<CompositionFactor>, ModuleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<CompositionFactor> = Vec::new();
    if m.dim == 0 {
        return Ok(out);
    }
    let mut stack = vec![m.clone()];
    while let Some(cur) = stack.pop() {
        match meataxe_step(&cur, &mut rng)? {
            Step::Split(sub) => {
                let (s, q) = cur.split(&sub)?;
                stack.push(q);
                stack.push(s);
            }
            Step::Irreducible(cert) => {
                let mut found = false;
                for f in out.iter_mut() {
                    if f.module.dim == cur.dim && f.is_isomorphic_to(&cur)? {
                        f.multiplicity += 1;
                        found = true;
                        break;
                    }
                }
                if !found {
                    log::debug!("new composition factor of dimension {}", cur.dim);
                    out.push(CompositionFactor { module: cur, multiplicity: 1, certificate: cert });
                }
            }
        }
    }
    out.sort_by_key(|f| f.module.dim);
    Ok(out)
}

fn iso_by_certificate(m: &AlgebraModule, cert: &Certificate, n: &AlgebraModule) -> Result<bool, ModuleError> {
    m.check_compatible(n)?;
    if m.dim != n.dim {
        return Ok(false);
    }
    let ga = cert.factor.eval_matrix(&cert.element.eval(n));
    let kernel = rank_nullspace(&ga).nullspace;
    if kernel.len() != cert.factor.degree() {
        return Ok(false);
    }
    let homs = homs_from_seeds(m, std::slice::from_ref(&cert.vector), n, &[kernel])?;
    // m is simple, so any nonzero homomorphism is injective
    Ok(!homs.is_empty())
}

const MAX_UNKNOWNS: usize = 4096;

/// Basis of Hom(M, N) restricted to maps sending seed i into the span of
/// `candidates[i]`. The seeds must generate M. Maps are dim N × dim M matrices.
fn homs_from_seeds(
    m: &AlgebraModule,
    seeds: &[Vec<u32>],
    n: &AlgebraModule,
    candidates: &[Vec<Vec<u32>>],
) -> Result<Vec<FpMatrix>, ModuleError> {
    let p = m.p;
    let sb = spin_many(m, seeds)?;
    if sb.len() < m.dim {
        return Err(ModuleError::NotGenerating { span: sb.len(), dim: m.dim });
    }
    let unknowns: Vec<(usize, &Vec<u32>)> =
        candidates.iter().enumerate().flat_map(|(s, c)| c.iter().map(move |v| (s, v))).collect();
    if unknowns.is_empty() {
        return Ok(Vec::new());
    }
    if unknowns.len() > MAX_UNKNOWNS {
        return Err(ModuleError::TooLarge { unknowns: unknowns.len() });
    }
    let b = FpMatrix::from_columns(p, m.dim, &sb.vectors);
    let binv = b.inverse().expect("standard basis is a basis");
    let in_basis: Vec<FpMatrix> = m.gens.iter().map(|(_, g)| binv.mul(&g.mul(&b))).collect();
    // Φ_u: images of the standard basis when seed s goes to candidate v
    let phis: Vec<FpMatrix> = unknowns
        .iter()
        .map(|&(s, v)| {
            let mut cols: Vec<Vec<u32>> = Vec::with_capacity(m.dim);
            for prov in &sb.provenance {
                let col = match *prov {
                    Provenance::Seed(t) if t == s => v.clone(),
                    Provenance::Seed(_) => vec![0; n.dim],
                    Provenance::Gen { gen, parent } => n.gens[gen].1.mul_vec(&cols[parent]),
                };
                cols.push(col);
            }
            FpMatrix::from_columns(p, n.dim, &cols)
        })
        .collect();
    let block = n.dim * m.dim;
    let mut system = FpMatrix::zeros(p, block * m.gens.len(), phis.len());
    for (u, phi) in phis.iter().enumerate() {
        for (gi, (_, ng)) in n.gens.iter().enumerate() {
            let defect = phi.mul(&in_basis[gi]).sub(&ng.mul(phi));
            for (k, &x) in defect.entries().iter().enumerate() {
                if x != 0 {
                    system.set(gi * block + k, u, x);
                }
            }
        }
    }
    let sols = rank_nullspace(&system).nullspace;
    Ok(sols
        .into_iter()
        .map(|c| {
            let mut phi = FpMatrix::zeros(p, n.dim, m.dim);
            for (coef, ph) in c.iter().zip(&phis) {
                phi = phi.add_scaled(ph, *coef);
            }
            phi.mul(&binv)
        })
        .collect())
}

/// Basis of the space of module homomorphisms M → N.
pub fn hom_space(m: &AlgebraModule, n: &AlgebraModule) -> Result<Vec<FpMatrix>, ModuleError> {
    m.check_compatible(n)?;
    let mut seeds = Vec::new();
    let mut space = EchelonSpace::new(m.p, m.dim);
    for i in 0..m.dim {
        let mut e = vec![0u32; m.dim];
        e[i] = 1;
        if space.contains(&e) {
            continue;
        }
        for v in spin(m, &e)?.vectors {
            space.insert(&v);
        }
        seeds.push(e);
    }
    let full: Vec<Vec<u32>> = (0..n.dim)
        .map(|i| {
            let mut e = vec![0u32; n.dim];
            e[i] = 1;
            e
        })
        .collect();
    let candidates = vec![full; seeds.len()];
    homs_from_seeds(m, &seeds, n, &candidates)
}

/// True iff an invertible module homomorphism M → N exists. Searches the
/// homomorphism space with a fixed internal seed.
pub fn are_isomorphic(m: &AlgebraModule, n: &AlgebraModule) -> Result<bool, ModuleError> {
    m.check_compatible(n)?;
    if m.dim != n.dim {
        return Ok(false);
    }
    if m.dim == 0 {
        return Ok(true);
    }
    let homs = hom_space(m, n)?;
    if homs.iter().any(|h| h.rank() == m.dim) {
        return Ok(true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    for _ in 0..64 {
        let mut phi = FpMatrix::zeros(m.p, n.dim, m.dim);
        for h in &homs {
            phi = phi.add_scaled(h, rng.gen_range(0..m.p));
        }
        if phi.rank() == m.dim {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// sl_2 baby Verma Z_0(λ) over F_p on the basis f^k v, k < p.
    fn sl2_verma(p: u32, lambda: i64) -> AlgebraModule {
        let d = p as usize;
        let pi = p as i64;
        let e = FpMatrix::from_fn(p, d, d, |i, j| {
            // e f^k v = k(λ − k + 1) f^{k−1} v
            if j >= 1 && i == j - 1 {
                let k = j as i64;
                (k * (lambda - k + 1)).rem_euclid(pi) as u32
            } else {
                0
            }
        });
        let f = FpMatrix::from_fn(p, d, d, |i, j| u32::from(i == j + 1));
        let h = FpMatrix::from_fn(p, d, d, |i, j| if i == j { (lambda - 2 * i as i64).rem_euclid(pi) as u32 } else { 0 });
        AlgebraModule::new(p, d, vec![("E".into(), e), ("F".into(), f), ("H".into(), h)]).unwrap()
    }

    #[test]
    fn spin_examples() {
        let m = sl2_verma(5, 0);
        let mut v = vec![0; 5];
        v[0] = 1;
        assert_eq!(spin(&m, &v).unwrap().len(), 5);
        let z = AlgebraModule::new(5, 3, vec![("A".into(), FpMatrix::zeros(5, 3, 3))]).unwrap();
        assert_eq!(spin(&z, &[1, 2, 0]).unwrap().len(), 1);
        assert_eq!(spin(&z, &[0, 0, 0]).unwrap_err(), ModuleError::ZeroVector);
    }

    #[test]
    fn verma_factors_are_one_and_four() {
        let m = sl2_verma(5, 0);
        for seed in [1, 2, 3] {
            let cf = composition_factors(&m, seed).unwrap();
            let dims: Vec<usize> = cf.iter().map(|f| f.dim()).collect();
            assert_eq!(dims, vec![1, 4]);
            assert!(cf.iter().all(|f| f.multiplicity == 1));
        }
        let l0 = &composition_factors(&m, 1).unwrap()[0].module;
        let l3 = &composition_factors(&sl2_verma(5, 3), 1).unwrap()[1].module;
        assert_eq!((l0.dim(), l3.dim()), (1, 4));
        assert!(!are_isomorphic(l0, l3).unwrap());
    }

    #[test]
    fn direct_sum_doubles_multiplicity() {
        let m = sl2_verma(7, 6); // λ = p − 1: the Steinberg module, simple
        let cf = composition_factors(&m, 4).unwrap();
        assert_eq!(cf.len(), 1);
        assert_eq!(cf[0].multiplicity, 1);
        let mm = m.direct_sum(&m).unwrap();
        let cf2 = composition_factors(&mm, 4).unwrap();
        assert_eq!(cf2.len(), 1);
        assert_eq!(cf2[0].multiplicity, 2);
        assert!(cf2[0].is_isomorphic_to(&m).unwrap());
        assert!(are_isomorphic(&mm, &mm).unwrap());
    }

    #[test]
    fn isomorphism_under_change_of_basis() {
        let m = sl2_verma(5, 2);
        let b = FpMatrix::from_fn(5, 5, 5, |i, j| ((i * 3 + j * j + 1) % 5) as u32 + u32::from(i == j));
        let binv = b.inverse().expect("chosen invertible");
        let gens = m.gens().iter().map(|(n, g)| (n.clone(), binv.mul(&g.mul(&b)))).collect();
        let n = AlgebraModule::new(5, 5, gens).unwrap();
        assert!(are_isomorphic(&m, &n).unwrap());
        assert!(!are_isomorphic(&m, &sl2_verma(5, 1)).unwrap());
        let homs = hom_space(&m, &n).unwrap();
        assert!(!homs.is_empty());
    }

    #[test]
    fn mismatched_generators_error() {
        let m = sl2_verma(5, 0);
        let z = AlgebraModule::new(5, 5, vec![("A".into(), FpMatrix::zeros(5, 5, 5))]).unwrap();
        assert!(matches!(are_isomorphic(&m, &z), Err(ModuleError::GeneratorMismatch(..))));
    }

    #[test]
    fn split_rejects_non_invariant() {
        let m = sl2_verma(5, 0);
        assert!(matches!(m.split(&[vec![1, 0, 0, 0, 0]]), Err(ModuleError::NotInvariant(_))));
        // f^1 v spans a proper submodule of Z_0(0)
        let sub = spin(&m, &[0, 1, 0, 0, 0]).unwrap();
        let (s, q) = m.split(&sub.vectors).unwrap();
        assert_eq!((s.dim(), q.dim()), (4, 1));
    }
}
