//! Root data for simply-laced root systems, the Weyl group, the dot action,
//! alcove geometry and restricted linkage classes.
//!
//! Weights are stored in fundamental-weight coordinates, so the pairing of a
//! weight with a simple coroot is just a coordinate, and the pairing with any
//! coroot is a dot product against the root's simple-root coefficients (the
//! root system is simply laced, so coroot and root coefficients agree).

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("reflection index {index} out of range for rank {rank}")]
    InvalidReflection { index: usize, rank: usize },
    #[error("weight has {got} coordinates, expected {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("p = {p} must be a prime larger than the Coxeter number {h}")]
    BadPrime { p: u32, h: u32 },
    #[error("unsupported root system `{0}`")]
    Unsupported(String),
    #[error("weight {0} is singular; its alcove is not determined")]
    Singular(Weight),
    #[error("cannot parse weight `{0}`")]
    Parse(String),
}

/// An integral weight in fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    /// The fundamental weight ω_i (zero-based index).
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = vec![0; rank];
        w[i] = 1;
        Weight(w)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * c).collect())
    }

    /// Representative of the class modulo pΛ with coordinates in [0, p).
    pub fn reduce_mod(&self, p: u32) -> Weight {
        Weight(self.0.iter().map(|a| a.rem_euclid(p as i64)).collect())
    }

    pub fn is_restricted(&self, p: u32) -> bool {
        self.0.iter().all(|&a| a >= 0 && a < p as i64)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Weight {
    type Err = RootError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        trimmed
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map(Weight)
            .map_err(|_| RootError::Parse(s.to_string()))
    }
}

/// A word s_{i_1} s_{i_2} ... s_{i_k} in the simple reflections (zero-based).
/// Acting on a weight, the rightmost reflection is applied first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylWord(pub Vec<usize>);

impl WeylWord {
    pub fn identity() -> Self {
        WeylWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The product `self · other`.
    pub fn compose(&self, other: &WeylWord) -> WeylWord {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        WeylWord(w)
    }
}

/// Where a weight sits relative to the closed fundamental alcove
/// `{x : ⟨x, α̌_i⟩ ≥ 0, ⟨x, θ̌⟩ ≤ p}` after the ρ-shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    Interior,
    Wall,
    Outside,
}

/// A reflection hyperplane `⟨x, α̌⟩ = k p` of the p-dilated affine arrangement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineWall {
    /// Index into [`RootDatum::positive_roots`].
    pub root: usize,
    pub multiple: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlcovePosition {
    /// ⟨λ + ρ, α̌⟩ for every positive root, in root order.
    pub pairings: Vec<i64>,
    pub region: Region,
    /// Every affine wall containing λ + ρ. Empty iff λ is regular.
    pub walls: Vec<AffineWall>,
    /// The affine-Weyl dot-conjugate of λ lying in the closed fundamental alcove.
    pub representative: Weight,
}

impl AlcovePosition {
    pub fn is_regular(&self) -> bool {
        self.walls.is_empty()
    }
}

/// A finite simply-laced root system with its weight lattice data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    series: char,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, sorted by height then lexicographically.
    positive_roots: Vec<Vec<i64>>,
    rho: Weight,
    coxeter_number: u32,
}

impl RootDatum {
    /// Type A_rank, i.e. the root system of sl(rank + 1).
    pub fn type_a(rank: usize) -> Self {
        assert!(rank >= 1, "rank must be positive");
        let mut cartan = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            cartan[i][i] = 2;
            if i + 1 < rank {
                cartan[i][i + 1] = -1;
                cartan[i + 1][i] = -1;
            }
        }
        Self::from_cartan('A', cartan)
    }

    /// Parses labels like `A1`, `A2`, `a3`.
    pub fn from_label(label: &str) -> Result<Self, RootError> {
        let label = label.trim();
        let mut chars = label.chars();
        let series = chars.next().map(|c| c.to_ascii_uppercase());
        let rank: Option<usize> = chars.as_str().parse().ok();
        match (series, rank) {
            (Some('A'), Some(r)) if r >= 1 => Ok(Self::type_a(r)),
            _ => Err(RootError::Unsupported(label.to_string())),
        }
    }

    /// Builds the positive roots from a symmetric Cartan matrix via root strings.
    fn from_cartan(series: char, cartan: Vec<Vec<i64>>) -> Self {
        let rank = cartan.len();
        for i in 0..rank {
            for j in 0..rank {
                assert_eq!(cartan[i][j], cartan[j][i], "only simply-laced types are supported");
            }
        }
        let mut roots: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                let mut r = vec![0; rank];
                r[i] = 1;
                r
            })
            .collect();
        let mut known: BTreeSet<Vec<i64>> = roots.iter().cloned().collect();
        let mut layer = roots.clone();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for alpha in &layer {
                for i in 0..rank {
                    // r = how far the α_i-string through α extends downwards
                    let mut r = 0;
                    let mut probe = alpha.clone();
                    loop {
                        probe[i] -= 1;
                        if known.contains(&probe) {
                            r += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing: i64 = (0..rank).map(|j| alpha[j] * cartan[i][j]).sum();
                    let q = r - pairing;
                    if q > 0 {
                        let mut beta = alpha.clone();
                        beta[i] += 1;
                        if known.insert(beta.clone()) {
                            next.push(beta);
                        }
                    }
                }
            }
            roots.extend(next.iter().cloned());
            layer = next;
        }
        roots.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let height_max: i64 = roots.iter().map(|r| r.iter().sum::<i64>()).max().unwrap_or(0);
        RootDatum {
            series,
            rank,
            cartan,
            positive_roots: roots,
            rho: Weight(vec![1; rank]),
            coxeter_number: (height_max + 1) as u32,
        }
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.series, self.rank)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// |Δ+|, which is also the dimension of the flag variety.
    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn coxeter_number(&self) -> u32 {
        self.coxeter_number
    }

    pub fn highest_root(&self) -> &[i64] {
        self.positive_roots.last().expect("nonempty root system")
    }

    /// A root given in simple-root coordinates, converted to ω-coordinates:
    /// α_i = Σ_j C_ji ω_j.
    pub fn root_to_weight(&self, coeffs: &[i64]) -> Weight {
        Weight(
            (0..self.rank)
                .map(|j| (0..self.rank).map(|i| coeffs[i] * self.cartan[j][i]).sum())
                .collect(),
        )
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        let mut c = vec![0; self.rank];
        c[i] = 1;
        self.root_to_weight(&c)
    }

    /// ⟨λ, α̌⟩ for α given in simple-root coordinates.
    pub fn pair(&self, lambda: &Weight, coroot: &[i64]) -> i64 {
        lambda.0.iter().zip(coroot).map(|(a, b)| a * b).sum()
    }

    /// ⟨λ, α̌⟩ for every positive root.
    pub fn pairings(&self, lambda: &Weight) -> Vec<i64> {
        self.positive_roots.iter().map(|r| self.pair(lambda, r)).collect()
    }

    /// R = ∏_{α>0} ⟨ρ, α̌⟩.
    pub fn r_constant(&self) -> i64 {
        self.pairings(&self.rho).iter().product()
    }

    pub fn check_weight(&self, lambda: &Weight) -> Result<(), RootError> {
        if lambda.rank() != self.rank {
            return Err(RootError::RankMismatch { expected: self.rank, got: lambda.rank() });
        }
        Ok(())
    }

    /// Requires `p` prime with p > h.
    pub fn check_prime(&self, p: u32) -> Result<(), RootError> {
        if p <= self.coxeter_number || !is_prime(p) {
            return Err(RootError::BadPrime { p, h: self.coxeter_number });
        }
        Ok(())
    }

    /// The ordinary reflection s_i.
    pub fn reflect(&self, i: usize, lambda: &Weight) -> Weight {
        let c = lambda.0[i];
        lambda.sub(&self.simple_root(i).scale(c))
    }

    /// The linear action w(λ).
    pub fn act(&self, w: &WeylWord, lambda: &Weight) -> Result<Weight, RootError> {
        self.check_weight(lambda)?;
        let mut x = lambda.clone();
        for &i in w.0.iter().rev() {
            if i >= self.rank {
                return Err(RootError::InvalidReflection { index: i, rank: self.rank });
            }
            x = self.reflect(i, &x);
        }
        Ok(x)
    }

    /// w • λ = w(λ + ρ) − ρ.
    pub fn dot_action(&self, w: &WeylWord, lambda: &Weight) -> Result<Weight, RootError> {
        self.check_weight(lambda)?;
        Ok(self.act(w, &lambda.add(&self.rho))?.sub(&self.rho))
    }

    /// All Weyl group elements as reduced words, in breadth-first (length) order.
    pub fn weyl_group(&self) -> Vec<WeylWord> {
        let mut seen: HashMap<Weight, WeylWord> = HashMap::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(self.rho.clone(), WeylWord::identity());
        queue.push_back(self.rho.clone());
        while let Some(x) = queue.pop_front() {
            let word = seen[&x].clone();
            order.push(word.clone());
            for i in 0..self.rank {
                let y = self.reflect(i, &x);
                if !seen.contains_key(&y) {
                    let mut w = vec![i];
                    w.extend_from_slice(&word.0);
                    seen.insert(y.clone(), WeylWord(w));
                    queue.push_back(y);
                }
            }
        }
        order
    }

    pub fn longest_element(&self) -> WeylWord {
        self.weyl_group().pop().expect("nonempty group")
    }

    /// The dominant W-conjugate of λ under the linear action.
    pub fn dominant_conjugate(&self, lambda: &Weight) -> Weight {
        let mut x = lambda.clone();
        while let Some(i) = x.0.iter().position(|&c| c < 0) {
            x = self.reflect(i, &x);
        }
        x
    }

    /// Classifies λ + ρ against the p-dilated affine arrangement.
    pub fn alcove_position(&self, lambda: &Weight, p: u32) -> Result<AlcovePosition, RootError> {
        self.check_weight(lambda)?;
        self.check_prime(p)?;
        let pi = p as i64;
        let shifted = lambda.add(&self.rho);
        let pairings = self.pairings(&shifted);
        let walls: Vec<AffineWall> = pairings
            .iter()
            .enumerate()
            .filter(|(_, &v)| v.rem_euclid(pi) == 0)
            .map(|(root, &v)| AffineWall { root, multiple: v / pi })
            .collect();
        let theta = self.pair(&shifted, self.highest_root());
        let simple_min = shifted.0.iter().copied().min().unwrap_or(0);
        let region = if simple_min > 0 && theta < pi {
            Region::Interior
        } else if simple_min >= 0 && theta <= pi {
            Region::Wall
        } else {
            Region::Outside
        };
        let representative = self.affine_reduce(&shifted, p).sub(&self.rho);
        Ok(AlcovePosition { pairings, region, walls, representative })
    }

    /// Moves a ρ-shifted point into the closed fundamental alcove using the
    /// reflections s_1, ..., s_r and the affine reflection s_0.
    fn affine_reduce(&self, shifted: &Weight, p: u32) -> Weight {
        let pi = p as i64;
        let theta = self.highest_root().to_vec();
        let theta_w = self.root_to_weight(&theta);
        let mut x = shifted.clone();
        loop {
            if let Some(i) = x.0.iter().position(|&c| c < 0) {
                x = self.reflect(i, &x);
                continue;
            }
            let t = self.pair(&x, &theta);
            if t > pi {
                x = x.sub(&theta_w.scale(t - pi));
                continue;
            }
            return x;
        }
    }

    /// Every integral μ with μ + ρ in the closed fundamental alcove.
    pub fn closed_fundamental_alcove(&self, p: u32) -> Result<Vec<Weight>, RootError> {
        self.check_prime(p)?;
        let lo = vec![0i64; self.rank];
        let hi = vec![p as i64; self.rank];
        let theta = self.highest_root().to_vec();
        Ok(box_points(&lo, &hi)
            .into_iter()
            .filter(|x| self.pair(&Weight(x.clone()), &theta) <= p as i64)
            .map(|x| Weight(x).sub(&self.rho))
            .collect())
    }

    /// Every integral μ in the closure of the alcove containing the regular weight λ.
    pub fn alcove_closure(&self, lambda: &Weight, p: u32) -> Result<Vec<Weight>, RootError> {
        let pos = self.alcove_position(lambda, p)?;
        if !pos.is_regular() {
            return Err(RootError::Singular(lambda.clone()));
        }
        let pi = p as i64;
        let floors: Vec<i64> = pos.pairings.iter().map(|v| v.div_euclid(pi)).collect();
        // simple roots come first in the sorted root list
        let lo: Vec<i64> = (0..self.rank).map(|i| floors[i] * pi).collect();
        let hi: Vec<i64> = (0..self.rank).map(|i| (floors[i] + 1) * pi).collect();
        Ok(box_points(&lo, &hi)
            .into_iter()
            .map(Weight)
            .filter(|x| {
                self.positive_roots.iter().zip(&floors).all(|(r, &k)| {
                    let v = self.pair(x, r);
                    k * pi <= v && v <= (k + 1) * pi
                })
            })
            .map(|x| x.sub(&self.rho))
            .collect())
    }

    /// Restricted weights μ (coordinates in [0, p)) with μ ∈ W•λ + pΛ, sorted.
    pub fn restricted_linkage_class(&self, lambda: &Weight, p: u32) -> Result<Vec<Weight>, RootError> {
        self.check_weight(lambda)?;
        self.check_prime(p)?;
        let mut out = BTreeSet::new();
        for w in self.weyl_group() {
            out.insert(self.dot_action(&w, lambda)?.reduce_mod(p));
        }
        Ok(out.into_iter().collect())
    }

    /// Whether μ and ν lie in the same W'_aff • orbit.
    pub fn linked(&self, mu: &Weight, nu: &Weight, p: u32) -> Result<bool, RootError> {
        let class = self.restricted_linkage_class(nu, p)?;
        Ok(class.contains(&mu.reduce_mod(p)))
    }
}

/// All integer points of the box `lo ≤ x ≤ hi` in lexicographic order.
pub(crate) fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for (a, b) in lo.iter().zip(hi) {
        let mut next = Vec::new();
        for prefix in &out {
            for v in *a..=*b {
                let mut q = prefix.clone();
                q.push(v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
