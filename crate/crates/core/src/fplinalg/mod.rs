//! Dense exact linear algebra over prime fields F_p and Meataxe-style module
//! analysis.
//!
//! Every matrix carries its prime. Combining matrices over different primes
//! panics: it is always a programming error, never a data condition.

mod meataxe;
mod poly;

pub use meataxe::{
    are_isomorphic, composition_factors, hom_space, spin, AlgebraModule, CompositionFactor, ModuleError,
    StandardBasis,
};
pub use poly::{charpoly, FpPoly};

use std::fmt;

/// a^{-1} mod p for a ≠ 0.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    assert!(a % p != 0, "zero has no inverse mod {p}");
    pow_mod(a, (p - 2) as u64, p)
}

pub fn pow_mod(a: u32, mut e: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut base = a as u64 % p64;
    let mut acc = 1u64 % p64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    acc as u32
}

/// Reduces a signed integer into [0, p).
pub fn reduce(a: i64, p: u32) -> u32 {
    a.rem_euclid(p as i64) as u32
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for r in 0..self.rows.min(16) {
            writeln!(f, "  {:?}", &self.row(r)[..self.cols.min(16)])?;
        }
        Ok(())
    }
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        Self::scalar(p, n, 1)
    }

    pub fn scalar(p: u32, n: usize, c: u32) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = c % p;
        }
        m
    }

    /// Entries are reduced mod p.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&a| reduce(a, p)));
        }
        FpMatrix { p, rows: r, cols: c, data }
    }

    pub fn from_fn(p: u32, rows: usize, cols: usize, f: impl Fn(usize, usize) -> u32) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % p);
            }
        }
        FpMatrix { p, rows, cols, data }
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v;
            }
        }
        m
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    fn same_field(&self, other: &FpMatrix) {
        assert_eq!(self.p, other.p, "matrices over different primes");
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        self.add_scaled(other, 1)
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        self.add_scaled(other, self.p - 1)
    }

    /// self + c·other
    pub fn add_scaled(&self, other: &FpMatrix, c: u32) -> FpMatrix {
        self.same_field(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let p = self.p as u64;
        let c = c as u64 % p;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| ((a as u64 + c * b as u64) % p) as u32)
            .collect();
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u32) -> FpMatrix {
        let p = self.p as u64;
        let c = c as u64 % p;
        FpMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| (a as u64 * c % p) as u32).collect(),
        }
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        self.same_field(other);
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let p = self.p as u64;
        let (n, m) = (self.rows, other.cols);
        let mut out = vec![0u32; n * m];
        let mut acc = vec![0u64; m];
        // (p-1)^2 * 2^16 fits comfortably in u64 for any p < 2^16
        let flush_every = (u64::MAX / ((p - 1).max(1) * (p - 1).max(1))).min(1 << 20) as usize;
        for i in 0..n {
            acc.iter_mut().for_each(|a| *a = 0);
            let arow = self.row(i);
            let mut pending = 0usize;
            for (k, &a) in arow.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let a = a as u64;
                let brow = other.row(k);
                for (x, &b) in acc.iter_mut().zip(brow) {
                    *x += a * b as u64;
                }
                pending += 1;
                if pending == flush_every {
                    acc.iter_mut().for_each(|x| *x %= p);
                    pending = 0;
                }
            }
            for (o, &x) in out[i * m..(i + 1) * m].iter_mut().zip(&acc) {
                *o = (x % p) as u32;
            }
        }
        FpMatrix { p: self.p, rows: n, cols: m, data: out }
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "shape mismatch in matrix-vector product");
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let s: u64 = self.row(i).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64 % p).sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> FpMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = FpMatrix::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// self·other − other·self
    pub fn commutator(&self, other: &FpMatrix) -> FpMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Kronecker product; the index of e_i ⊗ e_j is i·dim(other) + j.
    pub fn kron(&self, other: &FpMatrix) -> FpMatrix {
        self.same_field(other);
        let p = self.p as u64;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut m = FpMatrix::zeros(self.p, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j) as u64;
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let v = (a * other.get(k, l) as u64 % p) as u32;
                        m.data[(i * other.rows + k) * cols + j * other.cols + l] = v;
                    }
                }
            }
        }
        m
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> FpMatrix {
        let (r0, c0) = (rows.start, cols.start);
        FpMatrix::from_fn(self.p, rows.len(), cols.len(), |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn trace(&self) -> u32 {
        let p = self.p as u64;
        ((0..self.rows.min(self.cols)).map(|i| self.get(i, i) as u64).sum::<u64>() % p) as u32
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = FpMatrix::zeros(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j);
            }
            aug.data[i * 2 * n + n + i] = 1;
        }
        let (r, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.submatrix(0..n, n..2 * n))
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }
}

/// Reduced row echelon form and its pivot columns.
pub fn rref(m: &FpMatrix) -> (FpMatrix, Vec<usize>) {
    let mut a = m.clone();
    let p = a.p as u64;
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a.data[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                a.data.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = inv_mod(a.data[r * cols + c], a.p) as u64;
        for j in c..cols {
            a.data[r * cols + j] = (a.data[r * cols + j] as u64 * inv % p) as u32;
        }
        let pivot_row: Vec<u32> = a.row(r).to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = a.data[i * cols + c] as u64;
            if f == 0 {
                continue;
            }
            let f = p - f;
            for j in c..cols {
                let x = &mut a.data[i * cols + j];
                *x = ((*x as u64 + f * pivot_row[j] as u64) % p) as u32;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankNullspace {
    pub rank: usize,
    /// Basis of {v : m·v = 0}.
    pub nullspace: Vec<Vec<u32>>,
}

pub fn rank_nullspace(m: &FpMatrix) -> RankNullspace {
    let (r, pivots) = rref(m);
    let p = m.p;
    let cols = m.cols;
    let mut is_pivot = vec![None; cols];
    for (row, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(row);
    }
    let mut nullspace = Vec::new();
    for free in (0..cols).filter(|&c| is_pivot[c].is_none()) {
        let mut v = vec![0u32; cols];
        v[free] = 1;
        for (row, &c) in pivots.iter().enumerate() {
            let a = r.get(row, free);
            if a != 0 {
                v[c] = p - a;
            }
        }
        nullspace.push(v);
    }
    RankNullspace { rank: pivots.len(), nullspace }
}

/// The generalized eigenspace ker (op − c·I)^d with d = dim.
pub fn generalized_eigenspace(op: &FpMatrix, c: u32) -> Vec<Vec<u32>> {
    assert!(op.is_square(), "generalized eigenspace of a non-square matrix");
    let n = op.rows;
    let shifted = op.sub(&FpMatrix::scalar(op.p, n, c));
    // the kernels of successive powers grow until they stabilise
    let mut power = shifted.clone();
    let mut last = rank_nullspace(&power);
    for _ in 1..n.max(1) {
        if last.nullspace.is_empty() || last.rank == 0 {
            break;
        }
        power = power.mul(&shifted);
        let next = rank_nullspace(&power);
        if next.rank == last.rank {
            break;
        }
        last = next;
    }
    last.nullspace
}

/// A subspace held in semi-echelon form: every stored row has a leading 1 at
/// its pivot and zeros at the pivots of all earlier rows.
#[derive(Clone, Debug)]
pub struct EchelonSpace {
    p: u32,
    dim: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl EchelonSpace {
    pub fn new(p: u32, dim: usize) -> Self {
        EchelonSpace { p, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = v[c] as u64;
            if f == 0 {
                continue;
            }
            let f = p - f;
            for (x, &r) in v.iter_mut().zip(row) {
                if r != 0 {
                    *x = ((*x as u64 + f * r as u64) % p) as u32;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&a| a == 0)
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut r = self.reduce(v);
        let Some(c) = r.iter().position(|&a| a != 0) else {
            return false;
        };
        let inv = inv_mod(r[c], self.p) as u64;
        let p = self.p as u64;
        r.iter_mut().for_each(|x| *x = (*x as u64 * inv % p) as u32);
        self.rows.push(r);
        self.pivots.push(c);
        true
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }
}

/// Basis of the intersection of two subspaces given by spanning vectors.
pub fn intersect(p: u32, dim: usize, a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<Vec<u32>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // solve Σ x_i a_i − Σ y_j b_j = 0
    let mut cols: Vec<Vec<u32>> = a.to_vec();
    cols.extend(b.iter().map(|v| v.iter().map(|&x| (p - x) % p).collect()));
    let m = FpMatrix::from_columns(p, dim, &cols);
    let mut space = EchelonSpace::new(p, dim);
    for sol in rank_nullspace(&m).nullspace {
        let mut v = vec![0u32; dim];
        for (coef, vec) in sol[..a.len()].iter().zip(a) {
            axpy(p, &mut v, *coef, vec);
        }
        space.insert(&v);
    }
    space.basis().to_vec()
}

/// y += c·x
pub fn axpy(p: u32, y: &mut [u32], c: u32, x: &[u32]) {
    if c == 0 {
        return;
    }
    let p64 = p as u64;
    for (a, &b) in y.iter_mut().zip(x) {
        *a = ((*a as u64 + c as u64 * b as u64) % p64) as u32;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_nullspace_examples() {
        let z = FpMatrix::zeros(5, 3, 3);
        let rn = rank_nullspace(&z);
        assert_eq!((rn.rank, rn.nullspace.len()), (0, 3));

        let id = FpMatrix::identity(7, 4);
        let rn = rank_nullspace(&id);
        assert_eq!((rn.rank, rn.nullspace.len()), (4, 0));

        let m = FpMatrix::from_rows(5, &[vec![1, 2], vec![2, 4]]);
        let rn = rank_nullspace(&m);
        assert_eq!(rn.rank, 1);
        assert_eq!(rn.nullspace, vec![vec![3, 1]]);
        assert_eq!(m.mul_vec(&rn.nullspace[0]), vec![0, 0]);
    }

    #[test]
    fn inverse_and_products() {
        let m = FpMatrix::from_rows(7, &[vec![2, 1, 0], vec![0, 3, 1], vec![1, 0, 4]]);
        let inv = m.inverse().expect("invertible");
        assert_eq!(m.mul(&inv), FpMatrix::identity(7, 3));
        let sing = FpMatrix::from_rows(7, &[vec![1, 2], vec![2, 4]]);
        assert!(sing.inverse().is_none());
        assert_eq!(m.pow(7 * 7 * 7 - 1).rank(), 3);
        let k = FpMatrix::identity(7, 2).kron(&m);
        assert_eq!(k.rows(), 6);
        assert_eq!(k.get(4, 5), m.get(1, 2));
        assert_eq!(k.get(1, 4), 0);
    }

    #[test]
    fn generalized_eigenspace_examples() {
        let c = FpMatrix::scalar(5, 3, 2);
        assert_eq!(generalized_eigenspace(&c, 2).len(), 3);
        let d = FpMatrix::from_rows(5, &[vec![1, 0], vec![0, 3]]);
        assert_eq!(generalized_eigenspace(&d, 1).len(), 1);
        // Jordan block: eigenvector alone is not the full generalized eigenspace
        let j = FpMatrix::from_rows(5, &[vec![2, 1, 0], vec![0, 2, 1], vec![0, 0, 4]]);
        assert_eq!(generalized_eigenspace(&j, 2).len(), 2);
        assert_eq!(generalized_eigenspace(&j, 4).len(), 1);
        assert_eq!(generalized_eigenspace(&j, 0).len(), 0);
    }

    #[test]
    fn echelon_and_intersection() {
        let mut e = EchelonSpace::new(3, 3);
        assert!(e.insert(&[1, 1, 0]));
        assert!(e.insert(&[0, 1, 1]));
        assert!(!e.insert(&[1, 2, 1]));
        assert!(e.contains(&[2, 1, 2]));
        assert!(!e.contains(&[2, 0, 2]));
        let a = vec![vec![1, 0, 0], vec![0, 1, 0]];
        let b = vec![vec![0, 1, 0], vec![0, 0, 1]];
        let i = intersect(3, 3, &a, &b);
        assert_eq!(i.len(), 1);
        assert_eq!(i[0], vec![0, 1, 0]);
    }

    #[test]
    #[should_panic(expected = "different primes")]
    fn mixing_primes_panics() {
        let _ = FpMatrix::identity(5, 2).mul(&FpMatrix::identity(7, 2));
    }
}
