//! Exact integer linear algebra.
//!
//! Everything in the crate bottoms out here: Hermite normal forms with their
//! unimodular transforms, integer kernels, and completion of primitive
//! vectors to lattice bases. All arithmetic is on `i64` with overflow checks
//! enabled in every build profile, so an overflow aborts loudly instead of
//! producing a wrong answer.

use std::fmt;
use std::ops::{Deref, DerefMut, Index, IndexMut};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Scalar type of every coordinate and matrix entry.
pub type Int = i64;

/// A point or direction of `Z^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVector(pub SmallVec<[Int; 6]>);

/// Builds an [`IntVector`] from a list of integer literals.
#[macro_export]
macro_rules! ivec {
    ($($x:expr),* $(,)?) => {
        $crate::intlin::IntVector::from(vec![$($x as $crate::intlin::Int),*])
    };
}

impl IntVector {
    pub fn zeros(n: usize) -> Self {
        IntVector(SmallVec::from_elem(0, n))
    }

    /// The `i`-th standard basis vector of `Z^n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v[i] = 1;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn dot(&self, other: &[Int]) -> Int {
        dot(&self.0, other)
    }

    pub fn add(&self, other: &[Int]) -> IntVector {
        self.0.iter().zip(other).map(|(a, b)| a + b).collect()
    }

    pub fn sub(&self, other: &[Int]) -> IntVector {
        self.0.iter().zip(other).map(|(a, b)| a - b).collect()
    }

    pub fn scale(&self, k: Int) -> IntVector {
        self.0.iter().map(|a| a * k).collect()
    }

    pub fn neg(&self) -> IntVector {
        self.scale(-1)
    }

    /// Gcd of the coordinates (0 for the zero vector).
    pub fn content(&self) -> Int {
        self.0.iter().fold(0, |g, &x| gcd(g, x))
    }

    /// The vector divided by its content. The zero vector is returned unchanged.
    pub fn primitive_part(&self) -> IntVector {
        let g = self.content();
        if g <= 1 {
            return self.clone();
        }
        self.0.iter().map(|x| x / g).collect()
    }

    /// Flips the sign so that the first nonzero coordinate is positive.
    pub fn sign_normalized(&self) -> IntVector {
        match self.0.iter().find(|&&x| x != 0) {
            Some(&x) if x < 0 => self.neg(),
            _ => self.clone(),
        }
    }

    /// Appends coordinates, producing a vector in a higher-dimensional lattice.
    pub fn extended(&self, tail: &[Int]) -> IntVector {
        self.0.iter().chain(tail).copied().collect()
    }
}

impl Deref for IntVector {
    type Target = [Int];
    fn deref(&self) -> &[Int] {
        &self.0
    }
}

impl DerefMut for IntVector {
    fn deref_mut(&mut self) -> &mut [Int] {
        &mut self.0
    }
}

impl AsRef<[Int]> for IntVector {
    fn as_ref(&self) -> &[Int] {
        &self.0
    }
}

impl From<Vec<Int>> for IntVector {
    fn from(v: Vec<Int>) -> Self {
        IntVector(SmallVec::from_vec(v))
    }
}

impl From<&[Int]> for IntVector {
    fn from(v: &[Int]) -> Self {
        IntVector(SmallVec::from_slice(v))
    }
}

impl FromIterator<Int> for IntVector {
    fn from_iter<I: IntoIterator<Item = Int>>(iter: I) -> Self {
        IntVector(iter.into_iter().collect())
    }
}

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Int>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data has wrong length");
        IntMatrix { rows, cols, data }
    }

    /// Matrix whose rows are the given vectors (all of length `cols`).
    pub fn from_rows<V: AsRef<[Int]>>(rows: &[V], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_cols<V: AsRef<[Int]>>(cols: &[V], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            let c = c.as_ref();
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Int] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vector(&self, r: usize) -> IntVector {
        IntVector::from(self.row(r))
    }

    pub fn col(&self, c: usize) -> IntVector {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> IntVector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_block(&self, start: usize, end: usize) -> IntMatrix {
        IntMatrix {
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[i * n + k] != 0) else {
                    return 0;
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i * n + j] = (a[i * n + j] * pivot - a[i * n + k] * a[k * n + j]) / prev;
                }
                a[i * n + k] = 0;
            }
            prev = pivot;
        }
        Int::try_from(sign * a[n * n - 1]).expect("determinant exceeds i64")
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs() == 1
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let (h, _) = hermite_normal_form(self);
        (0..h.rows).filter(|&r| h.row(r).iter().any(|&x| x != 0)).count()
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        if !self.is_unimodular() {
            return Err(Error::NotUnimodular);
        }
        // The Hermite form of a unimodular matrix is the identity, so the
        // transform is the inverse.
        let (_, u) = hermite_normal_form(self);
        Ok(u)
    }

    /// Adjugate matrix, `adj(m) * m = det(m) * I`.
    pub fn adjugate(&self) -> IntMatrix {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut adj = Self::zeros(n, n);
        if n == 1 {
            adj[(0, 0)] = 1;
            return adj;
        }
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(i, j);
                let c = minor.det();
                adj[(j, i)] = if (i + j) % 2 == 0 { c } else { -c };
            }
        }
        adj
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> IntMatrix {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != skip_r) {
            for j in (0..self.cols).filter(|&j| j != skip_c) {
                data.push(self[(i, j)]);
            }
        }
        IntMatrix { rows: self.rows - 1, cols: self.cols - 1, data }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (r, c): (usize, usize)) -> &Int {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Int {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gcd(a: Int, b: Int) -> Int {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd: returns `(g, x, y)` with `g = x*a + y*b >= 0`.
pub fn ext_gcd(a: Int, b: Int) -> (Int, Int, Int) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1, 0);
    let (mut old_t, mut t) = (0, 1);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Floor division.
pub fn div_floor(a: Int, b: Int) -> Int {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

/// Ceiling division.
pub fn div_ceil(a: Int, b: Int) -> Int {
    -div_floor(-a, b)
}

/// Row-style Hermite normal form.
///
/// Returns `(h, u)` with `u` unimodular and `u * m = h`. `h` is in row
/// echelon form: each nonzero row starts with a positive pivot strictly to
/// the right of the previous row's pivot, entries above a pivot lie in
/// `[0, pivot)`, and zero rows sit at the bottom. The form is unique, and
/// the Hermite form of the first `k` columns of `m` is the first `k`
/// columns of `h`.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    // Work on the augmented rows [m | I] in i128; intermediate entries of
    // the transform can grow well past the size of the result.
    let (rows, cols) = (m.rows, m.cols);
    let width = cols + rows;
    let mut a: Vec<Vec<i128>> = (0..rows)
        .map(|i| {
            let mut r: Vec<i128> = m.row(i).iter().map(|&x| x as i128).collect();
            r.extend((0..rows).map(|j| (i == j) as i128));
            r
        })
        .collect();
    let sub = |a: &mut Vec<Vec<i128>>, dst: usize, src: usize, q: i128| {
        for j in 0..width {
            let s = a[src][j];
            a[dst][j] -= q * s;
        }
    };
    let mut p = 0;
    for c in 0..cols {
        if p == rows {
            break;
        }
        // Euclidean elimination: repeatedly pivot on the smallest nonzero entry.
        while let Some(best) = (p..rows).filter(|&i| a[i][c] != 0).min_by_key(|&i| a[i][c].abs()) {
            a.swap(p, best);
            let piv = a[p][c];
            let mut done = true;
            for i in p + 1..rows {
                let q = round_div(a[i][c], piv);
                if q != 0 {
                    sub(&mut a, i, p, q);
                }
                done &= a[i][c] == 0;
            }
            if done {
                break;
            }
        }
        if a[p][c] == 0 {
            continue;
        }
        if a[p][c] < 0 {
            a[p].iter_mut().for_each(|x| *x = -*x);
        }
        let piv = a[p][c];
        for r in 0..p {
            let q = a[r][c].div_euclid(piv);
            sub(&mut a, r, p, q);
        }
        p += 1;
    }
    // Size-reduce every row against the kernel rows `p..`; this leaves the
    // left block unchanged and keeps the transform small.
    let dot = |x: &[i128], y: &[i128]| x[cols..].iter().zip(&y[cols..]).map(|(a, b)| a * b).sum::<i128>();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..rows {
            for j in p..rows {
                if i == j {
                    continue;
                }
                let nj = dot(&a[j], &a[j]);
                let ip = dot(&a[i], &a[j]);
                let q = round_div(ip, nj);
                if q != 0 && 2 * ip.abs() > nj {
                    sub(&mut a, i, j, q);
                    changed = true;
                }
            }
        }
    }
    let narrow = |x: i128| Int::try_from(x).expect("Hermite form entry exceeds i64");
    let h = IntMatrix::from_row_major(rows, cols, a.iter().flat_map(|r| r[..cols].iter().map(|&x| narrow(x))).collect());
    let u = IntMatrix::from_row_major(rows, rows, a.iter().flat_map(|r| r[cols..].iter().map(|&x| narrow(x))).collect());
    (h, u)
}

/// Nearest-integer quotient.
fn round_div(a: i128, b: i128) -> i128 {
    (2 * a + b.abs()).div_euclid(2 * b.abs()) * b.signum()
}

/// Lattice basis (as rows) of the integer kernel `{x in Z^n : m x = 0}`.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hermite_normal_form(&m.transpose());
    let rank = (0..h.rows()).filter(|&r| h.row(r).iter().any(|&x| x != 0)).count();
    u.row_block(rank, u.rows())
}

/// Returns `Ok(true)` iff the coordinates of `v` have gcd 1.
pub fn is_primitive(v: &[Int]) -> Result<bool> {
    if v.iter().all(|&x| x == 0) {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().fold(0, |g, &x| gcd(g, x)) == 1)
}

/// Unimodular `n x n` matrix whose first column is the primitive vector `v`.
///
/// Computed as the inverse of the Hermite transform of `v` viewed as a
/// single column, so the completion is deterministic.
pub fn complete_to_basis(v: &[Int]) -> Result<IntMatrix> {
    if !is_primitive(v)? {
        return Err(Error::NonPrimitiveVector(IntVector::from(v)));
    }
    let col = IntMatrix::from_cols(&[v], v.len());
    let (h, u) = hermite_normal_form(&col);
    debug_assert_eq!(h[(0, 0)], 1);
    let b = u.inverse_unimodular()?;
    debug_assert_eq!(b.col(0).as_ref(), v);
    Ok(b)
}

/// Integer lattice coordinates on an affine sublattice.
///
/// Represents `origin + span_Z(basis columns)`, where the basis is a lattice
/// basis of `aff ∩ Z^n` and `coords` maps a point of the affine lattice to
/// its coordinates in `Z^d` exactly.
#[derive(Clone, Debug)]
pub struct AffineLattice {
    pub origin: IntVector,
    /// `n x d`, columns form a basis of the linear part.
    pub basis: IntMatrix,
    /// `d x n`, satisfies `coords * basis = I_d`.
    pub coords: IntMatrix,
}

impl AffineLattice {
    /// Affine lattice spanned by `points` (must be nonempty).
    pub fn spanned_by(points: &[IntVector]) -> AffineLattice {
        let n = points[0].dim();
        let origin = points[0].clone();
        let diffs: Vec<IntVector> = points[1..].iter().map(|p| p.sub(&origin)).collect();
        // Normals to the affine hull, then the saturated lattice they cut out.
        let normals = if diffs.is_empty() {
            IntMatrix::identity(n)
        } else {
            kernel_basis(&IntMatrix::from_rows(&diffs, n))
        };
        let basis_rows = if normals.rows() == 0 {
            IntMatrix::identity(n)
        } else {
            kernel_basis(&normals)
        };
        let d = basis_rows.rows();
        let basis = basis_rows.transpose();
        let coords = if d == 0 {
            IntMatrix::zeros(0, n)
        } else {
            let (_, u) = hermite_normal_form(&basis);
            u.row_block(0, d)
        };
        debug_assert_eq!(coords.mul(&basis), IntMatrix::identity(d));
        AffineLattice { origin, basis, coords }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn to_coords(&self, p: &[Int]) -> IntVector {
        self.coords.mul_vec(&IntVector::from(p).sub(&self.origin))
    }

    pub fn from_coords(&self, c: &[Int]) -> IntVector {
        self.basis.mul_vec(c).add(&self.origin)
    }
}
