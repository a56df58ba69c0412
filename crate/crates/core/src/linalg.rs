//! Dense complex matrices and the few kernels the representation code needs:
//! a Hermitian eigensolver (cyclic Jacobi) and the solution space of
//! intertwining equations `dst(h)·F = F·src(h)`.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::scalar::{real, Real};

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix<T: Real = f64> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> fmt::Debug for CMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "({:+.6},{:+.6}) ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Real> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.data[r * self.cols + c]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        CMatrix { rows: r, cols: c, data: rows.concat() }
    }

    pub fn diagonal(entries: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, z) in entries.iter().enumerate() {
            m[(i, i)] = *z;
        }
        m
    }

    pub fn scalar(n: usize, z: Complex<T>) -> Self {
        Self::diagonal(&vec![z; n])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Complex<T>>]) -> Self {
        Self::from_fn(rows, columns.len(), |r, c| columns[c][r])
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |r, c| self[(r, cols[c])])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d = *d + a * *b;
                }
            }
        }
        out
    }

    /// `self† · rhs` without materializing the adjoint.
    pub fn adjoint_mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "dimension mismatch in adjoint product");
        let mut out = Self::zeros(self.cols, rhs.cols);
        for k in 0..self.rows {
            for i in 0..self.cols {
                let a = self[(k, i)].conj();
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn scale(&self, z: Complex<T>) -> Self {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| *x * z).collect() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }

    pub fn add_assign(&mut self, rhs: &Self) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a = *a + *b;
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).fold(Complex::zero(), |acc, i| acc + self[(i, i)])
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> T {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data.iter().zip(&rhs.data).fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    pub fn frobenius_sq(&self) -> T {
        self.data.iter().fold(T::zero(), |s, z| s + z.norm_sqr())
    }

    /// Frobenius inner product `tr(self† · rhs)`.
    pub fn inner(&self, rhs: &Self) -> Complex<T> {
        self.data.iter().zip(&rhs.data).fold(Complex::zero(), |s, (a, b)| s + a.conj() * *b)
    }

    /// `max |(U†U − I)_{ij}|`.
    pub fn unitarity_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        self.adjoint_mul(self).max_abs_diff(&Self::identity(self.rows))
    }

    /// Off-diagonal maximum and diagonal spread, the two measures of how far
    /// a square matrix is from `λ·I`. Returns `(λ, defect)` with `λ` the mean diagonal.
    pub fn scalar_part(&self) -> (Complex<T>, T) {
        assert!(self.is_square());
        let n = self.rows;
        let mean = self.trace() / real::<T>(n.max(1) as f64);
        let mut defect = T::zero();
        for r in 0..n {
            for c in 0..n {
                let d = if r == c { (self[(r, c)] - mean).norm() } else { self[(r, c)].norm() };
                defect = defect.max(d);
            }
        }
        (mean, defect)
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (r2, c2) = (rhs.rows, rhs.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |r, c| self[(r / r2, c / c2)] * rhs[(r % r2, c % c2)])
    }

    pub fn map<U: Real>(&self, f: impl Fn(Complex<T>) -> Complex<U>) -> CMatrix<U> {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| f(*z)).collect() }
    }

    /// Random Hermitian matrix with independent standard normal entries.
    pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(n, n);
        for r in 0..n {
            let d: f64 = rng.sample(StandardNormal);
            m[(r, r)] = Complex::new(real(d), T::zero());
            for c in r + 1..n {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let z = Complex::new(real(re), real(im));
                m[(r, c)] = z;
                m[(c, r)] = z.conj();
            }
        }
        m
    }

    fn rotate_columns(&mut self, p: usize, q: usize, c: T, s: T) {
        for r in 0..self.rows {
            let x = self[(r, p)];
            let y = self[(r, q)];
            self[(r, p)] = x * c - y * s;
            self[(r, q)] = x * s + y * c;
        }
    }

    fn rotate_rows(&mut self, p: usize, q: usize, c: T, s: T) {
        for k in 0..self.cols {
            let x = self[(p, k)];
            let y = self[(q, k)];
            self[(p, k)] = x * c - y * s;
            self[(q, k)] = x * s + y * c;
        }
    }

    fn scale_column(&mut self, q: usize, z: Complex<T>) {
        for r in 0..self.rows {
            self[(r, q)] = self[(r, q)] * z;
        }
    }

    fn scale_row(&mut self, q: usize, z: Complex<T>) {
        for k in 0..self.cols {
            self[(q, k)] = self[(q, k)] * z;
        }
    }
}

/// Eigen-decomposition of a Hermitian matrix: ascending real eigenvalues and
/// an orthonormal matrix of column eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real = f64> {
    pub values: Vec<T>,
    pub vectors: CMatrix<T>,
}

/// Cyclic complex Jacobi. Each rotation first turns the pivot into a real
/// number by a diagonal phase, then applies the classical real rotation.
pub fn hermitian_eigen<T: Real>(matrix: &CMatrix<T>) -> HermitianEigen<T> {
    assert!(matrix.is_square(), "eigen-decomposition of a non-square matrix");
    let n = matrix.rows();
    // symmetrize away rounding noise
    let mut a = CMatrix::from_fn(n, n, |r, c| (matrix[(r, c)] + matrix[(c, r)].conj()) * real::<T>(0.5));
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_sq().sqrt().max(T::min_positive_value());
    let target = T::epsilon() * scale * real::<T>(0.1);

    for _sweep in 0..100 {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off + a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let abs = apq.norm();
                if abs <= target * real::<T>(1e-3) {
                    continue;
                }
                let phase_conj = apq.conj() / abs;
                // D = diag(.., conj(phase) at q, ..): A ← D† A D, V ← V D
                a.scale_column(q, phase_conj);
                a.scale_row(q, phase_conj.conj());
                v.scale_column(q, phase_conj);

                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (real::<T>(2.0) * abs);
                let sign = if theta >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                a.rotate_columns(p, q, c, s);
                a.rotate_rows(p, q, c, s);
                v.rotate_columns(p, q, c, s);
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
                a[(p, p)] = Complex::new(app - t * abs, T::zero());
                a[(q, q)] = Complex::new(aqq + t * abs, T::zero());
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    HermitianEigen {
        values: order.iter().map(|&i| a[(i, i)].re).collect(),
        vectors: v.select_columns(&order),
    }
}

/// Groups ascending eigenvalues into clusters separated by gaps larger than `gap`.
pub fn cluster_eigenvalues<T: Real>(values: &[T], gap: T) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(cluster) if (*v - values[*cluster.last().unwrap()]).abs() <= gap => cluster.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    clusters
}

/// Orthonormal basis (Frobenius inner product) of the space of `d_dst × d_src`
/// matrices `F` with `dst[h]·F = F·src[h]` for every `h`.
///
/// The system is solved through its normal equations `N = Σ_h L_h† L_h`, where
/// `L_h(F) = dst[h]·F − F·src[h]`. When `src` and `dst` are unitary projective
/// representations over the same cocycle, `N = 2|H|(I − P)` with `P` the
/// orthogonal projector onto the solution space, so the spectrum is exactly
/// `{0, 2|H|}` and the split at `|H|` is unambiguous.
pub fn intertwining_space<T: Real>(src: &[CMatrix<T>], dst: &[CMatrix<T>]) -> Vec<CMatrix<T>> {
    assert_eq!(src.len(), dst.len(), "one matrix per group element on both sides");
    if src.is_empty() {
        return Vec::new();
    }
    let d_src = src[0].rows();
    let d_dst = dst[0].rows();
    let m = d_src * d_dst;
    if m == 0 {
        return Vec::new();
    }
    // unknown F is vectorized row-major: index(i, j) = i * d_src + j
    let mut normal = CMatrix::<T>::zeros(m, m);
    let mut l = CMatrix::<T>::zeros(m, m);
    for (s, d) in src.iter().zip(dst) {
        for z in l.data.iter_mut() {
            *z = Complex::zero();
        }
        // (dst F)_{ij} = Σ_k dst_{ik} F_{kj};   (F src)_{ij} = Σ_k F_{ik} src_{kj}
        for i in 0..d_dst {
            for j in 0..d_src {
                let row = i * d_src + j;
                for k in 0..d_dst {
                    let col = k * d_src + j;
                    l[(row, col)] = l[(row, col)] + d[(i, k)];
                }
                for k in 0..d_src {
                    let col = i * d_src + k;
                    l[(row, col)] = l[(row, col)] - s[(k, j)];
                }
            }
        }
        normal.add_assign(&l.adjoint_mul(&l));
    }
    let eig = hermitian_eigen(&normal);
    let threshold = real::<T>(src.len() as f64);
    eig.values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v < threshold)
        .map(|(idx, _)| {
            let col = eig.vectors.column(idx);
            CMatrix::from_fn(d_dst, d_src, |i, j| col[i * d_src + j])
        })
        .collect()
}
