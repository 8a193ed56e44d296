//! Dense complex matrix algebra for small multi-qubit problems: products,
//! tensor products, partial traces, permutation conjugation, a cyclic Jacobi
//! eigensolver for Hermitian matrices, and majorization tests.
//!
//! Everything here is a pure function on immutable values; dimensions are
//! powers of two up to 2^10.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hermiticity tolerance on the max-abs entry of `M - M^dag`.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// The Jacobi sweep stops once every off-diagonal magnitude is below this.
const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix, row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, ONE);
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    /// Builds a matrix from nested rows; fails if the grid is not square or
    /// contains non-finite entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
        }
        let data: Vec<Complex64> = rows.iter().flatten().copied().collect();
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { context: "matrix entries" });
        }
        Ok(Self { dim, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    #[inline]
    pub fn add_assign_entry(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] += value;
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self.get(i, k);
                if aik == ZERO {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += aik * other.data[k * d + j];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry magnitude of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry magnitude of `M - M^dag`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            worst = worst.max(self.get(i, i).im.abs() * 2.0);
            for j in (i + 1)..d {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `(M + M^dag) / 2`, used to suppress rounding drift before eigensolving.
    pub fn symmetrized(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            out.set(i, i, Complex64::new(self.get(i, i).re, 0.0));
            for j in (i + 1)..d {
                let avg = (self.get(i, j) + self.get(j, i).conj()) * 0.5;
                out.set(i, j, avg);
                out.set(j, i, avg.conj());
            }
        }
        out
    }

    fn max_off_diagonal(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in (i + 1)..d {
                worst = worst.max(self.get(i, j).norm());
            }
        }
        worst
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        &self.data[row * self.dim + col]
    }
}

/// Tensor product with the first factor as the most significant qubit block.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    let d = da * db;
    let mut out = ComplexMatrix::zeros(d);
    for ia in 0..da {
        for ja in 0..da {
            let f = a.get(ia, ja);
            if f == ZERO {
                continue;
            }
            for ib in 0..db {
                for jb in 0..db {
                    out.set(ia * db + ib, ja * db + jb, f * b.get(ib, jb));
                }
            }
        }
    }
    out
}

/// Eigendecomposition of a Hermitian matrix: eigenvalues sorted descending,
/// the i-th eigenvector in column i of a unitary matrix.
#[derive(Clone, Debug)]
pub struct HermitianSpectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl HermitianSpectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    /// `U diag(lambda) U^dag`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..d {
            let l = Complex64::new(self.eigenvalues[j], 0.0);
            for i in 0..d {
                let v = scaled.get(i, j) * l;
                scaled.set(i, j, v);
            }
        }
        scaled.mul(&self.eigenvectors.dagger()).expect("square")
    }

    /// Max-abs entry of `U diag(lambda) U^dag - m`.
    pub fn reconstruction_error(&self, m: &ComplexMatrix) -> f64 {
        self.reconstruct().max_abs_diff(m)
    }

    /// Max-abs entry of `U^dag U - I`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.eigenvalues.len();
        let u = &self.eigenvectors;
        let prod = u.dagger().mul(u).expect("square");
        prod.max_abs_diff(&ComplexMatrix::identity(d))
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices. The input is
/// symmetrized as `(M + M^dag)/2` first; sweeps run until the largest
/// off-diagonal magnitude drops below 1e-13 or 100 sweeps elapse.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianSpectrum> {
    let defect = m.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let d = m.dim();
    let mut a = m.symmetrized();
    let mut v = ComplexMatrix::identity(d);

    let mut sweeps = 0;
    loop {
        let off = a.max_off_diagonal();
        if off < JACOBI_OFF_TOL {
            break;
        }
        if sweeps >= JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..d {
            for q in (p + 1)..d {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..d).collect();
    let diag: Vec<f64> = (0..d).map(|i| a.get(i, i).re).collect();
    // Stable sort keeps Jacobi's natural order among ties.
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).expect("finite eigenvalues"));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(d);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..d {
            eigenvectors.set(row, new_col, v.get(row, old_col));
        }
    }

    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// One complex Jacobi rotation zeroing entry (p, q); updates `a` in place and
/// accumulates the rotation into `v`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let g = a.get(p, q);
    let abs_g = g.norm();
    if abs_g < JACOBI_OFF_TOL {
        return;
    }
    let phase = g / abs_g;
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let tau = (aqq - app) / (2.0 * abs_g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let d = a.dim();
    // A <- R^dag A R with R_pp = c*phase, R_qp = -s, R_pq = s*phase, R_qq = c.
    for i in 0..d {
        let aip = a.get(i, p);
        let aiq = a.get(i, q);
        a.set(i, p, aip * (phase * c) - aiq * s);
        a.set(i, q, aip * (phase * s) + aiq * c);
    }
    let phase_c = phase.conj();
    for j in 0..d {
        let apj = a.get(p, j);
        let aqj = a.get(q, j);
        a.set(p, j, apj * (phase_c * c) - aqj * s);
        a.set(q, j, apj * (phase_c * s) + aqj * c);
    }
    // Pin the rotated pivot pair to exact values.
    a.set(p, q, ZERO);
    a.set(q, p, ZERO);
    let new_pp = a.get(p, p).re;
    let new_qq = a.get(q, q).re;
    a.set(p, p, Complex64::new(new_pp, 0.0));
    a.set(q, q, Complex64::new(new_qq, 0.0));

    for i in 0..d {
        let vip = v.get(i, p);
        let viq = v.get(i, q);
        v.set(i, p, vip * (phase * c) - viq * s);
        v.set(i, q, vip * (phase * s) + viq * c);
    }
}

fn check_keep(n: usize, keep: &[usize]) -> Result<()> {
    if keep.is_empty() {
        return Err(Error::BadIndex { index: 0 });
    }
    let mut prev = 0usize;
    for &q in keep {
        if q == 0 || q > n || q <= prev {
            return Err(Error::BadIndex { index: q });
        }
        prev = q;
    }
    Ok(())
}

/// Reduced matrix over the qubits in `keep` (1-based, ascending; qubit 1 is
/// the most significant bit of the basis index). All other qubits are traced
/// out; the trace is preserved.
pub fn partial_trace(rho: &ComplexMatrix, n: usize, keep: &[usize]) -> Result<ComplexMatrix> {
    let dim = 1usize << n;
    if rho.dim() != dim {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: dim,
        });
    }
    check_keep(n, keep)?;

    let traced: Vec<usize> = (1..=n).filter(|q| !keep.contains(q)).collect();
    // Bit position (from the least significant end) of 1-based qubit q.
    let keep_pos: Vec<usize> = keep.iter().map(|&q| n - q).collect();
    let traced_pos: Vec<usize> = traced.iter().map(|&q| n - q).collect();

    let scatter = |bits: usize, pos: &[usize]| -> usize {
        let k = pos.len();
        let mut out = 0usize;
        for (j, &p) in pos.iter().enumerate() {
            if (bits >> (k - 1 - j)) & 1 == 1 {
                out |= 1 << p;
            }
        }
        out
    };

    let dk = 1usize << keep.len();
    let dt = 1usize << traced.len();
    let mut out = ComplexMatrix::zeros(dk);
    for ik in 0..dk {
        let row_keep = scatter(ik, &keep_pos);
        for jk in 0..dk {
            let col_keep = scatter(jk, &keep_pos);
            let mut acc = ZERO;
            for s in 0..dt {
                let env = scatter(s, &traced_pos);
                acc += rho.get(row_keep | env, col_keep | env);
            }
            out.set(ik, jk, acc);
        }
    }
    Ok(out)
}

/// A permutation of basis indices, stored as the image list: basis state `i`
/// is sent to `images[i]`. Serializes as the bare image array.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(dim: usize) -> Self {
        Self {
            images: (0..dim).collect(),
        }
    }

    /// Swaps basis states `i` and `j` (0-based).
    pub fn transposition(dim: usize, i: usize, j: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::BadIndex { index: i });
        }
        if j >= dim {
            return Err(Error::BadIndex { index: j });
        }
        let mut images: Vec<usize> = (0..dim).collect();
        images.swap(i, j);
        Ok(Self { images })
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let dim = images.len();
        let mut seen = vec![false; dim];
        for &img in &images {
            if img >= dim || seen[img] {
                return Err(Error::BadPermutation { dim });
            }
            seen[img] = true;
        }
        Ok(Self { images })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img)
    }

    /// The permutation matrix `P` with `P e_i = e_{images[i]}`.
    pub fn matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim());
        for (i, &img) in self.images.iter().enumerate() {
            m.set(img, i, ONE);
        }
        m
    }
}

/// `P rho P^dag` for the permutation matrix `P` of `perm`: entry (i, j) moves
/// to (perm(i), perm(j)). The spectrum is unchanged and the diagonal is
/// permuted accordingly.
pub fn conjugate_by_permutation(rho: &ComplexMatrix, perm: &Permutation) -> Result<ComplexMatrix> {
    if rho.dim() != perm.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: perm.dim(),
        });
    }
    let d = rho.dim();
    let mut out = ComplexMatrix::zeros(d);
    for i in 0..d {
        let pi = perm.image(i);
        for j in 0..d {
            out.set(pi, perm.image(j), rho.get(i, j));
        }
    }
    Ok(out)
}

/// Hardy-Littlewood-Polya majorization test: after sorting both descending,
/// every prefix sum of `x` must stay within `tol` below the matching prefix
/// sum of `y`, and the totals must agree within `tol`.
pub fn is_majorized(x: &[f64], y: &[f64], tol: f64) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(|a, b| b.partial_cmp(a).expect("finite entries"));
    ys.sort_by(|a, b| b.partial_cmp(a).expect("finite entries"));

    let mut px = 0.0;
    let mut py = 0.0;
    for i in 0..xs.len() {
        px += xs[i];
        py += ys[i];
        if px > py + tol {
            return Ok(false);
        }
    }
    Ok((px - py).abs() <= tol)
}
