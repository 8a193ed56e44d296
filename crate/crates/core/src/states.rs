//! Constructors and validators for the state families under study: general
//! n-qubit X states, Bell-diagonal states, GHZ states mixed with white noise,
//! plus dephasing and closed-form spectra.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matops::{eig_hermitian, partial_trace, ComplexMatrix, HERMITICITY_TOL};

/// Trace tolerance for state validation.
pub const TRACE_TOL: f64 = 1e-12;
/// Probabilities may dip this far below zero before being rejected.
pub const PROB_FLOOR: f64 = -1e-12;
/// Minimum eigenvalue tolerance for dense density matrices.
pub const PSD_TOL: f64 = -1e-10;

/// Compact n-qubit X state: diagonal entries plus the upper half of the
/// anti-diagonal. `anti[i]` is the matrix entry coupling basis state `i` to
/// its bitwise complement `2^n - 1 - i`, for `i < 2^(n-1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct XState {
    n: usize,
    diag: Vec<f64>,
    anti: Vec<Complex64>,
}

impl XState {
    /// Validating constructor.
    pub fn new(n: usize, diag: Vec<f64>, anti: Vec<Complex64>) -> Result<Self> {
        let state = Self { n, diag, anti };
        state.validate()?;
        Ok(state)
    }

    /// For outputs that are valid by construction.
    pub(crate) fn new_unchecked(n: usize, diag: Vec<f64>, anti: Vec<Complex64>) -> Self {
        Self { n, diag, anti }
    }

    /// Checks lengths, trace, non-negative diagonal and positive
    /// semidefiniteness of every 2x2 anti-diagonal block.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::BadArity {
                expected: 1,
                got: 0,
            });
        }
        let dim = 1usize << self.n;
        if self.diag.len() != dim {
            return Err(Error::BadLength {
                expected: dim,
                got: self.diag.len(),
            });
        }
        if self.anti.len() != dim / 2 {
            return Err(Error::BadLength {
                expected: dim / 2,
                got: self.anti.len(),
            });
        }
        if self.diag.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { context: "diagonal" });
        }
        if self
            .anti
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { context: "anti-diagonal" });
        }
        for (i, &v) in self.diag.iter().enumerate() {
            if v < PROB_FLOOR {
                return Err(Error::NegativeDiagonal { index: i, value: v });
            }
        }
        let trace: f64 = self.diag.iter().sum();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::BadTrace { trace });
        }
        for (i, &z) in self.anti.iter().enumerate() {
            let j = dim - 1 - i;
            let product = self.diag[i] * self.diag[j];
            let anti_sq = z.norm_sqr();
            if product < anti_sq - 1e-12 {
                return Err(Error::BlockNotPsd {
                    index: i,
                    diag_product: product,
                    anti_sq,
                });
            }
        }
        Ok(())
    }

    /// Bell-diagonal two-qubit state `(I + sum_i a_i s_i (x) s_i) / 4`.
    pub fn bell_diagonal(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        let eigs = [
            (1.0 - a1 - a2 - a3) / 4.0,
            (1.0 - a1 + a2 + a3) / 4.0,
            (1.0 + a1 - a2 + a3) / 4.0,
            (1.0 + a1 + a2 - a3) / 4.0,
        ];
        if let Some(&bad) = eigs.iter().find(|&&l| l < PROB_FLOOR) {
            return Err(Error::NotAState { value: bad });
        }
        let diag = vec![
            (1.0 + a3) / 4.0,
            (1.0 - a3) / 4.0,
            (1.0 - a3) / 4.0,
            (1.0 + a3) / 4.0,
        ];
        let anti = vec![
            Complex64::new((a1 - a2) / 4.0, 0.0),
            Complex64::new((a1 + a2) / 4.0, 0.0),
        ];
        Ok(Self::new_unchecked(2, diag, anti))
    }

    /// GHZ state mixed with white noise:
    /// `beta |GHZ><GHZ| + (1 - beta) I / 2^n`.
    pub fn ghz_white_noise(n: usize, beta: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadArity { expected: 2, got: n });
        }
        if !(0.0..=1.0).contains(&beta) || !beta.is_finite() {
            return Err(Error::BadBeta { beta });
        }
        let dim = 1usize << n;
        let noise = (1.0 - beta) / dim as f64;
        let mut diag = vec![noise; dim];
        diag[0] += beta / 2.0;
        diag[dim - 1] += beta / 2.0;
        let mut anti = vec![Complex64::new(0.0, 0.0); dim / 2];
        anti[0] = Complex64::new(beta / 2.0, 0.0);
        Ok(Self::new_unchecked(n, diag, anti))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn anti(&self) -> &[Complex64] {
        &self.anti
    }

    pub fn is_incoherent(&self) -> bool {
        self.anti.iter().all(|z| z.norm_sqr() == 0.0)
    }

    /// Zeroes every off-diagonal entry; the diagonal is kept exactly.
    pub fn dephased(&self) -> XState {
        Self::new_unchecked(
            self.n,
            self.diag.clone(),
            vec![Complex64::new(0.0, 0.0); self.anti.len()],
        )
    }

    /// Closed-form spectrum from the 2x2 anti-diagonal blocks, sorted
    /// descending: each pair (i, 2^n-1-i) contributes
    /// `(d_i + d_j +- sqrt((d_i - d_j)^2 + 4 |anti_i|^2)) / 2`.
    pub fn spectrum(&self) -> Vec<f64> {
        let dim = self.dim();
        let mut out = Vec::with_capacity(dim);
        for i in 0..dim / 2 {
            let j = dim - 1 - i;
            let a = self.diag[i];
            let b = self.diag[j];
            let coupling = self.anti[i].norm_sqr();
            if coupling == 0.0 {
                // Keep decoupled blocks exact.
                out.push(a.max(b));
                out.push(a.min(b));
            } else {
                let disc = ((a - b).powi(2) + 4.0 * coupling).sqrt();
                out.push(0.5 * (a + b + disc));
                out.push(0.5 * (a + b - disc));
            }
        }
        out.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
        out
    }

    /// Full dense matrix with Hermitian completion of the anti-diagonal.
    pub fn to_dense(&self) -> DensityMatrix {
        let dim = self.dim();
        let mut m = ComplexMatrix::zeros(dim);
        for (i, &v) in self.diag.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        for (i, &z) in self.anti.iter().enumerate() {
            let j = dim - 1 - i;
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
        DensityMatrix::new_unchecked(self.n, m)
    }

    /// Reduced 2x2 matrix of one qubit (1-based). For n >= 2 the marginal of
    /// an X state is diagonal; for n = 1 it is the state itself.
    pub fn marginal(&self, qubit: usize) -> Result<ComplexMatrix> {
        if qubit == 0 || qubit > self.n {
            return Err(Error::BadIndex { index: qubit });
        }
        let dim = self.dim();
        if self.n == 1 {
            return Ok(self.to_dense().matrix().clone());
        }
        let pos = self.n - qubit;
        let mut p0 = 0.0;
        let mut p1 = 0.0;
        for (idx, &v) in self.diag.iter().enumerate() {
            if (idx >> pos) & 1 == 0 {
                p0 += v;
            } else {
                p1 += v;
            }
        }
        debug_assert_eq!(dim, self.diag.len());
        Ok(ComplexMatrix::diagonal(&[p0, p1]))
    }

    /// Random valid X state: flat Dirichlet diagonal, each anti-diagonal
    /// magnitude uniform in `[0, sqrt(d_i d_j)]` with a uniform phase. Block
    /// positivity holds by construction.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> XState {
        let dim = 1usize << n;
        let mut diag: Vec<f64> = (0..dim)
            .map(|_| -(rng.random_range(1e-12..1.0f64)).ln())
            .collect();
        let total: f64 = diag.iter().sum();
        for v in diag.iter_mut() {
            *v /= total;
        }
        let anti: Vec<Complex64> = (0..dim / 2)
            .map(|i| {
                let j = dim - 1 - i;
                let cap = (diag[i] * diag[j]).sqrt();
                let mag = rng.random_range(0.0..=1.0) * cap;
                let phase = rng.random_range(0.0..std::f64::consts::TAU);
                Complex64::from_polar(mag, phase)
            })
            .collect();
        XState::new_unchecked(n, diag, anti)
    }

    /// Random diagonal (incoherent) state.
    pub fn random_incoherent<R: Rng + ?Sized>(n: usize, rng: &mut R) -> XState {
        let mut state = Self::random(n, rng);
        for z in state.anti.iter_mut() {
            *z = Complex64::new(0.0, 0.0);
        }
        state
    }
}

/// A general n-qubit state as a dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validating constructor: Hermitian within 1e-10, unit trace within
    /// 1e-12, smallest eigenvalue >= -1e-10.
    pub fn new(n: usize, matrix: ComplexMatrix) -> Result<Self> {
        let dim = 1usize << n;
        if matrix.dim() != dim {
            return Err(Error::DimMismatch {
                left: matrix.dim(),
                right: dim,
            });
        }
        let defect = matrix.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation: defect });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::BadTrace { trace });
        }
        let spec = eig_hermitian(&matrix)?;
        let min = *spec
            .eigenvalues()
            .last()
            .expect("non-empty spectrum");
        if min < PSD_TOL {
            return Err(Error::NotAState { value: min });
        }
        Ok(Self { n, matrix })
    }

    pub(crate) fn new_unchecked(n: usize, matrix: ComplexMatrix) -> Self {
        Self { n, matrix }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(eig_hermitian(&self.matrix)?.eigenvalues().to_vec())
    }

    /// Diagonal of the matrix, kept exactly, as an incoherent X state.
    pub fn dephased(&self) -> XState {
        let dim = self.matrix.dim();
        let diag: Vec<f64> = (0..dim).map(|i| self.matrix.get(i, i).re).collect();
        XState::new_unchecked(self.n, diag, vec![Complex64::new(0.0, 0.0); dim / 2])
    }

    /// Reduced 2x2 matrix of one qubit (1-based).
    pub fn marginal(&self, qubit: usize) -> Result<ComplexMatrix> {
        partial_trace(&self.matrix, self.n, &[qubit])
    }
}

/// Anything the capacity functional accepts: it needs a qubit count, a
/// descending spectrum and a dephased companion.
pub trait BatteryState {
    fn qubit_count(&self) -> usize;
    fn spectrum_descending(&self) -> Result<Vec<f64>>;
    fn dephased_state(&self) -> XState;
}

impl BatteryState for XState {
    fn qubit_count(&self) -> usize {
        self.n
    }

    fn spectrum_descending(&self) -> Result<Vec<f64>> {
        Ok(self.spectrum())
    }

    fn dephased_state(&self) -> XState {
        self.dephased()
    }
}

impl BatteryState for DensityMatrix {
    fn qubit_count(&self) -> usize {
        self.n
    }

    fn spectrum_descending(&self) -> Result<Vec<f64>> {
        self.spectrum()
    }

    fn dephased_state(&self) -> XState {
        self.dephased()
    }
}

/// The three diagonal 3-qubit states used as counterexamples to the
/// pair-overlap capacity relations, with diagonals (8,7,2,1,4,3,6,5)/36,
/// (8,7,4,3,2,1,6,5)/36 and (8,4,7,3,6,2,5,1)/36.
pub fn three_qubit_counterexamples() -> [XState; 3] {
    let build = |values: [f64; 8]| {
        let diag: Vec<f64> = values.iter().map(|v| v / 36.0).collect();
        XState::new_unchecked(3, diag, vec![Complex64::new(0.0, 0.0); 4])
    };
    [
        build([8.0, 7.0, 2.0, 1.0, 4.0, 3.0, 6.0, 5.0]),
        build([8.0, 7.0, 4.0, 3.0, 2.0, 1.0, 6.0, 5.0]),
        build([8.0, 4.0, 7.0, 3.0, 6.0, 2.0, 5.0, 1.0]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matops::eig_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn maximally_mixed_qubit() {
        let x = XState::new(1, vec![0.5, 0.5], vec![Complex64::new(0.0, 0.0)]).unwrap();
        assert_eq!(x.spectrum(), vec![0.5, 0.5]);
        let dense = x.to_dense();
        assert!((dense.matrix().get(0, 0).re - 0.5).abs() < 1e-15);
        assert!(dense.matrix().get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn diagonal_two_qubit_state_is_valid() {
        let diag: Vec<f64> = [8.0, 7.0, 2.0, 1.0].iter().map(|v| v / 18.0).collect();
        let x = XState::new(2, diag, vec![Complex64::new(0.0, 0.0); 2]).unwrap();
        assert!(x.is_incoherent());
    }

    #[test]
    fn block_positivity_is_enforced() {
        let err = XState::new(
            2,
            vec![0.5, 0.0, 0.0, 0.5],
            vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.0)],
        )
        .unwrap_err();
        match err {
            // Block 0 couples entries 1 and 4: 0.25 < 0.36.
            Error::BlockNotPsd { index, .. } => assert_eq!(index, 0),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn trace_and_negativity_are_enforced() {
        let err = XState::new(1, vec![0.6, 0.6], vec![Complex64::new(0.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::BadTrace { .. }));
        let err = XState::new(1, vec![1.2, -0.2], vec![Complex64::new(0.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NegativeDiagonal { index: 1, .. }));
    }

    #[test]
    fn bell_diagonal_matches_closed_form_spectrum() {
        let (a1, a2, a3) = (0.5, 0.3, 0.1);
        let x = XState::bell_diagonal(a1, a2, a3).unwrap();
        let mut expected = vec![
            (1.0 - a1 - a2 - a3) / 4.0,
            (1.0 - a1 + a2 + a3) / 4.0,
            (1.0 + a1 - a2 + a3) / 4.0,
            (1.0 + a1 + a2 - a3) / 4.0,
        ];
        expected.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let got = x.spectrum();
        for (g, e) in got.iter().zip(&expected) {
            assert!((g - e).abs() < 1e-14);
        }
    }

    #[test]
    fn bell_diagonal_corner_cases() {
        let mixed = XState::bell_diagonal(0.0, 0.0, 0.0).unwrap();
        assert_eq!(mixed.spectrum(), vec![0.25; 4]);

        let bell = XState::bell_diagonal(1.0, -1.0, 1.0).unwrap();
        let spec = bell.spectrum();
        assert!((spec[0] - 1.0).abs() < 1e-14);
        for &l in &spec[1..] {
            assert!(l.abs() < 1e-14);
        }

        assert!(matches!(
            XState::bell_diagonal(1.0, 1.0, 1.0),
            Err(Error::NotAState { .. })
        ));
    }

    #[test]
    fn ghz_white_noise_spectrum() {
        // Pure noise and pure GHZ ends.
        let noise = XState::ghz_white_noise(3, 0.0).unwrap();
        assert_eq!(noise.spectrum(), vec![0.125; 8]);
        let ghz = XState::ghz_white_noise(3, 1.0).unwrap();
        let spec = ghz.spectrum();
        assert!((spec[0] - 1.0).abs() < 1e-15);
        assert!(spec[1..].iter().all(|l| l.abs() < 1e-15));

        // Closed form across a beta grid: one eigenvalue (1-b)/2^n + b, the
        // rest (1-b)/2^n.
        for k in 0..=100 {
            let beta = k as f64 / 100.0;
            let x = XState::ghz_white_noise(4, beta).unwrap();
            let spec = x.spectrum();
            let small = (1.0 - beta) / 16.0;
            assert!((spec[0] - (small + beta)).abs() < 1e-14);
            for &l in &spec[1..] {
                assert!((l - small).abs() < 1e-14);
            }
        }

        assert!(matches!(
            XState::ghz_white_noise(3, 1.5),
            Err(Error::BadBeta { .. })
        ));
        assert!(matches!(
            XState::ghz_white_noise(1, 0.5),
            Err(Error::BadArity { .. })
        ));
    }

    #[test]
    fn ghz_marginals_are_maximally_mixed() {
        let x = XState::ghz_white_noise(3, 0.6).unwrap();
        for q in 1..=3 {
            let m = x.marginal(q).unwrap();
            assert!((m.get(0, 0).re - 0.5).abs() < 1e-12);
            assert!((m.get(1, 1).re - 0.5).abs() < 1e-12);
            assert!(m.get(0, 1).norm() < 1e-15);
        }
    }

    #[test]
    fn dephase_is_idempotent_and_preserves_marginals() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let x = XState::random(3, &mut rng);
            let tau = x.dephased();
            assert_eq!(tau.dephased(), tau);
            assert_eq!(tau.diag(), x.diag());
            for q in 1..=3 {
                let a = x.marginal(q).unwrap();
                let b = tau.marginal(q).unwrap();
                assert!(a.max_abs_diff(&b) < 1e-12);
            }
        }
    }

    #[test]
    fn dephase_bell_diagonal() {
        let x = XState::bell_diagonal(0.5, 0.3, 0.1).unwrap();
        let tau = x.dephased();
        let want = [1.1 / 4.0, 0.9 / 4.0, 0.9 / 4.0, 1.1 / 4.0];
        for (d, w) in tau.diag().iter().zip(&want) {
            assert!((d - w).abs() < 1e-15);
        }
        assert!(tau.is_incoherent());
    }

    #[test]
    fn incoherent_spectrum_is_the_sorted_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let x = XState::random_incoherent(3, &mut rng);
        let mut want = x.diag().to_vec();
        want.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (got, want) in x.spectrum().iter().zip(&want) {
            assert_eq!(got, want);
        }
    }

    #[test]
    fn spectrum_matches_dense_eigensolver() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in [2usize, 3, 4] {
            for _ in 0..30 {
                let x = XState::random(n, &mut rng);
                let fast = x.spectrum();
                let dense = eig_hermitian(x.to_dense().matrix()).unwrap();
                for (a, b) in fast.iter().zip(dense.eigenvalues()) {
                    assert!((a - b).abs() < 1e-10, "n={n} {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn counterexample_states_round_trip() {
        let [r1, _, _] = three_qubit_counterexamples();
        let dense = r1.to_dense();
        for i in 0..8 {
            assert!((dense.matrix().get(i, i).re - r1.diag()[i]).abs() < 1e-15);
        }
        // Read the dense diagonal back into an X state.
        let back = XState::new(
            3,
            (0..8).map(|i| dense.matrix().get(i, i).re).collect(),
            vec![Complex64::new(0.0, 0.0); 4],
        )
        .unwrap();
        assert_eq!(back, r1.dephased());
    }

    #[test]
    fn dense_density_matrix_validation() {
        let x = XState::random(2, &mut ChaCha8Rng::seed_from_u64(9));
        let dm = DensityMatrix::new(2, x.to_dense().matrix().clone()).unwrap();
        assert_eq!(dm.n(), 2);

        let mut bad = x.to_dense().matrix().clone();
        bad.set(0, 1, Complex64::new(0.9, 0.0));
        assert!(DensityMatrix::new(2, bad).is_err());
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in [1usize, 2, 3, 4] {
            for _ in 0..50 {
                let x = XState::random(n, &mut rng);
                x.validate().unwrap();
                let spec = x.spectrum();
                assert!(spec.iter().all(|l| *l >= -1e-12));
                let inc = XState::random_incoherent(n, &mut rng);
                assert!(inc.is_incoherent());
            }
        }
    }
}
