//! Battery Hamiltonians: a local `eps_i * sigma_z` term on every qubit plus a
//! global `gamma * sigma_x^(x n)` interaction, their closed-form spectra, and
//! the restricted Hamiltonians used for marginal capacities.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matops::{kron, ComplexMatrix};

/// Local energies (descending, non-negative) plus the interaction strength.
#[derive(Clone, Debug, PartialEq)]
pub struct BatteryHamiltonian {
    eps: Vec<f64>,
    gamma: f64,
}

impl BatteryHamiltonian {
    /// Validating constructor. The energies are required to be sorted
    /// descending rather than silently reordered: the subsystem labels carry
    /// meaning in every distribution statement.
    pub fn new(eps: Vec<f64>, gamma: f64) -> Result<Self> {
        if eps.is_empty() {
            return Err(Error::BadLength { expected: 1, got: 0 });
        }
        if eps.iter().any(|e| !e.is_finite()) || !gamma.is_finite() {
            return Err(Error::NonFinite { context: "Hamiltonian parameters" });
        }
        for i in 0..eps.len() {
            if eps[i] < 0.0 || (i + 1 < eps.len() && eps[i] < eps[i + 1]) {
                return Err(Error::BadLocalEnergies { index: i });
            }
        }
        if gamma < 0.0 {
            return Err(Error::NegativeGamma { gamma });
        }
        Ok(Self { eps, gamma })
    }

    /// The default energy assignment used throughout the worked examples:
    /// 0.5 for the first qubit, 0.3 for the second, 0.1 for the rest.
    pub fn default_energies(n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| match i {
                0 => 0.5,
                1 => 0.3,
                _ => 0.1,
            })
            .collect()
    }

    /// `new(default_energies(n), gamma)`.
    pub fn with_default_energies(n: usize, gamma: f64) -> Result<Self> {
        Self::new(Self::default_energies(n), gamma)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.eps.len()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        1usize << self.eps.len()
    }

    pub fn eps(&self) -> &[f64] {
        &self.eps
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Same energies, different interaction strength.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.eps.clone(), gamma)
    }

    /// Dense matrix `sum_i eps_i sigma_z^(i) + gamma sigma_x^(x n)`, built
    /// via tensor products.
    pub fn build(&self) -> ComplexMatrix {
        let n = self.n();
        let i2 = ComplexMatrix::identity(2);
        let sz = pauli_z();
        let sx = pauli_x();

        let mut total = ComplexMatrix::zeros(self.dim());
        for site in 0..n {
            let mut term = if site == 0 {
                sz.scale(Complex64::new(self.eps[0], 0.0))
            } else {
                i2.clone()
            };
            for k in 1..n {
                let factor = if k == site {
                    sz.scale(Complex64::new(self.eps[site], 0.0))
                } else {
                    i2.clone()
                };
                term = kron(&term, &factor);
            }
            total = total.add(&term).expect("equal dims");
        }

        let mut interaction = sx.clone();
        for _ in 1..n {
            interaction = kron(&interaction, &sx);
        }
        total
            .add(&interaction.scale(Complex64::new(self.gamma, 0.0)))
            .expect("equal dims")
    }

    /// Closed-form spectrum, sorted descending. Each basis string `b` pairs
    /// with its bitwise complement into a 2x2 block with eigenvalues
    /// `+- sqrt(E_b^2 + gamma^2)`, where `E_b = sum_i eps_i (-1)^(b_i)`.
    pub fn spectrum(&self) -> Vec<f64> {
        let n = self.n();
        let half = 1usize << (n - 1);
        let mut out = Vec::with_capacity(1usize << n);
        for b in 0..half {
            let mut e = 0.0;
            for (site, &eps) in self.eps.iter().enumerate() {
                let bit = (b >> (n - 1 - site)) & 1;
                e += if bit == 0 { eps } else { -eps };
            }
            let level = (e * e + self.gamma * self.gamma).sqrt();
            out.push(level);
            out.push(-level);
        }
        out.sort_by(|a, b| b.partial_cmp(a).expect("finite levels"));
        out
    }

    /// Restriction to the qubits in `keep` (1-based, ascending). The
    /// interaction is kept only when requested for the full set; every
    /// strict-subset restriction is interaction-free, which is the reading
    /// used by all marginal-capacity computations here.
    pub fn subsystem(&self, keep: &[usize], include_interaction: bool) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::BadIndex { index: 0 });
        }
        let mut prev = 0usize;
        for &q in keep {
            if q == 0 || q > self.n() || q <= prev {
                return Err(Error::BadIndex { index: q });
            }
            prev = q;
        }
        let eps: Vec<f64> = keep.iter().map(|&q| self.eps[q - 1]).collect();
        let gamma = if include_interaction && keep.len() == self.n() {
            self.gamma
        } else {
            0.0
        };
        Self::new(eps, gamma)
    }
}

/// 2x2 local term `diag(eps, -eps)`.
pub fn local_hamiltonian(eps: f64) -> Result<ComplexMatrix> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::BadLocalEnergies { index: 0 });
    }
    Ok(ComplexMatrix::diagonal(&[eps, -eps]))
}

pub(crate) fn pauli_x() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2);
    m.set(0, 1, Complex64::new(1.0, 0.0));
    m.set(1, 0, Complex64::new(1.0, 0.0));
    m
}

pub(crate) fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[1.0, -1.0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matops::eig_hermitian;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_hamiltonian(n: usize, rng: &mut ChaCha8Rng) -> BatteryHamiltonian {
        let mut eps: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        eps.sort_by(|a, b| b.partial_cmp(a).unwrap());
        BatteryHamiltonian::new(eps, rng.random_range(0.0..2.0)).unwrap()
    }

    /// Independent assembly: diagonal from bit parities, interaction on the
    /// anti-diagonal.
    fn assemble_directly(h: &BatteryHamiltonian) -> ComplexMatrix {
        let n = h.n();
        let dim = 1usize << n;
        let mut m = ComplexMatrix::zeros(dim);
        for b in 0..dim {
            let mut e = 0.0;
            for (site, &eps) in h.eps().iter().enumerate() {
                let bit = (b >> (n - 1 - site)) & 1;
                e += if bit == 0 { eps } else { -eps };
            }
            m.set(b, b, Complex64::new(e, 0.0));
            m.add_assign_entry(b, dim - 1 - b, Complex64::new(h.gamma(), 0.0));
        }
        m
    }

    #[test]
    fn two_qubit_matrix_matches_displayed_form() {
        let h = BatteryHamiltonian::new(vec![0.5, 0.3], 0.7).unwrap();
        let m = h.build();
        let diag = [0.8, 0.2, -0.2, -0.8];
        for (i, &want) in diag.iter().enumerate() {
            assert!((m.get(i, i).re - want).abs() < 1e-15);
            assert!((m.get(i, 3 - i).re - 0.7).abs() < 1e-15);
        }
        assert!(m.get(0, 1).norm() < 1e-15);
        assert!(m.get(1, 3).norm() < 1e-15);
    }

    #[test]
    fn zero_interaction_is_diagonal() {
        let h = BatteryHamiltonian::new(vec![0.5, 0.3, 0.1], 0.0).unwrap();
        let m = h.build();
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    assert!(m.get(i, j).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn build_matches_independent_assembly() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for n in [2usize, 3, 4] {
            for _ in 0..20 {
                let h = random_hamiltonian(n, &mut rng);
                assert!(h.build().max_abs_diff(&assemble_directly(&h)) < 1e-14);
            }
        }
    }

    #[test]
    fn two_qubit_spectrum_closed_form() {
        let (ea, eb, g) = (0.5, 0.3, 0.4);
        let h = BatteryHamiltonian::new(vec![ea, eb], g).unwrap();
        let spec = h.spectrum();
        let hi = ((ea + eb).powi(2) + g * g).sqrt();
        let lo = ((ea - eb).powi(2) + g * g).sqrt();
        let want = [hi, lo, -lo, -hi];
        for (s, w) in spec.iter().zip(&want) {
            assert!((s - w).abs() < 1e-14);
        }
    }

    #[test]
    fn three_qubit_spectrum_closed_form() {
        let (ea, eb, ec, g) = (0.5, 0.3, 0.1, 0.25);
        let h = BatteryHamiltonian::new(vec![ea, eb, ec], g).unwrap();
        let mut want: Vec<f64> = Vec::new();
        for e in [ea + eb + ec, ea + eb - ec, ea - eb + ec, ea - eb - ec] {
            let level = (e * e + g * g).sqrt();
            want.push(level);
            want.push(-level);
        }
        want.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (s, w) in h.spectrum().iter().zip(&want) {
            assert!((s - w).abs() < 1e-14);
        }
    }

    #[test]
    fn closed_form_matches_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for n in 2..=5usize {
            for _ in 0..20 {
                let h = random_hamiltonian(n, &mut rng);
                let fast = h.spectrum();
                let dense = eig_hermitian(&h.build()).unwrap();
                for (a, b) in fast.iter().zip(dense.eigenvalues()) {
                    assert!((a - b).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn spectrum_is_symmetric_about_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let h = random_hamiltonian(4, &mut rng);
        let spec = h.spectrum();
        let d = spec.len();
        for i in 0..d {
            assert_eq!(spec[i], -spec[d - 1 - i]);
        }
    }

    #[test]
    fn interaction_free_spectrum_is_bit_parity_multiset() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for n in 2..=5usize {
            let mut h = random_hamiltonian(n, &mut rng);
            h = h.with_gamma(0.0).unwrap();
            let dim = 1usize << n;
            let mut want: Vec<f64> = (0..dim)
                .map(|b| {
                    let mut e = 0.0;
                    for (site, &eps) in h.eps().iter().enumerate() {
                        let bit = (b >> (n - 1 - site)) & 1;
                        e += if bit == 0 { eps } else { -eps };
                    }
                    e
                })
                .collect();
            want.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (s, w) in h.spectrum().iter().zip(&want) {
                assert!((s - w).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn subsystem_restriction() {
        let h = BatteryHamiltonian::new(vec![0.5, 0.3, 0.1], 0.7).unwrap();
        let full = h.subsystem(&[1, 2, 3], true).unwrap();
        assert_eq!(full, h);
        let pair = h.subsystem(&[1, 2], true).unwrap();
        assert_eq!(pair.eps(), &[0.5, 0.3]);
        assert_eq!(pair.gamma(), 0.0);
        let single = h.subsystem(&[3], false).unwrap();
        assert_eq!(single.eps(), &[0.1]);
        let dropped = h.subsystem(&[1, 2, 3], false).unwrap();
        assert_eq!(dropped.gamma(), 0.0);
        assert!(h.subsystem(&[2, 1], false).is_err());
        assert!(h.subsystem(&[4], false).is_err());
    }

    #[test]
    fn local_term() {
        assert!(local_hamiltonian(0.0).unwrap().max_abs_diff(&ComplexMatrix::zeros(2)) == 0.0);
        let m = local_hamiltonian(0.5).unwrap();
        assert_eq!(m.get(0, 0).re, 0.5);
        assert_eq!(m.get(1, 1).re, -0.5);
        assert!(local_hamiltonian(-0.1).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(BatteryHamiltonian::new(vec![0.3, 0.5], 0.0).is_err());
        assert!(BatteryHamiltonian::new(vec![0.5, -0.1], 0.0).is_err());
        assert!(BatteryHamiltonian::new(vec![0.5], -1.0).is_err());
        assert!(BatteryHamiltonian::new(vec![], 0.0).is_err());
    }
}
