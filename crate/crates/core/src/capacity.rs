//! The battery capacity functional, its dephasing lower bound, and the
//! Schur-convexity check.
//!
//! For a state spectrum `l` and Hamiltonian spectrum `e`, both sorted
//! descending, the capacity is `sum_i l_i (e_i - e_{d-1-i})` - the
//! anti-ordered pairing of populations with energy levels. It is invariant
//! under any unitary evolution of the state.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonians::BatteryHamiltonian;
use crate::matops::is_majorized;
use crate::states::BatteryState;

/// Absolute tolerance used by every capacity comparison; the quantities here
/// are O(1) in the chosen units.
pub const CAPACITY_TOL: f64 = 1e-10;
/// The two algebraic forms of the capacity sum must agree this tightly.
const FORM_TOL: f64 = 1e-12;

/// A non-negative capacity in the energy units of the Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct CapacityValue(f64);

impl CapacityValue {
    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for CapacityValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn check_descending(values: &[f64]) -> Result<()> {
    use std::cmp::Ordering;
    for i in 1..values.len() {
        // NaN is incomparable and rejected along with ascending runs.
        match values[i].partial_cmp(&values[i - 1]) {
            Some(Ordering::Less | Ordering::Equal) => {}
            _ => return Err(Error::NotSorted { index: i }),
        }
    }
    Ok(())
}

/// Capacity from pre-sorted spectra. Both inputs must be descending (the sum
/// is order-sensitive, so misordered input is rejected rather than silently
/// sorted) and the populations must sum to 1 within 1e-10. Both algebraic
/// forms of the sum are evaluated and cross-checked.
pub fn capacity(lambda: &[f64], eps: &[f64]) -> Result<CapacityValue> {
    if lambda.len() != eps.len() {
        return Err(Error::LengthMismatch {
            left: lambda.len(),
            right: eps.len(),
        });
    }
    check_descending(lambda)?;
    check_descending(eps)?;
    let total: f64 = lambda.iter().sum();
    if (total - 1.0).abs() > CAPACITY_TOL {
        return Err(Error::BadNormalization { sum: total });
    }

    let d = lambda.len();
    let mut by_energy = 0.0;
    let mut by_population = 0.0;
    for i in 0..d {
        by_energy += eps[i] * (lambda[i] - lambda[d - 1 - i]);
        by_population += lambda[i] * (eps[i] - eps[d - 1 - i]);
    }
    let delta = (by_energy - by_population).abs();
    if delta > FORM_TOL {
        return Err(Error::FormMismatch { delta });
    }
    if by_population < -FORM_TOL {
        return Err(Error::NegativeCapacity { value: by_population });
    }
    Ok(CapacityValue(by_population.max(0.0)))
}

/// Capacity of a state under a battery Hamiltonian, composing the state's
/// spectrum with the Hamiltonian's closed-form spectrum.
pub fn capacity_of<S: BatteryState>(rho: &S, h: &BatteryHamiltonian) -> Result<CapacityValue> {
    if rho.qubit_count() != h.n() {
        return Err(Error::QubitMismatch {
            state: rho.qubit_count(),
            hamiltonian: h.n(),
        });
    }
    capacity(&rho.spectrum_descending()?, &h.spectrum())
}

/// Capacity of the dephased state: a universal lower bound on the capacity
/// of `rho` that needs only the diagonal.
pub fn capacity_lower_bound<S: BatteryState>(
    rho: &S,
    h: &BatteryHamiltonian,
) -> Result<CapacityValue> {
    capacity_of(&rho.dephased_state(), h)
}

/// Outcome of comparing two states through majorization.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SchurPairReport {
    /// Whether `spectrum(rho)` is majorized by `spectrum(varrho)`.
    pub majorized: bool,
    pub c_rho: CapacityValue,
    pub c_varrho: CapacityValue,
}

/// Reports majorization between the two spectra and both capacities. The
/// capacity is Schur-convex, so `majorized` implies `c_rho <= c_varrho`
/// within tolerance; a violation is reported as an error because it can only
/// arise from a numerical defect.
pub fn schur_pair_check<R: BatteryState, V: BatteryState>(
    rho: &R,
    varrho: &V,
    h: &BatteryHamiltonian,
) -> Result<SchurPairReport> {
    let spec_rho = rho.spectrum_descending()?;
    let spec_varrho = varrho.spectrum_descending()?;
    if spec_rho.len() != spec_varrho.len() {
        return Err(Error::LengthMismatch {
            left: spec_rho.len(),
            right: spec_varrho.len(),
        });
    }
    let majorized = is_majorized(&spec_rho, &spec_varrho, CAPACITY_TOL)?;
    let c_rho = capacity(&spec_rho, &h.spectrum())?;
    let c_varrho = capacity(&spec_varrho, &h.spectrum())?;
    if majorized && c_rho.value() > c_varrho.value() + CAPACITY_TOL {
        return Err(Error::SchurViolation {
            c_rho: c_rho.value(),
            c_varrho: c_varrho.value(),
        });
    }
    Ok(SchurPairReport {
        majorized,
        c_rho,
        c_varrho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{three_qubit_counterexamples, XState};
    use num_complex::Complex64;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn maximally_mixed_has_zero_capacity() {
        let lambda = vec![0.25; 4];
        let eps = vec![0.8, 0.2, -0.2, -0.8];
        assert_eq!(capacity(&lambda, &eps).unwrap().value(), 0.0);
    }

    #[test]
    fn pure_state_spans_the_full_gap() {
        let lambda = [1.0, 0.0, 0.0, 0.0];
        let eps = [0.8, 0.2, -0.2, -0.8];
        let c = capacity(&lambda, &eps).unwrap().value();
        assert!((c - 1.6).abs() < 1e-15);
    }

    #[test]
    fn rejects_misordered_or_mismatched_input() {
        let eps = [0.8, 0.2, -0.2, -0.8];
        assert!(matches!(
            capacity(&[0.1, 0.4, 0.3, 0.2], &eps),
            Err(Error::NotSorted { .. })
        ));
        assert!(matches!(
            capacity(&[0.5, 0.5], &eps),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            capacity(&[0.5, 0.4, 0.3, 0.2], &eps),
            Err(Error::BadNormalization { .. })
        ));
    }

    #[test]
    fn lifted_qubit_capacity_under_a_local_term() {
        // diag((1+b)/2, (1-b)/2) under a local energy of 0.1 stores 0.2 b.
        for beta in [0.0, 0.25, 0.6, 1.0] {
            let lambda = [(1.0 + beta) / 2.0, (1.0 - beta) / 2.0];
            let c = capacity(&lambda, &[0.1, -0.1]).unwrap().value();
            assert!((c - 0.2 * beta).abs() < 1e-15);
        }
    }

    #[test]
    fn first_counterexample_state_capacity() {
        // C = (32 eA + 16 eB + 8 eC) / 36 at gamma = 0.
        let [r1, _, _] = three_qubit_counterexamples();
        for (ea, eb, ec) in [(0.5, 0.3, 0.1), (1.0, 0.5, 0.25), (0.7, 0.7, 0.0)] {
            let h = BatteryHamiltonian::new(vec![ea, eb, ec], 0.0).unwrap();
            let want = (32.0 * ea + 16.0 * eb + 8.0 * ec) / 36.0;
            let got = capacity_of(&r1, &h).unwrap().value();
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn ghz_capacity_closed_form() {
        for n in 2..=5usize {
            for beta in [0.0, 0.3, 0.7, 1.0] {
                for gamma in [0.0, 0.5, 1.2] {
                    let x = XState::ghz_white_noise(n, beta).unwrap();
                    let h = BatteryHamiltonian::with_default_energies(n, gamma).unwrap();
                    let esum = 0.6 + 0.1 * n as f64;
                    let want = 2.0 * beta * (esum * esum + gamma * gamma).sqrt();
                    let got = capacity_of(&x, &h).unwrap().value();
                    assert!((got - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn bell_diagonal_capacity_closed_form() {
        let (a1, a2, a3) = (0.5, 0.3, 0.1);
        let x = XState::bell_diagonal(a1, a2, a3).unwrap();
        for (ea, eb, g) in [(0.5, 0.3, 0.0), (1.0, 0.2, 0.4), (0.6, 0.6, 1.0)] {
            let h = BatteryHamiltonian::new(vec![ea, eb], g).unwrap();
            let hi = ((ea + eb).powi(2) + g * g).sqrt();
            let lo = ((ea - eb).powi(2) + g * g).sqrt();
            let want = (a1 + a2) * hi + (a1 - a2) * lo;
            let got = capacity_of(&x, &h).unwrap().value();
            assert!((got - want).abs() < 1e-12);

            let want_dephased = a3 * (hi + lo);
            let got_dephased = capacity_lower_bound(&x, &h).unwrap().value();
            assert!((got_dephased - want_dephased).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_spectra_are_tie_break_stable() {
        // Highly degenerate state (7 equal eigenvalues): whatever order the
        // eigensolver leaves ties in, the capacity matches the closed form.
        for beta in [0.0, 0.5, 1.0] {
            let x = XState::ghz_white_noise(3, beta).unwrap();
            for gamma in [0.0, 0.7] {
                let h = BatteryHamiltonian::with_default_energies(3, gamma).unwrap();
                let fast = capacity_of(&x, &h).unwrap().value();
                let dense = capacity_of(&x.to_dense(), &h).unwrap().value();
                assert!((fast - dense).abs() < 1e-10);
                let want = 2.0 * beta * (0.81 + gamma * gamma).sqrt();
                assert!((fast - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_and_dense_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for n in [2usize, 3] {
            for _ in 0..30 {
                let x = XState::random(n, &mut rng);
                let mut eps: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
                eps.sort_by(|a, b| b.partial_cmp(a).unwrap());
                let h = BatteryHamiltonian::new(eps, rng.random_range(0.0..2.0)).unwrap();
                let fast = capacity_of(&x, &h).unwrap().value();
                let dense = capacity_of(&x.to_dense(), &h).unwrap().value();
                assert!((fast - dense).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn lower_bound_is_a_lower_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for _ in 0..200 {
            let n = rng.random_range(1..=3);
            let x = XState::random(n, &mut rng);
            let mut eps: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
            eps.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let h = BatteryHamiltonian::new(eps, rng.random_range(0.0..2.0)).unwrap();
            let c = capacity_of(&x, &h).unwrap().value();
            let ld = capacity_lower_bound(&x, &h).unwrap().value();
            assert!(ld <= c + CAPACITY_TOL);
        }
    }

    #[test]
    fn incoherent_state_equals_its_lower_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let x = XState::random_incoherent(3, &mut rng);
        let h = BatteryHamiltonian::with_default_energies(3, 0.4).unwrap();
        let c = capacity_of(&x, &h).unwrap().value();
        let ld = capacity_lower_bound(&x, &h).unwrap().value();
        assert_eq!(c, ld);
    }

    #[test]
    fn schur_pair_trivial_and_dephased() {
        let x = XState::bell_diagonal(0.5, 0.3, 0.1).unwrap();
        let h = BatteryHamiltonian::new(vec![0.5, 0.3], 0.2).unwrap();

        let same = schur_pair_check(&x, &x, &h).unwrap();
        assert!(same.majorized);
        assert_eq!(same.c_rho.value(), same.c_varrho.value());

        // The dephased state is majorized by the original.
        let report = schur_pair_check(&x.dephased(), &x, &h).unwrap();
        assert!(report.majorized);
        assert!(report.c_rho.value() <= report.c_varrho.value() + CAPACITY_TOL);
    }

    #[test]
    fn schur_pair_doubly_stochastic_construction() {
        // Mixing a spectrum through an average of permutations produces a
        // majorized spectrum; the capacity must not increase.
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..100 {
            let n = 2usize;
            let dim = 1usize << n;
            let y = XState::random_incoherent(n, &mut rng);
            let mut y_sorted = y.diag().to_vec();
            y_sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());

            let mut x_diag = vec![0.0; dim];
            let k = 3;
            for _ in 0..k {
                let mut images: Vec<usize> = (0..dim).collect();
                images.shuffle(&mut rng);
                for (i, &img) in images.iter().enumerate() {
                    x_diag[img] += y_sorted[i] / k as f64;
                }
            }
            x_diag.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let x = XState::new_unchecked(n, x_diag, vec![Complex64::new(0.0, 0.0); dim / 2]);

            let h = BatteryHamiltonian::new(vec![0.5, 0.3], rng.random_range(0.0..1.0)).unwrap();
            let report = schur_pair_check(&x, &y, &h).unwrap();
            assert!(report.majorized);
            assert!(report.c_rho.value() <= report.c_varrho.value() + CAPACITY_TOL);
        }
    }

    #[test]
    fn unitary_invariance_under_permutations() {
        use crate::matops::{conjugate_by_permutation, Permutation};
        use crate::states::DensityMatrix;

        let mut rng = ChaCha8Rng::seed_from_u64(79);
        let x = XState::random(2, &mut rng);
        let h = BatteryHamiltonian::new(vec![0.9, 0.4], 0.3).unwrap();
        let base = capacity_of(&x, &h).unwrap().value();
        for _ in 0..20 {
            let mut images: Vec<usize> = (0..4).collect();
            images.shuffle(&mut rng);
            let perm = Permutation::from_images(images).unwrap();
            let moved = conjugate_by_permutation(x.to_dense().matrix(), &perm).unwrap();
            let moved = DensityMatrix::new(2, moved).unwrap();
            let c = capacity_of(&moved, &h).unwrap().value();
            assert!((c - base).abs() < 1e-10);
        }
    }
}
