//! Coherence and entanglement measures. Entropies are in bits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::qmat::{
    clamp_psd, hermitian_eigen, hermitian_eigenvalues, kron, psd_sqrt, PauliOperator, SquareMatrix,
};
use crate::scalar::{Real, C};
use crate::states::{x_state_deviation, DensityMatrix};

/// Drops every off-diagonal entry: `ρ_d = Σ ρ_ii |i><i|`.
pub fn dephase<T: Real>(rho: &DensityMatrix<T>) -> DensityMatrix<T> {
    let diag = rho.populations();
    let m = SquareMatrix::from_real_diagonal(&diag).expect("finite diagonal");
    DensityMatrix::new_unchecked(m)
}

/// `−Σ λ log₂ λ` with `0 log 0 = 0`.
fn entropy_of_spectrum<T: Real>(eigenvalues: &[T]) -> Result<T> {
    let mut s = T::zero();
    for &l in eigenvalues {
        let l = clamp_psd(l)?;
        if l > T::zero() {
            s = s - l * l.log2();
        }
    }
    Ok(s)
}

pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    entropy_of_spectrum(&hermitian_eigenvalues(rho.matrix())?.eigenvalues)
}

/// Relative entropy `S(ρ‖σ)`, or an explicit infinite marker when the support
/// of ρ is not contained in that of σ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelativeEntropy<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> RelativeEntropy<T> {
    pub fn value(self) -> T {
        match self {
            RelativeEntropy::Finite(v) => v,
            RelativeEntropy::Infinite => T::infinity(),
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, RelativeEntropy::Infinite)
    }
}

fn is_diagonal<T: Real>(m: &SquareMatrix<T>) -> bool {
    (0..m.dim()).all(|i| (0..m.dim()).all(|j| i == j || m.get(i, j) == C::new(T::zero(), T::zero())))
}

/// `S(ρ‖σ) = Tr ρ log₂ ρ − Tr ρ log₂ σ`.
pub fn relative_entropy<T: Real>(
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
) -> Result<RelativeEntropy<T>> {
    let support_tol = T::lit(T::PSD_CLAMP);
    let neg_entropy = -von_neumann_entropy(rho)?;

    // Tr ρ log₂ σ, summed over the eigenbasis of σ.
    let terms: Vec<(T, T)> = if is_diagonal(sigma.matrix()) {
        let s = sigma.populations();
        rho.populations().into_iter().zip(s).collect()
    } else {
        let eig = hermitian_eigen(sigma.matrix())?;
        (0..4)
            .map(|k| {
                let v = eig.vector(k);
                let m = rho.matrix();
                let mut w = C::new(T::zero(), T::zero());
                for i in 0..4 {
                    for j in 0..4 {
                        w = w + v[i].conj() * m.get(i, j) * v[j];
                    }
                }
                (w.re, eig.values[k])
            })
            .collect()
    };

    let mut cross = T::zero();
    for (weight, lambda) in terms {
        if weight <= support_tol {
            continue;
        }
        if lambda <= support_tol {
            return Ok(RelativeEntropy::Infinite);
        }
        cross = cross + weight * lambda.log2();
    }
    let d = neg_entropy - cross;
    let clamp = T::lit(T::REQC_CLAMP);
    Ok(RelativeEntropy::Finite(if d < T::zero() && d >= -clamp {
        T::zero()
    } else {
        d
    }))
}

/// Relative entropy of coherence, closed form `S(ρ_d) − S(ρ)`.
pub fn reqc<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let v = von_neumann_entropy(&dephase(rho))? - von_neumann_entropy(rho)?;
    let clamp = T::lit(T::REQC_CLAMP);
    Ok(if v < T::zero() && v >= -clamp { T::zero() } else { v })
}

/// The four values `ε₁ ≥ ε₂ ≥ ε₃ ≥ ε₄ ≥ 0` whose square roots enter the
/// concurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceSpectrum<T> {
    pub eps: [T; 4],
}

impl<T: Real> ConcurrenceSpectrum<T> {
    pub fn concurrence(&self) -> T {
        let s = self.eps.map(|e| e.sqrt());
        (s[0] - s[1] - s[2] - s[3]).max(T::zero())
    }
}

/// Spin-flip operator σ_y ⊗ σ_y.
pub fn spin_flip<T: Real>() -> SquareMatrix<T> {
    let y = PauliOperator::Y.matrix();
    kron(&y, &y).expect("2x2 factors")
}

/// Spectrum of `R = ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`, obtained from the Hermitian
/// matrix `√ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y) √ρ`, which has the same eigenvalues.
pub fn concurrence_spectrum<T: Real>(rho: &DensityMatrix<T>) -> Result<ConcurrenceSpectrum<T>> {
    let sqrt_rho = psd_sqrt(rho.matrix())?;
    let yy = spin_flip();
    let flipped = &(&yy * &rho.matrix().conj()) * &yy;
    let m = &(&sqrt_rho * &flipped) * &sqrt_rho;
    let ev = hermitian_eigenvalues(&m)?.eigenvalues;
    let mut eps = [T::zero(); 4];
    for (e, &l) in eps.iter_mut().zip(&ev) {
        *e = clamp_psd(l)?;
    }
    Ok(ConcurrenceSpectrum { eps })
}

/// Concurrence of an arbitrary two-qubit state.
pub fn concurrence_general<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    Ok(concurrence_spectrum(rho)?.concurrence().min(T::one()))
}

/// Concurrence of an X-state from its seven X entries:
/// `2 max{0, |ρ₂₃| − √(ρ₁₁ρ₄₄), |ρ₁₄| − √(ρ₂₂ρ₃₃)}`.
pub fn concurrence_x<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let dev = x_state_deviation(rho);
    if dev > T::lit(T::X_STATE_TOL) {
        return Err(Error::NotXState {
            deviation: dev.as_f64(),
        });
    }
    let m = rho.matrix();
    let pop = rho.populations().map(|x| x.max(T::zero()));
    let a = m.get(1, 2).norm() - (pop[0] * pop[3]).sqrt();
    let b = m.get(0, 3).norm() - (pop[1] * pop[2]).sqrt();
    Ok((T::lit(2.0) * a.max(b).max(T::zero())).min(T::one()))
}

/// Diagonal (incoherent) state, given by its probability vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncoherentState<T> {
    pub diag: [T; 4],
}

impl<T: Real> IncoherentState<T> {
    pub fn new(diag: [T; 4]) -> Result<Self> {
        let sum: T = diag.iter().copied().sum();
        if diag.iter().any(|&x| !(x >= T::zero())) || (sum - T::one()).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(8.0)) {
            return Err(Error::Domain {
                name: "incoherent state sum",
                value: sum.as_f64(),
                range: "probability simplex",
            });
        }
        Ok(Self { diag })
    }

    /// Uniform draw from the probability simplex via normalized exponential
    /// spacings.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let e: [f64; 4] = std::array::from_fn(|_| rng.sample(Exp1));
        let total: f64 = e.iter().sum();
        Self {
            diag: e.map(|x| T::lit(x / total)),
        }
    }

    pub fn to_density(self) -> DensityMatrix<T> {
        DensityMatrix::new_unchecked(
            SquareMatrix::from_real_diagonal(&self.diag).expect("finite diagonal"),
        )
    }
}

/// Outcome of sampling the incoherent-state minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalCheck<T> {
    /// Minimum over the random samples and the dephased state.
    pub min_sampled: T,
    /// Minimum over the random samples alone.
    pub min_random: T,
    /// `S(ρ‖ρ_d)`.
    pub at_dephased: T,
    /// `S(ρ_d) − S(ρ)`.
    pub closed_form: T,
}

impl<T: Real> VariationalCheck<T> {
    /// Sampling never undercuts the closed form, and the dephased state
    /// attains it.
    pub fn holds(&self, tol: T) -> bool {
        self.min_sampled >= self.closed_form - tol
            && self.min_random >= self.closed_form - tol
            && (self.at_dephased - self.closed_form).abs() <= tol
    }
}

pub fn variational_reqc_check<T: Real>(
    rho: &DensityMatrix<T>,
    n_samples: usize,
    seed: u64,
) -> Result<VariationalCheck<T>> {
    let closed_form = reqc(rho)?;
    let at_dephased = relative_entropy(rho, &dephase(rho))?.value();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_random = T::infinity();
    for _ in 0..n_samples {
        let sigma = IncoherentState::sample(&mut rng).to_density();
        min_random = min_random.min(relative_entropy(rho, &sigma)?.value());
    }
    Ok(VariationalCheck {
        min_sampled: min_random.min(at_dephased),
        min_random,
        at_dephased,
        closed_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, re};
    use crate::states::{singlet, werner_state};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn dephase_examples() {
        let mixed = DensityMatrix::<f64>::maximally_mixed();
        assert_eq!(dephase(&mixed), mixed);
        let d = dephase(&singlet::<f64>());
        let want = SquareMatrix::from_real_diagonal(&[0.0, 0.5, 0.5, 0.0]).unwrap();
        assert_eq!(d.matrix(), &want);
        let r = 0.42;
        let d = dephase(&werner_state(r).unwrap());
        let q = [(1.0 - r) / 4.0, (1.0 + r) / 4.0, (1.0 + r) / 4.0, (1.0 - r) / 4.0];
        assert_eq!(d.populations(), q);
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&singlet::<f64>()).unwrap().abs() < 1e-12);
        let mixed = DensityMatrix::<f64>::maximally_mixed();
        assert!(close(von_neumann_entropy(&mixed).unwrap(), 2.0, 1e-14));
        let want = -0.625 * 0.625f64.log2() - 3.0 * 0.125 * 0.125f64.log2();
        let got = von_neumann_entropy(&werner_state(0.5).unwrap()).unwrap();
        assert!(close(got, want, 1e-12));
        assert!(close(got, 1.54879, 1e-5));
    }

    #[test]
    fn reqc_examples() {
        assert_eq!(reqc(&DensityMatrix::<f64>::maximally_mixed()).unwrap(), 0.0);
        assert!(close(reqc(&singlet::<f64>()).unwrap(), 1.0, 1e-12));
        assert!(reqc(&werner_state(0.0f64).unwrap()).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn relative_entropy_examples() {
        let w = werner_state(0.3f64).unwrap();
        assert!(relative_entropy(&w, &w).unwrap().value().abs() < 1e-10);
        let s = singlet::<f64>();
        let v = relative_entropy(&s, &dephase(&s)).unwrap().value();
        assert!(close(v, 1.0, 1e-12));
    }

    #[test]
    fn relative_entropy_support_violation() {
        let sigma = SquareMatrix::from_real_diagonal(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        let sigma = DensityMatrix::new(sigma).unwrap();
        let r = relative_entropy(&singlet::<f64>(), &sigma).unwrap();
        assert!(r.is_infinite());
        assert_eq!(r.value(), f64::INFINITY);
        // non-diagonal sigma with a kernel that rho sees
        let r = relative_entropy(&DensityMatrix::maximally_mixed(), &singlet::<f64>()).unwrap();
        assert!(r.is_infinite());
    }

    #[test]
    fn concurrence_examples() {
        let mixed = DensityMatrix::<f64>::maximally_mixed();
        assert!(concurrence_general(&mixed).unwrap().abs() < 1e-12);
        assert!(close(concurrence_general(&singlet::<f64>()).unwrap(), 1.0, 1e-10));
        for r in [0.2, 1.0 / 3.0, 0.6, 1.0] {
            let want = ((3.0 * r - 1.0) / 2.0f64).max(0.0);
            let w = werner_state(r).unwrap();
            assert!(close(concurrence_general(&w).unwrap(), want, 1e-10), "r={r}");
            assert!(close(concurrence_x(&w).unwrap(), want, 1e-12), "r={r}");
        }
        assert_eq!(concurrence_x(&werner_state(1.0 / 3.0).unwrap()).unwrap(), 0.0);
        assert!(close(concurrence_x(&werner_state(0.6).unwrap()).unwrap(), 0.4, 1e-15));
        let diag = DensityMatrix::new(
            SquareMatrix::from_real_diagonal(&[0.1, 0.2, 0.3, 0.4]).unwrap(),
        )
        .unwrap();
        assert_eq!(concurrence_x(&diag).unwrap(), 0.0);
    }

    #[test]
    fn concurrence_x_rejects_non_x_state() {
        let m = DensityMatrix::<f64>::maximally_mixed()
            .into_matrix()
            .with_entry(0, 1, c(0.05, 0.02))
            .with_entry(1, 0, c(0.05, -0.02));
        let rho = DensityMatrix::new(m).unwrap();
        assert!(matches!(concurrence_x(&rho), Err(Error::NotXState { .. })));
        assert!(concurrence_general(&rho).is_ok());
    }

    #[test]
    fn concurrence_of_complex_bell_state() {
        // (|00> + i|11>)/√2 is maximally entangled
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = [re(h), re(0.0), re(0.0), c(0.0, h)];
        let rho = DensityMatrix::new(SquareMatrix::outer(&v, &v).unwrap()).unwrap();
        assert!(close(concurrence_general(&rho).unwrap(), 1.0, 1e-10));
        assert!(close(concurrence_x(&rho).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn incoherent_state_validation() {
        assert!(IncoherentState::new([0.25f64; 4]).is_ok());
        assert!(IncoherentState::new([0.5f64, 0.5, 0.5, -0.5]).is_err());
        assert!(IncoherentState::new([0.3f64; 4]).is_err());
    }

    #[test]
    fn variational_examples() {
        let mixed = DensityMatrix::<f64>::maximally_mixed();
        let chk = variational_reqc_check(&mixed, 100, 7).unwrap();
        assert!(chk.closed_form.abs() < 1e-12 && chk.min_sampled.abs() < 1e-12);

        let chk = variational_reqc_check(&singlet::<f64>(), 1000, 1).unwrap();
        assert!(close(chk.closed_form, 1.0, 1e-12));
        assert!(chk.min_sampled >= 1.0 - 1e-9);
        assert!(chk.holds(1e-9));

        let chk = variational_reqc_check(&werner_state(0.7).unwrap(), 1000, 3).unwrap();
        assert_eq!(chk.min_sampled, chk.at_dephased);
        assert!(chk.min_random > chk.at_dephased);
        assert!(chk.holds(1e-9));
    }

    #[test]
    fn variational_is_deterministic() {
        let w = werner_state(0.55).unwrap();
        let a = variational_reqc_check(&w, 50, 99).unwrap();
        let b = variational_reqc_check(&w, 50, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn f32_werner_measures() {
        let w = werner_state(0.8f32).unwrap();
        assert!((concurrence_general(&w).unwrap() - 0.7).abs() < 1e-4);
        assert!((concurrence_x(&w).unwrap() - 0.7).abs() < 1e-6);
        let q = reqc(&w).unwrap();
        let q64 = reqc(&werner_state(0.8f64).unwrap()).unwrap();
        assert!((q as f64 - q64).abs() < 1e-4);
    }
}
