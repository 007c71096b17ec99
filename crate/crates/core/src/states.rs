//! Two-qubit density matrices and the Werner family.

use crate::error::{Error, Result};
use crate::qmat::{hermitian_eigenvalues, SquareMatrix};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::scalar::{c, re, Real};

/// Validated 4×4 density matrix: Hermitian, unit trace, positive semidefinite
/// (eigenvalues at or above `-PSD_CLAMP`).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    matrix: SquareMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(matrix: SquareMatrix<T>) -> Result<Self> {
        Self::validate(&matrix)?;
        Ok(Self { matrix })
    }

    /// Skips validation. Only for states produced by maps that preserve
    /// validity analytically; callers re-check in debug builds.
    pub(crate) fn new_unchecked(matrix: SquareMatrix<T>) -> Self {
        Self { matrix }
    }

    pub fn validate(m: &SquareMatrix<T>) -> Result<()> {
        if m.dim() != 4 {
            return Err(Error::InvalidDimension {
                expected: "4x4 two-qubit state".into(),
                got: m.dim(),
            });
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let dev = m.hermitian_deviation();
        if dev > T::lit(T::HERM_TOL) {
            return Err(Error::NotHermitian {
                deviation: dev.as_f64(),
            });
        }
        let tr = m.trace().re;
        if (tr - T::one()).abs() > T::lit(T::TRACE_TOL) {
            return Err(Error::BadTrace { trace: tr.as_f64() });
        }
        let min = hermitian_eigenvalues(m)?.min();
        if min < -T::lit(T::PSD_CLAMP) {
            return Err(Error::NotPsd {
                eigenvalue: min.as_f64(),
            });
        }
        Ok(())
    }

    pub fn matrix(&self) -> &SquareMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> SquareMatrix<T> {
        self.matrix
    }

    /// Real parts of the diagonal (populations).
    pub fn populations(&self) -> [T; 4] {
        let d = self.matrix.diagonal();
        [d[0].re, d[1].re, d[2].re, d[3].re]
    }

    /// Maximally mixed state I₄/4.
    pub fn maximally_mixed() -> Self {
        let m = SquareMatrix::identity(4)
            .expect("4 is a valid dimension")
            .scale(T::lit(0.25));
        Self::new_unchecked(m)
    }

    /// Swaps qubits A and B (basis permutation |01> <-> |10>).
    pub fn swap_qubits(&self) -> Self {
        Self::new_unchecked(self.matrix.permute(&[0, 2, 1, 3]))
    }
}

/// Werner mixing parameter `r ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct WernerParameter<T>(T);

impl<T: Real> WernerParameter<T> {
    pub fn new(r: T) -> Result<Self> {
        if r >= T::zero() && r <= T::one() {
            Ok(Self(r))
        } else {
            Err(Error::Domain {
                name: "r",
                value: r.as_f64(),
                range: "[0, 1]",
            })
        }
    }

    pub fn value(self) -> T {
        self.0
    }
}

/// The singlet projector |ψ⁻><ψ⁻| with |ψ⁻> = (|01> − |10>)/√2.
pub fn singlet<T: Real>() -> DensityMatrix<T> {
    let half = T::lit(0.5);
    let m = SquareMatrix::zeros(4)
        .expect("4 is a valid dimension")
        .with_entry(1, 1, re(half))
        .with_entry(2, 2, re(half))
        .with_entry(1, 2, re(-half))
        .with_entry(2, 1, re(-half));
    DensityMatrix::new_unchecked(m)
}

/// `r |ψ⁻><ψ⁻| + (1 − r)/4 · I⊗I`, written entrywise.
pub fn werner<T: Real>(r: WernerParameter<T>) -> DensityMatrix<T> {
    let r = r.value();
    let quarter = T::lit(0.25);
    let outer = (T::one() - r) * quarter;
    let inner = (T::one() + r) * quarter;
    let coh = -r * T::lit(0.5);
    let m = SquareMatrix::from_real_diagonal(&[outer, inner, inner, outer])
        .expect("finite diagonal")
        .with_entry(1, 2, re(coh))
        .with_entry(2, 1, re(coh));
    DensityMatrix::new_unchecked(m)
}

/// Convenience wrapper that validates `r` first.
pub fn werner_state<T: Real>(r: T) -> Result<DensityMatrix<T>> {
    Ok(werner(WernerParameter::new(r)?))
}

/// Random full-rank state `G G† / Tr(G G†)` with a complex Gaussian `G`
/// (Hilbert–Schmidt measure).
pub fn random_state<T: Real, R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix<T> {
    let entries: Vec<_> = (0..16)
        .map(|_| {
            let re_part: f64 = rng.sample(StandardNormal);
            let im_part: f64 = rng.sample(StandardNormal);
            c(T::lit(re_part), T::lit(im_part))
        })
        .collect();
    let g = SquareMatrix::from_row_major(entries).expect("16 finite entries");
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new_unchecked(m.hermitian_projection().scale(T::one() / tr))
}

/// Largest entry modulus off the main diagonal and anti-diagonal.
pub fn x_state_deviation<T: Real>(rho: &DensityMatrix<T>) -> T {
    let m = rho.matrix();
    let mut dev = T::zero();
    for i in 0..4 {
        for j in 0..4 {
            if i != j && i + j != 3 {
                dev = dev.max(m.get(i, j).norm());
            }
        }
    }
    dev
}

/// True iff every entry outside the main and anti-diagonal has modulus ≤ `tol`.
pub fn is_x_state<T: Real>(rho: &DensityMatrix<T>, tol: T) -> bool {
    x_state_deviation(rho) <= tol
}
