//! Real scalar abstraction shared by every numeric routine in the crate.
//!
//! All tolerances are expressed per scalar type so that `f32` builds get
//! thresholds that its precision can actually meet.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Named tolerances for double precision.
pub mod tol {
    /// Max |m − m†| entry for a matrix to count as Hermitian.
    pub const HERM: f64 = 1e-10;
    /// Eigenvalues in `[-PSD_CLAMP, 0)` are float noise and get clamped to 0.
    pub const PSD_CLAMP: f64 = 1e-10;
    /// Eigenvalues below `-PSD_REJECT` are a hard error.
    pub const PSD_REJECT: f64 = 1e-8;
    /// Jacobi stops once the off-diagonal Frobenius norm drops below this.
    pub const JACOBI: f64 = 1e-12;
    /// Max Jacobi sweeps before giving up.
    pub const JACOBI_MAX_SWEEPS: usize = 100;
    /// |Tr ρ − 1| allowed for a density matrix.
    pub const TRACE: f64 = 1e-10;
    /// Default X-state structure tolerance.
    pub const X_STATE: f64 = 1e-10;
    /// Completeness tolerance for Kraus sets.
    pub const KRAUS: f64 = 1e-12;
    /// REQC values in `[-REQC_CLAMP, 0)` are reported as 0.
    pub const REQC_CLAMP: f64 = 1e-12;
}

/// Floating-point type usable as the real part of matrix entries.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    const HERM_TOL: f64;
    const PSD_CLAMP: f64;
    const PSD_REJECT: f64;
    const JACOBI_TOL: f64;
    const TRACE_TOL: f64;
    const X_STATE_TOL: f64;
    const KRAUS_TOL: f64;
    const REQC_CLAMP: f64;

    /// Converts a literal. Panics only if `x` is not representable at all,
    /// which cannot happen for the finite constants used in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const HERM_TOL: f64 = tol::HERM;
    const PSD_CLAMP: f64 = tol::PSD_CLAMP;
    const PSD_REJECT: f64 = tol::PSD_REJECT;
    const JACOBI_TOL: f64 = tol::JACOBI;
    const TRACE_TOL: f64 = tol::TRACE;
    const X_STATE_TOL: f64 = tol::X_STATE;
    const KRAUS_TOL: f64 = tol::KRAUS;
    const REQC_CLAMP: f64 = tol::REQC_CLAMP;
}

impl Real for f32 {
    const HERM_TOL: f64 = 1e-5;
    const PSD_CLAMP: f64 = 1e-5;
    const PSD_REJECT: f64 = 1e-4;
    const JACOBI_TOL: f64 = 1e-6;
    const TRACE_TOL: f64 = 1e-5;
    const X_STATE_TOL: f64 = 1e-5;
    const KRAUS_TOL: f64 = 1e-6;
    const REQC_CLAMP: f64 = 1e-6;
}

/// Complex entry type.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}
