//! Coherence and entanglement of two-qubit Werner states under local
//! decoherence.
//!
//! The numeric core is generic over the real scalar ([`Real`], implemented
//! for `f32` and `f64`). The aliases at the crate root fix it to `f64`, which
//! is what every tolerance in [`tol`] is calibrated for.

pub mod channels;
pub mod error;
pub mod measures;
pub mod qmat;
pub mod scalar;
pub mod states;
pub mod sweep;

pub use channels::{
    amplitude_damping, apply_local, apply_symmetric, flip_channel, is_trace_preserving,
    phase_damping, time_to_p, ChannelKind, DecayModel,
};
pub use error::{Error, Result};
pub use measures::{
    concurrence_general, concurrence_x, dephase, relative_entropy, reqc, variational_reqc_check,
    von_neumann_entropy, RelativeEntropy,
};
pub use qmat::{hermitian_eigenvalues, kron, psd_sqrt, random_unitary2, PauliOperator};
pub use scalar::{tol, Real};
pub use states::{is_x_state, random_state, singlet, werner, werner_state};
pub use sweep::{Axis, Grid, Interval};

pub type Complex = num_complex::Complex<f64>;
pub type SquareMatrix = qmat::SquareMatrix<f64>;
pub type HermitianSpectrum = qmat::HermitianSpectrum<f64>;
pub type DensityMatrix = states::DensityMatrix<f64>;
pub type WernerParameter = states::WernerParameter<f64>;
pub type DecoherenceParameter = channels::DecoherenceParameter<f64>;
pub type KrausChannel = channels::KrausChannel<f64>;
pub type ConcurrenceSpectrum = measures::ConcurrenceSpectrum<f64>;
pub type IncoherentState = measures::IncoherentState<f64>;
pub type SweepConfig = sweep::SweepConfig<f64>;
pub type SweepRecord = sweep::SweepRecord<f64>;
pub type CriticalPoints = sweep::CriticalPoints<f64>;
pub type DeadZoneThreshold = sweep::DeadZoneThreshold<f64>;

pub type SquareMatrixF32 = qmat::SquareMatrix<f32>;
pub type DensityMatrixF32 = states::DensityMatrix<f32>;
pub type KrausChannelF32 = channels::KrausChannel<f32>;
