//! Single-qubit Kraus channels and their local action on two-qubit states.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{kron, PauliOperator, SquareMatrix};
use crate::scalar::{re, Real};
use crate::states::DensityMatrix;

/// Noise strength `p ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DecoherenceParameter<T>(T);

impl<T: Real> DecoherenceParameter<T> {
    pub fn new(p: T) -> Result<Self> {
        if p >= T::zero() && p <= T::one() {
            Ok(Self(p))
        } else {
            Err(Error::Domain {
                name: "p",
                value: p.as_f64(),
                range: "[0, 1]",
            })
        }
    }

    pub fn value(self) -> T {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelKind {
    BitFlip,
    BitPhaseFlip,
    PhaseFlip,
    PhaseDamping,
    AmplitudeDamping,
    /// Noiseless channel, used for one-sided evolution.
    Identity,
    /// User-supplied Kraus set.
    Custom,
}

impl ChannelKind {
    /// The five physical noise channels, in CLI order.
    pub const NOISE: [ChannelKind; 5] = [
        ChannelKind::BitFlip,
        ChannelKind::BitPhaseFlip,
        ChannelKind::PhaseFlip,
        ChannelKind::PhaseDamping,
        ChannelKind::AmplitudeDamping,
    ];

    /// Stable lowercase identifier.
    pub fn id(self) -> &'static str {
        match self {
            ChannelKind::BitFlip => "bit-flip",
            ChannelKind::BitPhaseFlip => "bit-phase-flip",
            ChannelKind::PhaseFlip => "phase-flip",
            ChannelKind::PhaseDamping => "phase-damping",
            ChannelKind::AmplitudeDamping => "amplitude-damping",
            ChannelKind::Identity => "identity",
            ChannelKind::Custom => "custom",
        }
    }

    /// Builds the Kraus set of this kind at strength `p`.
    pub fn channel<T: Real>(self, p: DecoherenceParameter<T>) -> Result<KrausChannel<T>> {
        match self {
            ChannelKind::BitFlip => Ok(flip_channel(PauliOperator::X, p)),
            ChannelKind::BitPhaseFlip => Ok(flip_channel(PauliOperator::Y, p)),
            ChannelKind::PhaseFlip => Ok(flip_channel(PauliOperator::Z, p)),
            ChannelKind::PhaseDamping => Ok(phase_damping(p)),
            ChannelKind::AmplitudeDamping => Ok(amplitude_damping(p)),
            ChannelKind::Identity => Ok(KrausChannel::identity()),
            ChannelKind::Custom => Err(Error::Config(
                "custom channels are built from explicit operators".into(),
            )),
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    /// Accepts only the five noise-channel identifiers.
    fn from_str(s: &str) -> Result<Self> {
        ChannelKind::NOISE
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| Error::UnknownChannel(s.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct KrausChannel<T: Real> {
    kind: ChannelKind,
    p: T,
    operators: Vec<SquareMatrix<T>>,
}

impl<T: Real> KrausChannel<T> {
    /// Arbitrary Kraus set. Completeness is not checked here; see
    /// [`is_trace_preserving`] and [`apply_local`].
    pub fn from_operators(operators: Vec<SquareMatrix<T>>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::Config("empty Kraus set".into()));
        }
        if let Some(m) = operators.iter().find(|m| m.dim() != 2) {
            return Err(Error::InvalidDimension {
                expected: "2x2 Kraus operator".into(),
                got: m.dim(),
            });
        }
        Ok(Self {
            kind: ChannelKind::Custom,
            p: T::zero(),
            operators,
        })
    }

    pub fn identity() -> Self {
        Self {
            kind: ChannelKind::Identity,
            p: T::zero(),
            operators: vec![SquareMatrix::identity(2).expect("2 is a valid dimension")],
        }
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn operators(&self) -> &[SquareMatrix<T>] {
        &self.operators
    }

    /// `Σ K†K`.
    pub fn completeness_sum(&self) -> SquareMatrix<T> {
        self.operators
            .iter()
            .map(|k| &k.adjoint() * k)
            .reduce(|a, b| &a + &b)
            .expect("non-empty Kraus set")
    }

    /// Single-qubit action `Σ K ρ K†` on a 2×2 matrix.
    pub fn apply_single(&self, rho: &SquareMatrix<T>) -> SquareMatrix<T> {
        self.operators
            .iter()
            .map(|k| rho.conjugate_by(k))
            .reduce(|a, b| &a + &b)
            .expect("non-empty Kraus set")
    }
}

fn real2<T: Real>(a: T, b: T, c: T, d: T) -> SquareMatrix<T> {
    SquareMatrix::from_row_major(vec![re(a), re(b), re(c), re(d)]).expect("finite 2x2")
}

/// `K₀ = √(1−p) I`, `K₁ = √p σ`. X gives bit flip, Y bit-phase flip, Z phase flip.
pub fn flip_channel<T: Real>(axis: PauliOperator, p: DecoherenceParameter<T>) -> KrausChannel<T> {
    let p = p.value();
    let k0 = SquareMatrix::identity(2)
        .expect("2 is a valid dimension")
        .scale((T::one() - p).sqrt());
    let k1 = axis.matrix().scale(p.sqrt());
    let kind = match axis {
        PauliOperator::X => ChannelKind::BitFlip,
        PauliOperator::Y => ChannelKind::BitPhaseFlip,
        PauliOperator::Z => ChannelKind::PhaseFlip,
    };
    KrausChannel {
        kind,
        p,
        operators: vec![k0, k1],
    }
}

/// `K₀ = diag(1, √(1−p))`, `K₁ = diag(0, √p)`.
pub fn phase_damping<T: Real>(p: DecoherenceParameter<T>) -> KrausChannel<T> {
    let p = p.value();
    let z = T::zero();
    KrausChannel {
        kind: ChannelKind::PhaseDamping,
        p,
        operators: vec![
            real2(T::one(), z, z, (T::one() - p).sqrt()),
            real2(z, z, z, p.sqrt()),
        ],
    }
}

/// `K₀ = diag(1, √(1−p))`, `K₁ = [[0, √p], [0, 0]]`.
pub fn amplitude_damping<T: Real>(p: DecoherenceParameter<T>) -> KrausChannel<T> {
    let p = p.value();
    let z = T::zero();
    KrausChannel {
        kind: ChannelKind::AmplitudeDamping,
        p,
        operators: vec![
            real2(T::one(), z, z, (T::one() - p).sqrt()),
            real2(z, p.sqrt(), z, z),
        ],
    }
}

/// Max entry of `|Σ K†K − I₂|`.
pub fn completeness_deviation<T: Real>(ch: &KrausChannel<T>) -> T {
    let id = SquareMatrix::identity(2).expect("2 is a valid dimension");
    ch.completeness_sum().max_abs_diff(&id)
}

pub fn is_trace_preserving<T: Real>(ch: &KrausChannel<T>, tol: T) -> bool {
    completeness_deviation(ch) <= tol
}

/// `ρ ↦ Σ_{i,j} (K_i^A ⊗ K_j^B) ρ (K_i^A ⊗ K_j^B)†`, evaluated as the literal
/// Kraus sum. No renormalization is applied. In debug builds the output is
/// re-validated as a density matrix.
pub fn apply_local<T: Real>(
    ch_a: &KrausChannel<T>,
    ch_b: &KrausChannel<T>,
    rho: &DensityMatrix<T>,
) -> Result<DensityMatrix<T>> {
    let tol = T::lit(T::KRAUS_TOL);
    for ch in [ch_a, ch_b] {
        let deviation = completeness_deviation(ch);
        if !(deviation <= tol) {
            return Err(Error::InvalidChannel {
                deviation: deviation.as_f64(),
            });
        }
    }
    let mut out = SquareMatrix::zeros(4)?;
    for ka in ch_a.operators() {
        if ka.max_abs().is_zero() {
            continue;
        }
        for kb in ch_b.operators() {
            if kb.max_abs().is_zero() {
                continue;
            }
            let k = kron(ka, kb)?;
            out = &out + &rho.matrix().conjugate_by(&k);
        }
    }
    if cfg!(debug_assertions) {
        DensityMatrix::new(out)
    } else {
        Ok(DensityMatrix::new_unchecked(out))
    }
}

/// Same channel on both qubits, as in every figure.
pub fn apply_symmetric<T: Real>(
    ch: &KrausChannel<T>,
    rho: &DensityMatrix<T>,
) -> Result<DensityMatrix<T>> {
    apply_local(ch, ch, rho)
}

/// Exponential decay `p = 1 − e^{−γt}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayModel<T> {
    pub gamma: T,
    pub t: T,
}

pub fn time_to_p<T: Real>(model: DecayModel<T>) -> Result<DecoherenceParameter<T>> {
    for (name, v) in [("gamma", model.gamma), ("t", model.t)] {
        if !(v >= T::zero()) || !v.is_finite() {
            return Err(Error::Domain {
                name,
                value: v.as_f64(),
                range: "[0, inf)",
            });
        }
    }
    DecoherenceParameter::new(-(-model.gamma * model.t).exp_m1())
}
