//! Dense complex matrices of dimension 2 and 4.
//!
//! Entries are stored row-major. For two-qubit operators the basis order is
//! `|00>, |01>, |10>, |11>` and qubit A is the left tensor factor.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{c, re, tol, Real, C};

/// Square complex matrix of dimension 2 or 4. Immutable: every operation
/// returns a new value.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix<T: Real> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> fmt::Debug for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SquareMatrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:>+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::InvalidDimension {
            expected: "2 or 4".into(),
            got: dim,
        })
    }
}

impl<T: Real> SquareMatrix<T> {
    /// Builds a matrix from row-major entries. The entry count must be 4 or 16
    /// and every entry finite.
    pub fn from_row_major(data: Vec<C<T>>) -> Result<Self> {
        let dim = match data.len() {
            4 => 2,
            16 => 4,
            n => {
                return Err(Error::InvalidDimension {
                    expected: "4 or 16 entries".into(),
                    got: n,
                })
            }
        };
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<C<T>>]) -> Result<Self> {
        let n = rows.len();
        check_dim(n)?;
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::InvalidDimension {
                expected: format!("{n} columns"),
                got: bad.len(),
            });
        }
        Self::from_row_major(rows.iter().flatten().copied().collect())
    }

    /// Real-valued rows, convenient for tests and literal operators.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C<T>>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| re(T::lit(x))).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: vec![C::zero(); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_real_diagonal(&vec![T::one(); dim])
    }

    pub fn from_real_diagonal(diag: &[T]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * m.dim + i] = re(d);
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[C<T>], v: &[C<T>]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::InvalidDimension {
                expected: format!("{}", u.len()),
                got: v.len(),
            });
        }
        let mut m = Self::zeros(u.len())?;
        for i in 0..m.dim {
            for j in 0..m.dim {
                m.data[i * m.dim + j] = u[i] * v[j].conj();
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.data[i * self.dim + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[C<T>] {
        &self.data
    }

    /// Returns a copy with entry `(i, j)` replaced.
    pub fn with_entry(&self, i: usize, j: usize, z: C<T>) -> Self {
        let mut m = self.clone();
        m.data[i * self.dim + j] = z;
        m
    }

    pub fn diagonal(&self) -> Vec<C<T>> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> C<T> {
        self.diagonal().into_iter().fold(C::zero(), |a, b| a + b)
    }

    pub fn adjoint(&self) -> Self {
        self.map_indexed(|i, j| self.get(j, i).conj())
    }

    /// Entrywise complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        self.map_indexed(|i, j| self.get(i, j).conj())
    }

    pub fn transpose(&self) -> Self {
        self.map_indexed(|i, j| self.get(j, i))
    }

    pub fn scale(&self, k: T) -> Self {
        self.scale_complex(re(k))
    }

    pub fn scale_complex(&self, k: C<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * k).collect(),
        }
    }

    fn map_indexed(&self, f: impl Fn(usize, usize) -> C<T>) -> Self {
        let n = self.dim;
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { dim: n, data }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), T::max)
    }

    /// Largest entrywise modulus of `self - other`. Panics on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Max |m − m†| entry.
    pub fn hermitian_deviation(&self) -> T {
        let n = self.dim;
        let mut dev = T::zero();
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `u · self · u†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    /// Permutes basis indices: result[i][j] = self[perm[i]][perm[j]].
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim);
        self.map_indexed(|i, j| self.get(perm[i], perm[j]))
    }

    /// `(m + m†) / 2`.
    pub fn hermitian_projection(&self) -> Self {
        self.hermitian_part()
    }

    fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        self.map_indexed(|i, j| (self.get(i, j) + self.get(j, i).conj()) * half)
    }
}

impl<T: Real> Mul for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;

    fn mul(self, rhs: Self) -> SquareMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = vec![C::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = out[i * n + j] + a * rhs.data[k * n + j];
                }
            }
        }
        SquareMatrix { dim: n, data: out }
    }
}

impl<T: Real> Add for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;

    fn add(self, rhs: Self) -> SquareMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;

    fn sub(self, rhs: Self) -> SquareMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product of two 2×2 matrices:
/// `kron(a, b)[2i + k][2j + l] = a[i][j] · b[k][l]`.
pub fn kron<T: Real>(a: &SquareMatrix<T>, b: &SquareMatrix<T>) -> Result<SquareMatrix<T>> {
    for m in [a, b] {
        if m.dim != 2 {
            return Err(Error::InvalidDimension {
                expected: "2x2 factor".into(),
                got: m.dim,
            });
        }
    }
    let mut out = SquareMatrix::zeros(4)?;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.data[(2 * i + k) * 4 + 2 * j + l] = a.get(i, j) * b.get(k, l);
                }
            }
        }
    }
    Ok(out)
}

/// Haar-random 2×2 unitary: a uniformly random SU(2) element times a
/// uniformly random global phase.
pub fn random_unitary2<T: Real, R: Rng + ?Sized>(rng: &mut R) -> SquareMatrix<T> {
    let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = c(T::lit(g[0] / norm), T::lit(g[1] / norm));
    let b = c(T::lit(g[2] / norm), T::lit(g[3] / norm));
    let phase = C::from_polar(T::one(), T::lit(rng.random_range(0.0..std::f64::consts::TAU)));
    SquareMatrix {
        dim: 2,
        data: vec![a * phase, -b.conj() * phase, b * phase, a.conj() * phase],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliOperator {
    X,
    Y,
    Z,
}

impl PauliOperator {
    pub fn matrix<T: Real>(self) -> SquareMatrix<T> {
        let (o, z, i) = (C::one(), C::zero(), c(T::zero(), T::one()));
        let data = match self {
            PauliOperator::X => vec![z, o, o, z],
            PauliOperator::Y => vec![z, -i, i, z],
            PauliOperator::Z => vec![o, z, z, -o],
        };
        SquareMatrix { dim: 2, data }
    }
}

/// Real spectrum of a Hermitian matrix, sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSpectrum<T> {
    pub eigenvalues: Vec<T>,
}

impl<T: Real> HermitianSpectrum<T> {
    pub fn sum(&self) -> T {
        self.eigenvalues.iter().copied().sum()
    }

    pub fn min(&self) -> T {
        self.eigenvalues.last().copied().unwrap_or_else(T::zero)
    }
}

/// Eigenvalues (descending) with the matching unit eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: SquareMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// Rebuilds `V · diag(f(λ)) · V†`.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> SquareMatrix<T> {
        let n = self.vectors.dim;
        let v = &self.vectors;
        let fl: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        v.map_indexed(|i, j| {
            (0..n).fold(C::zero(), |acc, k| {
                acc + v.get(i, k) * v.get(j, k).conj() * fl[k]
            })
        })
    }

    pub fn reconstruct(&self) -> SquareMatrix<T> {
        self.reconstruct_with(|l| l)
    }

    /// k-th eigenvector.
    pub fn vector(&self, k: usize) -> Vec<C<T>> {
        (0..self.vectors.dim).map(|i| self.vectors.get(i, k)).collect()
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `a[p][q]` with a
/// diagonal unitary, then applies the real symmetric rotation that zeroes it.
pub fn hermitian_eigen<T: Real>(m: &SquareMatrix<T>) -> Result<HermitianEigen<T>> {
    let dev = m.hermitian_deviation();
    if !(dev <= T::lit(T::HERM_TOL)) {
        return Err(Error::NotHermitian {
            deviation: dev.as_f64(),
        });
    }
    let n = m.dim;
    let mut a = m.hermitian_part();
    for i in 0..n {
        a.data[i * n + i].im = T::zero();
    }
    let mut v = SquareMatrix::<T>::identity(n)?;
    let threshold = T::lit(T::JACOBI_TOL) * T::one().max(a.frobenius_norm());

    let off_norm = |a: &SquareMatrix<T>| -> T {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s = s + a.data[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) >= threshold {
        if sweeps == tol::JACOBI_MAX_SWEEPS {
            return Err(Error::NotConverged {
                sweeps,
                off_norm: off_norm(&a).as_f64(),
            });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a.data[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&k| diag[k]).collect();
    let vectors = v.map_indexed(|i, j| v.get(i, order[j]));
    Ok(HermitianEigen { values, vectors })
}

fn rotate<T: Real>(a: &mut SquareMatrix<T>, v: &mut SquareMatrix<T>, p: usize, q: usize) {
    let n = a.dim;
    let apq = a.data[p * n + q];
    let mag = apq.norm();
    if mag == T::zero() {
        return;
    }
    let app = a.data[p * n + p].re;
    let aqq = a.data[q * n + q].re;
    // Pivot negligible next to both diagonal entries: zero it without rotating.
    let tiny = T::epsilon() * T::epsilon();
    if mag <= tiny * (app.abs() + aqq.abs()) {
        a.data[p * n + q] = C::zero();
        a.data[q * n + p] = C::zero();
        return;
    }
    let phase = apq / mag;
    let pc = phase.conj();

    let theta = (aqq - app) / (T::lit(2.0) * mag);
    let t = if theta == T::zero() {
        T::one()
    } else {
        theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let cs = T::one() / (t * t + T::one()).sqrt();
    let sn = t * cs;

    // U restricted to (p, q): [[c, s], [-s·e*, c·e*]] with e = apq / |apq|.
    let u_pp = re(cs);
    let u_pq = re(sn);
    let u_qp = pc * (-sn);
    let u_qq = pc * cs;

    // A <- A U
    for k in 0..n {
        let akp = a.data[k * n + p];
        let akq = a.data[k * n + q];
        a.data[k * n + p] = akp * u_pp + akq * u_qp;
        a.data[k * n + q] = akp * u_pq + akq * u_qq;
    }
    // A <- U† A
    for k in 0..n {
        let apk = a.data[p * n + k];
        let aqk = a.data[q * n + k];
        a.data[p * n + k] = apk * u_pp.conj() + aqk * u_qp.conj();
        a.data[q * n + k] = apk * u_pq.conj() + aqk * u_qq.conj();
    }
    a.data[p * n + q] = C::zero();
    a.data[q * n + p] = C::zero();
    a.data[p * n + p] = re(app - t * mag);
    a.data[q * n + q] = re(aqq + t * mag);

    // V <- V U
    for k in 0..n {
        let vkp = v.data[k * n + p];
        let vkq = v.data[k * n + q];
        v.data[k * n + p] = vkp * u_pp + vkq * u_qp;
        v.data[k * n + q] = vkp * u_pq + vkq * u_qq;
    }
}

pub fn hermitian_eigenvalues<T: Real>(m: &SquareMatrix<T>) -> Result<HermitianSpectrum<T>> {
    hermitian_eigen(m).map(|e| HermitianSpectrum {
        eigenvalues: e.values,
    })
}

/// Clamps float-noise negatives to zero; rejects genuinely negative eigenvalues.
pub(crate) fn clamp_psd<T: Real>(lambda: T) -> Result<T> {
    if lambda < -T::lit(T::PSD_REJECT) {
        Err(Error::NotPsd {
            eigenvalue: lambda.as_f64(),
        })
    } else {
        Ok(lambda.max(T::zero()))
    }
}

/// Principal square root of a Hermitian positive-semidefinite matrix.
pub fn psd_sqrt<T: Real>(m: &SquareMatrix<T>) -> Result<SquareMatrix<T>> {
    let eig = hermitian_eigen(m)?;
    for &l in &eig.values {
        clamp_psd(l)?;
    }
    Ok(eig.reconstruct_with(|l| l.max(T::zero()).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> SquareMatrix<f64> {
        SquareMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn kron_identity_and_sigma_z() {
        let i2 = SquareMatrix::<f64>::identity(2).unwrap();
        let i4 = SquareMatrix::<f64>::identity(4).unwrap();
        assert_eq!(kron(&i2, &i2).unwrap(), i4);
        let z = PauliOperator::Z.matrix::<f64>();
        let zi = kron(&z, &i2).unwrap();
        let expected = SquareMatrix::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0]).unwrap();
        assert_eq!(zi, expected);
    }

    #[test]
    fn kron_xx_maps_01_to_10() {
        let x = PauliOperator::X.matrix::<f64>();
        let xx = kron(&x, &x).unwrap();
        // column |01> (index 1) has its single 1 in row |10> (index 2)
        for i in 0..4 {
            let want = if i == 2 { 1.0 } else { 0.0 };
            assert_eq!(xx.get(i, 1), re(want));
        }
    }

    #[test]
    fn kron_rejects_4x4_factor() {
        let i4 = SquareMatrix::<f64>::identity(4).unwrap();
        let i2 = SquareMatrix::<f64>::identity(2).unwrap();
        assert!(matches!(kron(&i4, &i2), Err(Error::InvalidDimension { .. })));
    }

    #[test]
    fn bad_dimensions_rejected() {
        assert!(SquareMatrix::<f64>::zeros(3).is_err());
        assert!(SquareMatrix::<f64>::from_row_major(vec![C::zero(); 9]).is_err());
        assert!(matches!(
            SquareMatrix::<f64>::from_row_major(vec![re(f64::NAN); 4]),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn pauli_squares_to_identity() {
        let i2 = SquareMatrix::<f64>::identity(2).unwrap();
        for p in [PauliOperator::X, PauliOperator::Y, PauliOperator::Z] {
            let s = p.matrix::<f64>();
            assert!(s.is_hermitian(0.0));
            assert_eq!(&s * &s, i2);
        }
    }

    #[test]
    fn eigenvalues_of_diagonal_and_identity() {
        let d = SquareMatrix::from_real_diagonal(&[0.1, 0.7, 0.0, 0.2]).unwrap();
        assert_eq!(hermitian_eigenvalues(&d).unwrap().eigenvalues, vec![0.7, 0.2, 0.1, 0.0]);
        let q = SquareMatrix::<f64>::identity(4).unwrap().scale(0.25);
        assert_eq!(hermitian_eigenvalues(&q).unwrap().eigenvalues, vec![0.25; 4]);
    }

    #[test]
    fn singlet_projector_spectrum() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [re(0.0), re(h), re(-h), re(0.0)];
        let p = SquareMatrix::outer(&psi, &psi).unwrap();
        // projector check: P^2 = P
        assert!((&p * &p).max_abs_diff(&p) < 1e-15);
        let ev = hermitian_eigenvalues(&p).unwrap().eigenvalues;
        for (got, want) in ev.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn complex_hermitian_reconstruction() {
        let i = c(0.0, 1.0);
        let rows = vec![
            vec![re(2.0), i * 0.5 + 0.3, re(0.1), i * -0.2],
            vec![i * -0.5 + 0.3, re(1.0), c(0.2, 0.4), re(0.0)],
            vec![re(0.1), c(0.2, -0.4), re(-1.0), c(0.05, 0.05)],
            vec![i * 0.2, re(0.0), c(0.05, -0.05), re(0.5)],
        ];
        let a = SquareMatrix::from_rows(&rows).unwrap();
        let eig = hermitian_eigen(&a).unwrap();
        assert!(eig.reconstruct().max_abs_diff(&a) <= 1e-10);
        let v = &eig.vectors;
        let id = SquareMatrix::identity(4).unwrap();
        assert!((&v.adjoint() * v).max_abs_diff(&id) < 1e-12);
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        let tr = a.trace().re;
        assert!((eig.values.iter().sum::<f64>() - tr).abs() < 1e-10);
    }

    #[test]
    fn non_hermitian_rejected() {
        let a = m(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(hermitian_eigen(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn psd_sqrt_examples() {
        let i4 = SquareMatrix::<f64>::identity(4).unwrap();
        assert!(psd_sqrt(&i4).unwrap().max_abs_diff(&i4) < 1e-15);
        let d = SquareMatrix::from_real_diagonal(&[4.0, 1.0, 0.0, 0.0]).unwrap();
        let s = psd_sqrt(&d).unwrap();
        let want = SquareMatrix::from_real_diagonal(&[2.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(s.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn psd_sqrt_clamps_noise_and_rejects_negative() {
        let noisy = SquareMatrix::from_real_diagonal(&[1.0, -5e-11, 0.0, 0.0]).unwrap();
        let s = psd_sqrt(&noisy).unwrap();
        assert_eq!(s.get(1, 1), re(0.0));
        let bad = SquareMatrix::from_real_diagonal(&[1.0, -1e-6, 0.0, 0.0]).unwrap();
        assert!(matches!(psd_sqrt(&bad), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn f32_eigenvalues() {
        let a = SquareMatrix::<f32>::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let ev = hermitian_eigenvalues(&a).unwrap().eigenvalues;
        assert!((ev[0] - 3.0).abs() < 1e-6 && (ev[1] - 1.0).abs() < 1e-6);
    }
}
