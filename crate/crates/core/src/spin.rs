//! Exact Dicke-basis representation of collective spin operators, rotations,
//! and Hermitian time-evolution kernels.
//!
//! A system of N spin-1/2 particles restricted to the symmetric sector is a
//! single spin J = N/2 with Hilbert dimension 2J+1. Basis ordering is fixed
//! descending, m = J..-J, so Jz is diagonal descending and |J,J> comes first.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub(crate) const I1: C64 = C64::new(0.0, 1.0);

pub(crate) fn cr(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Default numerical tolerances. All contract checks take these as
/// configuration; large-N sweeps may need to loosen them.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub hermitian: f64,
    pub unitary: f64,
    pub state_norm: f64,
    pub trace: f64,
    pub positivity: f64,
    pub imag_residue: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermitian: 1e-12,
            unitary: 1e-10,
            state_norm: 1e-10,
            trace: 1e-8,
            positivity: 1e-8,
            imag_residue: 1e-10,
        }
    }
}

/// A collective spin-J system with J = N/2 in the Dicke basis |J,m>.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinSystem {
    n_particles: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Collective {
    Jx,
    Jy,
    Jz,
    Jplus,
    Jminus,
    Jz2,
    Jx2,
    Jy2,
}

/// lambda_m^{+-} = sqrt(J(J+1) - m(m+-1)); exactly 0 at the ladder ends.
pub fn ladder_coefficient(j: f64, m: f64, up: bool) -> Result<f64> {
    if m.abs() > j + 1e-12 {
        return Err(Error::Domain(format!("|m| = {} exceeds j = {}", m.abs(), j)));
    }
    let shifted = if up { m + 1.0 } else { m - 1.0 };
    if shifted.abs() > j + 1e-12 {
        return Ok(0.0);
    }
    let val = j * (j + 1.0) - m * shifted;
    Ok(val.max(0.0).sqrt())
}

impl SpinSystem {
    pub fn new(n_particles: usize) -> Result<Self> {
        if n_particles == 0 {
            return Err(Error::Domain("particle number must be positive".into()));
        }
        Ok(SpinSystem { n_particles })
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn j(&self) -> f64 {
        self.n_particles as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.n_particles + 1
    }

    /// m value of basis index i (descending: i = 0 is m = J).
    pub fn m_at(&self, idx: usize) -> f64 {
        self.j() - idx as f64
    }

    /// Basis index of a given m.
    pub fn index_of(&self, m: f64) -> usize {
        (self.j() - m).round() as usize
    }

    pub fn operator(&self, which: Collective) -> OperatorMatrix {
        let dim = self.dim();
        let j = self.j();
        match which {
            Collective::Jz => {
                let mut a = DMatrix::zeros(dim, dim);
                for i in 0..dim {
                    a[(i, i)] = cr(self.m_at(i));
                }
                OperatorMatrix::hermitian(a)
            }
            Collective::Jplus => {
                let mut a = DMatrix::zeros(dim, dim);
                for i in 1..dim {
                    let m = self.m_at(i);
                    a[(i - 1, i)] = cr(ladder_coefficient(j, m, true).unwrap());
                }
                OperatorMatrix::general(a)
            }
            Collective::Jminus => {
                let jp = self.operator(Collective::Jplus);
                OperatorMatrix::general(jp.entries.adjoint())
            }
            Collective::Jx => {
                let jp = self.operator(Collective::Jplus).entries;
                let a = (&jp + jp.adjoint()) * cr(0.5);
                OperatorMatrix::hermitian(a)
            }
            Collective::Jy => {
                let jp = self.operator(Collective::Jplus).entries;
                let a = (&jp - jp.adjoint()) * (-I1 * cr(0.5));
                OperatorMatrix::hermitian(a)
            }
            Collective::Jz2 => {
                let jz = self.operator(Collective::Jz).entries;
                OperatorMatrix::hermitian(&jz * &jz)
            }
            Collective::Jx2 => {
                let jx = self.operator(Collective::Jx).entries;
                OperatorMatrix::hermitian(&jx * &jx)
            }
            Collective::Jy2 => {
                let jy = self.operator(Collective::Jy).entries;
                OperatorMatrix::hermitian(&jy * &jy)
            }
        }
    }

    /// exp(-i angle J_axis) via Hermitian eigendecomposition (exactly unitary
    /// up to round-off). The z axis is diagonal and handled directly.
    pub fn rotation(&self, axis: Axis, angle: f64) -> OperatorMatrix {
        let dim = self.dim();
        match axis {
            Axis::Z => {
                let mut a = DMatrix::zeros(dim, dim);
                for i in 0..dim {
                    a[(i, i)] = (-I1 * cr(angle * self.m_at(i))).exp();
                }
                OperatorMatrix::unitary(a)
            }
            _ => {
                let eig = axis_eigen(*self, axis);
                let u = eig.exp_phases(|lam| -angle * lam);
                OperatorMatrix::unitary(u)
            }
        }
    }

    /// exp(-i angle J_axis^2), the one-axis-twisting unitary about `axis`.
    pub fn twist(&self, axis: Axis, angle: f64) -> OperatorMatrix {
        let dim = self.dim();
        match axis {
            Axis::Z => {
                let mut a = DMatrix::zeros(dim, dim);
                for i in 0..dim {
                    let m = self.m_at(i);
                    a[(i, i)] = (-I1 * cr(angle * m * m)).exp();
                }
                OperatorMatrix::unitary(a)
            }
            _ => {
                let eig = axis_eigen(*self, axis);
                let u = eig.exp_phases(|lam| -angle * lam * lam);
                OperatorMatrix::unitary(u)
            }
        }
    }
}

/// Cached eigendecomposition of Jx / Jy per dimension; rotations about a
/// fixed axis share one eigenbasis for all angles.
struct AxisEigen {
    values: Vec<f64>,
    vectors: DMatrix<C64>,
}

impl AxisEigen {
    /// V diag(exp(i phase(lam))) V^dag
    fn exp_phases<F: Fn(f64) -> f64>(&self, phase: F) -> DMatrix<C64> {
        let dim = self.values.len();
        let ph = DVector::from_iterator(
            dim,
            self.values.iter().map(|&lam| (I1 * cr(phase(lam))).exp()),
        );
        let mut vd = self.vectors.clone();
        for (k, mut col) in vd.column_iter_mut().enumerate() {
            col *= ph[k];
        }
        &vd * self.vectors.adjoint()
    }
}

fn axis_eigen(sys: SpinSystem, axis: Axis) -> Arc<AxisEigen> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, Axis), Arc<AxisEigen>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (sys.dim(), axis);
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let op = match axis {
        Axis::X => sys.operator(Collective::Jx),
        Axis::Y => sys.operator(Collective::Jy),
        Axis::Z => unreachable!("z axis is diagonal"),
    };
    let eig = nalgebra::SymmetricEigen::new(op.entries);
    let entry = Arc::new(AxisEigen {
        values: eig.eigenvalues.iter().cloned().collect(),
        vectors: eig.eigenvectors,
    });
    cache.lock().unwrap().insert(key, entry.clone());
    entry
}

/// Dense complex operator on the Dicke space, carrying Hermiticity/unitarity
/// hints set by the constructors.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub entries: DMatrix<C64>,
    pub hermitian_hint: bool,
    pub unitary_hint: bool,
}

impl OperatorMatrix {
    pub fn hermitian(entries: DMatrix<C64>) -> Self {
        OperatorMatrix { entries, hermitian_hint: true, unitary_hint: false }
    }

    pub fn unitary(entries: DMatrix<C64>) -> Self {
        OperatorMatrix { entries, hermitian_hint: false, unitary_hint: true }
    }

    pub fn general(entries: DMatrix<C64>) -> Self {
        OperatorMatrix { entries, hermitian_hint: false, unitary_hint: false }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            entries: self.entries.adjoint(),
            hermitian_hint: self.hermitian_hint,
            unitary_hint: self.unitary_hint,
        }
    }

    pub fn matmul(&self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::general(&self.entries * &rhs.entries)
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if self.dim() != state.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: state.dim() });
        }
        Ok(StateVector { j: state.j, coeffs: &self.entries * &state.coeffs })
    }

    /// max |A - A†| entrywise.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = &self.entries - self.entries.adjoint();
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |A†A - 1| entrywise.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.entries.adjoint() * &self.entries;
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for k in 0..n {
                let target = if i == k { cr(1.0) } else { cr(0.0) };
                worst = worst.max((p[(i, k)] - target).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        (&self.entries - &other.entries).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Verify the declared hints against the stated tolerances.
    pub fn check_hints(&self, tol: &Tolerances) -> Result<()> {
        if self.hermitian_hint {
            let d = self.hermiticity_defect();
            if d > tol.hermitian {
                return Err(Error::NonHermitian(d));
            }
        }
        if self.unitary_hint {
            let d = self.unitarity_defect();
            if d > tol.unitary {
                return Err(Error::Numerics(format!("unitarity defect {d:.3e}")));
            }
        }
        Ok(())
    }
}

/// exp(-i h t) for Hermitian h, via eigendecomposition.
pub fn expm_hermitian(h: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    if !h.hermitian_hint {
        return Err(Error::NonHermitian(h.hermiticity_defect()));
    }
    let eig = nalgebra::SymmetricEigen::new(h.entries.clone());
    let dim = h.dim();
    let ph = DVector::from_iterator(
        dim,
        eig.eigenvalues.iter().map(|&e| (-I1 * cr(e * t)).exp()),
    );
    let mut vd = eig.eigenvectors.clone();
    for (k, mut col) in vd.column_iter_mut().enumerate() {
        col *= ph[k];
    }
    Ok(OperatorMatrix::unitary(&vd * eig.eigenvectors.adjoint()))
}

/// Pure state in the Dicke basis, coefficients C_m indexed descending m = J..-J.
#[derive(Debug, Clone)]
pub struct StateVector {
    pub(crate) j: f64,
    pub coeffs: DVector<C64>,
}

impl StateVector {
    pub fn from_coeffs(sys: &SpinSystem, coeffs: DVector<C64>) -> Result<Self> {
        if coeffs.len() != sys.dim() {
            return Err(Error::Dimension { expected: sys.dim(), got: coeffs.len() });
        }
        Ok(StateVector { j: sys.j(), coeffs })
    }

    /// Basis state |J,m>.
    pub fn basis(sys: &SpinSystem, m: f64) -> Result<Self> {
        if m.abs() > sys.j() + 1e-12 {
            return Err(Error::Domain(format!("|m| = {} exceeds J = {}", m.abs(), sys.j())));
        }
        let mut coeffs = DVector::zeros(sys.dim());
        coeffs[sys.index_of(m)] = cr(1.0);
        Ok(StateVector { j: sys.j(), coeffs })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn system(&self) -> SpinSystem {
        SpinSystem { n_particles: self.dim() - 1 }
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    pub fn check_normalized(&self, tol: f64) -> Result<()> {
        let d = (self.norm() - 1.0).abs();
        if d > tol {
            return Err(Error::Numerics(format!("state norm drifted by {d:.3e}")));
        }
        Ok(())
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.coeffs.dotc(&other.coeffs)
    }

    /// <psi|op|psi> for Hermitian op; the imaginary residue is checked against
    /// the tolerance and discarded.
    pub fn expectation_with(&self, op: &OperatorMatrix, tol: &Tolerances) -> Result<f64> {
        if op.dim() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: op.dim() });
        }
        if !op.hermitian_hint {
            return Err(Error::NonHermitian(op.hermiticity_defect()));
        }
        let val = self.coeffs.dotc(&(&op.entries * &self.coeffs));
        if val.im.abs() > tol.imag_residue {
            return Err(Error::Numerics(format!(
                "expectation imaginary residue {:.3e}",
                val.im.abs()
            )));
        }
        Ok(val.re)
    }

    pub fn expectation(&self, op: &OperatorMatrix) -> Result<f64> {
        self.expectation_with(op, &Tolerances::default())
    }

    pub fn to_density(&self) -> DensityMatrix {
        let n = self.dim();
        let mut rho = DMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                rho[(r, c)] = self.coeffs[r] * self.coeffs[c].conj();
            }
        }
        DensityMatrix { entries: rho }
    }
}

/// Density matrix in the Dicke basis.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub entries: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> Self {
        state.to_density()
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> C64 {
        let mut t = cr(0.0);
        for i in 0..self.dim() {
            t += self.entries[(i, i)];
        }
        t
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.entries + self.entries.adjoint()) * cr(0.5);
        let eig = nalgebra::SymmetricEigen::new(herm);
        eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn expectation_with(&self, op: &OperatorMatrix, tol: &Tolerances) -> Result<f64> {
        if op.dim() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: op.dim() });
        }
        let mut val = cr(0.0);
        // Tr(rho op)
        for i in 0..self.dim() {
            for k in 0..self.dim() {
                val += self.entries[(i, k)] * op.entries[(k, i)];
            }
        }
        if val.im.abs() > tol.imag_residue {
            return Err(Error::Numerics(format!(
                "expectation imaginary residue {:.3e}",
                val.im.abs()
            )));
        }
        Ok(val.re)
    }

    pub fn expectation(&self, op: &OperatorMatrix) -> Result<f64> {
        self.expectation_with(op, &Tolerances::default())
    }

    /// Hermiticity within 1e-10, unit trace within 1e-8, min eigenvalue >= -1e-8.
    pub fn check_invariants(&self, tol: &Tolerances) -> Result<()> {
        let d = (&self.entries - self.entries.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if d > 1e-10 {
            return Err(Error::Numerics(format!("density Hermiticity defect {d:.3e}")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::Numerics(format!("density trace drifted to {tr}")));
        }
        let lo = self.min_eigenvalue();
        if lo < -tol.positivity {
            return Err(Error::Numerics(format!("density min eigenvalue {lo:.3e}")));
        }
        Ok(())
    }

    /// rho -> U rho U^dag
    pub fn conjugated(&self, u: &OperatorMatrix) -> DensityMatrix {
        DensityMatrix { entries: &u.entries * &self.entries * u.entries.adjoint() }
    }
}

/// exp(-i h t)|state> via eigendecomposition of the Hermitian generator.
pub fn evolve_unitary(state: &StateVector, h: &OperatorMatrix, t: f64) -> Result<StateVector> {
    evolve_unitary_with(state, h, t, &Tolerances::default())
}

pub fn evolve_unitary_with(
    state: &StateVector,
    h: &OperatorMatrix,
    t: f64,
    tol: &Tolerances,
) -> Result<StateVector> {
    if h.dim() != state.dim() {
        return Err(Error::Dimension { expected: state.dim(), got: h.dim() });
    }
    if !h.hermitian_hint {
        return Err(Error::NonHermitian(h.hermiticity_defect()));
    }
    let eig = nalgebra::SymmetricEigen::new(h.entries.clone());
    let c = eig.eigenvectors.adjoint() * &state.coeffs;
    let rotated = DVector::from_iterator(
        state.dim(),
        c.iter()
            .zip(eig.eigenvalues.iter())
            .map(|(&ck, &e)| ck * (-I1 * cr(e * t)).exp()),
    );
    let out = StateVector { j: state.j, coeffs: &eig.eigenvectors * rotated };
    let drift = (out.norm() - state.norm()).abs();
    if drift > tol.state_norm {
        return Err(Error::Numerics(format!("evolution norm drift {drift:.3e}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> DMatrix<C64> {
        &a.entries * &b.entries - &b.entries * &a.entries
    }

    #[test]
    fn ladder_coefficient_examples() {
        assert_eq!(ladder_coefficient(10.0, 10.0, true).unwrap(), 0.0);
        assert_relative_eq!(ladder_coefficient(0.5, -0.5, true).unwrap(), 1.0);
        assert_relative_eq!(ladder_coefficient(2.0, 0.0, true).unwrap(), 6.0f64.sqrt());
        assert!(ladder_coefficient(2.0, 3.0, true).is_err());
    }

    #[test]
    fn jz_diagonal_n2() {
        let sys = SpinSystem::new(2).unwrap();
        let jz = sys.operator(Collective::Jz);
        for (i, want) in [1.0, 0.0, -1.0].iter().enumerate() {
            assert_relative_eq!(jz.entries[(i, i)].re, *want);
        }
    }

    #[test]
    fn jx_n1() {
        let sys = SpinSystem::new(1).unwrap();
        let jx = sys.operator(Collective::Jx);
        assert_relative_eq!(jx.entries[(0, 1)].re, 0.5);
        assert_relative_eq!(jx.entries[(1, 0)].re, 0.5);
        assert_relative_eq!(jx.entries[(0, 0)].norm(), 0.0);
    }

    #[test]
    fn su2_algebra() {
        for n in 1..=10 {
            let sys = SpinSystem::new(n).unwrap();
            let jx = sys.operator(Collective::Jx);
            let jy = sys.operator(Collective::Jy);
            let jz = sys.operator(Collective::Jz);
            let pairs = [(&jx, &jy, &jz), (&jy, &jz, &jx), (&jz, &jx, &jy)];
            for (a, b, c) in pairs {
                let lhs = commutator(a, b);
                let rhs = &c.entries * I1;
                let err = (&lhs - &rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
                assert!(err <= 1e-12, "N={n}: commutator defect {err:.2e}");
            }
        }
    }

    #[test]
    fn exchange_action_on_basis() {
        // rotation(x, pi)^dag |J,m> = i^N |J,-m>
        for n in 1..=10usize {
            let sys = SpinSystem::new(n).unwrap();
            let u = sys.rotation(Axis::X, std::f64::consts::PI);
            let phase = I1.powu(n as u32);
            for i in 0..sys.dim() {
                let m = sys.m_at(i);
                let st = StateVector::basis(&sys, m).unwrap();
                let out = OperatorMatrix::general(u.entries.adjoint()).apply(&st).unwrap();
                let target = StateVector::basis(&sys, -m).unwrap();
                let diff: f64 = (0..sys.dim())
                    .map(|k| (out.coeffs[k] - phase * target.coeffs[k]).norm())
                    .fold(0.0, f64::max);
                assert!(diff <= 1e-12, "N={n} m={m}: defect {diff:.2e}");
            }
        }
    }

    #[test]
    fn rotation_2pi_parity() {
        for n in 1..=6usize {
            let sys = SpinSystem::new(n).unwrap();
            let u = sys.rotation(Axis::Y, 2.0 * std::f64::consts::PI);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            for i in 0..sys.dim() {
                for k in 0..sys.dim() {
                    let want = if i == k { cr(sign) } else { cr(0.0) };
                    assert!((u.entries[(i, k)] - want).norm() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn rotation_z_zero_is_identity() {
        let sys = SpinSystem::new(4).unwrap();
        let u = sys.rotation(Axis::Z, 0.0);
        assert!(u.unitarity_defect() <= 1e-14);
        assert!((u.entries[(0, 0)] - cr(1.0)).norm() <= 1e-14);
    }

    #[test]
    fn evolve_diagonal_generator_phases() {
        let sys = SpinSystem::new(4).unwrap();
        let delta = 0.7;
        let h = {
            let jz = sys.operator(Collective::Jz);
            OperatorMatrix::hermitian(jz.entries * cr(delta))
        };
        let t = 1.3;
        for m in [-2.0f64, 0.0, 1.0] {
            let st = StateVector::basis(&sys, m).unwrap();
            let out = evolve_unitary(&st, &h, t).unwrap();
            let want = (-I1 * cr(delta * m * t)).exp();
            assert!((out.coeffs[sys.index_of(m)] - want).norm() <= 1e-12);
        }
    }

    #[test]
    fn evolve_zero_time_identity() {
        let sys = SpinSystem::new(6).unwrap();
        let h = sys.operator(Collective::Jx);
        let st = StateVector::basis(&sys, 1.0).unwrap();
        let out = evolve_unitary(&st, &h, 0.0).unwrap();
        let diff: f64 = (0..sys.dim())
            .map(|k| (out.coeffs[k] - st.coeffs[k]).norm())
            .fold(0.0, f64::max);
        assert!(diff <= 1e-13);
    }

    #[test]
    fn evolve_rejects_non_hermitian() {
        let sys = SpinSystem::new(2).unwrap();
        let jp = sys.operator(Collective::Jplus);
        let st = StateVector::basis(&sys, 1.0).unwrap();
        assert!(matches!(evolve_unitary(&st, &jp, 1.0), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn evolve_composes_over_time() {
        let sys = SpinSystem::new(5).unwrap();
        let jx = sys.operator(Collective::Jx);
        let st = StateVector::basis(&sys, 0.5).unwrap();
        let once = evolve_unitary(&st, &jx, 0.9).unwrap();
        let twice = evolve_unitary(&evolve_unitary(&st, &jx, 0.4).unwrap(), &jx, 0.5).unwrap();
        let diff: f64 = (0..sys.dim())
            .map(|k| (once.coeffs[k] - twice.coeffs[k]).norm())
            .fold(0.0, f64::max);
        assert!(diff <= 1e-10);
    }

    #[test]
    fn squared_operators_are_matrix_squares() {
        let sys = SpinSystem::new(4).unwrap();
        let jx = sys.operator(Collective::Jx);
        let jx2 = sys.operator(Collective::Jx2);
        let err = (&jx.entries * &jx.entries - &jx2.entries)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-13);
    }

    #[test]
    fn twist_matches_expm() {
        let sys = SpinSystem::new(6).unwrap();
        let angle = 0.77;
        let tw = sys.twist(Axis::X, angle);
        let direct = expm_hermitian(&sys.operator(Collective::Jx2), angle).unwrap();
        assert!(tw.max_abs_diff(&direct) <= 1e-11);
        assert!(tw.unitarity_defect() <= 1e-11);
    }
}
