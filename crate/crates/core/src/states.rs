//! Input-state factories (spin coherent, spin cat, GHZ) and the exchange
//! symmetry classification the destructive-interferometry theorems rest on.

use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spin::{cr, Axis, OperatorMatrix, SpinSystem, StateVector, I1};

/// ln(k!) table up to n.
pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut t = vec![0.0f64; n + 1];
    for k in 1..=n {
        t[k] = t[k - 1] + (k as f64).ln();
    }
    t
}

/// Real magnitudes of the spin-coherent amplitudes at phi = 0:
/// C_m = sqrt((2J)!/((J+m)!(J-m)!)) cos^{J+m}(theta/2) sin^{J-m}(theta/2),
/// indexed descending m = J..-J. Computed in log space so N > 150 is safe.
pub(crate) fn scs_amplitudes(sys: &SpinSystem, theta: f64) -> Vec<f64> {
    let n = sys.n_particles();
    let lnf = ln_factorials(n);
    let ct = (theta / 2.0).cos();
    let st = (theta / 2.0).sin();
    (0..sys.dim())
        .map(|i| {
            let j_minus_m = i; // J - m
            let j_plus_m = n - i; // J + m
            if (ct == 0.0 && j_plus_m > 0) || (st == 0.0 && j_minus_m > 0) {
                return 0.0;
            }
            let mut lmag = 0.5 * (lnf[n] - lnf[j_plus_m] - lnf[j_minus_m]);
            if j_plus_m > 0 {
                lmag += j_plus_m as f64 * ct.ln();
            }
            if j_minus_m > 0 {
                lmag += j_minus_m as f64 * st.ln();
            }
            lmag.exp()
        })
        .collect()
}

/// Spin coherent state |theta, phi>, all N spins pointing along the same
/// Bloch direction.
pub fn spin_coherent(sys: &SpinSystem, theta: f64, phi: f64) -> Result<StateVector> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::Domain(format!("theta = {theta} outside [0, pi]")));
    }
    if !(0.0..2.0 * std::f64::consts::PI).contains(&phi) && phi != 0.0 {
        return Err(Error::Domain(format!("phi = {phi} outside [0, 2pi)")));
    }
    let mags = scs_amplitudes(sys, theta);
    let coeffs = DVector::from_iterator(
        sys.dim(),
        mags.iter().enumerate().map(|(i, &mag)| {
            let m = sys.m_at(i);
            cr(mag) * (-I1 * cr(m * phi)).exp()
        }),
    );
    StateVector::from_coeffs(sys, coeffs)
}

/// The equatorial coherent state |pi/2, 0>, the canonical separable probe.
pub fn scs_x(sys: &SpinSystem) -> StateVector {
    spin_coherent(sys, std::f64::consts::FRAC_PI_2, 0.0).unwrap()
}

/// Critical angle below which the two branches of the superposition are
/// quasi-orthogonal: theta_c = asin(2 ([(J-1)!]^2 / (2 (2J)!))^{1/(2J)}).
pub fn cat_critical_angle(sys: &SpinSystem) -> f64 {
    let n = sys.n_particles();
    let j = sys.j();
    let lnf = ln_factorials(n);
    // J is integral for even N; for odd N interpolate via ln-gamma of the table
    // is unnecessary since the guard is only a heuristic -- use floor(J).
    let jm1 = (j - 1.0).max(0.0) as usize;
    let ln_arg = 2.0 * lnf[jm1.min(n)] - (2.0f64).ln() - lnf[n];
    let x = 2.0 * (ln_arg / (2.0 * j)).exp();
    x.min(1.0).asin()
}

/// Macroscopic superposition of |theta,0> and |pi-theta,0> with exact
/// normalization; coefficients satisfy C_m = C_{-m} identically by
/// construction. Warns (does not fail) above the critical angle where the
/// branches overlap appreciably.
pub fn spin_cat(sys: &SpinSystem, theta: f64) -> Result<StateVector> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::Domain(format!("theta = {theta} outside [0, pi/2]")));
    }
    let theta_c = cat_critical_angle(sys);
    if theta > theta_c {
        log::warn!(
            "cat angle theta = {theta:.4} above critical angle {theta_c:.4}; \
             branches are not quasi-orthogonal"
        );
    }
    let (sums, norm) = cat_symmetric_sums(sys, theta);
    let inv = 1.0 / norm.sqrt();
    let dim = sys.dim();
    let mut coeffs = DVector::zeros(dim);
    for i in 0..dim {
        coeffs[i] = cr(sums[i] * inv);
    }
    StateVector::from_coeffs(sys, coeffs)
}

/// s_m = C_m + C_{-m} (mirrored exactly) and the normalization
/// N = sum_m s_m^2, both indexed descending m.
pub(crate) fn cat_symmetric_sums(sys: &SpinSystem, theta: f64) -> (Vec<f64>, f64) {
    let mags = scs_amplitudes(sys, theta);
    let dim = sys.dim();
    let mut sums = vec![0.0f64; dim];
    for i in 0..=(dim - 1) / 2 {
        let s = mags[i] + mags[dim - 1 - i];
        sums[i] = s;
        sums[dim - 1 - i] = s;
    }
    if dim % 2 == 1 {
        sums[dim / 2] = 2.0 * mags[dim / 2];
    }
    let norm: f64 = sums.iter().map(|s| s * s).sum();
    (sums, norm)
}

/// (|J,J> + |J,-J>)/sqrt(2), the theta = 0 cat state.
pub fn ghz(sys: &SpinSystem) -> StateVector {
    spin_cat(sys, 0.0).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryClass {
    Symmetric,
    Antisymmetric,
    None,
}

/// Classify C_m = +-C_{-m} up to `tol` (entrywise complex distance).
pub fn symmetry_class(state: &StateVector, tol: f64) -> SymmetryClass {
    let dim = state.dim();
    let mut sym = 0.0f64;
    let mut asym = 0.0f64;
    for i in 0..dim {
        let a = state.coeffs[i];
        let b = state.coeffs[dim - 1 - i];
        sym = sym.max((a - b).norm());
        asym = asym.max((a + b).norm());
    }
    if dim % 2 == 1 {
        // antisymmetry forces C_0 = 0
        asym = asym.max(state.coeffs[dim / 2].norm());
    }
    if sym <= tol {
        SymmetryClass::Symmetric
    } else if asym <= tol {
        SymmetryClass::Antisymmetric
    } else {
        SymmetryClass::None
    }
}

/// Test whether `state` is an eigenstate of the exchange transformation
/// U_ex^dag = e^{+i pi Jx}; eigenvalues are +-i^N.
pub fn is_exchange_eigenstate(state: &StateVector, tol: f64) -> (bool, Option<C64>) {
    let sys = state.system();
    let u = sys.rotation(Axis::X, std::f64::consts::PI);
    let applied = OperatorMatrix::general(u.entries.adjoint()).apply(state).unwrap();
    // proportionality against the largest component
    let mut imax = 0;
    for i in 0..state.dim() {
        if state.coeffs[i].norm() > state.coeffs[imax].norm() {
            imax = i;
        }
    }
    if state.coeffs[imax].norm() < tol {
        return (false, None);
    }
    let lambda = applied.coeffs[imax] / state.coeffs[imax];
    let defect = (0..state.dim())
        .map(|i| (applied.coeffs[i] - lambda * state.coeffs[i]).norm())
        .fold(0.0, f64::max);
    if defect <= tol && (lambda.norm() - 1.0).abs() <= tol {
        (true, Some(lambda))
    } else {
        (false, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{evolve_unitary, Collective};
    use approx::assert_relative_eq;

    #[test]
    fn coherent_poles() {
        let sys = SpinSystem::new(8).unwrap();
        let up = spin_coherent(&sys, 0.0, 1.0).unwrap();
        assert_relative_eq!(up.coeffs[0].re, 1.0, epsilon = 1e-14);
        assert!(up.coeffs.iter().skip(1).all(|c| c.norm() == 0.0));
    }

    #[test]
    fn coherent_n2_equator() {
        let sys = SpinSystem::new(2).unwrap();
        let st = spin_coherent(&sys, std::f64::consts::FRAC_PI_2, 0.0).unwrap();
        let want = [0.5, std::f64::consts::FRAC_1_SQRT_2, 0.5];
        for (i, w) in want.iter().enumerate() {
            assert_relative_eq!(st.coeffs[i].re, *w, epsilon = 1e-12);
        }
    }

    #[test]
    fn coherent_matches_rotated_pole() {
        // |pi/2, 0> = e^{-i pi/2 Jy} |J,J>
        let sys = SpinSystem::new(20).unwrap();
        let direct = scs_x(&sys);
        let pole = StateVector::basis(&sys, sys.j()).unwrap();
        let rot = evolve_unitary(&pole, &sys.operator(Collective::Jy), std::f64::consts::FRAC_PI_2)
            .unwrap();
        let diff: f64 = (0..sys.dim())
            .map(|i| (direct.coeffs[i] - rot.coeffs[i]).norm())
            .fold(0.0, f64::max);
        assert!(diff <= 1e-12, "defect {diff:.2e}");
    }

    #[test]
    fn coherent_rejects_bad_angles() {
        let sys = SpinSystem::new(4).unwrap();
        assert!(spin_coherent(&sys, -0.1, 0.0).is_err());
        assert!(spin_coherent(&sys, 0.3, 7.0).is_err());
    }

    #[test]
    fn ghz_coefficients() {
        let sys = SpinSystem::new(4).unwrap();
        let g = ghz(&sys);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(g.coeffs[0].re, r, epsilon = 1e-14);
        assert_relative_eq!(g.coeffs[4].re, r, epsilon = 1e-14);
        for i in 1..4 {
            assert!(g.coeffs[i].norm() <= 1e-15);
        }
        // variance <Jz^2> - <Jz>^2 = N^2/4
        let jz = sys.operator(Collective::Jz);
        let jz2 = sys.operator(Collective::Jz2);
        let var = g.expectation(&jz2).unwrap() - g.expectation(&jz).unwrap().powi(2);
        assert_relative_eq!(var, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn cat_normalized_and_symmetric() {
        let sys = SpinSystem::new(20).unwrap();
        for theta in [0.0, 0.2, std::f64::consts::PI / 8.0, 1.2] {
            let cst = spin_cat(&sys, theta).unwrap();
            assert!((cst.norm() - 1.0).abs() <= 1e-12);
            let dim = sys.dim();
            for i in 0..dim {
                let d = (cst.coeffs[i] - cst.coeffs[dim - 1 - i]).norm();
                assert_eq!(d, 0.0, "C_m != C_-m at i={i}");
            }
        }
    }

    #[test]
    fn cat_approaches_equator() {
        // at theta = pi/2 the two branches coincide with |pi/2, 0>
        let sys = SpinSystem::new(12).unwrap();
        let cst = spin_cat(&sys, std::f64::consts::FRAC_PI_2).unwrap();
        let scs = scs_x(&sys);
        let overlap = cst.inner(&scs).norm();
        assert!(overlap > 0.999, "overlap {overlap}");
    }

    #[test]
    fn scs_expectations() {
        let sys = SpinSystem::new(16).unwrap();
        let st = scs_x(&sys);
        let jz = sys.operator(Collective::Jz);
        let jz2 = sys.operator(Collective::Jz2);
        assert!(st.expectation(&jz).unwrap().abs() <= 1e-12);
        assert_relative_eq!(st.expectation(&jz2).unwrap(), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn classify_states() {
        let sys = SpinSystem::new(2).unwrap();
        assert_eq!(symmetry_class(&scs_x(&sys), 1e-12), SymmetryClass::Symmetric);
        let pole = StateVector::basis(&sys, 1.0).unwrap();
        assert_eq!(symmetry_class(&pole, 1e-12), SymmetryClass::None);
        let mut coeffs = DVector::zeros(3);
        coeffs[0] = cr(std::f64::consts::FRAC_1_SQRT_2);
        coeffs[2] = cr(-std::f64::consts::FRAC_1_SQRT_2);
        let anti = StateVector::from_coeffs(&sys, coeffs).unwrap();
        assert_eq!(symmetry_class(&anti, 1e-12), SymmetryClass::Antisymmetric);
    }

    #[test]
    fn exchange_eigenstates() {
        for n in [3usize, 4, 7, 10] {
            let sys = SpinSystem::new(n).unwrap();
            let phase = I1.powu(n as u32);
            if n % 2 == 0 {
                let (ok, lam) = is_exchange_eigenstate(&ghz(&sys), 1e-10);
                assert!(ok);
                assert!((lam.unwrap() - phase).norm() <= 1e-10);
            }
            let (ok, lam) = is_exchange_eigenstate(&scs_x(&sys), 1e-10);
            assert!(ok, "N={n} SCS_x should be an exchange eigenstate");
            assert!((lam.unwrap() - phase).norm() <= 1e-10);
            let tilted = spin_coherent(&sys, std::f64::consts::FRAC_PI_4, 0.0).unwrap();
            let (ok, _) = is_exchange_eigenstate(&tilted, 1e-10);
            assert!(!ok, "N={n} tilted SCS is not an exchange eigenstate");
        }
    }

    #[test]
    fn critical_angle_sane() {
        let sys = SpinSystem::new(20).unwrap();
        let tc = cat_critical_angle(&sys);
        // pi/8 should sit below the critical angle for N = 20
        assert!(tc > std::f64::consts::PI / 8.0 * 0.8, "theta_c = {tc}");
        assert!(tc < std::f64::consts::FRAC_PI_2);
    }
}
