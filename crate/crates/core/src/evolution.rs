//! Executable pulse schedules (finite and ideal pulses), Lindblad
//! master-equation integration with collective dephasing, and seeded
//! stochastic noise trajectories.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::spin::{
    cr, evolve_unitary, Axis, Collective, DensityMatrix, OperatorMatrix, SpinSystem, StateVector,
    Tolerances, I1,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseAxis {
    X,
    Y,
    Z,
    None,
}

impl PulseAxis {
    fn as_axis(self) -> Option<Axis> {
        match self {
            PulseAxis::X => Some(Axis::X),
            PulseAxis::Y => Some(Axis::Y),
            PulseAxis::Z => Some(Axis::Z),
            PulseAxis::None => None,
        }
    }
}

/// One piecewise-constant window of H = chi Jz^2 + delta Jz + rabi J_axis.
#[derive(Debug, Clone, Copy)]
pub struct Segment {
    pub duration: f64,
    pub chi: f64,
    pub delta: f64,
    pub rabi: f64,
    pub axis: PulseAxis,
}

impl Segment {
    pub fn free(duration: f64, chi: f64, delta: f64) -> Self {
        Segment { duration, chi, delta, rabi: 0.0, axis: PulseAxis::None }
    }

    pub fn pulse(duration: f64, chi: f64, delta: f64, rabi: f64, axis: PulseAxis) -> Self {
        Segment { duration, chi, delta, rabi, axis }
    }

    fn is_diagonal(&self) -> bool {
        self.rabi == 0.0 || self.axis == PulseAxis::None || self.axis == PulseAxis::Z
    }

    /// Spectral-radius estimate chi N^2/4 + |delta| N/2 + |rabi| N/2.
    fn norm_estimate(&self, sys: &SpinSystem) -> f64 {
        let j = sys.j();
        self.chi.abs() * j * j + self.delta.abs() * j + self.rabi.abs() * j
    }

    fn hamiltonian(&self, sys: &SpinSystem) -> OperatorMatrix {
        let mut h = sys.operator(Collective::Jz2).entries * cr(self.chi)
            + sys.operator(Collective::Jz).entries * cr(self.delta);
        if let (Some(axis), true) = (self.axis.as_axis(), self.rabi != 0.0) {
            let op = match axis {
                Axis::X => sys.operator(Collective::Jx),
                Axis::Y => sys.operator(Collective::Jy),
                Axis::Z => sys.operator(Collective::Jz),
            };
            h += op.entries * cr(self.rabi);
        }
        OperatorMatrix::hermitian(h)
    }
}

/// Instantaneous rotation exp(-i angle J_axis), fired at the boundary before
/// segment `position` (position == segments.len() fires at the very end).
#[derive(Debug, Clone, Copy)]
pub struct InstantRotation {
    pub position: usize,
    pub axis: Axis,
    pub angle: f64,
}

/// Ordered pulse schedule: the executable form of every protocol.
#[derive(Debug, Clone, Default)]
pub struct PulseSchedule {
    pub segments: Vec<Segment>,
    pub impulses: Vec<InstantRotation>,
}

impl PulseSchedule {
    pub fn validate(&self) -> Result<()> {
        for s in &self.segments {
            if !(s.duration >= 0.0 && s.duration.is_finite()) {
                return Err(Error::Domain(format!("segment duration {} invalid", s.duration)));
            }
            if s.axis == PulseAxis::None && s.rabi != 0.0 {
                return Err(Error::Domain("segment with axis=none must have rabi=0".into()));
            }
        }
        for imp in &self.impulses {
            if imp.position > self.segments.len() {
                return Err(Error::Domain(format!(
                    "impulse position {} beyond {} segments",
                    imp.position,
                    self.segments.len()
                )));
            }
        }
        Ok(())
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    fn impulses_at(&self, position: usize) -> impl Iterator<Item = &InstantRotation> {
        self.impulses.iter().filter(move |imp| imp.position == position)
    }

    /// Left-to-right application of exp(-i H_seg duration) per segment,
    /// interleaving instantaneous rotations.
    pub fn evolve(&self, state: &StateVector) -> Result<StateVector> {
        self.validate()?;
        let sys = state.system();
        if state.dim() != sys.dim() {
            return Err(Error::Dimension { expected: sys.dim(), got: state.dim() });
        }
        let mut psi = state.clone();
        for (k, seg) in self.segments.iter().enumerate() {
            for imp in self.impulses_at(k) {
                psi = sys.rotation(imp.axis, imp.angle).apply(&psi)?;
            }
            psi = evolve_segment(&sys, &psi, seg)?;
        }
        for imp in self.impulses_at(self.segments.len()) {
            psi = sys.rotation(imp.axis, imp.angle).apply(&psi)?;
        }
        psi.check_normalized(Tolerances::default().state_norm)?;
        Ok(psi)
    }

    /// Density-matrix execution with collective Jz dephasing at rate
    /// noise.dephasing_rate. Diagonal segments use the exact dephasing
    /// propagator; pulse segments integrate the master equation by RK4.
    pub fn evolve_density(&self, rho: &DensityMatrix, noise: &NoiseModel) -> Result<DensityMatrix> {
        self.validate()?;
        let sys = SpinSystem::new(rho.dim() - 1)?;
        let gamma = noise.dephasing_rate;
        let mut r = rho.clone();
        for (k, seg) in self.segments.iter().enumerate() {
            for imp in self.impulses_at(k) {
                r = r.conjugated(&sys.rotation(imp.axis, imp.angle));
            }
            r = evolve_segment_density(&sys, &r, seg, gamma)?;
        }
        for imp in self.impulses_at(self.segments.len()) {
            r = r.conjugated(&sys.rotation(imp.axis, imp.angle));
        }
        r.check_invariants(&Tolerances::default())?;
        Ok(r)
    }

    /// Compose the whole schedule into a single unitary.
    pub fn unitary(&self, sys: &SpinSystem) -> Result<OperatorMatrix> {
        self.validate()?;
        let dim = sys.dim();
        let mut u = DMatrix::identity(dim, dim);
        for (k, seg) in self.segments.iter().enumerate() {
            for imp in self.impulses_at(k) {
                u = sys.rotation(imp.axis, imp.angle).entries * u;
            }
            if seg.duration > 0.0 {
                let useg = crate::spin::expm_hermitian(&seg.hamiltonian(sys), seg.duration)?;
                u = useg.entries * u;
            }
        }
        for imp in self.impulses_at(self.segments.len()) {
            u = sys.rotation(imp.axis, imp.angle).entries * u;
        }
        Ok(OperatorMatrix::unitary(u))
    }
}

fn evolve_segment(sys: &SpinSystem, psi: &StateVector, seg: &Segment) -> Result<StateVector> {
    if seg.duration == 0.0 {
        return Ok(psi.clone());
    }
    if seg.is_diagonal() {
        // H = chi Jz^2 + (delta + rabi_z) Jz is diagonal: exact phases
        let delta = seg.delta + if seg.axis == PulseAxis::Z { seg.rabi } else { 0.0 };
        let mut out = psi.clone();
        for i in 0..out.dim() {
            let m = sys.m_at(i);
            out.coeffs[i] *= (-I1 * cr((seg.chi * m * m + delta * m) * seg.duration)).exp();
        }
        Ok(out)
    } else {
        evolve_unitary(psi, &seg.hamiltonian(sys), seg.duration)
    }
}

fn evolve_segment_density(
    sys: &SpinSystem,
    rho: &DensityMatrix,
    seg: &Segment,
    gamma: f64,
) -> Result<DensityMatrix> {
    if seg.duration == 0.0 {
        return Ok(rho.clone());
    }
    if seg.is_diagonal() {
        // exact propagator: rho_ik -> rho_ik e^{-i(E_i - E_k) t} e^{-gamma (m_i - m_k)^2 t / 2}
        let delta = seg.delta + if seg.axis == PulseAxis::Z { seg.rabi } else { 0.0 };
        let dim = sys.dim();
        let mut out = rho.entries.clone();
        for i in 0..dim {
            let mi = sys.m_at(i);
            let ei = seg.chi * mi * mi + delta * mi;
            for k in 0..dim {
                let mk = sys.m_at(k);
                let ek = seg.chi * mk * mk + delta * mk;
                let damp = (-gamma * (mi - mk).powi(2) * seg.duration / 2.0).exp();
                out[(i, k)] *= (-I1 * cr((ei - ek) * seg.duration)).exp() * cr(damp);
            }
        }
        Ok(DensityMatrix { entries: out })
    } else if gamma == 0.0 {
        let u = crate::spin::expm_hermitian(&seg.hamiltonian(sys), seg.duration)?;
        Ok(rho.conjugated(&u))
    } else {
        let h = seg.hamiltonian(sys);
        let dt = 0.05 / seg.norm_estimate(sys).max(1e-12);
        let noise = NoiseModel { dephasing_rate: gamma, ..NoiseModel::default() };
        lindblad_evolve(rho, &h, &noise, seg.duration, dt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DephasingOperator {
    Jz,
}

/// Markovian noise description: collective dephasing rate, white-noise
/// strength for stochastic trajectories, and the ensemble bookkeeping.
#[derive(Debug, Clone, Copy)]
pub struct NoiseModel {
    pub dephasing_rate: f64,
    pub dephasing_operator: DephasingOperator,
    pub white_noise_sigma: f64,
    pub seed: u64,
    pub ensemble_size: usize,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            dephasing_rate: 0.0,
            dephasing_operator: DephasingOperator::Jz,
            white_noise_sigma: 0.0,
            seed: 0,
            ensemble_size: 200,
        }
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        if self.dephasing_rate < 0.0 || self.white_noise_sigma < 0.0 {
            return Err(Error::Domain("noise rates must be >= 0".into()));
        }
        if self.ensemble_size == 0 {
            return Err(Error::Domain("ensemble_size must be >= 1".into()));
        }
        Ok(())
    }

    /// Per-trajectory seed, derived as seed xor index.
    pub fn trajectory_seed(&self, index: usize) -> u64 {
        self.seed ^ index as u64
    }
}

fn lindblad_rhs(h: &DMatrix<C64>, mvals: &[f64], gamma: f64, rho: &DMatrix<C64>) -> DMatrix<C64> {
    let mut out = (h * rho - rho * h) * (-I1);
    if gamma > 0.0 {
        // Jz rho Jz - (1/2){Jz^2, rho} is entrywise -gamma/2 (m_i - m_k)^2 rho_ik
        let n = mvals.len();
        for i in 0..n {
            for k in 0..n {
                out[(i, k)] += cr(-gamma / 2.0 * (mvals[i] - mvals[k]).powi(2)) * rho[(i, k)];
            }
        }
    }
    out
}

/// Fixed-step RK4 integration of
/// d rho/dt = -i[H, rho] + gamma_z (Jz rho Jz - 1/2 {Jz^2, rho}).
pub fn lindblad_evolve(
    rho: &DensityMatrix,
    h: &OperatorMatrix,
    noise: &NoiseModel,
    t: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    noise.validate()?;
    if !h.hermitian_hint {
        return Err(Error::NonHermitian(h.hermiticity_defect()));
    }
    if h.dim() != rho.dim() {
        return Err(Error::Dimension { expected: rho.dim(), got: h.dim() });
    }
    if dt <= 0.0 || t < 0.0 {
        return Err(Error::Domain("need dt > 0 and t >= 0".into()));
    }
    let sys = SpinSystem::new(rho.dim() - 1)?;
    let mvals: Vec<f64> = (0..sys.dim()).map(|i| sys.m_at(i)).collect();
    let gamma = noise.dephasing_rate;
    let steps = (t / dt).ceil().max(1.0) as usize;
    let hstep = t / steps as f64;
    let mut r = rho.entries.clone();
    for _ in 0..steps {
        let k1 = lindblad_rhs(&h.entries, &mvals, gamma, &r);
        let k2 = lindblad_rhs(&h.entries, &mvals, gamma, &(&r + &k1 * cr(hstep / 2.0)));
        let k3 = lindblad_rhs(&h.entries, &mvals, gamma, &(&r + &k2 * cr(hstep / 2.0)));
        let k4 = lindblad_rhs(&h.entries, &mvals, gamma, &(&r + &k3 * cr(hstep)));
        r += (k1 + k2 * cr(2.0) + k3 * cr(2.0) + k4) * cr(hstep / 6.0);
    }
    let out = DensityMatrix { entries: r };
    let lo = out.min_eigenvalue();
    if lo < -1e-6 {
        return Err(Error::Positivity { min_eig: lo, dt: hstep / 2.0 });
    }
    Ok(out)
}

/// Verify U_ex^dag L[rho] U_ex == L[U_ex^dag rho U_ex] entrywise (<= 1e-10)
/// for `trials` random full-rank density matrices, with the dissipator built
/// from `l_op` at unit rate.
pub fn dissipator_covariance_check_op(
    sys: &SpinSystem,
    l_op: &OperatorMatrix,
    trials: usize,
    seed: u64,
) -> bool {
    let dim = sys.dim();
    let uex = sys.rotation(Axis::X, std::f64::consts::PI);
    let uexd = uex.entries.adjoint();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dissipator = |rho: &DMatrix<C64>| -> DMatrix<C64> {
        let l = &l_op.entries;
        let ld = l.adjoint();
        let ldl = &ld * l;
        l * rho * &ld - (&ldl * rho + rho * &ldl) * cr(0.5)
    };
    for _ in 0..trials.max(1) {
        let g = DMatrix::from_fn(dim, dim, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let mut rho = &g * g.adjoint();
        let tr: C64 = (0..dim).map(|i| rho[(i, i)]).sum();
        rho /= tr;
        let lhs = &uexd * dissipator(&rho) * &uex.entries;
        let rhs = dissipator(&(&uexd * &rho * &uex.entries));
        let err = (&lhs - &rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if err > 1e-10 {
            return false;
        }
    }
    true
}

/// Covariance check for the noise model's own dissipator (Jz dephasing).
/// Vacuously true at zero rate.
pub fn dissipator_covariance_check(noise: &NoiseModel, sys: &SpinSystem, trials: usize) -> bool {
    if noise.dephasing_rate == 0.0 {
        return true;
    }
    let jz = sys.operator(Collective::Jz);
    let scaled = OperatorMatrix::general(jz.entries * cr(noise.dephasing_rate.sqrt()));
    dissipator_covariance_check_op(sys, &scaled, trials, noise.seed)
}

/// Piecewise-constant noise samples N_z g_k with g_k ~ Normal(0,1),
/// reproducible from the seed.
#[derive(Debug, Clone)]
pub struct NoiseTrajectory {
    pub dt: f64,
    pub samples: Vec<f64>,
}

impl NoiseTrajectory {
    pub fn value_at(&self, t: f64) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        let idx = ((t / self.dt).floor() as usize).min(self.samples.len() - 1);
        self.samples[idx]
    }
}

pub fn noise_trajectory(noise: &NoiseModel, duration: f64, dt: f64) -> Result<NoiseTrajectory> {
    if dt <= 0.0 {
        return Err(Error::Domain("noise trajectory needs dt > 0".into()));
    }
    let count = (duration / dt).ceil().max(0.0) as usize;
    if noise.white_noise_sigma == 0.0 {
        return Ok(NoiseTrajectory { dt, samples: vec![0.0; count] });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let samples = (0..count)
        .map(|_| noise.white_noise_sigma * rng.sample::<f64, _>(StandardNormal))
        .collect();
    Ok(NoiseTrajectory { dt, samples })
}
