//! Photon creation in 3D cavities: analytic single-mode growth rates and a
//! direct integration of the Mathieu-type mode equation
//! `Q̈ + ω²(t) Q = 0` used to check them.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, DceError, Result};
use crate::model::{CavityGeometry, HarmonicLaw, ModeId, ModeIndices, Polarization};
use crate::numerics::{fit_line, LineFit};
use crate::specfun::{root, RootFamily};
use crate::spectra::eigenfrequency;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthLaw {
    /// `N = sinh²(λ ε t)` (waveguides).
    SinhSq,
    /// `N ~ e^{2γεt}` (sphere), evaluated as `sinh²(γ ε t)`.
    Exp2Gamma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRate {
    pub mode: ModeId,
    /// `λ` or `γ`, per unit `ε t`.
    pub rate: f64,
    pub law: GrowthLaw,
    pub omega: f64,
    /// Longitudinal wavenumber (waveguides).
    pub kz: Option<f64>,
    /// Radial root `κ` or `j_ℓn` (sphere).
    pub radial_root: Option<f64>,
}

impl GrowthRate {
    /// False when the drive cannot amplify the mode (`k_z = 0` TE).
    pub fn is_resonant(&self) -> bool {
        self.rate > 0.0
    }
}

/// Growth rate of a mode driven at `Ω = 2ω`.
///
/// Waveguides: `λ_TE = k_z²/(2ω)`, `λ_TM = (2ω² - k_z²)/(2ω)`.
/// Sphere: `γ_TE = ω/2`, `γ_TM = (ω/2)(1 + ℓ(ℓ+1)/κ²)/(1 - ℓ(ℓ+1)/κ²)`.
pub fn growth_rate(geom: &CavityGeometry, mode: &ModeId) -> Result<GrowthRate> {
    let omega = eigenfrequency(geom, mode, 0.0)?;
    match (geom, mode.indices) {
        (CavityGeometry::Rectangular { .. } | CavityGeometry::Circular { .. }, _) => {
            let nz = mode.nz().expect("waveguide mode");
            let kz = f64::from(nz) * PI / geom.rest_dimension();
            let rate = match mode.polarization {
                Polarization::TE => kz * kz / (2.0 * omega),
                _ => (2.0 * omega * omega - kz * kz) / (2.0 * omega),
            };
            if rate == 0.0 {
                log::info!("{mode} has k_z = 0 and is not amplified by the wall");
            }
            Ok(GrowthRate {
                mode: mode.with_omega(omega),
                rate,
                law: GrowthLaw::SinhSq,
                omega,
                kz: Some(kz),
                radial_root: None,
            })
        }
        (CavityGeometry::Sphere { .. }, ModeIndices::Spherical { ell, n }) => {
            let (rate, x) = match mode.polarization {
                Polarization::TE => (0.5 * omega, root(RootFamily::SphJZero, ell, n)?),
                _ => {
                    let kappa = root(RootFamily::RiccatiPrimeZero, ell, n)?;
                    let r = f64::from(ell * (ell + 1)) / (kappa * kappa);
                    if r >= 1.0 {
                        return Err(DceError::Singularity(format!(
                            "kappa^2 = {} does not exceed l(l+1) = {}",
                            kappa * kappa,
                            ell * (ell + 1)
                        )));
                    }
                    (0.5 * omega * (1.0 + r) / (1.0 - r), kappa)
                }
            };
            Ok(GrowthRate {
                mode: mode.with_omega(omega),
                rate,
                law: GrowthLaw::Exp2Gamma,
                omega,
                kz: None,
                radial_root: Some(x),
            })
        }
        _ => Err(DceError::Constraint(format!(
            "{mode}: the {} spectrum is equidistant; use the Bogoliubov engine",
            geom.name()
        ))),
    }
}

/// `sinh²(rate ε t)`; for the sphere this tends to `e^{2γεt}/4`.
pub fn photon_number_analytic(rate: &GrowthRate, epsilon: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(invalid("t", format!("must be non-negative, got {t}")));
    }
    Ok((rate.rate * epsilon * t).sinh().powi(2))
}

/// Largest `ε` accepted by [`mathieu_evolve`].
pub const MATHIEU_MAX_EPSILON: f64 = 0.05;
/// Smallest accepted `steps_per_period`.
pub const MIN_STEPS_PER_PERIOD: u32 = 200;
/// Allowed relative change of the final `N` when the step is halved.
pub const STEP_HALVING_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MathieuSettings {
    pub epsilon: f64,
    /// Number of drive periods to integrate.
    pub n_periods: u32,
    pub steps_per_period: u32,
    /// Drive at `Ω = 2ω(0)(1 + detuning)`.
    pub detuning: f64,
}

impl MathieuSettings {
    pub fn new(epsilon: f64, n_periods: u32) -> Self {
        Self {
            epsilon,
            n_periods,
            steps_per_period: 1000,
            detuning: 0.0,
        }
    }
}

/// Stroboscopic record of a single driven mode, one sample per drive period.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeEvolution {
    pub mode: ModeId,
    pub times: Vec<f64>,
    pub q: Vec<Complex64>,
    pub qdot: Vec<Complex64>,
    /// Adiabatic photon number `(|Q̇|² + ω²|Q|²)/(2ω) - ½`.
    pub n: Vec<f64>,
    pub omega0: f64,
    pub drive: f64,
    /// How `ω(t)` was built, for output headers.
    pub omega_of_t: String,
}

impl ModeEvolution {
    /// `Im(Q* Q̇)` at each sample; constant for the exact flow.
    pub fn wronskian(&self) -> Vec<f64> {
        self.q.iter().zip(&self.qdot).map(|(q, p)| (q.conj() * p).im).collect()
    }
}

/// `ω` as a function of the moving dimension `d`.
#[derive(Debug, Clone, Copy)]
enum FrequencyLaw {
    /// `ω² = k_t² + (n_z π / d)²`
    Guide { kt2: f64, nz: f64 },
    /// `ω = x / d`
    Ball { x: f64 },
}

impl FrequencyLaw {
    fn omega_sq(self, d: f64) -> f64 {
        match self {
            Self::Guide { kt2, nz } => kt2 + (nz * PI / d).powi(2),
            Self::Ball { x } => (x / d).powi(2),
        }
    }
}

fn frequency_law(geom: &CavityGeometry, mode: &ModeId) -> Result<FrequencyLaw> {
    if mode.polarization != Polarization::TE {
        return Err(DceError::Constraint(format!(
            "{mode}: only TE modes reduce to a single Mathieu equation"
        )));
    }
    let omega = eigenfrequency(geom, mode, 0.0)?;
    let d = geom.rest_dimension();
    Ok(match geom {
        CavityGeometry::Sphere { .. } => FrequencyLaw::Ball { x: omega * d },
        _ => {
            let nz = f64::from(mode.nz().expect("waveguide mode"));
            FrequencyLaw::Guide {
                kt2: omega * omega - (nz * PI / d).powi(2),
                nz,
            }
        }
    })
}

/// Integrates `Q̈ + ω²(t) Q = 0` from vacuum initial data with the moving
/// dimension oscillating as `d0 (1 + ε sin Ωt)`, `Ω = 2ω(0)(1 + detuning)`.
///
/// Fourth-order symplectic splitting (Omelyan–Mryglod–Folk), with time
/// carried as a drift coordinate. The run is repeated at half the step and
/// rejected if the final `N` moves by more than [`STEP_HALVING_TOL`].
pub fn mathieu_evolve(
    geom: &CavityGeometry,
    mode: &ModeId,
    settings: &MathieuSettings,
) -> Result<ModeEvolution> {
    if !(settings.epsilon.abs() <= MATHIEU_MAX_EPSILON) {
        return Err(invalid(
            "eps",
            format!("must satisfy |eps| <= {MATHIEU_MAX_EPSILON}, got {}", settings.epsilon),
        ));
    }
    if settings.steps_per_period < MIN_STEPS_PER_PERIOD {
        return Err(invalid(
            "steps",
            format!("need at least {MIN_STEPS_PER_PERIOD} steps per period"),
        ));
    }
    if settings.n_periods == 0 {
        return Err(invalid("periods", "need at least one drive period"));
    }
    if !(settings.detuning.is_finite() && settings.detuning > -1.0) {
        return Err(invalid("detuning", "must exceed -1"));
    }
    let law = frequency_law(geom, mode)?;
    let d0 = geom.rest_dimension();
    let omega0 = law.omega_sq(d0).sqrt();
    let drive = 2.0 * omega0 * (1.0 + settings.detuning);
    let period = 2.0 * PI / drive;
    let wall = HarmonicLaw::new(d0, settings.epsilon, drive, period * f64::from(settings.n_periods))?;

    let run = |steps_per_period: u32| integrate(law, &wall, omega0, period, settings.n_periods, steps_per_period);
    let coarse = run(settings.steps_per_period);
    let fine = run(2 * settings.steps_per_period);
    let (a, b) = (coarse.n.last().copied().unwrap(), fine.n.last().copied().unwrap());
    let scale = b.abs().max(1.0);
    if !((a - b).abs() <= STEP_HALVING_TOL * scale) {
        return Err(DceError::Accuracy(format!(
            "photon number changed from {a:e} to {b:e} when halving the step; raise steps-per-period"
        )));
    }
    let omega_of_t = format!(
        "omega(d) for {mode}, d(t) = {d0}*(1 + {}*sin({drive}*t))",
        settings.epsilon
    );
    Ok(ModeEvolution {
        mode: mode.with_omega(omega0),
        times: coarse.times,
        q: coarse.q,
        qdot: coarse.qdot,
        n: coarse.n,
        omega0,
        drive,
        omega_of_t,
    })
}

struct Trace {
    times: Vec<f64>,
    q: Vec<Complex64>,
    qdot: Vec<Complex64>,
    n: Vec<f64>,
}

fn integrate(
    law: FrequencyLaw,
    wall: &HarmonicLaw,
    omega0: f64,
    period: f64,
    n_periods: u32,
    steps_per_period: u32,
) -> Trace {
    // Position-extended PEFRL coefficients.
    const XI: f64 = 0.178_617_895_844_809_1;
    const LAMBDA: f64 = -0.212_341_831_062_605_4;
    const CHI: f64 = -0.066_264_582_669_818_5;
    let drifts = [XI, CHI, 1.0 - 2.0 * (CHI + XI), CHI, XI];
    let kicks = [0.5 * (1.0 - 2.0 * LAMBDA), LAMBDA, LAMBDA, 0.5 * (1.0 - 2.0 * LAMBDA)];

    let h = period / f64::from(steps_per_period);
    let mut q = Complex64::new(1.0 / (2.0 * omega0).sqrt(), 0.0);
    let mut p = Complex64::new(0.0, -omega0) * q;
    let photons = |q: Complex64, p: Complex64, t: f64| {
        let w2 = law.omega_sq(wall.value(t));
        (p.norm_sqr() + w2 * q.norm_sqr()) / (2.0 * w2.sqrt()) - 0.5
    };
    let mut trace = Trace {
        times: vec![0.0],
        q: vec![q],
        qdot: vec![p],
        // Vacuum initial data: N(0) = 0 by construction.
        n: vec![0.0],
    };
    for k in 1..=n_periods {
        let start = period * f64::from(k - 1);
        for s in 0..steps_per_period {
            let mut t = start + h * f64::from(s);
            for i in 0..4 {
                q += drifts[i] * h * p;
                t += drifts[i] * h;
                p -= kicks[i] * h * law.omega_sq(wall.value(t)) * q;
            }
            q += drifts[4] * h * p;
        }
        let t = period * f64::from(k);
        trace.times.push(t);
        trace.q.push(q);
        trace.qdot.push(p);
        trace.n.push(photons(q, p, t));
    }
    trace
}

/// Least-squares slope of `ln N` against `t` over `λεt ∈ [2, 5]`, using the
/// samples with `N > 10` when at least three exist there and every positive
/// sample otherwise (an off-resonant run never reaches the deep regime).
pub fn fit_growth(evolution: &ModeEvolution, rate: &GrowthRate, epsilon: f64) -> Result<LineFit> {
    let scale = rate.rate * epsilon.abs();
    if !(scale > 0.0) {
        return Err(invalid("eps", "the fit window needs a positive rate and epsilon"));
    }
    let (lo, hi) = (2.0 / scale, 5.0 / scale);
    let window: Vec<(f64, f64)> = evolution
        .times
        .iter()
        .zip(&evolution.n)
        .filter(|(t, _)| (lo..=hi).contains(*t))
        .map(|(t, n)| (*t, *n))
        .collect();
    let deep: Vec<_> = window.iter().copied().filter(|(_, n)| *n > 10.0).collect();
    let used = if deep.len() >= 3 {
        deep
    } else {
        window.into_iter().filter(|(_, n)| *n > 0.0).collect()
    };
    let (t, ln_n): (Vec<f64>, Vec<f64>) = used.iter().map(|(t, n)| (*t, n.ln())).unzip();
    fit_line(&t, &ln_n).ok_or_else(|| {
        DceError::Numeric(format!(
            "fewer than two usable samples in t in [{lo:.1}, {hi:.1}]; run at least {} periods",
            (hi * evolution.drive / (2.0 * PI)).ceil()
        ))
    })
}
