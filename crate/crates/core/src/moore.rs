//! The 1+1 engine: Moore's function `R(t)` for a cavity `[0, L(t)]`, the
//! Dirichlet and Neumann mode functions built from it, the renormalised
//! vacuum energy density, and Bogoliubov coefficients at the stop time.
//!
//! `R` solves `R(t + L(t)) - R(t - L(t)) = 2` with `R(t) = t / L0` on
//! `[-L0, L0]`. Three representations are available:
//!
//! * [`MooreKind::StaticLinear`]: `R(t) = t / L0`, the motionless cavity.
//! * [`MooreKind::RgClosedForm`]: the resummed closed form, accurate to
//!   first order in `ε` while `ε² Ω t ≪ 1`.
//! * [`MooreKind::NumericSampled`]: the exact solution, evaluated by
//!   walking characteristics back into the initial segment.
//!
//! All three return `R`, `R'`, `R''` and `R'''` analytically; see
//! [`MooreFunction::fd_jet`] for the finite-difference cross-check.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, DceError, Result};
use crate::model::{linspace, MirrorTrajectory, SampledSeries};
use crate::numerics::{simpson_nodes_split, MonotoneCubic};

/// `ε² Ω t` above which the closed form is outside its validity window.
pub const RG_VALIDITY_LIMIT: f64 = 0.1;
/// `energy_density` refuses points where `R'` falls below this.
pub const MIN_SLOPE: f64 = 1e-12;
/// Largest Bogoliubov truncation accepted.
pub const MAX_TRUNCATION: usize = 256;
/// Allowed `|Σ_k (|α_kn|² - |β_kn|²) - 1|` on the checked rows.
pub const NORMALIZATION_LIMIT: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MooreKind {
    StaticLinear,
    RgClosedForm,
    NumericSampled,
}

/// `R` and its first three derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MooreJet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

#[derive(Debug, Clone)]
pub struct MooreFunction {
    kind: MooreKind,
    traj: MirrorTrajectory,
    samples: Option<SampledSeries>,
    interpolant: Option<MonotoneCubic>,
    /// Step of the finite-difference cross-check, `1e-4 L0`.
    pub deriv_step: f64,
    tol: f64,
}

/// `R(t) = t / L0`.
pub fn static_moore(traj: MirrorTrajectory) -> MooreFunction {
    MooreFunction::new(MooreKind::StaticLinear, traj, 0.0)
}

/// Resummed closed form
/// `R(t) = t/L0 - (2/(π q)) Im ln[1 + ξ + (1 - ξ) e^{i q π t / L0}]`,
/// `ξ = exp[(-1)^{q+1} π q ε t / L0]`, and `R(t) = t/L0` for `t ≤ 0`.
pub fn rg_moore(traj: MirrorTrajectory) -> MooreFunction {
    let horizon = traj.t_stop();
    let ratio = rg_validity_ratio(&traj, horizon);
    if ratio > RG_VALIDITY_LIMIT {
        log::warn!(
            "closed-form R used up to t = {horizon}: eps^2 Omega t = {ratio:.3} exceeds {RG_VALIDITY_LIMIT}"
        );
    }
    MooreFunction::new(MooreKind::RgClosedForm, traj, 0.0)
}

/// Exact `R` by the characteristic map, sampled on `[0, t_max]`.
///
/// Every query solves `t + L(t) = s` with a safeguarded Newton iteration
/// (tolerance `tol L0`) and recurses on `R(s) = 2 + R(t - L(t))` until the
/// argument lands in the initial segment. The stored samples feed a
/// monotone cubic interpolant for dense output.
pub fn numeric_moore(traj: MirrorTrajectory, t_max: f64, tol: f64) -> Result<MooreFunction> {
    numeric_moore_with_samples(traj, t_max, tol, 0)
}

/// [`numeric_moore`] with an explicit sample count (`0` picks 64 per `L0`).
pub fn numeric_moore_with_samples(
    traj: MirrorTrajectory,
    t_max: f64,
    tol: f64,
    samples: usize,
) -> Result<MooreFunction> {
    let l0 = traj.l0();
    if traj.epsilon().abs() >= 1.0 {
        return Err(invalid("epsilon", "|epsilon| must be below 1"));
    }
    if traj.law().max_speed() >= 1.0 {
        return Err(invalid(
            "epsilon",
            format!(
                "wall speed eps*Omega*L0 = {} must stay below the speed of light",
                traj.law().max_speed()
            ),
        ));
    }
    if !(t_max > 0.0 && t_max <= 1e4 * l0) {
        return Err(invalid("t_max", format!("must lie in (0, 1e4 L0], got {t_max}")));
    }
    if !(1e-15..=1e-3).contains(&tol) {
        return Err(invalid("tol", format!("must lie in [1e-15, 1e-3], got {tol}")));
    }
    let mut moore = MooreFunction::new(MooreKind::NumericSampled, traj, tol);
    let count = if samples == 0 {
        ((64.0 * t_max / l0).ceil() as usize + 1).max(2)
    } else {
        samples.max(2)
    };
    let grid = linspace(0.0, t_max, count);
    let mut values = Vec::with_capacity(count);
    for &s in &grid {
        let residual = moore.residual(s);
        // A launch-time error δ moves R by R'δ, and δ cannot beat rounding.
        let slope = l0 * moore.derivative(s + traj.eval_length(s)).abs();
        let floor = 16.0 * f64::EPSILON * (s.abs() + l0) / l0;
        if !(residual.abs() <= (10.0 * tol + floor) * slope.max(1.0)) {
            return Err(DceError::Numeric(format!(
                "characteristic solve did not converge near s = {s}: residual {residual:e}"
            )));
        }
        values.push(moore.value(s));
    }
    moore.interpolant = MonotoneCubic::new(grid.clone(), values.clone());
    moore.samples = Some(
        SampledSeries::real(grid, values)?
            .with_meta("quantity", "R")
            .with_meta("tol", tol),
    );
    Ok(moore)
}

/// `ε² Ω t`, the closed form's validity parameter.
pub fn rg_validity_ratio(traj: &MirrorTrajectory, t: f64) -> f64 {
    traj.epsilon().powi(2) * traj.omega() * t
}

impl MooreFunction {
    fn new(kind: MooreKind, traj: MirrorTrajectory, tol: f64) -> Self {
        Self {
            kind,
            traj,
            samples: None,
            interpolant: None,
            deriv_step: 1e-4 * traj.l0(),
            tol,
        }
    }

    pub fn kind(&self) -> MooreKind {
        self.kind
    }

    pub fn trajectory(&self) -> &MirrorTrajectory {
        &self.traj
    }

    pub fn samples(&self) -> Option<&SampledSeries> {
        self.samples.as_ref()
    }

    pub fn value(&self, t: f64) -> f64 {
        match self.kind {
            MooreKind::StaticLinear => t / self.traj.l0(),
            MooreKind::RgClosedForm => self.rg_jet(t).value,
            MooreKind::NumericSampled => self.numeric_jet(t).value,
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.jet(t).d1
    }

    pub fn jet(&self, t: f64) -> MooreJet {
        match self.kind {
            MooreKind::StaticLinear => MooreJet {
                value: t / self.traj.l0(),
                d1: 1.0 / self.traj.l0(),
                d2: 0.0,
                d3: 0.0,
            },
            MooreKind::RgClosedForm => self.rg_jet(t),
            MooreKind::NumericSampled => self.numeric_jet(t),
        }
    }

    /// Dense output from the stored samples (numeric kind only).
    pub fn interpolated(&self, t: f64) -> Option<f64> {
        self.interpolant.as_ref().map(|p| p.eval(t))
    }

    /// `R(t + L(t)) - R(t - L(t)) - 2`.
    pub fn residual(&self, t: f64) -> f64 {
        let l = self.traj.eval_length(t);
        self.value(t + l) - self.value(t - l) - 2.0
    }

    /// Derivatives by fourth-order central differences with step
    /// `deriv_step`, improved by one Richardson extrapolation.
    pub fn fd_jet(&self, t: f64) -> MooreJet {
        let stencil = |h: f64| {
            let f = |k: f64| self.value(t + k * h);
            let (m3, m2, m1, p1, p2, p3) = (f(-3.0), f(-2.0), f(-1.0), f(1.0), f(2.0), f(3.0));
            let c = f(0.0);
            let d1 = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
            let d2 = (-p2 + 16.0 * p1 - 30.0 * c + 16.0 * m1 - m2) / (12.0 * h * h);
            let d3 = (-p3 + 8.0 * p2 - 13.0 * p1 + 13.0 * m1 - 8.0 * m2 + m3) / (8.0 * h * h * h);
            (d1, d2, d3)
        };
        let coarse = stencil(self.deriv_step);
        let fine = stencil(0.5 * self.deriv_step);
        let rich = |f: f64, c: f64| (16.0 * f - c) / 15.0;
        MooreJet {
            value: self.value(t),
            d1: rich(fine.0, coarse.0),
            d2: rich(fine.1, coarse.1),
            d3: rich(fine.2, coarse.2),
        }
    }

    fn rg_jet(&self, t: f64) -> MooreJet {
        let l0 = self.traj.l0();
        if t <= 0.0 {
            return MooreJet {
                value: t / l0,
                d1: 1.0 / l0,
                d2: 0.0,
                d3: 0.0,
            };
        }
        let q = f64::from(self.traj.q());
        let sign = if self.traj.q() % 2 == 1 { 1.0 } else { -1.0 };
        let rate = sign * PI * q * self.traj.epsilon() / l0;
        let wave = q * PI / l0;
        let xi = (rate * t).exp();
        let phase = Complex64::from_polar(1.0, wave * t);
        let iw = Complex64::new(0.0, wave);
        let mixed = Complex64::new(rate, wave);

        // w(t) = 1 + ξ + (1 - ξ) e^{iθ}; its n-th derivative is
        // s^n ξ + (iθ')^n e^{iθ} - (s + iθ')^n ξ e^{iθ}.
        let w = Complex64::new(1.0 + xi, 0.0) + (1.0 - xi) * phase;
        let deriv = |n: i32| rate.powi(n) * xi + iw.powi(n) * phase - mixed.powi(n) * xi * phase;
        let (w1, w2, w3) = (deriv(1) / w, deriv(2) / w, deriv(3) / w);
        let l1 = w1;
        let l2 = w2 - w1 * w1;
        let l3 = w3 - 3.0 * w1 * w2 + 2.0 * w1 * w1 * w1;

        let c = 2.0 / (PI * q);
        MooreJet {
            value: t / l0 - c * w.arg(),
            d1: 1.0 / l0 - c * l1.im,
            d2: -c * l2.im,
            d3: -c * l3.im,
        }
    }

    /// Solves `t + L(t) = s` for `t`.
    fn launch_time(&self, s: f64) -> f64 {
        let traj = &self.traj;
        let (t_stop, l_stop) = (traj.t_stop(), traj.eval_length(traj.t_stop()));
        if s >= t_stop + l_stop {
            return s - l_stop;
        }
        if s <= traj.l0() {
            return s - traj.l0();
        }
        let spread = traj.l0() * traj.epsilon().abs();
        let mut lo = (s - traj.l0() - spread).max(0.0);
        let mut hi = (s - traj.l0() + spread).min(t_stop);
        let mut t = s - traj.eval_length(s - traj.l0());
        let tol = (self.tol * traj.l0()).min(4.0 * f64::EPSILON * s.abs());
        for _ in 0..200 {
            let g = t + traj.eval_length(t) - s;
            if g > 0.0 {
                hi = hi.min(t);
            } else {
                lo = lo.max(t);
            }
            let step = -g / (1.0 + traj.velocity(t));
            let mut next = t + step;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let moved = (next - t).abs();
            t = next;
            if moved <= tol || hi - lo <= tol {
                break;
            }
        }
        t
    }

    /// Solves `t - L(t) = x` for `t`.
    fn arrival_time(&self, x: f64) -> f64 {
        let traj = &self.traj;
        let (t_stop, l_stop) = (traj.t_stop(), traj.eval_length(traj.t_stop()));
        if x >= t_stop - l_stop {
            return x + l_stop;
        }
        if x <= -traj.l0() {
            return x + traj.l0();
        }
        let spread = traj.l0() * traj.epsilon().abs();
        let mut lo = (x + traj.l0() - spread).max(0.0);
        let mut hi = (x + traj.l0() + spread).min(t_stop);
        let mut t = 0.5 * (lo + hi);
        for _ in 0..200 {
            let g = t - traj.eval_length(t) - x;
            if g > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let step = -g / (1.0 - traj.velocity(t));
            let mut next = t + step;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let moved = (next - t).abs();
            t = next;
            if moved <= 1e-15 * traj.l0() || hi - lo <= 1e-15 * traj.l0() {
                break;
            }
        }
        t
    }

    fn numeric_jet(&self, s: f64) -> MooreJet {
        let traj = &self.traj;
        let l0 = traj.l0();
        let mut x = s;
        let mut shift = 0.0;
        // Derivatives of the composite map s -> x.
        let (mut g1, mut g2, mut g3) = (1.0, 0.0, 0.0);
        while x > l0 {
            let t = self.launch_time(x);
            let v = traj.velocity(t);
            let a = traj.acceleration(t);
            let j = traj.jerk(t);
            let p = 1.0 / (1.0 + v);
            let phi1 = (1.0 - v) * p;
            let u1 = -2.0 * a * p * p;
            let u2 = -2.0 * j * p * p + 4.0 * a * a * p * p * p;
            let phi2 = u1 * p;
            let phi3 = p * (u2 * p - u1 * a * p * p);
            let n1 = phi1 * g1;
            let n2 = phi2 * g1 * g1 + phi1 * g2;
            let n3 = phi3 * g1 * g1 * g1 + 3.0 * phi2 * g1 * g2 + phi1 * g3;
            g1 = n1;
            g2 = n2;
            g3 = n3;
            x = t - traj.eval_length(t);
            shift += 2.0;
        }
        MooreJet {
            value: x / l0 + shift,
            d1: g1 / l0,
            d2: g2 / l0,
            d3: g3 / l0,
        }
    }

    /// Points in `(a, b)` where `R'` jumps: characteristics launched when the
    /// wall starts or stops. Empty for the smooth kinds.
    pub fn kinks_between(&self, a: f64, b: f64) -> Vec<f64> {
        if self.kind != MooreKind::NumericSampled || self.traj.epsilon() == 0.0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut k = self.traj.l0();
        while k < b {
            if k > a {
                out.push(k);
            }
            let t = self.arrival_time(k);
            k = t + self.traj.eval_length(t);
        }
        let l_stop = self.traj.eval_length(self.traj.t_stop());
        let mut k = self.traj.t_stop() + l_stop;
        while k < b {
            if k > a {
                out.push(k);
            }
            k += 2.0 * l_stop;
        }
        out.sort_by(f64::total_cmp);
        out
    }
}

fn check_inside(traj: &MirrorTrajectory, z: f64, t: f64) -> Result<()> {
    let l = traj.eval_length(t);
    if z < 0.0 || z > l * (1.0 + 1e-12) {
        return Err(DceError::Domain(format!("z = {z} outside [0, L(t) = {l}] at t = {t}")));
    }
    Ok(())
}

/// `e^{-ikπR(t+z)}` and `e^{-ikπR(t-z)}` with their time derivatives.
fn characteristic_waves(k: u32, r: &MooreFunction, z: f64, t: f64) -> [(Complex64, Complex64); 2] {
    let kpi = f64::from(k) * PI;
    [t + z, t - z].map(|x| {
        let jet = r.jet(x);
        let e = Complex64::from_polar(1.0, -kpi * jet.value);
        (e, Complex64::new(0.0, -kpi * jet.d1) * e)
    })
}

fn mode_norm(k: u32) -> f64 {
    1.0 / (4.0 * PI * f64::from(k)).sqrt()
}

pub(crate) fn dirichlet_unchecked(k: u32, r: &MooreFunction, z: f64, t: f64) -> (Complex64, Complex64) {
    let [(ep, dp), (em, dm)] = characteristic_waves(k, r, z, t);
    let c = Complex64::new(0.0, mode_norm(k));
    (c * (ep - em), c * (dp - dm))
}

pub(crate) fn neumann_unchecked(k: u32, r: &MooreFunction, z: f64, t: f64) -> (Complex64, Complex64) {
    let [(ep, dp), (em, dm)] = characteristic_waves(k, r, z, t);
    let c = mode_norm(k);
    (c * (ep + em), c * (dp + dm))
}

/// `ψ_k = (i / √(4πk)) (e^{-ikπR(t+z)} - e^{-ikπR(t-z)})`.
pub fn dirichlet_mode(k: u32, r: &MooreFunction, z: f64, t: f64) -> Result<Complex64> {
    if k == 0 {
        return Err(DceError::Constraint("Dirichlet modes start at k = 1".into()));
    }
    check_inside(r.trajectory(), z, t)?;
    Ok(dirichlet_unchecked(k, r, z, t).0)
}

/// `φ_k = (1 / √(4πk)) (e^{-ikπR(t+z)} + e^{-ikπR(t-z)})`.
pub fn neumann_mode(k: u32, r: &MooreFunction, z: f64, t: f64) -> Result<Complex64> {
    if k == 0 {
        return Err(DceError::Constraint(
            "k = 0 is the zero mode; use zero_mode".into(),
        ));
    }
    check_inside(r.trajectory(), z, t)?;
    Ok(neumann_unchecked(k, r, z, t).0)
}

/// Neumann zero mode `φ_0 = [R(t+z) + R(t-z)] / 2`.
pub fn zero_mode(r: &MooreFunction, z: f64, t: f64) -> Result<f64> {
    check_inside(r.trajectory(), z, t)?;
    Ok(0.5 * (r.value(t + z) + r.value(t - z)))
}

/// Schwarzian-type flux `f` evaluated from a jet.
fn flux(jet: &MooreJet) -> f64 {
    let ratio2 = jet.d2 / jet.d1;
    (jet.d3 / jet.d1 - 1.5 * ratio2 * ratio2 + 0.5 * PI * PI * jet.d1 * jet.d1) / (24.0 * PI)
}

/// Vacuum energy density `-f(t+z) - f(t-z)`, plus the Neumann zero-mode
/// term `(b²/4)[R'(t+z)² + R'(t-z)²]` when `b ≠ 0`.
pub fn energy_density(r: &MooreFunction, z: f64, t: f64, b: f64) -> Result<f64> {
    check_inside(r.trajectory(), z, t)?;
    let plus = r.jet(t + z);
    let minus = r.jet(t - z);
    for (x, jet) in [(t + z, &plus), (t - z, &minus)] {
        if !(jet.d1 >= MIN_SLOPE) {
            return Err(DceError::Singularity(format!(
                "R'({x}) = {:e} is below {MIN_SLOPE:e}; the staircase is too steep here",
                jet.d1
            )));
        }
    }
    let zero_mode = 0.25 * b * b * (plus.d1 * plus.d1 + minus.d1 * minus.d1);
    Ok(-flux(&plus) - flux(&minus) + zero_mode)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Dirichlet,
    Neumann,
}

/// Bogoliubov coefficients between the IN modes (rows `k`) and the static
/// OUT modes (columns `n`), both one-based and truncated at `K`.
#[derive(Debug, Clone)]
pub struct BogoliubovMatrices {
    alpha: Vec<Complex64>,
    beta: Vec<Complex64>,
    size: usize,
    pub boundary: Boundary,
    pub t_eval: f64,
    pub l0: f64,
}

impl BogoliubovMatrices {
    pub fn truncation(&self) -> usize {
        self.size
    }

    fn index(&self, k: usize, n: usize) -> usize {
        assert!((1..=self.size).contains(&k) && (1..=self.size).contains(&n));
        (k - 1) * self.size + (n - 1)
    }

    pub fn alpha(&self, k: usize, n: usize) -> Complex64 {
        self.alpha[self.index(k, n)]
    }

    pub fn beta(&self, k: usize, n: usize) -> Complex64 {
        self.beta[self.index(k, n)]
    }

    /// `Σ_k (|α_kn|² - |β_kn|²) - 1` for each OUT mode `n`.
    pub fn normalization_defects(&self) -> Vec<f64> {
        (1..=self.size)
            .map(|n| {
                (1..=self.size)
                    .map(|k| self.alpha(k, n).norm_sqr() - self.beta(k, n).norm_sqr())
                    .sum::<f64>()
                    - 1.0
            })
            .collect()
    }

    /// OUT modes whose normalization is checked: the lowest quarter of the
    /// basis. The IN-mode content of OUT mode `n` spreads to `k` of a few
    /// times `n`, so higher rows lose weight to the truncation.
    pub fn checked_rows(&self) -> usize {
        (self.size / 4).max(1)
    }
}

/// Projects the evolved IN modes onto the static OUT basis at `t = T`.
///
/// The Klein–Gordon products are integrated by composite Simpson over
/// `[0, L0]`, split wherever `R'` jumps, with at least `8K` panels and
/// more when `R` is steep.
pub fn bogoliubov(
    traj: &MirrorTrajectory,
    r: &MooreFunction,
    boundary: Boundary,
    truncation: usize,
) -> Result<BogoliubovMatrices> {
    if truncation == 0 || truncation > MAX_TRUNCATION {
        return Err(invalid(
            "K",
            format!("truncation must be in 1..={MAX_TRUNCATION}, got {truncation}"),
        ));
    }
    if !traj.ends_at_rest_length() {
        return Err(invalid(
            "T",
            "the stop time must be an integer number of drive half-periods",
        ));
    }
    if r.trajectory() != traj {
        return Err(invalid("R", "Moore function was built for a different trajectory"));
    }
    let t = traj.t_stop();
    if r.kind() == MooreKind::RgClosedForm && rg_validity_ratio(traj, t) > RG_VALIDITY_LIMIT {
        log::warn!("closed-form R evaluated at t = {t}, beyond its validity window");
    }
    let l0 = traj.l0();
    let k_max = truncation;

    let steepest = linspace(t - l0, t + l0, 2001)
        .into_iter()
        .map(|x| r.derivative(x).abs())
        .fold(0.0, f64::max);
    let panels = ((16.0 * k_max as f64 * (l0 * steepest).max(1.0)).ceil() as usize).max(8 * k_max);
    let breaks: Vec<f64> = r
        .kinks_between(t - l0, t + l0)
        .into_iter()
        .map(|s| (s - t).abs())
        .collect();
    let (nodes, weights) = simpson_nodes_split(0.0, l0, &breaks, panels);

    let profile = |n: usize, z: f64| {
        let arg = n as f64 * PI * z / l0;
        match boundary {
            Boundary::Dirichlet => arg.sin(),
            Boundary::Neumann => arg.cos(),
        }
    };

    let mut alpha = vec![Complex64::new(0.0, 0.0); k_max * k_max];
    let mut beta = alpha.clone();
    let mut fields = vec![(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); nodes.len()];
    let profiles: Vec<Vec<f64>> = (1..=k_max)
        .map(|n| nodes.iter().map(|&z| profile(n, z)).collect())
        .collect();
    let jets: Vec<[MooreJet; 2]> = nodes.iter().map(|&z| [r.jet(t + z), r.jet(t - z)]).collect();

    for k in 1..=k_max {
        let kpi = k as f64 * PI;
        for (slot, jet) in fields.iter_mut().zip(&jets) {
            let [(ep, dp), (em, dm)] = jet.map(|j| {
                let e = Complex64::from_polar(1.0, -kpi * j.value);
                (e, Complex64::new(0.0, -kpi * j.d1) * e)
            });
            *slot = match boundary {
                Boundary::Dirichlet => {
                    let c = Complex64::new(0.0, mode_norm(k as u32));
                    (c * (ep - em), c * (dp - dm))
                }
                Boundary::Neumann => {
                    let c = mode_norm(k as u32);
                    (c * (ep + em), c * (dp + dm))
                }
            };
        }
        for n in 1..=k_max {
            let omega = n as f64 * PI / l0;
            let iw = Complex64::new(0.0, omega);
            let mut minus = Complex64::new(0.0, 0.0);
            let mut plus = Complex64::new(0.0, 0.0);
            for ((w, s), (psi, dpsi)) in weights.iter().zip(&profiles[n - 1]).zip(&fields) {
                let ws = w * s;
                minus += ws * (dpsi - iw * psi);
                plus += ws * (dpsi + iw * psi);
            }
            let norm = 1.0 / (PI * n as f64).sqrt();
            let phase = Complex64::from_polar(1.0, omega * t);
            let idx = (k - 1) * k_max + (n - 1);
            // α = (u_n, ψ_k), β = -(u_n*, ψ_k) in the Klein–Gordon product.
            alpha[idx] = Complex64::i() * norm * phase * minus;
            beta[idx] = -Complex64::i() * norm * phase.conj() * plus;
        }
    }

    let out = BogoliubovMatrices {
        alpha,
        beta,
        size: k_max,
        boundary,
        t_eval: t,
        l0,
    };
    let defects = out.normalization_defects();
    if let Some((n, d)) = defects
        .iter()
        .take(out.checked_rows())
        .enumerate()
        .map(|(i, d)| (i + 1, d.abs()))
        .find(|(_, d)| *d > NORMALIZATION_LIMIT)
    {
        return Err(DceError::Truncation(format!(
            "normalization of OUT mode {n} is off by {d:.3}; increase K beyond {k_max}"
        )));
    }
    Ok(out)
}

/// TEM modes of a coaxial guide obey the 1+1 Dirichlet problem along the
/// axis, so their coefficients are exactly those of the scalar cavity.
pub fn bogoliubov_tem(
    geom: &crate::model::CavityGeometry,
    r: &MooreFunction,
    truncation: usize,
) -> Result<BogoliubovMatrices> {
    match geom {
        crate::model::CavityGeometry::CoaxialTem { lz } => {
            bogoliubov(lz, r, Boundary::Dirichlet, truncation)
        }
        other => Err(invalid(
            "geometry",
            format!("{} cavity has no TEM sector", other.name()),
        )),
    }
}

/// Created photons per OUT mode and the total radiated energy.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonSpectrum {
    /// `N_n` for `n = 1..=K`.
    pub counts: Vec<f64>,
    pub total_energy: f64,
    pub l0: f64,
}

impl PhotonSpectrum {
    /// `N_n`, one-based.
    pub fn count(&self, n: usize) -> f64 {
        self.counts[n - 1]
    }

    pub fn series(&self) -> SampledSeries {
        let grid = (1..=self.counts.len()).map(|n| n as f64).collect();
        SampledSeries::real(grid, self.counts.clone())
            .expect("mode numbers are increasing")
            .with_meta("quantity", "photon number")
            .with_meta("total_energy", self.total_energy)
    }
}

/// `N_n = Σ_k |β_kn|²`, `E = Σ_n N_n n π / L0`.
pub fn photon_spectrum(b: &BogoliubovMatrices) -> PhotonSpectrum {
    let size = b.truncation();
    let counts: Vec<f64> = (1..=size)
        .map(|n| (1..=size).map(|k| b.beta(k, n).norm_sqr()).sum())
        .collect();
    let total_energy = counts
        .iter()
        .enumerate()
        .map(|(i, n)| n * (i + 1) as f64 * PI / b.l0)
        .sum();
    PhotonSpectrum {
        counts,
        total_energy,
        l0: b.l0,
    }
}
