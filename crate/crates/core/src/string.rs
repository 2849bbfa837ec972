//! Mechanical analogue: a string threaded through a hole in a moving plate.
//!
//! The left segment `[0, L(t)]` obeys the 1+1 wave equation with Dirichlet
//! ends, so a seed standing wave evolves as
//! `y = a_k [sin(kπR(t+z)) - sin(kπR(t-z))]`. Time is measured in units
//! where the wave speed is one; physical times are multiplied by `v0`.

use std::f64::consts::PI;

use crate::error::{invalid, DceError, Result};
use crate::model::{linspace, MirrorTrajectory, SampledSeries};
use crate::moore::MooreFunction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StringConfig {
    pub k: u32,
    /// Seed amplitude `a_k`, in length units.
    pub amplitude: f64,
    pub traj: MirrorTrajectory,
    pub tension: f64,
    /// Wave speed; physical time `t` enters as `v0 t`.
    pub v0: f64,
}

impl StringConfig {
    pub fn new(k: u32, amplitude: f64, traj: MirrorTrajectory) -> Result<Self> {
        Self::with_medium(k, amplitude, traj, 1.0, 1.0)
    }

    pub fn with_medium(
        k: u32,
        amplitude: f64,
        traj: MirrorTrajectory,
        tension: f64,
        v0: f64,
    ) -> Result<Self> {
        if k == 0 {
            return Err(invalid("k", "the seed eigenmode starts at k = 1"));
        }
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(invalid("amp", format!("must be positive, got {amplitude}")));
        }
        if !(tension.is_finite() && tension > 0.0) {
            return Err(invalid("tension", format!("must be positive, got {tension}")));
        }
        if !(v0.is_finite() && v0 > 0.0) {
            return Err(invalid("v0", format!("must be positive, got {v0}")));
        }
        if amplitude > 0.05 * traj.l0() {
            log::warn!("amplitude {amplitude} exceeds 0.05 L0; the linear string model is stretched");
        }
        let cfg = Self {
            k,
            amplitude,
            traj,
            tension,
            v0,
        };
        if !cfg.is_resonant() {
            log::info!("q = {} is not 2k = {}: the plate is off resonance", traj.q(), 2 * k);
        }
        Ok(cfg)
    }

    /// `Ω = 2kπ/L0`, i.e. `q = 2k`.
    pub fn is_resonant(&self) -> bool {
        self.traj.q() == 2 * self.k
    }

    fn check(&self, r: &MooreFunction, z: f64, tau: f64) -> Result<()> {
        if r.trajectory() != &self.traj {
            return Err(invalid("R", "Moore function was built for a different trajectory"));
        }
        let l = self.traj.eval_length(tau);
        if z < 0.0 || z > l * (1.0 + 1e-12) {
            return Err(DceError::Domain(format!("z = {z} outside [0, L = {l}]")));
        }
        Ok(())
    }
}

/// Transverse displacement `y(z, t)`.
pub fn string_displacement(cfg: &StringConfig, r: &MooreFunction, z: f64, t: f64) -> Result<f64> {
    let tau = cfg.v0 * t;
    cfg.check(r, z, tau)?;
    let kpi = f64::from(cfg.k) * PI;
    Ok(cfg.amplitude * ((kpi * r.value(tau + z)).sin() - (kpi * r.value(tau - z)).sin()))
}

/// Energy density `ρ_E = T [g(t+z) + g(t-z)]`,
/// `g = (kπ a_k)² cos²(kπR) R'²`.
pub fn string_energy_density(cfg: &StringConfig, r: &MooreFunction, z: f64, t: f64) -> Result<f64> {
    let tau = cfg.v0 * t;
    cfg.check(r, z, tau)?;
    let kpi = f64::from(cfg.k) * PI;
    let g = |x: f64| {
        let jet = r.jet(x);
        let c = (kpi * jet.value).cos() * jet.d1;
        (kpi * cfg.amplitude * c).powi(2)
    };
    Ok(cfg.tension * (g(tau + z) + g(tau - z)))
}

/// `y` on `count` evenly spaced points of `[0, L(t)]`.
pub fn displacement_profile(
    cfg: &StringConfig,
    r: &MooreFunction,
    t: f64,
    count: usize,
) -> Result<SampledSeries> {
    profile(cfg, r, t, count, string_displacement).map(|s| s.with_meta("quantity", "y"))
}

/// `ρ_E` on `count` evenly spaced points of `[0, L(t)]`.
pub fn energy_profile(
    cfg: &StringConfig,
    r: &MooreFunction,
    t: f64,
    count: usize,
) -> Result<SampledSeries> {
    profile(cfg, r, t, count, string_energy_density).map(|s| s.with_meta("quantity", "rho_E"))
}

fn profile(
    cfg: &StringConfig,
    r: &MooreFunction,
    t: f64,
    count: usize,
    f: fn(&StringConfig, &MooreFunction, f64, f64) -> Result<f64>,
) -> Result<SampledSeries> {
    if count < 2 {
        return Err(invalid("z-samples", "need at least two points"));
    }
    let grid = linspace(0.0, cfg.traj.eval_length(cfg.v0 * t), count);
    let values = grid.iter().map(|&z| f(cfg, r, z, t)).collect::<Result<Vec<_>>>()?;
    SampledSeries::real(grid, values)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdGrid {
    /// Number of intervals across the segment.
    pub nz: usize,
    /// `dt / dt_max`, where `dt_max = dζ L_min / (1 + max|L̇|)`.
    pub cfl: f64,
}

impl Default for FdGrid {
    fn default() -> Self {
        Self { nz: 2048, cfl: 0.5 }
    }
}

/// Finite-difference solution of the string on the fixed grid `ζ = z/L(t)`.
///
/// In `ζ` the wave equation reads
/// `Y_tt = (1/L² - ζ²λ²) Y_ζζ + 2ζλ Y_ζt - ζ(2λ² - L̈/L) Y_ζ`, `λ = L̇/L`.
/// Leapfrog in time, centred differences in `ζ`; the mixed term is taken
/// implicitly, which costs one tridiagonal solve per step. Returns `y` at
/// `t_end` on the physical points `z = ζ L(t_end)`.
pub fn fd_string_oracle(cfg: &StringConfig, grid: FdGrid, t_end: f64) -> Result<SampledSeries> {
    if grid.nz < 512 {
        return Err(invalid("nz", format!("need at least 512 intervals, got {}", grid.nz)));
    }
    if !(grid.cfl > 0.0 && grid.cfl <= 0.9) {
        return Err(DceError::Cfl(format!("cfl = {} must lie in (0, 0.9]", grid.cfl)));
    }
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(invalid("t", format!("must be non-negative, got {t_end}")));
    }
    let traj = &cfg.traj;
    let tau_end = cfg.v0 * t_end;
    let n = grid.nz;
    let l_min = traj.l0() * (1.0 - traj.epsilon().abs());
    let dt_max = grid.cfl * l_min / (n as f64 * (1.0 + traj.law().max_speed()));
    let solver = Leapfrog::new(cfg, n);

    let kpi = f64::from(cfg.k) * PI;
    let mut y: Vec<f64> = solver.zeta.iter().map(|&x| 2.0 * cfg.amplitude * (kpi * x).sin()).collect();
    let mut v = vec![0.0; n + 1];
    let initial_energy = solver.energy(&y, &v, traj.l0()).max(f64::MIN_POSITIVE);

    // The wall velocity jumps where the motion starts and stops, so L̈ holds
    // a delta there. The physical ∂_t y is continuous across it, which makes
    // Y_t jump by ζ Δλ Y_ζ. Integrate smooth stretches separately.
    let t_stop = traj.t_stop();
    let mut stretches = vec![(0.0, tau_end.min(t_stop))];
    if tau_end > t_stop {
        stretches.push((t_stop, tau_end));
    }
    let mut total_steps = 0;
    for (i, &(a, b)) in stretches.iter().enumerate() {
        let lambda_before = if i == 0 { 0.0 } else { traj.velocity(a) / traj.eval_length(a) };
        let lambda_after = if i == 0 { traj.velocity(f64::MIN_POSITIVE) / traj.l0() } else { 0.0 };
        solver.kick(&y, &mut v, lambda_after - lambda_before);
        if b > a {
            let steps = ((b - a) / dt_max).ceil() as usize;
            solver.advance(&mut y, &mut v, a, b, steps, initial_energy)?;
            total_steps += steps;
        }
    }

    let l_end = traj.eval_length(tau_end);
    let z: Vec<f64> = solver.zeta.iter().map(|x| x * l_end).collect();
    Ok(SampledSeries::real(z, y)?
        .with_meta("quantity", "y")
        .with_meta("nz", n)
        .with_meta("steps", total_steps))
}

struct Leapfrog<'a> {
    cfg: &'a StringConfig,
    zeta: Vec<f64>,
    dzeta: f64,
}

impl<'a> Leapfrog<'a> {
    fn new(cfg: &'a StringConfig, n: usize) -> Self {
        let dzeta = 1.0 / n as f64;
        Self {
            cfg,
            zeta: (0..=n).map(|i| i as f64 * dzeta).collect(),
            dzeta,
        }
    }

    fn n(&self) -> usize {
        self.zeta.len() - 1
    }

    /// `Y_t += ζ Δλ Y_ζ`.
    fn kick(&self, y: &[f64], v: &mut [f64], jump: f64) {
        if jump == 0.0 {
            return;
        }
        for i in 1..self.n() {
            v[i] += self.zeta[i] * jump * (y[i + 1] - y[i - 1]) / (2.0 * self.dzeta);
        }
    }

    /// `Y_tt` from the transformed equation, given `Y` and `Y_t`.
    fn acceleration(&self, y: &[f64], v: &[f64], tau: f64, out: &mut [f64]) {
        let (l, lambda, drift) = self.coefficients(tau);
        let h = self.dzeta;
        for i in 1..self.n() {
            let x = self.zeta[i];
            let c2 = 1.0 / (l * l) - x * x * lambda * lambda;
            let yzz = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
            let yz = (y[i + 1] - y[i - 1]) / (2.0 * h);
            let vz = (v[i + 1] - v[i - 1]) / (2.0 * h);
            out[i] = c2 * yzz + 2.0 * x * lambda * vz - x * drift * yz;
        }
    }

    /// `L`, `λ = L̇/L` and `2λ² - L̈/L` inside the current smooth stretch.
    fn coefficients(&self, tau: f64) -> (f64, f64, f64) {
        let traj = &self.cfg.traj;
        let probe = if tau == 0.0 { f64::MIN_POSITIVE } else { tau };
        let l = traj.eval_length(tau);
        let lambda = traj.velocity(probe) / l;
        let drift = 2.0 * lambda * lambda - traj.acceleration(probe) / l;
        (l, lambda, drift)
    }

    /// Discrete energy of the physical field.
    fn energy(&self, y: &[f64], v: &[f64], l: f64) -> f64 {
        (1..self.n())
            .map(|i| {
                let yz = (y[i + 1] - y[i - 1]) / (2.0 * self.dzeta * l);
                v[i] * v[i] + yz * yz
            })
            .sum()
    }

    /// Leapfrog from `a` to `b` in `steps` equal steps, started by a
    /// second-order Taylor step and returning `Y` and `Y_t` at `b`.
    #[allow(clippy::ptr_arg)]
    fn advance(
        &self,
        y: &mut Vec<f64>,
        v: &mut Vec<f64>,
        a: f64,
        b: f64,
        steps: usize,
        initial_energy: f64,
    ) -> Result<()> {
        let n = self.n();
        let h = self.dzeta;
        let dt = (b - a) / steps as f64;
        let mut acc = vec![0.0; n + 1];
        self.acceleration(y, v, a, &mut acc);
        let mut prev: Vec<f64> = (0..=n).map(|i| y[i] - dt * v[i] + 0.5 * dt * dt * acc[i]).collect();
        let mut cur = y.clone();
        let mut older = prev.clone();
        let mut next = vec![0.0; n + 1];
        let (mut lower, mut upper, mut rhs, mut scratch) =
            (vec![0.0; n + 1], vec![0.0; n + 1], vec![0.0; n + 1], vec![0.0; n + 1]);
        for step in 0..steps {
            let tau = a + step as f64 * dt;
            let (l, lambda, drift) = self.coefficients(tau);
            for i in 1..n {
                let x = self.zeta[i];
                let c2 = 1.0 / (l * l) - x * x * lambda * lambda;
                let yzz = (cur[i + 1] - 2.0 * cur[i] + cur[i - 1]) / (h * h);
                let yz = (cur[i + 1] - cur[i - 1]) / (2.0 * h);
                // Mixed term 2ζλ ∂_ζ (Y^{n+1} - Y^{n-1}) / (2 dt), implicit.
                let mix = dt * x * lambda / (2.0 * h);
                rhs[i] = 2.0 * cur[i] - prev[i] + dt * dt * (c2 * yzz - x * drift * yz)
                    - mix * (prev[i + 1] - prev[i - 1]);
                lower[i] = mix;
                upper[i] = -mix;
            }
            solve_tridiagonal(&lower, &upper, &mut rhs, &mut scratch, &mut next);
            std::mem::swap(&mut older, &mut prev);
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut next);

            if step % 256 == 255 || step + 1 == steps {
                let vel: Vec<f64> = cur.iter().zip(&prev).map(|(c, p)| (c - p) / dt).collect();
                let e = self.energy(&cur, &vel, self.cfg.traj.eval_length(tau + dt));
                if !(e <= 1e6 * initial_energy) {
                    return Err(DceError::BlowUp(format!(
                        "discrete energy reached {e:.3e} (initial {initial_energy:.3e}) at t = {}",
                        (tau + dt) / self.cfg.v0
                    )));
                }
            }
        }
        // Second-order one-sided velocity at the end of the stretch.
        for i in 0..=n {
            v[i] = (3.0 * cur[i] - 4.0 * prev[i] + older[i]) / (2.0 * dt);
        }
        *y = cur;
        Ok(())
    }
}

/// Solves `lower_i x_{i-1} + x_i + upper_i x_{i+1} = rhs_i` on the
/// interior with `x_0 = x_n = 0`.
fn solve_tridiagonal(lower: &[f64], upper: &[f64], rhs: &mut [f64], c: &mut [f64], x: &mut [f64]) {
    let n = rhs.len() - 1;
    x[0] = 0.0;
    x[n] = 0.0;
    let mut denom = 1.0;
    for i in 1..n {
        if i > 1 {
            denom = 1.0 - lower[i] * c[i - 1];
            rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
        }
        c[i] = upper[i] / denom;
    }
    x[n - 1] = rhs[n - 1];
    for i in (1..n - 1).rev() {
        x[i] = rhs[i] - c[i] * x[i + 1];
    }
}

/// Number of disjoint runs where `|value|` exceeds `threshold_frac` of the
/// global maximum.
pub fn count_pulses(series: &SampledSeries, threshold_frac: f64) -> Result<usize> {
    if !(threshold_frac > 0.0 && threshold_frac < 1.0) {
        return Err(invalid(
            "threshold",
            format!("must lie in (0, 1), got {threshold_frac}"),
        ));
    }
    let mags = series.magnitudes();
    let peak = mags.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0);
    }
    let cut = threshold_frac * peak;
    let mut count = 0;
    let mut inside = false;
    for m in mags {
        if m > cut && !inside {
            count += 1;
        }
        inside = m > cut;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moore::{numeric_moore, rg_moore, static_moore};
    use crate::numerics::simpson_nodes;

    fn cfg(eps: f64, q: u32) -> StringConfig {
        let traj = MirrorTrajectory::new(1.0, eps, q, 200.0).unwrap();
        StringConfig::new(1, 0.01, traj).unwrap()
    }

    #[test]
    fn fixed_end_stays_put() {
        let c = cfg(0.01, 2);
        let r = rg_moore(c.traj);
        for &t in &[0.0, 3.1, 27.4] {
            assert_eq!(string_displacement(&c, &r, 0.0, t).unwrap(), 0.0);
        }
    }

    #[test]
    fn standing_wave_before_motion() {
        let c = cfg(0.01, 2);
        let r = numeric_moore(c.traj, 5.0, 1e-12).unwrap();
        for &(z, t) in &[(0.3, -0.2), (0.77, -0.9), (0.5, -0.5)] {
            let want = 2.0 * 0.01 * (PI * z).sin() * (PI * t).cos();
            assert!((string_displacement(&c, &r, z, t).unwrap() - want).abs() < 1e-15);
        }
    }

    #[test]
    fn plate_is_a_node() {
        let c = cfg(0.01, 2);
        let r = numeric_moore(c.traj, 80.0, 1e-13).unwrap();
        for &t in &[0.7, 13.3, 50.3] {
            let z = c.traj.eval_length(t);
            assert!(string_displacement(&c, &r, z, t).unwrap().abs() < 1e-6 * c.amplitude);
        }
    }

    #[test]
    fn static_energy_integral() {
        for k in [1, 2, 3] {
            let traj = MirrorTrajectory::new(1.3, 0.0, 2, 10.0).unwrap();
            let c = StringConfig::with_medium(k, 0.02, traj, 2.5, 1.0).unwrap();
            let r = static_moore(traj);
            let (z, w) = simpson_nodes(0.0, 1.3, 400);
            let total: f64 = z
                .iter()
                .zip(&w)
                .map(|(&z, w)| w * string_energy_density(&c, &r, z, 0.37).unwrap())
                .sum();
            let kf = f64::from(k);
            let want = 2.5 * 0.02f64.powi(2) * kf * kf * PI * PI / 1.3;
            assert!(((total - want) / want).abs() < 1e-3, "k={k}");
        }
    }

    #[test]
    fn energy_density_is_the_field_energy() {
        // ½T[(∂_t y)² + (∂_z y)²] by central differences.
        let c = cfg(0.01, 2);
        let r = numeric_moore(c.traj, 40.0, 1e-13).unwrap();
        let h = 1e-5;
        for &(z, t) in &[(0.31, 7.9), (0.64, 21.2)] {
            let y = |z: f64, t: f64| string_displacement(&c, &r, z, t).unwrap();
            let yt = (y(z, t + h) - y(z, t - h)) / (2.0 * h);
            let yz = (y(z + h, t) - y(z - h, t)) / (2.0 * h);
            let want = 0.5 * (yt * yt + yz * yz);
            let got = string_energy_density(&c, &r, z, t).unwrap();
            assert!((got - want).abs() < 1e-6 * want.max(1e-6), "{got} {want}");
        }
    }

    #[test]
    fn wave_speed_rescales_time() {
        let traj = MirrorTrajectory::new(1.0, 0.01, 2, 200.0).unwrap();
        let slow = StringConfig::with_medium(1, 0.01, traj, 1.0, 0.5).unwrap();
        let unit = StringConfig::new(1, 0.01, traj).unwrap();
        let r = rg_moore(traj);
        let a = string_displacement(&slow, &r, 0.4, 10.0).unwrap();
        let b = string_displacement(&unit, &r, 0.4, 5.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn out_of_domain_rejected() {
        let c = cfg(0.01, 2);
        let r = rg_moore(c.traj);
        assert!(string_displacement(&c, &r, 1.5, 0.0).is_err());
        assert!(string_energy_density(&c, &r, -0.1, 0.0).is_err());
    }

    #[test]
    fn oracle_preconditions() {
        let c = cfg(0.0, 2);
        assert!(fd_string_oracle(&c, FdGrid { nz: 100, cfl: 0.5 }, 1.0).is_err());
        assert!(matches!(
            fd_string_oracle(&c, FdGrid { nz: 512, cfl: 1.2 }, 1.0),
            Err(DceError::Cfl(_))
        ));
    }

    #[test]
    fn oracle_static_period() {
        let c = cfg(0.0, 2);
        let y = fd_string_oracle(&c, FdGrid { nz: 2048, cfl: 0.9 }, 2.0).unwrap();
        let values = y.real_values().unwrap();
        let err = y
            .grid()
            .iter()
            .zip(values)
            .map(|(z, v)| (v - 0.02 * (PI * z).sin()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-3 * c.amplitude, "{err}");
    }

    #[test]
    fn oracle_follows_moving_plate_early() {
        let c = cfg(0.01, 2);
        let r = numeric_moore(c.traj, 12.0, 1e-13).unwrap();
        let y = fd_string_oracle(&c, FdGrid { nz: 1024, cfl: 0.5 }, 5.3).unwrap();
        let err = y
            .grid()
            .iter()
            .zip(y.real_values().unwrap())
            .map(|(&z, v)| (v - string_displacement(&c, &r, z, 5.3).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-3 * c.amplitude, "{err}");
    }

    #[test]
    fn counts_regions() {
        let grid = linspace(0.0, 1.0, 101);
        let single: Vec<f64> = grid.iter().map(|z| (PI * z).sin()).collect();
        let s = SampledSeries::real(grid.clone(), single).unwrap();
        assert_eq!(count_pulses(&s, 0.3).unwrap(), 1);
        let double: Vec<f64> = grid.iter().map(|z| (2.0 * PI * z).sin()).collect();
        let d = SampledSeries::real(grid, double).unwrap();
        assert_eq!(count_pulses(&d, 0.3).unwrap(), 2);
        assert!(count_pulses(&d, 1.0).is_err());
    }

    #[test]
    fn late_time_pulses() {
        for (q, k) in [(2, 1), (4, 2)] {
            let traj = MirrorTrajectory::new(1.0, 0.01, q, 200.0).unwrap();
            let c = StringConfig::new(k, 0.01, traj).unwrap();
            let r = numeric_moore(traj, 110.0, 1e-13).unwrap();
            // εΩt ≈ 2π, shifted off the instant where the pulses cross.
            let t = 2.0 * PI / (0.01 * traj.omega()) + 0.3;
            let y = displacement_profile(&c, &r, t, 20001).unwrap();
            assert_eq!(count_pulses(&y, 0.3).unwrap(), q as usize, "q = {q}");
        }
    }
}
