//! Shared domain types: wall trajectories, cavity geometries, mode labels and
//! sampled series.
//!
//! Units are natural (`c = 1`): lengths and times share a unit and every
//! frequency is in radians per unit length.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{invalid, DceError, Result};

/// Largest |ε| accepted anywhere; the analytic machinery is first order in ε.
pub const EPSILON_LIMIT: f64 = 0.2;
/// Above this amplitude a warning is logged.
pub const EPSILON_WARN: f64 = 0.05;

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !epsilon.is_finite() || epsilon.abs() >= EPSILON_LIMIT {
        return Err(invalid(
            "epsilon",
            format!("|epsilon| must be below {EPSILON_LIMIT}, got {epsilon}"),
        ));
    }
    if epsilon.abs() > EPSILON_WARN {
        log::warn!("epsilon = {epsilon} exceeds {EPSILON_WARN}; first-order results degrade");
    }
    Ok(())
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be a positive finite number, got {value}")))
    }
}

/// Harmonic boundary law `b(t) = b0 [1 + ε sin(Ω t)]` switched on at `t = 0`
/// and frozen at `b(T)` after the stop time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicLaw {
    pub base: f64,
    pub epsilon: f64,
    pub omega: f64,
    pub t_stop: f64,
}

impl HarmonicLaw {
    pub fn new(base: f64, epsilon: f64, omega: f64, t_stop: f64) -> Result<Self> {
        check_positive("base length", base)?;
        check_epsilon(epsilon)?;
        check_positive("Omega", omega)?;
        if !(t_stop > 0.0) {
            return Err(invalid("T", format!("stop time must be positive, got {t_stop}")));
        }
        Ok(Self {
            base,
            epsilon,
            omega,
            t_stop,
        })
    }

    #[inline]
    fn moving(&self, t: f64) -> bool {
        t > 0.0 && t <= self.t_stop
    }

    pub fn value(&self, t: f64) -> f64 {
        let tc = t.clamp(0.0, self.t_stop);
        self.base * (1.0 + self.epsilon * (self.omega * tc).sin())
    }

    pub fn velocity(&self, t: f64) -> f64 {
        if self.moving(t) {
            self.base * self.epsilon * self.omega * (self.omega * t).cos()
        } else {
            0.0
        }
    }

    pub fn acceleration(&self, t: f64) -> f64 {
        if self.moving(t) {
            -self.base * self.epsilon * self.omega.powi(2) * (self.omega * t).sin()
        } else {
            0.0
        }
    }

    pub fn jerk(&self, t: f64) -> f64 {
        if self.moving(t) {
            -self.base * self.epsilon * self.omega.powi(3) * (self.omega * t).cos()
        } else {
            0.0
        }
    }

    /// Largest wall speed reached while moving.
    pub fn max_speed(&self) -> f64 {
        self.base * self.epsilon.abs() * self.omega
    }
}

/// One-dimensional mirror trajectory `L(t) = L0 [1 + ε sin(Ω t)]` with
/// `Ω = q π / L0` for an integer resonance index `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorTrajectory {
    law: HarmonicLaw,
    q: u32,
}

impl MirrorTrajectory {
    pub fn new(l0: f64, epsilon: f64, q: u32, t_stop: f64) -> Result<Self> {
        if q == 0 {
            return Err(invalid("q", "resonance index must be at least 1"));
        }
        check_positive("L0", l0)?;
        let omega = f64::from(q) * PI / l0;
        Ok(Self {
            law: HarmonicLaw::new(l0, epsilon, omega, t_stop)?,
            q,
        })
    }

    /// Trajectory stopped after `half_periods` half-periods of the drive, so
    /// that `L(T) = L0`.
    pub fn with_half_periods(l0: f64, epsilon: f64, q: u32, half_periods: u32) -> Result<Self> {
        if half_periods == 0 {
            return Err(invalid("T", "need at least one half-period of motion"));
        }
        check_positive("L0", l0)?;
        let t_stop = f64::from(half_periods) * l0 / f64::from(q.max(1));
        Self::new(l0, epsilon, q, t_stop)
    }

    /// Same as [`with_half_periods`](Self::with_half_periods), choosing the
    /// half-period count nearest to `t_approx`.
    pub fn stopping_near(l0: f64, epsilon: f64, q: u32, t_approx: f64) -> Result<Self> {
        let half = l0 / f64::from(q.max(1));
        let count = (t_approx / half).round().max(1.0) as u32;
        Self::with_half_periods(l0, epsilon, q, count)
    }

    pub fn l0(&self) -> f64 {
        self.law.base
    }

    pub fn epsilon(&self) -> f64 {
        self.law.epsilon
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn omega(&self) -> f64 {
        self.law.omega
    }

    pub fn t_stop(&self) -> f64 {
        self.law.t_stop
    }

    pub fn law(&self) -> &HarmonicLaw {
        &self.law
    }

    /// `L(t)`: `L0` before the motion, frozen at `L(T)` after it.
    pub fn eval_length(&self, t: f64) -> f64 {
        self.law.value(t)
    }

    /// `dL/dt`, zero outside `(0, T]`.
    pub fn velocity(&self, t: f64) -> f64 {
        self.law.velocity(t)
    }

    pub fn acceleration(&self, t: f64) -> f64 {
        self.law.acceleration(t)
    }

    pub fn jerk(&self, t: f64) -> f64 {
        self.law.jerk(t)
    }

    /// Whether the stop time is an integer number of drive half-periods.
    pub fn ends_at_rest_length(&self) -> bool {
        let ratio = self.omega() * self.t_stop() / PI;
        (ratio - ratio.round()).abs() < 1e-9 * ratio.max(1.0)
    }

    /// Same trajectory with a different amplitude.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.l0(), epsilon, self.q, self.t_stop())
    }
}

/// Breathing sphere `a(t) = a0 [1 + ε sin(Ω t)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereTrajectory {
    law: HarmonicLaw,
}

impl SphereTrajectory {
    pub fn new(a0: f64, epsilon: f64, omega: f64, t_stop: f64) -> Result<Self> {
        check_positive("a0", a0)?;
        Ok(Self {
            law: HarmonicLaw::new(a0, epsilon, omega, t_stop)?,
        })
    }

    pub fn a0(&self) -> f64 {
        self.law.base
    }

    pub fn epsilon(&self) -> f64 {
        self.law.epsilon
    }

    pub fn omega(&self) -> f64 {
        self.law.omega
    }

    pub fn law(&self) -> &HarmonicLaw {
        &self.law
    }

    pub fn radius(&self, t: f64) -> f64 {
        self.law.value(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CavityGeometry {
    Rectangular {
        lx: f64,
        ly: f64,
        lz: MirrorTrajectory,
    },
    Circular {
        radius: f64,
        lz: MirrorTrajectory,
    },
    /// Coaxial guide restricted to its TEM sector; the transverse
    /// electrostatic profile is not modelled.
    CoaxialTem { lz: MirrorTrajectory },
    Sphere { traj: SphereTrajectory },
}

impl CavityGeometry {
    pub fn rectangular(lx: f64, ly: f64, lz: MirrorTrajectory) -> Result<Self> {
        check_positive("Lx", lx)?;
        check_positive("Ly", ly)?;
        Ok(Self::Rectangular { lx, ly, lz })
    }

    pub fn circular(radius: f64, lz: MirrorTrajectory) -> Result<Self> {
        check_positive("R", radius)?;
        Ok(Self::Circular { radius, lz })
    }

    pub fn coaxial_tem(lz: MirrorTrajectory) -> Self {
        Self::CoaxialTem { lz }
    }

    pub fn sphere(traj: SphereTrajectory) -> Self {
        Self::Sphere { traj }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Rectangular { .. } => "rectangular",
            Self::Circular { .. } => "circular",
            Self::CoaxialTem { .. } => "coaxial",
            Self::Sphere { .. } => "sphere",
        }
    }

    /// Longitudinal trajectory, if the cavity has one.
    pub fn longitudinal(&self) -> Option<&MirrorTrajectory> {
        match self {
            Self::Rectangular { lz, .. } | Self::Circular { lz, .. } | Self::CoaxialTem { lz } => {
                Some(lz)
            }
            Self::Sphere { .. } => None,
        }
    }

    /// The moving dimension (`L_z` or the sphere radius) at time `t`.
    pub fn moving_dimension(&self, t: f64) -> f64 {
        match self {
            Self::Sphere { traj } => traj.radius(t),
            other => other.longitudinal().expect("longitudinal trajectory").eval_length(t),
        }
    }

    /// Static value of the moving dimension.
    pub fn rest_dimension(&self) -> f64 {
        match self {
            Self::Sphere { traj } => traj.a0(),
            other => other.longitudinal().expect("longitudinal trajectory").l0(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarization {
    TE,
    TM,
    TEM,
    ScalarDirichlet,
    ScalarNeumann,
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::TE => "TE",
            Self::TM => "TM",
            Self::TEM => "TEM",
            Self::ScalarDirichlet => "D",
            Self::ScalarNeumann => "N",
        };
        f.write_str(s)
    }
}

/// Integer labels of a mode; which variant applies depends on the geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModeIndices {
    /// `(n_x, n_y, n_z)`; for TM the transverse pair is `(m_x, m_y)`.
    Rectangular { nx: u32, ny: u32, nz: u32 },
    /// Azimuthal order `n`, radial root index `m`, longitudinal `n_z`.
    Circular { n: u32, m: u32, nz: u32 },
    Spherical { ell: u32, n: u32 },
    /// TEM and scalar 1+1 modes.
    Line { n: u32 },
}

/// Polarization plus indices, optionally carrying the resolved eigenfrequency.
#[derive(Debug, Clone, Copy)]
pub struct ModeId {
    pub polarization: Polarization,
    pub indices: ModeIndices,
    pub omega: Option<f64>,
}

impl PartialEq for ModeId {
    fn eq(&self, other: &Self) -> bool {
        self.polarization == other.polarization && self.indices == other.indices
    }
}

impl Eq for ModeId {}

impl std::hash::Hash for ModeId {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.polarization.hash(state);
        self.indices.hash(state);
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.indices {
            ModeIndices::Rectangular { nx, ny, nz } => {
                write!(f, "{}({nx},{ny},{nz})", self.polarization)
            }
            ModeIndices::Circular { n, m, nz } => write!(f, "{}({n},{m},{nz})", self.polarization),
            ModeIndices::Spherical { ell, n } => write!(f, "{}(l={ell},n={n})", self.polarization),
            ModeIndices::Line { n } => write!(f, "{}({n})", self.polarization),
        }
    }
}

impl ModeId {
    fn build(polarization: Polarization, indices: ModeIndices) -> Self {
        Self {
            polarization,
            indices,
            omega: None,
        }
    }

    pub fn rectangular(pol: Polarization, nx: u32, ny: u32, nz: u32) -> Result<Self> {
        match pol {
            Polarization::TE if (nx == 0 && ny == 0) || nz == 0 => Err(DceError::Constraint(
                format!("rectangular TE needs (nx, ny) != (0, 0) and nz >= 1, got ({nx},{ny},{nz})"),
            )),
            Polarization::TM if nx == 0 || ny == 0 => Err(DceError::Constraint(format!(
                "rectangular TM needs nx, ny >= 1, got ({nx},{ny},{nz})"
            ))),
            Polarization::TE | Polarization::TM => {
                Ok(Self::build(pol, ModeIndices::Rectangular { nx, ny, nz }))
            }
            other => Err(DceError::Constraint(format!(
                "{other} is not a rectangular-waveguide polarization"
            ))),
        }
    }

    pub fn circular(pol: Polarization, n: u32, m: u32, nz: u32) -> Result<Self> {
        match pol {
            Polarization::TE if m == 0 || nz == 0 => Err(DceError::Constraint(format!(
                "circular TE needs m >= 1 and nz >= 1, got ({n},{m},{nz})"
            ))),
            Polarization::TM if m == 0 => Err(DceError::Constraint(format!(
                "circular TM needs m >= 1, got ({n},{m},{nz})"
            ))),
            Polarization::TE | Polarization::TM => {
                Ok(Self::build(pol, ModeIndices::Circular { n, m, nz }))
            }
            other => Err(DceError::Constraint(format!(
                "{other} is not a circular-waveguide polarization"
            ))),
        }
    }

    /// Spherical TE/TM mode. `ℓ = 0` has no electromagnetic counterpart and
    /// is rejected.
    pub fn spherical(pol: Polarization, ell: u32, n: u32) -> Result<Self> {
        if !matches!(pol, Polarization::TE | Polarization::TM) {
            return Err(DceError::Constraint(format!(
                "{pol} is not a spherical polarization"
            )));
        }
        if ell == 0 {
            return Err(DceError::Constraint(
                "spherical l = 0 modes carry no electromagnetic field".into(),
            ));
        }
        if n == 0 {
            return Err(DceError::Constraint("spherical radial index starts at 1".into()));
        }
        Ok(Self::build(pol, ModeIndices::Spherical { ell, n }))
    }

    pub fn tem(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(DceError::Constraint("TEM index starts at 1".into()));
        }
        Ok(Self::build(Polarization::TEM, ModeIndices::Line { n }))
    }

    /// Scalar 1+1 mode. Neumann admits the zero mode `k = 0`.
    pub fn scalar(pol: Polarization, k: u32) -> Result<Self> {
        match pol {
            Polarization::ScalarDirichlet if k == 0 => Err(DceError::Constraint(
                "Dirichlet modes start at k = 1".into(),
            )),
            Polarization::ScalarDirichlet | Polarization::ScalarNeumann => {
                Ok(Self::build(pol, ModeIndices::Line { n: k }))
            }
            other => Err(DceError::Constraint(format!("{other} is not a scalar polarization"))),
        }
    }

    pub fn is_zero_mode(&self) -> bool {
        self.polarization == Polarization::ScalarNeumann
            && self.indices == ModeIndices::Line { n: 0 }
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = Some(omega);
        self
    }

    /// Longitudinal index for waveguide and line modes.
    pub fn nz(&self) -> Option<u32> {
        match self.indices {
            ModeIndices::Rectangular { nz, .. } | ModeIndices::Circular { nz, .. } => Some(nz),
            ModeIndices::Line { n } => Some(n),
            ModeIndices::Spherical { .. } => None,
        }
    }

    /// Indices that fix the transverse (or angular) profile. Wall motion
    /// only mixes modes that share them.
    pub fn transverse_key(&self) -> (u32, u32) {
        match self.indices {
            ModeIndices::Rectangular { nx, ny, .. } => (nx, ny),
            ModeIndices::Circular { n, m, .. } => (n, m),
            ModeIndices::Spherical { ell, .. } => (ell, 0),
            ModeIndices::Line { .. } => (0, 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesValues {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl SeriesValues {
    pub fn len(&self) -> usize {
        match self {
            Self::Real(v) => v.len(),
            Self::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Values sampled on a strictly increasing grid, with free-form labels.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSeries {
    grid: Vec<f64>,
    values: SeriesValues,
    pub meta: BTreeMap<String, String>,
}

impl SampledSeries {
    pub fn new(grid: Vec<f64>, values: SeriesValues) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(invalid(
                "series",
                format!("grid has {} points but {} values", grid.len(), values.len()),
            ));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("series", "grid must be strictly increasing"));
        }
        Ok(Self {
            grid,
            values,
            meta: BTreeMap::new(),
        })
    }

    pub fn real(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, SeriesValues::Real(values))
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &SeriesValues {
        &self.values
    }

    /// Real values, or moduli for complex series.
    pub fn magnitudes(&self) -> Vec<f64> {
        match &self.values {
            SeriesValues::Real(v) => v.iter().map(|x| x.abs()).collect(),
            SeriesValues::Complex(v) => v.iter().map(|x| x.norm()).collect(),
        }
    }

    pub fn real_values(&self) -> Option<&[f64]> {
        match &self.values {
            SeriesValues::Real(v) => Some(v),
            SeriesValues::Complex(_) => None,
        }
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

/// `count` evenly spaced points on `[min, max]`.
pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let step = (max - min) / (count - 1) as f64;
            (0..count)
                .map(|i| if i + 1 == count { max } else { min + step * i as f64 })
                .collect()
        }
    }
}
