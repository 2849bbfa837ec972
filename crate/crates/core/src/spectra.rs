//! Cavity eigenfrequencies and mode profiles for the four geometries, and
//! detection of the parametric-resonance and intermode-coupling conditions
//! `Ω = 2ω_k` and `Ω = |ω_k ± ω_j|`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, DceError, Result};
use crate::model::{CavityGeometry, ModeId, ModeIndices, Polarization};
use crate::specfun::{
    bessel_j, root, sph_bessel_j, sph_bessel_j_prime, RootFamily, MAX_ORDER, MAX_ROOT_COUNT,
};

/// Relative tolerance under which two frequencies count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Default relative tolerance of the resonance and coupling conditions.
pub const COUPLING_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub mode: ModeId,
    pub omega: f64,
    pub degeneracy_partners: Vec<ModeId>,
}

fn mismatch(geom: &CavityGeometry, mode: &ModeId) -> DceError {
    DceError::Constraint(format!("{mode} is not a mode of the {} cavity", geom.name()))
}

fn check_mode(geom: &CavityGeometry, mode: &ModeId) -> Result<()> {
    use Polarization::*;
    let ok = match (geom, mode.indices, mode.polarization) {
        (CavityGeometry::Rectangular { .. }, ModeIndices::Rectangular { nx, ny, nz }, TE) => {
            (nx, ny) != (0, 0) && nz >= 1
        }
        (CavityGeometry::Rectangular { .. }, ModeIndices::Rectangular { nx, ny, .. }, TM) => {
            nx >= 1 && ny >= 1
        }
        (CavityGeometry::Circular { .. }, ModeIndices::Circular { m, nz, .. }, TE) => {
            m >= 1 && nz >= 1
        }
        (CavityGeometry::Circular { .. }, ModeIndices::Circular { m, .. }, TM) => m >= 1,
        (CavityGeometry::Sphere { .. }, ModeIndices::Spherical { ell, n }, TE | TM) => {
            ell >= 1 && n >= 1
        }
        (CavityGeometry::CoaxialTem { .. }, ModeIndices::Line { n }, TEM | ScalarDirichlet) => {
            n >= 1
        }
        (CavityGeometry::CoaxialTem { .. }, ModeIndices::Line { n }, ScalarNeumann) => n >= 1,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(mismatch(geom, mode))
    }
}

/// Dimensionless transverse (or radial) root of the mode: `y_nm`, `x_nm`,
/// the `j_ℓ` zero or `κ_ℓn`. `None` for line modes.
fn transverse_root(mode: &ModeId) -> Result<Option<f64>> {
    Ok(match (mode.indices, mode.polarization) {
        (ModeIndices::Circular { n, m, .. }, Polarization::TE) => {
            Some(root(RootFamily::JPrimeZero, n, m)?)
        }
        (ModeIndices::Circular { n, m, .. }, _) => Some(root(RootFamily::JZero, n, m)?),
        (ModeIndices::Spherical { ell, n }, Polarization::TE) => {
            Some(root(RootFamily::SphJZero, ell, n)?)
        }
        (ModeIndices::Spherical { ell, n }, _) => Some(root(RootFamily::RiccatiPrimeZero, ell, n)?),
        _ => None,
    })
}

/// Eigenfrequency with the moving dimension evaluated at `at_time`.
pub fn eigenfrequency(geom: &CavityGeometry, mode: &ModeId, at_time: f64) -> Result<f64> {
    check_mode(geom, mode)?;
    let d = geom.moving_dimension(at_time);
    let omega = match (*geom, mode.indices) {
        (CavityGeometry::Rectangular { lx, ly, .. }, ModeIndices::Rectangular { nx, ny, nz }) => {
            let kx = f64::from(nx) * PI / lx;
            let ky = f64::from(ny) * PI / ly;
            let kz = f64::from(nz) * PI / d;
            (kx * kx + ky * ky + kz * kz).sqrt()
        }
        (CavityGeometry::Circular { radius, .. }, ModeIndices::Circular { nz, .. }) => {
            let kt = transverse_root(mode)?.expect("circular root") / radius;
            let kz = f64::from(nz) * PI / d;
            (kt * kt + kz * kz).sqrt()
        }
        (CavityGeometry::Sphere { .. }, ModeIndices::Spherical { .. }) => {
            transverse_root(mode)?.expect("spherical root") / d
        }
        (CavityGeometry::CoaxialTem { .. }, ModeIndices::Line { n }) => f64::from(n) * PI / d,
        _ => return Err(mismatch(geom, mode)),
    };
    Ok(omega)
}

/// Where a mode profile is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfilePoint {
    /// Cartesian cross-section point of a rectangular guide.
    Cartesian { x: f64, y: f64 },
    /// Polar cross-section point of a circular guide.
    Polar { rho: f64, phi: f64 },
    /// Radius inside a sphere.
    Radial { r: f64 },
}

/// Transverse profile (waveguides) or radial profile (sphere), normalised
/// over the cross-section (`dA`) or the ball (`r² dr`).
pub fn mode_profile(geom: &CavityGeometry, mode: &ModeId, point: ProfilePoint) -> Result<Complex64> {
    check_mode(geom, mode)?;
    let outside = |what: String| Err(DceError::Domain(what));
    match (*geom, mode.indices, point) {
        (
            CavityGeometry::Rectangular { lx, ly, .. },
            ModeIndices::Rectangular { nx, ny, .. },
            ProfilePoint::Cartesian { x, y },
        ) => {
            if !(0.0..=lx).contains(&x) || !(0.0..=ly).contains(&y) {
                return outside(format!("({x}, {y}) outside the {lx} x {ly} section"));
            }
            let norm = 2.0 / (lx * ly).sqrt();
            let (ax, ay) = (f64::from(nx) * PI * x / lx, f64::from(ny) * PI * y / ly);
            let v = if mode.polarization == Polarization::TE {
                let half = |n: u32| if n == 0 { std::f64::consts::FRAC_1_SQRT_2 } else { 1.0 };
                norm * half(nx) * half(ny) * ax.cos() * ay.cos()
            } else {
                norm * ax.sin() * ay.sin()
            };
            Ok(Complex64::new(v, 0.0))
        }
        (
            CavityGeometry::Circular { radius, .. },
            ModeIndices::Circular { n, .. },
            ProfilePoint::Polar { rho, phi },
        ) => {
            if !(0.0..=radius).contains(&rho) {
                return outside(format!("rho = {rho} outside the radius {radius}"));
            }
            let x = transverse_root(mode)?.expect("circular root");
            let nf = f64::from(n);
            let norm = if mode.polarization == Polarization::TE {
                1.0 / (radius * bessel_j(n, x)? * (1.0 - nf * nf / (x * x)).sqrt())
            } else {
                1.0 / (radius * bessel_j(n + 1, x)?)
            };
            let radial = norm / PI.sqrt() * bessel_j(n, x * rho / radius)?;
            Ok(Complex64::from_polar(1.0, nf * phi) * radial)
        }
        (CavityGeometry::Sphere { traj }, ModeIndices::Spherical { ell, .. }, ProfilePoint::Radial { r }) => {
            let a = traj.a0();
            if !(0.0..=a).contains(&r) {
                return outside(format!("r = {r} outside the radius {a}"));
            }
            let x = transverse_root(mode)?.expect("spherical root");
            let base = (2.0 / a.powi(3)).sqrt() / sph_bessel_j_prime(ell, x)?;
            let norm = if mode.polarization == Polarization::TE {
                base
            } else {
                let l = f64::from(ell * (ell + 1));
                base / (x * x - l).sqrt()
            };
            Ok(Complex64::new(norm * sph_bessel_j(ell, x * r / a)?, 0.0))
        }
        (CavityGeometry::CoaxialTem { .. }, ..) => Err(DceError::Constraint(
            "the TEM transverse profile is electrostatic and not modelled".into(),
        )),
        _ => Err(invalid("point", format!("wrong coordinate kind for the {} cavity", geom.name()))),
    }
}

/// Enumerates every admissible mode with `ω ≤ omega_max` at rest, sorted by
/// frequency with degeneracies grouped.
pub fn spectrum_scan(
    geom: &CavityGeometry,
    omega_max: f64,
    pol_filter: Option<Polarization>,
) -> Result<Vec<SpectrumEntry>> {
    if !(omega_max.is_finite() && omega_max > 0.0) {
        return Err(invalid("omega-max", format!("must be positive, got {omega_max}")));
    }
    let d = geom.rest_dimension();
    let wants = |p: Polarization| pol_filter.is_none_or(|f| f == p);
    let mut modes: Vec<ModeId> = Vec::new();
    match *geom {
        CavityGeometry::Rectangular { lx, ly, .. } => {
            let span = |l: f64| (omega_max * l / PI).floor() as u32;
            for nx in 0..=span(lx) {
                for ny in 0..=span(ly) {
                    for nz in 0..=span(d) {
                        for pol in [Polarization::TE, Polarization::TM] {
                            if let Ok(m) = ModeId::rectangular(pol, nx, ny, nz) {
                                modes.push(m);
                            }
                        }
                    }
                }
            }
        }
        CavityGeometry::Circular { radius, .. } => {
            let nz_max = (omega_max * d / PI).floor() as u32;
            for (pol, family, nz_min) in [
                (Polarization::TE, RootFamily::JPrimeZero, 1),
                (Polarization::TM, RootFamily::JZero, 0),
            ] {
                for n in 0..=MAX_ORDER {
                    let roots = roots_below(family, n, omega_max * radius)?;
                    if roots == 0 {
                        break;
                    }
                    for m in 1..=roots {
                        for nz in nz_min..=nz_max {
                            modes.push(ModeId::circular(pol, n, m, nz)?);
                        }
                    }
                }
            }
        }
        CavityGeometry::Sphere { .. } => {
            for (pol, family) in [
                (Polarization::TE, RootFamily::SphJZero),
                (Polarization::TM, RootFamily::RiccatiPrimeZero),
            ] {
                for ell in 1..=MAX_ORDER {
                    let roots = roots_below(family, ell, omega_max * d)?;
                    if roots == 0 {
                        break;
                    }
                    for n in 1..=roots {
                        modes.push(ModeId::spherical(pol, ell, n)?);
                    }
                }
            }
        }
        CavityGeometry::CoaxialTem { .. } => {
            for n in 1..=(omega_max * d / PI).floor() as u32 {
                modes.push(ModeId::tem(n)?);
            }
        }
    }

    let mut entries = Vec::new();
    for mode in modes.into_iter().filter(|m| wants(m.polarization)) {
        let omega = eigenfrequency(geom, &mode, 0.0)?;
        if omega <= omega_max {
            entries.push(SpectrumEntry {
                mode: mode.with_omega(omega),
                omega,
                degeneracy_partners: Vec::new(),
            });
        }
    }
    entries.sort_by(|a, b| {
        a.omega
            .total_cmp(&b.omega)
            .then(a.mode.polarization.cmp(&b.mode.polarization))
            .then(a.mode.indices.cmp(&b.mode.indices))
    });
    for i in 0..entries.len() {
        let w = entries[i].omega;
        entries[i].degeneracy_partners = entries
            .iter()
            .enumerate()
            .filter(|(j, e)| *j != i && (e.omega - w).abs() <= DEGENERACY_TOL * w)
            .map(|(_, e)| e.mode)
            .collect();
    }
    Ok(entries)
}

/// Number of roots of `family` at `order` not exceeding `bound`.
fn roots_below(family: RootFamily, order: u32, bound: f64) -> Result<u32> {
    let mut count = 0;
    loop {
        if count as usize >= MAX_ROOT_COUNT {
            return Err(DceError::Range(format!(
                "more than {MAX_ROOT_COUNT} roots of order {order} lie below {bound}; lower omega-max"
            )));
        }
        if root(family, order, count + 1)? > bound {
            return Ok(count);
        }
        count += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingSign {
    /// `Ω = ω_a + ω_b`
    Sum,
    /// `Ω = |ω_a - ω_b|`
    Difference,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonantMode {
    pub mode: ModeId,
    pub omega: f64,
    /// Whether the mode appears in any coupled pair.
    pub coupled: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledPair {
    pub a: ModeId,
    pub b: ModeId,
    pub sign: CouplingSign,
    /// `|Ω - (ω_a ± ω_b)| / Ω`
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingReport {
    pub drive: f64,
    pub resonant_modes: Vec<ResonantMode>,
    pub coupled_pairs: Vec<CoupledPair>,
    pub tol: f64,
}

impl CouplingReport {
    pub fn is_resonant(&self, mode: &ModeId) -> bool {
        self.resonant_modes.iter().any(|r| &r.mode == mode)
    }

    pub fn partners(&self, mode: &ModeId) -> Vec<(ModeId, CouplingSign)> {
        self.coupled_pairs
            .iter()
            .filter_map(|p| {
                if &p.a == mode {
                    Some((p.b, p.sign))
                } else if &p.b == mode {
                    Some((p.a, p.sign))
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Modes resonant with the drive (`|Ω - 2ω| ≤ tol Ω`) and pairs meeting
/// `|Ω - |ω_a ± ω_b|| ≤ tol Ω`.
///
/// The wall motion is uniform across the cross-section (or the sphere), so
/// it only mixes modes of the same polarization and transverse (angular)
/// indices; pairs across different sectors are not listed.
pub fn coupling_report(
    geom: &CavityGeometry,
    drive: f64,
    omega_max: f64,
    tol: f64,
) -> Result<CouplingReport> {
    if !(drive.is_finite() && drive > 0.0) {
        return Err(invalid("omega", format!("drive frequency must be positive, got {drive}")));
    }
    if !(tol.is_finite() && tol > 0.0 && tol < 1.0) {
        return Err(invalid("tol", format!("must lie in (0, 1), got {tol}")));
    }
    let spectrum = spectrum_scan(geom, omega_max, None)?;
    let mut pairs = Vec::new();
    for (i, a) in spectrum.iter().enumerate() {
        for b in &spectrum[i + 1..] {
            if a.mode.polarization != b.mode.polarization
                || a.mode.transverse_key() != b.mode.transverse_key()
            {
                continue;
            }
            for (sign, w) in [
                (CouplingSign::Sum, a.omega + b.omega),
                (CouplingSign::Difference, (a.omega - b.omega).abs()),
            ] {
                let defect = (drive - w).abs() / drive;
                if defect <= tol {
                    pairs.push(CoupledPair {
                        a: a.mode,
                        b: b.mode,
                        sign,
                        defect,
                    });
                }
            }
        }
    }
    let resonant_modes = spectrum
        .iter()
        .filter(|e| (drive - 2.0 * e.omega).abs() <= tol * drive)
        .map(|e| ResonantMode {
            mode: e.mode,
            omega: e.omega,
            coupled: pairs.iter().any(|p| p.a == e.mode || p.b == e.mode),
        })
        .collect();
    Ok(CouplingReport {
        drive,
        resonant_modes,
        coupled_pairs: pairs,
        tol,
    })
}

/// `L_z*/R` above which TE(1,1,1) lies below TM(0,1,0) in a circular guide.
pub fn crossover_length(geom: &CavityGeometry) -> Result<f64> {
    match geom {
        CavityGeometry::Circular { .. } => {
            let y11 = root(RootFamily::JPrimeZero, 1, 1)?;
            let x01 = root(RootFamily::JZero, 0, 1)?;
            Ok(PI / (x01 * x01 - y11 * y11).sqrt())
        }
        other => Err(invalid(
            "geometry",
            format!("the TE/TM crossover is defined for circular guides, not {}", other.name()),
        )),
    }
}
