use std::f64::consts::PI;

use dce_core::model::{
    linspace, CavityGeometry, MirrorTrajectory, ModeId, ModeIndices, Polarization, SphereTrajectory,
};
use dce_core::moore::{
    bogoliubov, energy_density, numeric_moore, photon_spectrum, rg_moore, Boundary, MooreFunction,
};
use dce_core::photons::{
    fit_growth, growth_rate, mathieu_evolve, photon_number_analytic, MathieuSettings,
};
use dce_core::specfun::{root, RootFamily};
use dce_core::spectra::{coupling_report, crossover_length, spectrum_scan, CouplingSign};
use dce_core::string::{
    displacement_profile, energy_profile, fd_string_oracle, string_displacement,
    string_energy_density, FdGrid, StringConfig,
};

use crate::params::{Command, Params};
use crate::table::{Cell, Table};
use crate::CliError;

type Outcome = Result<Table, CliError>;

pub fn run(params: &mut Params) -> Outcome {
    match params.command() {
        Command::Moore => moore(params),
        Command::Energy => energy(params),
        Command::String => string(params),
        Command::Spectrum => spectrum(params),
        Command::Resonance => resonance(params),
        Command::Photons => photons(params),
        Command::Bogoliubov => bogoliubov_spectrum(params),
    }
}

fn trajectory(p: &Params) -> Result<MirrorTrajectory, CliError> {
    Ok(MirrorTrajectory::new(p.f64("L0")?, p.f64("eps")?, p.u32("q")?, p.f64("t-stop")?)?)
}

fn moore_for(p: &Params, tr: MirrorTrajectory, t_max: f64) -> Result<MooreFunction, CliError> {
    Ok(match p.choice("method", &["rg", "numeric"])? {
        "rg" => rg_moore(tr),
        _ => numeric_moore(tr, t_max, p.f64("tol")?)?,
    })
}

fn moore(p: &mut Params) -> Outcome {
    let t_max = p.f64("t-max")?;
    p.derive("t-stop", t_max);
    let tr = trajectory(p)?;
    let samples = p.usize("samples")?;
    if samples < 2 {
        return Err(CliError::Config("`samples` must be at least 2".into()));
    }
    let grid = linspace(p.f64("t-min")?, t_max, samples);
    let method = p.choice("method", &["rg", "numeric", "both"])?;
    let rg = (method != "numeric").then(|| rg_moore(tr));
    let num = match method {
        "rg" => None,
        _ => Some(numeric_moore(tr, t_max, p.f64("tol")?)?),
    };
    let mut table = match method {
        "rg" => Table::new(&["t", "R_rg", "residual_rg"]),
        "numeric" => Table::new(&["t", "R_numeric", "residual_numeric"]),
        _ => Table::new(&["t", "R_rg", "R_numeric", "residual_rg"]),
    };
    for &t in &grid {
        let mut row = vec![Cell::Num(t)];
        match (&rg, &num) {
            (Some(r), None) | (None, Some(r)) => {
                row.extend([r.value(t).into(), r.residual(t).into()]);
            }
            (Some(r), Some(n)) => row.extend([r.value(t).into(), n.value(t).into(), r.residual(t).into()]),
            (None, None) => unreachable!("a method is always chosen"),
        }
        table.push(row);
    }
    table.meta("omega", tr.omega());
    Ok(table)
}

fn energy(p: &mut Params) -> Outcome {
    let t = p.f64("t")?;
    p.derive("t-stop", t + 2.0 * p.f64("L0")?);
    let tr = trajectory(p)?;
    let r = moore_for(p, tr, t + 2.0 * tr.l0())?;
    let count = p.usize("z-samples")?;
    if count < 2 {
        return Err(CliError::Config("`z-samples` must be at least 2".into()));
    }
    let b = p.f64("b")?;
    let mut table = Table::new(&["z", "energy_density"]);
    for z in linspace(0.0, tr.eval_length(t), count) {
        table.push(vec![z.into(), energy_density(&r, z, t, b)?.into()]);
    }
    table.meta("static_casimir", -PI / (24.0 * tr.l0() * tr.l0()));
    Ok(table)
}

fn string(p: &mut Params) -> Outcome {
    let t = p.f64("t")?;
    let v0 = p.f64("v0")?;
    p.derive("t-stop", v0 * t + 2.0 * p.f64("L0")?);
    let tr = trajectory(p)?;
    let cfg = StringConfig::with_medium(p.u32("k")?, p.f64("amp")?, tr, p.f64("tension")?, v0)?;
    let r = moore_for(p, tr, v0 * t + 2.0 * tr.l0())?;
    let count = p.usize("z-samples")?;
    let mut table;
    match p.choice("oracle", &["none", "fd"])? {
        "fd" => {
            let grid = FdGrid {
                nz: count.saturating_sub(1),
                cfl: p.f64("cfl")?,
            };
            let fd = fd_string_oracle(&cfg, grid, t)?;
            let y_fd = fd.real_values().expect("real profile");
            table = Table::new(&["z", "y", "rho_E", "y_fd"]);
            for (&z, &yf) in fd.grid().iter().zip(y_fd) {
                table.push(vec![
                    z.into(),
                    string_displacement(&cfg, &r, z, t)?.into(),
                    string_energy_density(&cfg, &r, z, t)?.into(),
                    yf.into(),
                ]);
            }
        }
        _ => {
            let y = displacement_profile(&cfg, &r, t, count)?;
            let rho = energy_profile(&cfg, &r, t, count)?;
            let y = y.real_values().expect("real profile");
            let grid = rho.grid();
            let rho = rho.real_values().expect("real profile");
            table = Table::new(&["z", "y", "rho_E"]);
            for i in 0..count {
                table.push(vec![grid[i].into(), y[i].into(), rho[i].into()]);
            }
        }
    }
    table.meta("resonant", cfg.is_resonant());
    Ok(table)
}

/// The cavity described by the geometry keys. Motion parameters do not
/// enter spectra, so the trajectory here only fixes the rest dimensions.
fn geometry(p: &Params) -> Result<CavityGeometry, CliError> {
    let rest = |l: f64| MirrorTrajectory::new(l, 0.0, 1, l);
    Ok(match p.choice("geometry", &["rectangular", "circular", "coaxial", "sphere"])? {
        "rectangular" => CavityGeometry::rectangular(p.f64("Lx")?, p.f64("Ly")?, rest(p.f64("Lz")?)?)?,
        "circular" => CavityGeometry::circular(p.f64("R")?, rest(p.f64("Lz")?)?)?,
        "coaxial" => CavityGeometry::coaxial_tem(rest(p.f64("Lz")?)?),
        _ => CavityGeometry::sphere(SphereTrajectory::new(p.f64("a0")?, 0.0, 1.0, 1.0)?),
    })
}

/// `(i1, i2, i3)` columns of a mode.
fn index_cells(mode: &ModeId) -> [Cell; 3] {
    match mode.indices {
        ModeIndices::Rectangular { nx, ny, nz } => [nx.into(), ny.into(), nz.into()],
        ModeIndices::Circular { n, m, nz } => [n.into(), m.into(), nz.into()],
        ModeIndices::Spherical { ell, n } => [ell.into(), n.into(), Cell::Empty],
        ModeIndices::Line { n } => [n.into(), Cell::Empty, Cell::Empty],
    }
}

fn spectrum(p: &mut Params) -> Outcome {
    let g = geometry(p)?;
    let pol = match p.choice("pol", &["all", "TE", "TM", "TEM"])? {
        "TE" => Some(Polarization::TE),
        "TM" => Some(Polarization::TM),
        "TEM" => Some(Polarization::TEM),
        _ => None,
    };
    let scan = spectrum_scan(&g, p.f64("omega-max")?, pol)?;
    let mut table = Table::new(&["pol", "i1", "i2", "i3", "omega", "degeneracy", "growth_rate"]);
    for e in &scan {
        let rate = growth_rate(&g, &e.mode).ok().map(|r| r.rate);
        let [a, b, c] = index_cells(&e.mode);
        table.push(vec![
            e.mode.polarization.to_string().into(),
            a,
            b,
            c,
            e.omega.into(),
            (e.degeneracy_partners.len() + 1).into(),
            rate.into(),
        ]);
    }
    table.meta("modes", scan.len());
    if let CavityGeometry::Circular { .. } = g {
        let y11 = root(RootFamily::JPrimeZero, 1, 1)?;
        table.meta("y11", y11);
        table.meta("x01", root(RootFamily::JZero, 0, 1)?);
        table.meta("(pi/y11)^2", (PI / y11).powi(2));
        table.meta("(y11/pi)^2", (y11 / PI).powi(2));
        table.meta("crossover Lz/R", crossover_length(&g)?);
    }
    Ok(table)
}

fn resonance(p: &mut Params) -> Outcome {
    if !p.is_set("omega") {
        return Err(CliError::Config("`omega` (drive frequency) is required".into()));
    }
    let drive = p.f64("omega")?;
    p.derive("omega-max", 3.0 * drive);
    let g = geometry(p)?;
    let report = coupling_report(&g, drive, p.f64("omega-max")?, p.f64("tol")?)?;
    let mut table = Table::new(&["kind", "mode_a", "mode_b", "sign", "omega_a", "omega_b", "defect"]);
    for m in &report.resonant_modes {
        table.push(vec![
            Cell::Text(if m.coupled { "resonant+coupled" } else { "resonant" }.into()),
            m.mode.to_string().into(),
            Cell::Empty,
            Cell::Empty,
            m.omega.into(),
            Cell::Empty,
            ((drive - 2.0 * m.omega).abs() / drive).into(),
        ]);
    }
    for pair in &report.coupled_pairs {
        let omega = |m: &ModeId| m.omega.map_or(Cell::Empty, Cell::Num);
        table.push(vec![
            Cell::Text("pair".into()),
            pair.a.to_string().into(),
            pair.b.to_string().into(),
            Cell::Text(match pair.sign {
                CouplingSign::Sum => "sum".into(),
                CouplingSign::Difference => "difference".into(),
            }),
            omega(&pair.a),
            omega(&pair.b),
            pair.defect.into(),
        ]);
    }
    table.meta("resonant modes", report.resonant_modes.len());
    table.meta("coupled pairs", report.coupled_pairs.len());
    Ok(table)
}

fn selected_mode(p: &Params, g: &CavityGeometry) -> Result<ModeId, CliError> {
    let pol = match p.choice("pol", &["TE", "TM", "TEM"])? {
        "TE" => Polarization::TE,
        "TM" => Polarization::TM,
        _ => Polarization::TEM,
    };
    Ok(match g {
        CavityGeometry::Rectangular { .. } => ModeId::rectangular(pol, p.u32("nx")?, p.u32("ny")?, p.u32("nz")?)?,
        CavityGeometry::Circular { .. } => ModeId::circular(pol, p.u32("n")?, p.u32("m")?, p.u32("nz")?)?,
        CavityGeometry::CoaxialTem { .. } => ModeId::tem(p.u32("nz")?)?,
        CavityGeometry::Sphere { .. } => ModeId::spherical(pol, p.u32("ell")?, p.u32("n")?)?,
    })
}

fn photons(p: &mut Params) -> Outcome {
    let g = geometry(p)?;
    let mode = selected_mode(p, &g)?;
    let rate = growth_rate(&g, &mode)?;
    let eps = p.f64("eps")?;
    let drive = 2.0 * rate.omega * (1.0 + p.f64("detuning")?);
    if !p.is_set("periods") {
        if rate.rate * eps <= 0.0 || !rate.rate.is_finite() {
            return Err(CliError::Config(format!("{mode} does not grow; set `periods` explicitly")));
        }
        p.derive("periods", (5.5 / (rate.rate * eps) * drive / (2.0 * PI)).ceil() as u32);
    }
    let periods = p.u32("periods")?;
    let method = p.choice("method", &["analytic", "mathieu", "both"])?;

    let mut table = Table::new(match method {
        "analytic" => &["t", "N_analytic"],
        "mathieu" => &["t", "N_mathieu"],
        _ => &["t", "N_analytic", "N_mathieu"],
    });
    table.meta("mode", mode);
    table.meta("omega", rate.omega);
    table.meta("rate", rate.rate);
    let evolution = if method == "analytic" {
        None
    } else {
        let settings = MathieuSettings {
            steps_per_period: p.u32("steps")?,
            detuning: p.f64("detuning")?,
            ..MathieuSettings::new(eps, periods)
        };
        let evo = mathieu_evolve(&g, &mode, &settings)?;
        if let Ok(fit) = fit_growth(&evo, &rate, eps) {
            table.meta("fitted ln N rate", fit.slope);
            table.meta("analytic ln N rate", 2.0 * rate.rate * eps);
        }
        Some(evo)
    };
    let times = match &evolution {
        Some(evo) => evo.times.clone(),
        None => (0..=periods).map(|k| f64::from(k) * 2.0 * PI / drive).collect(),
    };
    for (i, &t) in times.iter().enumerate() {
        let mut row = vec![Cell::Num(t)];
        if method != "mathieu" {
            row.push(photon_number_analytic(&rate, eps, t)?.into());
        }
        if let Some(evo) = &evolution {
            row.push(evo.n[i].into());
        }
        table.push(row);
    }
    Ok(table)
}

fn bogoliubov_spectrum(p: &mut Params) -> Outcome {
    let requested = p.f64("t-stop")?;
    let tr = MirrorTrajectory::stopping_near(p.f64("L0")?, p.f64("eps")?, p.u32("q")?, requested)?;
    if tr.t_stop() != requested {
        log::info!("t-stop snapped from {requested} to {} (whole half-periods)", tr.t_stop());
        p.set("t-stop", &tr.t_stop().to_string())?;
    }
    let r = moore_for(p, tr, tr.t_stop() + 2.0 * tr.l0())?;
    let boundary = match p.choice("boundary", &["dirichlet", "neumann"])? {
        "dirichlet" => Boundary::Dirichlet,
        _ => Boundary::Neumann,
    };
    let b = bogoliubov(&tr, &r, boundary, p.usize("K")?)?;
    let spec = photon_spectrum(&b);
    let defect = b
        .normalization_defects()
        .into_iter()
        .take(b.checked_rows())
        .fold(0.0, f64::max);
    let mut table = Table::new(&["n", "omega_n", "N_n"]);
    for (i, &count) in spec.counts.iter().enumerate() {
        let n = i + 1;
        table.push(vec![n.into(), (n as f64 * PI / tr.l0()).into(), count.into()]);
    }
    table.meta("total energy", spec.total_energy);
    table.meta("total photons", spec.counts.iter().sum::<f64>());
    table.meta(
        &format!("max normalization defect (rows 1..={})", b.checked_rows()),
        defect,
    );
    Ok(table)
}
