use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Moore,
    Energy,
    String,
    Spectrum,
    Resonance,
    Photons,
    Bogoliubov,
}

pub const COMMANDS: [Command; 7] = [
    Command::Moore,
    Command::Energy,
    Command::String,
    Command::Spectrum,
    Command::Resonance,
    Command::Photons,
    Command::Bogoliubov,
];

/// One configurable key. A `None` default is filled in by the command once
/// the other keys are known (e.g. `t-stop` follows `t-max`).
#[derive(Debug, Clone, Copy)]
pub struct Param {
    pub key: &'static str,
    pub default: Option<&'static str>,
    pub help: &'static str,
}

const fn p(key: &'static str, default: &'static str, help: &'static str) -> Param {
    Param {
        key,
        default: Some(default),
        help,
    }
}

const fn derived(key: &'static str, help: &'static str) -> Param {
    Param {
        key,
        default: None,
        help,
    }
}

const MIRROR: [Param; 3] = [
    p("L0", "1", "rest length of the cavity"),
    p("eps", "0.01", "relative oscillation amplitude"),
    p("q", "2", "resonance index, drive frequency q*pi/L0"),
];

const GEOMETRY: [Param; 6] = [
    p("geometry", "circular", "rectangular | circular | coaxial | sphere"),
    p("Lx", "1", "rectangular side x"),
    p("Ly", "1", "rectangular side y"),
    p("Lz", "1", "length along the moving axis"),
    p("R", "1", "circular guide radius"),
    p("a0", "1", "sphere rest radius"),
];

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Moore => "moore",
            Self::Energy => "energy",
            Self::String => "string",
            Self::Spectrum => "spectrum",
            Self::Resonance => "resonance",
            Self::Photons => "photons",
            Self::Bogoliubov => "bogoliubov",
        }
    }

    pub fn about(self) -> &'static str {
        match self {
            Self::Moore => "Moore function R(t): closed form, characteristic solver, or both",
            Self::Energy => "renormalized energy density profile across the cavity",
            Self::String => "string displacement and energy density profiles",
            Self::Spectrum => "sorted eigenmode table of a cavity",
            Self::Resonance => "modes resonant with a drive and the pairs it couples",
            Self::Photons => "photon number of one parametrically driven mode",
            Self::Bogoliubov => "photon spectrum after the mirror stops",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        COMMANDS.into_iter().find(|c| c.name() == name)
    }

    pub fn params(self) -> Vec<Param> {
        let mut v = Vec::new();
        match self {
            Self::Moore => {
                v.extend(MIRROR);
                v.extend([
                    derived("t-stop", "time the mirror stops [default: t-max]"),
                    p("t-min", "0", "first sample time"),
                    p("t-max", "100", "last sample time"),
                    p("samples", "4096", "number of time samples"),
                    p("method", "both", "rg | numeric | both"),
                    p("tol", "1e-12", "characteristic solver tolerance"),
                ]);
            }
            Self::Energy => {
                v.extend(MIRROR);
                v.extend([
                    derived("t-stop", "time the mirror stops [default: t + 2 L0]"),
                    p("t", "10", "evaluation time"),
                    p("z-samples", "512", "number of points across the cavity"),
                    p("b", "0", "Neumann zero-mode amplitude"),
                    p("method", "numeric", "rg | numeric"),
                    p("tol", "1e-12", "characteristic solver tolerance"),
                ]);
            }
            Self::String => {
                v.extend([
                    p("k", "1", "seed eigenmode"),
                    p("amp", "0.01", "seed amplitude"),
                ]);
                v.extend(MIRROR);
                v.extend([
                    derived("t-stop", "time the plate stops [default: v0 t + 2 L0]"),
                    p("t", "50.3", "evaluation time"),
                    p("z-samples", "2048", "number of points along the string"),
                    p("tension", "1", "string tension"),
                    p("v0", "1", "wave speed"),
                    p("method", "numeric", "rg | numeric"),
                    p("oracle", "none", "none | fd (adds a finite-difference column)"),
                    p("cfl", "0.5", "finite-difference step as a fraction of the stable limit"),
                    p("tol", "1e-12", "characteristic solver tolerance"),
                ]);
            }
            Self::Spectrum => {
                v.extend(GEOMETRY);
                v.extend([
                    p("omega-max", "10", "highest frequency listed"),
                    p("pol", "all", "all | TE | TM | TEM"),
                ]);
            }
            Self::Resonance => {
                v.extend(GEOMETRY);
                v.extend([
                    derived("omega", "drive frequency"),
                    derived("omega-max", "highest mode frequency scanned [default: 3 omega]"),
                    p("tol", "1e-6", "relative resonance tolerance"),
                ]);
            }
            Self::Photons => {
                v.extend(GEOMETRY);
                v.extend([
                    p("pol", "TE", "TE | TM"),
                    p("nx", "1", "rectangular x index"),
                    p("ny", "0", "rectangular y index"),
                    p("nz", "1", "longitudinal index"),
                    p("n", "1", "azimuthal order (circular) or radial index (sphere)"),
                    p("m", "1", "radial root index (circular)"),
                    p("ell", "1", "angular order (sphere)"),
                    p("eps", "0.01", "relative oscillation amplitude"),
                    derived("periods", "drive periods [default: until N reaches ~sinh^2(5.5)]"),
                    p("detuning", "0", "relative drive detuning"),
                    p("steps", "1000", "integrator steps per drive period"),
                    p("method", "both", "analytic | mathieu | both"),
                ]);
            }
            Self::Bogoliubov => {
                v.extend(MIRROR);
                v.extend([
                    p("t-stop", "16", "stop time, snapped to a whole number of half-periods"),
                    p("K", "64", "basis truncation"),
                    p("boundary", "dirichlet", "dirichlet | neumann"),
                    p("method", "numeric", "rg | numeric"),
                    p("tol", "1e-13", "characteristic solver tolerance"),
                ]);
            }
        }
        v
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Resolved key/value map of one run, in table order.
#[derive(Debug, Clone)]
pub struct Params {
    command: Command,
    entries: Vec<(&'static str, Option<String>)>,
}

impl Params {
    pub fn new(command: Command) -> Self {
        let entries = command
            .params()
            .into_iter()
            .map(|p| (p.key, p.default.map(str::to_owned)))
            .collect();
        Self { command, entries }
    }

    pub fn command(&self) -> Command {
        self.command
    }

    fn slot(&mut self, key: &str) -> Option<&mut Option<String>> {
        self.entries.iter_mut().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let command = self.command;
        let slot = self
            .slot(key)
            .ok_or_else(|| CliError::Config(format!("unknown key `{key}` for `{command}`")))?;
        *slot = Some(value.trim().to_owned());
        Ok(())
    }

    /// Fills a derived key unless the user already set it.
    pub fn derive(&mut self, key: &str, value: impl ToString) {
        if let Some(slot) = self.slot(key) {
            if slot.is_none() {
                *slot = Some(value.to_string());
            }
        }
    }

    pub fn is_set(&self, key: &str) -> bool {
        self.raw(key).is_some()
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| *k == key)
            .and_then(|(_, v)| v.as_deref())
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        let raw = self
            .raw(key)
            .ok_or_else(|| CliError::Config(format!("missing value for `{key}`")))?;
        raw.parse()
            .map_err(|_| CliError::Config(format!("cannot parse `{key}` = `{raw}`")))
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        self.get(key)
    }

    pub fn u32(&self, key: &str) -> Result<u32, CliError> {
        self.get(key)
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        self.get(key)
    }

    pub fn choice(&self, key: &str, allowed: &[&'static str]) -> Result<&'static str, CliError> {
        let raw: String = self.get(key)?;
        allowed
            .iter()
            .find(|a| a.eq_ignore_ascii_case(&raw))
            .copied()
            .ok_or_else(|| {
                CliError::Config(format!("`{key}` must be one of {}, got `{raw}`", allowed.join(" | ")))
            })
    }

    /// `key = value` lines, unresolved keys omitted.
    pub fn echo(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| format!("{k} = {v}")))
            .collect()
    }

    /// Reads `key = value` lines. When the text holds a `# config:` block
    /// (the header of a previous run's CSV) only that block is read.
    pub fn apply_config_text(&mut self, text: &str) -> Result<(), CliError> {
        let lines: Vec<&str> = text.lines().map(str::trim).collect();
        let block = lines.iter().position(|l| *l == "# config:");
        let entries: Vec<(usize, &str)> = match block {
            Some(start) => lines[start + 1..]
                .iter()
                .enumerate()
                .take_while(|(_, l)| **l != "# end config")
                .map(|(i, l)| (start + 2 + i, l.trim_start_matches('#').trim()))
                .collect(),
            None => lines
                .iter()
                .enumerate()
                .map(|(i, l)| (i + 1, *l))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
                .collect(),
        };
        for (line_no, line) in entries {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {line_no}: expected `key = value`")))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "command" {
                if value != self.command.name() {
                    return Err(CliError::Config(format!(
                        "line {line_no}: config is for `{value}`, not `{}`",
                        self.command
                    )));
                }
                continue;
            }
            self.set(key, value)
                .map_err(|e| CliError::Config(format!("line {line_no}: {e}")))?;
        }
        Ok(())
    }

    pub fn apply_config_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.apply_config_text(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}
