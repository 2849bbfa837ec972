mod commands;
mod params;
mod table;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Arg, ArgMatches};
use dce_core::DceError;
use thiserror::Error;

use params::{Command, Params, COMMANDS};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Domain(#[from] DceError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::Domain(_) => 3,
            Self::Io { .. } => 4,
        }
    }
}

/// Bundled reproduction runs: output stem and config text.
const REPRODUCTIONS: [(&str, &str); 4] = [
    ("fig2_displacement", include_str!("../configs/fig2_displacement.conf")),
    ("fig3_energy", include_str!("../configs/fig3_energy.conf")),
    ("circular_waveguide", include_str!("../configs/circular_waveguide.conf")),
    ("cube_coupling", include_str!("../configs/cube_coupling.conf")),
];

fn cli() -> clap::Command {
    let io_args = [
        Arg::new("config")
            .long("config")
            .value_name("FILE")
            .help("`key = value` file, or the CSV of an earlier run; flags override it"),
        Arg::new("out")
            .long("out")
            .value_name("FILE")
            .help("write the CSV here instead of stdout"),
    ];
    let mut app = clap::Command::new("dce")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Photon creation in cavities with moving walls")
        .after_help("Logging: DCE_LOG=quiet|info|debug")
        .subcommand_required(true);
    for command in COMMANDS {
        let mut sub = clap::Command::new(command.name()).about(command.about());
        for param in command.params() {
            let mut arg = Arg::new(param.key).long(param.key).value_name("VALUE").help(param.help);
            if let Some(default) = param.default {
                // Shown only; defaults are applied below the config file.
                arg = arg.help(format!("{} [default: {default}]", param.help));
            }
            sub = sub.arg(arg);
        }
        app = app.subcommand(sub.args(io_args.clone()));
    }
    app.subcommand(
        clap::Command::new("reproduce")
            .about("run the bundled reproduction configs")
            .arg(
                Arg::new("dir")
                    .long("dir")
                    .value_name("DIR")
                    .default_value("reproductions")
                    .help("output directory"),
            ),
    )
}

fn init_logging() -> Result<(), CliError> {
    let level = match std::env::var("DCE_LOG").as_deref() {
        Err(_) | Ok("") => log::LevelFilter::Warn,
        Ok("quiet") => log::LevelFilter::Error,
        Ok("info") => log::LevelFilter::Info,
        Ok("debug") => log::LevelFilter::Debug,
        Ok(other) => {
            return Err(CliError::Config(format!(
                "DCE_LOG must be quiet, info or debug, got `{other}`"
            )))
        }
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();
    Ok(())
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    let io_err = |source, path: &Path| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    match path {
        Some(path) => fs::write(path, text).map_err(|e| io_err(e, path)),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| io_err(e, Path::new("<stdout>"))),
    }
}

fn run_command(command: Command, matches: &ArgMatches) -> Result<(), CliError> {
    let mut params = Params::new(command);
    if let Some(path) = matches.get_one::<String>("config") {
        params.apply_config_file(Path::new(path))?;
    }
    for param in command.params() {
        if let Some(value) = matches.get_one::<String>(param.key) {
            params.set(param.key, value)?;
        }
    }
    let table = commands::run(&mut params)?;
    let out = matches.get_one::<String>("out").map(PathBuf::from);
    write_output(out.as_deref(), &table.render(&params))
}

fn reproduce(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    for (stem, text) in REPRODUCTIONS {
        let name = text
            .lines()
            .find_map(|l| l.trim().strip_prefix("command"))
            .and_then(|rest| rest.trim().strip_prefix('='))
            .map(str::trim)
            .expect("bundled configs name their command");
        let command = Command::from_name(name).expect("bundled configs use known commands");
        let mut params = Params::new(command);
        params.apply_config_text(text)?;
        let table = commands::run(&mut params)?;
        let path = dir.join(format!("{stem}.csv"));
        write_output(Some(&path), &table.render(&params))?;
        log::info!("wrote {}", path.display());
        eprintln!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = init_logging().and_then(|()| match matches.subcommand() {
        Some(("reproduce", sub)) => {
            reproduce(Path::new(sub.get_one::<String>("dir").expect("has default")))
        }
        Some((name, sub)) => {
            run_command(Command::from_name(name).expect("subcommands mirror COMMANDS"), sub)
        }
        None => unreachable!("subcommand required"),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dce: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_line_is_well_formed() {
        cli().debug_assert();
    }

    #[test]
    fn bundled_configs_parse() {
        for (stem, text) in REPRODUCTIONS {
            let name = text
                .lines()
                .find_map(|l| l.strip_prefix("command = "))
                .unwrap_or_else(|| panic!("{stem} names no command"));
            let mut params = Params::new(Command::from_name(name).unwrap());
            params.apply_config_text(text).unwrap();
        }
    }
}
