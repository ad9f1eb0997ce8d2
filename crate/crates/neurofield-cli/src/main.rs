use std::path::PathBuf;
use std::process::ExitCode;

use neurofield_cli::commands::{cmd_bench, cmd_converge, cmd_simulate, cmd_turing, cmd_wave_speed};
use neurofield_cli::config::parse_config_file;
use neurofield_cli::{CliError, CliResult};

const USAGE: &str = "\
usage: neurofield <subcommand> <config-file> [--output-dir DIR]

subcommands:
  simulate     run the configured simulation, write snapshots and traces
  wave-speed   measure front speeds across threshold levels vs theory
  turing       locate the static pattern-forming onset and simulate around it
  converge     refinement study along the configured axis (tau | h | eps | beta)
  bench        operation-count and wall-time ladder for both algorithm forms

The config file is 'key = value' lines under [section] headers; '#' starts a
comment. --output-dir overrides [output] dir.";

fn run() -> CliResult<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut positional = Vec::new();
    let mut output_override: Option<String> = None;
    let mut i = 0;
    while i < args.len() {
        match args[i].as_str() {
            "--output-dir" => {
                i += 1;
                let dir = args.get(i).ok_or_else(|| CliError::Config {
                    line: None,
                    message: "--output-dir needs a value".into(),
                })?;
                output_override = Some(dir.clone());
            }
            s if s.starts_with("--output-dir=") => {
                output_override = Some(s["--output-dir=".len()..].to_string());
            }
            "--help" | "-h" => {
                println!("{USAGE}");
                return Ok(());
            }
            s if s.starts_with('-') => {
                return Err(CliError::Config {
                    line: None,
                    message: format!("unknown flag '{s}'\n{USAGE}"),
                });
            }
            _ => positional.push(args[i].clone()),
        }
        i += 1;
    }
    if positional.len() != 2 {
        return Err(CliError::Config {
            line: None,
            message: format!("expected <subcommand> <config-file>\n{USAGE}"),
        });
    }
    let subcommand = positional[0].as_str();
    let config_path = PathBuf::from(&positional[1]);
    let cfg = parse_config_file(&config_path)?;
    let out_dir = PathBuf::from(output_override.unwrap_or_else(|| cfg.output.dir.clone()));

    match subcommand {
        "simulate" => cmd_simulate(&cfg, &out_dir),
        "wave-speed" => cmd_wave_speed(&cfg, &out_dir),
        "turing" => cmd_turing(&cfg, &out_dir),
        "converge" => cmd_converge(&cfg, &out_dir),
        "bench" => cmd_bench(&cfg, &out_dir),
        other => Err(CliError::Config {
            line: None,
            message: format!("unknown subcommand '{other}'\n{USAGE}"),
        }),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
