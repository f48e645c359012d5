mod backaction;
mod ctqec;
mod fixedpoint;
mod lindblad;
mod twirl;

use crate::args;
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

pub fn dispatch(argv: &[String]) -> CliResult<()> {
    let subcommand = argv[0].as_str();
    let parsed = args::parse(&argv[1..])?;
    let config = ExperimentConfig::from_args(&parsed)?;
    match subcommand {
        "twirl" => {
            let source = parsed
                .positionals
                .first()
                .ok_or_else(|| CliError::input("twirl needs a channel source (ad:<lambda> or a file)"))?;
            if parsed.positionals.len() > 1 {
                return Err(CliError::input("twirl takes exactly one channel source"));
            }
            twirl::run(&config, source)
        }
        other => {
            if !parsed.positionals.is_empty() {
                return Err(CliError::input(format!(
                    "unexpected argument '{}'",
                    parsed.positionals[0]
                )));
            }
            match other {
                "lindblad" => lindblad::run(&config),
                "backaction" => backaction::run(&config),
                "fixedpoint" => fixedpoint::run(&config),
                "ctqec" => ctqec::run(&config),
                unknown => Err(CliError::input(format!(
                    "unknown subcommand '{unknown}' (expected twirl, lindblad, backaction, fixedpoint, or ctqec)"
                ))),
            }
        }
    }
}
