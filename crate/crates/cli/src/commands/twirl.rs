use std::io::Write;

use twirlkit_core::twirl::twirl_diagonal;

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::formats::{fmt_f64, load_channel_source, open_output};

/// Twirl a channel and emit `pauli_string,probability` rows in index order.
pub fn run(config: &ExperimentConfig, source: &str) -> CliResult<()> {
    let channel = load_channel_source(source)?;
    let twirled = twirl_diagonal(&channel)?;
    let mut out = open_output(&config.output_path)?;
    writeln!(out, "pauli_string,probability")?;
    for (label, prob) in twirled.iter_labeled()? {
        writeln!(out, "{label},{}", fmt_f64(prob))?;
    }
    Ok(())
}
