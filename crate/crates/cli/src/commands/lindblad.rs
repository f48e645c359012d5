use std::io::Write;

use twirlkit_core::lindblad::{self, ChannelFamily};
use twirlkit_core::Error as CoreError;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::formats::{fmt_f64, open_output};

/// Extract the damping generator on the grid k t_step <= horizon and emit
/// `t,status,rate_1,deviation` rows: the dominant jump rate and the
/// max-norm deviation of the reconstructed action from the analytic
/// damping generator. Times where the transfer matrix is numerically
/// singular are reported as rows, not failures.
pub fn run(config: &ExperimentConfig) -> CliResult<()> {
    let steps = (config.horizon / config.t_step + 1e-9).floor() as usize;
    if steps == 0 {
        return Err(CliError::input(format!(
            "empty time grid: horizon {} is below t_step {}",
            config.horizon, config.t_step
        )));
    }
    let family = ChannelFamily::amplitude_damping(config.t1)?;
    let mut out = open_output(&config.output_path)?;
    writeln!(out, "t,status,rate_1,deviation")?;
    for k in 1..=steps {
        let t = k as f64 * config.t_step;
        match lindblad::snapshot(&family, t, config.fd_step) {
            Ok(snap) => {
                let rate = snap.jumps.first().map(|j| j.rate).unwrap_or(0.0);
                let deviation = lindblad::damping_deviation(&snap.choi, config.t1)?;
                writeln!(out, "{},ok,{},{}", fmt_f64(t), fmt_f64(rate), fmt_f64(deviation))?;
            }
            Err(CoreError::Singular { .. }) => {
                writeln!(out, "{},singular,,", fmt_f64(t))?;
            }
            Err(other) => return Err(other.into()),
        }
    }
    Ok(())
}
