use std::io::Write;

use twirlkit_core::backaction::{iterate_pta, pta_step_probs};

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::formats::{fmt_f64, open_output};

const CONVERGENCE_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 100_000;

/// Iterate the single-step Pauli map built from (t1, t_step), emitting
/// `iteration,p1,p2,p3,p4` rows until the update falls below 1e-10 in the
/// max norm or the iteration cap is hit.
pub fn run(config: &ExperimentConfig) -> CliResult<()> {
    let mut state = pta_step_probs(config.t1, config.t_step)?;
    let mut out = open_output(&config.output_path)?;
    writeln!(out, "iteration,p1,p2,p3,p4")?;
    for iteration in 0..=MAX_ITERATIONS {
        let probs = state.probs();
        writeln!(
            out,
            "{iteration},{},{},{},{}",
            fmt_f64(probs[0]),
            fmt_f64(probs[1]),
            fmt_f64(probs[2]),
            fmt_f64(probs[3])
        )?;
        let next = iterate_pta(&state);
        let delta = probs
            .iter()
            .zip(&next.probs())
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        if delta < CONVERGENCE_TOL {
            break;
        }
        state = next;
    }
    Ok(())
}
