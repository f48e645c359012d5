use std::io::Write;

use twirlkit_core::backaction::{backaction_scan, GammaConvention, ScanConfig};

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::formats::{fmt_f64, open_output};

/// Scan exact versus Pauli-map no-excitation probabilities per qubit count
/// and emit `n_qubits,t,p_exact,p_pta,gap,threshold,crossed` rows, with a
/// trailing comment block of first-crossing times.
pub fn run(config: &ExperimentConfig) -> CliResult<()> {
    let scan_config = ScanConfig {
        threshold_rule: config.threshold_rule,
        gamma: GammaConvention::AnticommutatorRate,
    };
    let mut out = open_output(&config.output_path)?;
    writeln!(out, "n_qubits,t,p_exact,p_pta,gap,threshold,crossed")?;
    let mut crossings = Vec::new();
    for n in config.qubit_range.0..=config.qubit_range.1 {
        let scan = backaction_scan(n, config.t1, config.t_step, config.horizon, scan_config)?;
        crossings.push((n, scan.iter().find(|p| p.crossed).map(|p| p.t)));
        for point in &scan {
            writeln!(
                out,
                "{n},{},{},{},{},{},{}",
                fmt_f64(point.t),
                fmt_f64(point.p_exact),
                fmt_f64(point.p_pta),
                fmt_f64(point.gap),
                fmt_f64(point.threshold),
                u8::from(point.crossed)
            )?;
        }
    }
    for (n, crossing) in crossings {
        match crossing {
            Some(t) => writeln!(out, "# divergence_time n={n}: {}", fmt_f64(t))?,
            None => writeln!(out, "# divergence_time n={n}: none")?,
        }
    }
    Ok(())
}
