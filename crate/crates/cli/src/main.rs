//! Batch experiment harness: each subcommand reproduces one of the
//! toolkit's computations and emits a deterministic CSV.

use std::process::ExitCode;

mod args;
mod commands;
mod config;
mod error;
mod formats;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    if argv.is_empty() || argv[0] == "--help" || argv[0] == "-h" {
        print_usage();
        return if argv.is_empty() { ExitCode::from(2) } else { ExitCode::SUCCESS };
    }
    match commands::dispatch(&argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if !err.message().is_empty() {
                eprintln!("error: {}", err.message());
            }
            ExitCode::from(err.exit_code())
        }
    }
}

fn print_usage() {
    println!("twirlkit - Pauli-twirl noise-model experiments");
    println!();
    println!("Usage: twirlkit <subcommand> [flags] [args]");
    println!();
    println!("Subcommands:");
    println!("  twirl <source>   Twirl a channel into Pauli probabilities.");
    println!("                   <source> is ad:<lambda> or a channel file path.");
    println!("  lindblad         Extract the damping generator over a time grid");
    println!("                   and report rates and deviations.");
    println!("  backaction       Scan exact vs Pauli-map no-excitation");
    println!("                   probabilities and report divergence times.");
    println!("  fixedpoint       Iterate the single-step Pauli map to its");
    println!("                   fixed point.");
    println!("  ctqec            Continuous-time error correction: exact vs");
    println!("                   Pauli-rate noise fidelity per correction rate.");
    println!();
    println!("Flags (override the config file):");
    println!("  --config <path>      flat key = value file");
    println!("  --t1 <time>          relaxation time (default 1.0)");
    println!("  --t-step <time>      map/scan step (default 0.01)");
    println!("  --horizon <time>     scan/integration end time (default 15.0)");
    println!("  --qubits <a..b>      inclusive qubit range (default 1..3)");
    println!("  --beta <r1,r2,...>   correction rates (default 0,1,10,100)");
    println!("  --dt <time>          integrator step (default 0.001)");
    println!("  --fd-step <time>     finite-difference step (default 0.0001)");
    println!("  --threshold <px|pxy> divergence threshold rule (default px)");
    println!("  --out <path>         output CSV path, '-' for stdout");
    println!();
    println!("Exit codes: 0 success, 2 config/input error, 3 validation error.");
}
