use crate::error::{CliError, CliResult};

/// Parsed command line: flag/value pairs plus positional arguments, in
/// order.
pub struct ParsedArgs {
    pub flags: Vec<(String, String)>,
    pub positionals: Vec<String>,
}

const KNOWN_FLAGS: &[&str] = &[
    "config", "t1", "t-step", "horizon", "qubits", "beta", "dt", "fd-step", "threshold", "out",
];

pub fn parse(argv: &[String]) -> CliResult<ParsedArgs> {
    let mut flags = Vec::new();
    let mut positionals = Vec::new();
    let mut iter = argv.iter().peekable();
    while let Some(arg) = iter.next() {
        if let Some(name) = arg.strip_prefix("--") {
            let (name, inline_value) = match name.split_once('=') {
                Some((n, v)) => (n, Some(v.to_string())),
                None => (name, None),
            };
            if !KNOWN_FLAGS.contains(&name) {
                return Err(CliError::input(format!("unknown flag --{name}")));
            }
            let value = match inline_value {
                Some(v) => v,
                None => iter
                    .next()
                    .ok_or_else(|| CliError::input(format!("flag --{name} needs a value")))?
                    .clone(),
            };
            flags.push((name.to_string(), value));
        } else {
            positionals.push(arg.clone());
        }
    }
    Ok(ParsedArgs { flags, positionals })
}
