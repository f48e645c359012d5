//! File formats: fixed-precision CSV floats, the `re+imj` complex-entry
//! syntax, and the plain-text Kraus channel format.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};

use twirlkit_core::channel::KrausChannel;
use twirlkit_core::numerics::{ComplexMatrix, C64};

use crate::error::{CliError, CliResult};

/// Fixed 12-significant-digit float form, locale independent, so identical
/// configs produce byte-identical CSVs.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.11e}")
}

/// `re+imj` form used by the channel file format.
#[cfg(test)]
pub fn fmt_complex(z: C64) -> String {
    if z.im >= 0.0 || z.im.is_nan() {
        format!("{}+{}j", z.re, z.im)
    } else {
        format!("{}-{}j", z.re, -z.im)
    }
}

/// Parse the `re+imj` entry syntax; bare reals and bare imaginaries are
/// also accepted.
pub fn parse_complex(text: &str) -> CliResult<C64> {
    let s = text.trim();
    if s.is_empty() {
        return Err(CliError::input("empty complex entry"));
    }
    if let Some(body) = s.strip_suffix('j').or_else(|| s.strip_suffix('J')) {
        // split at the last sign that is not part of an exponent and not
        // leading
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let ch = bytes[i];
            if (ch == b'+' || ch == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                split = Some(i);
                break;
            }
        }
        let (re_part, im_part) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let re: f64 = re_part
            .trim()
            .parse()
            .map_err(|_| CliError::input(format!("bad real part in '{s}'")))?;
        let im_text = im_part.trim();
        let im: f64 = match im_text {
            "+" | "" => 1.0,
            "-" => -1.0,
            _ => im_text
                .parse()
                .map_err(|_| CliError::input(format!("bad imaginary part in '{s}'")))?,
        };
        Ok(C64::new(re, im))
    } else {
        let re: f64 = s
            .parse()
            .map_err(|_| CliError::input(format!("cannot parse complex entry '{s}'")))?;
        Ok(C64::new(re, 0.0))
    }
}

/// Parse the channel text format: `n = <count>`, `trace_preserving =
/// <bool>`, then one `kraus:` block per operator holding rows of
/// comma-separated `re+imj` entries. `#` starts a comment.
pub fn parse_channel_file(text: &str) -> CliResult<KrausChannel> {
    let mut n: Option<usize> = None;
    let mut trace_preserving: Option<bool> = None;
    let mut matrices: Vec<Vec<Vec<C64>>> = Vec::new();

    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let place = |msg: String| CliError::input(format!("line {}: {msg}", line_no + 1));
        if line == "kraus:" {
            matrices.push(Vec::new());
        } else if let Some((key, value)) = line.split_once('=') {
            match key.trim() {
                "n" => {
                    n = Some(
                        value
                            .trim()
                            .parse()
                            .map_err(|_| place(format!("bad qubit count '{}'", value.trim())))?,
                    )
                }
                "trace_preserving" => {
                    trace_preserving = Some(match value.trim() {
                        "true" => true,
                        "false" => false,
                        other => return Err(place(format!("bad boolean '{other}'"))),
                    })
                }
                other => return Err(place(format!("unknown key '{other}'"))),
            }
        } else {
            let target = matrices
                .last_mut()
                .ok_or_else(|| place("matrix row before any 'kraus:' block".to_string()))?;
            let row: CliResult<Vec<C64>> = line.split(',').map(parse_complex).collect();
            target.push(row.map_err(|e| place(e.message().to_string()))?);
        }
    }

    let n = n.ok_or_else(|| CliError::input("channel file is missing 'n = <count>'"))?;
    let trace_preserving = trace_preserving
        .ok_or_else(|| CliError::input("channel file is missing 'trace_preserving = <bool>'"))?;
    if matrices.is_empty() {
        return Err(CliError::input("channel file holds no 'kraus:' blocks"));
    }
    let dim = 1usize
        .checked_shl(n as u32)
        .ok_or_else(|| CliError::input(format!("qubit count {n} is out of range")))?;
    let mut kraus = Vec::with_capacity(matrices.len());
    for (idx, rows) in matrices.iter().enumerate() {
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(CliError::input(format!(
                "kraus block {} is not a {dim}x{dim} matrix",
                idx + 1
            )));
        }
        let data: Vec<C64> = rows.iter().flatten().copied().collect();
        kraus.push(
            ComplexMatrix::from_data(dim, dim, data).map_err(|e| CliError::input(e.to_string()))?,
        );
    }
    Ok(KrausChannel::new(n, kraus, trace_preserving)?)
}

/// Serialize a channel in the same text format.
#[cfg(test)]
pub fn format_channel(channel: &KrausChannel) -> String {
    let mut out = String::new();
    out.push_str(&format!("n = {}\n", channel.n()));
    out.push_str(&format!("trace_preserving = {}\n", channel.is_trace_preserving()));
    for e in channel.kraus() {
        out.push_str("kraus:\n");
        for r in 0..e.rows() {
            let row: Vec<String> = (0..e.cols()).map(|c| fmt_complex(e.get(r, c))).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
    }
    out
}

/// CSV sink: stdout for "-", a buffered file otherwise.
pub fn open_output(path: &str) -> CliResult<Box<dyn Write>> {
    if path == "-" {
        Ok(Box::new(io::stdout().lock()))
    } else {
        let file = File::create(path)
            .map_err(|e| CliError::input(format!("cannot create '{path}': {e}")))?;
        Ok(Box::new(BufWriter::new(file)))
    }
}

/// Read a channel source: the built-in `ad:<lambda>` form or a file path.
pub fn load_channel_source(source: &str) -> CliResult<KrausChannel> {
    if let Some(lambda_text) = source.strip_prefix("ad:") {
        let lambda: f64 = lambda_text
            .parse()
            .map_err(|_| CliError::input(format!("bad damping probability '{lambda_text}'")))?;
        Ok(twirlkit_core::channel::amplitude_damping(lambda)?)
    } else {
        let text = fs::read_to_string(source)
            .map_err(|e| CliError::input(format!("cannot read channel file '{source}': {e}")))?;
        parse_channel_file(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip() {
        for z in [
            C64::new(1.0, 0.0),
            C64::new(-0.5, 0.25),
            C64::new(0.0, -1.0),
            C64::new(1.5e-3, -2.5e-4),
        ] {
            let parsed = parse_complex(&fmt_complex(z)).unwrap();
            assert!((parsed - z).norm() < 1e-15, "{z}");
        }
        assert_eq!(parse_complex("2.5").unwrap(), C64::new(2.5, 0.0));
        assert_eq!(parse_complex("-3j").unwrap(), C64::new(0.0, -3.0));
        assert_eq!(parse_complex("1e-3+2e-4j").unwrap(), C64::new(1e-3, 2e-4));
        assert!(parse_complex("banana").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn channel_file_round_trip() {
        let channel = twirlkit_core::channel::amplitude_damping(0.3).unwrap();
        let text = format_channel(&channel);
        let parsed = parse_channel_file(&text).unwrap();
        assert_eq!(parsed.n(), 1);
        assert!(parsed.is_trace_preserving());
        for (a, b) in parsed.kraus().iter().zip(channel.kraus()) {
            assert!(twirlkit_core::numerics::max_abs_diff(a, b) < 1e-15);
        }
    }

    #[test]
    fn channel_file_errors() {
        assert!(parse_channel_file("n = 1\n").is_err());
        let bad_dims = "n = 1\ntrace_preserving = true\nkraus:\n1+0j\n";
        assert!(parse_channel_file(bad_dims).is_err());
        let junk = "n = 1\ntrace_preserving = true\nkraus:\n1+0j,zap\n0+0j,1+0j\n";
        assert!(parse_channel_file(junk).is_err());
    }

    #[test]
    fn floats_are_fixed_width() {
        assert_eq!(fmt_f64(1.0), "1.00000000000e0");
        assert_eq!(fmt_f64(0.125), "1.25000000000e-1");
    }
}
