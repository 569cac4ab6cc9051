//! Number formatting, angle parsing and atomic file output.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::CliError;

/// Significant digits of every number written by the tool.
pub const DIGITS: usize = 12;

/// `x` rounded to [`DIGITS`] significant digits; `-0` becomes `0`.
pub fn sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{:.*e}", DIGITS - 1, x).parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Plain decimal between `1e-5` and `1e15`, exponent form outside.
pub fn num(x: f64) -> String {
    let r = sig(x);
    let a = r.abs();
    if r == 0.0 || (1e-5..1e15).contains(&a) || !r.is_finite() {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// `x / pi` at [`DIGITS`] significant digits.
pub fn over_pi(x: f64) -> f64 {
    sig(x / PI)
}

pub fn pi_units(x: f64) -> String {
    format!("{}pi", num(x / PI))
}

/// A phase as a multiple of pi in `[0, 2)`; values within `1e-12` of a
/// full turn print as 0.
pub fn phase_over_pi(x: f64) -> f64 {
    let v = sig(x.rem_euclid(2.0 * PI) / PI);
    if !(1e-12..2.0 - 1e-12).contains(&v) {
        0.0
    } else {
        v
    }
}

pub fn phase_units(x: f64) -> String {
    format!("{}pi", num(phase_over_pi(x)))
}

/// Parts smaller than `1e-12 |z|` print as zero.
pub fn complex(z: Complex64) -> String {
    let floor = 1e-12 * z.norm().max(1.0);
    let clean = |x: f64| if x.abs() < floor { 0.0 } else { sig(x) };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        format!("{im}i")
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

/// Parses an angle: plain radians (`1.5`), or multiples of pi (`pi`, `-pi/2`,
/// `0.75pi`, `3pi/4`).
pub fn parse_angle(text: &str) -> Result<f64, CliError> {
    let t = text.trim();
    let bad = || CliError::Parse(format!("cannot read angle '{text}'"));
    let Some(pos) = t.find("pi") else {
        return t.parse().map_err(|_| bad());
    };
    let coef = match &t[..pos] {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.trim_end_matches('*').parse::<f64>().map_err(|_| bad())?,
    };
    let rest = &t[pos + 2..];
    let denom = if rest.is_empty() {
        1.0
    } else {
        let d: f64 = rest.strip_prefix('/').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if d == 0.0 {
            return Err(bad());
        }
        d
    };
    Ok(coef * PI / denom)
}

/// Parses a comma-separated integer list.
pub fn parse_ints(text: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError::Parse(format!("'{x}' is not an integer in '{text}'")))
        })
        .collect()
}

pub fn parse_indices(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError::Parse(format!("'{x}' is not an index in '{text}'")))
        })
        .collect()
}

/// Writes `contents` to a sibling temp file and renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Parse(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(num(PI), "3.14159265359");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(1e-17), "1e-17");
        assert_eq!(num(-3.5527136788e-15), "-3.5527136788e-15");
        assert_eq!(num(12345.5), "12345.5");
        assert_eq!(pi_units(PI / 2.0), "0.5pi");
        assert_eq!(phase_over_pi(2.0 * PI - 1e-14), 0.0);
        assert_eq!(phase_over_pi(-PI / 2.0), 1.5);
        assert_eq!(phase_over_pi(6e-17), 0.0);
    }

    #[test]
    fn angles() {
        for (s, v) in [("pi", PI), ("-pi/2", -PI / 2.0), ("0.75pi", 0.75 * PI), ("3pi/4", 0.75 * PI), ("1.5", 1.5)] {
            assert!((parse_angle(s).unwrap() - v).abs() < 1e-15, "{s}");
        }
        for s in ["pie", "pi/0", "x", "pi/"] {
            assert!(parse_angle(s).is_err(), "{s}");
        }
    }
}
