//! Line-oriented coefficient cache.
//!
//! ```text
//! # majorana-coeffs v1
//! branch=minus
//! precision_digits=<P>
//! n_max=<N>
//! 0 +1.000…0e+0
//! 1 +4.5599625…e-1
//! ```
//!
//! Each value carries exactly `P` significant digits. Because stored
//! coefficients are quantized to `P` digits, loading a cache reproduces the
//! in-memory series bit for bit and resumed runs match uninterrupted ones.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{Branch, CoefficientSeries, Summation};
use crate::error::{Error, Result};
use crate::scalar::{BigReal, Field, PrecisionContext};

pub const MAGIC: &str = "# majorana-coeffs v1";

/// Coefficients between checkpoint flushes.
pub const CHECKPOINT_EVERY: usize = 10_000;

const HEADER_LINES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CacheHeader {
    pub branch: Branch,
    pub precision_digits: u32,
    pub n_max: usize,
}

impl CacheHeader {
    pub fn context(&self) -> Result<PrecisionContext> {
        PrecisionContext::new(self.precision_digits)
    }
}

/// Writes the whole series to `path` via a temporary file and rename.
pub fn write_cache(path: &Path, series: &CoefficientSeries<BigReal>) -> Result<()> {
    let tmp = tmp_path(path);
    {
        let mut out = BufWriter::new(File::create(&tmp)?);
        write_series(&mut out, series)?;
        out.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_series<W: Write>(out: &mut W, series: &CoefficientSeries<BigReal>) -> Result<()> {
    let digits = series.context().decimal_digits() as usize;
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "branch={}", series.branch())?;
    writeln!(out, "precision_digits={digits}")?;
    writeln!(out, "n_max={}", series.n_max())?;
    for (i, a) in series.coeffs().iter().enumerate() {
        writeln!(out, "{i} {}", a.to_sci_string(digits))?;
    }
    Ok(())
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".partial");
    path.with_file_name(name)
}

fn corrupt(path: &Path, line: usize, reason: impl Into<String>) -> Error {
    Error::CorruptCache {
        path: path.to_path_buf(),
        line,
        reason: reason.into(),
    }
}

fn header_field<'a>(
    path: &Path,
    line_no: usize,
    line: Option<&'a str>,
    key: &str,
) -> Result<&'a str> {
    let line = line.ok_or_else(|| corrupt(path, line_no, "truncated header"))?;
    line.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| corrupt(path, line_no, format!("expected `{key}=…`, found `{line}`")))
}

fn parse_header(path: &Path, lines: &[String]) -> Result<CacheHeader> {
    let get = |i: usize| lines.get(i).map(String::as_str);
    if get(0) != Some(MAGIC) {
        return Err(corrupt(path, 1, format!("missing `{MAGIC}` header")));
    }
    let branch = header_field(path, 2, get(1), "branch")?
        .parse()
        .map_err(|e: Error| corrupt(path, 2, e.to_string()))?;
    let precision_digits = header_field(path, 3, get(2), "precision_digits")?
        .parse()
        .map_err(|_| corrupt(path, 3, "precision_digits is not an integer"))?;
    let n_max = header_field(path, 4, get(3), "n_max")?
        .parse()
        .map_err(|_| corrupt(path, 4, "n_max is not an integer"))?;
    Ok(CacheHeader {
        branch,
        precision_digits,
        n_max,
    })
}

pub fn read_header(path: &Path) -> Result<CacheHeader> {
    let reader = BufReader::new(File::open(path)?);
    let lines: Vec<String> = reader
        .lines()
        .take(HEADER_LINES)
        .collect::<std::io::Result<_>>()?;
    parse_header(path, &lines)
}

/// Checks one `±d.ddd…e±x` token with exactly `digits` significant digits.
fn check_value_syntax(token: &str, digits: usize) -> std::result::Result<(), String> {
    let body = token
        .strip_prefix(['+', '-'])
        .ok_or("value must start with an explicit sign")?;
    let (mantissa, exponent) = body.split_once('e').ok_or("missing exponent")?;
    let exponent = exponent
        .strip_prefix(['+', '-'])
        .ok_or("exponent must carry an explicit sign")?;
    if exponent.is_empty() || !exponent.bytes().all(|b| b.is_ascii_digit()) {
        return Err("malformed exponent".into());
    }
    let count = match mantissa.split_once('.') {
        Some((head, tail)) if head.len() == 1 => {
            if !head.bytes().chain(tail.bytes()).all(|b| b.is_ascii_digit()) {
                return Err("non-digit in significand".into());
            }
            1 + tail.len()
        }
        None if mantissa.len() == 1 && mantissa.as_bytes()[0].is_ascii_digit() => 1,
        _ => return Err("decimal point must follow the first digit".into()),
    };
    if count != digits {
        return Err(format!("expected {digits} significant digits, found {count}"));
    }
    Ok(())
}

/// Loads a cache whose header is taken at face value.
pub fn load(path: &Path) -> Result<CoefficientSeries<BigReal>> {
    let reader = BufReader::new(File::open(path)?);
    let lines: Vec<String> = reader.lines().collect::<std::io::Result<_>>()?;
    let header = parse_header(path, &lines)?;
    let ctx = header.context().map_err(|e| corrupt(path, 3, e.to_string()))?;
    let digits = header.precision_digits as usize;

    let body = &lines[HEADER_LINES.min(lines.len())..];
    if body.len() != header.n_max + 1 {
        return Err(corrupt(
            path,
            HEADER_LINES + body.len().min(header.n_max + 1) + 1,
            format!(
                "header declares n_max={} but {} coefficient lines follow",
                header.n_max,
                body.len()
            ),
        ));
    }
    let mut coeffs = Vec::with_capacity(body.len());
    for (i, line) in body.iter().enumerate() {
        let line_no = HEADER_LINES + i + 1;
        let (index, value) = line
            .split_once(' ')
            .ok_or_else(|| corrupt(path, line_no, "expected `<index> <value>`"))?;
        if index.parse::<usize>().ok() != Some(i) {
            return Err(corrupt(path, line_no, format!("expected index {i}, found `{index}`")));
        }
        check_value_syntax(value, digits).map_err(|r| corrupt(path, line_no, r))?;
        let a = BigReal::parse(value, &ctx).map_err(|e| corrupt(path, line_no, e.to_string()))?;
        coeffs.push(a);
    }
    if coeffs.len() < 2 {
        return Err(corrupt(path, HEADER_LINES + 1, "cache must hold at least a_0 and a_1"));
    }
    CoefficientSeries::from_coefficients(header.branch, ctx, coeffs)
        .map_err(|e| corrupt(path, HEADER_LINES + 1, e.to_string()))
}

/// Loads a cache and requires its header to match the requested branch and
/// precision exactly.
pub fn load_matching(
    path: &Path,
    branch: Branch,
    ctx: &PrecisionContext,
) -> Result<CoefficientSeries<BigReal>> {
    let header = read_header(path)?;
    if header.branch != branch {
        return Err(Error::HeaderMismatch {
            field: "branch",
            expected: branch.to_string(),
            found: header.branch.to_string(),
        });
    }
    if header.precision_digits != ctx.decimal_digits() {
        return Err(Error::HeaderMismatch {
            field: "precision_digits",
            expected: ctx.decimal_digits().to_string(),
            found: header.precision_digits.to_string(),
        });
    }
    load(path)
}

/// Extends the series stored at `path` (or a fresh one) to `m_target`,
/// flushing every [`CHECKPOINT_EVERY`] coefficients.
pub fn extend_cached(
    path: &Path,
    branch: Branch,
    ctx: &PrecisionContext,
    m_target: usize,
    mode: Summation,
) -> Result<CoefficientSeries<BigReal>> {
    let mut series = if path.exists() {
        load_matching(path, branch, ctx)?
    } else {
        CoefficientSeries::new(branch, *ctx)
    };
    if series.n_max() >= m_target {
        if !path.exists() {
            write_cache(path, &series)?;
        }
        return Ok(series);
    }
    series.extend_in_mode(m_target, mode, CHECKPOINT_EVERY, |s| write_cache(path, s))?;
    Ok(series)
}
