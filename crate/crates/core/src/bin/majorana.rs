use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use majorana::oracle::{check_synthetic_estimators, compare_with_exact};
use majorana::report::{self, Format, TABLE_DIGITS};
use majorana::series::cache;
use majorana::singularity::{
    bounds_bracket, estimate_table, ratio_line_fit, table_grid, DEFAULT_AITKEN_WINDOW,
};
use majorana::slope::{certified_slope, estimate_at, slope_precision};
use majorana::{BigReal, Branch, Error, Field, PrecisionContext, Result, Series, Summation};

const EXIT_VALIDATION: u8 = 2;
const EXIT_CACHE: u8 = 3;
const EXIT_USAGE: u8 = 4;

const DEFAULT_PRECISION: u32 = 60;
const ESTIMATOR_GUARD_DIGITS: u32 = 30;

#[derive(Parser)]
#[command(name = "majorana", version, about = "Majorana series for the Thomas-Fermi slope at origin")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute coefficients a_0..a_N and store them in a cache file.
    Coeffs {
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        source: Source,
    },
    /// Slope at origin from a partial sum, or certified to a digit count.
    Slope {
        /// Partial-sum order N.
        #[arg(long, conflicts_with = "digits", required_unless_present = "digits")]
        n: Option<usize>,
        /// Extend until this many digits are certified.
        #[arg(long)]
        digits: Option<u32>,
        #[command(flatten)]
        source: Source,
    },
    /// Location and exponent of the nearest singularity.
    Singularity {
        /// Indices at which to evaluate the estimators.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Index range `lo:hi` for the least-squares ratio fit.
        #[arg(long, value_parser = parse_range)]
        window: Option<(usize, usize)>,
        /// Fit a line to the coefficient ratios over `--window`.
        #[arg(long, requires = "window")]
        fit: bool,
        /// Bound the singularity from both estimator columns and extrapolate.
        /// Uses `--n` when given, otherwise every 1000th index in 400000..=441000.
        #[arg(long)]
        bracket: bool,
        #[arg(long, default_value_t = DEFAULT_AITKEN_WINDOW)]
        aitken_window: usize,
        #[arg(long, default_value_t = 1)]
        aitken_passes: usize,
        /// Significant digits per column.
        #[arg(long, default_value_t = TABLE_DIGITS)]
        table_digits: usize,
        #[command(flatten)]
        source: Source,
    },
    /// Check a cache or the estimators against independent oracles.
    Validate {
        /// Cache file to check line by line, recompute, and compare with the exact oracle.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Working precision when no cache is given.
        #[arg(long, default_value_t = 600)]
        precision: u32,
        /// Highest index compared with the exact ℚ(√73) recurrence.
        #[arg(long, default_value_t = 200)]
        oracle_m: usize,
        /// Leading coefficients of the cache recomputed from scratch and compared bitwise.
        #[arg(long, default_value_t = 1000)]
        recompute: usize,
        /// Synthetic series `x0=..,nu=..[,a=..]` on which the estimators must be exact.
        #[arg(long, value_parser = parse_synthetic)]
        synthetic: Option<SyntheticSpec>,
        /// Largest n for the synthetic check.
        #[arg(long, default_value_t = 1000)]
        synthetic_n: usize,
    },
    /// Emit (n, log10 a_n) as CSV.
    Figure {
        #[arg(long)]
        n_max: usize,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also report the OLS slope of log10 a_n over `lo:hi`.
        #[arg(long, value_parser = parse_range)]
        trend: Option<(usize, usize)>,
        #[command(flatten)]
        source: Source,
    },
}

#[derive(Args, Clone)]
struct Source {
    /// Working precision in decimal digits (at least 30). Defaults to the
    /// cache header, or 60.
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long, default_value = "minus")]
    branch: Branch,
    /// Coefficient cache, created or extended as needed.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Sum the recurrence convolution in parallel chunks. Reproducible for a
    /// fixed chunk size but not bitwise equal to the sequential result.
    #[arg(long)]
    parallel: bool,
    #[arg(long, default_value_t = 4096, requires = "parallel")]
    chunk: usize,
}

impl Source {
    fn mode(&self) -> Summation {
        if self.parallel {
            Summation::Parallel { chunk: self.chunk }
        } else {
            Summation::Sequential
        }
    }

    /// Precision from the flag, else the cache header, else `fallback`.
    fn context(&self, fallback: u32) -> Result<PrecisionContext> {
        if let Some(p) = self.precision {
            return PrecisionContext::new(p);
        }
        match &self.cache {
            Some(path) if path.exists() => cache::read_header(path)?.context(),
            _ => PrecisionContext::new(fallback),
        }
    }

    /// Series holding at least `a_0 … a_need`.
    fn series(&self, ctx: &PrecisionContext, need: usize) -> Result<Series> {
        let need = need.max(1);
        match &self.cache {
            Some(path) => cache::extend_cached(path, self.branch, ctx, need, self.mode()),
            None => {
                let mut s = Series::new(self.branch, *ctx);
                s.extend_in_mode(need, self.mode(), usize::MAX, |_| Ok(()))?;
                Ok(s)
            }
        }
    }
}

#[derive(Clone, Debug)]
struct SyntheticSpec {
    amplitude: String,
    x0: String,
    nu: String,
}

fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: usize = lo.trim().parse().map_err(|_| format!("bad lower index `{lo}`"))?;
    let hi: usize = hi.trim().parse().map_err(|_| format!("bad upper index `{hi}`"))?;
    if hi < lo {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn parse_synthetic(s: &str) -> std::result::Result<SyntheticSpec, String> {
    let mut spec = SyntheticSpec {
        amplitude: "1".into(),
        x0: String::new(),
        nu: String::new(),
    };
    for part in s.split(',') {
        let (key, value) = part.split_once('=').ok_or_else(|| format!("expected key=value, got `{part}`"))?;
        let value = value.trim().to_string();
        match key.trim() {
            "a" | "A" => spec.amplitude = value,
            "x0" => spec.x0 = value,
            "nu" => spec.nu = value,
            other => return Err(format!("unknown key `{other}` (expected x0, nu, a)")),
        }
    }
    if spec.x0.is_empty() || spec.nu.is_empty() {
        return Err("both x0 and nu are required".into());
    }
    Ok(spec)
}

/// Accepts decimals and `p/q`.
fn parse_real(text: &str, ctx: &PrecisionContext) -> Result<BigReal> {
    match text.split_once('/') {
        Some((p, q)) => {
            let parse = |t: &str| {
                t.trim().parse::<rug::Integer>().map_err(|e| Error::Parse {
                    what: format!("rational `{text}`"),
                    reason: e.to_string(),
                })
            };
            let (p, q) = (parse(p)?, parse(q)?);
            if q == 0 {
                return Err(Error::InvalidArgument(format!("zero denominator in `{text}`")));
            }
            Ok(BigReal::from_rational(&rug::Rational::from((p, q)), ctx))
        }
        None => BigReal::parse(text, ctx),
    }
}

struct Outcome {
    stdout: String,
    failed: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, failed: false }
    }
}

fn render<S: Serialize>(format: Format, value: &S, text: impl FnOnce() -> String, csv: impl FnOnce() -> String) -> String {
    match format {
        Format::Text => text(),
        Format::Csv => csv(),
        Format::Json => report::to_json(value) + "\n",
    }
}

fn run_coeffs(format: Format, n_max: usize, source: &Source) -> Result<Outcome> {
    let ctx = source.context(DEFAULT_PRECISION)?;
    let series = source.series(&ctx, n_max)?;
    if source.cache.is_none() {
        let mut buf = Vec::new();
        cache::write_series(&mut buf, &series)?;
        return Ok(Outcome::ok(String::from_utf8(buf).expect("cache text is ASCII")));
    }
    #[derive(Serialize)]
    struct Summary<'a> {
        cache: &'a Path,
        branch: Branch,
        precision_digits: u32,
        n_max: usize,
    }
    let summary = Summary {
        cache: source.cache.as_deref().expect("checked above"),
        branch: series.branch(),
        precision_digits: ctx.decimal_digits(),
        n_max: series.n_max(),
    };
    Ok(Outcome::ok(render(
        format,
        &summary,
        || {
            format!(
                "{}: branch={} precision_digits={} n_max={}\n",
                summary.cache.display(),
                summary.branch,
                summary.precision_digits,
                summary.n_max
            )
        },
        || {
            format!(
                "cache,branch,precision_digits,n_max\n{},{},{},{}\n",
                summary.cache.display(),
                summary.branch,
                summary.precision_digits,
                summary.n_max
            )
        },
    )))
}

fn run_slope(format: Format, n: Option<usize>, digits: Option<u32>, source: &Source) -> Result<Outcome> {
    let estimate = match (n, digits) {
        (Some(n), _) => {
            let ctx = source.context(DEFAULT_PRECISION)?;
            let series = source.series(&ctx, n + 1)?;
            estimate_at(&series, n)?
        }
        (None, Some(d)) => {
            let ctx = match source.precision {
                Some(p) => PrecisionContext::new(p)?,
                None => slope_precision(d)?,
            };
            let mut series = source.series(&ctx, 1)?;
            let start = series.n_max();
            let estimate = certified_slope(&mut series, d)?;
            if let Some(path) = &source.cache {
                if series.n_max() > start {
                    cache::write_cache(path, &series)?;
                }
            }
            estimate
        }
        (None, None) => unreachable!("clap requires --n or --digits"),
    };
    let digits = estimate.slope.precision().decimal_digits() as usize;
    let r = estimate.report(digits);
    Ok(Outcome::ok(render(
        format,
        &r,
        || {
            format!(
                "N                {}\nslope            {}\ntail_bound       {}\ncertified_digits {}\ncertified_value  {}\n",
                r.order,
                r.slope,
                r.tail_bound,
                r.certified_digits,
                estimate.certified_value()
            )
        },
        || {
            format!(
                "N,slope,tail_bound,certified_digits\n{},{},{},{}\n",
                r.order, r.slope, r.tail_bound, r.certified_digits
            )
        },
    )))
}

#[allow(clippy::too_many_arguments)]
fn run_singularity(
    format: Format,
    ns: &[usize],
    window: Option<(usize, usize)>,
    fit: bool,
    bracket: bool,
    aitken_window: usize,
    aitken_passes: usize,
    digits: usize,
    source: &Source,
) -> Result<Outcome> {
    if !fit && !bracket && ns.is_empty() {
        return Err(Error::InvalidArgument(
            "nothing to do: pass --n, --window with --fit, or --bracket".into(),
        ));
    }
    if window.is_some() && !fit {
        return Err(Error::InvalidArgument("--window is only used with --fit".into()));
    }
    let grid = if bracket && ns.is_empty() { table_grid() } else { ns.to_vec() };
    let mut need = grid.iter().copied().max().map_or(0, |n| n + 1);
    if let Some((_, hi)) = window {
        need = need.max(hi + 1);
    }
    let ctx = source.context(DEFAULT_PRECISION)?;
    // The estimator denominators cancel about as many digits as they keep.
    let required = digits as u32 + ESTIMATOR_GUARD_DIGITS;
    if ctx.decimal_digits() < required {
        return Err(Error::InvalidArgument(format!(
            "{digits} table digits need --precision {required} or more (have {})",
            ctx.decimal_digits()
        )));
    }
    let series = source.series(&ctx, need)?;
    let coeffs = series.coeffs();

    let mut out = String::new();
    if !ns.is_empty() && !bracket {
        let rows = report::estimate_rows(&estimate_table(coeffs, ns)?, digits);
        out += &render(format, &rows, || report::table_text(&rows), || report::table_csv(&rows));
    }
    if let Some((lo, hi)) = window.filter(|_| fit) {
        let f = ratio_line_fit(coeffs, lo, hi)?;
        #[derive(Serialize)]
        struct FitReport {
            n_lo: usize,
            n_hi: usize,
            tau0: String,
            nu: String,
            intercept: String,
            line_slope: String,
            residual_rms: String,
        }
        let r = FitReport {
            n_lo: f.n_lo,
            n_hi: f.n_hi,
            tau0: f.tau0.to_sci_string(digits),
            nu: f.nu.to_sci_string(digits),
            intercept: f.intercept.to_sci_string(digits),
            line_slope: f.line_slope.to_sci_string(digits),
            residual_rms: f.residual_rms().to_sci_string(3),
        };
        out += &render(
            format,
            &r,
            || {
                format!(
                    "fit over n in [{}, {}]\ntau0         {}\nnu           {}\nintercept    {}\nline_slope   {}\nresidual_rms {}\n",
                    r.n_lo, r.n_hi, r.tau0, r.nu, r.intercept, r.line_slope, r.residual_rms
                )
            },
            || {
                format!(
                    "n_lo,n_hi,tau0,nu,intercept,line_slope,residual_rms\n{},{},{},{},{},{},{}\n",
                    r.n_lo, r.n_hi, r.tau0, r.nu, r.intercept, r.line_slope, r.residual_rms
                )
            },
        );
    }
    if bracket {
        let b = bounds_bracket(coeffs, &grid, aitken_window, aitken_passes)?;
        let r = b.report(digits);
        out += &render(
            format,
            &r,
            || {
                let mut s = format!(
                    "lower             {}\nupper             {}\naccelerated_lower {}\naccelerated_upper {}\nnu_accelerated    {}\nmonotonic         {}\n",
                    r.lower, r.upper, r.accelerated_lower, r.accelerated_upper, r.nu_accelerated, r.monotonic
                );
                for v in &b.violations {
                    let _ = writeln!(s, "violation         {} at n = {}", v.column, v.n);
                }
                if b.aitken_stopped_early {
                    s += "note              Aitken stopped early on a vanishing second difference\n";
                }
                s
            },
            || {
                format!(
                    "lower,upper,accelerated_lower,accelerated_upper,nu_accelerated,monotonic\n{},{},{},{},{},{}\n",
                    r.lower, r.upper, r.accelerated_lower, r.accelerated_upper, r.nu_accelerated, r.monotonic
                )
            },
        );
    }
    Ok(Outcome::ok(out))
}

#[derive(Serialize)]
struct Check {
    name: String,
    pass: bool,
    detail: String,
}

fn run_validate(
    format: Format,
    cache_path: Option<&Path>,
    precision: u32,
    oracle_m: usize,
    recompute: usize,
    synthetic: Option<&SyntheticSpec>,
    synthetic_n: usize,
) -> Result<Outcome> {
    let mut checks = Vec::new();
    let ctx = match cache_path {
        Some(path) => cache::read_header(path).and_then(|h| h.context()),
        None => PrecisionContext::new(precision),
    };
    let ctx = match ctx {
        Ok(c) => Some(c),
        Err(e @ Error::CorruptCache { .. }) => {
            checks.push(Check { name: "cache".into(), pass: false, detail: e.to_string() });
            None
        }
        Err(e) => return Err(e),
    };

    if let Some(ctx) = ctx {
        let series = match cache_path {
            Some(path) => match cache::load(path) {
                Ok(s) => {
                    checks.push(Check {
                        name: "cache".into(),
                        pass: true,
                        detail: format!("{} lines parsed, n_max = {}", s.n_max() + 5, s.n_max()),
                    });
                    Some(s)
                }
                Err(e @ Error::CorruptCache { .. }) => {
                    checks.push(Check { name: "cache".into(), pass: false, detail: e.to_string() });
                    None
                }
                Err(e) => return Err(e),
            },
            None => {
                let mut s = Series::new(Branch::Minus, ctx);
                s.extend_to(oracle_m.max(1))?;
                Some(s)
            }
        };
        if let Some(series) = series {
            if cache_path.is_some() {
                let upto = recompute.min(series.n_max());
                let mut fresh = Series::new(series.branch(), ctx);
                fresh.extend_to(upto)?;
                let mismatch = fresh.coeffs().iter().zip(series.coeffs()).position(|(x, y)| x != y);
                checks.push(Check {
                    name: "recompute".into(),
                    pass: mismatch.is_none(),
                    detail: match mismatch {
                        None => format!("a_0..a_{upto} bitwise identical to a fresh run"),
                        Some(i) => format!("a_{i} differs from a fresh run"),
                    },
                });
            }
            if series.branch() == Branch::Minus {
                let cmp = compare_with_exact(&series, oracle_m)?;
                checks.push(Check {
                    name: "exact_oracle".into(),
                    pass: cmp.pass,
                    detail: format!(
                        "m <= {}: worst agreement {:.1} digits at a_{} (threshold {})",
                        oracle_m.min(series.n_max()),
                        cmp.minimum_digits,
                        cmp.worst_index,
                        cmp.threshold_digits
                    ),
                });
            }
        }
        if let Some(spec) = synthetic {
            let a = parse_real(&spec.amplitude, &ctx)?;
            let x0 = parse_real(&spec.x0, &ctx)?;
            let nu = parse_real(&spec.nu, &ctx)?;
            let c = check_synthetic_estimators(&a, &x0, &nu, 2, synthetic_n, &ctx)?;
            let mut detail = format!(
                "n in [{}, {}]: tau0 rel err {:.2e}, nu rel err {:.2e}",
                c.n_lo, c.n_hi, c.max_tau0_rel_error, c.max_nu_rel_error
            );
            if let Some(e) = c.max_constrained_rel_error {
                let _ = write!(detail, ", constrained rel err {e:.2e}");
            }
            let _ = write!(detail, " (tolerance {:.1e})", c.tolerance);
            checks.push(Check { name: "synthetic".into(), pass: c.pass, detail });
        }
    }

    let failed = checks.iter().any(|c| !c.pass);
    let stdout = render(
        format,
        &checks,
        || {
            let mut s = String::new();
            for c in &checks {
                let _ = writeln!(s, "{} {:<13} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            s
        },
        || {
            let mut s = String::from("check,pass,detail\n");
            for c in &checks {
                let _ = writeln!(s, "{},{},\"{}\"", c.name, c.pass, c.detail.replace('"', "\"\""));
            }
            s
        },
    );
    Ok(Outcome { stdout, failed })
}

fn run_figure(format: Format, n_max: usize, out: Option<&Path>, trend: Option<(usize, usize)>, source: &Source) -> Result<Outcome> {
    let ctx = source.context(DEFAULT_PRECISION)?;
    let series = source.series(&ctx, n_max)?;
    let mut points = report::figure_points(&series);
    points.truncate(n_max + 1);
    let csv = report::figure_csv(&points);
    let mut stdout = String::new();
    match out {
        Some(path) => fs::write(path, &csv)?,
        None => stdout += &csv,
    }
    if let Some((lo, hi)) = trend {
        let slope = report::figure_trend(&points, lo, hi)
            .ok_or_else(|| Error::InvalidArgument(format!("trend window {lo}:{hi} holds fewer than 2 points")))?;
        #[derive(Serialize)]
        struct Trend {
            n_lo: usize,
            n_hi: usize,
            slope: f64,
        }
        let t = Trend { n_lo: lo, n_hi: hi, slope };
        let text = render(
            format,
            &t,
            || format!("trend over n in [{lo}, {hi}]: {}\n", Field::to_sci_string(&slope, 8)),
            || format!("n_lo,n_hi,slope\n{lo},{hi},{}\n", Field::to_sci_string(&slope, 8)),
        );
        // Keep CSV on stdout clean when it carries the figure itself.
        if out.is_some() {
            stdout += &text;
        } else {
            eprint!("{text}");
        }
    }
    Ok(Outcome::ok(stdout))
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::HeaderMismatch { .. } | Error::CorruptCache { .. } => EXIT_CACHE,
        Error::PrecisionTooLow { .. }
        | Error::InvalidArgument(_)
        | Error::Parse { .. }
        | Error::DivergentBranch(_)
        | Error::IndexOutOfRange { .. }
        | Error::InsufficientPrecision { .. }
        | Error::CapExceeded { .. }
        | Error::TerminatingSeries { .. } => EXIT_USAGE,
        _ => 1,
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let format = cli.format;
    match &cli.command {
        Command::Coeffs { n_max, source } => run_coeffs(format, *n_max, source),
        Command::Slope { n, digits, source } => run_slope(format, *n, *digits, source),
        Command::Singularity {
            n,
            window,
            fit,
            bracket,
            aitken_window,
            aitken_passes,
            table_digits,
            source,
        } => run_singularity(format, n, *window, *fit, *bracket, *aitken_window, *aitken_passes, *table_digits, source),
        Command::Validate {
            cache,
            precision,
            oracle_m,
            recompute,
            synthetic,
            synthetic_n,
        } => run_validate(format, cache.as_deref(), *precision, *oracle_m, *recompute, synthetic.as_ref(), *synthetic_n),
        Command::Figure { n_max, out, trend, source } => run_figure(format, *n_max, out.as_deref(), *trend, source),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            if outcome.failed {
                ExitCode::from(EXIT_VALIDATION)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
