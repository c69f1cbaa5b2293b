//! Command line front end: parse an expression, dispatch to the decision
//! pipeline, and print one JSON envelope on standard output.
//!
//! Exit codes: 0 for a settled verdict or a completed report, 2 for
//! Inconclusive, 1 for any error. Inconclusive is a first-class outcome of
//! the one-sided criterion, not a failure, which is why it gets its own
//! code.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::curve::{plane_curve_ne, reduce_with_warning, space_curve_ne, Status, Verdict};
use crate::error::{Error, Result};
use crate::parse::parse_polynomial;
use crate::report::{
    branch_json, cone_json, verdict_json, witness_json, Envelope, RevalidationJson, OUTPUT_SCHEMA,
};
use crate::scalar::ExactScalar;
use crate::slicer::{revalidate, sectional_test, SearchConfig};
use crate::tol;
use crate::witness::{witness_with_pair, WitnessConfig};
use crate::{cone, puiseux, report};
use num_rational::BigRational;

#[derive(Parser, Debug)]
#[command(
    name = "lne",
    version,
    about = "Decide Lipschitz normal embedding of complex germs and emit witnesses"
)]
struct Cli {
    /// Print the JSON schema all outputs conform to, then exit.
    #[arg(long)]
    json_schema: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Working precision in bits, between 64 and 4096.
    #[arg(long, env = "LNE_PRECISION")]
    precision: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tangent cone of a hypersurface germ: initial form, reducedness, and
    /// for plane curves the factorization into tangent directions.
    TangentCone {
        expression: String,
        #[command(flatten)]
        common: Common,
    },
    /// Decide normal embedding of a plane curve germ.
    PlaneCurve {
        expression: String,
        #[command(flatten)]
        common: Common,
    },
    /// Decide normal embedding of a plane curve germ through its branch
    /// expansion: smoothness and pairwise transversality.
    SpaceCurve {
        expression: String,
        #[command(flatten)]
        common: Common,
        /// Truncation exponent for the series expansion.
        #[arg(long)]
        truncation: Option<i64>,
    },
    /// Run the sectional criterion on a germ in three or more variables.
    SliceTest {
        expression: String,
        #[command(flatten)]
        common: Common,
        /// Seed of the deterministic direction search.
        #[arg(long)]
        seed: Option<u64>,
        /// Random directions tried per search stage, between 1 and 1024.
        #[arg(long)]
        attempts: Option<u32>,
        /// Search for a slice even when a non-reduced tangent cone already
        /// settles the verdict.
        #[arg(long)]
        no_cone_shortcut: bool,
        /// Also write the envelope to this file (revalidate reads it back).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decide a Pham-Brieskorn sum from its exponents alone.
    Brieskorn {
        /// Comma-separated exponents, e.g. 2,3,3.
        exponents: String,
        /// Comma-separated coefficients matching the exponents; default all 1.
        #[arg(long)]
        coefficients: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Sample an arc pair witnessing that a plane curve is not normally
    /// embedded, and fit the blow-up rate of inner over outer distance.
    Witness {
        expression: String,
        #[command(flatten)]
        common: Common,
        /// Truncation exponent for the series expansion.
        #[arg(long)]
        truncation: Option<i64>,
        /// Number of sample points, between 8 and 4096.
        #[arg(long)]
        samples: Option<usize>,
        /// Cap on the sampled segment length.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Also write the envelope to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Re-check every witness value in an emitted slice-test envelope.
    Revalidate {
        certificate: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

/// Parse the arguments and run the request; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{err}");
            return 0;
        }
        Err(err) => {
            eprint!("{err}");
            return 1;
        }
    };
    if cli.json_schema {
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), "{}", OUTPUT_SCHEMA.trim_end());
        return 0;
    }
    let Some(command) = cli.command else {
        eprintln!("missing subcommand; see lne --help");
        return 1;
    };
    let (name, input, precision) = describe(&command);
    match execute(command, precision) {
        Ok((envelope, code)) => {
            emit(&envelope);
            code
        }
        Err(err) => {
            emit(&Envelope::failure(name, &input, precision, &err));
            1
        }
    }
}

fn emit(envelope: &Envelope) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(envelope).expect("envelopes always serialize");
    // Tolerate a closed pipe (lne ... | head) instead of panicking.
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn describe(command: &Command) -> (&'static str, String, u32) {
    let (name, input, common) = match command {
        Command::TangentCone { expression, common } => ("tangent-cone", expression.clone(), common),
        Command::PlaneCurve { expression, common } => ("plane-curve", expression.clone(), common),
        Command::SpaceCurve {
            expression, common, ..
        } => ("space-curve", expression.clone(), common),
        Command::SliceTest {
            expression, common, ..
        } => ("slice-test", expression.clone(), common),
        Command::Brieskorn {
            exponents, common, ..
        } => ("brieskorn", exponents.clone(), common),
        Command::Witness {
            expression, common, ..
        } => ("witness", expression.clone(), common),
        Command::Revalidate {
            certificate,
            common,
        } => ("revalidate", certificate.display().to_string(), common),
    };
    let precision = common
        .precision
        .filter(|p| tol::validate_precision(*p).is_ok())
        .unwrap_or_else(tol::default_precision);
    (name, input, precision)
}

fn verdict_code(verdict: &Verdict) -> i32 {
    match verdict.status {
        Status::NE | Status::NonNE => 0,
        Status::Inconclusive => 2,
    }
}

fn checked_precision(common: &Common) -> Result<u32> {
    match common.precision {
        Some(p) => tol::validate_precision(p),
        None => Ok(tol::default_precision()),
    }
}

fn execute(command: Command, _resolved: u32) -> Result<(Envelope, i32)> {
    match command {
        Command::TangentCone { expression, common } => {
            let precision = checked_precision(&common)?;
            let f = parse_polynomial(&expression, None)?;
            let cone = cone::tangent_cone(&f, precision)?;
            let mut env = Envelope::new("tangent-cone", &expression, precision);
            env.tangent_cone = Some(cone_json(&cone));
            Ok((env, 0))
        }
        Command::PlaneCurve { expression, common } => {
            let precision = checked_precision(&common)?;
            let f = parse_polynomial(&expression, None)?;
            let verdict = plane_curve_ne(&f)?;
            let code = verdict_code(&verdict);
            let mut env = Envelope::new("plane-curve", &expression, precision);
            env.verdict = Some(verdict_json(&verdict, &f));
            Ok((env, code))
        }
        Command::SpaceCurve {
            expression,
            common,
            truncation,
        } => {
            let precision = checked_precision(&common)?;
            let truncation = checked_truncation(truncation)?;
            let f = parse_polynomial(&expression, None)?;
            let mut warnings = Vec::new();
            let reduced = reduce_with_warning(&f, &mut warnings)?;
            let horizon = BigRational::from_integer(truncation.into());
            let branches = tol::retry_with_precision(precision, |prec| {
                puiseux::puiseux_expand(&reduced, &horizon, prec)
            })?;
            let mut verdict = tol::retry_with_precision(precision, |prec| {
                space_curve_ne(&branches, prec)
            })?;
            verdict.warnings.splice(0..0, warnings);
            let code = verdict_code(&verdict);
            let mut env = Envelope::new("space-curve", &expression, precision);
            env.verdict = Some(verdict_json(&verdict, &reduced));
            env.branches = Some(branches.iter().map(branch_json).collect());
            Ok((env, code))
        }
        Command::SliceTest {
            expression,
            common,
            seed,
            attempts,
            no_cone_shortcut,
            output,
        } => {
            let precision = checked_precision(&common)?;
            let attempts = checked_attempts(attempts)?;
            let f = parse_polynomial(&expression, None)?;
            let defaults = SearchConfig::default();
            let config = SearchConfig {
                seed: seed.unwrap_or(defaults.seed),
                frame_attempts: attempts.unwrap_or(defaults.frame_attempts),
                line_attempts: attempts.unwrap_or(defaults.line_attempts),
                precision,
                use_cone_shortcut: !no_cone_shortcut,
            };
            let verdict = sectional_test(&f, &config)?;
            let code = verdict_code(&verdict);
            let mut env = Envelope::new("slice-test", &expression, precision);
            env.seed = Some(config.seed);
            env.verdict = Some(verdict_json(&verdict, &f));
            write_output(output.as_deref(), &env)?;
            Ok((env, code))
        }
        Command::Brieskorn {
            exponents,
            coefficients,
            common,
        } => {
            let precision = checked_precision(&common)?;
            let exps = parse_exponents(&exponents)?;
            let coeffs = match coefficients {
                Some(text) => parse_coefficients(&text)?,
                None => vec![ExactScalar::one(); exps.len()],
            };
            let verdict = crate::slicer::brieskorn_test(&exps, &coeffs)?;
            let code = verdict_code(&verdict);
            let mut env = Envelope::new("brieskorn", &exponents, precision);
            let placeholder = crate::poly::Polynomial::zero(&[]);
            env.verdict = Some(verdict_json(&verdict, &placeholder));
            Ok((env, code))
        }
        Command::Witness {
            expression,
            common,
            truncation,
            samples,
            epsilon,
            output,
        } => {
            let precision = checked_precision(&common)?;
            let truncation = checked_truncation(truncation)?;
            let samples = checked_samples(samples)?;
            let f = parse_polynomial(&expression, None)?;
            let mut config = WitnessConfig {
                precision,
                truncation,
                samples,
                ..WitnessConfig::default()
            };
            if let Some(eps) = epsilon {
                if !(eps > 0.0) {
                    return Err(Error::domain("epsilon must be positive"));
                }
                config.t_max = config.t_max.min(eps);
            }
            let (pair, report) = witness_with_pair(&f, &config)?;
            let mut env = Envelope::new("witness", &expression, precision);
            env.witness = Some(witness_json(&pair, &report));
            write_output(output.as_deref(), &env)?;
            Ok((env, 0))
        }
        Command::Revalidate {
            certificate,
            common,
        } => {
            let precision = checked_precision(&common)?;
            let path = certificate.display().to_string();
            let text = std::fs::read_to_string(&certificate)?;
            let envelope: Envelope = serde_json::from_str(&text)?;
            let Some(verdict) = envelope.verdict else {
                return Err(Error::structural(
                    "the file holds no verdict; only slice-test envelopes can be revalidated",
                ));
            };
            let report::ReasonJson::SliceWitness { certificate: cert } = verdict.reason else {
                return Err(Error::structural(
                    "the verdict carries no slice certificate to revalidate",
                ));
            };
            let (germ, cert) = report::certificate_from_json(&cert)?;
            let checks = revalidate(&germ, &cert)?;
            let mut env = Envelope::new("revalidate", &path, precision);
            env.revalidation = Some(RevalidationJson {
                certificate: path.clone(),
                checks,
                passed: true,
            });
            Ok((env, 0))
        }
    }
}

fn write_output(path: Option<&std::path::Path>, envelope: &Envelope) -> Result<()> {
    if let Some(path) = path {
        let mut text = serde_json::to_string_pretty(envelope)?;
        text.push('\n');
        std::fs::write(path, text)?;
    }
    Ok(())
}

fn checked_truncation(truncation: Option<i64>) -> Result<i64> {
    let t = truncation.unwrap_or(tol::DEFAULT_TRUNCATION);
    if (2..=64).contains(&t) {
        Ok(t)
    } else {
        Err(Error::domain(format!("truncation {t} outside [2, 64]")))
    }
}

fn checked_attempts(attempts: Option<u32>) -> Result<Option<u32>> {
    match attempts {
        Some(a) if !(1..=1024).contains(&a) => {
            Err(Error::domain(format!("attempts {a} outside [1, 1024]")))
        }
        other => Ok(other),
    }
}

fn checked_samples(samples: Option<usize>) -> Result<usize> {
    let n = samples.unwrap_or(tol::WITNESS_SAMPLES);
    if (8..=4096).contains(&n) {
        Ok(n)
    } else {
        Err(Error::domain(format!("samples {n} outside [8, 4096]")))
    }
}

fn parse_exponents(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| Error::domain(format!("exponent {:?} is not a positive integer", part.trim())))
        })
        .collect()
}

fn parse_coefficients(text: &str) -> Result<Vec<ExactScalar>> {
    text.split(',')
        .map(|part| report::parse_scalar(part.trim()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> i32 {
        run(std::iter::once("lne").chain(args.iter().copied()))
    }

    #[test]
    fn exit_codes_follow_the_verdicts() {
        assert_eq!(run_args(&["plane-curve", "x^2 - y^2"]), 0);
        assert_eq!(run_args(&["plane-curve", "y^2 + x^4"]), 0);
        assert_eq!(run_args(&["slice-test", "x^2 + y^2 - z^3"]), 2);
        assert_eq!(run_args(&["plane-curve", "x^2 + * y"]), 1);
        assert_eq!(run_args(&["brieskorn", "2,2,3"]), 2);
        assert_eq!(run_args(&["brieskorn", "2,3,3"]), 0);
    }

    #[test]
    fn option_ranges_are_enforced() {
        assert_eq!(run_args(&["plane-curve", "x^2 - y^2", "--precision", "32"]), 1);
        assert_eq!(run_args(&["slice-test", "x^2+y^3+z^3", "--attempts", "0"]), 1);
        assert_eq!(run_args(&["witness", "y^2 - x^3", "--samples", "4"]), 1);
        assert_eq!(run_args(&["space-curve", "y^2 - x^3", "--truncation", "1"]), 1);
    }

    #[test]
    fn help_and_schema_succeed() {
        assert_eq!(run_args(&["--help"]), 0);
        assert_eq!(run_args(&["--json-schema"]), 0);
        assert_eq!(run_args(&[]), 1);
        assert_eq!(run_args(&["no-such-command"]), 1);
    }
}
