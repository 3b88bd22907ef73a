//! Batch certification command surface.
//!
//! Every subcommand checks a family of claims and reports per-claim verdicts.
//! The exit code is the machine contract: 0 when every checked claim holds,
//! 1 when a claim fails, 2 on malformed input. `--json` switches the report
//! to a machine-readable object; the text format may evolve.

use std::fs;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::arith::identity::expand_identity;
use crate::cert::{
    parse_certificate, parse_form, parse_isometries, verify_certificate, CertificatePayload,
    IdentityCert,
};
use crate::forms::TernaryForm;
use crate::genus::genus_classes;
use crate::represent::representation_count;
use crate::transfer::{check_prec_search, check_prec_with_sigmas, residue_rep_set, RationalIsometry};
use crate::universality::{verify_quadruple, Quadruple, VerifyMode};
use crate::{Error, Result};

/// The identity corpus shipped with the repository.
const IDENTITY_CORPUS: &str = include_str!("../../../paper-data/identities.json");

#[derive(Parser)]
#[command(
    name = "pentaform",
    version,
    about = "Exact certification of ternary quadratic form claims"
)]
struct Cli {
    /// Emit a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Cap the number of worker threads (falls back to PENTAFORM_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify universality of a pentagonal quadruple up to a bound.
    Verify {
        /// Coefficients a,b,c of the sum a·p5(x)+b·p5(y)+c·p5(z).
        #[arg(long, value_name = "A,B,C")]
        quadruple: String,
        /// Check every non-negative integer up to this bound.
        #[arg(long)]
        bound: i64,
        /// oracle | constructive | both
        #[arg(long, default_value = "both")]
        mode: String,
    },
    /// Compute the exact exclusion set of the determinant-81 form.
    Theorem31 {
        #[arg(long)]
        bound: i64,
    },
    /// List the residue classes R(N,d,a) of a form file.
    Rset {
        #[arg(long)]
        form: String,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        a: i64,
    },
    /// Check the transfer relation N ≺(d,a) M.
    Prec {
        /// Source form file (N).
        #[arg(long)]
        n: String,
        /// Target form file (M).
        #[arg(long)]
        m: String,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        a: i64,
        /// JSON file with the isometry list to use.
        #[arg(long, conflicts_with = "search")]
        sigmas: Option<String>,
        /// Search for isometries instead of supplying them.
        #[arg(long)]
        search: bool,
        /// Cap on the isometry search.
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// Replay a descent certificate file.
    Descent {
        #[arg(long)]
        cert: String,
        /// Also check the represented-value gap up to this bound.
        #[arg(long)]
        gap_bound: Option<i64>,
    },
    /// Compute the genus of a form by neighbor closure at the given primes.
    Genus {
        #[arg(long)]
        form: String,
        /// Comma-separated odd primes not dividing twice the determinant.
        #[arg(long, value_name = "P1,P2,...")]
        primes: String,
        /// Fail unless the class number equals this value.
        #[arg(long)]
        expect: Option<usize>,
    },
    /// Check the substitution identities behind the constructive pipelines.
    Identities {
        /// Check only the identity with this label.
        #[arg(long, value_name = "LABEL")]
        case: Option<String>,
    },
    /// Count the representations of a value by a form.
    Count {
        #[arg(long)]
        form: String,
        #[arg(long)]
        value: i64,
        /// Fail unless the count equals this value.
        #[arg(long)]
        expect: Option<usize>,
    },
}

/// One finished run: overall verdict, human-readable lines, JSON payload.
struct RunReport {
    ok: bool,
    lines: Vec<String>,
    data: serde_json::Value,
}

fn read_file(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Schema(format!("{path}: {e}")))
}

fn load_form(path: &str) -> Result<TernaryForm> {
    parse_form(&read_file(path)?)
}

fn parse_i64_list(text: &str, what: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Error::Schema(format!("bad {what} entry {s:?}")))
        })
        .collect()
}

fn parse_mode(text: &str) -> Result<VerifyMode> {
    match text {
        "oracle" => Ok(VerifyMode::Oracle),
        "constructive" => Ok(VerifyMode::Constructive),
        "both" => Ok(VerifyMode::Both),
        other => Err(Error::Schema(format!(
            "unknown mode {other:?} (expected oracle, constructive or both)"
        ))),
    }
}

fn configure_threads(flag: Option<usize>) {
    let requested = flag.or_else(|| {
        std::env::var("PENTAFORM_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = requested.filter(|&n| n > 0) {
        // The global pool can only be configured once; later calls are no-ops.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn execute(command: &Command) -> Result<RunReport> {
    match command {
        Command::Verify {
            quadruple,
            bound,
            mode,
        } => {
            let coeffs = parse_i64_list(quadruple, "quadruple")?;
            let [a, b, c] = coeffs[..] else {
                return Err(Error::Schema(
                    "quadruple must have exactly three coefficients".into(),
                ));
            };
            let mode = parse_mode(mode)?;
            let report = verify_quadruple(Quadruple::pentagonal(a, b, c)?, *bound, mode)?;
            let mut lines = vec![format!(
                "quadruple ({a},{b},{c}) to {bound}: {}",
                if report.universal_up_to_bound {
                    "universal"
                } else {
                    "NOT universal"
                }
            )];
            for gap in report.gaps.iter().take(10) {
                lines.push(format!("  gap at {gap}"));
            }
            for (n, why) in report.failures.iter().take(10) {
                lines.push(format!("  pipeline failure at {n}: {why}"));
            }
            Ok(RunReport {
                ok: report.universal_up_to_bound,
                lines,
                data: serde_json::to_value(&report).map_err(|e| Error::Schema(e.to_string()))?,
            })
        }
        Command::Theorem31 { bound } => {
            let cert = CertificatePayload::Theorem31(crate::cert::ExclusionCert { bound: *bound });
            let report = verify_certificate(&wrap(cert))?;
            let values = crate::universality::theorem31_exclusions(*bound)?;
            Ok(RunReport {
                ok: report.ok,
                lines: report
                    .lines
                    .into_iter()
                    .chain(values.iter().map(|v| format!("  excluded {v}")))
                    .collect(),
                data: json!({ "bound": bound, "matches_expected": report.ok, "excluded": values }),
            })
        }
        Command::Rset { form, d, a } => {
            let form = load_form(form)?;
            let set = residue_rep_set(&form, *d, *a)?;
            let classes: Vec<[i64; 3]> = set.iter().collect();
            let mut lines = vec![format!(
                "R(N,{d},{a}) for gram {:?}: {} classes",
                form.gram(),
                classes.len()
            )];
            lines.extend(classes.iter().map(|c| format!("  {c:?}")));
            Ok(RunReport {
                ok: true,
                lines,
                data: json!({ "d": d, "a": a, "count": classes.len(), "classes": classes }),
            })
        }
        Command::Prec {
            n,
            m,
            d,
            a,
            sigmas,
            search: _,
            cap,
        } => {
            let n = load_form(n)?;
            let m = load_form(m)?;
            let report = match sigmas {
                Some(path) => {
                    let data = parse_isometries(&read_file(path)?)?;
                    let sigmas = data
                        .iter()
                        .map(|s| RationalIsometry::from_data(s, &n, &m))
                        .collect::<Result<Vec<_>>>()?;
                    check_prec_with_sigmas(&n, &m, *d, *a, &sigmas)?
                }
                None => check_prec_search(&n, &m, *d, *a, *cap)?,
            };
            let mut lines = vec![format!(
                "transfer d={d} a={a}: {} ({} of {} classes good, {} isometries)",
                if report.holds { "holds" } else { "FAILS" },
                report.good_classes,
                report.total_classes,
                report.sigmas_used
            )];
            lines.extend(
                report
                    .bad_classes
                    .iter()
                    .map(|c| format!("  uncarried class {c:?}")),
            );
            Ok(RunReport {
                ok: report.holds,
                lines,
                data: serde_json::to_value(&report).map_err(|e| Error::Schema(e.to_string()))?,
            })
        }
        Command::Descent { cert, gap_bound } => {
            let mut file = parse_certificate(&read_file(cert)?)?;
            let CertificatePayload::Descent(ref mut data) = file.payload else {
                return Err(Error::Schema(format!(
                    "{cert}: expected a descent certificate"
                )));
            };
            if gap_bound.is_some() {
                data.gap_bound = *gap_bound;
            }
            let report = verify_certificate(&file)?;
            Ok(RunReport {
                ok: report.ok,
                data: json!({ "ok": report.ok, "lines": report.lines }),
                lines: report.lines,
            })
        }
        Command::Genus {
            form,
            primes,
            expect,
        } => {
            let form = load_form(form)?;
            let primes = parse_i64_list(primes, "prime")?;
            let genus = genus_classes(&form, &primes)?;
            let ok = expect.map_or(true, |e| e == genus.class_number());
            let grams: Vec<_> = genus.representatives().iter().map(|f| *f.gram()).collect();
            let mut lines = vec![format!(
                "genus closure at {primes:?}: {} classes{}",
                genus.class_number(),
                if ok { "" } else { " (MISMATCH)" }
            )];
            lines.extend(grams.iter().map(|g| format!("  {g:?}")));
            Ok(RunReport {
                ok,
                lines,
                data: json!({ "class_number": genus.class_number(), "classes": grams, "ok": ok }),
            })
        }
        Command::Identities { case } => {
            let file = parse_certificate(IDENTITY_CORPUS)?;
            let CertificatePayload::Identity(IdentityCert { identities }) = file.payload else {
                return Err(Error::Schema("identity corpus has wrong kind".into()));
            };
            let selected: Vec<_> = match case {
                Some(label) => {
                    let hits: Vec<_> =
                        identities.iter().filter(|i| &i.label == label).collect();
                    if hits.is_empty() {
                        return Err(Error::Schema(format!("no identity labeled {label:?}")));
                    }
                    hits
                }
                None => identities.iter().collect(),
            };
            let mut ok = true;
            let mut lines = Vec::new();
            let mut results = Vec::new();
            for id in selected {
                let holds = expand_identity(id)?;
                ok &= holds;
                lines.push(format!(
                    "identity {}: {}",
                    id.label,
                    if holds { "holds" } else { "FAILS" }
                ));
                results.push(json!({ "label": id.label, "holds": holds }));
            }
            Ok(RunReport {
                ok,
                lines,
                data: json!({ "ok": ok, "identities": results }),
            })
        }
        Command::Count {
            form,
            value,
            expect,
        } => {
            let form = load_form(form)?;
            let count = representation_count(&form, *value);
            let ok = expect.map_or(true, |e| e == count);
            Ok(RunReport {
                ok,
                lines: vec![format!(
                    "r({value}) = {count}{}",
                    if ok { "" } else { " (MISMATCH)" }
                )],
                data: json!({ "value": value, "count": count, "ok": ok }),
            })
        }
    }
}

fn wrap(payload: CertificatePayload) -> crate::cert::CertificateFile {
    crate::cert::CertificateFile {
        schema: crate::cert::SCHEMA_VERSION,
        note: String::new(),
        payload,
    }
}

/// Run the CLI on the given arguments, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        // clap exits 0 for --help/--version and 2 for usage errors.
        Err(e) => e.exit(),
    };
    configure_threads(cli.threads);
    match execute(&cli.command) {
        Ok(report) => {
            if cli.json {
                let mut data = report.data;
                if let Some(obj) = data.as_object_mut() {
                    obj.insert("ok".into(), json!(report.ok));
                }
                println!("{}", serde_json::to_string_pretty(&data).unwrap());
            } else {
                for line in &report.lines {
                    println!("{line}");
                }
            }
            if report.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
