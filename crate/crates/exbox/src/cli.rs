//! `exbox` subcommands. Exit status: 0 when the property holds or the
//! command succeeded, 2 when it is violated (with a certificate), 1 on
//! usage or input errors.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use exbox_core::exclusivity::{e1_check, lo_k_check, noise_threshold, LoOutcome};
use exbox_core::gm::{self, GmSideExtension, Side};
use exbox_core::marginal::{ch_all, global_extension, verify_certificate};
use exbox_core::polytope::{catalog_box, check_no_disturbance, extremal_catalog};
use exbox_core::{ProbabilityBox, Rational};
use serde_json::json;

use crate::encode;
use crate::format::{read_box, serialize_box};
use crate::report::{Report, Verdict};
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "exbox", version, about = "Exact checks on probability boxes")]
struct Cli {
    /// Report format on standard output.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Vars {
    All,
    #[value(name = "sideA")]
    SideA,
    #[value(name = "sideB")]
    SideB,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Marginals agree on every pair of overlapping contexts.
    CheckNd { file: PathBuf },
    /// No maximal clique of exclusive events sums past 1.
    CheckE1 { file: PathBuf },
    /// Exclusivity on the k-fold product box (k = 1 or 2).
    CheckLo {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        copies: usize,
    },
    /// The 12 vertices of the three-input no-disturbance polytope.
    Vertices,
    /// Joint distribution reproducing the box, or a Farkas certificate.
    Extend {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Vars::All)]
        vars: Vars,
    },
    /// All Clauser–Horne values of a bipartite binary box.
    Ch { file: PathBuf },
    /// Write the GM(c) box file, optionally with same-side tables.
    Gm {
        #[arg(long)]
        c: Rational,
        #[arg(long, requires_all = ["beta", "gamma"])]
        alpha: Option<Rational>,
        #[arg(long, requires_all = ["alpha", "gamma"])]
        beta: Option<Rational>,
        #[arg(long, requires_all = ["alpha", "beta"])]
        gamma: Option<Rational>,
    },
    /// Build and verify the certificate that GM(c) is unphysical.
    CertifyGm {
        #[arg(long, required_unless_present = "grid", conflicts_with = "grid")]
        c: Option<Rational>,
        /// Certify c = k/(3n) for k = 1..=n.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Largest vertex weight against white noise that keeps exclusivity.
    NoiseThreshold {
        #[arg(long)]
        vertex: String,
    },
}

/// Parses `argv` (program name first), runs the command and writes the
/// report to `out` and a one-line summary or diagnostic to `err`.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let start = Instant::now();
    match run(&cli.command) {
        Ok(Output::Raw(text, summary)) => {
            let _ = out.write_all(text.as_bytes());
            let _ = writeln!(err, "{summary}");
            0
        }
        Ok(Output::Report(mut report, summary)) => {
            report.timing_ms = start.elapsed().as_millis() as u64;
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            let _ = out.write_all(text.as_bytes());
            let _ = writeln!(err, "{}: {summary}", report.command);
            report.verdict.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

enum Output {
    Report(Report, String),
    Raw(String, String),
}

fn file_input(name: &str, file: &std::path::Path) -> Report {
    Report::new(name).input("file", file.display().to_string())
}

fn run(cmd: &Command) -> Result<Output, Error> {
    match cmd {
        Command::CheckNd { file } => {
            let pbox = read_box(file)?;
            let nd = check_no_disturbance(&pbox);
            let mut r = file_input("check-nd", file);
            r.certificates = nd.violations.iter().map(|v| encode::nd_violation(pbox.scenario(), v)).collect();
            r.verdict = if nd.passes() { Verdict::Pass } else { Verdict::Fail };
            let summary = format!("{} disagreement(s)", nd.violations.len());
            Ok(Output::Report(r, summary))
        }
        Command::CheckE1 { file } => {
            let pbox = read_box(file)?;
            let rep = e1_check(&pbox);
            let mut r = file_input("check-e1", file);
            r.certificates = rep.certificates.iter().map(|c| encode::e1_certificate(&pbox, c)).collect();
            r.verdict = if rep.passes() { Verdict::Pass } else { Verdict::Fail };
            let summary = format!("{} violated clique(s)", rep.certificates.len());
            Ok(Output::Report(r, summary))
        }
        Command::CheckLo { file, copies } => {
            let pbox = read_box(file)?;
            let outcome = lo_k_check(&pbox, *copies)?;
            let mut r = file_input("check-lo", file).input("copies", *copies);
            let summary = match &outcome {
                LoOutcome::Pass => "no violation".to_string(),
                LoOutcome::Violation { product, certificate } => {
                    r.verdict = Verdict::Fail;
                    r.certificates.push(encode::e1_certificate(product, certificate));
                    format!("clique total {}", certificate.total)
                }
            };
            Ok(Output::Report(r, summary))
        }
        Command::Vertices => {
            let mut r = Report::new("vertices");
            r.certificates = extremal_catalog().iter().map(|(n, v)| encode::vertex(n, v)).collect();
            let summary = format!("{} vertices", r.certificates.len());
            Ok(Output::Report(r, summary))
        }
        Command::Extend { file, vars } => {
            let pbox = read_box(file)?;
            let target = restrict(&pbox, *vars)?;
            let ext = global_extension(&target)?;
            let verified = verify_certificate(&ext.result, &ext.problem)?;
            let name = match vars {
                Vars::All => "all",
                Vars::SideA => "sideA",
                Vars::SideB => "sideB",
            };
            let mut r = file_input("extend", file).input("vars", name);
            r.verdict = if ext.result.is_feasible() { Verdict::Pass } else { Verdict::Fail };
            r.certificates.push(encode::extension(target.scenario(), &ext, verified));
            let summary = if ext.result.is_feasible() { "joint distribution found" } else { "no joint distribution" };
            Ok(Output::Report(r, summary.to_string()))
        }
        Command::Ch { file } => {
            let pbox = read_box(file)?;
            let values = ch_all(&pbox)?;
            let mut r = file_input("ch", file);
            let max = values
                .iter()
                .reduce(|a, b| if b.value > a.value { b } else { a })
                .ok_or_else(|| Error::Format("box has fewer than two settings per party".into()))?;
            let min = values.iter().map(|v| &v.value).min().expect("nonempty");
            r.value = Some(json!({
                "maximum": encode::ch_value(pbox.scenario(), max),
                "minimum": encode::rat(min),
            }));
            r.certificates = values.iter().map(|v| encode::ch_value(pbox.scenario(), v)).collect();
            let ok = values.iter().all(|v| v.within_bounds());
            r.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
            Ok(Output::Report(r, format!("{} values, maximum {}", values.len(), max.value)))
        }
        Command::Gm { c, alpha, beta, gamma } => {
            let g = gm::gm_box(c)?;
            let pbox = match (alpha, beta, gamma) {
                (Some(a), Some(b), Some(t)) => {
                    let side = |s| GmSideExtension::new(s, a.clone(), b.clone(), t.clone(), c.clone());
                    g.extended(&side(Side::A)?, &side(Side::B)?)?
                }
                _ => g.into_box(),
            };
            let summary = format!("GM({c}) with {} contexts", pbox.scenario().contexts().len());
            Ok(Output::Raw(serialize_box(&pbox), summary))
        }
        Command::CertifyGm { c, grid } => {
            let cs = match (c, grid) {
                (Some(c), _) => vec![c.clone()],
                (None, Some(0)) => return Err(Error::Format("--grid must be positive".into())),
                (None, Some(n)) => gm::c_grid(*n),
                (None, None) => unreachable!("clap requires one of --c, --grid"),
            };
            let mut r = Report::new("certify-gm");
            if let Some(c) = c {
                r = r.input("c", c.to_string());
            }
            if let Some(n) = grid {
                r = r.input("grid", *n);
            }
            let mut failed = 0;
            for c in &cs {
                let cert = gm::certify_unphysicality(c)?;
                let value = encode::unphysicality(&cert);
                if value["verified"] != json!(true) {
                    failed += 1;
                }
                r.certificates.push(value);
            }
            r.verdict = if failed == 0 { Verdict::Pass } else { Verdict::Fail };
            let summary = format!("{} of {} certificate(s) verified", cs.len() - failed, cs.len());
            Ok(Output::Report(r, summary))
        }
        Command::NoiseThreshold { vertex } => {
            let pbox = catalog_box(vertex).ok_or_else(|| Error::Format(format!("unknown vertex {vertex:?}; expected D1..D8 or I1..I4")))?;
            let t = noise_threshold(&pbox)?;
            let mut r = Report::new("noise-threshold").input("vertex", vertex.as_str());
            r.verdict = Verdict::Value;
            r.value = Some(encode::rat(&t));
            Ok(Output::Report(r, format!("threshold {t}")))
        }
    }
}

fn restrict(pbox: &ProbabilityBox, vars: Vars) -> Result<ProbabilityBox, Error> {
    let party = match vars {
        Vars::All => return Ok(pbox.clone()),
        Vars::SideA => 0,
        Vars::SideB => 1,
    };
    let s = pbox.scenario();
    if party >= s.parties().len() {
        return Err(Error::Format(format!("box has no party #{}", party + 1)));
    }
    Ok(pbox.restrict(&s.party_inputs(party))?)
}
