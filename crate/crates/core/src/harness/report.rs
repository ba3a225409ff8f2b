//! Rendering reports as CSV or human-readable text.

use std::fmt::Write as _;
use std::str::FromStr;

use super::run::RunReport;
use super::sweep::SweepOutcome;
use crate::error::Error;
use crate::ledger::CheckResult;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    Csv,
    #[default]
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::Invalid(format!(
                "unknown format {other:?} (expected csv or text)"
            ))),
        }
    }
}

pub const CSV_COLUMNS: [&str; 6] = [
    "q",
    "r",
    "color",
    "demand",
    "online_accepted",
    "opt_accepted",
];

pub fn emit_report(report: &RunReport, format: Format) -> String {
    match format {
        Format::Csv => report_csv(report),
        Format::Text => report_text(report),
    }
}

fn report_csv(report: &RunReport) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    for row in &report.rows {
        w.serialize(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

fn or_dash<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".into(), |v| v.to_string())
}

fn check_line(out: &mut String, c: &CheckResult) {
    let status = if c.passed { "PASS" } else { "FAIL" };
    let _ = write!(out, "  {status}  {}", c.name);
    if !c.passed {
        if let Some(cell) = c.cell {
            let _ = write!(out, " at cell {cell}");
        }
        if !c.detail.is_empty() {
            let _ = write!(out, ": {}", c.detail);
        }
    }
    out.push('\n');
}

fn report_text(report: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario:  {}", report.scenario);
    let _ = writeln!(out, "algorithm: {}", report.algorithm);
    let _ = writeln!(out, "traffic:   {}", report.traffic);
    let _ = writeln!(out, "omega:     {}", report.omega);
    let _ = writeln!(out, "suite:     {}", report.suite_version);
    out.push('\n');
    let _ = writeln!(
        out,
        "{:>5} {:>5} {:>5} {:>7} {:>7} {:>7}",
        "q", "r", "color", "demand", "online", "opt"
    );
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{:>5} {:>5} {:>5} {:>7} {:>7} {:>7}",
            row.q,
            row.r,
            row.color.to_string(),
            row.demand,
            row.online_accepted,
            or_dash(row.opt_accepted)
        );
    }
    let t = &report.totals;
    let _ = writeln!(
        out,
        "totals: demand {}, online {}, opt {}, ratio {}",
        t.demand,
        t.online_accepted,
        or_dash(t.opt_accepted),
        or_dash(report.ratio)
    );
    if !report.phase_ratios.is_empty() {
        let phases: Vec<String> = report.phase_ratios.iter().map(|r| r.fraction()).collect();
        let _ = writeln!(
            out,
            "ratio after each phase: {}; forced {}",
            phases.join(", "),
            or_dash(report.forced_ratio())
        );
    }
    if !report.checks.is_empty() {
        out.push_str("\nchecks:\n");
        for c in &report.checks {
            check_line(&mut out, c);
        }
    }
    if let Some(cert) = &report.certificate {
        let _ = writeln!(out, "\ncertificate ({}): {:?}", cert.kind, cert.verdict);
        for c in &cert.checks {
            check_line(&mut out, c);
        }
        if !cert.credits.is_empty() {
            let _ = writeln!(out, "  {:>9} {:>10} {:>10}", "cell", "class", "credit");
            for row in &cert.credits {
                let class = or_dash(row.class.map(|c| format!("{c:?}").to_lowercase()));
                let (n, d) = row.credit;
                let credit = if d == 1 {
                    n.to_string()
                } else {
                    format!("{n}/{d}")
                };
                let _ = writeln!(
                    out,
                    "  {:>9} {class:>10} {credit:>10}",
                    row.cell.to_string()
                );
            }
        }
        for (from, to, (n, d)) in &cert.compensation {
            let _ = writeln!(out, "  transfer {from} -> {to}: {n}/{d}");
        }
        for u in &cert.uncovered {
            let _ = writeln!(out, "  uncovered at {}: {} ({})", u.cell, u.check, u.reason);
        }
        for u in &cert.failures {
            let _ = writeln!(out, "  FAILURE at {}: {} ({})", u.cell, u.check, u.reason);
        }
    }
    out
}

pub fn emit_sweep(outcome: &SweepOutcome, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "point",
                "algorithm",
                "omega",
                "online_accepted",
                "opt_accepted",
                "ratio",
                "forced_ratio",
                "status",
            ])
            .expect("in-memory write");
            for p in &outcome.points {
                let record = match &p.result {
                    Ok(r) => vec![
                        p.label.clone(),
                        r.algorithm.to_string(),
                        r.omega.to_string(),
                        r.totals.online_accepted.to_string(),
                        r.totals
                            .opt_accepted
                            .map_or_else(String::new, |o| o.to_string()),
                        r.ratio.map_or_else(String::new, |x| x.fraction()),
                        r.forced_ratio().map_or_else(String::new, |x| x.fraction()),
                        if r.passed() {
                            "ok".into()
                        } else {
                            "check-failed".into()
                        },
                    ],
                    Err(e) => vec![
                        p.label.clone(),
                        or_dash(p.algorithm),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        format!("error: {e}"),
                    ],
                };
                w.write_record(&record).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush"))
                .expect("csv output is utf-8")
        }
        Format::Text => {
            let mut out = String::new();
            for p in &outcome.points {
                match &p.result {
                    Ok(r) => {
                        let _ = writeln!(
                            out,
                            "{:<40} online {:>5} opt {:>5} ratio {} forced {}{}",
                            p.label,
                            r.totals.online_accepted,
                            or_dash(r.totals.opt_accepted),
                            or_dash(r.ratio.map(|x| x.fraction())),
                            or_dash(r.forced_ratio()),
                            if r.passed() { "" } else { "  CHECK FAILED" }
                        );
                        for c in r.failing_checks() {
                            check_line(&mut out, c);
                        }
                    }
                    Err(e) => {
                        let _ = writeln!(out, "{:<40} ERROR {e}", p.label);
                    }
                }
            }
            if !outcome.summary.is_empty() {
                out.push_str("\nsummary:\n");
                for s in &outcome.summary {
                    let _ = writeln!(
                        out,
                        "  {:<16} points {:>3} failed {:>3} min {} max {}",
                        s.algorithm.to_string(),
                        s.points,
                        s.failed,
                        or_dash(s.min.as_ref().map(|(r, at)| format!("{r} [{at}]"))),
                        or_dash(s.max.as_ref().map(|(r, at)| format!("{r} [{at}]"))),
                    );
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::run::Totals;
    use crate::ledger::{CertificateSummary, Verdict};
    use crate::online_algs::Algorithm;

    fn empty() -> RunReport {
        RunReport {
            suite_version: "0".into(),
            scenario: "empty".into(),
            algorithm: Algorithm::Greedy,
            traffic: "requests:0".into(),
            omega: 7,
            rows: Vec::new(),
            totals: Totals {
                demand: 0,
                online_accepted: 0,
                opt_accepted: None,
            },
            ratio: None,
            phase_ratios: Vec::new(),
            checks: Vec::new(),
            certificate: None,
        }
    }

    #[test]
    fn empty_run_is_header_only() {
        assert_eq!(
            emit_report(&empty(), Format::Csv),
            "q,r,color,demand,online_accepted,opt_accepted\n"
        );
    }

    #[test]
    fn failing_check_is_listed_with_cell() {
        let mut rep = empty();
        rep.certificate = Some(CertificateSummary {
            kind: "caco".into(),
            verdict: Verdict::Fail,
            checks: vec![CheckResult {
                name: "dangerous_cells_nonadjacent".into(),
                passed: false,
                cell: Some(crate::hexnet::CellId::new(0, 0)),
                detail: "adjacent dangerous cells".into(),
            }],
            credits: Vec::new(),
            compensation: Vec::new(),
            uncovered: Vec::new(),
            failures: Vec::new(),
            flagged: Vec::new(),
        });
        let text = emit_report(&rep, Format::Text);
        assert!(
            text.contains(
                "FAIL  dangerous_cells_nonadjacent at cell (0,0): adjacent dangerous cells"
            ),
            "{text}"
        );
        assert!(!rep.passed());
    }

    #[test]
    fn format_selector() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
    }
}
