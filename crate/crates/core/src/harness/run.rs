//! Single scenario runs.

use num_rational::Ratio;
use serde::Serialize;

use super::scenario::{ScenarioConfig, Traffic};
use super::HarnessError;
use crate::adversary::{
    phase_ratios, play_recorded, scenario, star_limits, AdversaryKind, PhaseRecord,
};
use crate::hexnet::{Color, Network};
use crate::ledger::{
    caco2_opposite_ends, certificate_for, CertificateSummary, CheckResult, CompetitiveRatio,
    Verdict,
};
use crate::offline_opt::{
    clique_upper_bound, exact_optimum_with_limits, DemandVector, OptLimits, OptimumWitness,
};
use crate::online_algs::{run_sequence, Algorithm, RunTrace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub q: i32,
    pub r: i32,
    pub color: Color,
    pub demand: u32,
    pub online_accepted: u32,
    pub opt_accepted: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub demand: u64,
    pub online_accepted: u64,
    pub opt_accepted: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub suite_version: String,
    pub scenario: String,
    pub algorithm: Algorithm,
    pub traffic: String,
    pub omega: u32,
    /// One row per cell, sorted by `(q, r)`.
    pub rows: Vec<ReportRow>,
    pub totals: Totals,
    pub ratio: Option<CompetitiveRatio>,
    /// For multi-phase adversaries with the optimum computed: the ratio after
    /// each phase, every prefix being an instance the adversary may stop at.
    pub phase_ratios: Vec<CompetitiveRatio>,
    /// Solver and ratio-bound checks, present when the optimum was computed.
    pub checks: Vec<CheckResult>,
    pub certificate: Option<CertificateSummary>,
}

impl RunReport {
    /// False when any check or the certificate failed outright. Explicitly
    /// uncovered certificate cases do not count as failures.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
            && self
                .certificate
                .as_ref()
                .is_none_or(|c| c.verdict != Verdict::Fail)
    }

    /// The worst ratio over the phase prefixes, or the plain ratio.
    pub fn forced_ratio(&self) -> Option<CompetitiveRatio> {
        self.phase_ratios.iter().copied().max().or(self.ratio)
    }

    pub fn failing_checks(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks
            .iter()
            .chain(self.certificate.iter().flat_map(|c| c.checks.iter()))
            .filter(|c| !c.passed)
    }
}

pub const SUITE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Execute the scenario and assemble its report. The optimum is solved when
/// `compute_opt` or `verify_certificate` is set, since certificates need it.
pub fn run_experiment(config: &ScenarioConfig) -> Result<RunReport, HarnessError> {
    config.validate(&config.name, None)?;
    let context = |error| HarnessError::Run {
        scenario: config.name.clone(),
        error,
    };
    let network = config.network();
    let (trace, phases): (RunTrace, Vec<PhaseRecord>) = match &config.traffic {
        Traffic::Requests(reqs) => {
            run_sequence(config.algorithm, &network, config.omega, reqs).map(|t| (t, Vec::new()))
        }
        Traffic::Adversary(kind) => scenario(*kind, config.omega, Some(&network))
            .and_then(|sc| play_recorded(&sc, config.algorithm)),
    }
    .map_err(context)?;

    let want_opt = config.compute_opt || config.verify_certificate;
    let limits = config.opt_limits.unwrap_or(match config.traffic {
        Traffic::Adversary(AdversaryKind::Fig2 | AdversaryKind::Fig3) => star_limits(),
        _ => OptLimits::default(),
    });
    let opt = if want_opt {
        let demands = DemandVector::new(&network, trace.demands.clone()).map_err(context)?;
        Some(exact_optimum_with_limits(&network, config.omega, &demands, limits).map_err(context)?)
    } else {
        None
    };
    let phase_ratios = if want_opt && phases.len() > 1 {
        phase_ratios(&network, config.omega, &phases, limits).map_err(context)?
    } else {
        Vec::new()
    };

    let mut checks = Vec::new();
    if let Some(opt) = &opt {
        let demands = DemandVector::new(&network, trace.demands.clone()).map_err(context)?;
        let bound = clique_upper_bound(&network, config.omega, &demands).map_err(context)?;
        checks.push(check(
            "optimum_within_clique_bound",
            opt.total <= bound,
            format!("optimum {} exceeds clique bound {bound}", opt.total),
        ));
        if let Some(limit) = guarantee(config.algorithm, &network) {
            let ratio = CompetitiveRatio::from_totals(opt.total, trace.total_accepted() as u64);
            checks.push(check(
                "ratio_within_guarantee",
                ratio.at_most(limit),
                format!("ratio {ratio} exceeds {}/{}", limit.numer(), limit.denom()),
            ));
        }
    }

    let certificate = match (&opt, config.verify_certificate) {
        (Some(opt), true) => {
            let mut cert = certificate_for(&trace, opt).map_err(context)?;
            if let (Some(cert), Algorithm::Caco2) = (&mut cert, config.algorithm) {
                let ends = caco2_opposite_ends(&trace).map_err(context)?;
                if !ends.passed {
                    cert.verdict = Verdict::Fail;
                }
                cert.checks.push(ends);
            }
            cert
        }
        _ => None,
    };

    let mut report = assemble(config, &trace, opt.as_ref(), checks, certificate);
    report.phase_ratios = phase_ratios;
    Ok(report)
}

/// Worst-case ratio the algorithm is known to respect on this network.
fn guarantee(algorithm: Algorithm, network: &Network) -> Option<Ratio<i64>> {
    match algorithm {
        Algorithm::Caco | Algorithm::Partition { x: 2, y: 1 } => Some(Ratio::new(7, 3)),
        Algorithm::Caco2 if network.is_triangle_free() => Some(Ratio::new(9, 4)),
        _ => None,
    }
}

fn check(name: &str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.into(),
        passed,
        cell: None,
        detail: if passed { String::new() } else { detail },
    }
}

fn assemble(
    config: &ScenarioConfig,
    trace: &RunTrace,
    opt: Option<&OptimumWitness>,
    checks: Vec<CheckResult>,
    certificate: Option<CertificateSummary>,
) -> RunReport {
    // Network cells are already sorted by (q, r).
    let rows: Vec<ReportRow> = trace
        .network
        .cells()
        .iter()
        .enumerate()
        .map(|(i, c)| ReportRow {
            q: c.q,
            r: c.r,
            color: c.color(),
            demand: trace.demand(i),
            online_accepted: trace.accepted(i) as u32,
            opt_accepted: opt.map(|o| o.get(i)),
        })
        .collect();
    let totals = Totals {
        demand: rows.iter().map(|r| r.demand as u64).sum(),
        online_accepted: rows.iter().map(|r| r.online_accepted as u64).sum(),
        opt_accepted: opt.map(|_| {
            rows.iter()
                .filter_map(|r| r.opt_accepted)
                .map(u64::from)
                .sum()
        }),
    };
    let ratio = totals
        .opt_accepted
        .map(|o| CompetitiveRatio::from_totals(o, totals.online_accepted));
    RunReport {
        suite_version: SUITE_VERSION.into(),
        scenario: config.name.clone(),
        algorithm: config.algorithm,
        traffic: match &config.traffic {
            Traffic::Requests(r) => format!("requests:{}", r.len()),
            Traffic::Adversary(k) => k.to_string(),
        },
        omega: config.omega,
        rows,
        totals,
        ratio,
        phase_ratios: Vec::new(),
        checks,
        certificate,
    }
}
