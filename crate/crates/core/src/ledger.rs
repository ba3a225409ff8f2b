//! Certificate checkers for the amortized accounting behind the 7/3 and 9/4
//! upper bounds, evaluated on concrete runs.
//!
//! Every comparison here is exact: counts are integers and the amortized
//! credits `B_i`, `H_ij` are rationals. Nothing in a pass/fail decision goes
//! through floating point.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hexnet::{color_of, CellId, NeighborConfig, Network};
use crate::offline_opt::OptimumWitness;
use crate::online_algs::{Algorithm, RunTrace};
use crate::spectrum::make_partition_caco;

pub type Q = Ratio<i64>;

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

/// `OPT / ALG` as an exact fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompetitiveRatio {
    Finite(Q),
    Infinite,
}

impl CompetitiveRatio {
    pub fn from_totals(opt: u64, alg: u64) -> Self {
        match (opt, alg) {
            (0, 0) => CompetitiveRatio::Finite(q(1)),
            (_, 0) => CompetitiveRatio::Infinite,
            (o, a) => CompetitiveRatio::Finite(Q::new(o as i64, a as i64)),
        }
    }

    pub fn finite(self) -> Option<Q> {
        match self {
            CompetitiveRatio::Finite(r) => Some(r),
            CompetitiveRatio::Infinite => None,
        }
    }

    /// Exact `self <= bound`.
    pub fn at_most(self, bound: Q) -> bool {
        self.finite().is_some_and(|r| r <= bound)
    }

    pub fn at_least(self, bound: Q) -> bool {
        self.finite().is_none_or(|r| r >= bound)
    }

    pub fn to_f64(self) -> f64 {
        self.finite()
            .and_then(|r| r.to_f64())
            .unwrap_or(f64::INFINITY)
    }

    /// `"p/q"`, or `"inf"`.
    pub fn fraction(self) -> String {
        match self {
            CompetitiveRatio::Finite(r) => format!("{}/{}", r.numer(), r.denom()),
            CompetitiveRatio::Infinite => "inf".into(),
        }
    }
}

/// Finite ratios compare exactly; `Infinite` is above all of them.
impl Ord for CompetitiveRatio {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use CompetitiveRatio::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
        }
    }
}

impl PartialOrd for CompetitiveRatio {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CompetitiveRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompetitiveRatio::Finite(_) => write!(f, "{} (~{:.4})", self.fraction(), self.to_f64()),
            CompetitiveRatio::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for CompetitiveRatio {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.fraction())
    }
}

pub fn ratio_report(trace: &RunTrace, opt: &OptimumWitness) -> CompetitiveRatio {
    CompetitiveRatio::from_totals(opt.total, trace.total_accepted() as u64)
}

/// One named verification with the first offending cell, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cell: Option<CellId>,
    pub detail: String,
}

impl CheckResult {
    fn run<I>(name: &str, cells: I) -> CheckResult
    where
        I: IntoIterator<Item = (CellId, bool, String)>,
    {
        for (cell, ok, detail) in cells {
            if !ok {
                return CheckResult {
                    name: name.into(),
                    passed: false,
                    cell: Some(cell),
                    detail,
                };
            }
        }
        CheckResult {
            name: name.into(),
            passed: true,
            cell: None,
            detail: String::new(),
        }
    }

    fn global(name: &str, ok: bool, detail: String) -> CheckResult {
        CheckResult {
            name: name.into(),
            passed: ok,
            cell: None,
            detail: if ok { String::new() } else { detail },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellClass {
    Safe,
    Dangerous,
}

/// Overall verdict of a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    /// Some checks failed, but only at cells whose situation falls outside
    /// the configurations the accounting argument covers.
    Uncovered,
    Fail,
}

fn same_cells(trace: &RunTrace, opt: &OptimumWitness) -> Result<()> {
    if opt.cells.as_slice() != trace.network.cells() || opt.per_cell.len() != trace.network.len() {
        return Err(Error::NetworkMismatch);
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct CacoCertificate {
    pub cells: Vec<CellId>,
    pub omega: u32,
    pub classes: Vec<CellClass>,
    /// Amortized credit `B_i`.
    pub credit: Vec<Q>,
    pub checks: Vec<CheckResult>,
}

impl CacoCertificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn verdict(&self) -> Verdict {
        if self.passed() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

pub const CACO_CHECKS: [&str; 8] = [
    "reserved_floor",
    "safe_cell_credit",
    "dangerous_cells_nonadjacent",
    "safe_cell_dangerous_neighbors",
    "shared_exhausted_at_rejection",
    "credit_total",
    "per_cell_ratio_7_3",
    "global_ratio_7_3",
];

/// Safe/dangerous ledger for a 2:2:2:1 reservation run.
pub fn caco_certificate(trace: &RunTrace, opt: &OptimumWitness) -> Result<CacoCertificate> {
    same_cells(trace, opt)?;
    let omega = trace.omega;
    let partition = make_partition_caco(omega)?;
    if trace.partition != Some(partition) {
        return Err(Error::Invalid(format!(
            "caco certificate needs a 2:2:2:1 run, got {}",
            trace.algorithm
        )));
    }
    let net = &trace.network;
    let n = net.len();
    let w = omega as i64;
    let a: Vec<i64> = (0..n).map(|i| trace.accepted(i) as i64).collect();
    let o: Vec<i64> = opt.per_cell.iter().map(|&x| x as i64).collect();
    let classes: Vec<CellClass> = o
        .iter()
        .map(|&oi| {
            if 3 * oi > 2 * w {
                CellClass::Dangerous
            } else {
                CellClass::Safe
            }
        })
        .collect();
    let credit: Vec<Q> = (0..n)
        .map(|i| match classes[i] {
            CellClass::Safe => Q::new(3 * o[i], 7),
            CellClass::Dangerous => {
                q(a[i])
                    + net
                        .neighbor_indices(i)
                        .iter()
                        .map(|&k| (q(a[k]) - Q::new(3 * o[k], 7)) / 3)
                        .sum::<Q>()
            }
        })
        .collect();

    let cell = |i: usize| net.cell(i);
    let mut checks = Vec::new();
    checks.push(CheckResult::run(
        CACO_CHECKS[0],
        (0..n).map(|i| {
            let r = trace.demand(i) as i64;
            (
                cell(i),
                7 * r < 2 * w || 7 * a[i] >= 2 * w,
                format!("R={r} A={} below 2w/7", a[i]),
            )
        }),
    ));
    checks.push(CheckResult::run(
        CACO_CHECKS[1],
        (0..n).filter(|&i| classes[i] == CellClass::Safe).map(|i| {
            (
                cell(i),
                7 * a[i] >= 3 * o[i],
                format!("A={} < 3O/7 with O={}", a[i], o[i]),
            )
        }),
    ));
    checks.push(CheckResult::run(
        CACO_CHECKS[2],
        net.edges().map(|(i, j)| {
            let both = classes[i] == CellClass::Dangerous && classes[j] == CellClass::Dangerous;
            (
                cell(i),
                !both,
                format!("dangerous neighbors {} and {}", cell(i), cell(j)),
            )
        }),
    ));
    checks.push(CheckResult::run(
        CACO_CHECKS[3],
        (0..n).filter(|&i| classes[i] == CellClass::Safe).map(|i| {
            let d = net
                .neighbor_indices(i)
                .iter()
                .filter(|&&k| classes[k] == CellClass::Dangerous)
                .count();
            (cell(i), d <= 3, format!("{d} dangerous neighbors"))
        }),
    ));
    checks.push(CheckResult::run(
        CACO_CHECKS[4],
        trace.rejected_cells().into_iter().map(|i| {
            let s = trace.shared_accepted(i)
                + net
                    .neighbor_indices(i)
                    .iter()
                    .map(|&k| trace.shared_accepted(k))
                    .sum::<usize>();
            (
                cell(i),
                7 * s as i64 >= w,
                format!("shared use around cell is {s} < w/7"),
            )
        }),
    ));
    let (sum_b, sum_a): (Q, i64) = (credit.iter().sum(), a.iter().sum());
    checks.push(CheckResult::global(
        CACO_CHECKS[5],
        sum_b <= q(sum_a),
        format!("sum B = {sum_b} exceeds sum A = {sum_a}"),
    ));
    checks.push(CheckResult::run(
        CACO_CHECKS[6],
        (0..n).map(|i| {
            (
                cell(i),
                q(3 * o[i]) <= credit[i] * 7,
                format!("O={} > 7/3 * B with B={}", o[i], credit[i]),
            )
        }),
    ));
    let sum_o: i64 = o.iter().sum();
    checks.push(CheckResult::global(
        CACO_CHECKS[7],
        3 * sum_o <= 7 * sum_a,
        format!("OPT {sum_o} > 7/3 * ALG {sum_a}"),
    ));
    Ok(CacoCertificate {
        cells: net.cells().to_vec(),
        omega,
        classes,
        credit,
        checks,
    })
}

/// A cell whose failing check is explained by a situation the accounting
/// argument does not cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UncoveredCase {
    pub cell: CellId,
    pub check: String,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct Caco2Certificate {
    pub cells: Vec<CellId>,
    pub omega: u32,
    /// `H_ij` keyed by `(giver, receiver)` cell indices; only non-zero entries.
    pub compensation: BTreeMap<(usize, usize), Q>,
    pub credit: Vec<Q>,
    pub checks: Vec<CheckResult>,
    /// Failures traced to uncovered configurations, one per offending cell.
    pub uncovered: Vec<UncoveredCase>,
    /// Cells with a degenerate neighborhood (one or two same-colored neighbors).
    pub flagged: Vec<CellId>,
    /// Genuine failures: cells violating a check while the argument's premises hold.
    pub failures: Vec<UncoveredCase>,
}

pub const CACO2_CHECKS: [&str; 4] = [
    "budget_feasibility",
    "credit_total",
    "per_cell_ratio_9_4",
    "global_ratio_9_4",
];

impl Caco2Certificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn global_ratio_ok(&self) -> bool {
        self.check(CACO2_CHECKS[3]).is_some_and(|c| c.passed)
    }

    pub fn verdict(&self) -> Verdict {
        if self.passed() {
            Verdict::Pass
        } else if self.failures.is_empty() && self.global_ratio_ok() {
            Verdict::Uncovered
        } else {
            Verdict::Fail
        }
    }
}

struct Caco2View<'a> {
    net: &'a Network,
    w: i64,
    a: Vec<i64>,
    o: Vec<i64>,
    configs: Vec<NeighborConfig>,
}

impl Caco2View<'_> {
    fn deficit(&self, i: usize) -> bool {
        9 * self.a[i] < 4 * self.o[i]
    }

    fn surplus(&self, i: usize) -> Q {
        q(self.a[i]) - Q::new(4 * self.o[i], 9)
    }

    /// For a two-color (or single-neighbor) cell: the neighbor whose color
    /// succeeds the cell's own, and the one whose color precedes it.
    fn successor_and_predecessor(&self, i: usize) -> (Option<usize>, Option<usize>) {
        let x = color_of(self.net.cell(i));
        let ns = self.net.neighbor_indices(i);
        let j = ns
            .iter()
            .copied()
            .find(|&j| x.precedes(color_of(self.net.cell(j))));
        let k = ns
            .iter()
            .copied()
            .find(|&k| color_of(self.net.cell(k)).precedes(x));
        (j, k)
    }

    fn two_color_like(&self, i: usize) -> bool {
        matches!(
            self.configs[i],
            NeighborConfig::StructureB { .. } | NeighborConfig::StructureA { k: 1, .. }
        )
    }

    /// Why the argument for deficit cell `i` does not apply here, if it doesn't.
    fn deficit_premise_gap(&self, i: usize) -> Option<String> {
        let net = self.net;
        let ns = net.neighbor_indices(i);
        if self.configs[i].is_degenerate() {
            return Some(format!("degenerate neighborhood {:?}", self.configs[i]));
        }
        if let Some(&j) = ns.iter().find(|&&j| self.configs[j].is_degenerate()) {
            return Some(format!(
                "neighbor {} has degenerate neighborhood {:?}",
                net.cell(j),
                self.configs[j]
            ));
        }
        let (a, w) = (self.a[i], self.w);
        let x = color_of(net.cell(i));
        if 3 * a < w {
            let partner = ns.iter().copied().find(|&j| {
                matches!(self.configs[j], NeighborConfig::StructureB { .. })
                    && color_of(net.cell(j)).precedes(x)
                    && 3 * (a + self.a[j]) == 2 * w
            });
            return match partner {
                Some(_) => None,
                None => {
                    Some("A_i < w/3 without a two-color neighbor sharing F_X to exhaustion".into())
                }
            };
        }
        match self.configs[i] {
            NeighborConfig::StructureB { .. } => {
                let (j, _) = self.successor_and_predecessor(i);
                match j {
                    Some(j) if 3 * (a + self.a[j]) >= 2 * w => None,
                    _ => Some(
                        "two-color cell whose successor neighbor did not block its overflow".into(),
                    ),
                }
            }
            NeighborConfig::StructureA { .. } => {
                if ns.iter().any(|&j| a + self.a[j] == w) {
                    None
                } else {
                    Some("same-color cell rejected without meeting a neighbor in F_Z".into())
                }
            }
            _ => None,
        }
    }

    /// Why the compensation budget argument for surplus cell `i` does not apply, if it doesn't.
    fn budget_premise_gap(&self, i: usize) -> Option<String> {
        if self.configs[i].is_degenerate() {
            return Some(format!("degenerate neighborhood {:?}", self.configs[i]));
        }
        if self.two_color_like(i) && 3 * self.a[i] > self.w {
            let (j, _) = self.successor_and_predecessor(i);
            if let Some(j) = j {
                if self.deficit(j) && 3 * (self.a[i] + self.a[j]) != 2 * self.w {
                    return Some("successor neighbor in deficit without A_i + A_j = 2w/3".into());
                }
            }
        }
        None
    }
}

/// Compensation ledger for a thirds-partition run on a triangle-free network.
pub fn caco2_certificate(trace: &RunTrace, opt: &OptimumWitness) -> Result<Caco2Certificate> {
    same_cells(trace, opt)?;
    if trace.algorithm != Algorithm::Caco2 {
        return Err(Error::Invalid(format!(
            "caco2 certificate needs a caco2 run, got {}",
            trace.algorithm
        )));
    }
    let net = &trace.network;
    if !net.is_triangle_free() {
        return Err(Error::NotTriangleFree);
    }
    let n = net.len();
    let view = Caco2View {
        net,
        w: trace.omega as i64,
        a: (0..n).map(|i| trace.accepted(i) as i64).collect(),
        o: opt.per_cell.iter().map(|&x| x as i64).collect(),
        configs: (0..n).map(|i| net.classify_index(i)).collect(),
    };
    let w = view.w;

    let mut comp: BTreeMap<(usize, usize), Q> = BTreeMap::new();
    let mut give = |from: usize, to: usize, amount: Q| {
        if !amount.is_zero() {
            *comp.entry((from, to)).or_insert_with(Q::zero) += amount;
        }
    };
    for i in (0..n).filter(|&i| !view.deficit(i)) {
        let surplus = view.surplus(i);
        let ns = net.neighbor_indices(i);
        match view.configs[i] {
            NeighborConfig::Isolated | NeighborConfig::General { .. } => {}
            NeighborConfig::StructureA { k, .. } if k >= 2 => {
                for &j in ns {
                    give(i, j, surplus / k as i64);
                }
            }
            _ => {
                let (j, k) = view.successor_and_predecessor(i);
                let k_deficit = k.filter(|&k| view.deficit(k));
                if 3 * view.a[i] > w {
                    match j.filter(|&j| view.deficit(j)) {
                        Some(j) => {
                            give(i, j, Q::new(4 * view.o[j], 9) - view.a[j]);
                            if let Some(k) = k_deficit {
                                give(i, k, Q::new(w, 9));
                            }
                        }
                        None => {
                            if let Some(k) = k_deficit {
                                give(i, k, surplus);
                            }
                        }
                    }
                } else if let Some(k) = k_deficit {
                    give(i, k, surplus);
                }
            }
        }
    }

    let received = |i: usize| {
        comp.iter()
            .filter(|((_, to), _)| *to == i)
            .map(|(_, h)| *h)
            .sum::<Q>()
    };
    let given = |i: usize| {
        comp.iter()
            .filter(|((from, _), _)| *from == i)
            .map(|(_, h)| *h)
            .sum::<Q>()
    };
    let credit: Vec<Q> = (0..n)
        .map(|i| {
            if view.deficit(i) {
                q(view.a[i]) + received(i)
            } else {
                Q::new(4 * view.o[i], 9)
            }
        })
        .collect();

    let mut uncovered = Vec::new();
    let mut failures = Vec::new();
    let mut budget_bad = Vec::new();
    for i in (0..n).filter(|&i| !view.deficit(i)) {
        let spent = Q::new(4 * view.o[i], 9) + given(i);
        if spent > q(view.a[i]) {
            budget_bad.push(i);
            let case = |reason: String| UncoveredCase {
                cell: net.cell(i),
                check: CACO2_CHECKS[0].into(),
                reason,
            };
            match view.budget_premise_gap(i) {
                Some(r) => uncovered.push(case(r)),
                None => failures.push(case(format!("spends {spent} of A = {}", view.a[i]))),
            }
        }
    }
    let mut ratio_bad = Vec::new();
    for i in 0..n {
        if q(4 * view.o[i]) > credit[i] * 9 {
            ratio_bad.push(i);
            let case = |reason: String| UncoveredCase {
                cell: net.cell(i),
                check: CACO2_CHECKS[2].into(),
                reason,
            };
            match view.deficit_premise_gap(i) {
                Some(r) => uncovered.push(case(r)),
                None => failures.push(case(format!(
                    "O = {} > 9/4 * B with B = {}",
                    view.o[i], credit[i]
                ))),
            }
        }
    }

    let first = |bad: &[usize]| bad.first().map(|&i| net.cell(i));
    let mut checks = vec![CheckResult {
        name: CACO2_CHECKS[0].into(),
        passed: budget_bad.is_empty(),
        cell: first(&budget_bad),
        detail: if budget_bad.is_empty() {
            String::new()
        } else {
            "4O_i/9 + sum_j H_ij exceeds A_i".into()
        },
    }];
    let (sum_b, sum_a): (Q, i64) = (credit.iter().sum(), view.a.iter().sum());
    checks.push(CheckResult::global(
        CACO2_CHECKS[1],
        sum_b <= q(sum_a),
        format!("sum B = {sum_b} exceeds sum A = {sum_a}"),
    ));
    checks.push(CheckResult {
        name: CACO2_CHECKS[2].into(),
        passed: ratio_bad.is_empty(),
        cell: first(&ratio_bad),
        detail: if ratio_bad.is_empty() {
            String::new()
        } else {
            "O_i > 9/4 * B_i".into()
        },
    });
    let sum_o: i64 = view.o.iter().sum();
    checks.push(CheckResult::global(
        CACO2_CHECKS[3],
        4 * sum_o <= 9 * sum_a,
        format!("OPT {sum_o} > 9/4 * ALG {sum_a}"),
    ));
    if !checks[1].passed {
        failures.push(UncoveredCase {
            cell: net.cell(0),
            check: CACO2_CHECKS[1].into(),
            reason: checks[1].detail.clone(),
        });
    }
    let flagged = (0..n)
        .filter(|&i| view.configs[i].is_degenerate())
        .map(|i| net.cell(i))
        .collect();
    Ok(Caco2Certificate {
        cells: net.cells().to_vec(),
        omega: trace.omega,
        compensation: comp,
        credit,
        checks,
        uncovered,
        flagged,
        failures,
    })
}

/// On every edge, two cells drawing from the same color range scan it from
/// opposite ends and their holdings never interleave; and whenever a cell
/// rejected, every frequency of the ranges it scans was held around it.
pub fn caco2_opposite_ends(trace: &RunTrace) -> Result<CheckResult> {
    if trace.algorithm != Algorithm::Caco2 {
        return Err(Error::Invalid(format!(
            "opposite-end check needs a caco2 run, got {}",
            trace.algorithm
        )));
    }
    let Some(partition) = trace.partition else {
        return Err(Error::Invalid("caco2 run without a partition".into()));
    };
    let net = &trace.network;
    let direction_in = |i: usize, range: crate::spectrum::FreqRange| {
        let plan = &trace.plans[i];
        if plan.primary == range {
            Some(crate::spectrum::Direction::BottomToTop)
        } else {
            plan.overflow
                .filter(|o| o.range == range)
                .map(|o| o.direction)
        }
    };
    for (i, j) in net.edges() {
        for color in crate::hexnet::Color::ALL {
            let range = partition.color_range(color);
            let held = |c: usize| -> Vec<u32> {
                trace
                    .state
                    .used_at(c)
                    .range(range.lo..=range.hi)
                    .copied()
                    .collect()
            };
            let (hi, hj) = (held(i), held(j));
            if hi.is_empty() || hj.is_empty() {
                continue;
            }
            let fail = |detail: String| CheckResult {
                name: "caco2_opposite_ends".into(),
                passed: false,
                cell: Some(net.cell(i)),
                detail,
            };
            let (di, dj) = (direction_in(i, range), direction_in(j, range));
            let (low, high) = match (di, dj) {
                (
                    Some(crate::spectrum::Direction::BottomToTop),
                    Some(crate::spectrum::Direction::TopToBottom),
                ) => (&hi, &hj),
                (
                    Some(crate::spectrum::Direction::TopToBottom),
                    Some(crate::spectrum::Direction::BottomToTop),
                ) => (&hj, &hi),
                _ => {
                    return Ok(fail(format!(
                        "{} and {} share range {range} with directions {di:?}/{dj:?}",
                        net.cell(i),
                        net.cell(j)
                    )))
                }
            };
            if low.last() >= high.first() {
                return Ok(fail(format!(
                    "{} and {} interleave in {range}",
                    net.cell(i),
                    net.cell(j)
                )));
            }
        }
    }
    let mut blocked_fail = None;
    trace.replay(|state, i, e| {
        if blocked_fail.is_none() && e.outcome == crate::online_algs::Outcome::Rejected {
            let plan = &trace.plans[i];
            let ranges = std::iter::once(plan.primary).chain(plan.overflow.map(|o| o.range));
            for r in ranges {
                if let Some(f) = (r.lo..=r.hi).find(|&f| state.is_available_at(net, i, f)) {
                    blocked_fail = Some(CheckResult {
                        name: "caco2_opposite_ends".into(),
                        passed: false,
                        cell: Some(e.cell),
                        detail: format!("request #{} rejected while {f} was free", e.index),
                    });
                }
            }
        }
    })?;
    Ok(blocked_fail
        .unwrap_or_else(|| CheckResult::global("caco2_opposite_ends", true, String::new())))
}

/// Serializable view of either certificate, for run reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub kind: String,
    pub verdict: Verdict,
    pub checks: Vec<CheckResult>,
    /// Per cell: `[q, r]`, class label, and `B_i` as `[numerator, denominator]`.
    pub credits: Vec<CreditRow>,
    /// `H_ij` as `(from, to, [numerator, denominator])`.
    pub compensation: Vec<(CellId, CellId, (i64, i64))>,
    pub uncovered: Vec<UncoveredCase>,
    pub failures: Vec<UncoveredCase>,
    pub flagged: Vec<CellId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CreditRow {
    pub cell: CellId,
    pub class: Option<CellClass>,
    pub credit: (i64, i64),
}

fn pair(x: Q) -> (i64, i64) {
    (*x.numer(), *x.denom())
}

impl From<&CacoCertificate> for CertificateSummary {
    fn from(c: &CacoCertificate) -> Self {
        CertificateSummary {
            kind: "caco".into(),
            verdict: c.verdict(),
            checks: c.checks.clone(),
            credits: c
                .cells
                .iter()
                .zip(&c.classes)
                .zip(&c.credit)
                .map(|((&cell, &class), &b)| CreditRow {
                    cell,
                    class: Some(class),
                    credit: pair(b),
                })
                .collect(),
            compensation: Vec::new(),
            uncovered: Vec::new(),
            failures: Vec::new(),
            flagged: Vec::new(),
        }
    }
}

impl From<&Caco2Certificate> for CertificateSummary {
    fn from(c: &Caco2Certificate) -> Self {
        CertificateSummary {
            kind: "caco2".into(),
            verdict: c.verdict(),
            checks: c.checks.clone(),
            credits: c
                .cells
                .iter()
                .zip(&c.credit)
                .map(|(&cell, &b)| CreditRow {
                    cell,
                    class: None,
                    credit: pair(b),
                })
                .collect(),
            compensation: c
                .compensation
                .iter()
                .map(|(&(i, j), &h)| (c.cells[i], c.cells[j], pair(h)))
                .collect(),
            uncovered: c.uncovered.clone(),
            failures: c.failures.clone(),
            flagged: c.flagged.clone(),
        }
    }
}

/// Run whichever certificate applies to the trace's algorithm.
pub fn certificate_for(
    trace: &RunTrace,
    opt: &OptimumWitness,
) -> Result<Option<CertificateSummary>> {
    match trace.algorithm {
        Algorithm::Caco | Algorithm::Partition { x: 2, y: 1 } => Ok(Some(
            CertificateSummary::from(&caco_certificate(trace, opt)?),
        )),
        Algorithm::Caco2 => Ok(Some(CertificateSummary::from(&caco2_certificate(
            trace, opt,
        )?))),
        _ => Ok(None),
    }
}
