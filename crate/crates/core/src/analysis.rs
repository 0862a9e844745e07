//! End-to-end pipeline: search supports, construct and verify equilibria,
//! classify them, and reconcile with the exhaustive oracle.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::equilibrium::{construct_equilibrium, enumerate_nash, verify_nash, DEFAULT_NASH_MAX_N};
use crate::error::{Error, Result};
use crate::graph::{Network, Scheme};
use crate::io::{CertificateJson, StabilityJson, SupportJson};
use crate::search::{
    enumerate_r_regular_supports, find_maximal_r_regular, RegularSupport, DEFAULT_ENUMERATION_MAX_N,
    DEFAULT_RESTARTS,
};
use crate::stability::{classify, Method, SPECTRAL_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisOptions {
    pub r_values: Vec<usize>,
    /// Enumerate every maximal r-regular support (n ≤ 16) and reconcile
    /// with the Nash oracle (n ≤ `oracle_max_n`).
    pub exact: bool,
    pub tol: f64,
    pub seed: u64,
    pub restarts: usize,
    pub oracle_max_n: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            r_values: vec![0],
            exact: false,
            tol: crate::equilibrium::DEFAULT_TOL,
            seed: 0,
            restarts: DEFAULT_RESTARTS,
            oracle_max_n: DEFAULT_NASH_MAX_N,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSummary {
    pub n: usize,
    pub edges: usize,
    pub scheme: Scheme,
    pub diag: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumEntry {
    pub certificate: CertificateJson,
    pub sufficient_conditions: bool,
    pub stability: StabilityJson,
    /// Lowest contact among the reported equilibria.
    pub best: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportEntry {
    pub support: SupportJson,
    pub equilibrium: Option<EquilibriumEntry>,
    /// Why no equilibrium is reported for this support.
    pub rejected: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub r: usize,
    pub lambda: f64,
    pub support: Vec<usize>,
    pub class: crate::stability::Classification,
    pub flexible: bool,
    pub best: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub equilibria: usize,
    /// Constructed equilibria that appear in the oracle list.
    pub constructed_matched: usize,
    pub constructed_total: usize,
    /// Oracle equilibria no construction produced.
    pub oracle_only: usize,
    pub singular_supports: u64,
    pub inconsistent_supports: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub network: NetworkSummary,
    pub r_values: Vec<usize>,
    pub mode: String,
    pub supports: Vec<SupportEntry>,
    /// r values for which no support was found.
    pub not_found: Vec<usize>,
    /// Certified equilibria, ascending by contact.
    pub summary: Vec<SummaryRow>,
    pub oracle: Option<OracleSummary>,
}

pub fn analyze(net: &Network, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let n = net.n();
    if let Some(&r) = opts.r_values.iter().find(|&&r| r >= n) {
        return Err(Error::InvalidArgument(format!("r = {r} is infeasible on {n} nodes")));
    }
    let exact = opts.exact && n <= DEFAULT_ENUMERATION_MAX_N;

    let mut supports: Vec<(usize, RegularSupport)> = Vec::new();
    let mut not_found = Vec::new();
    for &r in &opts.r_values {
        let found = if exact {
            enumerate_r_regular_supports(net, r, DEFAULT_ENUMERATION_MAX_N)?
        } else {
            find_maximal_r_regular(net, r, opts.seed, opts.restarts).into_iter().collect()
        };
        if found.is_empty() {
            not_found.push(r);
        }
        supports.extend(found.into_iter().map(|s| (r, s)));
    }

    let mut entries = Vec::with_capacity(supports.len());
    let mut constructed = Vec::new();
    for (_, support) in &supports {
        let mut entry = SupportEntry { support: SupportJson::from(support), equilibrium: None, rejected: None };
        match construct_equilibrium(net, support) {
            Err(e) => entry.rejected = Some(e.to_string()),
            Ok(c) => {
                let cert = verify_nash(net, &c.strategy, opts.tol)?;
                if !cert.is_nash {
                    entry.rejected = Some(format!(
                        "constructed strategy fails verification (eq_residual {:e}, ineq_slack {:e})",
                        cert.eq_residual,
                        cert.ineq_slack.unwrap_or(0.0)
                    ));
                } else {
                    let report = classify(net, &c.strategy, Some(support), Method::Both, SPECTRAL_TOL)?;
                    constructed.push(c.strategy.clone());
                    entry.equilibrium = Some(EquilibriumEntry {
                        certificate: CertificateJson::from(&cert),
                        sufficient_conditions: c.sufficient_conditions,
                        stability: StabilityJson::from(&report),
                        best: false,
                    });
                }
            }
        }
        entries.push(entry);
    }

    let best_lambda = entries
        .iter()
        .filter_map(|e| e.equilibrium.as_ref().map(|q| q.certificate.lambda))
        .fold(f64::INFINITY, f64::min);
    for entry in &mut entries {
        if let Some(eq) = entry.equilibrium.as_mut() {
            eq.best = (eq.certificate.lambda - best_lambda).abs() <= opts.tol;
        }
    }

    let mut summary: Vec<SummaryRow> = entries
        .iter()
        .filter_map(|e| {
            e.equilibrium.as_ref().map(|q| SummaryRow {
                r: e.support.r,
                lambda: q.certificate.lambda,
                support: e.support.nodes.clone(),
                class: q.stability.class,
                flexible: q.stability.flexible,
                best: q.best,
            })
        })
        .collect();
    summary.sort_by(|a, b| {
        a.lambda
            .total_cmp(&b.lambda)
            .then(a.r.cmp(&b.r))
            .then_with(|| a.support.cmp(&b.support))
    });

    let oracle = if opts.exact && n <= opts.oracle_max_n {
        let all = enumerate_nash(net, opts.tol, opts.oracle_max_n)?;
        let matches = |x: &crate::equilibrium::Strategy| {
            all.equilibria.iter().any(|c| c.strategy.max_distance(x) < 1e-9)
        };
        let constructed_matched = constructed.iter().filter(|x| matches(x)).count();
        let oracle_only = all
            .equilibria
            .iter()
            .filter(|c| !constructed.iter().any(|x| x.max_distance(&c.strategy) < 1e-9))
            .count();
        Some(OracleSummary {
            equilibria: all.equilibria.len(),
            constructed_matched,
            constructed_total: constructed.len(),
            oracle_only,
            singular_supports: all.singular,
            inconsistent_supports: all.inconsistent,
        })
    } else {
        None
    };

    Ok(AnalysisReport {
        network: NetworkSummary { n, edges: net.edges().len(), scheme: net.scheme(), diag: net.diag() },
        r_values: opts.r_values.clone(),
        mode: if exact { "exact" } else { "heuristic" }.to_string(),
        supports: entries,
        not_found,
        summary,
        oracle,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

pub fn emit_report(report: &AnalysisReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => render_text(report),
    }
}

fn render_text(report: &AnalysisReport) -> String {
    let mut out = String::new();
    let net = &report.network;
    let _ = writeln!(
        out,
        "network: n={} edges={} scheme={} diag={} ({} search)",
        net.n,
        net.edges,
        match net.scheme {
            Scheme::Unweighted => "unweighted",
            Scheme::Additive => "additive",
            Scheme::Multiplicative => "multiplicative",
        },
        net.diag,
        report.mode
    );
    for r in &report.not_found {
        let _ = writeln!(out, "no supports found for r={r}");
    }
    let rejected = report.supports.iter().filter(|s| s.rejected.is_some()).count();
    let _ = writeln!(
        out,
        "supports: {} examined, {} certified, {} rejected",
        report.supports.len(),
        report.summary.len(),
        rejected
    );
    if !report.summary.is_empty() {
        let _ = writeln!(out, "{:>3}  {:>12}  {:<14}  {:<8}  support", "r", "lambda", "class", "flexible");
        for row in &report.summary {
            let class = match row.class {
                crate::stability::Classification::StronglyRigid => "strongly_rigid",
                crate::stability::Classification::WeaklyRigid => "weakly_rigid",
                crate::stability::Classification::Fragile => "fragile",
            };
            let _ = writeln!(
                out,
                "{:>3}  {:>12.10}  {:<14}  {:<8}  {:?}{}",
                row.r,
                row.lambda,
                class,
                row.flexible,
                row.support,
                if row.best { "  *best" } else { "" }
            );
        }
    }
    if let Some(o) = &report.oracle {
        let _ = writeln!(
            out,
            "oracle: {} equilibria; {}/{} constructed matched; {} found only by the oracle",
            o.equilibria, o.constructed_matched, o.constructed_total, o.oracle_only
        );
    }
    out
}

/// Supports listed in the report, as 1-based label sets.
pub fn certified_supports(report: &AnalysisReport) -> Vec<Vec<usize>> {
    report.summary.iter().map(|r| r.support.clone()).collect()
}
