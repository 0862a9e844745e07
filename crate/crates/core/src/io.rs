//! File formats. Every node label here is 1-based.

use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::equilibrium::{Construction, EquilibriumCertificate, Strategy};
use crate::error::{Error, Result};
use crate::graph::{from_labels, to_labels, Network, Scheme};
use crate::search::{Mode, RegularSupport};
use crate::stability::{Classification, Method, StabilityReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default = "unit")]
    pub diag: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default)]
    pub scheme: Scheme,
}

fn unit() -> f64 {
    1.0
}

impl NetworkFile {
    pub fn from_network(net: &Network) -> Self {
        let weights = if net.weights().iter().all(|&w| w == 1.0) && net.scheme() == Scheme::Unweighted {
            None
        } else {
            Some(net.weights().to_vec())
        };
        Self {
            n: net.n(),
            edges: net.edges().iter().map(|&(a, b)| [a + 1, b + 1]).collect(),
            diag: net.diag(),
            weights,
            scheme: net.scheme(),
        }
    }

    pub fn into_network(self) -> Result<Network> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for (k, [a, b]) in self.edges.into_iter().enumerate() {
            for v in [a, b] {
                if v == 0 || v > self.n {
                    return Err(Error::Parse {
                        location: format!("edges[{k}]"),
                        message: format!("node {v} outside 1..={}", self.n),
                    });
                }
            }
            edges.push((a - 1, b - 1));
        }
        Network::new(self.n, &edges, self.diag, self.weights, self.scheme)
    }
}

/// Weight and scheme settings applied to plain edge lists.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EdgeListOptions {
    pub diag: Option<f64>,
    pub weights: Option<Vec<f64>>,
    pub scheme: Option<Scheme>,
}

/// Parses either a JSON network or an edge list (`n` on the first line, then
/// one `i j` pair per line; `#` starts a comment). Options override the
/// corresponding JSON fields when given.
pub fn parse_network(text: &str, opts: &EdgeListOptions) -> Result<Network> {
    let mut file = if text.trim_start().starts_with('{') {
        serde_json::from_str::<NetworkFile>(text).map_err(|e| Error::Parse {
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?
    } else {
        parse_edge_list(text)?
    };
    if let Some(d) = opts.diag {
        file.diag = d;
    }
    if let Some(w) = &opts.weights {
        file.weights = Some(w.clone());
    }
    if let Some(s) = opts.scheme {
        file.scheme = s;
    }
    file.into_network()
}

fn parse_edge_list(text: &str) -> Result<NetworkFile> {
    let mut n = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let location = format!("line {}", idx + 1);
        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str, what: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                location: location.clone(),
                message: format!("{what} `{s}` is not a nonnegative integer"),
            })
        };
        match (n, fields.as_slice()) {
            (None, [count]) => n = Some(num(count, "node count")?),
            (None, _) => {
                return Err(Error::Parse { location, message: "first line must hold the node count".into() })
            }
            (Some(_), [a, b]) => edges.push([num(a, "endpoint")?, num(b, "endpoint")?]),
            (Some(_), _) => {
                return Err(Error::Parse { location, message: "expected two endpoints".into() })
            }
        }
    }
    let n = n.ok_or_else(|| Error::Parse { location: "line 1".into(), message: "empty input".into() })?;
    Ok(NetworkFile { n, edges, diag: 1.0, weights: None, scheme: Scheme::Unweighted })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyFile {
    pub x: Vec<f64>,
}

impl StrategyFile {
    pub fn parse(text: &str) -> Result<Strategy> {
        let f: StrategyFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        Strategy::new(f.x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub x: Vec<f64>,
    pub lambda: f64,
    pub support: Vec<usize>,
    pub eq_residual: f64,
    pub ineq_slack: Option<f64>,
    pub is_nash: bool,
}

impl From<&EquilibriumCertificate> for CertificateJson {
    fn from(c: &EquilibriumCertificate) -> Self {
        Self {
            x: c.strategy.as_slice().to_vec(),
            lambda: c.lambda_star,
            support: to_labels(&c.support),
            eq_residual: c.eq_residual,
            ineq_slack: c.ineq_slack,
            is_nash: c.is_nash,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportJson {
    pub nodes: Vec<usize>,
    pub r: usize,
    pub components: Vec<Vec<usize>>,
    pub minimal: Vec<bool>,
    pub outside_ok: bool,
    pub maximal_ok: bool,
    pub mode: Mode,
}

impl From<&RegularSupport> for SupportJson {
    fn from(s: &RegularSupport) -> Self {
        Self {
            nodes: to_labels(&s.nodes),
            r: s.r,
            components: s.components.iter().map(|c| to_labels(c)).collect(),
            minimal: s.minimal.clone(),
            outside_ok: s.outside_ok,
            maximal_ok: s.maximal_ok,
            mode: s.mode,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionJson {
    pub x: Vec<f64>,
    pub lambda: f64,
    pub support: Vec<usize>,
    pub r: usize,
    pub sufficient_conditions: bool,
    /// Outcome of the Nash check on the constructed strategy.
    pub is_nash: bool,
}

impl ConstructionJson {
    pub fn new(c: &Construction, support: &RegularSupport, is_nash: bool) -> Self {
        Self {
            x: c.strategy.as_slice().to_vec(),
            lambda: c.lambda_star,
            support: to_labels(&support.nodes),
            r: support.r,
            sufficient_conditions: c.sufficient_conditions,
            is_nash,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityJson {
    pub class: Classification,
    pub flexible: bool,
    pub witness: Option<Vec<f64>>,
    pub eig_min: Option<f64>,
    pub eig_max: Option<f64>,
    pub method: Method,
}

impl From<&StabilityReport> for StabilityJson {
    fn from(r: &StabilityReport) -> Self {
        Self {
            class: r.classification,
            flexible: r.flexible,
            witness: r.witness.clone(),
            eig_min: r.spectral.map(|s| s.eig_min),
            eig_max: r.spectral.map(|s| s.eig_max),
            method: r.method,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryJson {
    pub steps: usize,
    pub converged: bool,
    pub initial_payoff: f64,
    pub final_payoff: f64,
    pub x0: Vec<f64>,
    pub x_final: Vec<f64>,
    pub certificate: Option<CertificateJson>,
}

impl TrajectoryJson {
    pub fn new(t: &Trajectory, certificate: Option<&EquilibriumCertificate>) -> Self {
        Self {
            steps: t.steps,
            converged: t.converged,
            initial_payoff: t.payoffs[0],
            final_payoff: *t.payoffs.last().expect("start payoff"),
            x0: t.states[0].as_slice().to_vec(),
            x_final: t.last().as_slice().to_vec(),
            certificate: certificate.map(CertificateJson::from),
        }
    }
}

/// `step,payoff` rows for external plotting.
pub fn payoff_csv(t: &Trajectory) -> String {
    let mut out = String::from("step,payoff\n");
    for (k, p) in t.payoffs.iter().enumerate() {
        out.push_str(&format!("{k},{p:.17e}\n"));
    }
    out
}

/// Parses `"6,7,8"` into 0-based node indices.
pub fn parse_label_list(text: &str, n: usize) -> Result<Vec<usize>> {
    let labels = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                location: "node list".into(),
                message: format!("`{s}` is not a node label"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    from_labels(&labels, n)
}
