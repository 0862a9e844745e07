//! Rigidity, flexibility and fragility of equilibria.
//!
//! Perturbations stay inside the support and keep total mass fixed, so they
//! live in the tangent space `{d : d_i = 0 off V*, Σ d_i = 0}`. At an
//! equilibrium `dᵀÃx* = λ* Σ d_i = 0`, hence
//! `π(x* + εd, x* + εd) − π(x*, x*) = ε² dᵀÃd` and the classification is the
//! sign pattern of the quadratic form restricted to that space.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::equilibrium::{verify_nash, Strategy, DEFAULT_TOL, SUPPORT_EPS};
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::search::{check_support_conditions, RegularSupport};

/// Eigenvalues within this distance of zero are treated as zero.
pub const SPECTRAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    StronglyRigid,
    WeaklyRigid,
    Fragile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Structural,
    Spectral,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEvidence {
    pub eig_min: f64,
    pub eig_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub classification: Classification,
    /// Some tangent direction leaves the population contact unchanged.
    pub flexible: bool,
    /// Flexibility witness for weakly rigid equilibria, fragility witness
    /// for fragile ones.
    pub witness: Option<Vec<f64>>,
    /// Extreme eigenvalues of the projected form; `None` when not computed
    /// or when the tangent space is trivial.
    pub spectral: Option<SpectralEvidence>,
    pub method: Method,
}

/// Orthonormal basis of the tangent space of `support` inside `R^n`
/// (Helmert contrasts). Empty for a single-node support.
pub fn tangent_basis(support: &[usize], n: usize) -> Vec<Vec<f64>> {
    let k = support.len();
    (1..k)
        .map(|j| {
            let norm = ((j * (j + 1)) as f64).sqrt();
            let mut v = vec![0.0; n];
            for &i in &support[..j] {
                v[i] = 1.0 / norm;
            }
            v[support[j]] = -(j as f64) / norm;
            v
        })
        .collect()
}

/// `dᵀ Ã d`.
pub fn quadratic_form(net: &Network, d: &[f64]) -> f64 {
    net.contact_matrix().bilinear(d, d)
}

/// Classifies a certified equilibrium from the eigenvalues of `Pᵀ Ã P`,
/// where `P` spans the tangent space of its support.
pub fn classify_spectral(net: &Network, x_star: &Strategy, tol: f64) -> Result<StabilityReport> {
    let cert = verify_nash(net, x_star, DEFAULT_TOL)?;
    if !cert.is_nash {
        return Err(Error::NotNash { eq_residual: cert.eq_residual, ineq_slack: cert.ineq_slack.unwrap_or(0.0) });
    }
    let support = cert.support;
    let n = net.n();
    let basis = tangent_basis(&support, n);
    if basis.is_empty() {
        return Ok(StabilityReport {
            classification: Classification::StronglyRigid,
            flexible: false,
            witness: None,
            spectral: None,
            method: Method::Spectral,
        });
    }

    let a = net.contact_matrix();
    let dim = basis.len();
    let applied: Vec<Vec<f64>> = basis.iter().map(|p| a.apply(p)).collect();
    let mut projected = DMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            projected[(r, c)] = basis[r].iter().zip(&applied[c]).map(|(u, v)| u * v).sum::<f64>();
        }
    }
    let eig = SymmetricEigen::new(projected);
    let values = eig.eigenvalues.as_slice();
    let (imin, &eig_min) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    let eig_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (izero, &closest) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .expect("nonempty");

    let lift = |col: usize| -> Vec<f64> {
        let mut d = vec![0.0; n];
        for (j, p) in basis.iter().enumerate() {
            let coef = eig.eigenvectors[(j, col)];
            for (di, pi) in d.iter_mut().zip(p) {
                *di += coef * pi;
            }
        }
        canonical_sign(d)
    };

    let (classification, flexible, witness) = if eig_min > tol {
        (Classification::StronglyRigid, false, None)
    } else if eig_min >= -tol {
        debug_assert!(closest.abs() <= tol);
        (Classification::WeaklyRigid, true, Some(lift(izero)))
    } else {
        // An indefinite or semidefinite-with-kernel form has isotropic
        // directions; a negative definite one does not.
        (Classification::Fragile, eig_max >= -tol, Some(lift(imin)))
    };
    Ok(StabilityReport {
        classification,
        flexible,
        witness,
        spectral: Some(SpectralEvidence { eig_min, eig_max }),
        method: Method::Spectral,
    })
}

fn canonical_sign(mut d: Vec<f64>) -> Vec<f64> {
    if let Some(first) = d.iter().find(|v| v.abs() > 1e-12) {
        if *first < 0.0 {
            d.iter_mut().for_each(|v| *v = -*v);
        }
    }
    d
}

/// Structural rules need the distancing diagonal and, for weighted networks,
/// one weight per component.
fn structural_applicable(net: &Network, support: &RegularSupport) -> Result<()> {
    if !support.regular {
        return Err(Error::StructuralNotApplicable("support is not regular".into()));
    }
    if net.diag() != 1.0 {
        return Err(Error::StructuralNotApplicable(format!("self-contact is {} rather than 1", net.diag())));
    }
    if !net.is_effectively_unweighted() {
        let w = net.weights();
        if support.components.iter().any(|c| c.iter().any(|&i| w[i] != w[c[0]])) {
            return Err(Error::StructuralNotApplicable("weights vary inside a component".into()));
        }
    }
    Ok(())
}

/// Classifies from the shape of the support alone: independent sets are
/// strongly rigid, unions of complete components weakly rigid, and any
/// non-complete component makes the equilibrium fragile.
pub fn classify_structural(net: &Network, support: &RegularSupport, x_star: &Strategy) -> Result<StabilityReport> {
    structural_applicable(net, support)?;
    let report = |classification, flexible, witness| StabilityReport {
        classification,
        flexible,
        witness,
        spectral: None,
        method: Method::Structural,
    };
    if support.r == 0 || support.nodes.len() == 1 {
        return Ok(report(Classification::StronglyRigid, false, None));
    }
    if support.all_minimal() {
        let d = flexibility_witness(net, support, x_star, None)?;
        Ok(report(Classification::WeaklyRigid, true, Some(d)))
    } else {
        let d = fragility_witness(net, support, x_star, None)?;
        Ok(report(Classification::Fragile, true, Some(d)))
    }
}

/// Moves `δ` across the first internal edge `(a, b)`: `d_a = −δ`, `d_b = δ`.
/// Default `δ` is half of `min{1 − x_b, x_a}`.
pub fn flexibility_witness(
    net: &Network,
    support: &RegularSupport,
    x_star: &Strategy,
    delta: Option<f64>,
) -> Result<Vec<f64>> {
    let mut inside = vec![false; net.n()];
    for &i in &support.nodes {
        inside[i] = true;
    }
    let (a, b) = net
        .edges()
        .iter()
        .copied()
        .find(|&(a, b)| inside[a] && inside[b])
        .ok_or_else(|| Error::NoWitness("support has no internal edge".into()))?;
    let x = x_star.as_slice();
    let delta = delta.unwrap_or(0.5 * (1.0 - x[b]).min(x[a]));
    let mut d = vec![0.0; net.n()];
    d[a] = -delta;
    d[b] = delta;
    Ok(d)
}

/// For an open triple `i – l – j` inside the support (`(i, j)` not an edge),
/// `d_i = d_j = δ`, `d_l = −2δ`. Default `δ` is half of
/// `min{1 − x_i, 1 − x_j, x_l / 2}`.
pub fn fragility_witness(
    net: &Network,
    support: &RegularSupport,
    x_star: &Strategy,
    delta: Option<f64>,
) -> Result<Vec<f64>> {
    let (i, l, j) = open_triple(net, &support.nodes)
        .ok_or_else(|| Error::NoWitness("every component is complete".into()))?;
    let x = x_star.as_slice();
    let delta = delta.unwrap_or(0.5 * (1.0 - x[i]).min(1.0 - x[j]).min(x[l] / 2.0));
    let mut d = vec![0.0; net.n()];
    d[i] = delta;
    d[j] = delta;
    d[l] = -2.0 * delta;
    Ok(d)
}

/// First `(i, l, j)` with `i < j` adjacent to `l` but not to each other, all
/// inside `nodes`, scanning `l` then `i` then `j` in ascending order.
pub fn open_triple(net: &Network, nodes: &[usize]) -> Option<(usize, usize, usize)> {
    let mut inside = vec![false; net.n()];
    for &v in nodes {
        inside[v] = true;
    }
    for &l in nodes {
        let nb: Vec<usize> = net.neighbors(l).iter().copied().filter(|&u| inside[u]).collect();
        for (p, &i) in nb.iter().enumerate() {
            for &j in &nb[p + 1..] {
                if !net.has_edge(i, j) {
                    return Some((i, l, j));
                }
            }
        }
    }
    None
}

/// `π(x* + εd, x* + εd) − π(x*, x*)`.
pub fn perturbation_probe(net: &Network, x_star: &Strategy, d: &[f64], eps: f64) -> Result<f64> {
    let n = net.n();
    if d.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: d.len() });
    }
    let x = x_star.as_slice();
    if let Some(i) = (0..n).find(|&i| d[i] != 0.0 && x[i] <= SUPPORT_EPS) {
        return Err(Error::InvalidArgument(format!("direction moves site {} outside the support", i + 1)));
    }
    let y: Vec<f64> = x.iter().zip(d).map(|(xi, di)| xi + eps * di).collect();
    if let Some(i) = (0..n).find(|&i| !(-1e-12..=1.0 + 1e-12).contains(&y[i])) {
        return Err(Error::NotOnSimplex(format!("step sends site {} to {}", i + 1, y[i])));
    }
    let a = net.contact_matrix();
    Ok(a.bilinear(&y, &y) - a.bilinear(x, x))
}

/// Support of `x` checked against the regularity degree of its first node,
/// or `None` when the support is not regular.
pub fn infer_support(net: &Network, x: &Strategy) -> Option<RegularSupport> {
    let nodes = x.support(SUPPORT_EPS);
    let first = *nodes.first()?;
    let r = net.neighbors(first).iter().filter(|u| nodes.binary_search(u).is_ok()).count();
    check_support_conditions(net, &nodes, r).ok().filter(|s| s.regular)
}

/// Runs the requested method. Structural requests fall back to the spectral
/// route when the structural rules do not apply; `Both` fails with
/// [`Error::Invariant`] if the two routes disagree.
pub fn classify(
    net: &Network,
    x_star: &Strategy,
    support: Option<&RegularSupport>,
    method: Method,
    tol: f64,
) -> Result<StabilityReport> {
    let inferred;
    let support = match support {
        Some(s) => Some(s),
        None => {
            inferred = infer_support(net, x_star);
            inferred.as_ref()
        }
    };
    let structural = support.map(|s| classify_structural(net, s, x_star));
    match method {
        Method::Spectral => classify_spectral(net, x_star, tol),
        Method::Structural => match structural {
            Some(Ok(report)) => {
                let cert = verify_nash(net, x_star, DEFAULT_TOL)?;
                if !cert.is_nash {
                    return Err(Error::NotNash {
                        eq_residual: cert.eq_residual,
                        ineq_slack: cert.ineq_slack.unwrap_or(0.0),
                    });
                }
                Ok(report)
            }
            _ => classify_spectral(net, x_star, tol),
        },
        Method::Both => {
            let spectral = classify_spectral(net, x_star, tol)?;
            match structural {
                Some(Ok(s)) => {
                    if s.classification != spectral.classification || s.flexible != spectral.flexible {
                        return Err(Error::Invariant(format!(
                            "structural {:?}/flexible={} disagrees with spectral {:?}/flexible={}",
                            s.classification, s.flexible, spectral.classification, spectral.flexible
                        )));
                    }
                    Ok(StabilityReport { spectral: spectral.spectral, method: Method::Both, ..s })
                }
                _ => Ok(spectral),
            }
        }
    }
}
