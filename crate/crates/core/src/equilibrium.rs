//! Payoffs, constructive equilibria, Nash verification, and the exhaustive
//! support-enumeration oracle.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::{ContactMatrix, Network, Scheme};
use crate::par::Exec;
use crate::search::{mask_nodes, RegularSupport};

/// Entries above this count as selected sites.
pub const SUPPORT_EPS: f64 = 1e-10;
/// Default residual tolerance for certificates.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Accepted deviation of a strategy's total mass from 1.
pub const SIMPLEX_TOL: f64 = 1e-9;
/// Strategies closer than this in max-norm are the same equilibrium.
pub const DEDUP_TOL: f64 = 1e-8;
pub const DEFAULT_NASH_MAX_N: usize = 14;

/// A point on the probability simplex over the network's sites.
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy(Vec<f64>);

impl Strategy {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = x.iter().enumerate().find(|(_, v)| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::NotOnSimplex(format!("entry {} is {v}", i + 1)));
        }
        let sum: f64 = x.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::NotOnSimplex(format!("entries sum to {sum}")));
        }
        Ok(Self(x))
    }

    /// Uniform `1/k` on `support`, zero elsewhere.
    pub fn uniform_on(n: usize, support: &[usize]) -> Self {
        let mut x = vec![0.0; n];
        let share = 1.0 / support.len() as f64;
        for &i in support {
            x[i] = share;
        }
        Self(x)
    }

    pub fn vertex(n: usize, i: usize) -> Self {
        let mut x = vec![0.0; n];
        x[i] = 1.0;
        Self(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Indices with `x_i > eps`.
    pub fn support(&self, eps: f64) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > eps).collect()
    }

    pub fn max_distance(&self, other: &Strategy) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn check_len(net: &Network, len: usize) -> Result<()> {
    if len != net.n() {
        return Err(Error::LengthMismatch { expected: net.n(), got: len });
    }
    Ok(())
}

/// `π(x, y) = xᵀ Ã y`.
pub fn payoff(net: &Network, x: &Strategy, y: &Strategy) -> Result<f64> {
    check_len(net, x.len())?;
    check_len(net, y.len())?;
    Ok(net.contact_matrix().bilinear(x.as_slice(), y.as_slice()))
}

/// `p(y) = Ã y`: the contact an individual meets at each site.
pub fn site_contacts(net: &Network, y: &Strategy) -> Result<Vec<f64>> {
    check_len(net, y.len())?;
    Ok(net.contact_matrix().apply(y.as_slice()))
}

/// Outcome of a Nash check.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumCertificate {
    pub strategy: Strategy,
    /// `π(x, x)`.
    pub lambda_star: f64,
    pub support: Vec<usize>,
    /// `max |p_i(x) − λ*|` over the support.
    pub eq_residual: f64,
    /// `min (p_i(x) − λ*)` over unselected sites; `None` when every site is
    /// selected.
    pub ineq_slack: Option<f64>,
    pub is_nash: bool,
    pub tol: f64,
}

pub fn verify_nash(net: &Network, x: &Strategy, tol: f64) -> Result<EquilibriumCertificate> {
    verify_nash_with(net, &net.contact_matrix(), x, tol, SUPPORT_EPS)
}

/// Nash check with an explicit contact matrix and support threshold.
pub fn verify_nash_with(
    net: &Network,
    a: &ContactMatrix,
    x: &Strategy,
    tol: f64,
    support_eps: f64,
) -> Result<EquilibriumCertificate> {
    check_len(net, x.len())?;
    let p = a.apply(x.as_slice());
    let lambda_star: f64 = x.as_slice().iter().zip(&p).map(|(xi, pi)| xi * pi).sum();
    let support = x.support(support_eps);
    let mut selected = vec![false; x.len()];
    for &i in &support {
        selected[i] = true;
    }
    let eq_residual = support
        .iter()
        .map(|&i| (p[i] - lambda_star).abs())
        .fold(0.0, f64::max);
    let ineq_slack = (0..x.len())
        .filter(|&i| !selected[i])
        .map(|i| p[i] - lambda_star)
        .reduce(f64::min);
    let is_nash = eq_residual <= tol && ineq_slack.is_none_or(|s| s >= -tol);
    Ok(EquilibriumCertificate {
        strategy: x.clone(),
        lambda_star,
        support,
        eq_residual,
        ineq_slack,
        is_nash,
        tol,
    })
}

/// A strategy built from a support by one of the closed-form constructions.
#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub strategy: Strategy,
    pub lambda_star: f64,
    /// The construction's sufficient outside-node condition held. When false
    /// the strategy still satisfies the equality conditions, but only
    /// [`verify_nash`] can decide whether it is an equilibrium.
    pub sufficient_conditions: bool,
}

/// Uniform strategy `1/k` on a maximal r-regular support of an unweighted
/// network, with `λ* = (r + α) / k` (`(r + 1) / k` for distancing).
pub fn construct_uniform_equilibrium(net: &Network, support: &RegularSupport) -> Result<Construction> {
    if let Some(flag) = support.failed_condition() {
        return Err(Error::Precondition(format!("{flag} is false")));
    }
    if !net.is_effectively_unweighted() {
        return Err(Error::Precondition(
            "network carries non-unit weights; use the weighted construction".into(),
        ));
    }
    let k = support.nodes.len() as f64;
    Ok(Construction {
        strategy: Strategy::uniform_on(net.n(), &support.nodes),
        lambda_star: (support.r as f64 + net.diag()) / k,
        sufficient_conditions: true,
    })
}

/// Inverse-weight strategy on a maximal r-regular support whose components
/// each carry a single weight `w'_k`.
///
/// With `f(w) = w` (additive) or `f(w) = w²` (multiplicative) and
/// `1 / w̄ = Σ_k m_k / f(w'_k)`, every node of component `k` gets
/// `w̄ / f(w'_k)` and `λ* = (r + α) w̄`. For `r = 0` components are single
/// nodes, so arbitrary per-node weights are allowed.
pub fn construct_weighted_equilibrium(net: &Network, support: &RegularSupport) -> Result<Construction> {
    if net.scheme() == Scheme::Unweighted {
        return Err(Error::Precondition("network scheme is unweighted".into()));
    }
    if !support.regular {
        return Err(Error::Precondition("regular is false".into()));
    }
    if !support.maximal_ok {
        return Err(Error::Precondition("maximal_ok is false".into()));
    }
    let w = net.weights();
    let f = |v: f64| match net.scheme() {
        Scheme::Multiplicative => v * v,
        _ => v,
    };
    let mut component_weight = Vec::with_capacity(support.components.len());
    for comp in &support.components {
        let w0 = w[comp[0]];
        if comp.iter().any(|&i| w[i] != w0) {
            return Err(Error::Precondition(format!(
                "weights differ inside component {:?}",
                crate::graph::to_labels(comp)
            )));
        }
        component_weight.push(w0);
    }
    let inv_sum: f64 = support
        .components
        .iter()
        .zip(&component_weight)
        .map(|(c, &wk)| c.len() as f64 / f(wk))
        .sum();
    let w_bar = 1.0 / inv_sum;

    let mut x = vec![0.0; net.n()];
    for (comp, &wk) in support.components.iter().zip(&component_weight) {
        for &i in comp {
            x[i] = w_bar / f(wk);
        }
    }

    let mut inside = vec![false; net.n()];
    for &i in &support.nodes {
        inside[i] = true;
    }
    let r = support.r;
    let sufficient_conditions = (0..net.n()).filter(|&i| !inside[i]).all(|i| {
        net.neighbors(i)
            .iter()
            .filter(|&&j| inside[j] && w[i] >= w[j])
            .count()
            > r
    });

    Ok(Construction {
        strategy: Strategy(x),
        lambda_star: (r as f64 + net.diag()) * w_bar,
        sufficient_conditions,
    })
}

/// Picks the construction matching the network's weighting.
pub fn construct_equilibrium(net: &Network, support: &RegularSupport) -> Result<Construction> {
    if net.is_effectively_unweighted() {
        construct_uniform_equilibrium(net, support)
    } else {
        construct_weighted_equilibrium(net, support)
    }
}

/// All support-wise equilibria found by the exhaustive oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct NashEnumeration {
    /// Sorted by support, then lexicographically by strategy.
    pub equilibria: Vec<EquilibriumCertificate>,
    pub supports_checked: u64,
    /// Supports whose linear system was rank-deficient (solved by minimum
    /// norm least squares).
    pub singular: u64,
    /// Supports whose system had no solution within tolerance.
    pub inconsistent: u64,
}

/// For every support `S`, solves `Ã_S x_S = λ 1, Σ x_S = 1` by least squares
/// and keeps strictly positive solutions that pass [`verify_nash`].
pub fn enumerate_nash(net: &Network, tol: f64, max_n: usize) -> Result<NashEnumeration> {
    enumerate_nash_with(net, tol, max_n, Exec::Auto)
}

enum SupportOutcome {
    Equilibrium(Box<EquilibriumCertificate>, bool),
    Rejected { singular: bool, inconsistent: bool },
}

pub fn enumerate_nash_with(net: &Network, tol: f64, max_n: usize, exec: Exec) -> Result<NashEnumeration> {
    let n = net.n();
    if n > max_n || n > 30 {
        return Err(Error::TooLarge { n, max_n: max_n.min(30) });
    }
    let a = net.contact_matrix();
    let total = (1u64 << n) - 1;

    let outcomes = exec.filter_map_range(total, |idx| Some(solve_support(net, &a, idx + 1, tol)));

    let mut equilibria = Vec::new();
    let mut singular = 0;
    let mut inconsistent = 0;
    for outcome in outcomes {
        match outcome {
            SupportOutcome::Equilibrium(cert, was_singular) => {
                singular += was_singular as u64;
                equilibria.push(*cert);
            }
            SupportOutcome::Rejected { singular: s, inconsistent: i } => {
                singular += s as u64;
                inconsistent += i as u64;
            }
        }
    }
    equilibria.sort_by(|a, b| {
        a.support.cmp(&b.support).then_with(|| {
            a.strategy
                .as_slice()
                .partial_cmp(b.strategy.as_slice())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    let mut unique: Vec<EquilibriumCertificate> = Vec::with_capacity(equilibria.len());
    for cert in equilibria {
        if !unique.iter().any(|u| u.strategy.max_distance(&cert.strategy) < DEDUP_TOL) {
            unique.push(cert);
        }
    }
    Ok(NashEnumeration { equilibria: unique, supports_checked: total, singular, inconsistent })
}

fn solve_support(net: &Network, a: &ContactMatrix, mask: u64, tol: f64) -> SupportOutcome {
    let nodes = mask_nodes(mask);
    let k = nodes.len();
    let mut m = DMatrix::zeros(k + 1, k + 1);
    for (r, &i) in nodes.iter().enumerate() {
        for (c, &j) in nodes.iter().enumerate() {
            m[(r, c)] = a.get(i, j);
        }
        m[(r, k)] = -1.0;
        m[(k, r)] = 1.0;
    }
    let mut rhs = DVector::zeros(k + 1);
    rhs[k] = 1.0;

    let svd = m.clone().svd(true, true);
    let s_max = svd.singular_values.max();
    let cutoff = 1e-10 * s_max.max(1.0);
    let singular = svd.singular_values.iter().any(|&s| s <= cutoff);
    let z = match svd.solve(&rhs, cutoff) {
        Ok(z) => z,
        Err(_) => return SupportOutcome::Rejected { singular, inconsistent: true },
    };
    let residual = (&m * &z - &rhs).amax();
    if residual > tol {
        return SupportOutcome::Rejected { singular, inconsistent: true };
    }
    if (0..k).any(|r| z[r] <= SUPPORT_EPS) {
        return SupportOutcome::Rejected { singular, inconsistent: false };
    }
    let mut x = vec![0.0; net.n()];
    for (r, &i) in nodes.iter().enumerate() {
        x[i] = z[r];
    }
    let strategy = Strategy(x);
    match verify_nash_with(net, a, &strategy, tol, SUPPORT_EPS) {
        Ok(cert) if cert.is_nash && cert.support == nodes => {
            SupportOutcome::Equilibrium(Box::new(cert), singular)
        }
        _ => SupportOutcome::Rejected { singular, inconsistent: false },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::check_support_conditions;

    fn complete(n: usize, diag: f64) -> Network {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Network::new(n, &edges, diag, None, Scheme::Unweighted).unwrap()
    }

    #[test]
    fn strategy_validation() {
        assert!(Strategy::new(vec![0.5, 0.5]).is_ok());
        assert!(Strategy::new(vec![0.5, 0.6]).is_err());
        assert!(Strategy::new(vec![1.5, -0.5]).is_err());
        assert!(Strategy::new(vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn payoff_examples() {
        let k3 = complete(3, 1.0);
        let u = Strategy::uniform_on(3, &[0, 1, 2]);
        assert!((payoff(&k3, &u, &u).unwrap() - 1.0).abs() < 1e-15);

        let two = Network::distancing(2, &[]).unwrap();
        let e1 = Strategy::vertex(2, 0);
        let e2 = Strategy::vertex(2, 1);
        assert_eq!(payoff(&two, &e1, &e2).unwrap(), 0.0);
        assert!(matches!(payoff(&k3, &e1, &e2), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn site_contacts_examples() {
        let empty = Network::distancing(4, &[]).unwrap();
        let u = Strategy::uniform_on(4, &[0, 1, 2, 3]);
        assert!(site_contacts(&empty, &u).unwrap().iter().all(|&p| (p - 0.25).abs() < 1e-15));

        let path = Network::distancing(3, &[(0, 1), (1, 2)]).unwrap();
        let col = site_contacts(&path, &Strategy::vertex(3, 1)).unwrap();
        let a = path.contact_matrix();
        assert_eq!(col, vec![a.get(0, 1), a.get(1, 1), a.get(2, 1)]);
    }

    #[test]
    fn verify_examples() {
        let k4 = complete(4, 1.0);
        let cert = verify_nash(&k4, &Strategy::uniform_on(4, &[0, 1, 2, 3]), DEFAULT_TOL).unwrap();
        assert!(cert.is_nash);
        assert!((cert.lambda_star - 1.0).abs() < 1e-15);
        assert_eq!(cert.ineq_slack, None);

        // Non-maximal independent set {1} in an edgeless pair.
        let two = Network::distancing(2, &[]).unwrap();
        let cert = verify_nash(&two, &Strategy::vertex(2, 0), DEFAULT_TOL).unwrap();
        assert!(!cert.is_nash);
        assert_eq!(cert.ineq_slack, Some(-1.0));
    }

    #[test]
    fn uniform_construction_refuses_failed_flags() {
        let net = Network::distancing(4, &[(0, 1), (1, 2)]).unwrap();
        let s = check_support_conditions(&net, &[0, 2], 0).unwrap();
        let err = construct_uniform_equilibrium(&net, &s).unwrap_err();
        assert_eq!(err, Error::Precondition("maximal_ok is false".into()));
    }

    #[test]
    fn weighted_construction_with_unit_weights_is_uniform() {
        let net = Network::distancing(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let s = check_support_conditions(&net, &[0, 1, 2, 3, 4], 2).unwrap();
        let plain = construct_uniform_equilibrium(&net, &s).unwrap();
        for scheme in [Scheme::Additive, Scheme::Multiplicative] {
            let wnet = net.with_weights(vec![1.0; 5], scheme).unwrap();
            let weighted = construct_weighted_equilibrium(&wnet, &s).unwrap();
            assert!(weighted.strategy.max_distance(&plain.strategy) < 1e-15);
            assert!((weighted.lambda_star - plain.lambda_star).abs() < 1e-15);
        }
    }

    #[test]
    fn weighted_construction_refuses_mixed_component_weights() {
        let net = Network::distancing(2, &[(0, 1)])
            .unwrap()
            .with_weights(vec![2.0, 1.0], Scheme::Additive)
            .unwrap();
        let s = check_support_conditions(&net, &[0, 1], 1).unwrap();
        assert!(matches!(
            construct_weighted_equilibrium(&net, &s),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn k2_has_three_equilibria() {
        // e_1: p_2 = Ã_21 = 1 = λ*, so both vertices and the midpoint certify.
        let k2 = complete(2, 1.0);
        let all = enumerate_nash(&k2, DEFAULT_TOL, 14).unwrap();
        let xs: Vec<Vec<f64>> = all.equilibria.iter().map(|c| c.strategy.as_slice().to_vec()).collect();
        assert_eq!(xs.len(), 3);
        assert_eq!(all.equilibria[0].support, vec![0]);
        assert_eq!(all.equilibria[1].support, vec![0, 1]);
        assert_eq!(all.equilibria[2].support, vec![1]);
        assert!((xs[1][0] - 0.5).abs() < 1e-12 && (xs[1][1] - 0.5).abs() < 1e-12);
        assert_eq!(all.singular, 1);
    }

    #[test]
    fn edgeless_network_has_unique_uniform_equilibrium() {
        for n in 1..=6 {
            let net = Network::distancing(n, &[]).unwrap();
            let all = enumerate_nash(&net, DEFAULT_TOL, 14).unwrap();
            assert_eq!(all.equilibria.len(), 1);
            let cert = &all.equilibria[0];
            assert_eq!(cert.support.len(), n);
            assert!((cert.lambda_star - 1.0 / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn enumeration_refuses_large_networks() {
        let net = Network::distancing(15, &[]).unwrap();
        assert!(matches!(enumerate_nash(&net, DEFAULT_TOL, 14), Err(Error::TooLarge { .. })));
    }
}
