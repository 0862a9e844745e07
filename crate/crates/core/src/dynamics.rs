//! Discrete replicator dynamics for the contact-minimization game, used as an
//! independent check that certified equilibria are rest points and that
//! fragile ones can be left downhill.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equilibrium::{verify_nash_with, EquilibriumCertificate, Strategy, SUPPORT_EPS};
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::par::Exec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicatorParams {
    /// Step fraction in `(0, 1]`; `1` applies the full normalized update.
    pub dt: f64,
    pub max_steps: usize,
    /// Stop once `‖x_{t+1} − x_t‖∞` falls below this.
    pub conv_tol: f64,
    /// Keep every state; when false only the first and last are kept.
    pub record_states: bool,
}

impl Default for ReplicatorParams {
    fn default() -> Self {
        Self { dt: 1.0, max_steps: 100_000, conv_tol: 1e-10, record_states: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<Strategy>,
    /// `π(x_t, x_t)` for every step, including the start.
    pub payoffs: Vec<f64>,
    pub converged: bool,
    pub steps: usize,
}

impl Trajectory {
    pub fn last(&self) -> &Strategy {
        self.states.last().expect("trajectory holds its start state")
    }
}

/// Iterates `x_i ← x_i (C − p_i(x)) / (C − π(x, x))` (damped by `dt`), with
/// `C` at least one above the largest site contact and no smaller than the
/// largest contact-matrix entry, so fitnesses stay positive and the
/// population contact never increases.
pub fn replicator_descent(net: &Network, x0: &Strategy, params: &ReplicatorParams) -> Result<Trajectory> {
    let n = net.n();
    if x0.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: x0.len() });
    }
    if !(params.dt > 0.0 && params.dt <= 1.0) {
        return Err(Error::InvalidArgument(format!("dt must lie in (0, 1], got {}", params.dt)));
    }
    let a = net.contact_matrix();
    let entry_max = a.matrix().max();

    let mut x = x0.as_slice().to_vec();
    let mut p = a.apply(&x);
    let mut pi: f64 = x.iter().zip(&p).map(|(xi, pi)| xi * pi).sum();
    let mut states = vec![x0.clone()];
    let mut payoffs = vec![pi];
    let mut converged = false;
    let mut steps = 0;

    while steps < params.max_steps {
        let p_max = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let c = (p_max + 1.0).max(entry_max);
        let denom = c - pi;
        let mut next: Vec<f64> = x
            .iter()
            .zip(&p)
            .map(|(xi, pi_)| {
                let full = xi * (c - pi_) / denom;
                xi + params.dt * (full - xi)
            })
            .collect();
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= total);
        let change = x
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);

        x = next;
        p = a.apply(&x);
        pi = x.iter().zip(&p).map(|(xi, pi_)| xi * pi_).sum();
        steps += 1;
        payoffs.push(pi);
        if params.record_states {
            states.push(Strategy::new(x.clone())?);
        }
        if change < params.conv_tol {
            converged = true;
            break;
        }
    }
    if !params.record_states && steps > 0 {
        states.push(Strategy::new(x)?);
    }
    Ok(Trajectory { states, payoffs, converged, steps })
}

/// Certifies the final state of a converged run. Sites with mass at or
/// below `max(tol, 1e-10)` count as unselected.
pub fn converged_certificate(traj: &Trajectory, net: &Network, tol: f64) -> Result<EquilibriumCertificate> {
    if !traj.converged {
        return Err(Error::NotConverged);
    }
    verify_nash_with(net, &net.contact_matrix(), traj.last(), tol, tol.max(SUPPORT_EPS))
}

/// Uniformly distributed point in the interior of the simplex.
pub fn random_interior<R: Rng>(n: usize, rng: &mut R) -> Strategy {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    Strategy::new(raw.into_iter().map(|v| v / total).collect()).expect("normalized exponentials")
}

/// Seeded random start for run number `run`.
pub fn seeded_start(n: usize, seed: u64, run: u64) -> Strategy {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    random_interior(n, &mut rng)
}

/// Independent runs from `starts` random interior points; run `k` uses
/// stream `k` of `seed`.
pub fn multistart(
    net: &Network,
    starts: usize,
    seed: u64,
    params: &ReplicatorParams,
    exec: Exec,
) -> Result<Vec<Trajectory>> {
    let runs: Vec<u64> = (0..starts as u64).collect();
    exec.map_vec(runs, |k| replicator_descent(net, &seeded_start(net.n(), seed, k), params))
        .into_iter()
        .collect()
}
