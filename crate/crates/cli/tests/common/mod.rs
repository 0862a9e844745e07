//! Test-side helpers: random networks, a planted regular-support generator
//! and a dense contact matrix built straight from edge lists.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use distancing::{Network, Scheme};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_distancing"))
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR")))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

/// Erdős–Rényi graph with 0-based pairs.
pub fn random_edges<R: Rng>(n: usize, p: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                e.push((i, j));
            }
        }
    }
    e
}

pub fn random_simplex<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

/// Dense contact matrix (self-contact 1, additive weighting when weighted).
pub fn dense_contact(net: &Network) -> Vec<Vec<f64>> {
    let n = net.n();
    let w = net.weights();
    let weighted = net.scheme() != Scheme::Unweighted;
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        m[i][i] = match net.scheme() {
            Scheme::Multiplicative => w[i] * w[i],
            _ if weighted => w[i],
            _ => 1.0,
        };
    }
    for &(i, j) in net.edges() {
        let v = match net.scheme() {
            Scheme::Unweighted => 1.0,
            Scheme::Additive => (w[i] + w[j]) / 2.0,
            Scheme::Multiplicative => w[i] * w[j],
        };
        m[i][j] = v;
        m[j][i] = v;
    }
    m
}

pub fn apply(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Edges of an r-regular graph on `m` nodes (circulant; `m` even when `r`
/// is odd), relabelled by a random permutation of `offset..offset + m`.
fn regular_block<R: Rng>(m: usize, r: usize, offset: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (offset..offset + m).collect();
    perm.shuffle(rng);
    let mut steps: Vec<usize> = (1..m.div_ceil(2)).collect();
    steps.shuffle(rng);
    let mut chosen: Vec<usize> = steps.into_iter().take(r / 2).collect();
    if r % 2 == 1 {
        chosen.push(m / 2);
    }
    let mut e = Vec::new();
    for i in 0..m {
        for &s in &chosen {
            let j = (i + s) % m;
            if s * 2 == m && j < i {
                continue;
            }
            e.push((perm[i], perm[j]));
        }
    }
    e
}

/// A network with a planted maximal r-regular equilibrium support.
pub struct Planted {
    pub net: Network,
    pub support: Vec<usize>,
    pub r: usize,
}

/// Components are complete `K_{r+1}` or larger circulants; every outside
/// node links to at least `r + 1` support nodes. When `weighted`, each
/// component gets one weight and outside nodes get at least the largest.
pub fn planted<R: Rng>(rng: &mut R, weighted: bool) -> Planted {
    let r = rng.gen_range(0..=3usize);
    let comps = rng.gen_range(1..=3usize);
    let mut edges = Vec::new();
    let mut sizes = Vec::new();
    let mut n = 0;
    for _ in 0..comps {
        let mut m = if r == 0 || rng.gen_bool(0.5) { r + 1 } else { rng.gen_range(r + 2..=r + 5) };
        if r % 2 == 1 && m % 2 == 1 {
            m += 1;
        }
        edges.extend(regular_block(m, r, n, rng));
        sizes.push(m);
        n += m;
    }
    let k = n;
    let outside = rng.gen_range(0..=4usize);
    for o in 0..outside {
        let v = k + o;
        let mut targets: Vec<usize> = (0..k).collect();
        targets.shuffle(rng);
        let links = rng.gen_range((r + 1).min(k)..=k);
        edges.extend(targets.into_iter().take(links).map(|t| (t, v)));
        for u in k..v {
            if rng.gen_bool(0.4) {
                edges.push((u, v));
            }
        }
    }
    n += outside;
    let mut net = Network::distancing(n, &edges).expect("planted edges valid");
    if weighted {
        let mut w = Vec::with_capacity(n);
        for &m in &sizes {
            let c = f64::from(rng.gen_range(1..=3u8));
            w.extend(std::iter::repeat_n(c, m));
        }
        w.extend((0..outside).map(|_| 3.0 + f64::from(rng.gen_range(0..=2u8))));
        net = net.with_weights(w, Scheme::Additive).expect("weights >= 1");
    }
    Planted { net, support: (0..k).collect(), r }
}
