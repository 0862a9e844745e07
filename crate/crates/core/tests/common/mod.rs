//! Test-side oracles. Everything here works from raw edge lists and bitmasks
//! and never calls the library's search, construction or verification code.

#![allow(dead_code)]

use rand::Rng;

/// Dense 0/1 adjacency from 1-based label pairs.
pub fn adjacency(n: usize, labelled: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; n]; n];
    for &(i, j) in labelled {
        a[i - 1][j - 1] = true;
        a[j - 1][i - 1] = true;
    }
    a
}

pub fn mask_of(labels: &[usize]) -> u32 {
    labels.iter().fold(0, |m, &l| m | 1 << (l - 1))
}

pub fn labels_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

fn inside_degree(a: &[Vec<bool>], v: usize, mask: u32) -> usize {
    (0..a.len()).filter(|&u| mask >> u & 1 == 1 && a[v][u]).count()
}

pub fn is_r_regular(a: &[Vec<bool>], mask: u32, r: usize) -> bool {
    mask != 0 && (0..a.len()).filter(|&v| mask >> v & 1 == 1).all(|v| inside_degree(a, v, mask) == r)
}

/// Every node outside `mask` has at least `r + 1` neighbours inside.
pub fn outside_degree_ok(a: &[Vec<bool>], mask: u32, r: usize) -> bool {
    (0..a.len()).filter(|&v| mask >> v & 1 == 0).all(|v| inside_degree(a, v, mask) > r)
}

/// No nonempty r-regular induced piece can be added as new components:
/// brute force over every subset of the nodes with no link into `mask`.
pub fn is_maximal(a: &[Vec<bool>], mask: u32, r: usize) -> bool {
    let n = a.len();
    let free: Vec<usize> = (0..n)
        .filter(|&v| mask >> v & 1 == 0 && inside_degree(a, v, mask) == 0)
        .collect();
    for sub in 1u32..(1 << free.len()) {
        let piece = free
            .iter()
            .enumerate()
            .filter(|(k, _)| sub >> k & 1 == 1)
            .fold(0u32, |m, (_, &v)| m | 1 << v);
        if is_r_regular(a, piece, r) {
            return false;
        }
    }
    true
}

/// Every maximal r-regular induced subnetwork, by exhaustive scan.
pub fn brute_maximal_regular(a: &[Vec<bool>], r: usize) -> Vec<u32> {
    let n = a.len();
    (1u32..(1 << n))
        .filter(|&m| is_r_regular(a, m, r) && is_maximal(a, m, r))
        .collect()
}

/// Connected components of the subgraph induced by `mask`.
pub fn components(a: &[Vec<bool>], mask: u32) -> Vec<u32> {
    let mut left = mask;
    let mut out = Vec::new();
    while left != 0 {
        let start = left.trailing_zeros() as usize;
        let mut comp = 1u32 << start;
        let mut frontier = vec![start];
        while let Some(v) = frontier.pop() {
            for u in 0..a.len() {
                if mask >> u & 1 == 1 && a[v][u] && comp >> u & 1 == 0 {
                    comp |= 1 << u;
                    frontier.push(u);
                }
            }
        }
        left &= !comp;
        out.push(comp);
    }
    out
}

/// Contact matrix with self-contact 1 and optional additive weights.
pub fn contact(a: &[Vec<bool>], weights: Option<&[f64]>) -> Vec<Vec<f64>> {
    let n = a.len();
    let w = |i: usize| weights.map_or(1.0, |w| w[i]);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        w(i)
                    } else if a[i][j] {
                        (w(i) + w(j)) / 2.0
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

pub fn apply(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `(max |p_i − λ| on the support, min (p_i − λ) off it)`.
pub fn nash_residuals(m: &[Vec<f64>], x: &[f64]) -> (f64, f64) {
    let p = apply(m, x);
    let lambda = dot(x, &p);
    let mut eq = 0.0f64;
    let mut slack = f64::INFINITY;
    for i in 0..x.len() {
        if x[i] > 1e-10 {
            eq = eq.max((p[i] - lambda).abs());
        } else {
            slack = slack.min(p[i] - lambda);
        }
    }
    (eq, slack)
}

/// Erdős–Rényi graph as 1-based label pairs.
pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.gen_bool(p) {
                e.push((i, j));
            }
        }
    }
    e
}

/// Uniform point of the simplex.
pub fn random_simplex<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

pub fn zero_based(labelled: &[(usize, usize)]) -> Vec<(usize, usize)> {
    labelled.iter().map(|&(a, b)| (a - 1, b - 1)).collect()
}
