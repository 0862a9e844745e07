//! Networks of social sites and the contact matrices built from them.
//!
//! Nodes are indexed from 0 inside the library. Every serialized surface
//! (JSON, edge lists, CLI output) uses 1-based labels; see [`crate::io`].

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// How per-node contact values enter the contact matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    #[default]
    Unweighted,
    /// `(W A + A W) / 2`: an edge carries the mean of its endpoint weights.
    Additive,
    /// `W A W`: an edge carries the product of its endpoint weights.
    Multiplicative,
}

/// Undirected simple network with a uniform self-contact coefficient and
/// optional node weights. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    diag: f64,
    weights: Vec<f64>,
    scheme: Scheme,
}

impl Network {
    /// Builds a canonical network. `edges` use 0-based indices; duplicates
    /// and reversed pairs collapse to one stored `(i, j)` with `i < j`.
    pub fn new(
        n: usize,
        edges: &[(usize, usize)],
        diag: f64,
        weights: Option<Vec<f64>>,
        scheme: Scheme,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&diag) {
            return Err(Error::DiagOutOfRange(diag));
        }
        let mut canon = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::NodeOutOfRange { node: v + 1, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a + 1));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        canon.dedup();

        let weights = match weights {
            Some(w) => {
                if w.len() != n {
                    return Err(Error::WeightCount { expected: n, got: w.len() });
                }
                if scheme != Scheme::Unweighted {
                    if let Some((i, &v)) = w.iter().enumerate().find(|(_, &v)| !(v >= 1.0)) {
                        return Err(Error::WeightBelowOne { node: i + 1, value: v });
                    }
                }
                w
            }
            None => vec![1.0; n],
        };

        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &canon {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self { n, edges: canon, adj, diag, weights, scheme })
    }

    /// Unweighted distancing network (self-contact 1).
    pub fn distancing(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, edges, 1.0, None, Scheme::Unweighted)
    }

    /// Same network with a different weighting.
    pub fn with_weights(&self, weights: Vec<f64>, scheme: Scheme) -> Result<Self> {
        Self::new(self.n, &self.edges, self.diag, Some(weights), scheme)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub fn diag(&self) -> f64 {
        self.diag
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// True when the contact matrix equals the plain adjacency matrix.
    pub fn is_effectively_unweighted(&self) -> bool {
        self.scheme == Scheme::Unweighted || self.weights.iter().all(|&w| w == 1.0)
    }

    /// Adjacency rows as bitmasks; only for `n <= 64`.
    pub fn adjacency_masks(&self) -> Option<Vec<u64>> {
        if self.n > 64 {
            return None;
        }
        Some(
            self.adj
                .iter()
                .map(|list| list.iter().fold(0u64, |m, &j| m | (1u64 << j)))
                .collect(),
        )
    }

    /// Complement network: every non-edge becomes an edge and the
    /// self-contact coefficient flips (`1 - diag`), turning a distancing game
    /// into the equivalent networking game.
    pub fn complement(&self) -> Network {
        let mut edges = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if !self.has_edge(i, j) {
                    edges.push((i, j));
                }
            }
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Network {
            n: self.n,
            edges,
            adj,
            diag: 1.0 - self.diag,
            weights: self.weights.clone(),
            scheme: self.scheme,
        }
    }

    /// Contact matrix `Ã` for the network's scheme.
    pub fn contact_matrix(&self) -> ContactMatrix {
        let n = self.n;
        let w = &self.weights;
        let entry = |i: usize, j: usize| -> f64 {
            match self.scheme {
                Scheme::Unweighted => 1.0,
                Scheme::Additive => (w[i] + w[j]) / 2.0,
                Scheme::Multiplicative => w[i] * w[j],
            }
        };
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag * entry(i, i);
        }
        for &(a, b) in &self.edges {
            let v = entry(a, b);
            m[(a, b)] = v;
            m[(b, a)] = v;
        }
        ContactMatrix(m)
    }

    /// Network induced on `subset`, together with the original index of each
    /// new node. Weights follow their nodes.
    pub fn induced(&self, subset: &[usize]) -> Result<InducedSubnetwork> {
        let nodes = normalize_subset(subset, self.n)?;
        let mut pos = vec![usize::MAX; self.n];
        for (k, &v) in nodes.iter().enumerate() {
            pos[v] = k;
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|(a, b)| pos[*a] != usize::MAX && pos[*b] != usize::MAX)
            .map(|&(a, b)| (pos[a], pos[b]))
            .collect();
        let weights = nodes.iter().map(|&v| self.weights[v]).collect();
        let network = Network::new(nodes.len(), &edges, self.diag, Some(weights), self.scheme)?;
        Ok(InducedSubnetwork { network, original: nodes })
    }

    /// Internal degree of every member of `subset`, and the number of links
    /// every non-member sends into `subset`.
    pub fn degree_profile(&self, subset: &[usize]) -> Result<DegreeProfile> {
        let nodes = normalize_subset(subset, self.n)?;
        let mut inside = vec![false; self.n];
        for &v in &nodes {
            inside[v] = true;
        }
        let mut internal = Vec::with_capacity(nodes.len());
        let mut inlinks = Vec::with_capacity(self.n - nodes.len());
        for v in 0..self.n {
            let count = self.adj[v].iter().filter(|&&u| inside[u]).count();
            if inside[v] {
                internal.push((v, count));
            } else {
                inlinks.push((v, count));
            }
        }
        Ok(DegreeProfile { internal, inlinks })
    }
}

/// Sorted, deduplicated, range-checked copy of a node subset.
pub fn normalize_subset(subset: &[usize], n: usize) -> Result<Vec<usize>> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    if let Some(&v) = subset.iter().find(|&&v| v >= n) {
        return Err(Error::NodeOutOfRange { node: v + 1, n });
    }
    let mut nodes = subset.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    Ok(nodes)
}

/// Converts 1-based labels to 0-based indices.
pub fn from_labels(labels: &[usize], n: usize) -> Result<Vec<usize>> {
    labels
        .iter()
        .map(|&l| {
            if l == 0 || l > n {
                Err(Error::NodeOutOfRange { node: l, n })
            } else {
                Ok(l - 1)
            }
        })
        .collect()
}

pub fn to_labels(nodes: &[usize]) -> Vec<usize> {
    nodes.iter().map(|&v| v + 1).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct InducedSubnetwork {
    pub network: Network,
    /// `original[k]` is the parent index of node `k`.
    pub original: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    /// `(node, degree inside the subset)` for each member.
    pub internal: Vec<(usize, usize)>,
    /// `(node, links into the subset)` for each non-member.
    pub inlinks: Vec<(usize, usize)>,
}

/// Symmetric nonnegative contact matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactMatrix(pub DMatrix<f64>);

impl ContactMatrix {
    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// `Ã y`, the contact each site sees against population `y`.
    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|i| (0..n).map(|j| self.0[(i, j)] * y[j]).sum())
            .collect()
    }

    /// `xᵀ Ã y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.n();
        let mut total = 0.0;
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            let row: f64 = (0..n).map(|j| self.0[(i, j)] * y[j]).sum();
            total += x[i] * row;
        }
        total
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..i).all(|j| self.0[(i, j)] == self.0[(j, i)]))
    }
}
