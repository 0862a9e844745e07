//! Reference networks for the three worked examples (town centres with
//! residential areas). Edge lists are written with 1-based labels and are
//! mirrored by the JSON files in the repository's `fixtures/` directory,
//! where a sidecar documents the properties each graph was built to satisfy.

use crate::graph::{Network, Scheme};

fn from_labelled(n: usize, edges: &[(usize, usize)]) -> Network {
    let zero: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
    Network::distancing(n, &zero).expect("fixture edges are valid")
}

/// Ten sites: centres 1..5 are adjacent except 3–5; residential sites 6..10
/// are mutually independent. `{3,5,9}` and `{6,...,10}` are maximal
/// independent sets.
pub const INDEPENDENT_SETS_EDGES: &[(usize, usize)] = &[
    (1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (3, 4), (4, 5),
    (1, 6), (3, 6),
    (2, 7), (5, 7),
    (3, 8), (4, 8),
    (1, 9), (2, 9), (4, 9),
    (4, 10), (5, 10),
];

/// Ten-site 3-regular network: cycle 1-2-3-4-5, cycle 6-9-7-10-8, and the
/// spokes 1-6, 2-7, 3-8, 4-9, 5-10.
pub const REGULAR_EDGES: &[(usize, usize)] = &[
    (1, 2), (2, 3), (3, 4), (4, 5), (1, 5),
    (1, 6), (2, 7), (3, 8), (4, 9), (5, 10),
    (6, 8), (6, 9), (7, 9), (7, 10), (8, 10),
];

/// Sixteen sites: centres 1..4 form K4; residential triangles {5,9,10},
/// {6,11,12}, {7,13,14}, {8,15,16}; each centre reaches the inner site of
/// one area and one outer site in each of two other areas.
pub const RIGIDITY_EDGES: &[(usize, usize)] = &[
    (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4),
    (5, 9), (5, 10), (9, 10),
    (6, 11), (6, 12), (11, 12),
    (7, 13), (7, 14), (13, 14),
    (8, 15), (8, 16), (15, 16),
    (1, 5), (1, 11), (1, 14),
    (2, 6), (2, 13), (2, 16),
    (3, 7), (3, 15), (3, 10),
    (4, 8), (4, 9), (4, 12),
];

/// Network with two maximal independent sets of different quality.
pub fn independent_sets() -> Network {
    from_labelled(10, INDEPENDENT_SETS_EDGES)
}

/// 3-regular network with 2-regular, 1-regular and independent supports.
pub fn regular() -> Network {
    from_labelled(10, REGULAR_EDGES)
}

/// Network with strongly and weakly rigid equilibria of equal contact.
pub fn rigidity() -> Network {
    from_labelled(16, RIGIDITY_EDGES)
}

/// Weights 2 on sites 1..5 and 1 on sites 6..10.
pub fn regular_weights() -> Vec<f64> {
    let mut w = vec![2.0; 5];
    w.extend([1.0; 5]);
    w
}

/// Weight 3 on the centres, 2 on areas {5,9,10} and {7,13,14}, 1 on
/// {6,11,12} and {8,15,16}.
pub fn rigidity_weights() -> Vec<f64> {
    let mut w = vec![0.0; 16];
    for (sites, value) in [
        (&[1, 2, 3, 4][..], 3.0),
        (&[5, 9, 10][..], 2.0),
        (&[7, 13, 14][..], 2.0),
        (&[6, 11, 12][..], 1.0),
        (&[8, 15, 16][..], 1.0),
    ] {
        for &s in sites {
            w[s - 1] = value;
        }
    }
    w
}

pub fn regular_additive() -> Network {
    regular().with_weights(regular_weights(), Scheme::Additive).expect("valid weights")
}

pub fn rigidity_additive() -> Network {
    rigidity().with_weights(rigidity_weights(), Scheme::Additive).expect("valid weights")
}

/// `(name, network)` for every unweighted fixture.
pub fn all() -> Vec<(&'static str, Network)> {
    vec![
        ("independent_sets", independent_sets()),
        ("regular", regular()),
        ("rigidity", rigidity()),
    ]
}
