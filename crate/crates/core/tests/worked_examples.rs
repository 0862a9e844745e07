use distancing::equilibrium::{
    construct_equilibrium, construct_weighted_equilibrium, payoff, site_contacts, verify_nash, Strategy,
};
use distancing::graph::from_labels;
use distancing::search::{check_support_conditions, find_maximal_r_regular};
use distancing::stability::{classify, classify_spectral, classify_structural, Method, SPECTRAL_TOL};
use distancing::{fixtures, Classification, Network};

const EXACT: f64 = 1e-12;

fn support(net: &Network, labels: &[usize], r: usize) -> distancing::RegularSupport {
    check_support_conditions(net, &from_labels(labels, net.n()).unwrap(), r).unwrap()
}

fn certified_lambda(net: &Network, labels: &[usize], r: usize) -> f64 {
    let s = support(net, labels, r);
    assert!(s.is_equilibrium_support(), "{labels:?}: {:?}", s.failed_condition());
    let c = construct_equilibrium(net, &s).unwrap();
    let cert = verify_nash(net, &c.strategy, EXACT).unwrap();
    assert!(cert.is_nash && cert.eq_residual < EXACT, "{labels:?}");
    assert!((cert.lambda_star - c.lambda_star).abs() < EXACT);
    cert.lambda_star
}

#[test]
fn two_independent_sets_of_different_quality() {
    let net = fixtures::independent_sets();
    assert!((certified_lambda(&net, &[3, 5, 9], 0) - 1.0 / 3.0).abs() < EXACT);
    assert!((certified_lambda(&net, &[6, 7, 8, 9, 10], 0) - 0.2).abs() < EXACT);
    let best = find_maximal_r_regular(&net, 0, 0, 100).unwrap();
    assert_eq!(best.nodes, from_labels(&[6, 7, 8, 9, 10], 10).unwrap());
}

#[test]
fn regular_network_supports() {
    let net = fixtures::regular();
    let all: Vec<usize> = (1..=10).collect();
    assert!((certified_lambda(&net, &all, 3) - 0.4).abs() < EXACT);
    assert!((certified_lambda(&net, &[1, 2, 4, 8, 9, 10], 1) - 1.0 / 3.0).abs() < EXACT);
    assert!((certified_lambda(&net, &[3, 5, 6, 7], 0) - 0.25).abs() < EXACT);
    for half in [&[1, 2, 3, 4, 5][..], &[6, 7, 8, 9, 10]] {
        let s = support(&net, half, 2);
        assert!(s.regular && !s.outside_ok);
        assert_eq!(s.failed_condition(), Some("outside_ok"));
        assert!(construct_equilibrium(&net, &s).is_err());
    }
}

#[test]
fn regular_network_stability() {
    let net = fixtures::regular();
    let class = |labels: &[usize], r| {
        let s = support(&net, labels, r);
        let x = construct_equilibrium(&net, &s).unwrap().strategy;
        classify(&net, &x, Some(&s), Method::Both, SPECTRAL_TOL).unwrap()
    };
    assert_eq!(class(&[3, 5, 6, 7], 0).classification, Classification::StronglyRigid);
    let pairs = class(&[1, 2, 4, 8, 9, 10], 1);
    assert_eq!(pairs.classification, Classification::WeaklyRigid);
    assert!(pairs.flexible);
    let whole = class(&(1..=10).collect::<Vec<_>>(), 3);
    assert_eq!(whole.classification, Classification::Fragile);
    assert!(whole.flexible);
}

#[test]
fn moving_a_twentieth_along_an_edge_keeps_contact() {
    let net = fixtures::regular();
    let x = Strategy::uniform_on(10, &(0..10).collect::<Vec<_>>());
    let mut y = x.as_slice().to_vec();
    y[0] = 1.0 / 20.0;
    y[1] = 3.0 / 20.0;
    let y = Strategy::new(y).unwrap();
    assert!((payoff(&net, &y, &y).unwrap() - 0.4).abs() < EXACT);
}

#[test]
fn rigidity_network_equilibria() {
    let net = fixtures::rigidity();
    let cases: [(&[usize], usize, Classification); 3] = [
        (&[5, 6, 7, 8], 0, Classification::StronglyRigid),
        (&[9, 10, 11, 12, 13, 14, 15, 16], 1, Classification::WeaklyRigid),
        (&[5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16], 2, Classification::WeaklyRigid),
    ];
    for (labels, r, want) in cases {
        assert!((certified_lambda(&net, labels, r) - 0.25).abs() < EXACT);
        let s = support(&net, labels, r);
        let x = construct_equilibrium(&net, &s).unwrap().strategy;
        let structural = classify_structural(&net, &s, &x).unwrap();
        let spectral = classify_spectral(&net, &x, SPECTRAL_TOL).unwrap();
        assert_eq!(structural.classification, want, "{labels:?}");
        assert_eq!(spectral.classification, want, "{labels:?}");
        assert_eq!(structural.flexible, r > 0);
        assert_eq!(spectral.flexible, r > 0);
    }
}

#[test]
fn shifting_a_twenty_fourth_inside_a_triangle_keeps_contact() {
    let net = fixtures::rigidity();
    let mut y = vec![0.0; 16];
    for v in y.iter_mut().skip(4) {
        *v = 1.0 / 12.0;
    }
    y[8] = 1.0 / 24.0;
    y[9] = 1.0 / 24.0;
    y[4] = 4.0 / 24.0;
    let y = Strategy::new(y).unwrap();
    assert!((payoff(&net, &y, &y).unwrap() - 0.25).abs() < EXACT);
}

#[test]
fn weighted_independent_sets() {
    let net = fixtures::regular_additive();

    let s = support(&net, &[3, 5, 9], 0);
    let c = construct_weighted_equilibrium(&net, &s).unwrap();
    assert!((c.lambda_star - 0.5).abs() < EXACT);
    let x = c.strategy.as_slice();
    assert!((x[2] - 0.25).abs() < EXACT && (x[4] - 0.25).abs() < EXACT && (x[8] - 0.5).abs() < EXACT);
    let p = site_contacts(&net, &c.strategy).unwrap();
    assert!((p[7] - 3.0 / 8.0).abs() < EXACT);
    assert!(!c.sufficient_conditions);
    let cert = verify_nash(&net, &c.strategy, 1e-9).unwrap();
    assert!(!cert.is_nash);
    assert!(cert.eq_residual < EXACT);

    for (labels, want, lambda) in [
        (&[4, 6, 7][..], &[0.2, 0.4, 0.4][..], 0.4),
        (&[3, 5, 6, 7], &[1.0 / 6.0, 1.0 / 6.0, 2.0 / 6.0, 2.0 / 6.0], 1.0 / 3.0),
    ] {
        let s = support(&net, labels, 0);
        let c = construct_weighted_equilibrium(&net, &s).unwrap();
        assert!(c.sufficient_conditions);
        for (&l, &v) in labels.iter().zip(want) {
            assert!((c.strategy.as_slice()[l - 1] - v).abs() < EXACT, "{labels:?} site {l}");
        }
        let cert = verify_nash(&net, &c.strategy, EXACT).unwrap();
        assert!(cert.is_nash);
        assert!((cert.lambda_star - lambda).abs() < EXACT);
    }
}

#[test]
fn weighted_triangles() {
    let net = fixtures::rigidity_additive();
    let s = support(&net, &(5..=16).collect::<Vec<_>>(), 2);
    let c = construct_weighted_equilibrium(&net, &s).unwrap();
    assert!(c.sufficient_conditions);
    assert!((c.lambda_star - 1.0 / 3.0).abs() < EXACT);
    let x = c.strategy.as_slice();
    // w̄ = 1/9: sites of weight 2 get 1/18, sites of weight 1 get 2/18.
    for (i, &xi) in x.iter().enumerate().skip(4) {
        let want = net.weights()[i].recip() / 9.0;
        assert!((xi - want).abs() < EXACT);
        assert!((xi - 1.0 / 18.0).abs() < EXACT || (xi - 2.0 / 18.0).abs() < EXACT);
    }
    let cert = verify_nash(&net, &c.strategy, EXACT).unwrap();
    assert!(cert.is_nash && (cert.lambda_star - 1.0 / 3.0).abs() < EXACT);
}

#[test]
fn edgeless_network_is_uniform() {
    for n in 1..6 {
        let net = Network::distancing(n, &[]).unwrap();
        assert!((certified_lambda(&net, &(1..=n).collect::<Vec<_>>(), 0) - 1.0 / n as f64).abs() < EXACT);
    }
}
