//! Candidate supporting subnetworks: maximal independent sets and maximal
//! r-regular induced subnetworks, with the conditions under which a uniform
//! (or inverse-weight) strategy on them is an equilibrium.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{normalize_subset, Network};
use crate::par::Exec;

/// Residual sets up to this size are searched exhaustively when testing
/// maximality.
pub const EXACT_RESIDUAL_LIMIT: usize = 16;
pub const DEFAULT_RESTARTS: usize = 100;
pub const DEFAULT_ENUMERATION_MAX_N: usize = 16;

/// Which procedure established the maximality flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Heuristic,
}

/// A candidate support `V*` with its regularity degree and condition flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularSupport {
    /// Sorted 0-based node indices.
    pub nodes: Vec<usize>,
    pub r: usize,
    /// Every internal degree equals `r`.
    pub regular: bool,
    /// Connected components of the induced subnetwork, each sorted, ordered
    /// by smallest member.
    pub components: Vec<Vec<usize>>,
    /// `minimal[c]`: component `c` is complete on `r + 1` nodes.
    pub minimal: Vec<bool>,
    /// Every outside node has at least `r + 1` links into `nodes`.
    pub outside_ok: bool,
    /// No r-regular piece can be joined to `nodes` as new components.
    pub maximal_ok: bool,
    pub mode: Mode,
}

impl RegularSupport {
    /// Regular, maximal and outside-degree conditions all hold.
    pub fn is_equilibrium_support(&self) -> bool {
        self.regular && self.maximal_ok && self.outside_ok
    }

    /// First failing precondition, by name.
    pub fn failed_condition(&self) -> Option<&'static str> {
        if !self.regular {
            Some("regular")
        } else if !self.maximal_ok {
            Some("maximal_ok")
        } else if !self.outside_ok {
            Some("outside_ok")
        } else {
            None
        }
    }

    pub fn all_minimal(&self) -> bool {
        self.minimal.iter().all(|&m| m)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Validates `subset` as an r-regular support and fills in every flag.
pub fn check_support_conditions(net: &Network, subset: &[usize], r: usize) -> Result<RegularSupport> {
    let nodes = normalize_subset(subset, net.n())?;
    let profile = net.degree_profile(&nodes)?;
    let regular = profile.internal.iter().all(|&(_, d)| d == r);
    let outside_ok = profile.inlinks.iter().all(|&(_, c)| c > r);
    let components = components_of(net, &nodes);
    let minimal = components
        .iter()
        .map(|c| regular && c.len() == r + 1)
        .collect();

    let residual: Vec<usize> = profile
        .inlinks
        .iter()
        .filter(|&&(_, c)| c == 0)
        .map(|&(v, _)| v)
        .collect();
    let (maximal_ok, mode) = if residual.is_empty() {
        (true, Mode::Exact)
    } else if residual.len() <= EXACT_RESIDUAL_LIMIT {
        (regular_piece_exact(net, &residual, r).is_none(), Mode::Exact)
    } else {
        let piece = regular_piece_heuristic(net, &residual, r, 0, DEFAULT_RESTARTS);
        (piece.is_none(), Mode::Heuristic)
    };

    Ok(RegularSupport { nodes, r, regular, components, minimal, outside_ok, maximal_ok, mode })
}

fn components_of(net: &Network, nodes: &[usize]) -> Vec<Vec<usize>> {
    let mut inside = vec![false; net.n()];
    for &v in nodes {
        inside[v] = true;
    }
    let mut seen = vec![false; net.n()];
    let mut out = Vec::new();
    for &start in nodes {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &u in net.neighbors(v) {
                if inside[u] && !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Visiting order for greedy independent-set construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeOrder {
    Ascending,
    /// Explicit permutation (0-based); nodes missing from it are visited
    /// afterwards in ascending order.
    Permutation(Vec<usize>),
    Seeded(u64),
}

impl NodeOrder {
    fn resolve(&self, n: usize) -> Vec<usize> {
        match self {
            NodeOrder::Ascending => (0..n).collect(),
            NodeOrder::Permutation(p) => {
                let mut seen = vec![false; n];
                let mut order = Vec::with_capacity(n);
                for &v in p.iter().filter(|&&v| v < n) {
                    if !seen[v] {
                        seen[v] = true;
                        order.push(v);
                    }
                }
                order.extend((0..n).filter(|&v| !seen[v]));
                order
            }
            NodeOrder::Seeded(seed) => {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
                order
            }
        }
    }
}

/// Greedy maximal independent set: visit nodes in `order`, keep each node
/// with no kept neighbour.
pub fn find_maximal_independent_set(net: &Network, order: &NodeOrder) -> RegularSupport {
    let mut blocked = vec![false; net.n()];
    let mut chosen = Vec::new();
    for v in order.resolve(net.n()) {
        if blocked[v] {
            continue;
        }
        chosen.push(v);
        blocked[v] = true;
        for &u in net.neighbors(v) {
            blocked[u] = true;
        }
    }
    check_support_conditions(net, &chosen, 0).expect("greedy set is nonempty for n >= 1")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentSetListing {
    pub sets: Vec<Vec<usize>>,
    /// More than `cap` sets exist; only `cap` are listed.
    pub truncated: bool,
}

/// All maximal independent sets (maximal cliques of the complement), via
/// Bron–Kerbosch with pivoting on bitmasks. Sorted lexicographically.
pub fn enumerate_maximal_independent_sets(net: &Network, cap: usize) -> Result<IndependentSetListing> {
    let adj = net
        .adjacency_masks()
        .ok_or(Error::TooLarge { n: net.n(), max_n: 64 })?;
    let n = net.n();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    // Neighbourhoods in the complement.
    let comp: Vec<u64> = (0..n).map(|v| all & !adj[v] & !(1u64 << v)).collect();

    let mut found = Vec::new();
    let mut truncated = false;
    bron_kerbosch(&comp, 0, all, 0, cap, &mut found, &mut truncated);
    let mut sets: Vec<Vec<usize>> = found.iter().map(|&m| mask_nodes(m)).collect();
    sets.sort();
    Ok(IndependentSetListing { sets, truncated })
}

fn bron_kerbosch(
    nbr: &[u64],
    clique: u64,
    mut cand: u64,
    mut excl: u64,
    cap: usize,
    out: &mut Vec<u64>,
    truncated: &mut bool,
) {
    if *truncated {
        return;
    }
    if cand == 0 && excl == 0 {
        if out.len() == cap {
            *truncated = true;
        } else {
            out.push(clique);
        }
        return;
    }
    let pivot = pick_pivot(nbr, cand | excl, cand);
    let mut todo = cand & !nbr[pivot];
    while todo != 0 {
        let v = todo.trailing_zeros() as usize;
        let bit = 1u64 << v;
        todo &= !bit;
        bron_kerbosch(nbr, clique | bit, cand & nbr[v], excl & nbr[v], cap, out, truncated);
        cand &= !bit;
        excl |= bit;
    }
}

fn pick_pivot(nbr: &[u64], pool: u64, cand: u64) -> usize {
    let mut best = pool.trailing_zeros() as usize;
    let mut best_count = 0;
    let mut rest = pool;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let c = (cand & nbr[u]).count_ones();
        if c > best_count {
            best = u;
            best_count = c;
        }
    }
    best
}

pub(crate) fn mask_nodes(mut m: u64) -> Vec<usize> {
    let mut v = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        v.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    v
}

/// Exhaustive search for a nonempty r-regular induced subnetwork among
/// `candidates`. Returns the first one found in submask order.
pub fn regular_piece_exact(net: &Network, candidates: &[usize], r: usize) -> Option<Vec<usize>> {
    let k = candidates.len();
    assert!(k <= 24, "exact piece search limited to 24 candidates");
    if k == 0 {
        return None;
    }
    let mut local = vec![0u32; k];
    for (a, &u) in candidates.iter().enumerate() {
        for (b, &v) in candidates.iter().enumerate() {
            if net.has_edge(u, v) {
                local[a] |= 1 << b;
            }
        }
    }
    let mask = regular_submask(&local, (1u32 << k) - 1, r)?;
    let mut out: Vec<usize> = (0..k).filter(|&a| mask >> a & 1 == 1).map(|a| candidates[a]).collect();
    out.sort_unstable();
    Some(out)
}

fn regular_submask(adj: &[u32], cand: u32, r: usize) -> Option<u32> {
    let core = peel_core(adj, cand, r);
    if core == 0 {
        return None;
    }
    if r == 0 {
        return Some(core & core.wrapping_neg());
    }
    let is_regular = |m: u32| {
        let mut rest = m;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if (adj[v] & m).count_ones() as usize != r {
                return false;
            }
        }
        true
    };
    let mut sub = core;
    while sub != 0 {
        if sub.count_ones() as usize > r && is_regular(sub) {
            return Some(sub);
        }
        sub = (sub - 1) & core;
    }
    None
}

/// Removes nodes with fewer than `r` neighbours until none remain.
fn peel_core(adj: &[u32], mut cand: u32, r: usize) -> u32 {
    loop {
        let mut changed = false;
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if ((adj[v] & cand).count_ones() as usize) < r {
                cand &= !(1 << v);
                changed = true;
            }
        }
        if !changed {
            return cand;
        }
    }
}

/// Randomized search for a nonempty r-regular induced subnetwork among
/// `candidates`. `None` means none was found, not that none exists.
pub fn regular_piece_heuristic(
    net: &Network,
    candidates: &[usize],
    r: usize,
    seed: u64,
    restarts: usize,
) -> Option<Vec<usize>> {
    let mut allowed = vec![false; net.n()];
    for &v in candidates {
        allowed[v] = true;
    }
    for restart in 0..restarts.max(1) {
        let mut rng = restart_rng(seed, restart);
        let mut order = candidates.to_vec();
        order.shuffle(&mut rng);
        let piece = grow_regular(net, &allowed, r, &order);
        if !piece.is_empty() {
            return Some(piece);
        }
    }
    None
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// Greedy growth under max internal degree `r`, one-node repair of deficient
/// members, then peeling down to an exactly r-regular set (possibly empty).
fn grow_regular(net: &Network, allowed: &[bool], r: usize, order: &[usize]) -> Vec<usize> {
    let n = net.n();
    let mut member = vec![false; n];
    let mut count = vec![0usize; n];

    let can_add = |v: usize, member: &[bool], count: &[usize]| {
        allowed[v]
            && !member[v]
            && count[v] <= r
            && net.neighbors(v).iter().all(|&u| !member[u] || count[u] < r)
    };
    let add = |v: usize, member: &mut [bool], count: &mut [usize]| {
        member[v] = true;
        for &u in net.neighbors(v) {
            count[u] += 1;
        }
    };

    for &v in order {
        if can_add(v, &member, &count) {
            add(v, &mut member, &mut count);
        }
    }

    // Repair: give deficient members another neighbour where that keeps the
    // degree bound.
    for _ in 0..n {
        let mut progressed = false;
        for u in 0..n {
            if !member[u] || count[u] >= r {
                continue;
            }
            if let Some(&v) = net.neighbors(u).iter().find(|&&v| can_add(v, &member, &count)) {
                add(v, &mut member, &mut count);
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }

    // Peel members whose internal degree stays below r.
    let mut queue: Vec<usize> = (0..n).filter(|&v| member[v] && count[v] < r).collect();
    while let Some(v) = queue.pop() {
        if !member[v] {
            continue;
        }
        member[v] = false;
        for &u in net.neighbors(v) {
            count[u] -= 1;
            if member[u] && count[u] + 1 == r {
                queue.push(u);
            }
        }
    }
    (0..n).filter(|&v| member[v]).collect()
}

/// Heuristic maximal r-regular induced subnetwork. Runs `restarts` seeded
/// restarts (possibly in parallel) and keeps the best result: outside-degree
/// condition met first, then larger, then lexicographically smallest.
pub fn find_maximal_r_regular(net: &Network, r: usize, seed: u64, restarts: usize) -> Option<RegularSupport> {
    find_maximal_r_regular_with(net, r, seed, restarts, Exec::Auto)
}

pub fn find_maximal_r_regular_with(
    net: &Network,
    r: usize,
    seed: u64,
    restarts: usize,
    exec: Exec,
) -> Option<RegularSupport> {
    if net.n() == 0 {
        return None;
    }
    let runs: Vec<usize> = (0..restarts.max(1)).collect();
    let results = exec.map_vec(runs, |restart| single_restart(net, r, seed, restart));
    results.into_iter().flatten().min_by(|a, b| {
        b.outside_ok
            .cmp(&a.outside_ok)
            .then(b.nodes.len().cmp(&a.nodes.len()))
            .then(a.nodes.cmp(&b.nodes))
    })
}

fn single_restart(net: &Network, r: usize, seed: u64, restart: usize) -> Option<RegularSupport> {
    let n = net.n();
    let mut rng = restart_rng(seed, restart);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    if r == 0 {
        return Some(find_maximal_independent_set(net, &NodeOrder::Permutation(order)));
    }
    let allowed = vec![true; n];
    let mut set = grow_regular(net, &allowed, r, &order);
    if set.is_empty() {
        return None;
    }

    // Extend with r-regular pieces that touch nothing already chosen.
    loop {
        let mut linked = vec![false; n];
        for &v in &set {
            linked[v] = true;
            for &u in net.neighbors(v) {
                linked[u] = true;
            }
        }
        let residual: Vec<usize> = (0..n).filter(|&v| !linked[v]).collect();
        if residual.is_empty() {
            break;
        }
        let piece = if residual.len() <= EXACT_RESIDUAL_LIMIT {
            regular_piece_exact(net, &residual, r)
        } else {
            let mut free = vec![false; n];
            for &v in &residual {
                free[v] = true;
            }
            let mut sub_order = residual.clone();
            sub_order.shuffle(&mut rng);
            Some(grow_regular(net, &free, r, &sub_order)).filter(|p| !p.is_empty())
        };
        match piece {
            Some(p) => {
                set.extend(p);
                set.sort_unstable();
            }
            None => break,
        }
    }
    check_support_conditions(net, &set, r).ok()
}

/// Every maximal r-regular induced subnetwork, by exhaustive subset scan.
/// Refuses networks larger than `max_n`.
pub fn enumerate_r_regular_supports(net: &Network, r: usize, max_n: usize) -> Result<Vec<RegularSupport>> {
    enumerate_r_regular_supports_with(net, r, max_n, Exec::Auto)
}

pub fn enumerate_r_regular_supports_with(
    net: &Network,
    r: usize,
    max_n: usize,
    exec: Exec,
) -> Result<Vec<RegularSupport>> {
    let n = net.n();
    if n > max_n || n > 24 {
        return Err(Error::TooLarge { n, max_n: max_n.min(24) });
    }
    let adj: Vec<u32> = net
        .adjacency_masks()
        .expect("n <= 24")
        .into_iter()
        .map(|m| m as u32)
        .collect();
    let all: u32 = if n == 0 { 0 } else { ((1u64 << n) - 1) as u32 };

    let masks = exec.filter_map_range(1u64 << n, |m| {
        let m = m as u32;
        if m == 0 {
            return None;
        }
        let mut rest = m;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if (adj[v] & m).count_ones() as usize != r {
                return None;
            }
        }
        // Outside nodes with no link into m could host a new component.
        let mut free = 0u32;
        let mut out = all & !m;
        while out != 0 {
            let v = out.trailing_zeros() as usize;
            out &= out - 1;
            if adj[v] & m == 0 {
                free |= 1 << v;
            }
        }
        if free != 0 && regular_submask(&adj, free, r).is_some() {
            return None;
        }
        Some(m)
    });

    let mut supports: Vec<RegularSupport> = masks
        .into_iter()
        .map(|m| {
            let nodes = mask_nodes(m as u64);
            let mut s = check_support_conditions(net, &nodes, r).expect("nonempty in-range subset");
            // The scan above is exhaustive regardless of residual size.
            s.maximal_ok = true;
            s.mode = Mode::Exact;
            s
        })
        .collect();
    supports.sort_by(|a, b| a.nodes.cmp(&b.nodes));
    Ok(supports)
}
