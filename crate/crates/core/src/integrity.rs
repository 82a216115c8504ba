//! Vertex integrity and the bi-independent pair parameter `z(G)`, exact for
//! small graphs, plus the spectral lower bound and the random-graph
//! experiments around them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{gnp_sample, Graph};

pub const DEFAULT_INTEGRITY_GUARD: usize = 25;
pub const DEFAULT_Z_GUARD: usize = 30;

type Mask = u64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegrityCertificate {
    pub value: usize,
    pub witness_set: Vec<usize>,
    pub kappa: usize,
}

impl IntegrityCertificate {
    /// Recomputes the largest component of `G - S`.
    pub fn verify(&self, g: &Graph) -> bool {
        let mut removed = vec![false; g.n()];
        for &v in &self.witness_set {
            if v >= g.n() || removed[v] {
                return false;
            }
            removed[v] = true;
        }
        largest_component_avoiding(g, &removed) == self.kappa && self.witness_set.len() + self.kappa == self.value
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZCertificate {
    pub value: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl ZCertificate {
    /// Sizes, disjointness and absence of `A`-`B` edges.
    pub fn verify(&self, g: &Graph) -> bool {
        if self.a.len() != self.value || self.b.len() != self.value {
            return false;
        }
        let mut side = vec![0u8; g.n()];
        for (set, tag) in [(&self.a, 1u8), (&self.b, 2u8)] {
            for &v in set {
                if v >= g.n() || side[v] != 0 {
                    return false;
                }
                side[v] = tag;
            }
        }
        self.a.iter().all(|&u| g.neighbors(u).iter().all(|&v| side[v] != 2))
    }
}

fn largest_component_avoiding(g: &Graph, removed: &[bool]) -> usize {
    let mut seen = removed.to_vec();
    let mut best = 0;
    let mut stack = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        best = best.max(size);
    }
    best
}

fn masks(g: &Graph) -> Vec<Mask> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0, |m, &u| m | 1 << u))
        .collect()
}

fn check_guard(g: &Graph, guard: usize) -> Result<()> {
    let cap = guard.min(Mask::BITS as usize);
    if g.n() > cap {
        Err(Error::TooLarge { n: g.n(), cap })
    } else {
        Ok(())
    }
}

/// Largest connected piece of the induced subgraph on `set`.
fn largest_component(adj: &[Mask], set: Mask) -> usize {
    let mut rest = set;
    let mut best = 0;
    while rest != 0 {
        let start = rest & rest.wrapping_neg();
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[v];
            }
            next &= set & !comp;
            comp |= next;
            frontier = next;
        }
        best = best.max(comp.count_ones() as usize);
        rest &= !comp;
    }
    best
}

/// Upper bound on `z(G)` used to stop the integrity search early.
fn z_upper(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    (n / 2).min(n - 1 - g.min_degree())
}

struct IntegritySearch<'a> {
    adj: &'a [Mask],
    order: Vec<usize>,
    best: usize,
    best_removed: Mask,
    floor: usize,
}

impl IntegritySearch<'_> {
    fn run(&mut self, idx: usize, removed: Mask, kept: Mask) {
        if self.best <= self.floor {
            return;
        }
        let s = removed.count_ones() as usize;
        // kept components can only grow as more vertices are kept
        let kappa = largest_component(self.adj, kept);
        if s + kappa >= self.best {
            return;
        }
        if idx == self.order.len() {
            self.best = s + kappa;
            self.best_removed = removed;
            return;
        }
        let v = 1 << self.order[idx];
        self.run(idx + 1, removed, kept | v);
        self.run(idx + 1, removed | v, kept);
    }
}

/// Exact `min_S |S| + kappa(G - S)` by branch-and-bound.
pub fn integrity_exact(g: &Graph, guard: usize) -> Result<IntegrityCertificate> {
    check_guard(g, guard)?;
    let n = g.n();
    let adj = masks(g);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let all: Mask = if n == 0 { 0 } else { Mask::MAX >> (Mask::BITS as usize - n) };
    let whole = largest_component(&adj, all);
    let mut search = IntegritySearch {
        adj: &adj,
        order,
        best: whole,
        best_removed: 0,
        floor: n.saturating_sub(2 * z_upper(g)),
    };
    search.run(0, 0, 0);
    let witness_set: Vec<usize> = (0..n).filter(|&v| search.best_removed >> v & 1 == 1).collect();
    let kappa = search.best - witness_set.len();
    Ok(IntegrityCertificate {
        value: search.best,
        witness_set,
        kappa,
    })
}

struct ZSearch<'a> {
    adj: &'a [Mask],
    n: usize,
    target: usize,
}

impl ZSearch<'_> {
    /// Extends `a` (all members below `next`) to size `target` while keeping
    /// at least `target` vertices above `min A` outside `N[A]`.
    fn find(&self, a: Mask, closed: Mask, avail_floor: Mask, next: usize) -> Option<Mask> {
        let size = a.count_ones() as usize;
        let avail = (avail_floor & !closed).count_ones() as usize;
        if a != 0 && avail < self.target {
            return None;
        }
        if size == self.target {
            return Some(a);
        }
        if size + (self.n - next) < self.target {
            return None;
        }
        for v in next..self.n {
            let bit = 1 << v;
            let floor = if a == 0 { above(v, self.n) } else { avail_floor };
            if let Some(found) = self.find(a | bit, closed | bit | self.adj[v], floor, v + 1) {
                return Some(found);
            }
        }
        None
    }
}

fn above(v: usize, n: usize) -> Mask {
    let all: Mask = if n == 0 { 0 } else { Mask::MAX >> (Mask::BITS as usize - n) };
    all & !((1 << (v + 1)) - 1)
}

fn bits(m: Mask) -> Vec<usize> {
    (0..Mask::BITS as usize).filter(|&v| m >> v & 1 == 1).collect()
}

/// Exact `z(G)`: the largest `z` admitting disjoint `A`, `B` of size `z`
/// with no edge between them. `A` holds the smallest vertex of `A u B`.
pub fn z_exact(g: &Graph, guard: usize) -> Result<ZCertificate> {
    check_guard(g, guard)?;
    let n = g.n();
    let adj = masks(g);
    let mut best = ZCertificate {
        value: 0,
        a: Vec::new(),
        b: Vec::new(),
    };
    for target in 1..=n / 2 {
        let search = ZSearch { adj: &adj, n, target };
        let Some(a) = search.find(0, 0, 0, 0) else { break };
        let a_list = bits(a);
        let closed = a_list.iter().fold(a, |m, &v| m | adj[v]);
        let b_list: Vec<usize> = bits(above(a_list[0], n) & !closed).into_iter().take(target).collect();
        best = ZCertificate {
            value: target,
            a: a_list,
            b: b_list,
        };
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub n: usize,
    pub integrity: usize,
    pub z: usize,
    pub holds: bool,
}

/// `n - 2 z <= iota <= n - z`.
pub fn sandwich_check(g: &Graph, integrity_guard: usize, z_guard: usize) -> Result<SandwichReport> {
    let iota = integrity_exact(g, integrity_guard)?.value;
    let z = z_exact(g, z_guard)?.value;
    let n = g.n();
    Ok(SandwichReport {
        n,
        integrity: iota,
        z,
        holds: n.saturating_sub(2 * z) <= iota && iota <= n - z,
    })
}

/// `ceil(n (d - lambda) / (d + lambda))` for an `(n, d, lambda)`-graph.
pub fn spectral_integrity_lb(n: usize, d: f64, lambda: f64) -> Result<usize> {
    if !(0.0..d).contains(&lambda) {
        return Err(Error::DegenerateSpectrum { d, lambda });
    }
    let x = n as f64 * (d - lambda) / (d + lambda);
    // absorb rounding noise from computed eigenvalues
    Ok((x - 1e-9).ceil().max(0.0) as usize)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerWitnessReport {
    pub certificate: ZCertificate,
    /// `n ln d / (4 d)`.
    pub target: f64,
    pub met: bool,
    pub trials: usize,
    pub probability: f64,
    pub log_base: String,
}

/// Random `A` with vertex probability `ln d / (2 d)`, `B` the vertices
/// outside `A` with no neighbor in `A`, both trimmed to the smaller size.
/// The best pair over `trials` draws is returned; it is always a valid
/// edge-free pair whether or not it reaches the target.
pub fn appendix_lower_witness(g: &Graph, d_avg: f64, trials: usize, seed: u64) -> Result<LowerWitnessReport> {
    if d_avg <= 1.0 {
        return Err(Error::DomainError(format!("need average degree bound d > 1, got {d_avg}")));
    }
    let n = g.n();
    let avg = 2.0 * g.edge_count() as f64 / n.max(1) as f64;
    if avg > d_avg + 1e-12 {
        return Err(Error::HypothesisUnmet(format!("average degree {avg} exceeds {d_avg}")));
    }
    let p = d_avg.ln() / (2.0 * d_avg);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = ZCertificate {
        value: 0,
        a: Vec::new(),
        b: Vec::new(),
    };
    for _ in 0..trials {
        let in_a: Vec<bool> = (0..n).map(|_| rng.gen_bool(p)).collect();
        let mut blocked = in_a.clone();
        for v in (0..n).filter(|&v| in_a[v]) {
            for &u in g.neighbors(v) {
                blocked[u] = true;
            }
        }
        let a: Vec<usize> = (0..n).filter(|&v| in_a[v]).collect();
        let b: Vec<usize> = (0..n).filter(|&v| !blocked[v]).collect();
        let size = a.len().min(b.len());
        if size > best.value {
            best = ZCertificate {
                value: size,
                a: a[..size].to_vec(),
                b: b[..size].to_vec(),
            };
        }
    }
    let target = n as f64 * d_avg.ln() / (4.0 * d_avg);
    Ok(LowerWitnessReport {
        met: best.value as f64 >= target,
        certificate: best,
        target,
        trials,
        probability: p,
        log_base: "e".into(),
    })
}

/// One data row of the `G(n, d/n)` experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperExperimentRow {
    pub seed: u64,
    pub n: usize,
    pub d: f64,
    pub edges: usize,
    pub z: usize,
    /// `2 n ln d / d`.
    pub bound: f64,
    pub pass: bool,
}

pub fn appendix_upper_experiment(n: usize, d: f64, seed: u64, z_guard: usize) -> Result<UpperExperimentRow> {
    if d <= 1.0 || d > n as f64 {
        return Err(Error::DomainError(format!("need 1 < d <= n, got d = {d}")));
    }
    let g = gnp_sample(n, d / n as f64, seed)?;
    let z = z_exact(&g, z_guard)?.value;
    let bound = 2.0 * n as f64 * d.ln() / d;
    Ok(UpperExperimentRow {
        seed,
        n,
        d,
        edges: g.edge_count(),
        z,
        bound,
        pass: z as f64 <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Integrity over all `2^n` subsets.
    pub(crate) fn brute_integrity(g: &Graph) -> usize {
        let n = g.n();
        (0u64..1 << n)
            .map(|s| {
                let removed: Vec<bool> = (0..n).map(|v| s >> v & 1 == 1).collect();
                s.count_ones() as usize + largest_component_avoiding(g, &removed)
            })
            .min()
            .unwrap()
    }

    /// `z` over all ordered pairs of disjoint subsets, by trying every `A`
    /// with `B` the non-neighbors.
    fn brute_z(g: &Graph) -> usize {
        let n = g.n();
        (0u64..1 << n)
            .map(|a| {
                let b = (0..n)
                    .filter(|&v| a >> v & 1 == 0 && g.neighbors(v).iter().all(|&u| a >> u & 1 == 0))
                    .count();
                (a.count_ones() as usize).min(b)
            })
            .max()
            .unwrap()
    }

    fn named() -> Vec<(&'static str, Graph, usize, usize)> {
        vec![
            ("K4", Graph::complete(4).unwrap(), 4, 0),
            ("P4", Graph::path(4).unwrap(), 3, 1),
            ("C5", Graph::cycle(5).unwrap(), 4, 1),
            ("C6", Graph::cycle(6).unwrap(), 4, 2),
        ]
    }

    #[test]
    fn named_graphs() {
        for (name, g, iota, z) in named() {
            let ic = integrity_exact(&g, 25).unwrap();
            assert_eq!(ic.value, iota, "{name}");
            assert_eq!(brute_integrity(&g), iota, "{name}");
            assert!(ic.verify(&g));
            let zc = z_exact(&g, 30).unwrap();
            assert_eq!(zc.value, z, "{name}");
            assert_eq!(brute_z(&g), z, "{name}");
            assert!(zc.verify(&g));
            assert!(sandwich_check(&g, 25, 30).unwrap().holds);
        }
        let p4 = z_exact(&Graph::path(4).unwrap(), 30).unwrap();
        assert_eq!((p4.a, p4.b), (vec![0], vec![2]));
    }

    #[test]
    fn petersen_matches_brute_force() {
        let g = Graph::petersen();
        let ic = integrity_exact(&g, 25).unwrap();
        assert_eq!(ic.value, brute_integrity(&g));
        assert!(ic.verify(&g));
        assert_eq!(z_exact(&g, 30).unwrap().value, brute_z(&g));
    }

    #[test]
    fn random_small_graphs_match_brute_force() {
        for seed in 0..60 {
            let n = 3 + (seed as usize % 10);
            let g = gnp_sample(n, 0.15 + 0.1 * (seed % 6) as f64, seed).unwrap();
            let ic = integrity_exact(&g, 25).unwrap();
            assert_eq!(ic.value, brute_integrity(&g), "seed {seed}");
            assert!(ic.verify(&g));
            let zc = z_exact(&g, 30).unwrap();
            assert_eq!(zc.value, brute_z(&g), "seed {seed}");
            assert!(zc.verify(&g));
        }
    }

    #[test]
    fn guards_and_edge_cases() {
        assert!(matches!(
            integrity_exact(&Graph::empty(26), 25),
            Err(Error::TooLarge { n: 26, cap: 25 })
        ));
        assert!(matches!(z_exact(&Graph::empty(31), 30), Err(Error::TooLarge { .. })));
        assert_eq!(integrity_exact(&Graph::empty(0), 25).unwrap().value, 0);
        assert_eq!(integrity_exact(&Graph::empty(7), 25).unwrap().value, 1);
        assert_eq!(z_exact(&Graph::empty(7), 30).unwrap().value, 3);
    }

    #[test]
    fn spectral_bound() {
        assert_eq!(spectral_integrity_lb(10, 3.0, 2.0), Ok(2));
        assert_eq!(spectral_integrity_lb(17, 4.0, 0.0), Ok(17));
        assert_eq!(spectral_integrity_lb(1092, 6.0, 2.0 * 5f64.sqrt()), Ok(160));
        assert!(matches!(
            spectral_integrity_lb(10, 3.0, 3.0),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }

    #[test]
    fn lower_witness_is_sound() {
        let g = Graph::empty(100);
        let r = appendix_lower_witness(&g, 8.0, 5, 1).unwrap();
        assert!(r.certificate.verify(&g));
        assert!(r.certificate.value > 0);
        let k = Graph::complete(12).unwrap();
        let r = appendix_lower_witness(&k, 11.0, 20, 1).unwrap();
        assert_eq!(r.certificate.value, 0);
        assert!(r.certificate.verify(&k));
        assert!(appendix_lower_witness(&k, 4.0, 1, 1).is_err());
    }

    #[test]
    fn upper_experiment_rows() {
        for seed in 0..3 {
            let row = appendix_upper_experiment(26, 5.0, seed, 30).unwrap();
            assert!(row.z <= 13);
            assert_eq!(row, appendix_upper_experiment(26, 5.0, seed, 30).unwrap());
        }
    }
}
