//! Simple undirected graphs, named families, LPS Cayley graphs and seeded
//! random graphs.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{legendre, pow_mod, sqrt_mod};

/// Largest vertex count for constructed Cayley graphs and dense spectra.
pub const MAX_DENSE_VERTICES: usize = 20_000;

/// A simple graph on `0..n` with sorted edge list `(u, v)`, `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

/// JSON form `{"n": .., "edges": [[u, v], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl Graph {
    /// Rejects loops, repeated edges and out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut list: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) outside 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("repeated edge {:?}", w[0])));
        }
        Ok(Self::from_sorted(n, list))
    }

    /// Like [`Graph::new`] but silently merges parallel edges.
    pub fn collapsing(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut list: Vec<(usize, usize)> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        list.sort_unstable();
        list.dedup();
        Graph::new(n, list)
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Common degree, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|a| a.len() == d).then_some(d)
    }

    /// Component label per vertex; labels follow the smallest vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.components().iter().all(|&c| c == 0)
    }

    pub fn is_bipartite(&self) -> bool {
        let mut side = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    if side[v] == u8::MAX {
                        side[v] = 1 - side[u];
                        stack.push(v);
                    } else if side[v] == side[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Ordered pairs `(s, t)` in `S x T` that are adjacent.
    pub fn e_between(&self, s: &[usize], t: &[usize]) -> usize {
        let mut in_t = vec![false; self.n];
        for &v in t {
            in_t[v] = true;
        }
        s.iter()
            .map(|&u| self.adj[u].iter().filter(|&&v| in_t[v]).count())
            .sum()
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Graph> {
        Graph::new(file.n, file.edges.iter().map(|e| (e[0], e[1])))
    }

    /// `n m` on the first line, then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let (n, m) = parse_pair(header)?;
        let edges = lines.map(parse_pair).collect::<Result<Vec<_>>>()?;
        if edges.len() != m {
            return Err(Error::Parse(format!("header announces {m} edges, found {}", edges.len())));
        }
        Graph::new(n, edges)
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!("cycle needs n >= 3, got {n}")));
        }
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Result<Graph> {
        Graph::new(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn complete(n: usize) -> Result<Graph> {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn empty(n: usize) -> Graph {
        Graph::from_sorted(n, Vec::new())
    }

    /// Outer 5-cycle 0..5, inner pentagram 5..10, spokes i -- i+5.
    pub fn petersen() -> Graph {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        Graph::new(10, outer.chain(inner).chain(spokes)).expect("petersen graph is simple")
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(|t| t.parse::<usize>());
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(Error::Parse(format!("expected two integers: {line:?}"))),
    }
}

/// All `(b1, b2, b3, b4)` with `b1 > 0`, `b2, b3, b4` even and squares
/// summing to `p`.
pub fn jacobi_solutions(p: u64) -> Result<Vec<[i64; 4]>> {
    if p % 4 != 1 {
        return Err(Error::BadResidueClass(p));
    }
    let m = (p as f64).sqrt() as i64 + 1;
    let p = p as i64;
    let mut out = Vec::new();
    for b1 in 1..=m {
        for b2 in (-m..=m).filter(|b| b % 2 == 0) {
            for b3 in (-m..=m).filter(|b| b % 2 == 0) {
                let rest = p - b1 * b1 - b2 * b2 - b3 * b3;
                if rest < 0 {
                    continue;
                }
                for b4 in (-m..=m).filter(|b| b % 2 == 0) {
                    if b4 * b4 == rest {
                        out.push([b1, b2, b3, b4]);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Which group the generators of an LPS graph generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpsGroup {
    /// `PSL(2, r)`, `r(r^2 - 1)/2` elements; `p` is a square mod `r`.
    Psl,
    /// `PGL(2, r)`, `r(r^2 - 1)` elements, bipartite; `p` is a non-square.
    Pgl,
}

#[derive(Clone, Debug)]
pub struct LpsGraph {
    pub graph: Graph,
    pub group: LpsGroup,
    /// Generators as projectively normalized `[a, b, c, d]` mod `r`.
    pub generators: Vec<[u64; 4]>,
    /// Group elements in vertex order.
    pub elements: Vec<[u64; 4]>,
}

type Mat = [u64; 4];

fn mat_canon(m: Mat, r: u64) -> Mat {
    let lead = *m.iter().find(|&&x| x != 0).expect("invertible matrix");
    let inv = pow_mod(lead, r - 2, r);
    m.map(|x| x * inv % r)
}

fn mat_mul(a: Mat, b: Mat, r: u64) -> Mat {
    [
        (a[0] * b[0] + a[1] * b[2]) % r,
        (a[0] * b[1] + a[1] * b[3]) % r,
        (a[2] * b[0] + a[3] * b[2]) % r,
        (a[2] * b[1] + a[3] * b[3]) % r,
    ]
}

fn mat_key(m: Mat, r: u64) -> u64 {
    ((m[0] * r + m[1]) * r + m[2]) * r + m[3]
}

/// The LPS Cayley graph on the subgroup of `PGL(2, r)` generated by the
/// `p + 1` matrices built from [`jacobi_solutions`]. Vertices are group
/// elements in breadth-first order from the identity; `x ~ x g`.
pub fn lps_graph(p: u64, r: u64) -> Result<LpsGraph> {
    for x in [p, r] {
        if x % 4 != 1 || !crate::field::is_prime(x) {
            return Err(Error::BadResidueClass(x));
        }
    }
    if p == r {
        return Err(Error::DomainError("p and r must be distinct".into()));
    }
    if (r * r) as f64 <= 4.0 * p as f64 {
        return Err(Error::DomainError(format!("need r > 2 sqrt(p), got p = {p}, r = {r}")));
    }
    // generators have determinant p, so they lie in PSL iff p is a square
    let group = if legendre(p as i64, r)? == 1 { LpsGroup::Psl } else { LpsGroup::Pgl };
    let pgl_order = r * (r * r - 1);
    let order = match group {
        LpsGroup::Psl => pgl_order / 2,
        LpsGroup::Pgl => pgl_order,
    };
    if order as usize > MAX_DENSE_VERTICES {
        return Err(Error::GroupTooLarge(order));
    }

    let i = sqrt_mod(-1, r)?;
    let red = |x: i64| x.rem_euclid(r as i64) as u64;
    let mut generators: Vec<Mat> = jacobi_solutions(p)?
        .into_iter()
        .map(|[b1, b2, b3, b4]| {
            let ii = i as i64;
            mat_canon(
                [red(b1 + ii * b2), red(b3 + ii * b4), red(-b3 + ii * b4), red(b1 - ii * b2)],
                r,
            )
        })
        .collect();
    generators.sort_unstable();
    generators.dedup();
    if generators.len() != (p + 1) as usize {
        return Err(Error::Inconsistent(format!(
            "{} distinct generators, expected {}",
            generators.len(),
            p + 1
        )));
    }

    let identity = [1, 0, 0, 1];
    let mut index: HashMap<u64, usize> = HashMap::with_capacity(order as usize);
    let mut elements = vec![identity];
    index.insert(mat_key(identity, r), 0);
    let mut edges = Vec::with_capacity(elements.len() * generators.len() / 2);
    let mut head = 0;
    while head < elements.len() {
        let x = elements[head];
        for &g in &generators {
            let y = mat_canon(mat_mul(x, g, r), r);
            let next = elements.len();
            let j = *index.entry(mat_key(y, r)).or_insert(next);
            if j == next {
                if next as u64 >= order {
                    return Err(Error::Inconsistent("generated group exceeds its expected order".into()));
                }
                elements.push(y);
            }
            if head != j {
                edges.push((head, j));
            }
        }
        head += 1;
    }
    if elements.len() as u64 != order {
        return Err(Error::Inconsistent(format!(
            "generated {} elements, expected {order}",
            elements.len()
        )));
    }
    let graph = Graph::collapsing(elements.len(), edges)?;
    if graph.regular_degree() != Some((p + 1) as usize) {
        return Err(Error::Inconsistent("collapsing edges changed the degree".into()));
    }
    Ok(LpsGraph {
        graph,
        group,
        generators,
        elements,
    })
}

/// Configuration-model sample, redrawn until simple.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if n * d % 2 == 1 {
        return Err(Error::ParityError { n, d });
    }
    if d >= n && !(n == 0 && d == 0) {
        return Err(Error::DomainError(format!("need d < n, got d = {d}, n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    const ATTEMPTS: usize = 100_000;
    for _ in 0..ATTEMPTS {
        stubs.shuffle(&mut rng);
        let pairs = stubs.chunks(2).map(|c| (c[0], c[1]));
        if let Ok(g) = Graph::new(n, pairs) {
            return Ok(g);
        }
    }
    Err(Error::BudgetExhausted(format!(
        "no simple {d}-regular graph on {n} vertices in {ATTEMPTS} draws"
    )))
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp_sample(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::DomainError(format!("edge probability {p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}
