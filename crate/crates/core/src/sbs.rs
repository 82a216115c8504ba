//! Line sets built from a point set and a graph, the avoidance and strong
//! blocking checks, minimal codes, and the graph-based construction with its
//! certificate.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::certificate::{
    Ambient, CheckStatus, Checks, Evidence, LineRecord, SbsCertificate, SizeAccounting, Witnesses,
};
use crate::codes::{for_each_projective_codeword, to_projective_system, GeneratorMatrix, ProjectiveSystem};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::geometry::{
    enumerate_hyperplanes, enumerate_points, gaussian_binomial, line_through, point_count, rank_of, Hyperplane,
    ProjPoint, RankAccumulator, Subspace,
};
use crate::graphs::Graph;
use crate::integrity::IntegrityCertificate;
use crate::spectral::SpectralReport;

/// Distinct lines of PG(k-1, q), each as its sorted `q + 1` points.
#[derive(Clone, Debug, PartialEq)]
pub struct LineSet {
    field: Field,
    k: usize,
    lines: Vec<Vec<ProjPoint>>,
    /// Graph edges mapped to each line, when built from a graph.
    edges: Vec<Vec<(usize, usize)>>,
    index: HashMap<Vec<ProjPoint>, usize>,
}

impl LineSet {
    pub fn new(field: &Field, k: usize) -> LineSet {
        LineSet {
            field: field.clone(),
            k,
            lines: Vec::new(),
            edges: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Adds the line through two distinct points; returns its index.
    pub fn insert_through(&mut self, a: &ProjPoint, b: &ProjPoint) -> Result<usize> {
        if a.len() != self.k || b.len() != self.k {
            return Err(Error::DimensionMismatch(format!("points must have {} coordinates", self.k)));
        }
        let line = line_through(&self.field, a, b)?;
        Ok(self.insert_points(line))
    }

    /// Adds a line given by its full sorted point list.
    pub(crate) fn insert_points(&mut self, line: Vec<ProjPoint>) -> usize {
        if let Some(&i) = self.index.get(&line) {
            return i;
        }
        let i = self.lines.len();
        self.index.insert(line.clone(), i);
        self.lines.push(line);
        self.edges.push(Vec::new());
        i
    }

    /// Records provenance for line `line`.
    pub(crate) fn push_edge(&mut self, line: usize, tag: (usize, usize)) {
        self.edges[line].push(tag);
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn lines(&self) -> &[Vec<ProjPoint>] {
        &self.lines
    }

    pub fn edges_of(&self, line: usize) -> &[(usize, usize)] {
        &self.edges[line]
    }

    /// Two distinct points spanning line `i`.
    pub fn spanning_pair(&self, i: usize) -> (&ProjPoint, &ProjPoint) {
        (&self.lines[i][0], &self.lines[i][1])
    }

    pub fn records(&self) -> Vec<LineRecord> {
        self.lines
            .iter()
            .zip(&self.edges)
            .map(|(pts, edges)| LineRecord {
                points: pts.iter().map(|p| p.coords().to_vec()).collect(),
                edges: edges.iter().map(|&(u, v)| [u, v]).collect(),
            })
            .collect()
    }

    pub fn from_records(field: &Field, k: usize, records: &[LineRecord]) -> Result<LineSet> {
        let mut set = LineSet::new(field, k);
        for r in records {
            let pts = r
                .points
                .iter()
                .map(|c| ProjPoint::new(field, c.clone()))
                .collect::<Result<Vec<_>>>()?;
            if pts.len() < 2 {
                return Err(Error::Parse("line record with fewer than two points".into()));
            }
            let i = set.insert_through(&pts[0], &pts[1])?;
            let expected: BTreeSet<&ProjPoint> = set.lines[i].iter().collect();
            let given: BTreeSet<&ProjPoint> = pts.iter().collect();
            if expected != given || pts.len() != set.lines[i].len() {
                return Err(Error::Inconsistent("line record is not a full projective line".into()));
            }
            set.edges[i].extend(r.edges.iter().map(|e| (e[0], e[1])));
        }
        Ok(set)
    }
}

/// One line `<P_u, P_v>` per edge `uv`; equal lines are merged.
pub fn build_lineset(field: &Field, k: usize, points: &[ProjPoint], g: &Graph) -> Result<LineSet> {
    if g.n() != points.len() {
        return Err(Error::DimensionMismatch(format!(
            "graph has {} vertices, point set has {}",
            g.n(),
            points.len()
        )));
    }
    let mut set = LineSet::new(field, k);
    for &(u, v) in g.edges() {
        if points[u] == points[v] {
            return Err(Error::RepeatedPoint(u, v));
        }
        let i = set.insert_through(&points[u], &points[v])?;
        set.edges[i].push((u, v));
    }
    Ok(set)
}

/// Sorted union of the points on the lines.
pub fn union_points(lines: &LineSet) -> Vec<ProjPoint> {
    let set: BTreeSet<&ProjPoint> = lines.lines.iter().flatten().collect();
    set.into_iter().cloned().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidanceCheck {
    pub holds: bool,
    /// Reduced basis of a codimension-2 subspace meeting every line.
    pub witness: Option<Vec<Vec<Elem>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongCheck {
    pub holds: bool,
    /// Dual coordinates of a hyperplane whose section does not span it.
    pub witness: Option<Vec<Elem>>,
}

/// `det [[u.a, u.b], [v.a, v.b]]`: zero iff the line `<a, b>` meets the
/// annihilator of `<u, v>`.
fn meets(field: &Field, u: &[Elem], v: &[Elem], a: &[Elem], b: &[Elem]) -> bool {
    let ua = field.dot(u, a);
    let ub = field.dot(u, b);
    let va = field.dot(v, a);
    let vb = field.dot(v, b);
    field.mul(ua, vb) == field.mul(ub, va)
}

/// Scans the reduced 2-row matrices with pivots `(i, j)` for one whose
/// annihilator meets every line.
fn scan_pivot_pair(field: &Field, k: usize, i: usize, j: usize, pairs: &[(&[Elem], &[Elem])]) -> Option<(Vec<Elem>, Vec<Elem>)> {
    let q = field.q();
    let free: Vec<(usize, usize)> = (i + 1..k)
        .filter(|&c| c != j)
        .map(|c| (0, c))
        .chain((j + 1..k).map(|c| (1, c)))
        .collect();
    let mut values = vec![0 as Elem; free.len()];
    let mut u = vec![0 as Elem; k];
    let mut v = vec![0 as Elem; k];
    u[i] = 1;
    v[j] = 1;
    loop {
        for (&(row, c), &x) in free.iter().zip(&values) {
            if row == 0 {
                u[c] = x;
            } else {
                v[c] = x;
            }
        }
        if pairs.iter().all(|(a, b)| meets(field, &u, &v, a, b)) {
            return Some((u, v));
        }
        let mut pos = values.len();
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            values[pos] += 1;
            if values[pos] < q {
                break;
            }
            values[pos] = 0;
        }
    }
}

/// Whether no codimension-2 subspace meets every line. The subspaces are
/// visited as annihilators of the lines of the dual space, in reduced
/// echelon order; the first one meeting all lines is the witness.
pub fn check_avoidance(lines: &LineSet, cap: u128) -> Result<AvoidanceCheck> {
    let (field, k) = (&lines.field, lines.k);
    if k < 2 {
        return Err(Error::DomainError("avoidance needs k >= 2".into()));
    }
    if k == 2 {
        // the only codimension-2 subspace is empty and meets nothing
        let holds = !lines.is_empty();
        return Ok(AvoidanceCheck {
            holds,
            witness: (!holds).then(Vec::new),
        });
    }
    let count = gaussian_binomial(k as u32, 2, field.q() as u64);
    if count > cap {
        return Err(Error::SpaceTooLarge {
            what: "codimension-2 subspaces",
            count,
            cap,
        });
    }
    let pairs: Vec<(&[Elem], &[Elem])> = (0..lines.len())
        .map(|i| {
            let (a, b) = lines.spanning_pair(i);
            (a.coords(), b.coords())
        })
        .collect();
    let pivot_pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let found = pivot_pairs
        .par_iter()
        .find_map_first(|&(i, j)| scan_pivot_pair(field, k, i, j, &pairs));
    Ok(match found {
        None => AvoidanceCheck {
            holds: true,
            witness: None,
        },
        Some((u, v)) => {
            let codim2 = Subspace::span(field, k, &[u, v])?.dual(field, k);
            AvoidanceCheck {
                holds: false,
                witness: Some(codim2.basis),
            }
        }
    })
}

/// Whether every hyperplane section of `points` spans the hyperplane.
pub fn check_strong_blocking(field: &Field, k: usize, points: &[ProjPoint], cap: u128) -> Result<StrongCheck> {
    if points.iter().any(|p| p.len() != k) {
        return Err(Error::DimensionMismatch(format!("points must have {k} coordinates")));
    }
    let hyperplanes = enumerate_hyperplanes(field, k, cap)?;
    let fails = |h: &Hyperplane| {
        let mut acc = RankAccumulator::new(field);
        for p in points {
            if h.contains(field, p) && acc.insert(p.coords()) && acc.rank() == k - 1 {
                return false;
            }
        }
        k > 1
    };
    let first = hyperplanes.par_iter().position_first(fails);
    Ok(StrongCheck {
        holds: first.is_none(),
        witness: first.map(|i| hyperplanes[i].dual.coords().to_vec()),
    })
}

/// Runs both checks, treating cap overruns as skipped. Fails if avoidance
/// holds while the union is not strong, or if a strong blocking set comes
/// out smaller than `(q + 1)(k - 1)`.
pub fn certify_lines(lines: &LineSet, points: &[ProjPoint], caps: &Caps) -> Result<(Checks, Witnesses)> {
    let field = lines.field();
    let k = lines.k();
    let mut checks = Checks {
        avoidance: CheckStatus::Skipped,
        strong: CheckStatus::Skipped,
    };
    let mut witnesses = Witnesses::default();
    match check_avoidance(lines, caps.codim2) {
        Ok(a) => {
            checks.avoidance = CheckStatus::from(a.holds);
            witnesses.avoidance = a.witness;
        }
        Err(Error::SpaceTooLarge { .. }) => {}
        Err(e) => return Err(e),
    }
    let (strong, witness) = certify_points(field, k, points, caps)?;
    checks.strong = strong;
    witnesses.strong = witness;
    if checks.avoidance == CheckStatus::Passed && checks.strong == CheckStatus::Failed {
        return Err(Error::Inconsistent(
            "line set has the avoidance property but its union is not a strong blocking set".into(),
        ));
    }
    Ok((checks, witnesses))
}

/// Strong-blocking status of a point set under the hyperplane cap.
pub fn certify_points(field: &Field, k: usize, points: &[ProjPoint], caps: &Caps) -> Result<(CheckStatus, Option<Vec<Elem>>)> {
    match check_strong_blocking(field, k, points, caps.hyperplanes) {
        Ok(s) => {
            let lower = (field.q() as usize + 1) * (k - 1);
            if s.holds && points.len() < lower {
                return Err(Error::Inconsistent(format!(
                    "strong blocking set of size {} is below the lower bound {lower}",
                    points.len()
                )));
            }
            Ok((CheckStatus::from(s.holds), s.witness))
        }
        Err(Error::SpaceTooLarge { .. }) => Ok((CheckStatus::Skipped, None)),
        Err(e) => Err(e),
    }
}

/// Checks both the avoidance property and the strong blocking property of
/// the union and packages the result.
pub fn theorem_avoidance_to_sbs(lines: &LineSet, caps: &Caps) -> Result<SbsCertificate> {
    let points = union_points(lines);
    let (checks, witnesses) = certify_lines(lines, &points, caps)?;
    Ok(SbsCertificate::new(
        Ambient::new(lines.field(), lines.k()),
        "lines",
        &points,
        lines.records(),
        Evidence::None,
        checks,
        witnesses,
        SizeAccounting::new(points.len(), lines.field().q(), lines.k()),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalCheck {
    pub minimal: bool,
    /// Codewords `c, c'` with `supp(c)` inside `supp(c')`, not proportional.
    pub witness: Option<[Vec<Elem>; 2]>,
}

/// Whether every nonzero codeword is minimal: no support contains the
/// support of a non-proportional codeword.
pub fn check_minimal_code(g: &GeneratorMatrix, budget: u128) -> Result<MinimalCheck> {
    let count = (g.field().q() as u128).checked_pow(g.k() as u32).unwrap_or(u128::MAX);
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    let words_per = g.n().div_ceil(64);
    let mut supports: Vec<Vec<u64>> = Vec::new();
    let mut words: Vec<Vec<Elem>> = Vec::new();
    for_each_projective_codeword(g, |_, w| {
        let mut s = vec![0u64; words_per];
        for (j, &x) in w.iter().enumerate() {
            if x != 0 {
                s[j / 64] |= 1 << (j % 64);
            }
        }
        supports.push(s);
        words.push(w.to_vec());
    });
    let subset = |a: &[u64], b: &[u64]| a.iter().zip(b).all(|(x, y)| x & !y == 0);
    for (i, si) in supports.iter().enumerate() {
        for (j, sj) in supports.iter().enumerate() {
            if i != j && subset(si, sj) {
                return Ok(MinimalCheck {
                    minimal: false,
                    witness: Some([words[i].clone(), words[j].clone()]),
                });
            }
        }
    }
    Ok(MinimalCheck {
        minimal: true,
        witness: None,
    })
}

/// Minimality by codeword supports next to the strong blocking property of
/// the column system; the two must agree for nondegenerate codes.
pub fn minimal_code_cross_check(g: &GeneratorMatrix, caps: &Caps) -> Result<(bool, bool)> {
    let minimal = check_minimal_code(g, caps.minimal_codewords)?.minimal;
    let system = to_projective_system(g, caps.hyperplanes, caps.codewords)?;
    let distinct: BTreeSet<ProjPoint> = system.points().iter().cloned().collect();
    let pts: Vec<ProjPoint> = distinct.into_iter().collect();
    let strong = check_strong_blocking(g.field(), g.k(), &pts, caps.hyperplanes)?.holds;
    if minimal != strong {
        return Err(Error::Inconsistent(format!(
            "minimal = {minimal} but strong blocking = {strong}"
        )));
    }
    Ok((minimal, strong))
}

/// Integrity evidence for the graph-based construction.
#[derive(Clone, Debug, PartialEq)]
pub enum IntegrityEvidence {
    Exact(IntegrityCertificate),
    Spectral { n: usize, d: usize, lambda: f64 },
}

impl IntegrityEvidence {
    pub fn from_spectrum(g: &Graph, report: &SpectralReport) -> Result<IntegrityEvidence> {
        let d = report.degree.ok_or(Error::NotRegular)?;
        Ok(IntegrityEvidence::Spectral {
            n: g.n(),
            d,
            lambda: report.lambda,
        })
    }

    /// Certified lower bound on the integrity.
    pub fn value(&self) -> Result<usize> {
        match self {
            IntegrityEvidence::Exact(c) => Ok(c.value),
            IntegrityEvidence::Spectral { n, d, lambda } => {
                crate::integrity::spectral_integrity_lb(*n, *d as f64, *lambda)
            }
        }
    }

    fn validate(&self, g: &Graph) -> Result<()> {
        match self {
            IntegrityEvidence::Exact(c) if !c.verify(g) => {
                Err(Error::Inconsistent("integrity certificate does not match the graph".into()))
            }
            IntegrityEvidence::Spectral { n, d, .. } if *n != g.n() || g.regular_degree() != Some(*d) => Err(
                Error::Inconsistent("spectral evidence does not describe the graph".into()),
            ),
            _ => Ok(()),
        }
    }

    fn record(&self, required: usize) -> Result<Evidence> {
        Ok(match self {
            IntegrityEvidence::Exact(c) => Evidence::Exact {
                value: c.value,
                witness_set: c.witness_set.clone(),
                kappa: c.kappa,
                required,
            },
            IntegrityEvidence::Spectral { n, d, lambda } => Evidence::Spectral {
                n: *n,
                d: *d,
                lambda: *lambda,
                bound: self.value()?,
                required,
            },
        })
    }
}

/// `B(M, G)` for a projective system `M` and a graph with certified
/// integrity at least `n - d + 1`.
pub fn construct_main(
    system: &ProjectiveSystem,
    g: &Graph,
    evidence: &IntegrityEvidence,
    caps: &Caps,
) -> Result<SbsCertificate> {
    let params = system.params();
    if g.n() != params.n {
        return Err(Error::DimensionMismatch(format!(
            "graph has {} vertices, the system has {} points",
            g.n(),
            params.n
        )));
    }
    evidence.validate(g)?;
    let required = params.n - params.d + 1;
    let value = evidence.value()?;
    if value < required {
        return Err(Error::IntegrityHypothesisUnmet {
            evidence: value,
            required,
        });
    }
    let field = system.field();
    let lines = build_lineset(field, params.k, system.points(), g)?;
    let points = union_points(&lines);
    let q = field.q() as usize;
    let line_bound = params.n + (q - 1) * g.edge_count();
    if points.len() > line_bound {
        return Err(Error::Inconsistent(format!(
            "{} points exceed n + (q - 1)|E| = {line_bound}",
            points.len()
        )));
    }
    let (checks, witnesses) = certify_lines(&lines, &points, caps)?;
    if checks.avoidance == CheckStatus::Failed || checks.strong == CheckStatus::Failed {
        return Err(Error::Inconsistent(
            "integrity hypothesis met but the construction failed verification".into(),
        ));
    }
    let mut size = SizeAccounting::new(points.len(), field.q(), params.k);
    size.vertices = Some(params.n);
    size.edges = Some(g.edge_count());
    size.line_bound = Some(line_bound);
    Ok(SbsCertificate::new(
        Ambient::new(field, params.k),
        "graph",
        &points,
        lines.records(),
        evidence.record(required)?,
        checks,
        witnesses,
        size,
    ))
}

fn unit(k: usize, i: usize) -> Vec<Elem> {
    (0..k).map(|j| Elem::from(i == j)).collect()
}

/// The standard frame `e_1, .., e_k` with all joining lines.
pub fn tetrahedron(field: &Field, k: usize, caps: &Caps) -> Result<SbsCertificate> {
    if k < 2 {
        return Err(Error::DomainError("tetrahedron needs k >= 2".into()));
    }
    let frame: Vec<ProjPoint> = (0..k).map(|i| ProjPoint::new(field, unit(k, i))).collect::<Result<_>>()?;
    let complete = Graph::complete(k)?;
    let lines = build_lineset(field, k, &frame, &complete)?;
    let points = union_points(&lines);
    let expected = k * (k - 1) / 2 * (field.q() as usize - 1) + k;
    if points.len() != expected {
        return Err(Error::Inconsistent(format!("tetrahedron has {} points, expected {expected}", points.len())));
    }
    let (checks, witnesses) = certify_lines(&lines, &points, caps)?;
    let mut size = SizeAccounting::new(points.len(), field.q(), k);
    size.vertices = Some(k);
    size.edges = Some(complete.edge_count());
    size.line_bound = Some(expected);
    Ok(SbsCertificate::new(
        Ambient::new(field, k),
        "tetrahedron",
        &points,
        lines.records(),
        Evidence::Baseline { name: "tetrahedron".into() },
        checks,
        witnesses,
        size,
    ))
}

/// Tangent lines to the rational normal curve `t -> (1, t, .., t^{k-1})` at
/// the first `2k - 3` field elements.
pub fn rational_normal_tangents(field: &Field, k: usize, caps: &Caps) -> Result<SbsCertificate> {
    let q = field.q() as usize;
    if k < 2 || q < 2 * k - 3 || field.p() as usize <= k {
        return Err(Error::HypothesisUnmet(format!(
            "tangent construction needs q >= 2k - 3 and characteristic > k (k = {k}, q = {q}, p = {})",
            field.p()
        )));
    }
    let mut lines = LineSet::new(field, k);
    for t in 0..(2 * k - 3) as Elem {
        let curve: Vec<Elem> = (0..k).map(|i| field.pow(t, i as u64)).collect();
        let tangent: Vec<Elem> = (0..k)
            .map(|i| {
                if i == 0 {
                    0
                } else {
                    field.mul(field.from_int(i as i64), field.pow(t, i as u64 - 1))
                }
            })
            .collect();
        let a = ProjPoint::new(field, curve)?;
        let b = ProjPoint::new(field, tangent)?;
        lines.insert_through(&a, &b)?;
    }
    let points = union_points(&lines);
    let (checks, witnesses) = certify_lines(&lines, &points, caps)?;
    let mut size = SizeAccounting::new(points.len(), field.q(), k);
    size.line_bound = Some((2 * k - 3) * (q + 1));
    Ok(SbsCertificate::new(
        Ambient::new(field, k),
        "tangents",
        &points,
        lines.records(),
        Evidence::Baseline {
            name: "rational normal curve tangents".into(),
        },
        checks,
        witnesses,
        size,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub k: usize,
    pub q: u32,
    pub size: usize,
    /// `(q + 1)(k - 1)`.
    pub lower: usize,
    /// `k - 1 + floor((k - 1) / 2)` lines are needed for avoidance.
    pub line_count_lower: usize,
    pub existence_upper: f64,
    pub meets_lower: bool,
}

pub fn bounds_report(k: usize, q: u32, size: usize) -> BoundsReport {
    let lower = (q as usize + 1) * (k - 1);
    BoundsReport {
        k,
        q,
        size,
        lower,
        line_count_lower: k - 1 + (k - 1) / 2,
        existence_upper: crate::constants::existence_upper_bound(k, q as f64),
        meets_lower: size >= lower,
    }
}

/// Exhaustive form of the component-spanning condition: every `S` leaves
/// a component `C` of `G - S` with `<S u C>` the whole space. Returns a
/// failing `S` if there is one. Exponential; for test oracles only.
pub fn component_spanning_condition(field: &Field, points: &[ProjPoint], g: &Graph) -> Result<Option<Vec<usize>>> {
    const GUARD: usize = 15;
    let n = points.len();
    if n > GUARD {
        return Err(Error::TooLarge { n, cap: GUARD });
    }
    if g.n() != n {
        return Err(Error::DimensionMismatch("graph and point set differ in size".into()));
    }
    let k = points.first().map_or(0, ProjPoint::len);
    for s in 0u32..1 << n {
        let in_s = |v: usize| s >> v & 1 == 1;
        let mut label = vec![usize::MAX; n];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for start in (0..n).filter(|&v| !in_s(v)) {
            if label[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut comp = vec![start];
            label[start] = id;
            let mut i = 0;
            while i < comp.len() {
                for &w in g.neighbors(comp[i]) {
                    if !in_s(w) && label[w] == usize::MAX {
                        label[w] = id;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comps.push(comp);
        }
        let s_vecs: Vec<&[Elem]> = (0..n).filter(|&v| in_s(v)).map(|v| points[v].coords()).collect();
        let spans = |extra: &[usize]| {
            rank_of(field, s_vecs.iter().copied().chain(extra.iter().map(|&v| points[v].coords()))) == k
        };
        let ok = if comps.is_empty() { spans(&[]) } else { comps.iter().any(|c| spans(c)) };
        if !ok {
            return Ok(Some((0..n).filter(|&v| in_s(v)).collect()));
        }
    }
    Ok(None)
}

/// `count` lines through seeded random pairs of distinct points.
pub fn random_lineset(field: &Field, k: usize, count: usize, seed: u64, caps: &Caps) -> Result<LineSet> {
    let pts = enumerate_points(field, k, caps.points)?;
    if pts.len() < 2 {
        return Err(Error::DomainError("space has fewer than two points".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = LineSet::new(field, k);
    for _ in 0..count {
        let i = rng.gen_range(0..pts.len());
        let mut j = rng.gen_range(0..pts.len() - 1);
        if j >= i {
            j += 1;
        }
        lines.insert_through(&pts[i], &pts[j])?;
    }
    Ok(lines)
}

/// Every point of PG(k-1, q), for sanity checks.
pub fn whole_space(field: &Field, k: usize, caps: &Caps) -> Result<Vec<ProjPoint>> {
    let count = point_count(k, field.q() as u64);
    if count > caps.points {
        return Err(Error::SpaceTooLarge {
            what: "points",
            count,
            cap: caps.points,
        });
    }
    enumerate_points(field, k, caps.points)
}

/// Edge provenance keyed by line index, for reports.
pub fn provenance(lines: &LineSet) -> BTreeMap<usize, Vec<(usize, usize)>> {
    (0..lines.len()).map(|i| (i, lines.edges_of(i).to_vec())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{parity_generator, rs_generator, simplex_generator};

    fn f(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    fn pt(field: &Field, c: &[Elem]) -> ProjPoint {
        ProjPoint::new(field, c.to_vec()).unwrap()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    fn fano_triangle() -> LineSet {
        let f2 = f(2);
        let frame = [pt(&f2, &[1, 0, 0]), pt(&f2, &[0, 1, 0]), pt(&f2, &[0, 0, 1])];
        build_lineset(&f2, 3, &frame, &Graph::complete(3).unwrap()).unwrap()
    }

    #[test]
    fn lineset_basics() {
        let tri = fano_triangle();
        assert_eq!(tri.len(), 3);
        assert_eq!(union_points(&tri).len(), 6);
        let f2 = f(2);
        let frame = [pt(&f2, &[1, 0, 0]), pt(&f2, &[0, 1, 0]), pt(&f2, &[0, 0, 1])];
        assert!(build_lineset(&f2, 3, &frame, &Graph::empty(3)).unwrap().is_empty());
        let dup = [pt(&f2, &[1, 0, 0]), pt(&f2, &[1, 0, 0])];
        assert_eq!(
            build_lineset(&f2, 3, &dup, &Graph::complete(2).unwrap()),
            Err(Error::RepeatedPoint(0, 1))
        );
        // three collinear points give one line
        let col = [pt(&f2, &[1, 0, 0]), pt(&f2, &[0, 1, 0]), pt(&f2, &[1, 1, 0])];
        let one = build_lineset(&f2, 3, &col, &Graph::complete(3).unwrap()).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.edges_of(0).len(), 3);
        let f3 = f(3);
        let mut single = LineSet::new(&f3, 3);
        single.insert_through(&pt(&f3, &[1, 0, 0]), &pt(&f3, &[0, 1, 0])).unwrap();
        assert_eq!(union_points(&single).len(), 4);
    }

    #[test]
    fn avoidance_examples() {
        assert!(check_avoidance(&fano_triangle(), 1 << 20).unwrap().holds);
        let f2 = f(2);
        let mut concurrent = LineSet::new(&f2, 3);
        let centre = pt(&f2, &[1, 0, 0]);
        for other in [[0, 1, 0], [0, 0, 1], [0, 1, 1]] {
            concurrent.insert_through(&centre, &pt(&f2, &other)).unwrap();
        }
        let a = check_avoidance(&concurrent, 1 << 20).unwrap();
        assert!(!a.holds);
        assert_eq!(a.witness, Some(vec![vec![1, 0, 0]]));
        let tet = tetrahedron(&f2, 4, &caps()).unwrap();
        assert_eq!(tet.checks.avoidance, CheckStatus::Passed);
        assert!(matches!(
            check_avoidance(&concurrent, 3),
            Err(Error::SpaceTooLarge { .. })
        ));
    }

    /// Avoidance by direct enumeration of all codimension-2 subspaces.
    fn avoidance_oracle(lines: &LineSet) -> bool {
        let field = lines.field();
        let k = lines.k();
        crate::geometry::enumerate_codim2(field, k, 1 << 20)
            .unwrap()
            .iter()
            .all(|h| lines.lines().iter().any(|l| l.iter().all(|p| !h.contains(field, p.coords()))))
    }

    #[test]
    fn avoidance_matches_direct_enumeration() {
        for seed in 0..40 {
            let (q, k) = if seed % 2 == 0 { (2, 4) } else { (3, 3) };
            let lines = random_lineset(&f(q), k, 2 + seed as usize % 6, seed, &caps()).unwrap();
            assert_eq!(check_avoidance(&lines, 1 << 20).unwrap().holds, avoidance_oracle(&lines), "seed {seed}");
        }
    }

    #[test]
    fn strong_blocking_examples() {
        let f2 = f(2);
        let all = whole_space(&f2, 3, &caps()).unwrap();
        assert!(check_strong_blocking(&f2, 3, &all, 1 << 20).unwrap().holds);
        let line = line_through(&f2, &pt(&f2, &[1, 0, 0]), &pt(&f2, &[0, 1, 0])).unwrap();
        let s = check_strong_blocking(&f2, 3, &line, 1 << 20).unwrap();
        assert!(!s.holds);
        assert_eq!(s.witness, Some(vec![0, 1, 0]));
        assert!(check_strong_blocking(&f2, 3, &union_points(&fano_triangle()), 1 << 20).unwrap().holds);
    }

    #[test]
    fn theorem_certificates() {
        let c = theorem_avoidance_to_sbs(&fano_triangle(), &caps()).unwrap();
        assert_eq!((c.checks.avoidance, c.checks.strong), (CheckStatus::Passed, CheckStatus::Passed));
        let f2 = f(2);
        let mut concurrent = LineSet::new(&f2, 3);
        let centre = pt(&f2, &[1, 0, 0]);
        for other in [[0, 1, 0], [0, 0, 1], [0, 1, 1]] {
            concurrent.insert_through(&centre, &pt(&f2, &other)).unwrap();
        }
        let c = theorem_avoidance_to_sbs(&concurrent, &caps()).unwrap();
        assert_eq!(c.checks.avoidance, CheckStatus::Failed);
        // in PG(2, 2) three concurrent lines cover the whole plane
        assert_eq!(c.checks.strong, CheckStatus::Passed);

        let f3 = f(3);
        let mut concurrent = LineSet::new(&f3, 3);
        let centre = pt(&f3, &[1, 0, 0]);
        for other in [[0, 1, 0], [0, 0, 1], [0, 1, 1]] {
            concurrent.insert_through(&centre, &pt(&f3, &other)).unwrap();
        }
        let c = theorem_avoidance_to_sbs(&concurrent, &caps()).unwrap();
        assert_eq!((c.checks.avoidance, c.checks.strong), (CheckStatus::Failed, CheckStatus::Failed));
        // y + z = 0 meets the union only in the centre
        assert_eq!(c.witnesses.strong, Some(vec![0, 1, 1]));
    }

    #[test]
    fn minimal_codes() {
        let f2 = f(2);
        assert!(check_minimal_code(&simplex_generator(&f2, 3).unwrap(), 1 << 12).unwrap().minimal);
        assert!(check_minimal_code(&parity_generator(&f2, 2).unwrap(), 1 << 12).unwrap().minimal);
        let full = GeneratorMatrix::new(&f2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let m = check_minimal_code(&full, 1 << 12).unwrap();
        assert!(!m.minimal);
        assert_eq!(m.witness, Some([vec![1, 0], vec![1, 1]]));
        assert!(matches!(
            check_minimal_code(&rs_generator(&f(7), 7, 5).unwrap(), 1 << 12),
            Err(Error::BudgetExceeded { .. })
        ));
        assert_eq!(minimal_code_cross_check(&simplex_generator(&f2, 3).unwrap(), &caps()), Ok((true, true)));
    }

    #[test]
    fn construct_main_on_rs_and_cycle() {
        let rs = rs_generator(&f(5), 5, 3);
        assert!(rs.is_ok());
        let f7 = f(7);
        let sys = to_projective_system(&rs_generator(&f7, 6, 3).unwrap(), 1 << 20, 1 << 20).unwrap();
        let c6 = Graph::cycle(6).unwrap();
        let ev = IntegrityEvidence::Exact(crate::integrity::integrity_exact(&c6, 25).unwrap());
        let cert = construct_main(&sys, &c6, &ev, &caps()).unwrap();
        assert_eq!(cert.checks.strong, CheckStatus::Passed);
        assert!(cert.points.len() <= 6 + 6 * 6);
        let empty = Graph::empty(6);
        let ev = IntegrityEvidence::Exact(crate::integrity::integrity_exact(&empty, 25).unwrap());
        assert_eq!(
            construct_main(&sys, &empty, &ev, &caps()),
            Err(Error::IntegrityHypothesisUnmet { evidence: 1, required: 3 })
        );
    }

    #[test]
    fn complete_graph_on_frame_is_tetrahedron() {
        let f3 = f(3);
        let g = crate::codes::identity_generator(&f3, 4).unwrap();
        let sys = to_projective_system(&g, 1 << 20, 1 << 20).unwrap();
        let k4 = Graph::complete(4).unwrap();
        let ev = IntegrityEvidence::Exact(crate::integrity::integrity_exact(&k4, 25).unwrap());
        let cert = construct_main(&sys, &k4, &ev, &caps()).unwrap();
        let tet = tetrahedron(&f3, 4, &caps()).unwrap();
        assert_eq!(cert.points, tet.points);
        assert_eq!(cert.points.len(), 16);
    }

    #[test]
    fn baselines() {
        let t = tetrahedron(&f(2), 3, &caps()).unwrap();
        assert_eq!((t.points.len(), t.checks.strong), (6, CheckStatus::Passed));
        let t = tetrahedron(&f(2), 4, &caps()).unwrap();
        assert_eq!((t.points.len(), t.checks.strong), (10, CheckStatus::Passed));
        // three pairwise meeting lines of a plane: 3(q + 1) - 3 points
        let r = rational_normal_tangents(&f(7), 3, &caps()).unwrap();
        assert_eq!((r.points.len(), r.checks.strong), (21, CheckStatus::Passed));
        assert_eq!(r.size.line_bound, Some(24));
        let r = rational_normal_tangents(&f(5), 3, &caps()).unwrap();
        assert_eq!((r.points.len(), r.checks.strong), (15, CheckStatus::Passed));
        assert!(matches!(
            rational_normal_tangents(&f(3), 4, &caps()),
            Err(Error::HypothesisUnmet(_))
        ));
    }

    #[test]
    fn bounds() {
        let b = bounds_report(3, 2, 6);
        assert_eq!((b.lower, b.meets_lower), (6, true));
        let b = bounds_report(4, 2, 10);
        assert!((b.existence_upper - 7.0 / (4f64 / 3.0).log2()).abs() < 1e-9);
        assert_eq!(b.line_count_lower, 4);
    }

    #[test]
    fn component_condition_implies_avoidance() {
        let f2 = f(2);
        let frame = [pt(&f2, &[1, 0, 0]), pt(&f2, &[0, 1, 0]), pt(&f2, &[0, 0, 1])];
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(component_spanning_condition(&f2, &frame, &k3), Ok(None));
        let path = Graph::path(3).unwrap();
        assert!(component_spanning_condition(&f2, &frame, &path).unwrap().is_some());
        for seed in 0..30 {
            let f3 = f(3);
            let g = crate::codes::random_generator(&f3, 3, 7, seed).unwrap();
            let sys = to_projective_system(&g, 1 << 20, 1 << 20).unwrap();
            let distinct: BTreeSet<&ProjPoint> = sys.points().iter().collect();
            if distinct.len() != sys.points().len() {
                continue;
            }
            let graph = crate::graphs::gnp_sample(7, 0.5, seed).unwrap();
            let lines = build_lineset(&f3, 3, sys.points(), &graph).unwrap();
            if component_spanning_condition(&f3, sys.points(), &graph).unwrap().is_none() {
                assert!(check_avoidance(&lines, 1 << 20).unwrap().holds, "seed {seed}");
            }
        }
    }
}
