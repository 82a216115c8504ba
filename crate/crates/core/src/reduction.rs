//! Field reduction from PG(K-1, q^2) to PG(2K-1, q): viable sets, derived
//! line sets, and repeated derivation down a tower of quadratic extensions.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::caps::Caps;
use crate::certificate::{Ambient, CheckStatus, Checks, Evidence, SbsCertificate, SizeAccounting};
use crate::codes::ProjectiveSystem;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::geometry::{line_through, ProjPoint};
use crate::graphs::Graph;
use crate::sbs::{build_lineset, certify_lines, union_points, LineSet};
use crate::subfield::SubfieldEmbedding;

/// GF(q^2) over GF(q) with the basis `{1, w}`, `w` the root of the big
/// field's modulus.
#[derive(Clone, Debug)]
pub struct FieldReduction {
    emb: SubfieldEmbedding,
}

impl FieldReduction {
    pub fn new(big: &Field) -> Result<FieldReduction> {
        if big.m() % 2 != 0 {
            return Err(Error::DomainError(format!("GF({}) is not a quadratic extension", big.q())));
        }
        let small = Field::new(big.p(), big.m() / 2)?;
        Ok(FieldReduction {
            emb: SubfieldEmbedding::new(big, &small)?,
        })
    }

    pub fn big(&self) -> &Field {
        self.emb.big()
    }

    pub fn small(&self) -> &Field {
        self.emb.small()
    }

    pub fn embedding(&self) -> &SubfieldEmbedding {
        &self.emb
    }

    fn omega(&self) -> Elem {
        self.emb.basis()[1]
    }

    fn expand(&self, v: &[Elem]) -> Vec<Elem> {
        v.iter().flat_map(|&z| self.emb.coords(z).iter().copied()).collect()
    }

    /// The line of PG(2K-1, q) spanned by the expansions of `v` and `w v`.
    pub fn reduce_point(&self, p: &ProjPoint) -> Result<Vec<ProjPoint>> {
        let big = self.big();
        let small = self.small();
        let v = p.coords();
        let wv: Vec<Elem> = v.iter().map(|&x| big.mul(self.omega(), x)).collect();
        let a = ProjPoint::new(small, self.expand(v))?;
        let b = ProjPoint::new(small, self.expand(&wv))?;
        line_through(small, &a, &b)
    }
}

pub fn field_reduce_point(red: &FieldReduction, p: &ProjPoint) -> Result<Vec<ProjPoint>> {
    red.reduce_point(p)
}

/// The GF(q)-subline through three distinct collinear points: parameter 0
/// at `a`, infinity at `b`, 1 at `c`. Sorted.
pub fn subline_through(red: &FieldReduction, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> Result<Vec<ProjPoint>> {
    let big = red.big();
    if a.len() != b.len() || a.len() != c.len() {
        return Err(Error::DimensionMismatch("points of different spaces".into()));
    }
    if a == b || a == c || b == c {
        return Err(Error::NotDistinct);
    }
    let comb = |lambda: Elem| -> Result<ProjPoint> {
        let v = a
            .coords()
            .iter()
            .zip(b.coords())
            .map(|(&x, &y)| big.add(x, big.mul(lambda, y)))
            .collect();
        ProjPoint::new(big, v)
    };
    // c = a + lambda b up to scalars, with lambda != 0 since c != a.
    let mut lambda = None;
    for l in big.elements().skip(1) {
        if comb(l)? == *c {
            lambda = Some(l);
            break;
        }
    }
    let lambda = lambda.ok_or(Error::NotCollinear)?;
    let mut out = vec![b.clone()];
    for t in red.small().elements() {
        out.push(comb(big.mul(red.emb.embed(t), lambda))?);
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ViableSet {
    /// One quadruple `(a, b, q3, q4)` per line, in line order.
    pub quadruples: Vec<[ProjPoint; 4]>,
    /// Distinct points of all quadruples, sorted.
    pub points: Vec<ProjPoint>,
}

/// `(a, b, q3, q4)` on `line` with `q3` the smallest other point and `q4`
/// the smallest point off the subline through `a, b, q3`.
pub fn viable_quadruple(red: &FieldReduction, line: &[ProjPoint], a: &ProjPoint, b: &ProjPoint) -> Result<[ProjPoint; 4]> {
    let q3 = line
        .iter()
        .find(|p| *p != a && *p != b)
        .ok_or_else(|| Error::Inconsistent("line has fewer than three points".into()))?;
    let sub = subline_through(red, a, b, q3)?;
    let q4 = line
        .iter()
        .find(|p| sub.binary_search(p).is_err())
        .ok_or_else(|| Error::Inconsistent("line is a single subline".into()))?;
    Ok([a.clone(), b.clone(), q3.clone(), q4.clone()])
}

fn collect_viable(quadruples: Vec<[ProjPoint; 4]>) -> ViableSet {
    let points: BTreeSet<ProjPoint> = quadruples.iter().flatten().cloned().collect();
    ViableSet {
        quadruples,
        points: points.into_iter().collect(),
    }
}

/// Viable set for an arbitrary line set, anchoring each line at its two
/// smallest points.
pub fn generic_viable_set(red: &FieldReduction, lines: &LineSet) -> Result<ViableSet> {
    check_field(red, lines)?;
    let quads = lines
        .lines()
        .par_iter()
        .map(|line| viable_quadruple(red, line, &line[0], &line[1]))
        .collect::<Result<Vec<_>>>()?;
    Ok(collect_viable(quads))
}

/// Viable set for `L(M, G)`, anchoring each line at the endpoints of its
/// first edge so that system points are shared between lines.
pub fn viable_set(red: &FieldReduction, points: &[ProjPoint], g: &Graph) -> Result<(LineSet, ViableSet)> {
    let k = points.first().map_or(0, ProjPoint::len);
    let lines = build_lineset(red.big(), k, points, g)?;
    let quads = (0..lines.len())
        .into_par_iter()
        .map(|i| {
            let (u, v) = lines.edges_of(i)[0];
            viable_quadruple(red, &lines.lines()[i], &points[u], &points[v])
        })
        .collect::<Result<Vec<_>>>()?;
    let viable = collect_viable(quads);
    let bound = points.len() + 2 * g.edge_count();
    if viable.points.len() > bound {
        return Err(Error::Inconsistent(format!(
            "viable set has {} points, above n + 2|E| = {bound}",
            viable.points.len()
        )));
    }
    Ok((lines, viable))
}

fn check_field(red: &FieldReduction, lines: &LineSet) -> Result<()> {
    if lines.field() != red.big() {
        return Err(Error::DomainError("line set is not over the reduction's big field".into()));
    }
    Ok(())
}

/// Field-reduction images of the viable points, tagged `[quadruple, slot]`.
pub fn derived_lines(red: &FieldReduction, viable: &ViableSet, k: usize) -> Result<LineSet> {
    let tagged: Vec<((usize, usize), &ProjPoint)> = viable
        .quadruples
        .iter()
        .enumerate()
        .flat_map(|(i, quad)| quad.iter().enumerate().map(move |(j, p)| ((i, j), p)))
        .collect();
    let images = tagged
        .par_iter()
        .map(|(_, p)| red.reduce_point(p))
        .collect::<Result<Vec<_>>>()?;
    let mut out = LineSet::new(red.small(), 2 * k);
    for ((tag, _), line) in tagged.iter().zip(images) {
        let idx = out.insert_points(line);
        out.push_edge(idx, *tag);
    }
    Ok(out)
}

/// Whether a source line set is certified enough to derive from: either
/// property checked, or integrity evidence for the graph construction.
pub fn source_certified(checks: &Checks, evidence: &Evidence) -> bool {
    checks.avoidance == CheckStatus::Passed
        || checks.strong == CheckStatus::Passed
        || matches!(evidence, Evidence::Exact { .. } | Evidence::Spectral { .. })
}

fn derived_certificate(
    lines: &LineSet,
    steps: usize,
    source_hash: String,
    mut avoid_hist: Vec<CheckStatus>,
    mut strong_hist: Vec<CheckStatus>,
    line_bound: usize,
    caps: &Caps,
) -> Result<SbsCertificate> {
    let points = union_points(lines);
    let (checks, witnesses) = certify_lines(lines, &points, caps)?;
    if checks.strong == CheckStatus::Failed {
        return Err(Error::Inconsistent(
            "derived set from a certified source is not a strong blocking set".into(),
        ));
    }
    let q = lines.field().q() as usize;
    if points.len() > line_bound {
        return Err(Error::Inconsistent(format!(
            "derived union has {} points, above the bound {line_bound}",
            points.len()
        )));
    }
    avoid_hist.push(checks.avoidance);
    strong_hist.push(checks.strong);
    let mut size = SizeAccounting::new(points.len(), q as u32, lines.k());
    size.line_bound = Some(line_bound);
    let mut cert = SbsCertificate::new(
        Ambient::new(lines.field(), lines.k()),
        "derived",
        &points,
        lines.records(),
        Evidence::Derived {
            steps,
            source_hash: source_hash.clone(),
            intermediate_avoidance: avoid_hist,
            intermediate_strong: strong_hist,
        },
        checks,
        witnesses,
        size,
    );
    cert.source_hash = Some(source_hash);
    Ok(cert)
}

/// One derivation of `B(M, G)` over GF(q^2). Returns the certificate of the
/// source line set and the derived one in PG(2K-1, q).
pub fn derive_sbs(system: &ProjectiveSystem, g: &Graph, caps: &Caps) -> Result<(SbsCertificate, SbsCertificate)> {
    let red = FieldReduction::new(system.field())?;
    let (lines, viable) = viable_set(&red, system.points(), g)?;
    let source = {
        let points = union_points(&lines);
        let (checks, witnesses) = certify_lines(&lines, &points, caps)?;
        let mut size = SizeAccounting::new(points.len(), red.big().q(), system.k());
        size.vertices = Some(g.n());
        size.edges = Some(g.edge_count());
        SbsCertificate::new(
            Ambient::new(red.big(), system.k()),
            "graph",
            &points,
            lines.records(),
            Evidence::None,
            checks,
            witnesses,
            size,
        )
    };
    if !source_certified(&source.checks, &source.evidence) {
        return Err(Error::AvoidanceNotCertified);
    }
    let derived = derived_lines(&red, &viable, system.k())?;
    let bound = viable.points.len() * (red.small().q() as usize + 1);
    let cert = derived_certificate(
        &derived,
        1,
        source.content_hash(),
        vec![source.checks.avoidance],
        vec![source.checks.strong],
        bound,
        caps,
    )?;
    Ok((source, cert))
}

/// `r` successive derivations of a line set over GF(q^(2^r)), each step
/// using four points per line. Intermediate line sets are certified within
/// the caps and their statuses recorded in the evidence.
pub fn repeat_derivation(
    lines: &LineSet,
    source: &Checks,
    source_evidence: &Evidence,
    source_hash: &str,
    r: usize,
    caps: &Caps,
) -> Result<SbsCertificate> {
    if !source_certified(source, source_evidence) {
        return Err(Error::AvoidanceNotCertified);
    }
    if r == 0 {
        let mut cert = crate::sbs::theorem_avoidance_to_sbs(lines, caps)?;
        cert.source_hash = Some(source_hash.to_string());
        return Ok(cert);
    }
    if lines.field().m() % (1 << r) != 0 {
        return Err(Error::DomainError(format!(
            "GF({}) is not a degree 2^{r} extension",
            lines.field().q()
        )));
    }
    let mut avoid_hist = vec![source.avoidance];
    let mut strong_hist = vec![source.strong];
    let mut current = lines.clone();
    for step in 0..r {
        let red = FieldReduction::new(current.field())?;
        let viable = generic_viable_set(&red, &current)?;
        let next = derived_lines(&red, &viable, current.k())?;
        if next.len() > 4 * current.len() {
            return Err(Error::Inconsistent("derivation more than quadrupled the lines".into()));
        }
        if step + 1 < r {
            let points = union_points(&next);
            let (checks, _) = certify_lines(&next, &points, caps)?;
            if checks.strong == CheckStatus::Failed {
                return Err(Error::Inconsistent(format!(
                    "intermediate union after step {} is not a strong blocking set",
                    step + 1
                )));
            }
            avoid_hist.push(checks.avoidance);
            strong_hist.push(checks.strong);
        }
        current = next;
    }
    let bound = lines.len() * 4usize.pow(r as u32) * (current.field().q() as usize + 1);
    derived_certificate(&current, r, source_hash.to_string(), avoid_hist, strong_hist, bound, caps)
}

/// Repeated derivation of a stored certificate.
pub fn derive_certificate(source: &SbsCertificate, r: usize, caps: &Caps) -> Result<SbsCertificate> {
    let field = source.ambient.field()?;
    if source.lines.is_empty() {
        return Err(Error::DomainError("certificate carries no lines".into()));
    }
    let lines = LineSet::from_records(&field, source.ambient.k, &source.lines)?;
    repeat_derivation(&lines, &source.checks, &source.evidence, &source.content_hash(), r, caps)
}
