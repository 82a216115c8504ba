//! Points, lines, hyperplanes and subspaces of PG(k-1, q).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// Enumeration cap shared by the point, hyperplane and codimension-2
/// enumerators.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 22;

/// Canonical representative of a projective point: the first nonzero
/// coordinate is 1. Ordering is lexicographic on coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjPoint {
    coords: Vec<Elem>,
}

/// Scales `v` in place so its first nonzero entry is 1. Returns `false` for
/// the zero vector.
pub fn normalize(field: &Field, v: &mut [Elem]) -> bool {
    let Some(lead) = v.iter().copied().find(|&x| x != 0) else {
        return false;
    };
    if lead != 1 {
        let scale = field.inv(lead).expect("nonzero");
        for x in v.iter_mut() {
            *x = field.mul(*x, scale);
        }
    }
    true
}

impl ProjPoint {
    /// Canonicalizes an arbitrary nonzero vector.
    pub fn new(field: &Field, mut coords: Vec<Elem>) -> Result<ProjPoint> {
        for &c in &coords {
            field.check(c)?;
        }
        if !normalize(field, &mut coords) {
            return Err(Error::ZeroVector);
        }
        Ok(ProjPoint { coords })
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    /// Vector dimension `k` of the ambient space.
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn into_coords(self) -> Vec<Elem> {
        self.coords
    }
}

/// Number of points of PG(k-1, q), that is `(q^k - 1)/(q - 1)`.
pub fn point_count(k: usize, q: u64) -> u128 {
    (0..k).map(|i| (q as u128).pow(i as u32)).sum()
}

fn guard(what: &'static str, count: u128, cap: u128) -> Result<()> {
    if count > cap {
        Err(Error::SpaceTooLarge { what, count, cap })
    } else {
        Ok(())
    }
}

/// All points of PG(k-1, q) in lexicographic order of their canonical
/// coordinates.
pub fn enumerate_points(field: &Field, k: usize, cap: u128) -> Result<Vec<ProjPoint>> {
    if k < 1 {
        return Err(Error::DomainError("vector dimension must be positive".into()));
    }
    let q = field.q();
    let count = point_count(k, q as u64);
    guard("points", count, cap)?;
    let mut out = Vec::with_capacity(count as usize);
    // the leading 1 moves leftwards; each block is an odometer on the tail
    for lead in (0..k).rev() {
        let tail = k - lead - 1;
        for mut code in 0..(q as u64).pow(tail as u32) {
            let mut v = vec![0; k];
            v[lead] = 1;
            for slot in v[lead + 1..].iter_mut().rev() {
                *slot = (code % q as u64) as Elem;
                code /= q as u64;
            }
            out.push(ProjPoint { coords: v });
        }
    }
    Ok(out)
}

/// The `q + 1` points of the line through two distinct points, sorted.
pub fn line_through(field: &Field, a: &ProjPoint, b: &ProjPoint) -> Result<Vec<ProjPoint>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch("points of different spaces".into()));
    }
    if a == b {
        return Err(Error::IdenticalPoints);
    }
    let mut out = Vec::with_capacity(field.q() as usize + 1);
    out.push(a.clone());
    for t in field.elements() {
        let v: Vec<Elem> = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(&x, &y)| field.add(field.mul(t, x), y))
            .collect();
        out.push(ProjPoint::new(field, v)?);
    }
    out.sort();
    Ok(out)
}

/// Incremental row reduction over a finite field.
#[derive(Clone, Debug)]
pub struct RankAccumulator {
    field: Field,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl RankAccumulator {
    pub fn new(field: &Field) -> RankAccumulator {
        RankAccumulator {
            field: field.clone(),
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the accumulated rows.
    fn reduce(&self, v: &mut [Elem]) {
        let f = &self.field;
        for (row, &pivot) in self.rows.iter().zip(&self.pivots) {
            let c = v[pivot];
            if c != 0 {
                let neg = f.neg(c);
                for (x, &r) in v.iter_mut().zip(row) {
                    if r != 0 {
                        *x = f.add(*x, f.mul(neg, r));
                    }
                }
            }
        }
    }

    /// Whether `v` lies in the span of the accumulated rows.
    pub fn spans(&self, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(pivot) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        normalize(&self.field, &mut w);
        self.rows.push(w);
        self.pivots.push(pivot);
        true
    }
}

/// Rank of a list of vectors.
pub fn rank_of<'a>(field: &Field, vectors: impl IntoIterator<Item = &'a [Elem]>) -> usize {
    let mut acc = RankAccumulator::new(field);
    for v in vectors {
        acc.insert(v);
    }
    acc.rank()
}

/// Projective dimension of the span of a nonempty point set.
pub fn span_dim(field: &Field, points: &[ProjPoint]) -> Result<usize> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(rank_of(field, points.iter().map(|p| p.coords())) - 1)
}

/// A hyperplane, stored by its dual point: `P` lies on it iff `dual . P = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hyperplane {
    pub dual: ProjPoint,
}

impl Hyperplane {
    pub fn contains(&self, field: &Field, point: &ProjPoint) -> bool {
        field.dot(self.dual.coords(), point.coords()) == 0
    }
}

pub fn enumerate_hyperplanes(field: &Field, k: usize, cap: u128) -> Result<Vec<Hyperplane>> {
    let count = point_count(k, field.q() as u64);
    guard("hyperplanes", count, cap)?;
    Ok(enumerate_points(field, k, cap)?
        .into_iter()
        .map(|dual| Hyperplane { dual })
        .collect())
}

/// Gaussian binomial coefficient `[k choose j]_q`, the number of
/// `j`-dimensional subspaces of a `k`-dimensional space over GF(q).
pub fn gaussian_binomial(k: u32, j: u32, q: u64) -> u128 {
    if j > k {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..j {
        num *= q.pow(k - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// A linear subspace of GF(q)^k held by its reduced row-echelon basis.
/// Its projective dimension is `rows - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subspace {
    pub basis: Vec<Vec<Elem>>,
}

impl Subspace {
    /// Span of arbitrary vectors, brought to reduced row-echelon form.
    pub fn span(field: &Field, k: usize, vectors: &[Vec<Elem>]) -> Result<Subspace> {
        let mut acc = RankAccumulator::new(field);
        for v in vectors {
            if v.len() != k {
                return Err(Error::DimensionMismatch(format!("expected length {k}")));
            }
            acc.insert(v);
        }
        let mut rows: Vec<(usize, Vec<Elem>)> = acc.pivots.into_iter().zip(acc.rows).collect();
        rows.sort_by_key(|(p, _)| *p);
        // back-substitute to clear entries above each pivot
        for i in 0..rows.len() {
            let (pivot, row) = rows[i].clone();
            for (j, (_, other)) in rows.iter_mut().enumerate() {
                if j == i || other[pivot] == 0 {
                    continue;
                }
                let neg = field.neg(other[pivot]);
                for (x, &r) in other.iter_mut().zip(&row) {
                    *x = field.add(*x, field.mul(neg, r));
                }
            }
        }
        Ok(Subspace {
            basis: rows.into_iter().map(|(_, r)| r).collect(),
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("rows are nonzero"))
            .collect()
    }

    /// Basis of the annihilator `{u : u . v = 0 for all v in self}`.
    pub fn annihilator_vectors(&self, field: &Field, k: usize) -> Vec<Vec<Elem>> {
        let pivots = self.pivots();
        (0..k)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![0; k];
                v[free] = 1;
                for (row, &pivot) in self.basis.iter().zip(&pivots) {
                    v[pivot] = field.neg(row[free]);
                }
                v
            })
            .collect()
    }

    pub fn dual(&self, field: &Field, k: usize) -> Subspace {
        Subspace::span(field, k, &self.annihilator_vectors(field, k)).expect("lengths match")
    }

    pub fn contains(&self, field: &Field, v: &[Elem]) -> bool {
        let mut acc = RankAccumulator::new(field);
        for row in &self.basis {
            acc.insert(row);
        }
        acc.spans(v)
    }
}

/// All `dim`-dimensional linear subspaces of GF(q)^k as canonical echelon
/// bases, ordered by pivot set and then by free entries.
pub fn enumerate_subspaces(field: &Field, k: usize, dim: usize, cap: u128) -> Result<Vec<Subspace>> {
    if dim > k {
        return Err(Error::DomainError(format!("no {dim}-space in dimension {k}")));
    }
    let count = gaussian_binomial(k as u32, dim as u32, field.q() as u64);
    guard("subspaces", count, cap)?;
    let q = field.q();
    let mut out = Vec::with_capacity(count as usize);
    let mut pivots: Vec<usize> = (0..dim).collect();
    loop {
        // free slots: row i, column c > pivot_i with c not a pivot
        let free: Vec<(usize, usize)> = (0..dim)
            .flat_map(|i| {
                let pivots = &pivots;
                (pivots[i] + 1..k)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        let mut values = vec![0 as Elem; free.len()];
        loop {
            let mut basis = vec![vec![0 as Elem; k]; dim];
            for (i, &pc) in pivots.iter().enumerate() {
                basis[i][pc] = 1;
            }
            for (&(i, c), &v) in free.iter().zip(&values) {
                basis[i][c] = v;
            }
            out.push(Subspace { basis });
            // odometer, last slot fastest
            let mut pos = values.len();
            let mut done = true;
            while pos > 0 {
                pos -= 1;
                values[pos] += 1;
                if values[pos] < q {
                    done = false;
                    break;
                }
                values[pos] = 0;
            }
            if done {
                break;
            }
        }
        // next pivot combination in lexicographic order
        let mut i = dim;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if pivots[i] < k - dim + i {
                pivots[i] += 1;
                for j in i + 1..dim {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
        if dim == 0 {
            return Ok(out);
        }
    }
}

/// All codimension-2 subspaces (projective dimension k-3) of PG(k-1, q),
/// each in reduced echelon form. They are produced as annihilators of the
/// lines of the dual space, which enumerates each exactly once.
pub fn enumerate_codim2(field: &Field, k: usize, cap: u128) -> Result<Vec<Subspace>> {
    if k < 3 {
        return Err(Error::DomainError("codimension-2 subspaces need k >= 3".into()));
    }
    Ok(enumerate_subspaces(field, k, 2, cap)?
        .into_iter()
        .map(|dual_line| dual_line.dual(field, k))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn f(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn point_counts() {
        assert_eq!(enumerate_points(&f(2), 3, DEFAULT_ENUMERATION_CAP).unwrap().len(), 7);
        assert_eq!(enumerate_points(&f(4), 2, DEFAULT_ENUMERATION_CAP).unwrap().len(), 5);
        assert_eq!(enumerate_points(&f(3), 4, DEFAULT_ENUMERATION_CAP).unwrap().len(), 40);
        assert!(matches!(
            enumerate_points(&f(2), 30, DEFAULT_ENUMERATION_CAP),
            Err(Error::SpaceTooLarge { .. })
        ));
    }

    #[test]
    fn points_are_sorted_canonical_and_distinct() {
        for (q, k) in [(2, 4), (3, 3), (4, 3), (5, 2), (9, 2)] {
            let field = f(q);
            let pts = enumerate_points(&field, k, DEFAULT_ENUMERATION_CAP).unwrap();
            assert!(pts.windows(2).all(|w| w[0] < w[1]));
            for p in &pts {
                assert_eq!(ProjPoint::new(&field, p.coords().to_vec()).unwrap(), *p);
            }
            // brute force: canonicalize every nonzero vector
            let total = (q as u32).pow(k as u32);
            let mut seen = BTreeSet::new();
            for code in 1..total {
                let mut c = code;
                let v: Vec<Elem> = (0..k)
                    .map(|_| {
                        let d = c % q as u32;
                        c /= q as u32;
                        d
                    })
                    .collect();
                seen.insert(ProjPoint::new(&field, v).unwrap());
            }
            assert_eq!(seen.into_iter().collect::<Vec<_>>(), pts);
        }
    }

    #[test]
    fn lines() {
        let field = f(2);
        let a = ProjPoint::new(&field, vec![1, 0, 0]).unwrap();
        let b = ProjPoint::new(&field, vec![0, 1, 0]).unwrap();
        let line = line_through(&field, &a, &b).unwrap();
        let coords: Vec<_> = line.iter().map(|p| p.coords().to_vec()).collect();
        assert_eq!(coords, vec![vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 0]]);
        assert_eq!(line_through(&field, &a, &a), Err(Error::IdenticalPoints));
    }

    #[test]
    fn every_line_has_q_plus_one_points_of_dimension_one() {
        for (q, k) in [(2, 3), (2, 5), (3, 3), (3, 4), (4, 3), (5, 3)] {
            let field = f(q);
            let pts = enumerate_points(&field, k, DEFAULT_ENUMERATION_CAP).unwrap();
            for (i, a) in pts.iter().enumerate().step_by(3) {
                for b in pts.iter().skip(i + 1).step_by(5) {
                    let line = line_through(&field, a, b).unwrap();
                    assert_eq!(line.len(), q as usize + 1);
                    assert_eq!(span_dim(&field, &line).unwrap(), 1);
                }
            }
        }
    }

    #[test]
    fn span_dimensions() {
        let field = f(2);
        let e = |v: Vec<Elem>| ProjPoint::new(&field, v).unwrap();
        assert_eq!(span_dim(&field, &[e(vec![1, 0, 0])]), Ok(0));
        assert_eq!(
            span_dim(&field, &[e(vec![1, 0, 0]), e(vec![0, 1, 0]), e(vec![0, 0, 1])]),
            Ok(2)
        );
        assert_eq!(
            span_dim(&field, &[e(vec![1, 0, 0]), e(vec![0, 1, 0]), e(vec![1, 1, 0])]),
            Ok(1)
        );
        assert_eq!(span_dim(&field, &[]), Err(Error::EmptySet));
    }

    #[test]
    fn hyperplane_duality() {
        for (q, k, expected) in [(2, 4, 15), (5, 3, 31), (2, 6, 63)] {
            let field = f(q);
            let hs = enumerate_hyperplanes(&field, k, DEFAULT_ENUMERATION_CAP).unwrap();
            assert_eq!(hs.len(), expected);
            let pts = enumerate_points(&field, k, DEFAULT_ENUMERATION_CAP).unwrap();
            let on = pts.iter().filter(|p| hs[0].contains(&field, p)).count() as u128;
            assert_eq!(on, point_count(k - 1, q));
        }
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(3, 1, 2), 7);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(7, 0, 5), 1);
        assert_eq!(gaussian_binomial(5, 5, 3), 1);
        // symmetry
        assert_eq!(gaussian_binomial(6, 2, 3), gaussian_binomial(6, 4, 3));
    }

    #[test]
    fn codim2_enumeration() {
        for (q, k, expected) in [(2, 3, 7), (2, 4, 35), (5, 3, 31), (3, 4, 130)] {
            let field = f(q);
            let subs = enumerate_codim2(&field, k, DEFAULT_ENUMERATION_CAP).unwrap();
            assert_eq!(subs.len() as u128, expected);
            assert_eq!(gaussian_binomial(k as u32, k as u32 - 2, q), expected);
            let distinct: BTreeSet<_> = subs.iter().cloned().collect();
            assert_eq!(distinct.len(), subs.len());
            for s in &subs {
                assert_eq!(s.rank(), k - 2);
                // already canonical
                assert_eq!(Subspace::span(&field, k, &s.basis).unwrap(), *s);
            }
        }
    }

    #[test]
    fn subspace_enumeration_counts_match_gaussian_binomials() {
        for (q, k) in [(2, 5), (3, 4), (4, 3)] {
            let field = f(q);
            for dim in 0..=k {
                let subs = enumerate_subspaces(&field, k, dim, DEFAULT_ENUMERATION_CAP).unwrap();
                assert_eq!(subs.len() as u128, gaussian_binomial(k as u32, dim as u32, q));
            }
        }
    }

    #[test]
    fn annihilator_is_orthogonal() {
        let field = f(3);
        for s in enumerate_subspaces(&field, 4, 2, DEFAULT_ENUMERATION_CAP).unwrap() {
            let dual = s.dual(&field, 4);
            assert_eq!(dual.rank(), 2);
            for u in &dual.basis {
                for v in &s.basis {
                    assert_eq!(field.dot(u, v), 0);
                }
            }
            assert_eq!(dual.dual(&field, 4), s);
        }
    }
}
