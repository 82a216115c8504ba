//! Linear codes over GF(q): generator matrices, exact minimum distance,
//! Reed-Solomon and concatenated codes, and projective systems.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::geometry::{enumerate_hyperplanes, point_count, rank_of, ProjPoint};
use crate::subfield::SubfieldEmbedding;

/// Default cap on `q^k` for codeword enumeration.
pub const DEFAULT_CODEWORD_BUDGET: u128 = 1 << 22;

/// A `k x n` generator matrix of full row rank.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorMatrix {
    field: Field,
    rows: Vec<Vec<Elem>>,
}

/// On-disk form: entries are packed element codes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorMatrixFile {
    pub q: u32,
    pub k: usize,
    pub n: usize,
    pub rows: Vec<Vec<u32>>,
}

impl GeneratorMatrix {
    pub fn new(field: &Field, rows: Vec<Vec<Elem>>) -> Result<GeneratorMatrix> {
        let n = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || n == 0 {
            return Err(Error::DimensionMismatch("empty generator matrix".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged generator matrix".into()));
        }
        for &x in rows.iter().flatten() {
            field.check(x)?;
        }
        if rank_of(field, rows.iter().map(Vec::as_slice)) != rows.len() {
            return Err(Error::DimensionMismatch("rows are linearly dependent".into()));
        }
        Ok(GeneratorMatrix {
            field: field.clone(),
            rows,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn encode(&self, message: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut word = vec![0; self.n()];
        for (&m, row) in message.iter().zip(&self.rows) {
            if m == 0 {
                continue;
            }
            for (w, &g) in word.iter_mut().zip(row) {
                *w = f.add(*w, f.mul(m, g));
            }
        }
        word
    }

    pub fn to_file(&self) -> GeneratorMatrixFile {
        GeneratorMatrixFile {
            q: self.field.q(),
            k: self.k(),
            n: self.n(),
            rows: self.rows.clone(),
        }
    }

    pub fn from_file(file: &GeneratorMatrixFile) -> Result<GeneratorMatrix> {
        let field = Field::of_order(file.q as u64)?;
        if file.rows.len() != file.k || file.rows.iter().any(|r| r.len() != file.n) {
            return Err(Error::DimensionMismatch("declared k/n disagree with rows".into()));
        }
        GeneratorMatrix::new(&field, file.rows.clone())
    }

    /// One row per line, entries separated by spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(field: &Field, text: &str) -> Result<GeneratorMatrix> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(format!("{t}: {e}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GeneratorMatrix::new(field, rows)
    }
}

/// `[n, k, d]_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub q: u32,
}

fn check_budget(field: &Field, k: usize, budget: u128) -> Result<()> {
    let count = (field.q() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if count > budget {
        Err(Error::BudgetExceeded { count, budget })
    } else {
        Ok(())
    }
}

/// Calls `visit` on one representative of every nonzero codeword up to
/// scalars: the messages whose first nonzero entry is 1. The codeword is
/// updated incrementally as the message tail runs through an odometer.
pub fn for_each_projective_codeword(g: &GeneratorMatrix, mut visit: impl FnMut(&[Elem], &[Elem])) {
    let f = g.field();
    let (k, n, q) = (g.k(), g.n(), f.q());
    for lead in 0..k {
        let mut message = vec![0 as Elem; k];
        message[lead] = 1;
        let mut word = g.rows[lead].clone();
        loop {
            visit(&message, &word);
            // advance the tail odometer, last digit fastest
            let mut pos = k;
            let mut finished = true;
            while pos > lead + 1 {
                pos -= 1;
                let old = message[pos];
                let new = if old + 1 == q { 0 } else { old + 1 };
                message[pos] = new;
                let delta = f.sub(new, old);
                for (w, &r) in word.iter_mut().zip(&g.rows[pos]) {
                    *w = f.add(*w, f.mul(delta, r));
                }
                if new != 0 {
                    finished = false;
                    break;
                }
            }
            if finished {
                break;
            }
        }
        debug_assert_eq!(word.len(), n);
    }
}

/// Exact minimum distance by enumerating every nonzero codeword up to
/// scalars.
pub fn min_distance(g: &GeneratorMatrix, budget: u128) -> Result<usize> {
    check_budget(g.field(), g.k(), budget)?;
    let mut best = usize::MAX;
    for_each_projective_codeword(g, |_, word| {
        best = best.min(word.iter().filter(|&&x| x != 0).count());
    });
    Ok(best)
}

/// Reed-Solomon generator: row `i` evaluates `x^i` at the first `n` field
/// elements in canonical order.
pub fn rs_generator(field: &Field, n: usize, k: usize) -> Result<GeneratorMatrix> {
    if n > field.q() as usize {
        return Err(Error::TooFewPoints {
            needed: n,
            available: field.q() as usize,
        });
    }
    if k == 0 || k > n {
        return Err(Error::DomainError(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let rows = (0..k)
        .map(|i| {
            (0..n as Elem)
                .map(|x| field.pow(x, i as u64))
                .collect()
        })
        .collect();
    GeneratorMatrix::new(field, rows)
}

/// Reed-Solomon code allowed one extra coordinate: for `n = q + 1` the last
/// column is the point at infinity `(0, .., 0, 1)`. Still MDS.
pub fn extended_rs_generator(field: &Field, n: usize, k: usize) -> Result<GeneratorMatrix> {
    let q = field.q() as usize;
    if n <= q {
        return rs_generator(field, n, k);
    }
    if n > q + 1 {
        return Err(Error::TooFewPoints {
            needed: n,
            available: q + 1,
        });
    }
    let base = rs_generator(field, q, k)?;
    let rows = base
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.push(Elem::from(i + 1 == k));
            r
        })
        .collect();
    GeneratorMatrix::new(field, rows)
}

/// Identity generator `[k, k, 1]_q`; its columns are the standard frame.
pub fn identity_generator(field: &Field, k: usize) -> Result<GeneratorMatrix> {
    let rows = (0..k)
        .map(|i| (0..k).map(|j| Elem::from(i == j)).collect())
        .collect();
    GeneratorMatrix::new(field, rows)
}

/// Single parity-check code `[m + 1, m, 2]_q`.
pub fn parity_generator(field: &Field, m: usize) -> Result<GeneratorMatrix> {
    let rows = (0..m)
        .map(|i| {
            let mut row: Vec<Elem> = (0..m).map(|j| Elem::from(i == j)).collect();
            row.push(field.neg(1));
            row
        })
        .collect();
    GeneratorMatrix::new(field, rows)
}

/// Simplex code: one column per point of PG(m-1, q).
pub fn simplex_generator(field: &Field, m: usize) -> Result<GeneratorMatrix> {
    let points = crate::geometry::enumerate_points(field, m, DEFAULT_CODEWORD_BUDGET)?;
    let rows = (0..m)
        .map(|i| points.iter().map(|p| p.coords()[i]).collect())
        .collect();
    GeneratorMatrix::new(field, rows)
}

/// Seeded random `k x n` generator with full rank and no zero column.
pub fn random_generator(field: &Field, k: usize, n: usize, seed: u64) -> Result<GeneratorMatrix> {
    if k == 0 || k > n {
        return Err(Error::DomainError(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10_000 {
        let rows: Vec<Vec<Elem>> = (0..k)
            .map(|_| (0..n).map(|_| rng.gen_range(0..field.q())).collect())
            .collect();
        let degenerate = (0..n).any(|j| rows.iter().all(|r| r[j] == 0));
        if degenerate {
            continue;
        }
        if let Ok(g) = GeneratorMatrix::new(field, rows) {
            return Ok(g);
        }
    }
    Err(Error::BudgetExhausted("no full-rank nondegenerate sample".into()))
}

/// Concatenates an outer code over GF(q^m) with an inner `[n_i, m]_q` code.
/// Each outer symbol is written in the embedding's GF(q)-basis and encoded
/// by the inner code. Message index `(j, t)` maps to outer message symbol
/// `j` times basis element `t`.
pub fn concatenate(
    outer: &GeneratorMatrix,
    inner: &GeneratorMatrix,
    embedding: &SubfieldEmbedding,
) -> Result<GeneratorMatrix> {
    if outer.field() != embedding.big() || inner.field() != embedding.small() {
        return Err(Error::DimensionMismatch("codes are not over the embedding's fields".into()));
    }
    let m = embedding.degree();
    if inner.k() != m {
        return Err(Error::DimensionMismatch(format!(
            "inner dimension {} differs from extension degree {m}",
            inner.k()
        )));
    }
    let big = embedding.big();
    let mut rows = Vec::with_capacity(outer.k() * m);
    for outer_row in outer.rows() {
        for &b in embedding.basis() {
            let mut row = Vec::with_capacity(outer.n() * inner.n());
            for &symbol in outer_row {
                row.extend(inner.encode(embedding.coords(big.mul(b, symbol))));
            }
            rows.push(row);
        }
    }
    GeneratorMatrix::new(embedding.small(), rows)
}

/// A multiset of points of PG(k-1, q) with its code parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveSystem {
    field: Field,
    points: Vec<ProjPoint>,
    params: CodeParams,
}

impl ProjectiveSystem {
    /// Builds a system from explicit points; `d` is computed from the
    /// largest hyperplane intersection.
    pub fn from_points(field: &Field, points: Vec<ProjPoint>, hyperplane_cap: u128) -> Result<ProjectiveSystem> {
        let k = points.first().ok_or(Error::EmptySet)?.len();
        if points.iter().any(|p| p.len() != k) {
            return Err(Error::DimensionMismatch("points of different spaces".into()));
        }
        if rank_of(field, points.iter().map(|p| p.coords())) != k {
            return Err(Error::DomainError("points do not span the space".into()));
        }
        let mut system = ProjectiveSystem {
            field: field.clone(),
            params: CodeParams {
                n: points.len(),
                k,
                d: 0,
                q: field.q(),
            },
            points,
        };
        system.params.d = system.params.n - system_max_hyperplane(&system, hyperplane_cap)?;
        Ok(system)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    /// Generator matrix whose columns are the points.
    pub fn generator(&self) -> GeneratorMatrix {
        let rows = (0..self.k())
            .map(|i| self.points.iter().map(|p| p.coords()[i]).collect())
            .collect();
        GeneratorMatrix::new(&self.field, rows).expect("points span the space")
    }
}

/// Largest number of system points (with multiplicity) on one hyperplane.
pub fn system_max_hyperplane(system: &ProjectiveSystem, cap: u128) -> Result<usize> {
    let field = system.field();
    let hyperplanes = enumerate_hyperplanes(field, system.k(), cap)?;
    Ok(hyperplanes
        .iter()
        .map(|h| system.points.iter().filter(|p| h.contains(field, p)).count())
        .max()
        .unwrap_or(0))
}

/// Columns of a nondegenerate generator matrix as a projective system.
/// The distance is computed from hyperplane intersections and cross-checked
/// against codeword enumeration when both are within their caps.
pub fn to_projective_system(
    g: &GeneratorMatrix,
    hyperplane_cap: u128,
    codeword_budget: u128,
) -> Result<ProjectiveSystem> {
    let field = g.field();
    let points = (0..g.n())
        .map(|j| ProjPoint::new(field, g.column(j)).map_err(|_| Error::DegenerateCode(j)))
        .collect::<Result<Vec<_>>>()?;
    let n = points.len();
    let mut system = ProjectiveSystem {
        field: field.clone(),
        points,
        params: CodeParams {
            n,
            k: g.k(),
            d: 0,
            q: field.q(),
        },
    };
    let geometric = system_max_hyperplane(&system, hyperplane_cap).map(|m| n - m);
    let enumerated = min_distance(g, codeword_budget);
    system.params.d = match (geometric, enumerated) {
        (Ok(a), Ok(b)) if a != b => {
            return Err(Error::Inconsistent(format!(
                "hyperplane distance {a} differs from codeword distance {b}"
            )))
        }
        (Ok(a), _) => a,
        (Err(_), Ok(b)) => b,
        (Err(e), Err(_)) => return Err(e),
    };
    Ok(system)
}

/// `H_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x)` on `[0, 1 - 1/q]`.
pub fn q_entropy(q: f64, x: f64) -> Result<f64> {
    let top = 1.0 - 1.0 / q;
    if q < 2.0 || !(0.0..=top + 1e-15).contains(&x) {
        return Err(Error::DomainError(format!("H_{q}({x}) outside [0, {top}]")));
    }
    let log_q = |v: f64| v.ln() / q.ln();
    let mut h = x * log_q(q - 1.0);
    if x > 0.0 {
        h -= x * log_q(x);
    }
    if x < 1.0 {
        h -= (1.0 - x) * log_q(1.0 - x);
    }
    Ok(h)
}

/// Gilbert-Varshamov rate `1 - H_q(delta)`.
pub fn gv_rate(q: f64, delta: f64) -> Result<f64> {
    Ok(1.0 - q_entropy(q, delta)?)
}

/// Inverse of `H_q` on `[0, 1 - 1/q]` by bisection to 1e-9.
pub fn q_entropy_inverse(q: f64, y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::DomainError(format!("H_q inverse of {y}")));
    }
    let (mut lo, mut hi) = (0.0, 1.0 - 1.0 / q);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if q_entropy(q, mid)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Number of points in the ambient space of a system, for cap checks.
pub fn ambient_points(system: &ProjectiveSystem) -> u128 {
    point_count(system.k(), system.field().q() as u64)
}
