//! A subfield GF(q) sitting inside GF(q^m), with coordinates of big-field
//! elements over a fixed GF(q)-basis.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone, Debug)]
pub struct SubfieldEmbedding {
    big: Field,
    small: Field,
    degree: usize,
    /// small code -> big code
    embed: Vec<Elem>,
    /// big code -> small code, for elements of the subfield
    restrict: Vec<Option<Elem>>,
    basis: Vec<Elem>,
    /// big code -> `degree` small coordinates, flattened
    coords: Vec<Elem>,
}

impl SubfieldEmbedding {
    /// Embeds `small` in `big` and uses the power basis `1, w, ..., w^{m-1}`
    /// where `w` is the root of the big field's modulus.
    pub fn new(big: &Field, small: &Field) -> Result<SubfieldEmbedding> {
        let degree = Self::relative_degree(big, small)?;
        let w = big.generator();
        let basis = (0..degree).map(|i| big.pow(w, i as u64)).collect();
        Self::with_basis(big, small, basis)
    }

    /// Same embedding with an explicit basis of `big` over `small`.
    pub fn with_basis(big: &Field, small: &Field, basis: Vec<Elem>) -> Result<SubfieldEmbedding> {
        let degree = Self::relative_degree(big, small)?;
        if basis.len() != degree {
            return Err(Error::DimensionMismatch(format!(
                "basis of GF({}) over GF({}) needs {degree} elements",
                big.q(),
                small.q()
            )));
        }
        let theta = Self::modulus_root(big, small);
        let embed: Vec<Elem> = small
            .elements()
            .map(|a| {
                small
                    .coeffs(a)
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (i, &c)| {
                        big.add(acc, big.mul(c as Elem, big.pow(theta, i as u64)))
                    })
            })
            .collect();
        let mut restrict = vec![None; big.q() as usize];
        for (a, &z) in embed.iter().enumerate() {
            restrict[z as usize] = Some(a as Elem);
        }

        let qs = small.q() as u64;
        let mut coords = vec![0; big.q() as usize * degree];
        let mut hit = vec![false; big.q() as usize];
        for code in 0..(big.q() as u64) {
            let mut c = code;
            let a: Vec<Elem> = (0..degree)
                .map(|_| {
                    let d = (c % qs) as Elem;
                    c /= qs;
                    d
                })
                .collect();
            let z = a
                .iter()
                .zip(&basis)
                .fold(0, |acc, (&ai, &b)| big.add(acc, big.mul(embed[ai as usize], b)));
            if hit[z as usize] {
                return Err(Error::DomainError("basis elements are dependent".into()));
            }
            hit[z as usize] = true;
            coords[z as usize * degree..(z as usize + 1) * degree].copy_from_slice(&a);
        }
        Ok(SubfieldEmbedding {
            big: big.clone(),
            small: small.clone(),
            degree,
            embed,
            restrict,
            basis,
            coords,
        })
    }

    fn relative_degree(big: &Field, small: &Field) -> Result<usize> {
        if big.p() != small.p() || big.m() % small.m() != 0 {
            return Err(Error::DomainError(format!(
                "GF({}) is not a subfield of GF({})",
                small.q(),
                big.q()
            )));
        }
        Ok((big.m() / small.m()) as usize)
    }

    /// Smallest root in `big` of the small field's modulus.
    fn modulus_root(big: &Field, small: &Field) -> Elem {
        let modulus = &small.spec().modulus;
        big.elements()
            .find(|&x| {
                modulus
                    .iter()
                    .rev()
                    .fold(0, |acc, &c| big.add(big.mul(acc, x), c as Elem))
                    == 0
            })
            .expect("the modulus splits in every extension of its degree")
    }

    pub fn big(&self) -> &Field {
        &self.big
    }

    pub fn small(&self) -> &Field {
        &self.small
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn embed(&self, a: Elem) -> Elem {
        self.embed[a as usize]
    }

    pub fn restrict(&self, z: Elem) -> Option<Elem> {
        self.restrict[z as usize]
    }

    pub fn contains(&self, z: Elem) -> bool {
        self.restrict[z as usize].is_some()
    }

    /// Coordinates of `z` over the basis, as small-field codes.
    pub fn coords(&self, z: Elem) -> &[Elem] {
        &self.coords[z as usize * self.degree..(z as usize + 1) * self.degree]
    }
}
