//! Random elements for property checks and the CLI.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::lpa::{LeavittPathAlgebra, LpaElement, LpaError, Monomial};

/// Coefficients drawn for random elements, before reduction into the field.
pub const COEFFICIENTS: &[i64] = &[1, -1, 2, -2, 3];

/// Uniform sampling over normal-form basis monomials with `|degree| ≤ bound`.
#[derive(Debug, Clone)]
pub struct Sampler<'a> {
    alg: &'a LeavittPathAlgebra,
    by_degree: BTreeMap<i64, Vec<Monomial>>,
    all: Vec<Monomial>,
}

impl<'a> Sampler<'a> {
    /// `path_bound` caps path lengths; it is required when some cycle has an exit.
    pub fn new(alg: &'a LeavittPathAlgebra, bound: u32, path_bound: Option<usize>) -> Result<Self, LpaError> {
        let mut by_degree = BTreeMap::new();
        let b = bound as i64;
        for n in -b..=b {
            let basis = alg.basis_of_degree(n, path_bound)?;
            if !basis.is_empty() {
                by_degree.insert(n, basis);
            }
        }
        let all = by_degree.values().flatten().cloned().collect();
        Ok(Sampler { alg, by_degree, all })
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.by_degree.keys().copied()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.all
    }

    pub fn monomial<R: Rng + ?Sized>(&self, rng: &mut R) -> Monomial {
        self.all.choose(rng).expect("every graph has a vertex").clone()
    }

    fn coefficient<R: Rng + ?Sized>(&self, rng: &mut R) -> crate::FieldElement {
        let field = self.alg.field();
        loop {
            let c = field.from_i64(*COEFFICIENTS.choose(rng).expect("nonempty"));
            if !c.is_zero() {
                return c;
            }
        }
    }

    /// A homogeneous element of degree `n` with up to `max_terms` terms;
    /// zero only if that degree has no basis.
    pub fn homogeneous_of_degree<R: Rng + ?Sized>(&self, rng: &mut R, n: i64, max_terms: usize) -> LpaElement {
        let Some(basis) = self.by_degree.get(&n) else {
            return LpaElement::zero();
        };
        let k = rng.random_range(1..=max_terms.clamp(1, basis.len()));
        basis
            .choose_multiple(rng, k)
            .fold(LpaElement::zero(), |acc, m| {
                acc + self.alg.term(m.clone(), self.coefficient(rng))
            })
    }

    /// A nonzero homogeneous element of a uniformly chosen degree.
    pub fn homogeneous<R: Rng + ?Sized>(&self, rng: &mut R, max_terms: usize) -> LpaElement {
        let degrees: Vec<i64> = self.degrees().collect();
        let n = *degrees.choose(rng).expect("degree 0 always has a basis");
        self.homogeneous_of_degree(rng, n, max_terms)
    }
}
