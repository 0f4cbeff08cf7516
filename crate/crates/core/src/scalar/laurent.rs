use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Map, Value};

use super::{Euclidean, Field, FieldElement, Ring, ScalarError};

/// The ring `K[x^t, x^-t]`, i.e. the context a [`LaurentElement`] lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LaurentRing {
    pub field: Field,
    pub step: u32,
}

/// A Laurent polynomial in `x` whose exponents are multiples of the step `t`.
///
/// Stored as a sparse exponent map with no zero coefficients, so equality of
/// elements is equality of maps. The degree-`λ` component is the single term
/// at exponent `λ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentElement {
    ring: LaurentRing,
    terms: BTreeMap<i64, FieldElement>,
}

impl LaurentRing {
    pub fn new(field: Field, step: u32) -> Result<Self, ScalarError> {
        if step == 0 {
            return Err(ScalarError::ZeroStep);
        }
        Ok(LaurentRing { field, step })
    }
}

impl LaurentElement {
    pub fn zero_in(ring: LaurentRing) -> Self {
        LaurentElement {
            ring,
            terms: BTreeMap::new(),
        }
    }

    /// `c·x^exponent`; the exponent must be a multiple of the step.
    pub fn monomial(ring: LaurentRing, coeff: FieldElement, exponent: i64) -> Result<Self, ScalarError> {
        if exponent.rem_euclid(ring.step as i64) != 0 {
            return Err(ScalarError::OffStep {
                exponent,
                step: ring.step,
            });
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponent, coeff);
        }
        Ok(LaurentElement { ring, terms })
    }

    pub fn constant(ring: LaurentRing, coeff: FieldElement) -> Self {
        Self::monomial(ring, coeff, 0).expect("0 is a multiple of every step")
    }

    /// Builds an element from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(ring: LaurentRing, terms: I) -> Result<Self, ScalarError>
    where
        I: IntoIterator<Item = (i64, FieldElement)>,
    {
        let mut out = Self::zero_in(ring);
        for (e, c) in terms {
            out = out + Self::monomial(ring, c, e)?;
        }
        Ok(out)
    }

    pub fn ring(&self) -> LaurentRing {
        self.ring
    }

    pub fn step(&self) -> u32 {
        self.ring.step
    }

    pub fn field(&self) -> Field {
        self.ring.field
    }

    pub fn terms(&self) -> &BTreeMap<i64, FieldElement> {
        &self.terms
    }

    pub fn coeff(&self, exponent: i64) -> FieldElement {
        self.terms
            .get(&exponent)
            .cloned()
            .unwrap_or_else(|| self.ring.field.zero())
    }

    /// The only term, if there is exactly one.
    pub fn as_monomial(&self) -> Option<(i64, &FieldElement)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    /// Homogeneous degree; `None` for zero or for more than one term.
    pub fn degree(&self) -> Option<i64> {
        self.as_monomial().map(|(e, _)| e)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == 0)
    }

    /// The degree-`λ` homogeneous component.
    pub fn component(&self, degree: i64) -> LaurentElement {
        let mut terms = BTreeMap::new();
        if let Some(c) = self.terms.get(&degree) {
            terms.insert(degree, c.clone());
        }
        LaurentElement {
            ring: self.ring,
            terms,
        }
    }

    /// `x^k ↦ x^-k`.
    pub fn star(&self) -> LaurentElement {
        LaurentElement {
            ring: self.ring,
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> LaurentElement {
        if c.is_zero() {
            return Self::zero_in(self.ring);
        }
        LaurentElement {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (*e, v.clone() * c.clone()))
                .collect(),
        }
    }

    /// The same element viewed with a different (compatible) step.
    pub fn with_step(&self, step: u32) -> Result<LaurentElement, ScalarError> {
        let ring = LaurentRing::new(self.ring.field, step)?;
        Self::from_terms(ring, self.terms.iter().map(|(e, c)| (*e, c.clone())))
    }

    pub fn checked_add(&self, other: &LaurentElement) -> Result<LaurentElement, ScalarError> {
        self.same_ring(other)?;
        Ok(self.clone() + other.clone())
    }

    pub fn checked_mul(&self, other: &LaurentElement) -> Result<LaurentElement, ScalarError> {
        self.same_ring(other)?;
        Ok(self.clone() * other.clone())
    }

    /// Inverse of a unit `c·x^k`, which is `c⁻¹·x^-k`.
    pub fn unit_inverse(&self) -> Result<LaurentElement, ScalarError> {
        match self.as_monomial() {
            Some((e, c)) => {
                let inv = c.inverse()?;
                LaurentElement::monomial(self.ring, inv, -e)
            }
            None => Err(ScalarError::NotUnit(self.to_string())),
        }
    }

    fn same_ring(&self, other: &LaurentElement) -> Result<(), ScalarError> {
        if self.ring.step != other.ring.step {
            return Err(ScalarError::StepMismatch(self.ring.step, other.ring.step));
        }
        Ok(())
    }

    fn assert_same_ring(&self, other: &LaurentElement) {
        if let Err(e) = self.same_ring(other) {
            panic!("{e}");
        }
        assert_eq!(self.ring.field, other.ring.field, "field mismatch");
    }

    /// Coefficients in `y = x^t` after clearing the lowest power:
    /// returns `(lowest y-exponent, dense coefficients)`.
    fn to_poly(&self) -> (i64, Vec<FieldElement>) {
        let t = self.ring.step as i64;
        let low = *self.terms.keys().next().expect("nonzero element") / t;
        let high = *self.terms.keys().next_back().expect("nonzero element") / t;
        let mut coeffs = vec![self.ring.field.zero(); (high - low + 1) as usize];
        for (e, c) in &self.terms {
            coeffs[(e / t - low) as usize] = c.clone();
        }
        (low, coeffs)
    }

    fn from_poly(ring: LaurentRing, shift: i64, coeffs: &[FieldElement]) -> LaurentElement {
        let t = ring.step as i64;
        LaurentElement {
            ring,
            terms: coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| ((k as i64 + shift) * t, c.clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let terms: Map<String, Value> = self
            .terms
            .iter()
            .map(|(e, c)| (e.to_string(), Value::String(c.to_string())))
            .collect();
        json!({ "t": self.ring.step, "terms": terms })
    }

    pub fn from_json(field: Field, value: &Value) -> Result<LaurentElement, ScalarError> {
        let bad = || ScalarError::Parse(value.to_string());
        let step = value
            .get("t")
            .and_then(Value::as_u64)
            .and_then(|t| u32::try_from(t).ok())
            .ok_or_else(bad)?;
        let ring = LaurentRing::new(field, step)?;
        let terms = value.get("terms").and_then(Value::as_object).ok_or_else(bad)?;
        let mut pairs = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            let e: i64 = e.parse().map_err(|_| bad())?;
            let c = c.as_str().ok_or_else(bad)?;
            pairs.push((e, field.parse(c)?));
        }
        LaurentElement::from_terms(ring, pairs)
    }
}

impl fmt::Display for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| match *e {
                0 => c.to_string(),
                1 if c.is_one() => "x".to_owned(),
                1 => format!("{c}x"),
                _ if c.is_one() => format!("x^{e}"),
                _ => format!("{c}x^{e}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Add for LaurentElement {
    type Output = LaurentElement;

    fn add(mut self, rhs: LaurentElement) -> LaurentElement {
        self.assert_same_ring(&rhs);
        for (e, c) in rhs.terms {
            let sum = match self.terms.remove(&e) {
                Some(a) => a + c,
                None => c,
            };
            if !sum.is_zero() {
                self.terms.insert(e, sum);
            }
        }
        self
    }
}

impl Neg for LaurentElement {
    type Output = LaurentElement;

    fn neg(self) -> LaurentElement {
        LaurentElement {
            ring: self.ring,
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Sub for LaurentElement {
    type Output = LaurentElement;

    fn sub(self, rhs: LaurentElement) -> LaurentElement {
        self + (-rhs)
    }
}

impl Mul for LaurentElement {
    type Output = LaurentElement;

    fn mul(self, rhs: LaurentElement) -> LaurentElement {
        self.assert_same_ring(&rhs);
        let mut out = LaurentElement::zero_in(self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let term = LaurentElement {
                    ring: self.ring,
                    terms: [(ea + eb, ca.clone() * cb.clone())].into(),
                };
                out = out + term;
            }
        }
        out
    }
}

impl Ring for LaurentElement {
    type Ctx = LaurentRing;

    fn zero(ctx: &LaurentRing) -> Self {
        LaurentElement::zero_in(*ctx)
    }

    fn one(ctx: &LaurentRing) -> Self {
        LaurentElement::constant(*ctx, ctx.field.one())
    }

    fn ctx(&self) -> LaurentRing {
        self.ring
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Euclidean for LaurentElement {
    /// Width of the exponent range in units of the step; zero exactly on units.
    fn norm(&self) -> u64 {
        match (self.terms.keys().next(), self.terms.keys().next_back()) {
            (Some(lo), Some(hi)) => ((hi - lo) / self.ring.step as i64) as u64,
            _ => u64::MAX,
        }
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!Ring::is_zero(d), "division by zero");
        self.assert_same_ring(d);
        let ring = self.ring;
        if Ring::is_zero(self) {
            return (Self::zero_in(ring), Self::zero_in(ring));
        }
        let (shift_a, mut rem) = self.to_poly();
        let (shift_d, div) = d.to_poly();
        let lead_inv = div
            .last()
            .expect("nonzero divisor")
            .inverse()
            .expect("leading coefficient is nonzero");
        let dd = div.len() - 1;
        let mut quot = vec![ring.field.zero(); rem.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && rem.iter().any(|c| !c.is_zero()) {
            let k = rem.len() - 1;
            let c = rem[k].clone() * lead_inv.clone();
            if !c.is_zero() {
                for (i, dc) in div.iter().enumerate() {
                    let idx = k - dd + i;
                    rem[idx] = rem[idx].clone() - c.clone() * dc.clone();
                }
                quot[k - dd] = c;
            }
            rem.pop();
        }
        // self = y^{shift_a}·(Q·D + R), d = y^{shift_d}·D
        let q = Self::from_poly(ring, shift_a - shift_d, &quot);
        let r = Self::from_poly(ring, shift_a, &rem);
        (q, r)
    }

    fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    fn unit_inverse(&self) -> Option<Self> {
        LaurentElement::unit_inverse(self).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(step: u32) -> LaurentRing {
        LaurentRing::new(Field::Rational, step).unwrap()
    }

    fn el(step: u32, terms: &[(i64, i64)]) -> LaurentElement {
        let ring = q(step);
        LaurentElement::from_terms(ring, terms.iter().map(|&(e, c)| (e, ring.field.from_i64(c)))).unwrap()
    }

    #[test]
    fn distributivity_example() {
        let a = el(2, &[(2, 1), (0, 1)]);
        let b = el(2, &[(-2, 1)]);
        assert_eq!(a * b, el(2, &[(0, 1), (-2, 1)]));
    }

    #[test]
    fn unit_inverse_examples() {
        let a = el(2, &[(4, 3)]);
        let inv = a.unit_inverse().unwrap();
        assert_eq!(inv.coeff(-4), Field::Rational.parse("1/3").unwrap());
        assert_eq!(inv.terms().len(), 1);
        assert!(matches!(el(2, &[(2, 1), (0, 1)]).unit_inverse(), Err(ScalarError::NotUnit(_))));
        assert_eq!(el(2, &[]).unit_inverse(), Err(ScalarError::NotUnit("0".into())));
    }

    #[test]
    fn step_errors() {
        assert_eq!(
            LaurentElement::monomial(q(2), Field::Rational.one(), 3),
            Err(ScalarError::OffStep { exponent: 3, step: 2 })
        );
        assert_eq!(
            el(1, &[(1, 1)]).checked_add(&el(2, &[(2, 1)])),
            Err(ScalarError::StepMismatch(1, 2))
        );
        assert_eq!(LaurentRing::new(Field::Rational, 0), Err(ScalarError::ZeroStep));
    }

    #[test]
    fn json_shape() {
        let ring = q(2);
        let a = LaurentElement::from_terms(
            ring,
            [(-2, Field::Rational.parse("1/3").unwrap()), (4, Field::Rational.from_i64(2))],
        )
        .unwrap();
        let v = a.to_json();
        assert_eq!(v, serde_json::json!({"t": 2, "terms": {"-2": "1/3", "4": "2"}}));
        assert_eq!(LaurentElement::from_json(Field::Rational, &v).unwrap(), a);
    }

    #[test]
    fn division_clears_negative_exponents() {
        // (x^-1 + 2 + x) / (x^-1 + 1): both shifted to polynomials first
        let a = el(1, &[(-1, 1), (0, 2), (1, 1)]);
        let d = el(1, &[(-1, 1), (0, 1)]);
        let (qt, r) = a.div_rem(&d);
        assert_eq!(qt.clone() * d.clone() + r.clone(), a);
        assert!(Ring::is_zero(&r) || r.norm() < d.norm());
    }

    fn arb(step: u32) -> impl Strategy<Value = LaurentElement> {
        proptest::collection::vec((-3i64..4, -3i64..4), 0..4)
            .prop_map(move |ts| el(step, &ts.iter().map(|&(e, c)| (e * step as i64, c)).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb(2), b in arb(2), c in arb(2)) {
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
            prop_assert!(Ring::is_zero(&(a.clone() - a.clone())));
            prop_assert_eq!((a.clone() - a).terms().len(), 0);
        }

        #[test]
        fn division_algorithm(a in arb(3), d in arb(3)) {
            prop_assume!(!Ring::is_zero(&d));
            let (qt, r) = a.div_rem(&d);
            prop_assert_eq!(qt * d.clone() + r.clone(), a);
            prop_assert!(Ring::is_zero(&r) || r.norm() < d.norm());
        }
    }
}
