use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{Ring, ScalarError};

/// The coefficient field: the rationals or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, ScalarError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(ScalarError::NotPrime(p))
        }
    }

    pub fn zero(self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> FieldElement {
        match self {
            Field::Rational => FieldElement::Q(BigRational::from_integer(n.into())),
            Field::Prime(p) => FieldElement::Fp {
                v: n.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    pub fn from_rational(self, q: &BigRational) -> Result<FieldElement, ScalarError> {
        match self {
            Field::Rational => Ok(FieldElement::Q(q.clone())),
            Field::Prime(p) => {
                let reduce = |n: &BigInt| {
                    n.mod_floor(&BigInt::from(p))
                        .to_u64()
                        .expect("residue fits in u64")
                };
                let num = FieldElement::Fp { v: reduce(q.numer()), p };
                let den = FieldElement::Fp { v: reduce(q.denom()), p };
                let inv = den
                    .inverse()
                    .map_err(|_| ScalarError::NotInvertibleMod(q.to_string(), p))?;
                Ok(num * inv)
            }
        }
    }

    /// Parses `"5/6"`, `"-3"` or `"7"` into this field.
    pub fn parse(self, s: &str) -> Result<FieldElement, ScalarError> {
        let q = BigRational::from_str(s.trim()).map_err(|_| ScalarError::Parse(s.to_owned()))?;
        self.from_rational(&q)
    }

    /// Elements of a prime field in `0..p`; `None` for the rationals.
    pub fn elements(self) -> Option<impl Iterator<Item = FieldElement>> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some((0..p).map(move |v| FieldElement::Fp { v, p })),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => f.write_str("Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = ScalarError;

    /// `q` for the rationals, `fp:P` for the prime field of order `P`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let p = s
            .strip_prefix("fp:")
            .or_else(|| s.strip_prefix("FP:"))
            .and_then(|n| n.parse::<u64>().ok())
            .ok_or_else(|| ScalarError::Parse(s.to_owned()))?;
        Field::prime(p)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    // keeps v*v inside u128 with room to spare
    if p > u32::MAX as u64 {
        return false;
    }
    (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// An element of [`Field`]. Rationals are kept in lowest terms with a
/// positive denominator; residues lie in `0..p`.
///
/// Mixing elements of different fields is a programming error and panics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

impl FieldElement {
    pub fn field(&self) -> Field {
        match self {
            FieldElement::Q(_) => Field::Rational,
            FieldElement::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Q(q) => q.is_zero(),
            FieldElement::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Q(q) => q.is_one(),
            FieldElement::Fp { v, .. } => *v == 1,
        }
    }

    pub fn inverse(&self) -> Result<FieldElement, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::ZeroInverse);
        }
        Ok(match self {
            FieldElement::Q(q) => FieldElement::Q(q.recip()),
            FieldElement::Fp { v, p } => FieldElement::Fp {
                v: pow_mod(*v, p - 2, *p),
                p: *p,
            },
        })
    }

    fn mismatch(a: &FieldElement, b: &FieldElement) -> ! {
        panic!("field mismatch: {} vs {}", a.field(), b.field())
    }
}

fn pow_mod(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let m = p as u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Q(q) => write!(f, "{q}"),
            FieldElement::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

impl Add for FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: FieldElement) -> FieldElement {
        match (&self, &rhs) {
            (FieldElement::Q(a), FieldElement::Q(b)) => FieldElement::Q(a + b),
            (FieldElement::Fp { v: a, p }, FieldElement::Fp { v: b, p: q }) if p == q => {
                FieldElement::Fp {
                    v: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => FieldElement::mismatch(&self, &rhs),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Q(a) => FieldElement::Q(-a),
            FieldElement::Fp { v, p } => FieldElement::Fp {
                v: if v == 0 { 0 } else { p - v },
                p,
            },
        }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;

    fn sub(self, rhs: FieldElement) -> FieldElement {
        self + (-rhs)
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;

    fn mul(self, rhs: FieldElement) -> FieldElement {
        match (&self, &rhs) {
            (FieldElement::Q(a), FieldElement::Q(b)) => FieldElement::Q(a * b),
            (FieldElement::Fp { v: a, p }, FieldElement::Fp { v: b, p: q }) if p == q => {
                FieldElement::Fp {
                    v: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => FieldElement::mismatch(&self, &rhs),
        }
    }
}

impl Ring for FieldElement {
    type Ctx = Field;

    fn zero(ctx: &Field) -> Self {
        ctx.zero()
    }

    fn one(ctx: &Field) -> Self {
        ctx.one()
    }

    fn ctx(&self) -> Field {
        self.field()
    }

    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
}
