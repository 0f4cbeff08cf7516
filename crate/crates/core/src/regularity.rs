//! Inner inverses and idempotent types, computed through the block
//! decomposition.

use serde_json::{json, Value};
use thiserror::Error;

use crate::gmatrix::{BaseRing, GmError, GradedMatrix};
use crate::linalg::{self, FieldMatrix, Matrix};
use crate::lpa::{Degree, LeavittPathAlgebra, LpaElement, LpaError};
use crate::scalar::{smith_normal_form, LaurentElement, Ring};
use crate::structure::{self, BlockTuple, DecompositionReport, PhiMap, StructureError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegularityError {
    #[error("not regular as given: invariant factor {0} is a nonzero non-unit")]
    NotRegular(String),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("element is zero")]
    Zero,
    #[error("internal: {0}")]
    Internal(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Matrix(#[from] GmError),
    #[error(transparent)]
    Lpa(#[from] LpaError),
}

/// An inner inverse over a field: `a·b·a = a`.
///
/// With `a = C·R` (independent columns times a reduced echelon matrix),
/// `b = R⁺·C⁺` where `R·R⁺ = I` and `C⁺·C = I`.
pub fn inner_inverse_field(a: &FieldMatrix) -> FieldMatrix {
    let ctx = *a.ctx();
    let (r, pivots) = linalg::rref(a);
    if pivots.is_empty() {
        return FieldMatrix::zeros(&ctx, a.cols(), a.rows());
    }
    let c = FieldMatrix::from_fn(&ctx, a.rows(), pivots.len(), |i, k| a[(i, pivots[k])].clone());
    let rr = FieldMatrix::from_fn(&ctx, pivots.len(), a.cols(), |k, j| r[(k, j)].clone());
    let b = linalg::right_inverse_rref(&rr, &pivots).mul(&linalg::left_inverse(&c));
    debug_assert_eq!(a.mul(&b).mul(a), *a);
    b
}

/// An inner inverse over `K[x^t, x^-t]` via Smith normal form, `b = V·D⁺·U`.
///
/// The ring is not von Neumann regular, so this fails when some invariant
/// factor is a nonzero non-unit (e.g. `1 + x`). Homogeneous matrices never
/// hit that case.
pub fn inner_inverse_laurent(a: &Matrix<LaurentElement>) -> Result<Matrix<LaurentElement>, RegularityError> {
    let ring = *a.ctx();
    let s = smith_normal_form(a);
    let mut d_plus = Matrix::zeros(&ring, a.cols(), a.rows());
    for (k, x) in s.diagonal().into_iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        d_plus[(k, k)] = x
            .unit_inverse()
            .map_err(|_| RegularityError::NotRegular(x.to_string()))?;
    }
    let b = s.v.mul(&d_plus).mul(&s.u);
    debug_assert_eq!(a.mul(&b).mul(a), *a);
    Ok(b)
}

fn block_inner_inverse(m: &GradedMatrix) -> Result<GradedMatrix, RegularityError> {
    let alg = m.algebra();
    let entries = match alg.base() {
        BaseRing::Field => {
            let ring = alg.entry_ring();
            inner_inverse_field(&m.to_field_matrix()).map(&ring, |c| LaurentElement::constant(ring, c.clone()))
        }
        BaseRing::Laurent { .. } => inner_inverse_laurent(m.entries())?,
    };
    Ok(alg.from_entries(entries)?)
}

/// Result of [`graded_inner_inverse`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerInverse {
    /// The degree `−λ` inner inverse.
    pub b: LpaElement,
    /// The blockwise inner inverse pulled back before projecting to degree `−λ`.
    pub unprojected: LpaElement,
    pub degree: i64,
}

/// A homogeneous `b` of degree `−deg a` with `a·b·a = a`.
pub fn graded_inner_inverse(
    alg: &LeavittPathAlgebra,
    d: &DecompositionReport,
    map: &PhiMap,
    a: &LpaElement,
) -> Result<InnerInverse, RegularityError> {
    let lambda = match a.degree() {
        Degree::Zero => 0,
        Degree::Homogeneous(n) => n,
        Degree::Inhomogeneous => return Err(RegularityError::NotHomogeneous),
    };
    let image = map.apply(d, a);
    let inv = BlockTuple(
        image
            .blocks()
            .iter()
            .map(block_inner_inverse)
            .collect::<Result<_, _>>()?,
    );
    let unprojected = structure::pull_back(alg, d, &inv)?;
    let b = unprojected.component(-lambda);
    debug_assert_eq!(alg.mul_all([a, &b, a]), *a);
    Ok(InnerInverse {
        b,
        unprojected,
        degree: -lambda,
    })
}

/// A central idempotent of the block product: the identity on the selected
/// blocks, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CentralIdempotentVector(pub Vec<bool>);

impl CentralIdempotentVector {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| !b)
    }

    pub fn to_tuple(&self, d: &DecompositionReport) -> BlockTuple {
        BlockTuple(
            d.blocks()
                .iter()
                .zip(&self.0)
                .map(|(b, &on)| if on { b.algebra().identity() } else { b.algebra().zero() })
                .collect(),
        )
    }

    pub fn to_element(&self, alg: &LeavittPathAlgebra, d: &DecompositionReport) -> Result<LpaElement, StructureError> {
        structure::pull_back(alg, d, &self.to_tuple(d))
    }
}

/// All `2^#blocks` block-selection vectors, in binary counting order.
///
/// Each block has only `0` and `1` as central homogeneous idempotents, so
/// these are exactly the central homogeneous idempotents of the product.
pub fn bgr_enumerate(d: &DecompositionReport) -> Vec<CentralIdempotentVector> {
    let n = d.blocks().len();
    assert!(n < 32, "too many blocks to enumerate");
    (0u32..1 << n)
        .map(|mask| CentralIdempotentVector((0..n).map(|b| mask >> b & 1 == 1).collect()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentTypes {
    pub block_ranks: Vec<usize>,
    pub abelian: bool,
    pub directly_finite: bool,
    pub faithful: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentReport {
    pub is_idempotent: bool,
    pub is_homogeneous_deg0: bool,
    /// Present only when the element is idempotent.
    pub types: Option<IdempotentTypes>,
}

impl IdempotentReport {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "is_idempotent": self.is_idempotent,
            "is_homogeneous_deg0": self.is_homogeneous_deg0,
        });
        if let Some(t) = &self.types {
            v["block_ranks"] = json!(t.block_ranks);
            v["abelian"] = json!(t.abelian);
            v["directly_finite"] = json!(t.directly_finite);
            v["faithful"] = json!(t.faithful);
        }
        v
    }
}

/// Rank over the fraction field of the entry ring.
pub fn block_rank(m: &GradedMatrix) -> usize {
    smith_normal_form(m.entries()).rank()
}

pub fn idempotent_report(
    alg: &LeavittPathAlgebra,
    d: &DecompositionReport,
    map: &PhiMap,
    e: &LpaElement,
) -> Result<IdempotentReport, RegularityError> {
    alg.check_element(e)?;
    let is_idempotent = alg.mul(e, e) == *e;
    let is_homogeneous_deg0 = matches!(e.degree(), Degree::Zero | Degree::Homogeneous(0));
    if !is_idempotent {
        return Ok(IdempotentReport {
            is_idempotent,
            is_homogeneous_deg0,
            types: None,
        });
    }
    let image = map.apply(d, e);
    let block_ranks: Vec<usize> = image.blocks().iter().map(block_rank).collect();
    let abelian = block_ranks.iter().all(|&r| r <= 1);
    let faithful = bgr_enumerate(d)
        .iter()
        .filter(|y| !y.is_zero())
        .all(|y| !image.mul(&y.to_tuple(d)).is_zero());
    if faithful != block_ranks.iter().all(|&r| r >= 1) {
        return Err(RegularityError::Internal("faithfulness disagrees with block ranks".into()));
    }
    Ok(IdempotentReport {
        is_idempotent,
        is_homogeneous_deg0,
        types: Some(IdempotentTypes {
            block_ranks,
            abelian,
            directly_finite: true,
            faithful,
        }),
    })
}

/// `Σ_b q₁q₁*` over the blocks: every sink plus one base vertex per cycle.
/// Its image has a single `e₁₁` in each block, so it is faithful and abelian.
pub fn type_i_witness(alg: &LeavittPathAlgebra, d: &DecompositionReport) -> Result<LpaElement, StructureError> {
    (0..d.blocks().len()).try_fold(LpaElement::zero(), |acc, b| {
        Ok(acc + structure::phi_inverse_basis(alg, d, b, 0, 0, 0)?)
    })
}

/// A nonzero abelian idempotent inside the graded right ideal `z·R`.
///
/// With `b` an inner inverse of `z`, `f = z·b` is an idempotent of `z·R`.
/// A nonzero column `c` of `φ(f)` in some block gives the rank-one
/// idempotent `g = c·c_k⁻¹·e_kᵀ` (with `c_k` a nonzero entry), which
/// satisfies `f·g = g`, so `g ∈ f·R ⊆ z·R`.
pub fn abelian_idempotent_in_ideal(
    alg: &LeavittPathAlgebra,
    d: &DecompositionReport,
    map: &PhiMap,
    z: &LpaElement,
) -> Result<LpaElement, RegularityError> {
    if z.is_zero() {
        return Err(RegularityError::Zero);
    }
    let b = graded_inner_inverse(alg, d, map, z)?.b;
    let f = map.apply(d, &alg.mul(z, &b));
    let (block, m) = f
        .blocks()
        .iter()
        .enumerate()
        .find(|(_, m)| !m.is_zero())
        .ok_or_else(|| RegularityError::Internal("z·b vanishes".into()))?;
    let n = m.algebra().size();
    let (k, j) = (0..n)
        .flat_map(|j| (0..n).map(move |k| (k, j)))
        .find(|&(k, j)| !m.entry(k, j).is_zero())
        .expect("nonzero matrix has a nonzero entry");
    let pivot_inv = m
        .entry(k, j)
        .unit_inverse()
        .map_err(|_| RegularityError::Internal("idempotent entry is not a unit".into()))?;
    let ring = m.algebra().entry_ring();
    let entries = Matrix::from_fn(&ring, n, n, |i, col| {
        if col == k {
            m.entry(i, j).clone() * pivot_inv.clone()
        } else {
            LaurentElement::zero(&ring)
        }
    });
    let mut g = d.zero_tuple();
    g.0[block] = m.algebra().from_entries(entries)?;
    Ok(structure::pull_back(alg, d, &g)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::scalar::{Field, LaurentRing};
    use crate::structure::{decompose, phi};

    fn fm(rows: &[&[i64]]) -> FieldMatrix {
        let f = Field::Rational;
        FieldMatrix::from_rows(&f, rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect())
    }

    fn setup(vertices: &[&str], edges: &[(&str, &str, &str)]) -> (LeavittPathAlgebra, DecompositionReport, PhiMap) {
        let g = Graph::new(vertices.iter().copied(), edges.iter().copied()).unwrap();
        let alg = LeavittPathAlgebra::new(g, Field::Rational);
        let d = decompose(&alg).unwrap();
        let map = phi(&alg, &d).unwrap();
        (alg, d, map)
    }

    #[test]
    fn field_inner_inverse_examples() {
        assert_eq!(inner_inverse_field(&fm(&[&[1, 0], &[0, 0]])), fm(&[&[1, 0], &[0, 0]]));
        assert_eq!(inner_inverse_field(&fm(&[&[0, 1], &[0, 0]])), fm(&[&[0, 0], &[1, 0]]));
        assert_eq!(inner_inverse_field(&fm(&[&[0, 0], &[0, 0]])), fm(&[&[0, 0], &[0, 0]]));
        let a = fm(&[&[1, 2, 3], &[2, 4, 6]]);
        let b = inner_inverse_field(&a);
        assert_eq!((b.rows(), b.cols()), (3, 2));
        assert_eq!(a.mul(&b).mul(&a), a);
    }

    fn lm(ring: LaurentRing, rows: Vec<Vec<LaurentElement>>) -> Matrix<LaurentElement> {
        Matrix::from_rows(&ring, rows)
    }

    #[test]
    fn laurent_inner_inverse_examples() {
        let r = LaurentRing::new(Field::Rational, 1).unwrap();
        let x = |c: i64, e: i64| LaurentElement::monomial(r, r.field.from_i64(c), e).unwrap();
        let b = inner_inverse_laurent(&lm(r, vec![vec![x(1, 2)]])).unwrap();
        assert_eq!(b, lm(r, vec![vec![x(1, -2)]]));

        let a = lm(r, vec![vec![x(1, 1), x(0, 0)], vec![x(0, 0), x(0, 0)]]);
        assert_eq!(inner_inverse_laurent(&a).unwrap(), lm(r, vec![vec![x(1, -1), x(0, 0)], vec![x(0, 0), x(0, 0)]]));

        let one_plus_x = x(1, 0) + x(1, 1);
        assert!(matches!(
            inner_inverse_laurent(&lm(r, vec![vec![one_plus_x]])),
            Err(RegularityError::NotRegular(_))
        ));
    }

    #[test]
    fn graded_inner_inverse_examples() {
        let (alg, d, map) = setup(&["v"], &[("c", "v", "v")]);
        let c = alg.edge(crate::EdgeId(0));
        let inv = graded_inner_inverse(&alg, &d, &map, &c).unwrap();
        assert_eq!(inv.b, alg.ghost(crate::EdgeId(0)));
        assert_eq!(inv.degree, -1);

        let v = alg.vertex(crate::VertexId(0));
        assert_eq!(graded_inner_inverse(&alg, &d, &map, &v).unwrap().b, v);

        let (alg, d, map) = setup(&["v1", "v2"], &[("e1", "v1", "v2"), ("e2", "v1", "v2")]);
        let a = alg.edge(crate::EdgeId(0)) + alg.edge(crate::EdgeId(1));
        let inv = graded_inner_inverse(&alg, &d, &map, &a).unwrap();
        assert_eq!(alg.mul_all([&a, &inv.b, &a]), a);
        assert_eq!(inv.b.degree(), Degree::Homogeneous(-1));

        let mixed = alg.edge(crate::EdgeId(0)) + alg.vertex(crate::VertexId(0));
        assert_eq!(
            graded_inner_inverse(&alg, &d, &map, &mixed),
            Err(RegularityError::NotHomogeneous)
        );
    }

    #[test]
    fn bgr_examples() {
        let (_, d, _) = setup(&["v"], &[]);
        assert_eq!(bgr_enumerate(&d).len(), 2);
        let (_, d, _) = setup(&["a", "b"], &[("c", "b", "b")]);
        let all = bgr_enumerate(&d);
        assert_eq!(all.len(), 4);
        assert!(all[0].is_zero());
        assert!(all[0].to_tuple(&d).is_zero());
    }

    #[test]
    fn idempotent_report_examples() {
        let (alg, d, map) = setup(&["v1", "v2", "v3"], &[("e1", "v1", "v2"), ("e2", "v2", "v3")]);
        let v3 = alg.vertex(alg.graph().vertex("v3").unwrap());
        let t = idempotent_report(&alg, &d, &map, &v3).unwrap().types.unwrap();
        assert_eq!(t.block_ranks, vec![1]);
        assert!(t.abelian && t.faithful && t.directly_finite);
        let t = idempotent_report(&alg, &d, &map, &alg.identity()).unwrap().types.unwrap();
        assert_eq!(t.block_ranks, vec![3]);
        assert!(!t.abelian && t.faithful);

        let e1 = alg.edge(crate::EdgeId(0));
        let r = idempotent_report(&alg, &d, &map, &e1).unwrap();
        assert!(!r.is_idempotent && !r.is_homogeneous_deg0);
        assert!(r.types.is_none());

        let (alg, d, map) = setup(&["v1", "v2"], &[("c", "v2", "v2")]);
        let v1 = alg.vertex(alg.graph().vertex("v1").unwrap());
        let t = idempotent_report(&alg, &d, &map, &v1).unwrap().types.unwrap();
        assert_eq!(t.block_ranks, vec![1, 0]);
        assert!(t.abelian && !t.faithful);
    }

    #[test]
    fn witness_examples() {
        let (alg, d, _) = setup(&["v1", "v2", "v3"], &[("e1", "v1", "v2"), ("e2", "v2", "v3")]);
        assert_eq!(type_i_witness(&alg, &d).unwrap(), alg.vertex(alg.graph().vertex("v3").unwrap()));

        let (alg, d, map) = setup(&["v1", "v2"], &[("c", "v2", "v2")]);
        let w = type_i_witness(&alg, &d).unwrap();
        assert_eq!(w, alg.identity());
        let t = idempotent_report(&alg, &d, &map, &w).unwrap().types.unwrap();
        assert!(t.abelian && t.faithful);
    }

    #[test]
    fn abelian_idempotent_in_right_ideal() {
        let (alg, d, map) = setup(&["v1", "v2", "v3"], &[("e1", "v1", "v2"), ("e2", "v2", "v3")]);
        let z = alg.identity();
        let g = abelian_idempotent_in_ideal(&alg, &d, &map, &z).unwrap();
        assert!(!g.is_zero());
        assert_eq!(alg.mul(&g, &g), g);
        let t = idempotent_report(&alg, &d, &map, &g).unwrap().types.unwrap();
        assert!(t.abelian);
    }
}
