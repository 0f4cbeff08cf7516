use crate::linalg::Matrix;

use super::{Euclidean, Ring};

/// `U·m·V = D` with `U`, `V` invertible and `D` diagonal, each nonzero
/// diagonal entry dividing the next.
#[derive(Debug, Clone, PartialEq)]
pub struct SmithForm<T: Ring> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
    /// Inverses of `u` and `v`, tracked alongside so no inversion over the
    /// ring is ever needed.
    pub u_inv: Matrix<T>,
    pub v_inv: Matrix<T>,
}

impl<T: Ring> SmithForm<T> {
    /// Number of nonzero diagonal entries, i.e. the rank over the fraction field.
    pub fn rank(&self) -> usize {
        (0..self.d.rows().min(self.d.cols()))
            .filter(|&i| !self.d[(i, i)].is_zero())
            .count()
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

/// Smith normal form over a Euclidean domain.
///
/// Pivots are chosen by minimal norm (row-major on ties) and no unit
/// normalization is applied to the diagonal, so a matrix that is already
/// diagonal with the divisibility chain comes back unchanged with `U = V = I`.
pub fn smith_normal_form<T: Euclidean>(m: &Matrix<T>) -> SmithForm<T> {
    let ctx = m.ctx().clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = Matrix::identity(&ctx, rows);
    let mut u_inv = Matrix::identity(&ctx, rows);
    let mut v = Matrix::identity(&ctx, cols);
    let mut v_inv = Matrix::identity(&ctx, cols);

    // row op on D is left-multiplication by E: U ← E·U, U⁻¹ ← U⁻¹·E⁻¹
    let row_add = |d: &mut Matrix<T>, u: &mut Matrix<T>, ui: &mut Matrix<T>, t: usize, s: usize, f: &T| {
        d.add_row_multiple(t, s, f);
        u.add_row_multiple(t, s, f);
        ui.add_col_multiple(s, t, &(-f.clone()));
    };
    // column op is right-multiplication by E: V ← V·E, V⁻¹ ← E⁻¹·V⁻¹
    let col_add = |d: &mut Matrix<T>, v: &mut Matrix<T>, vi: &mut Matrix<T>, t: usize, s: usize, f: &T| {
        d.add_col_multiple(t, s, f);
        v.add_col_multiple(t, s, f);
        vi.add_row_multiple(s, t, &(-f.clone()));
    };

    for k in 0..rows.min(cols) {
        loop {
            let pivot = (k..rows)
                .flat_map(|i| (k..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !d[(i, j)].is_zero())
                .min_by_key(|&(i, j)| d[(i, j)].norm());
            let Some((pi, pj)) = pivot else {
                return SmithForm { u, d, v, u_inv, v_inv };
            };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            u_inv.swap_cols(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);
            v_inv.swap_rows(k, pj);

            let mut clean = true;
            for i in k + 1..rows {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let (q, r) = d[(i, k)].div_rem(&d[(k, k)]);
                row_add(&mut d, &mut u, &mut u_inv, i, k, &(-q));
                clean &= r.is_zero();
            }
            for j in k + 1..cols {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let (q, r) = d[(k, j)].div_rem(&d[(k, k)]);
                col_add(&mut d, &mut v, &mut v_inv, j, k, &(-q));
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let offender = (k + 1..rows)
                .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].div_rem(&d[(k, k)]).1.is_zero());
            match offender {
                Some((i, _)) => {
                    let one = T::one(&ctx);
                    row_add(&mut d, &mut u, &mut u_inv, k, i, &one);
                }
                None => break,
            }
        }
    }
    SmithForm { u, d, v, u_inv, v_inv }
}
