//! Exact dense linear algebra over the parameter field ℚ(parameters):
//! reduced row echelon form, solving, rank, and kernel bases. Zero tests
//! are exact because [`ParamScalar`] is a canonical form.

use crate::scalars::{ParamScalar, ParamSet};

/// A dense row-major matrix over the parameter field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Matrix {
    rows: usize,
    cols: usize,
    params: ParamSet,
    data: Vec<ParamScalar>,
}

impl Matrix {
    pub(crate) fn zeros(params: &ParamSet, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            params: params.clone(),
            data: vec![ParamScalar::zero(params); rows * cols],
        }
    }

    #[cfg(test)]
    pub(crate) fn from_rows(params: &ParamSet, rows: Vec<Vec<ParamScalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            params: params.clone(),
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds the matrix whose columns are the given vectors.
    pub(crate) fn from_columns(params: &ParamSet, columns: &[Vec<ParamScalar>]) -> Matrix {
        let c = columns.len();
        let r = columns.first().map_or(0, Vec::len);
        assert!(columns.iter().all(|col| col.len() == r), "ragged columns");
        let mut m = Matrix::zeros(params, r, c);
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub(crate) fn get(&self, r: usize, c: usize) -> &ParamScalar {
        &self.data[r * self.cols + c]
    }

    pub(crate) fn set(&mut self, r: usize, c: usize, v: ParamScalar) {
        self.data[r * self.cols + c] = v;
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub(crate) fn rref(&self) -> (Matrix, Vec<usize>) {
        self.rref_limited(self.cols)
    }

    /// As [`Matrix::rref`], but pivots are only chosen among the first
    /// `pivot_cols` columns; later columns are still fully reduced by the
    /// pivot rows.
    fn rref_limited(&self, pivot_cols: usize) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv_pivot = ParamScalar::one(&m.params)
                .div(m.get(row, col))
                .expect("pivot is nonzero");
            for c in col..m.cols {
                let v = m.get(row, c).mul(&inv_pivot);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = m.get(r, c).sub(&factor.mul(m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub(crate) fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// One solution of `self · x = rhs` with free variables set to zero, or
    /// `None` when the system is inconsistent.
    pub(crate) fn solve(&self, rhs: &[ParamScalar]) -> Option<Vec<ParamScalar>> {
        assert_eq!(rhs.len(), self.rows, "dimension mismatch");
        let mut augmented = Matrix::zeros(&self.params, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                augmented.set(r, c, self.get(r, c).clone());
            }
            augmented.set(r, self.cols, rhs[r].clone());
        }
        let (reduced, pivots) = augmented.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![ParamScalar::zero(&self.params); self.cols];
        for (r, &col) in pivots.iter().enumerate() {
            x[col] = reduced.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// Solves `self · x = b` for many right-hand sides in one elimination.
    /// Pivots stay inside the matrix block, so consistency is judged
    /// independently per column. Returns the rank of `self` and, for each
    /// right-hand side, one solution (free variables zero) or `None` when
    /// inconsistent.
    pub(crate) fn solve_columns(
        &self,
        rhs: &[Vec<ParamScalar>],
    ) -> (usize, Vec<Option<Vec<ParamScalar>>>) {
        assert!(rhs.iter().all(|b| b.len() == self.rows), "dimension mismatch");
        let width = self.cols + rhs.len();
        let mut augmented = Matrix::zeros(&self.params, self.rows, width);
        for r in 0..self.rows {
            for c in 0..self.cols {
                augmented.set(r, c, self.get(r, c).clone());
            }
            for (t, b) in rhs.iter().enumerate() {
                augmented.set(r, self.cols + t, b[r].clone());
            }
        }
        let (reduced, pivots) = augmented.rref_limited(self.cols);
        let rank = pivots.len();
        let solutions = (0..rhs.len())
            .map(|t| {
                let col = self.cols + t;
                if (rank..self.rows).any(|r| !reduced.get(r, col).is_zero()) {
                    return None;
                }
                let mut x = vec![ParamScalar::zero(&self.params); self.cols];
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = reduced.get(r, col).clone();
                }
                Some(x)
            })
            .collect();
        (rank, solutions)
    }

    /// A basis for the null space {x : self · x = 0}.
    pub(crate) fn kernel_basis(&self) -> Vec<Vec<ParamScalar>> {
        let (reduced, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![ParamScalar::zero(&self.params); self.cols];
            v[f] = ParamScalar::one(&self.params);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = reduced.get(r, f).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Matrix-vector product.
    #[cfg(test)]
    pub(crate) fn apply(&self, x: &[ParamScalar]) -> Vec<ParamScalar> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = ParamScalar::zero(&self.params);
                for c in 0..self.cols {
                    acc = acc.add(&self.get(r, c).mul(&x[c]));
                }
                acc
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn ps() -> ParamSet {
        ParamSet::new(&["alpha"])
    }

    fn s(text: &str) -> ParamScalar {
        ParamScalar::parse(&ps(), text).unwrap()
    }

    #[test]
    fn rank_with_parameters() {
        // Rows (1, alpha) and (alpha, alpha^2) are proportional.
        let m = Matrix::from_rows(
            &ps(),
            vec![
                vec![s("1"), s("alpha")],
                vec![s("alpha"), s("alpha^2")],
            ],
        );
        assert_eq!(m.rank(), 1);
        let kernel = m.kernel_basis();
        assert_eq!(kernel.len(), 1);
        assert!(m.apply(&kernel[0]).iter().all(ParamScalar::is_zero));
    }

    #[test]
    fn solve_parametric_system() {
        // x + alpha y = 1 + alpha, x - y = 0  =>  x = y = 1.
        let m = Matrix::from_rows(
            &ps(),
            vec![
                vec![s("1"), s("alpha")],
                vec![s("1"), s("-1")],
            ],
        );
        let sol = m.solve(&[s("1 + alpha"), s("0")]).unwrap();
        assert_eq!(sol, vec![s("1"), s("1")]);
        // Inconsistent right-hand side.
        let singular = Matrix::from_rows(
            &ps(),
            vec![
                vec![s("1"), s("alpha")],
                vec![s("2"), s("2*alpha")],
            ],
        );
        assert!(singular.solve(&[s("1"), s("3")]).is_none());
        assert!(singular.solve(&[s("1"), s("2")]).is_some());
    }

    #[test]
    fn kernel_of_rectangular_matrix() {
        let m = Matrix::from_rows(
            &ps(),
            vec![vec![
                ParamScalar::from_rational(&ps(), rat(1, 1)),
                ParamScalar::from_rational(&ps(), rat(1, 1)),
                ParamScalar::zero(&ps()),
            ]],
        );
        let kernel = m.kernel_basis();
        assert_eq!(kernel.len(), 2);
        for v in &kernel {
            assert!(m.apply(v).iter().all(ParamScalar::is_zero));
        }
    }
}
