use super::Matroid;
use crate::error::{invalid, Result};
use crate::scalar::Field;

/// Column matroid of a matrix over an exact field: element `c` is column `c`
/// and a set is independent iff its columns are linearly independent.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMatroid<F> {
    rows: usize,
    columns: Vec<Vec<F>>,
}

impl<F: Field> LinearMatroid<F> {
    /// Builds from a row-major matrix; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().position(|row| row.len() != width) {
            return Err(invalid(format!(
                "matrix row {r} has {} entries, expected {width}",
                rows[r].len()
            )));
        }
        let columns = (0..width)
            .map(|c| rows.iter().map(|row| row[c].clone()).collect())
            .collect();
        Ok(LinearMatroid {
            rows: rows.len(),
            columns,
        })
    }

    pub fn from_columns(rows: usize, columns: Vec<Vec<F>>) -> Result<Self> {
        if let Some(c) = columns.iter().position(|col| col.len() != rows) {
            return Err(invalid(format!("column {c} does not have {rows} entries")));
        }
        Ok(LinearMatroid { rows, columns })
    }

    pub fn row_count(&self) -> usize {
        self.rows
    }

    pub fn column(&self, c: usize) -> &[F] {
        &self.columns[c]
    }

    /// Rows in which column `c` is nonzero, ascending.
    pub fn nonzero_rows(&self, c: usize) -> Vec<usize> {
        self.columns[c]
            .iter()
            .enumerate()
            .filter_map(|(r, x)| (!x.is_zero()).then_some(r))
            .collect()
    }

    /// Largest number of nonzeros in any column.
    pub fn column_sparsity(&self) -> usize {
        (0..self.columns.len())
            .map(|c| self.nonzero_rows(c).len())
            .max()
            .unwrap_or(0)
    }

    /// Rank of the selected columns by Gaussian elimination; exact whenever
    /// `F` is.
    pub fn column_rank(&self, set: &[usize]) -> usize {
        let mut m: Vec<Vec<F>> = set.iter().map(|&c| self.columns[c].clone()).collect();
        let cols = m.len();
        let mut rank = 0;
        for row in 0..self.rows {
            if rank == cols {
                break;
            }
            let Some(pivot) = (rank..cols).find(|&j| !m[j][row].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let (head, tail) = m.split_at_mut(rank + 1);
            let p = &head[rank];
            for col in tail.iter_mut() {
                if col[row].is_zero() {
                    continue;
                }
                let factor = col[row].clone() / p[row].clone();
                for r in row..self.rows {
                    let delta = factor.clone() * p[r].clone();
                    col[r] = col[r].clone() - delta;
                }
            }
            rank += 1;
        }
        rank
    }
}

impl<F: Field> Matroid for LinearMatroid<F> {
    fn ground_size(&self) -> usize {
        self.columns.len()
    }

    fn independent(&self, set: &[usize]) -> bool {
        set.len() <= self.rows && self.column_rank(set) == set.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn dependent_columns_detected_exactly() {
        // columns (1,2), (2,4), (0,1)
        let m = LinearMatroid::from_rows(vec![vec![q(1), q(2), q(0)], vec![q(2), q(4), q(1)]])
            .unwrap();
        assert!(!m.independent(&[0, 1]));
        assert!(m.independent(&[0, 2]));
        assert!(m.independent(&[1, 2]));
        assert!(!m.independent(&[0, 1, 2]));
        assert_eq!(m.nonzero_rows(2), vec![1]);
        assert_eq!(m.column_sparsity(), 2);
    }

    #[test]
    fn zero_column_is_a_loop() {
        let m = LinearMatroid::from_columns(2, vec![vec![q(0), q(0)], vec![q(1), q(0)]]).unwrap();
        assert!(m.is_loop(0));
        assert!(!m.is_loop(1));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(LinearMatroid::from_rows(vec![vec![q(1)], vec![q(1), q(2)]]).is_err());
    }
}
