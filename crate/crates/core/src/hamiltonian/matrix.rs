use std::io::Write;

use nalgebra::DMatrix;

/// Real symmetric matrix stored as its diagonal plus the strict upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetricMatrix {
    pub diagonal: Vec<f64>,
    /// `(row, col, value)` with `row < col`, sorted by row then column.
    pub upper: Vec<(usize, usize, f64)>,
}

impl SparseSymmetricMatrix {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Stored non-zeros counting both triangles.
    pub fn nnz(&self) -> usize {
        self.diagonal.len() + 2 * self.upper.len()
    }

    /// `y = H x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(y.len(), self.dim());
        for ((yi, di), xi) in y.iter_mut().zip(&self.diagonal).zip(x) {
            *yi = di * xi;
        }
        for &(r, c, v) in &self.upper {
            y[r] += v * x[c];
            y[c] += v * x[r];
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diagonal));
        for &(r, c, v) in &self.upper {
            m[(r, c)] += v;
            m[(c, r)] += v;
        }
        debug_assert_eq!(m.nrows(), n);
        m
    }

    /// Coordinate text dump: `row col value` per line, 1-based, both
    /// triangles, row-major, values with 17 significant digits.
    pub fn write_coordinate<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let n = self.dim();
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, &d) in self.diagonal.iter().enumerate() {
            rows[i].push((i, d));
        }
        for &(r, c, v) in &self.upper {
            rows[r].push((c, v));
            rows[c].push((r, v));
        }
        for (r, entries) in rows.iter_mut().enumerate() {
            entries.sort_by_key(|e| e.0);
            for &(c, v) in entries.iter() {
                writeln!(out, "{} {} {:.16e}", r + 1, c + 1, v)?;
            }
        }
        Ok(())
    }
}
