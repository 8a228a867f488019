use super::poly::{Poly, PolyRing};

/// A matrix of polynomials stored by columns; module generators and
/// relations are columns throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    nrows: usize,
    columns: Vec<Vec<Poly>>,
}

impl Matrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        Matrix { nrows, columns: vec![vec![Poly::zero(); nrows]; ncols] }
    }

    pub fn empty(nrows: usize) -> Self {
        Matrix { nrows, columns: Vec::new() }
    }

    pub fn identity(ring: &PolyRing, n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.columns[i][i] = ring.one();
        }
        m
    }

    /// Diagonal matrix `c·I`.
    pub fn scalar(n: usize, c: &Poly) -> Self {
        let mut m = Matrix::zero(n, n);
        if !c.is_zero() {
            for i in 0..n {
                m.columns[i][i] = c.clone();
            }
        }
        m
    }

    pub fn from_columns(nrows: usize, columns: Vec<Vec<Poly>>) -> Self {
        assert!(columns.iter().all(|c| c.len() == nrows), "column length mismatch");
        Matrix { nrows, columns }
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>, ncols: usize) -> Self {
        let nrows = rows.len();
        let mut m = Matrix::zero(nrows, ncols);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), ncols, "row length mismatch");
            for (j, p) in row.into_iter().enumerate() {
                m.columns[j][i] = p;
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<Poly>] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &[Poly] {
        &self.columns[j]
    }

    pub fn into_columns(self) -> Vec<Vec<Poly>> {
        self.columns
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.columns[j][i]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.columns[j][i] = p;
    }

    pub fn push_column(&mut self, col: Vec<Poly>) {
        assert_eq!(col.len(), self.nrows, "column length mismatch");
        self.columns.push(col);
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().flatten().all(Poly::is_zero)
    }

    /// `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.nrows, other.nrows, "row count mismatch");
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Matrix { nrows: self.nrows, columns }
    }

    /// Stack `self` on top of `other`.
    pub fn vcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols(), other.ncols(), "column count mismatch");
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        Matrix { nrows: self.nrows + other.nrows, columns }
    }

    pub fn block_diagonal(&self, other: &Matrix) -> Matrix {
        let top = self.hcat(&Matrix::zero(self.nrows, other.ncols()));
        let bottom = Matrix::zero(other.nrows, self.ncols()).hcat(other);
        top.vcat(&bottom)
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        Matrix { nrows: self.nrows, columns: idx.iter().map(|&j| self.columns[j].clone()).collect() }
    }

    pub fn select_rows(&self, range: std::ops::Range<usize>) -> Matrix {
        let nrows = range.len();
        let columns = self.columns.iter().map(|c| c[range.clone()].to_vec()).collect();
        Matrix { nrows, columns }
    }

    pub fn transpose(&self) -> Matrix {
        let rows: Vec<Vec<Poly>> =
            (0..self.nrows).map(|i| self.columns.iter().map(|c| c[i].clone()).collect()).collect();
        Matrix { nrows: self.ncols(), columns: rows }
    }

    pub fn apply(&self, ring: &PolyRing, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.ncols(), "vector length mismatch");
        let mut out = vec![Poly::zero(); self.nrows];
        for (col, c) in self.columns.iter().zip(v) {
            if c.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(col) {
                if !a.is_zero() {
                    *o = ring.add(o, &ring.mul(a, c));
                }
            }
        }
        out
    }

    pub fn mul(&self, ring: &PolyRing, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols(), other.nrows, "dimension mismatch");
        let columns = other.columns.iter().map(|c| self.apply(ring, c)).collect();
        Matrix { nrows: self.nrows, columns }
    }

    pub fn scale(&self, ring: &PolyRing, c: &Poly) -> Matrix {
        let columns =
            self.columns.iter().map(|col| col.iter().map(|p| ring.mul(p, c)).collect()).collect();
        Matrix { nrows: self.nrows, columns }
    }

    pub fn add(&self, ring: &PolyRing, other: &Matrix) -> Matrix {
        assert_eq!((self.nrows, self.ncols()), (other.nrows, other.ncols()), "shape mismatch");
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| ring.add(x, y)).collect())
            .collect();
        Matrix { nrows: self.nrows, columns }
    }

    pub fn sub(&self, ring: &PolyRing, other: &Matrix) -> Matrix {
        self.add(ring, &other.map(|p| ring.neg(p)))
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Matrix {
        let columns = self.columns.iter().map(|c| c.iter().map(&f).collect()).collect();
        Matrix { nrows: self.nrows, columns }
    }

    /// Entries as strings, row by row.
    pub fn to_strings(&self, ring: &PolyRing) -> Vec<Vec<String>> {
        (0..self.nrows)
            .map(|i| self.columns.iter().map(|c| ring.format(&c[i])).collect())
            .collect()
    }

    pub fn from_strings(ring: &PolyRing, rows: &[Vec<String>], ncols: usize) -> crate::Result<Matrix> {
        let parsed = rows
            .iter()
            .map(|r| {
                if r.len() != ncols {
                    return Err(crate::Error::Parse(format!(
                        "matrix row has {} entries, expected {ncols}",
                        r.len()
                    )));
                }
                r.iter().map(|s| ring.parse(s)).collect::<crate::Result<Vec<_>>>()
            })
            .collect::<crate::Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(parsed, ncols))
    }
}
