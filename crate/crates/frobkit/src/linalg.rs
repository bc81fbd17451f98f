//! Dense linear algebra over F_p: row reduction, solving, nullspaces.
//!
//! Everything here is deterministic — pivots are chosen as the first nonzero
//! entry in row-major scan order — so higher layers can freeze expected
//! outputs byte-for-byte.

use crate::field_poly::FpElem;

/// Dense matrix over F_p in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&v| v % p));
        }
        FpMatrix { p, rows: r, cols: c, data }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        let mut out = FpMatrix::zero(self.p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = (out.get(i, j) + a * rhs.get(k, j)) % self.p;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        assert_eq!(self.p, rhs.p);
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a + b) % self.p)
            .collect();
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        assert_eq!(self.p, rhs.p);
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a + self.p - b) % self.p)
            .collect();
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u64) -> FpMatrix {
        let c = c % self.p;
        let data = self.data.iter().map(|&a| (a * c) % self.p).collect();
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for (j, &x) in v.iter().enumerate() {
                    acc = (acc + self.get(i, j) * x) % self.p;
                }
                acc
            })
            .collect()
    }

    /// Kronecker product: (self ⊗ rhs)[(i,k),(j,l)] = self[i][j]·rhs[k][l].
    pub fn kron(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.p, rhs.p);
        let mut out = FpMatrix::zero(self.p, self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, a * rhs.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            self.swap_rows(row, pr);
            let inv = FpElem::new(self.get(row, col), self.p).inv().expect("nonzero pivot");
            self.scale_row(row, inv.value());
            for r in 0..self.rows {
                if r != row {
                    let f = self.get(r, col);
                    if f != 0 {
                        self.subtract_scaled(r, row, f);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, c: u64) {
        for j in 0..self.cols {
            let v = (self.get(r, j) * c) % self.p;
            self.set(r, j, v);
        }
    }

    fn subtract_scaled(&mut self, r: usize, src: usize, factor: u64) {
        for j in 0..self.cols {
            let v = (self.get(r, j) + (self.p - factor % self.p) * self.get(src, j)) % self.p;
            self.set(r, j, v);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// One solution of self · x = b, if any.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FpMatrix::zero(self.p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent row 0 … 0 | 1
        }
        let mut x = vec![0u64; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }

    /// Basis of the right nullspace, deterministic order (one vector per free
    /// column, ascending).
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                // pivot var = -(entry at free column)
                let coeff = m.get(r, free);
                v[c] = (self.p - coeff) % self.p;
            }
            basis.push(v);
        }
        basis
    }
}

/// Span tracker: incrementally row-reduces inserted vectors, reporting whether
/// each insertion enlarged the span. Used for closure computations.
#[derive(Debug, Clone)]
pub struct SpanBuilder {
    p: u64,
    width: usize,
    /// rows in echelon form, keyed by leading column
    rows: Vec<(usize, Vec<u64>)>,
}

impl SpanBuilder {
    pub fn new(p: u64, width: usize) -> Self {
        SpanBuilder { p, width, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Leading columns of the echelon rows, ascending. Rows are kept mutually
    /// reduced, so a vector reduced by the span is zero at every pivot column
    /// and untouched elsewhere: the non-pivot coordinates parameterize the
    /// quotient space.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(l, _)| *l).collect()
    }

    /// Reduce `v` by the current span; returns the residual.
    pub fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        assert_eq!(v.len(), self.width);
        for (lead, row) in &self.rows {
            let f = v[*lead] % self.p;
            if f != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = (*x + (self.p - f) * y) % self.p;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v.to_vec()).iter().all(|&x| x == 0)
    }

    /// Insert `v`; returns true if the span grew.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        let mut r = self.reduce(v);
        let Some(lead) = r.iter().position(|&x| x % self.p != 0) else {
            return false;
        };
        let inv = FpElem::new(r[lead], self.p).inv().expect("nonzero").value();
        for x in r.iter_mut() {
            *x = (*x * inv) % self.p;
        }
        // keep existing rows reduced against the new one
        for (_, row) in self.rows.iter_mut() {
            let f = row[lead] % self.p;
            if f != 0 {
                for (x, y) in row.iter_mut().zip(&r) {
                    *x = (*x + (self.p - f) * y) % self.p;
                }
            }
        }
        self.rows.push((lead, r));
        self.rows.sort_by_key(|(l, _)| *l);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_rank() {
        let mut m = FpMatrix::from_rows(2, &[vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let pivots = m.rref();
        assert_eq!(pivots, vec![0, 1]);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = FpMatrix::from_rows(3, &[vec![1, 2], vec![2, 1]]);
        let x = m.solve(&[1, 2]).unwrap();
        assert_eq!(m.apply(&x), vec![1, 2]);
        let singular = FpMatrix::from_rows(3, &[vec![1, 2], vec![2, 4]]);
        assert!(singular.solve(&[1, 0]).is_none());
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let m = FpMatrix::from_rows(5, &[vec![1, 2, 3], vec![2, 4, 0]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        for v in ns {
            assert!(m.apply(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn kron_shape_and_values() {
        let a = FpMatrix::from_rows(3, &[vec![1, 2]]);
        let b = FpMatrix::from_rows(3, &[vec![2], vec![1]]);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (2, 2));
        assert_eq!(k.get(0, 0), 2);
        assert_eq!(k.get(0, 1), 4 % 3);
        assert_eq!(k.get(1, 1), 2);
    }

    #[test]
    fn span_builder_detects_dependence() {
        let mut s = SpanBuilder::new(2, 3);
        assert!(s.insert(vec![1, 1, 0]));
        assert!(s.insert(vec![0, 1, 1]));
        assert!(!s.insert(vec![1, 0, 1])); // sum of the first two
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&[1, 0, 1]));
        assert!(!s.contains(&[0, 0, 1]));
    }
}
