use std::fmt;

use crate::error::CodeError;
use crate::field::{Field, FieldElem};

/// Dense row-major matrix over GF(q).
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FieldElem::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldElem::ONE);
        }
        m
    }

    /// Builds from explicit rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<FieldElem>>) -> Result<Self, CodeError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(CodeError::Shape(format!(
                    "row {i} has length {}, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [FieldElem] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[FieldElem]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn column(&self, c: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn select_rows(&self, range: std::ops::Range<usize>) -> Matrix {
        Matrix {
            rows: range.len(),
            cols: self.cols,
            data: self.data[range.start * self.cols..range.end * self.cols].to_vec(),
        }
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, CodeError> {
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(CodeError::Shape(format!(
                "cannot stack {} columns on {} columns",
                self.cols, other.cols
            )));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols,
            data,
        })
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn mul(&self, f: &Field, other: &Matrix) -> Result<Matrix, CodeError> {
        if self.cols != other.rows {
            return Err(CodeError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: Σ_i coeffs[i] · row_i.
    pub fn combine_rows(&self, f: &Field, coeffs: &[FieldElem]) -> Vec<FieldElem> {
        debug_assert_eq!(coeffs.len(), self.rows);
        let mut out = vec![FieldElem::ZERO; self.cols];
        for (r, &c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(self.row(r)) {
                *o = f.add(*o, f.mul(c, v));
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, f: &Field, r: usize, s: FieldElem) {
        for v in self.row_mut(r) {
            *v = f.mul(*v, s);
        }
    }

    /// row[dst] += s * row[src]
    fn add_scaled_row(&mut self, f: &Field, dst: usize, src: usize, s: FieldElem) {
        if s.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = f.add(self.get(dst, c), f.mul(s, self.get(src, c)));
            self.set(dst, c, v);
        }
    }

    /// Reduced row echelon form over the leading `limit` columns, mirroring every row
    /// operation onto `track` when given. Pivot rule: leftmost column, smallest row index.
    /// Returns the pivot columns.
    fn reduce(&mut self, f: &Field, limit: usize, mut track: Option<&mut Matrix>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..limit.min(self.cols) {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(next, p);
            if let Some(t) = track.as_deref_mut() {
                t.swap_rows(next, p);
            }
            let inv = f.inv(self.get(next, col)).expect("pivot is nonzero");
            self.scale_row(f, next, inv);
            if let Some(t) = track.as_deref_mut() {
                t.scale_row(f, next, inv);
            }
            for r in 0..self.rows {
                if r != next {
                    let s = self.get(r, col);
                    self.add_scaled_row(f, r, next, s);
                    if let Some(t) = track.as_deref_mut() {
                        t.add_scaled_row(f, r, next, s);
                    }
                }
            }
            pivots.push(col);
            next += 1;
        }
        pivots
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self, f: &Field) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.reduce(f, self.cols, None);
        (m, pivots)
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.rref(f).1.len()
    }

    /// Row-reduces only the first `k` columns to `(I_k | *; 0 | *)`.
    /// Returns the reduced matrix and the invertible `basis_change` with
    /// `reduced = basis_change · self`.
    pub fn partially_systematic(&self, f: &Field, k: usize) -> Result<(Matrix, Matrix), CodeError> {
        if k > self.rows || k > self.cols {
            return Err(CodeError::Shape(format!(
                "k = {k} exceeds a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut m = self.clone();
        let mut change = Matrix::identity(self.rows);
        let pivots = m.reduce(f, k, Some(&mut change));
        if pivots.len() < k {
            return Err(CodeError::SystematicPrecondition {
                k,
                rank: pivots.len(),
            });
        }
        debug_assert!(pivots.iter().copied().eq(0..k));
        Ok((m, change))
    }

    /// Finds `a` with `aᵀ · self = target`, if one exists.
    pub fn solve_left(&self, f: &Field, target: &[FieldElem]) -> Option<Vec<FieldElem>> {
        // Solve selfᵀ a = target by reducing the augmented system.
        let t = self.transpose();
        if target.len() != t.rows {
            return None;
        }
        let mut aug = Matrix::zeros(t.rows, t.cols + 1);
        for (r, &v) in target.iter().enumerate() {
            for c in 0..t.cols {
                aug.set(r, c, t.get(r, c));
            }
            aug.set(r, t.cols, v);
        }
        let pivots = aug.reduce(f, t.cols + 1, None);
        if pivots.last() == Some(&t.cols) {
            return None;
        }
        let mut sol = vec![FieldElem::ZERO; t.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            sol[pc] = aug.get(r, t.cols);
        }
        Some(sol)
    }

    /// Basis (as rows) of the right null space {v : self · v = 0}.
    pub fn null_space(&self, f: &Field) -> Matrix {
        let (red, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            out.set(i, fc, FieldElem::ONE);
            for (r, &pc) in pivots.iter().enumerate() {
                // char 2: -x = x
                out.set(i, pc, red.get(r, fc));
            }
        }
        out
    }

    pub fn row_space_contains(&self, f: &Field, v: &[FieldElem]) -> bool {
        self.solve_left(f, v).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf16() -> Field {
        Field::new(2).unwrap()
    }

    fn m(f: &Field, rows: &[&[u16]]) -> Matrix {
        let cols = rows[0].len();
        Matrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&b| f.elem(b).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_and_rref() {
        let f = gf16();
        let a = m(&f, &[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        // row 1 = 2 * row 0 in GF(16)
        assert_eq!(a.rank(&f), 2);
        let (r, piv) = a.rref(&f);
        assert_eq!(piv, vec![0, 1]);
        assert!(r.row(2).iter().all(|e| e.is_zero()));
    }

    #[test]
    fn systematic_of_identity_prefix_is_trivial() {
        let f = gf16();
        let a = m(&f, &[&[1, 0, 5, 7], &[0, 1, 9, 3]]);
        let (red, change) = a.partially_systematic(&f, 2).unwrap();
        assert_eq!(red, a);
        assert_eq!(change, Matrix::identity(2));
    }

    #[test]
    fn systematic_rejects_repeated_columns() {
        let f = gf16();
        let a = m(&f, &[&[1, 1, 5], &[3, 3, 9]]);
        assert!(matches!(
            a.partially_systematic(&f, 2),
            Err(CodeError::SystematicPrecondition { k: 2, rank: 1 })
        ));
    }

    #[test]
    fn systematic_tracks_basis_change() {
        let f = gf16();
        let a = m(&f, &[&[3, 7, 1, 2], &[5, 2, 9, 9], &[1, 1, 1, 1]]);
        let (red, change) = a.partially_systematic(&f, 2).unwrap();
        assert_eq!(change.mul(&f, &a).unwrap(), red);
        assert_eq!(change.rank(&f), 3);
        assert_eq!(red.get(0, 0), FieldElem::ONE);
        assert_eq!(red.get(1, 1), FieldElem::ONE);
        assert!(red.get(0, 1).is_zero() && red.get(1, 0).is_zero());
        assert!(red.get(2, 0).is_zero() && red.get(2, 1).is_zero());
    }

    #[test]
    fn solve_and_null_space() {
        let f = gf16();
        let a = m(&f, &[&[1, 2, 3, 4], &[0, 1, 5, 6]]);
        let combo = a.combine_rows(&f, &[f.elem(7).unwrap(), f.elem(11).unwrap()]);
        assert_eq!(
            a.solve_left(&f, &combo).unwrap(),
            vec![f.elem(7).unwrap(), f.elem(11).unwrap()]
        );
        assert!(a
            .solve_left(
                &f,
                &[
                    FieldElem::ZERO,
                    FieldElem::ZERO,
                    FieldElem::ZERO,
                    FieldElem::ONE
                ]
            )
            .is_none());
        let ns = a.null_space(&f);
        assert_eq!(ns.rows(), 2);
        let prod = a.mul(&f, &ns.transpose()).unwrap();
        assert!(prod.is_zero());
    }
}
