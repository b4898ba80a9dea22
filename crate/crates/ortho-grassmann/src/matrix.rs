//! Dense matrices over the Gaussian rationals with exact elimination.
//!
//! Everything here is tolerance-free: rank, kernels and inverses are decided
//! by field arithmetic alone. Zero-row matrices are legal values (the kernel
//! of a 0 x n matrix is all of C^n), which keeps subspace code total.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::GaussianRational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

/// Outcome of Gauss-Jordan elimination: the unique reduced row echelon form,
/// its rank and the pivot column indices.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: ExactMatrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, GaussianRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>, cols: usize) -> Result<Self> {
        for r in &rows {
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row of length {} in a {}-column matrix",
                    r.len(),
                    cols
                )));
            }
        }
        let n = rows.len();
        Ok(ExactMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Parses entries in the scalar text grammar; rows must be equal length.
    pub fn parse(rows: &[&[&str]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| GaussianRational::from_str(s)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        Self::from_rows(parsed, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussianRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussianRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[GaussianRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<GaussianRational> {
        self.row(r).to_vec()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[GaussianRational]> {
        (0..self.rows).map(|r| self.row(r))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn conjugate(&self) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e.conjugate()).collect(),
        }
    }

    /// Conjugate transpose: `adjoint(A)[i,j] = conjugate(A[j,i])`.
    pub fn adjoint(&self) -> Self {
        self.conjugate().transpose()
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }

    pub fn scalar_mul(&self, s: &GaussianRational) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e * s).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| -e).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &Self,
        f: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational,
    ) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(r, c);
                    out.set(r, c, cur + &(a * b));
                }
            }
        }
        Ok(out)
    }

    pub fn hstack(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "hstack of {} rows with {} rows",
                self.rows, rhs.rows
            )));
        }
        let mut rows = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut row = self.row_vec(r);
            row.extend_from_slice(rhs.row(r));
            rows.push(row);
        }
        Self::from_rows(rows, self.cols + rhs.cols)
    }

    pub fn vstack(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.cols {
            return Err(Error::ShapeMismatch(format!(
                "vstack of {} cols with {} cols",
                self.cols, rhs.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Ok(ExactMatrix {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn submatrix_cols(&self, from: usize, to: usize) -> Self {
        let mut out = Self::zeros(self.rows, to - from);
        for r in 0..self.rows {
            for c in from..to {
                out.set(r, c - from, self.get(r, c).clone());
            }
        }
        out
    }

    /// Gauss-Jordan elimination to the unique reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&p| !m.get(p, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inverse().expect("pivot is nonzero");
            m.scale_row(r, &inv);
            for q in 0..m.rows {
                if q != r && !m.get(q, c).is_zero() {
                    let factor = m.get(q, c).clone();
                    m.row_sub_scaled(q, r, &factor);
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: r,
            pivot_cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// A canonical (RREF) basis of `{x : A x^T = 0}`, one vector per row.
    /// Row count is always `cols - rank`.
    pub fn kernel_basis(&self) -> ExactMatrix {
        let Rref {
            matrix: r,
            rank,
            pivot_cols,
        } = self.rref();
        let free_cols: Vec<usize> = (0..self.cols).filter(|c| !pivot_cols.contains(c)).collect();
        let mut rows = Vec::with_capacity(free_cols.len());
        for &f in &free_cols {
            let mut v = vec![GaussianRational::zero(); self.cols];
            v[f] = GaussianRational::one();
            for (ri, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -r.get(ri, f);
            }
            rows.push(v);
        }
        let raw = ExactMatrix::from_rows(rows, self.cols).expect("uniform rows");
        debug_assert_eq!(raw.rows, self.cols - rank);
        raw.rref().matrix.take_rows(self.cols - rank)
    }

    /// Keeps the first `n` rows (used to drop the zero tail of an RREF).
    pub fn take_rows(&self, n: usize) -> ExactMatrix {
        ExactMatrix {
            rows: n,
            cols: self.cols,
            data: self.data[..n * self.cols].to_vec(),
        }
    }

    pub fn inverse(&self) -> Result<ExactMatrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "inverse of {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let augmented = self.hstack(&Self::identity(n))?;
        let red = augmented.rref();
        // Invertible iff every pivot lands in the left block.
        if red.pivot_cols != (0..n).collect::<Vec<_>>() {
            return Err(Error::Singular);
        }
        Ok(red.matrix.submatrix_cols(n, 2 * n))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: &GaussianRational) {
        for c in 0..self.cols {
            let v = self.get(r, c) * s;
            self.set(r, c, v);
        }
    }

    fn row_sub_scaled(&mut self, dst: usize, src: usize, factor: &GaussianRational) {
        for c in 0..self.cols {
            let v = self.get(dst, c) - &(self.get(src, c) * factor);
            self.set(dst, c, v);
        }
    }

    /// Structural lexicographic order for canonical container sorting.
    pub fn cmp_structural(&self, other: &Self) -> Ordering {
        (self.rows, self.cols)
            .cmp(&(other.rows, other.cols))
            .then_with(|| {
                for (a, b) in self.data.iter().zip(&other.data) {
                    let o = a.cmp_structural(b);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = GaussianRational;
    fn index(&self, (r, c): (usize, usize)) -> &GaussianRational {
        self.get(r, c)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Row-vector dot against a matrix acting from the right: `v * M`.
pub fn apply_row(v: &[GaussianRational], m: &ExactMatrix) -> Vec<GaussianRational> {
    assert_eq!(v.len(), m.rows(), "row/matrix shape mismatch");
    let mut out = vec![GaussianRational::zero(); m.cols()];
    for (k, coeff) in v.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        for c in 0..m.cols() {
            let e = m.get(k, c);
            if !e.is_zero() {
                out[c] = &out[c] + &(coeff * e);
            }
        }
    }
    out
}

/// Hermitian inner product of coordinate rows, conjugate-linear in the
/// second argument: `<x,y> = sum_j x_j * conjugate(y_j)`.
pub fn inner_product(x: &[GaussianRational], y: &[GaussianRational]) -> GaussianRational {
    assert_eq!(x.len(), y.len(), "inner product length mismatch");
    let mut acc = GaussianRational::zero();
    for (a, b) in x.iter().zip(y) {
        acc = &acc + &(a * &b.conjugate());
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[&str]]) -> ExactMatrix {
        ExactMatrix::parse(rows).unwrap()
    }

    #[test]
    fn rref_of_zero_matrix_has_rank_zero() {
        let z = ExactMatrix::zeros(3, 4);
        let r = z.rref();
        assert_eq!(r.rank, 0);
        assert!(r.pivot_cols.is_empty());
        assert_eq!(r.matrix, z);
    }

    #[test]
    fn rref_matches_hand_elimination_rank_one() {
        // [[1,1],[1,1]] -> [[1,1],[0,0]], rank 1, pivot col 0.
        let r = m(&[&["1", "1"], &["1", "1"]]).rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivot_cols, vec![0]);
        assert_eq!(r.matrix, m(&[&["1", "1"], &["0", "0"]]));
    }

    #[test]
    fn rref_matches_hand_elimination_swap() {
        let r = m(&[&["0", "1"], &["1", "0"]]).rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.matrix, ExactMatrix::identity(2));
        assert_eq!(r.pivot_cols, vec![0, 1]);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let k = ExactMatrix::identity(3).kernel_basis();
        assert_eq!(k.rows(), 0);
        assert_eq!(k.cols(), 3);
    }

    #[test]
    fn kernel_of_single_equation() {
        let k = m(&[&["1", "1"]]).kernel_basis();
        assert_eq!(k.rows(), 1);
        // Canonical RREF form of span{(1,-1)}.
        assert_eq!(k, m(&[&["1", "-1"]]));
    }

    #[test]
    fn kernel_with_complex_entry_annihilates_exactly() {
        let a = m(&[&["1", "i"]]);
        let k = a.kernel_basis();
        assert_eq!(k.rows(), 1);
        let prod = a.matmul(&k.transpose()).unwrap();
        assert!(prod.is_zero());
        // Canonical form has leading 1.
        assert!(k.get(0, 0).is_one());
    }

    #[test]
    fn adjoint_is_an_involution_and_flips_i() {
        let a = m(&[&["i", "2"], &["1-i", "3/2"]]);
        assert_eq!(a.adjoint().adjoint(), a);
        let single = m(&[&["i"]]);
        assert_eq!(single.adjoint(), m(&[&["-i"]]));
    }

    #[test]
    fn identity_is_neutral_for_matmul() {
        let a = m(&[&["1", "2i"], &["3", "4-i"]]);
        assert_eq!(ExactMatrix::identity(2).matmul(&a).unwrap(), a);
        assert_eq!(a.matmul(&ExactMatrix::identity(2)).unwrap(), a);
    }

    #[test]
    fn shape_mismatch_errors() {
        let a = ExactMatrix::zeros(2, 3);
        let b = ExactMatrix::zeros(2, 2);
        assert!(a.matmul(&b).is_err());
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn inverse_round_trips() {
        let a = m(&[&["1", "i"], &["0", "2"]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.matmul(&inv).unwrap(), ExactMatrix::identity(2));
        assert!(m(&[&["1", "1"], &["1", "1"]]).inverse().is_err());
    }

    fn arb_matrix(max_dim: usize) -> impl Strategy<Value = ExactMatrix> {
        (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
            proptest::collection::vec(
                (-4i64..=4, 1i64..=3, -4i64..=4, 1i64..=3),
                r * c,
            )
            .prop_map(move |entries| {
                let data = entries
                    .into_iter()
                    .map(|(a, b, cc, d)| {
                        &GaussianRational::from_ratio(a, b)
                            + &(&GaussianRational::from_ratio(cc, d) * &GaussianRational::i())
                    })
                    .collect::<Vec<_>>();
                let rows = data.chunks(c).map(|ch| ch.to_vec()).collect();
                ExactMatrix::from_rows(rows, c).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn rank_equals_rank_of_adjoint(a in arb_matrix(5)) {
            prop_assert_eq!(a.rank(), a.adjoint().rank());
        }

        #[test]
        fn kernel_dimension_and_annihilation(a in arb_matrix(5)) {
            let k = a.kernel_basis();
            prop_assert_eq!(k.rows() + a.rank(), a.cols());
            if k.rows() > 0 {
                prop_assert!(a.matmul(&k.transpose()).unwrap().is_zero());
            }
            prop_assert_eq!(k.rank(), k.rows());
        }

        #[test]
        fn rref_is_idempotent(a in arb_matrix(5)) {
            let r = a.rref().matrix;
            prop_assert_eq!(r.rref().matrix, r);
        }
    }
}
