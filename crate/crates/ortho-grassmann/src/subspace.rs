//! Subspaces of C^n in canonical reduced-basis form, their lattice
//! operations, projections, and the three binary predicates of the graphs:
//! adjacency, compatibility and ortho-adjacency.
//!
//! Conventions, used consistently everywhere:
//! - vectors are coordinate rows and operators act from the right, `v * M`;
//! - the Hermitian form is `<x,y> = sum_j x_j * conjugate(y_j)`,
//!   conjugate-linear in the second argument;
//! - a subspace is the row space of its basis matrix, which is kept in
//!   reduced row echelon form, so set equality is structural equality.
//!
//! The zero subspace (dim 0) is a legal value; it is needed as an operand
//! (e.g. the trivial `W` in common-neighbor constructions) but is excluded
//! from graph predicates, which require `0 < k < n`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{apply_row, inner_product, ExactMatrix};
use crate::scalar::GaussianRational;

#[derive(Clone)]
pub struct Subspace {
    ambient: usize,
    basis: ExactMatrix,
    projection: OnceLock<ExactMatrix>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl std::hash::Hash for Subspace {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.basis.hash(state);
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(n={}, basis={:?})", self.ambient, self.basis)
    }
}

impl Subspace {
    /// The zero subspace of C^n.
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: ExactMatrix::zeros(0, ambient),
            projection: OnceLock::new(),
        }
    }

    /// The full space C^n.
    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: ExactMatrix::identity(ambient),
            projection: OnceLock::new(),
        }
    }

    /// Span of the rows of `m`. Errors if the rows span only the zero space.
    pub fn span_matrix(m: &ExactMatrix) -> Result<Self> {
        let red = m.rref();
        if red.rank == 0 {
            return Err(Error::EmptySpan);
        }
        Ok(Subspace {
            ambient: m.cols(),
            basis: red.matrix.take_rows(red.rank),
            projection: OnceLock::new(),
        })
    }

    pub fn span_rows(rows: Vec<Vec<GaussianRational>>, ambient: usize) -> Result<Self> {
        Self::span_matrix(&ExactMatrix::from_rows(rows, ambient)?)
    }

    /// Span, allowing the zero outcome instead of erroring.
    pub fn span_allow_zero(m: &ExactMatrix) -> Self {
        let red = m.rref();
        Subspace {
            ambient: m.cols(),
            basis: red.matrix.take_rows(red.rank),
            projection: OnceLock::new(),
        }
    }

    /// Span of parsed coordinate rows, e.g. `Subspace::parse(4, &[&["1","0","0","0"]])`.
    pub fn parse(ambient: usize, rows: &[&[&str]]) -> Result<Self> {
        for r in rows {
            if r.len() != ambient {
                return Err(Error::ShapeMismatch(format!(
                    "vector of length {} in C^{}",
                    r.len(),
                    ambient
                )));
            }
        }
        Self::span_matrix(&ExactMatrix::parse(rows)?)
    }

    /// Span of standard basis vectors with the given 0-based indices.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let mut rows = Vec::with_capacity(indices.len());
        for &i in indices {
            assert!(i < ambient, "coordinate index out of range");
            let mut v = vec![GaussianRational::zero(); ambient];
            v[i] = GaussianRational::one();
            rows.push(v);
        }
        if rows.is_empty() {
            return Self::zero(ambient);
        }
        Self::span_rows(rows, ambient).expect("standard vectors are independent")
    }

    /// Span of a single coordinate row.
    pub fn line(v: Vec<GaussianRational>) -> Result<Self> {
        let n = v.len();
        Self::span_rows(vec![v], n)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Canonical RREF basis, one vector per row.
    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[GaussianRational]> {
        self.basis.iter_rows()
    }

    pub fn contains_vector(&self, v: &[GaussianRational]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        // Reduce against the RREF basis; membership iff the residual is zero.
        let mut residual = v.to_vec();
        let pivots = pivot_cols_of_rref(&self.basis);
        for (row_idx, &pc) in pivots.iter().enumerate() {
            let coeff = residual[pc].clone();
            if coeff.is_zero() {
                continue;
            }
            for c in 0..self.ambient {
                let e = self.basis.get(row_idx, c);
                if !e.is_zero() {
                    residual[c] = &residual[c] - &(&coeff * e);
                }
            }
        }
        residual.iter().all(|e| e.is_zero())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        check_ambient(self, other)?;
        Ok(self.basis_rows().all(|r| other.contains_vector(r)))
    }

    /// X + Y.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        check_ambient(self, other)?;
        let stacked = self.basis.vstack(&other.basis)?;
        Ok(Subspace::span_allow_zero(&stacked))
    }

    /// X ∩ Y, possibly the zero subspace.
    ///
    /// Computed from coefficient pairs: `a*Bx = b*By` iff `(a|b)` lies in the
    /// kernel of `[Bx^T | -By^T]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        check_ambient(self, other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        let m = self
            .basis
            .transpose()
            .hstack(&other.basis.transpose().neg())?;
        let ker = m.kernel_basis();
        let k1 = self.dim();
        let mut rows = Vec::with_capacity(ker.rows());
        for r in 0..ker.rows() {
            let coeffs = &ker.row(r)[..k1];
            rows.push(apply_row(coeffs, &self.basis));
        }
        let out = if rows.is_empty() {
            Subspace::zero(self.ambient)
        } else {
            Subspace::span_allow_zero(&ExactMatrix::from_rows(rows, self.ambient)?)
        };
        // Modular law cross-check: dim X + dim Y = dim(X+Y) + dim(X∩Y).
        debug_assert_eq!(
            self.dim() + other.dim(),
            self.sum(other)?.dim() + out.dim(),
            "dimension formula violated"
        );
        Ok(out)
    }

    /// Orthogonal complement under the fixed Hermitian form.
    pub fn orthocomplement(&self) -> Subspace {
        if self.is_zero() {
            return Subspace::full(self.ambient);
        }
        // v ⟂ every basis row b_i iff conj(B) v^T = 0.
        let ker = self.basis.conjugate().kernel_basis();
        Subspace {
            ambient: self.ambient,
            basis: ker,
            projection: OnceLock::new(),
        }
    }

    /// Orthogonal complement of `self` inside `within`: `within ∩ self^⟂`.
    /// Requires `self ⊆ within`.
    pub fn ortho_within(&self, within: &Subspace) -> Result<Subspace> {
        check_ambient(self, within)?;
        if !self.is_subspace_of(within)? {
            return Err(Error::NotContained {
                child: format!("{self:?}"),
                parent: format!("{within:?}"),
            });
        }
        within.intersect(&self.orthocomplement())
    }

    pub fn is_orthogonal_to(&self, other: &Subspace) -> Result<bool> {
        check_ambient(self, other)?;
        for x in self.basis_rows() {
            for y in other.basis_rows() {
                if !inner_product(x, y).is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The projection matrix `P = B* (B B*)^{-1} B` for the basis-row matrix
    /// `B`; then `v * P` is the orthogonal projection of the row `v` onto
    /// this subspace. Hermitian and idempotent with row space equal to the
    /// subspace; all three are asserted at construction. Cached.
    pub fn projection_matrix(&self) -> &ExactMatrix {
        self.projection.get_or_init(|| {
            if self.is_zero() {
                return ExactMatrix::zeros(self.ambient, self.ambient);
            }
            let b = &self.basis;
            let gram = b.matmul(&b.adjoint()).expect("shape");
            let gram_inv = gram
                .inverse()
                .expect("Gram matrix of independent rows is invertible");
            let p = b
                .adjoint()
                .matmul(&gram_inv)
                .and_then(|m| m.matmul(b))
                .expect("shape");
            assert_eq!(p.matmul(&p).expect("shape"), p, "projection not idempotent");
            assert_eq!(p.adjoint(), p, "projection not Hermitian");
            assert_eq!(
                &Subspace::span_allow_zero(&p),
                self,
                "projection image differs from the subspace"
            );
            p
        })
    }

    /// Structural order for canonical sorting of collections.
    pub fn cmp_structural(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then_with(|| self.basis.cmp_structural(&other.basis))
    }

    /// An orthogonal (unnormalised) basis of this subspace.
    pub fn orthogonal_row_basis(&self) -> Vec<Vec<GaussianRational>> {
        orthogonalize_rows(&self.basis).expect("RREF basis rows are independent")
    }
}

fn check_ambient(a: &Subspace, b: &Subspace) -> Result<()> {
    if a.ambient != b.ambient {
        return Err(Error::AmbientMismatch(a.ambient, b.ambient));
    }
    Ok(())
}

fn check_equal_dims(a: &Subspace, b: &Subspace) -> Result<()> {
    check_ambient(a, b)?;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "dim {} vs dim {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// Pivot columns of a matrix already in RREF (leading entry of each row).
fn pivot_cols_of_rref(m: &ExactMatrix) -> Vec<usize> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .find(|&c| !m.get(r, c).is_zero())
                .expect("RREF basis has no zero rows")
        })
        .collect()
}

/// Exact multiplicities of the principal angles between two equal-dimension
/// subspaces: angle 0 (shared directions), angle π/2 (orthogonal
/// directions), and everything strictly in between, aggregated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleSignature {
    pub zeros: usize,
    pub right: usize,
    pub middle: usize,
}

/// `zeros = dim(X∩Y)`, `right = dim(X∩Y^⟂)`, `middle = k - zeros - right`.
/// Everything is a rank computation; no irrational arithmetic appears.
pub fn angle_signature(x: &Subspace, y: &Subspace) -> Result<AngleSignature> {
    check_equal_dims(x, y)?;
    let zeros = x.intersect(y)?.dim();
    let right = x.intersect(&y.orthocomplement())?.dim();
    let k = x.dim();
    assert!(zeros + right <= k, "angle multiplicities exceed dimension");
    Ok(AngleSignature {
        zeros,
        right,
        middle: k - zeros - right,
    })
}

/// Adjacency: `dim(X∩Y) = k-1`, equivalently `rank(P_X - P_Y) = 2`.
/// Both routes are computed and their agreement is asserted.
pub fn is_adjacent(x: &Subspace, y: &Subspace) -> Result<bool> {
    check_equal_dims(x, y)?;
    let k = x.dim();
    let by_intersection = x.intersect(y)?.dim() == k.saturating_sub(1) && x != y;
    let diff_rank = x
        .projection_matrix()
        .sub(y.projection_matrix())
        .expect("same ambient")
        .rank();
    let by_rank = diff_rank == 2;
    assert_eq!(
        by_intersection, by_rank,
        "adjacency routes disagree: dim(X∩Y)={} k={} rank(Px-Py)={}",
        x.intersect(y)?.dim(),
        k,
        diff_rank
    );
    Ok(by_intersection)
}

/// Compatibility: the projections commute, equivalently
/// `X = (X∩Y) + (X∩Y^⟂)`. Both routes are computed and their agreement is
/// asserted. Dimensions of the two subspaces may differ.
pub fn is_compatible(x: &Subspace, y: &Subspace) -> Result<bool> {
    check_ambient(x, y)?;
    let px = x.projection_matrix();
    let py = y.projection_matrix();
    let by_commutator = px.matmul(py).expect("shape") == py.matmul(px).expect("shape");
    let decomposition = x.intersect(y)?.sum(&x.intersect(&y.orthocomplement())?)?;
    let by_decomposition = &decomposition == x;
    assert_eq!(
        by_commutator, by_decomposition,
        "compatibility routes disagree for {x:?} vs {y:?}"
    );
    Ok(by_commutator)
}

/// Ortho-adjacency: adjacent and compatible. For k = 1 this degenerates to
/// plain orthogonality of the two lines.
pub fn is_ortho_adjacent(x: &Subspace, y: &Subspace) -> Result<bool> {
    Ok(is_adjacent(x, y)? && is_compatible(x, y)?)
}

/// An orthogonal (not necessarily unit-norm) basis of C^n. Normalisation is
/// deliberately avoided: unit vectors would drag in irrational scalars,
/// while every predicate in scope is invariant under nonzero rescaling.
#[derive(Clone, PartialEq, Eq)]
pub struct OrthoBasis {
    vectors: ExactMatrix,
}

impl fmt::Debug for OrthoBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrthoBasis({:?})", self.vectors)
    }
}

impl OrthoBasis {
    pub fn new(vectors: ExactMatrix) -> Result<Self> {
        if vectors.rows() != vectors.cols() {
            return Err(Error::ShapeMismatch(format!(
                "orthogonal basis must be square, got {}x{}",
                vectors.rows(),
                vectors.cols()
            )));
        }
        for r in 0..vectors.rows() {
            if vectors.row(r).iter().all(|e| e.is_zero()) {
                return Err(Error::Precondition("zero vector in basis".into()));
            }
            for q in 0..r {
                if !inner_product(vectors.row(r), vectors.row(q)).is_zero() {
                    return Err(Error::Precondition(format!(
                        "basis vectors {q} and {r} are not orthogonal"
                    )));
                }
            }
        }
        Ok(OrthoBasis { vectors })
    }

    pub fn standard(n: usize) -> Self {
        OrthoBasis {
            vectors: ExactMatrix::identity(n),
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ambient_dim(&self) -> usize {
        self.vectors.cols()
    }

    pub fn vector(&self, i: usize) -> &[GaussianRational] {
        self.vectors.row(i)
    }

    pub fn vectors(&self) -> &ExactMatrix {
        &self.vectors
    }

    /// Subspace spanned by the basis vectors at `indices` (zero for none).
    pub fn subset_span(&self, indices: &[usize]) -> Subspace {
        if indices.is_empty() {
            return Subspace::zero(self.ambient_dim());
        }
        let rows = indices.iter().map(|&i| self.vector(i).to_vec()).collect();
        Subspace::span_rows(rows, self.ambient_dim()).expect("basis vectors are independent")
    }

    /// The indices of basis vectors lying in `s`, if `s` is spanned by a
    /// subset of this basis; error otherwise.
    pub fn spanning_subset(&self, s: &Subspace) -> Result<Vec<usize>> {
        if s.ambient_dim() != self.ambient_dim() {
            return Err(Error::AmbientMismatch(s.ambient_dim(), self.ambient_dim()));
        }
        let inside: Vec<usize> = (0..self.len())
            .filter(|&i| s.contains_vector(self.vector(i)))
            .collect();
        if inside.len() != s.dim() {
            return Err(Error::Precondition(
                "subspace is not spanned by a subset of the basis".into(),
            ));
        }
        Ok(inside)
    }

    /// Replaces vectors `i`, `j` by two orthogonal combinations mixing them
    /// (`b_i + b_j` and `-|b_j|^2 b_i + |b_i|^2 b_j`), producing a distinct
    /// orthogonal basis with the same span on every other index.
    pub fn rotate_plane(&self, i: usize, j: usize) -> Result<Self> {
        if i == j || i >= self.len() || j >= self.len() {
            return Err(Error::Precondition("invalid rotation plane".into()));
        }
        let bi = self.vector(i).to_vec();
        let bj = self.vector(j).to_vec();
        let ni = GaussianRational::from_rational(inner_product(&bi, &bi).re().clone());
        let nj = GaussianRational::from_rational(inner_product(&bj, &bj).re().clone());
        let sum: Vec<GaussianRational> = bi.iter().zip(&bj).map(|(a, b)| a + b).collect();
        let diff: Vec<GaussianRational> = bi
            .iter()
            .zip(&bj)
            .map(|(a, b)| &(&(-&nj) * a) + &(&ni * b))
            .collect();
        let mut m = self.vectors.clone();
        for c in 0..m.cols() {
            m.set(i, c, sum[c].clone());
            m.set(j, c, diff[c].clone());
        }
        Self::new(m)
    }
}

/// Gram-Schmidt orthogonalisation of independent rows, without
/// normalisation; rows are rescaled to small Gaussian integers. The output
/// rows span the same ascending chain of subspaces as the input rows.
pub fn orthogonalize_rows(m: &ExactMatrix) -> Result<Vec<Vec<GaussianRational>>> {
    if m.rank() != m.rows() {
        return Err(Error::Precondition(
            "Gram-Schmidt input rows must be independent".into(),
        ));
    }
    let mut ortho: Vec<Vec<GaussianRational>> = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        let mut v = m.row_vec(r);
        for u in &ortho {
            let num = inner_product(&v, u);
            let den = GaussianRational::from_rational(inner_product(u, u).re().clone());
            let coeff = num.checked_div(&den)?;
            for c in 0..v.len() {
                v[c] = &v[c] - &(&coeff * &u[c]);
            }
        }
        rescale_row(&mut v);
        ortho.push(v);
    }
    Ok(ortho)
}

/// Gram-Schmidt on a square invertible matrix, yielding an orthogonal basis
/// of the full space.
pub fn gram_schmidt(m: &ExactMatrix) -> Result<OrthoBasis> {
    if !m.is_square() {
        return Err(Error::Precondition(
            "Gram-Schmidt basis input must be square".into(),
        ));
    }
    let ortho = orthogonalize_rows(m)?;
    OrthoBasis::new(ExactMatrix::from_rows(ortho, m.cols())?)
}

/// Clears denominators and divides by the integer content, keeping entries
/// small without changing the spanned line.
pub fn rescale_row(v: &mut [GaussianRational]) {
    use num::bigint::BigInt;
    use num::rational::BigRational;
    use num::Integer;
    use num::{One, Signed, Zero};
    let mut lcm = BigInt::one();
    for e in v.iter() {
        lcm = lcm.lcm(e.re().denom());
        lcm = lcm.lcm(e.im().denom());
    }
    let mut gcd = BigInt::zero();
    let scaled: Vec<(BigInt, BigInt)> = v
        .iter()
        .map(|e| {
            let re = e.re() * BigRational::from_integer(lcm.clone());
            let im = e.im() * BigRational::from_integer(lcm.clone());
            debug_assert!(re.denom().is_one() && im.denom().is_one());
            (re.to_integer(), im.to_integer())
        })
        .collect();
    for (a, b) in &scaled {
        gcd = gcd.gcd(a);
        gcd = gcd.gcd(b);
    }
    if gcd.is_zero() {
        return;
    }
    let gcd = gcd.abs();
    for (slot, (a, b)) in v.iter_mut().zip(scaled) {
        *slot = GaussianRational::new(
            BigRational::from_integer(a / &gcd),
            BigRational::from_integer(b / &gcd),
        );
    }
}

/// JSON shape: `{"ambient": n, "basis": [[scalar strings]]}`; the parser
/// canonicalises on load and rejects dependent generating rows.
#[derive(Serialize, Deserialize)]
struct SubspaceJson {
    ambient: usize,
    basis: Vec<Vec<String>>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let json = SubspaceJson {
            ambient: self.ambient,
            basis: self
                .basis
                .iter_rows()
                .map(|r| r.iter().map(|e| e.to_string()).collect())
                .collect(),
        };
        json.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = SubspaceJson::deserialize(deserializer)?;
        let rows = json
            .basis
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| GaussianRational::from_str(s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        let row_count = rows.len();
        for r in &rows {
            if r.len() != json.ambient {
                return Err(serde::de::Error::custom(format!(
                    "basis row of length {} in C^{}",
                    r.len(),
                    json.ambient
                )));
            }
        }
        if row_count == 0 {
            return Ok(Subspace::zero(json.ambient));
        }
        let sub = Subspace::span_rows(rows, json.ambient).map_err(serde::de::Error::custom)?;
        if sub.dim() != row_count {
            return Err(serde::de::Error::custom(format!(
                "dependent basis rows: {} rows span a {}-dimensional subspace",
                row_count,
                sub.dim()
            )));
        }
        Ok(sub)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use proptest::prelude::*;

    fn sp(ambient: usize, rows: &[&[&str]]) -> Subspace {
        Subspace::parse(ambient, rows).unwrap()
    }

    fn e(ambient: usize, idx: &[usize]) -> Subspace {
        Subspace::coordinate(ambient, idx)
    }

    /// Independent route for intersections: the double annihilator.
    /// `X = {v : K_X v^T = 0}` for `K_X = kernel_basis(B_X)`, so
    /// `X ∩ Y = kernel(vstack(K_X, K_Y))` under the bilinear pairing.
    fn oracle_intersect(x: &Subspace, y: &Subspace) -> Subspace {
        let kx = x.basis().kernel_basis();
        let ky = y.basis().kernel_basis();
        let stacked = kx.vstack(&ky).unwrap();
        Subspace::span_allow_zero(&stacked.kernel_basis())
    }

    #[test]
    fn span_of_standard_vectors() {
        let s = e(4, &[0, 1]);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.basis(), &ExactMatrix::identity(4).take_rows(2));
    }

    #[test]
    fn span_collapses_duplicates() {
        let s = sp(4, &[&["1", "0", "0", "0"], &["1", "0", "0", "0"]]);
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn span_canonicalises_row_order() {
        let s = sp(4, &[&["0", "1", "1", "0"], &["1", "0", "0", "0"]]);
        assert_eq!(s, sp(4, &[&["1", "0", "0", "0"], &["0", "1", "1", "0"]]));
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn span_of_zero_rows_errors() {
        assert!(matches!(
            Subspace::parse(3, &[&["0", "0", "0"]]),
            Err(Error::EmptySpan)
        ));
    }

    #[test]
    fn orthocomplement_of_coordinate_plane() {
        assert_eq!(e(4, &[0, 1]).orthocomplement(), e(4, &[2, 3]));
        let x = sp(4, &[&["1", "i", "0", "0"]]);
        assert!(x.is_orthogonal_to(&x.orthocomplement()).unwrap());
        assert_eq!(x.orthocomplement().dim(), 3);
    }

    #[test]
    fn intersection_matches_stacked_kernel_oracle() {
        let x = e(4, &[0, 1]);
        let y = sp(4, &[&["1", "0", "0", "0"], &["0", "1", "1", "0"]]);
        let got = x.intersect(&y).unwrap();
        assert_eq!(got, e(4, &[0]));
        assert_eq!(got, oracle_intersect(&x, &y));
    }

    #[test]
    fn ortho_within_coordinate_case() {
        let inner = e(4, &[0]);
        let outer = e(4, &[0, 1, 2]);
        assert_eq!(inner.ortho_within(&outer).unwrap(), e(4, &[1, 2]));
        // Containment precondition.
        assert!(e(4, &[3]).ortho_within(&outer).is_err());
    }

    #[test]
    fn projection_of_coordinate_line() {
        let p = e(2, &[0]).projection_matrix().clone();
        assert_eq!(p, ExactMatrix::parse(&[&["1", "0"], &["0", "0"]]).unwrap());
    }

    #[test]
    fn projection_of_diagonal_line() {
        let x = sp(2, &[&["1", "1"]]);
        let p = x.projection_matrix();
        let expected =
            ExactMatrix::parse(&[&["1/2", "1/2"], &["1/2", "1/2"]]).unwrap();
        assert_eq!(p, &expected);
        // e1 projects into the line.
        let image = apply_row(
            &[GaussianRational::one(), GaussianRational::zero()],
            p,
        );
        assert!(x.contains_vector(&image));
    }

    #[test]
    fn projection_of_full_space_is_identity() {
        assert_eq!(
            Subspace::full(3).projection_matrix(),
            &ExactMatrix::identity(3)
        );
        assert_eq!(
            Subspace::zero(3).projection_matrix(),
            &ExactMatrix::zeros(3, 3)
        );
    }

    #[test]
    fn adjacency_examples() {
        let x = e(4, &[0, 1]);
        assert!(is_adjacent(&x, &e(4, &[0, 2])).unwrap());
        assert!(!is_adjacent(&x, &x).unwrap());
        assert!(!is_adjacent(&x, &e(4, &[2, 3])).unwrap());
    }

    #[test]
    fn compatibility_examples() {
        let x = e(4, &[0, 1]);
        // Subspaces spanned by subsets of the standard basis commute.
        assert!(is_compatible(&x, &e(4, &[1, 2])).unwrap());
        assert!(is_compatible(&x, &x.orthocomplement()).unwrap());
        // Commutator oracle: P_X P_Y - P_Y P_X is nonzero for this pair.
        let y = sp(4, &[&["1", "0", "0", "0"], &["0", "1", "1", "0"]]);
        let px = x.projection_matrix();
        let py = y.projection_matrix();
        let commutator = px
            .matmul(py)
            .unwrap()
            .sub(&py.matmul(px).unwrap())
            .unwrap();
        assert!(!commutator.is_zero());
        assert!(!is_compatible(&x, &y).unwrap());
    }

    #[test]
    fn ortho_adjacency_examples() {
        let x = e(4, &[0, 1]);
        assert!(is_ortho_adjacent(&x, &e(4, &[0, 2])).unwrap());
        let y = sp(4, &[&["1", "0", "0", "0"], &["0", "1", "1", "0"]]);
        assert!(is_adjacent(&x, &y).unwrap());
        assert!(!is_ortho_adjacent(&x, &y).unwrap());
    }

    #[test]
    fn lines_are_ortho_adjacent_iff_orthogonal() {
        assert!(is_ortho_adjacent(&e(3, &[0]), &e(3, &[1])).unwrap());
        let diag = sp(3, &[&["1", "1", "0"]]);
        assert!(!is_ortho_adjacent(&e(3, &[0]), &diag).unwrap());
        assert!(is_adjacent(&e(3, &[0]), &diag).unwrap());
    }

    #[test]
    fn angle_signature_examples() {
        let x = e(4, &[0, 1]);
        let sig = angle_signature(&x, &e(4, &[0, 2])).unwrap();
        assert_eq!((sig.zeros, sig.right, sig.middle), (1, 1, 0));
        let selfsig = angle_signature(&x, &x).unwrap();
        assert_eq!((selfsig.zeros, selfsig.right, selfsig.middle), (2, 0, 0));
        let y = sp(4, &[&["1", "0", "0", "0"], &["0", "1", "1", "0"]]);
        let mixed = angle_signature(&x, &y).unwrap();
        assert_eq!((mixed.zeros, mixed.right, mixed.middle), (1, 0, 1));
    }

    #[test]
    fn json_round_trip_and_dependent_rows_diagnostic() {
        let x = sp(4, &[&["1", "0", "0", "i"], &["0", "1", "1/2", "0"]]);
        let text = serde_json::to_string(&x).unwrap();
        let back: Subspace = serde_json::from_str(&text).unwrap();
        assert_eq!(back, x);
        let bad = r#"{"ambient":3,"basis":[["1","0","0"],["2","0","0"]]}"#;
        let err = serde_json::from_str::<Subspace>(bad).unwrap_err();
        assert!(err.to_string().contains("dependent"));
    }

    #[test]
    fn rotate_plane_keeps_orthogonality() {
        let b = OrthoBasis::standard(4).rotate_plane(2, 3).unwrap();
        assert_eq!(b.len(), 4);
        let again = OrthoBasis::new(b.vectors().clone()).unwrap();
        assert_eq!(again.vectors(), b.vectors());
    }

    fn arb_subspace(n: usize, k: usize) -> impl Strategy<Value = Subspace> {
        any::<u64>().prop_map(move |seed| gen::random_subspace(n, k, 2, seed).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn canonical_under_rescaling(x in arb_subspace(4, 2), num in 1i64..5, den in 1i64..5) {
            let factor = GaussianRational::from_ratio(num, den);
            let mut rows: Vec<Vec<GaussianRational>> = x
                .basis_rows()
                .map(|r| r.iter().map(|e| e * &factor).collect())
                .collect();
            rows.reverse();
            let rebuilt = Subspace::span_rows(rows, 4).unwrap();
            prop_assert_eq!(rebuilt, x);
        }

        #[test]
        fn projection_difference_rank_counts_angles(seed in any::<u64>()) {
            let mut rng = gen::rng_from_seed(seed);
            let x = gen::random_subspace_rng(&mut rng, 5, 2, 2).unwrap();
            let y = gen::random_subspace_rng(&mut rng, 5, 2, 2).unwrap();
            let meet = x.intersect(&y).unwrap().dim();
            let rank = x
                .projection_matrix()
                .sub(y.projection_matrix())
                .unwrap()
                .rank();
            prop_assert_eq!(rank, 2 * (2 - meet));
        }

        #[test]
        fn compatibility_iff_four_blocks_fill(seed in any::<u64>(), want_compat in any::<bool>()) {
            let pair = gen::pair_with_intersection(5, 2, 1, want_compat, 2, seed);
            prop_assume!(pair.is_ok());
            let (x, y) = pair.unwrap();
            let xp = x.orthocomplement();
            let yp = y.orthocomplement();
            let four = x.intersect(&y).unwrap()
                .sum(&x.intersect(&yp).unwrap()).unwrap()
                .sum(&xp.intersect(&y).unwrap()).unwrap()
                .sum(&xp.intersect(&yp).unwrap()).unwrap();
            let filled = four.dim() == 5;
            prop_assert_eq!(is_compatible(&x, &y).unwrap(), filled);
            prop_assert_eq!(filled, want_compat);
        }

        #[test]
        fn ortho_adjacency_iff_signature(seed in any::<u64>(), want_compat in any::<bool>()) {
            let pair = gen::pair_with_intersection(5, 2, 1, want_compat, 2, seed);
            prop_assume!(pair.is_ok());
            let (x, y) = pair.unwrap();
            let sig = angle_signature(&x, &y).unwrap();
            let by_sig = sig.zeros == 1 && sig.right == 1 && sig.middle == 0;
            prop_assert_eq!(is_ortho_adjacent(&x, &y).unwrap(), by_sig);
        }

        #[test]
        fn complement_is_involution_and_swaps_lattice_ops(seed in any::<u64>()) {
            let mut rng = gen::rng_from_seed(seed);
            let x = gen::random_subspace_rng(&mut rng, 4, 2, 2).unwrap();
            let y = gen::random_subspace_rng(&mut rng, 4, 2, 2).unwrap();
            prop_assert_eq!(x.orthocomplement().orthocomplement(), x.clone());
            prop_assert_eq!(
                x.sum(&y).unwrap().orthocomplement(),
                x.orthocomplement().intersect(&y.orthocomplement()).unwrap()
            );
            prop_assert_eq!(
                x.intersect(&y).unwrap().orthocomplement(),
                x.orthocomplement().sum(&y.orthocomplement()).unwrap()
            );
        }

        #[test]
        fn compatibility_closure(seed in any::<u64>()) {
            // A compatible with B and C stays compatible with B∩C, B+C, B⟂.
            let mut rng = gen::rng_from_seed(seed);
            let basis = gen::random_orthogonal_basis_rng(&mut rng, 5, 2).unwrap();
            let a = basis.subset_span(&[0, 1]);
            let b = basis.subset_span(&[1, 2, 3]);
            let c = basis.subset_span(&[0, 3, 4]);
            prop_assert!(is_compatible(&a, &b).unwrap());
            prop_assert!(is_compatible(&a, &c).unwrap());
            prop_assert!(is_compatible(&a, &b.intersect(&c).unwrap()).unwrap());
            prop_assert!(is_compatible(&a, &b.sum(&c).unwrap()).unwrap());
            prop_assert!(is_compatible(&a, &b.orthocomplement()).unwrap());
        }
    }
}
