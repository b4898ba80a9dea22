//! Conjugacy classes of self-adjoint operators given by a rational spectrum
//! and an orthogonal eigenspace decomposition, with the two adjacency
//! relations, the multiplicity-preserving permutation action, the
//! spectrum-swap isomorphism, the midpoint construction and the finite
//! enumeration of common commutative neighbors.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use itertools::Itertools;
use num::rational::BigRational;
use num::BigInt;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{apply_row, ExactMatrix};
use crate::orthograph::{
    classify_distance2_within, distinct_hyperplanes, distinct_lines, type1_neighbor_within,
    type2_neighbor, Distance2Class, Distance2Evidence,
};
use crate::scalar::GaussianRational;
use crate::subspace::{is_adjacent, is_compatible, is_ortho_adjacent, OrthoBasis, Subspace};

/// Spectrum and eigenspace multiplicities of a conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralData {
    eigenvalues: Vec<BigRational>,
    multiplicities: Vec<usize>,
}

impl SpectralData {
    pub fn new(eigenvalues: Vec<BigRational>, multiplicities: Vec<usize>) -> Result<Self> {
        if eigenvalues.len() != multiplicities.len() {
            return Err(Error::InvalidOperator(
                "eigenvalue and multiplicity counts differ".into(),
            ));
        }
        if eigenvalues.is_empty() {
            return Err(Error::InvalidOperator("empty spectrum".into()));
        }
        for (i, a) in eigenvalues.iter().enumerate() {
            if eigenvalues[..i].contains(a) {
                return Err(Error::InvalidOperator(format!("repeated eigenvalue {a}")));
            }
        }
        if multiplicities.contains(&0) {
            return Err(Error::InvalidOperator("zero multiplicity".into()));
        }
        Ok(SpectralData {
            eigenvalues,
            multiplicities,
        })
    }

    pub fn eigenvalues(&self) -> &[BigRational] {
        &self.eigenvalues
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Number of distinct eigenvalues.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.multiplicities.iter().sum()
    }
}

/// A finite-rank self-adjoint operator `A = Σ a_i P_{X_i}` represented by
/// its labeled orthogonal eigenspace decomposition. Eigenvalues are real
/// rationals (self-adjointness forces a real spectrum; rational sampling
/// keeps the matrix exact).
#[derive(Clone)]
pub struct SelfAdjointOperator {
    spectral: SpectralData,
    eigenspaces: Vec<Subspace>,
    matrix: OnceLock<ExactMatrix>,
}

impl PartialEq for SelfAdjointOperator {
    fn eq(&self, other: &Self) -> bool {
        self.spectral == other.spectral && self.eigenspaces == other.eigenspaces
    }
}

impl Eq for SelfAdjointOperator {}

impl fmt::Debug for SelfAdjointOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SelfAdjointOperator(")?;
        for (a, x) in self.spectral.eigenvalues.iter().zip(&self.eigenspaces) {
            write!(f, "{a} on {:?}; ", x)?;
        }
        write!(f, ")")
    }
}

impl SelfAdjointOperator {
    /// Validates all class invariants: dimensions match the multiplicities,
    /// eigenspaces are pairwise orthogonal and sum to the full space.
    pub fn new(eigenvalues: Vec<BigRational>, eigenspaces: Vec<Subspace>) -> Result<Self> {
        if eigenvalues.len() != eigenspaces.len() {
            return Err(Error::InvalidOperator(
                "one eigenspace required per eigenvalue".into(),
            ));
        }
        let multiplicities: Vec<usize> = eigenspaces.iter().map(|x| x.dim()).collect();
        let spectral = SpectralData::new(eigenvalues, multiplicities)?;
        let n = spectral.ambient_dim();
        for x in &eigenspaces {
            if x.ambient_dim() != n {
                return Err(Error::InvalidOperator(format!(
                    "eigenspace ambient {} but multiplicities sum to {}",
                    x.ambient_dim(),
                    n
                )));
            }
        }
        for (i, x) in eigenspaces.iter().enumerate() {
            for y in &eigenspaces[..i] {
                if !x.is_orthogonal_to(y)? {
                    return Err(Error::InvalidOperator(
                        "eigenspaces are not pairwise orthogonal".into(),
                    ));
                }
            }
        }
        // Pairwise orthogonal with dimensions summing to n already spans.
        Ok(SelfAdjointOperator {
            spectral,
            eigenspaces,
            matrix: OnceLock::new(),
        })
    }

    pub fn spectral(&self) -> &SpectralData {
        &self.spectral
    }

    pub fn eigenvalues(&self) -> &[BigRational] {
        self.spectral.eigenvalues()
    }

    pub fn eigenspaces(&self) -> &[Subspace] {
        &self.eigenspaces
    }

    pub fn eigenspace(&self, i: usize) -> &Subspace {
        &self.eigenspaces[i]
    }

    pub fn ambient_dim(&self) -> usize {
        self.spectral.ambient_dim()
    }

    /// `Σ a_i P_{X_i}` as an exact matrix; Hermitian by construction,
    /// asserted once. Cached.
    pub fn to_matrix(&self) -> &ExactMatrix {
        self.matrix.get_or_init(|| {
            let n = self.ambient_dim();
            let mut acc = ExactMatrix::zeros(n, n);
            for (a, x) in self.spectral.eigenvalues.iter().zip(&self.eigenspaces) {
                let scaled = x
                    .projection_matrix()
                    .scalar_mul(&GaussianRational::from_rational(a.clone()));
                acc = acc.add(&scaled).expect("same shape");
            }
            assert!(acc.is_hermitian(), "operator matrix is not self-adjoint");
            acc
        })
    }
}

/// A permutation of eigenvalue slots that preserves multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaPermutation {
    mapping: Vec<usize>,
}

impl DeltaPermutation {
    /// `mapping[i] = δ(i)`; requires a genuine permutation with
    /// `n_{δ(i)} = n_i`.
    pub fn new(mapping: Vec<usize>, multiplicities: &[usize]) -> Result<Self> {
        let k = multiplicities.len();
        if mapping.len() != k {
            return Err(Error::Precondition("permutation length mismatch".into()));
        }
        let mut seen = vec![false; k];
        for &t in &mapping {
            if t >= k || seen[t] {
                return Err(Error::Precondition("not a permutation".into()));
            }
            seen[t] = true;
        }
        for (i, &t) in mapping.iter().enumerate() {
            if multiplicities[t] != multiplicities[i] {
                return Err(Error::Precondition(format!(
                    "permutation pairs multiplicity {} with {}",
                    multiplicities[i], multiplicities[t]
                )));
            }
        }
        Ok(DeltaPermutation { mapping })
    }

    pub fn identity(k: usize) -> Self {
        DeltaPermutation {
            mapping: (0..k).collect(),
        }
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }
}

/// `δ(A) = Σ a_i P_{X_{δ(i)}}`: same spectrum, eigenspaces reassigned.
pub fn permute(a: &SelfAdjointOperator, delta: &DeltaPermutation) -> Result<SelfAdjointOperator> {
    // Re-validate against this operator's multiplicities.
    let delta = DeltaPermutation::new(delta.mapping.clone(), a.spectral.multiplicities())?;
    let eigenspaces = delta
        .mapping
        .iter()
        .map(|&t| a.eigenspaces[t].clone())
        .collect();
    SelfAdjointOperator::new(a.eigenvalues().to_vec(), eigenspaces)
}

fn check_same_class(a: &SelfAdjointOperator, b: &SelfAdjointOperator) -> Result<()> {
    if a.spectral != b.spectral {
        return Err(Error::Precondition(
            "operators lie in different conjugacy classes".into(),
        ));
    }
    Ok(())
}

/// Indices where the eigenspaces differ.
pub fn differing_indices(a: &SelfAdjointOperator, b: &SelfAdjointOperator) -> Vec<usize> {
    a.eigenspaces
        .iter()
        .zip(&b.eigenspaces)
        .enumerate()
        .filter(|(_, (x, y))| x != y)
        .map(|(i, _)| i)
        .collect()
}

fn subspace_invariant_under(s: &Subspace, m: &ExactMatrix) -> bool {
    s.basis_rows()
        .all(|r| s.contains_vector(&apply_row(r, m)))
}

/// Operator adjacency, computed on BOTH levels and cross-asserted:
/// - matrix level: `rank(A-B) = 2` with the kernel and image of `A-B`
///   invariant under both operators;
/// - eigenspace level: exactly two labels differ and the differing
///   eigenspaces are adjacent.
pub fn is_adjacent_ops(a: &SelfAdjointOperator, b: &SelfAdjointOperator) -> Result<bool> {
    check_same_class(a, b)?;
    let by_eigenspaces = eigenspace_adjacency(a, b)?.is_some();
    let d = a.to_matrix().sub(b.to_matrix()).expect("same shape");
    let by_operator = if d.rank() == 2 {
        let image = Subspace::span_allow_zero(&d);
        let kernel = Subspace::span_allow_zero(&d.transpose().kernel_basis());
        [a.to_matrix(), b.to_matrix()].iter().all(|m| {
            subspace_invariant_under(&image, m) && subspace_invariant_under(&kernel, m)
        })
    } else {
        false
    };
    assert_eq!(
        by_eigenspaces, by_operator,
        "operator-level and eigenspace-level adjacency disagree"
    );
    Ok(by_eigenspaces)
}

fn eigenspace_adjacency(
    a: &SelfAdjointOperator,
    b: &SelfAdjointOperator,
) -> Result<Option<(usize, usize)>> {
    let diffs = differing_indices(a, b);
    if diffs.len() != 2 {
        return Ok(None);
    }
    let (i, j) = (diffs[0], diffs[1]);
    if !is_adjacent(&a.eigenspaces[i], &b.eigenspaces[i])? {
        return Ok(None);
    }
    // The complementary pair inside the shared block is then adjacent too.
    debug_assert_eq!(
        a.eigenspaces[i].sum(&a.eigenspaces[j])?,
        b.eigenspaces[i].sum(&b.eigenspaces[j])?,
    );
    debug_assert!(is_adjacent(&a.eigenspaces[j], &b.eigenspaces[j])?);
    Ok(Some((i, j)))
}

/// The unique differing index pair when the operators are adjacent.
pub fn adjacency_type(
    a: &SelfAdjointOperator,
    b: &SelfAdjointOperator,
) -> Result<Option<(usize, usize)>> {
    check_same_class(a, b)?;
    if !is_adjacent_ops(a, b)? {
        return Ok(None);
    }
    eigenspace_adjacency(a, b)
}

/// Commutative adjacency: the matrices commute and their difference has
/// rank 2; equivalently the pair is adjacent with ortho-adjacent differing
/// eigenspaces. Both routes computed, agreement asserted.
pub fn is_commutatively_adjacent(
    a: &SelfAdjointOperator,
    b: &SelfAdjointOperator,
) -> Result<bool> {
    check_same_class(a, b)?;
    let ma = a.to_matrix();
    let mb = b.to_matrix();
    let commute = ma.matmul(mb).expect("shape") == mb.matmul(ma).expect("shape");
    let rank2 = ma.sub(mb).expect("shape").rank() == 2;
    let by_matrix = commute && rank2;
    let by_eigenspaces = match eigenspace_adjacency(a, b)? {
        Some((i, j)) => {
            is_ortho_adjacent(&a.eigenspaces[i], &b.eigenspaces[i])?
                && is_ortho_adjacent(&a.eigenspaces[j], &b.eigenspaces[j])?
        }
        None => false,
    };
    assert_eq!(
        by_matrix, by_eigenspaces,
        "matrix-level and eigenspace-level commutative adjacency disagree"
    );
    Ok(by_matrix)
}

/// The relabeling `Σ a_i P_{X_i} -> Σ a'_i P_{X_i}`; an isomorphism onto
/// the class with spectrum `σ'` preserving both adjacency relations.
pub fn spectrum_swap(
    a: &SelfAdjointOperator,
    new_eigenvalues: Vec<BigRational>,
) -> Result<SelfAdjointOperator> {
    if new_eigenvalues.len() != a.spectral.len() {
        return Err(Error::Precondition(format!(
            "expected {} eigenvalues, got {}",
            a.spectral.len(),
            new_eigenvalues.len()
        )));
    }
    SelfAdjointOperator::new(new_eigenvalues, a.eigenspaces.clone())
}

/// For a non-commuting (i,j)-adjacent pair, an operator commutatively
/// (i,j)-adjacent to both: inside the invariant block `V = X_i + X_j` a
/// common ortho-neighbor `Z_i` of the differing eigenspaces is constructed,
/// `Z_j` is its complement in `V`, all other eigenspaces stay.
pub fn midpoint(
    a: &SelfAdjointOperator,
    b: &SelfAdjointOperator,
) -> Result<SelfAdjointOperator> {
    check_same_class(a, b)?;
    let Some((i, j)) = adjacency_type(a, b)? else {
        return Err(Error::Precondition("operators are not adjacent".into()));
    };
    if is_commutatively_adjacent(a, b)? {
        return Err(Error::Precondition(
            "midpoint construction expects a non-commuting pair".into(),
        ));
    }
    let xi = &a.eigenspaces[i];
    let yi = &b.eigenspaces[i];
    let v = xi.sum(&a.eigenspaces[j])?;
    debug_assert_eq!(v, b.eigenspaces[i].sum(&b.eigenspaces[j])?);
    let ni = xi.dim();
    let nj = a.eigenspaces[j].dim();
    let zi = if nj >= 2 {
        // A line of V orthogonal to X_i + Y_i exists.
        let outside = xi.sum(yi)?.ortho_within(&v)?;
        let p = distinct_lines(&outside, 1)
            .pop()
            .ok_or_else(|| Error::SearchExhausted("no line orthogonal to X_i+Y_i".into()))?;
        type1_neighbor_within(xi, yi, &p, &v)?
    } else if ni >= 2 {
        let w = distinct_hyperplanes(&xi.intersect(yi)?, 1)?
            .pop()
            .unwrap_or_else(|| Subspace::zero(a.ambient_dim()));
        type2_neighbor(xi, yi, &w)?
    } else {
        return Err(Error::SearchExhausted(
            "no common ortho-neighbor exists inside a 2-dimensional block".into(),
        ));
    };
    let zj = zi.ortho_within(&v)?;
    let mut eigenspaces = a.eigenspaces.clone();
    eigenspaces[i] = zi;
    eigenspaces[j] = zj;
    let c = SelfAdjointOperator::new(a.eigenvalues().to_vec(), eigenspaces)?;
    assert!(
        is_commutatively_adjacent(&c, a)? && is_commutatively_adjacent(&c, b)?,
        "midpoint fails commutative adjacency to an endpoint"
    );
    Ok(c)
}

/// Exhaustive candidates for operators commutatively adjacent to both of a
/// pair differing in exactly 3 or exactly 4 eigenspace labels; always at
/// most six, each returned one verified against both inputs.
pub fn enumerate_common_comm_neighbors(
    a: &SelfAdjointOperator,
    b: &SelfAdjointOperator,
) -> Result<Vec<SelfAdjointOperator>> {
    check_same_class(a, b)?;
    let diffs = differing_indices(a, b);
    let mut found: Vec<SelfAdjointOperator> = Vec::new();
    match diffs.len() {
        4 => {
            // The candidate takes B's eigenspaces on a 2-subset and A's on
            // the complementary 2-subset.
            for pair in diffs.iter().copied().combinations(2) {
                let mut eigenspaces = a.eigenspaces.clone();
                for &t in &pair {
                    eigenspaces[t] = b.eigenspaces[t].clone();
                }
                let Ok(c) = SelfAdjointOperator::new(a.eigenvalues().to_vec(), eigenspaces)
                else {
                    continue;
                };
                if is_commutatively_adjacent(&c, a)?
                    && is_commutatively_adjacent(&c, b)?
                    && !found.contains(&c)
                {
                    found.push(c);
                }
            }
        }
        3 => {
            // Shared slot s gets the forced orthogonal complement; one other
            // slot takes Y, the remaining one takes X. At most one candidate
            // per ordered choice, six ordered choices in total.
            let block = diffs
                .iter()
                .skip(1)
                .fold(a.eigenspaces[diffs[0]].clone(), |acc, &t| {
                    acc.sum(&a.eigenspaces[t]).expect("same ambient")
                });
            for perm in diffs.iter().copied().permutations(3) {
                let (s, take_y, take_x) = (perm[0], perm[1], perm[2]);
                let ys = &b.eigenspaces[take_y];
                let xs = &a.eigenspaces[take_x];
                if !ys.is_orthogonal_to(xs)? {
                    continue;
                }
                let fixed = ys.sum(xs)?;
                let cs = fixed.ortho_within(&block)?;
                if cs.dim() != a.spectral.multiplicities()[s] {
                    continue;
                }
                let mut eigenspaces = a.eigenspaces.clone();
                eigenspaces[s] = cs;
                eigenspaces[take_y] = ys.clone();
                eigenspaces[take_x] = xs.clone();
                let Ok(c) = SelfAdjointOperator::new(a.eigenvalues().to_vec(), eigenspaces)
                else {
                    continue;
                };
                if is_commutatively_adjacent(&c, a)?
                    && is_commutatively_adjacent(&c, b)?
                    && !found.contains(&c)
                {
                    found.push(c);
                }
            }
        }
        other => {
            return Err(Error::Precondition(format!(
                "enumeration requires 3 or 4 differing labels, got {other}"
            )));
        }
    }
    assert!(found.len() <= 6, "more than six common neighbors");
    Ok(found)
}

/// Evidence returned by the distance-2 classification of operators.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum OpsDistance2Evidence {
    /// Two labels differ: the classification of the reduced subspace pair
    /// inside the invariant block.
    TwoIndex(Distance2Evidence),
    /// Three or four labels differ: the finite census of common
    /// commutative neighbors.
    Finite { neighbors: usize },
}

/// Classifies a pair at commutative-adjacency distance 2 and cross-checks
/// the profile against the direct predicates.
pub fn classify_distance2_ops(
    a: &SelfAdjointOperator,
    b: &SelfAdjointOperator,
    witness_budget: usize,
) -> Result<OpsDistance2Evidence> {
    check_same_class(a, b)?;
    if a == b {
        return Err(Error::Precondition("operators coincide".into()));
    }
    if is_commutatively_adjacent(a, b)? {
        return Err(Error::Precondition(
            "operators are at commutative distance 1".into(),
        ));
    }
    let diffs = differing_indices(a, b);
    match diffs.len() {
        2 => {
            let (i, j) = (diffs[0], diffs[1]);
            // Classify on the side with the smaller multiplicity so the
            // regime split matches min(n_i, n_j) against n_i + n_j.
            let (side, other) = if a.eigenspaces[i].dim() <= a.eigenspaces[j].dim() {
                (i, j)
            } else {
                (j, i)
            };
            let v = a.eigenspaces[side].sum(&a.eigenspaces[other])?;
            let evidence = classify_distance2_within(
                &a.eigenspaces[side],
                &b.eigenspaces[side],
                witness_budget,
                &v,
            )?;
            let direct_adjacent_noncommuting =
                is_adjacent_ops(a, b)? && !is_commutatively_adjacent(a, b)?;
            let profile_says_adjacent =
                evidence.class == Distance2Class::AdjacentNonCompatible;
            if direct_adjacent_noncommuting != profile_says_adjacent {
                return Err(Error::CrossCheck(
                    "reduced-block profile disagrees with the operator predicates".into(),
                ));
            }
            Ok(OpsDistance2Evidence::TwoIndex(evidence))
        }
        3 | 4 => {
            assert!(
                !is_adjacent_ops(a, b)?,
                "pairs differing in more than two labels cannot be adjacent"
            );
            let neighbors = enumerate_common_comm_neighbors(a, b)?;
            Ok(OpsDistance2Evidence::Finite {
                neighbors: neighbors.len(),
            })
        }
        other => Err(Error::Precondition(format!(
            "{other} differing labels puts the pair beyond distance 2"
        ))),
    }
}

/// All operators in the class whose eigenspaces are spanned by subsets of a
/// fixed orthogonal basis: one operator per ordered partition of the basis
/// indices into blocks of the given multiplicities.
pub fn basis_spanned_operators(
    basis: &OrthoBasis,
    eigenvalues: &[BigRational],
    multiplicities: &[usize],
) -> Result<Vec<SelfAdjointOperator>> {
    let n: usize = multiplicities.iter().sum();
    if n != basis.len() {
        return Err(Error::Infeasible(format!(
            "multiplicities sum to {n} but the basis has {} vectors",
            basis.len()
        )));
    }
    let mut out = Vec::new();
    let all: Vec<usize> = (0..n).collect();
    partition_rec(basis, eigenvalues, multiplicities, &all, &mut Vec::new(), &mut out)?;
    Ok(out)
}

fn partition_rec(
    basis: &OrthoBasis,
    eigenvalues: &[BigRational],
    multiplicities: &[usize],
    remaining: &[usize],
    chosen: &mut Vec<Vec<usize>>,
    out: &mut Vec<SelfAdjointOperator>,
) -> Result<()> {
    let slot = chosen.len();
    if slot == multiplicities.len() {
        let eigenspaces = chosen.iter().map(|idx| basis.subset_span(idx)).collect();
        out.push(SelfAdjointOperator::new(
            eigenvalues.to_vec(),
            eigenspaces,
        )?);
        return Ok(());
    }
    for subset in remaining.iter().copied().combinations(multiplicities[slot]) {
        let rest: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|i| !subset.contains(i))
            .collect();
        chosen.push(subset);
        partition_rec(basis, eigenvalues, multiplicities, &rest, chosen, out)?;
        chosen.pop();
    }
    Ok(())
}

/// BFS connectivity of a finite operator set under commutative adjacency.
pub fn operators_connected(ops: &[SelfAdjointOperator]) -> Result<bool> {
    if ops.is_empty() {
        return Ok(true);
    }
    let m = ops.len();
    let mut adj = vec![Vec::new(); m];
    for i in 0..m {
        for j in 0..i {
            if is_commutatively_adjacent(&ops[i], &ops[j])? {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    let mut seen = vec![false; m];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    Ok(count == m)
}

/// Parses a rational eigenvalue in the scalar grammar (real part only).
pub fn parse_eigenvalue(s: &str) -> Result<BigRational> {
    let g = GaussianRational::from_str(s)?;
    if !g.is_real() {
        return Err(Error::Parse(format!("eigenvalue `{s}` is not real")));
    }
    Ok(g.re().clone())
}

pub fn eigenvalue_from_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// JSON shape: `{"eigenvalues": ["0","1","2"], "eigenspaces": [...]}`,
/// validated on load against all operator invariants.
#[derive(Serialize, Deserialize)]
struct OperatorJson {
    eigenvalues: Vec<String>,
    eigenspaces: Vec<Subspace>,
}

impl Serialize for SelfAdjointOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let json = OperatorJson {
            eigenvalues: self
                .eigenvalues()
                .iter()
                .map(|a| GaussianRational::from_rational(a.clone()).to_string())
                .collect(),
            eigenspaces: self.eigenspaces.clone(),
        };
        json.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SelfAdjointOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = OperatorJson::deserialize(deserializer)?;
        let eigenvalues = json
            .eigenvalues
            .iter()
            .map(|s| parse_eigenvalue(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        SelfAdjointOperator::new(eigenvalues, json.eigenspaces)
            .map_err(serde::de::Error::custom)
    }
}

/// Seeded generators for operator pairs in the verification campaigns.
pub mod opgen {
    use super::*;
    use crate::gen::{random_orthogonal_basis_rng, random_subspace_in};

    // Coefficient height for sampled replacements; unit-height coefficients
    // keep eigenspace bases (and hence every projection) small.
    const OPGEN_HEIGHT: i64 = 1;
    use rand::Rng;

    /// The kinds of operator pairs the campaigns mix.
    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    pub enum OpPairKind {
        TwoIndexNonCommuting,
        TwoIndexCommuting,
        TwoIndexNonAdjacent,
        ThreeIndex,
        FourIndex,
    }

    /// A random operator: a seeded orthogonal basis partitioned in order
    /// into eigenspace blocks of the requested multiplicities.
    pub fn random_operator(
        rng: &mut ChaCha8Rng,
        eigenvalues: &[BigRational],
        multiplicities: &[usize],
        height: i64,
    ) -> Result<SelfAdjointOperator> {
        let n: usize = multiplicities.iter().sum();
        let basis = random_orthogonal_basis_rng(rng, n, height)?;
        let mut start = 0;
        let mut eigenspaces = Vec::with_capacity(multiplicities.len());
        for &m in multiplicities {
            let idx: Vec<usize> = (start..start + m).collect();
            eigenspaces.push(basis.subset_span(&idx));
            start += m;
        }
        SelfAdjointOperator::new(eigenvalues.to_vec(), eigenspaces)
    }

    /// A partner for `a` of the requested kind, differing at seeded labels.
    pub fn partner(
        rng: &mut ChaCha8Rng,
        a: &SelfAdjointOperator,
        kind: OpPairKind,
    ) -> Result<SelfAdjointOperator> {
        let k = a.spectral().len();
        match kind {
            OpPairKind::TwoIndexNonCommuting => {
                let (i, j) = pick_two(rng, k);
                two_index_partner(rng, a, i, j, false)
            }
            OpPairKind::TwoIndexCommuting => {
                let (i, j) = pick_two(rng, k);
                commuting_partner(rng, a, i, j)
            }
            OpPairKind::TwoIndexNonAdjacent => {
                let (i, j) = pick_far_pair(rng, a)?;
                far_partner(rng, a, i, j)
            }
            OpPairKind::ThreeIndex => multi_index_partner(rng, a, 3),
            OpPairKind::FourIndex => multi_index_partner(rng, a, 4),
        }
    }

    fn pick_two(rng: &mut ChaCha8Rng, k: usize) -> (usize, usize) {
        assert!(k >= 2);
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        (i.min(j), i.max(j))
    }

    /// Replaces X_i by an adjacent Y_i inside the block, with the requested
    /// compatibility; Y_j is the complement.
    fn two_index_partner(
        rng: &mut ChaCha8Rng,
        a: &SelfAdjointOperator,
        i: usize,
        j: usize,
        compatible: bool,
    ) -> Result<SelfAdjointOperator> {
        let xi = a.eigenspace(i);
        let xj = a.eigenspace(j);
        let v = xi.sum(xj)?;
        for _ in 0..200 {
            let hyper = if xi.dim() == 1 {
                Subspace::zero(a.ambient_dim())
            } else {
                random_subspace_in(rng, xi, xi.dim() - 1, OPGEN_HEIGHT)?
            };
            let line = random_subspace_in(rng, &v, 1, OPGEN_HEIGHT)?;
            let yi = hyper.sum(&line)?;
            if yi.dim() != xi.dim() || yi == *xi {
                continue;
            }
            if !is_adjacent(&yi, xi)? {
                continue;
            }
            if is_compatible(&yi, xi)? != compatible {
                continue;
            }
            let yj = yi.ortho_within(&v)?;
            let mut eigenspaces = a.eigenspaces().to_vec();
            eigenspaces[i] = yi;
            eigenspaces[j] = yj;
            return SelfAdjointOperator::new(a.eigenvalues().to_vec(), eigenspaces);
        }
        Err(Error::SearchExhausted("two-index partner".into()))
    }

    /// A commuting adjacent partner via a one-vector swap between
    /// orthogonalised block bases.
    fn commuting_partner(
        rng: &mut ChaCha8Rng,
        a: &SelfAdjointOperator,
        i: usize,
        j: usize,
    ) -> Result<SelfAdjointOperator> {
        let xi = a.eigenspace(i);
        let xj = a.eigenspace(j);
        let v = xi.sum(xj)?;
        let rows_i = xi.orthogonal_row_basis();
        let rows_j = xj.orthogonal_row_basis();
        let keep = rng.gen_range(0..rows_i.len());
        let take = rng.gen_range(0..rows_j.len());
        let mut yi_rows: Vec<_> = rows_i
            .iter()
            .enumerate()
            .filter(|(t, _)| *t != keep)
            .map(|(_, r)| r.clone())
            .collect();
        yi_rows.push(rows_j[take].clone());
        let yi = Subspace::span_rows(yi_rows, a.ambient_dim())?;
        let yj = yi.ortho_within(&v)?;
        let mut eigenspaces = a.eigenspaces().to_vec();
        eigenspaces[i] = yi;
        eigenspaces[j] = yj;
        let b = SelfAdjointOperator::new(a.eigenvalues().to_vec(), eigenspaces)?;
        debug_assert!(is_commutatively_adjacent(a, &b)?);
        Ok(b)
    }

    fn pick_far_pair(
        rng: &mut ChaCha8Rng,
        a: &SelfAdjointOperator,
    ) -> Result<(usize, usize)> {
        // Needs a block where an intersection of codimension >= 2 fits.
        let k = a.spectral().len();
        for _ in 0..50 {
            let (i, j) = pick_two(rng, k);
            if a.eigenspace(i).dim() >= 2 || a.eigenspace(j).dim() >= 2 {
                return Ok((i, j));
            }
        }
        Err(Error::Infeasible(
            "no block admits a non-adjacent replacement".into(),
        ))
    }

    /// Y_i at distance >= 2 from X_i inside the block.
    fn far_partner(
        rng: &mut ChaCha8Rng,
        a: &SelfAdjointOperator,
        i: usize,
        j: usize,
    ) -> Result<SelfAdjointOperator> {
        let xi = a.eigenspace(i);
        let xj = a.eigenspace(j);
        let v = xi.sum(xj)?;
        for _ in 0..300 {
            let yi = random_subspace_in(rng, &v, xi.dim(), OPGEN_HEIGHT)?;
            if yi.intersect(xi)?.dim() + 2 > xi.dim() {
                continue;
            }
            let yj = yi.ortho_within(&v)?;
            let mut eigenspaces = a.eigenspaces().to_vec();
            eigenspaces[i] = yi;
            eigenspaces[j] = yj;
            return SelfAdjointOperator::new(a.eigenvalues().to_vec(), eigenspaces);
        }
        Err(Error::SearchExhausted("far partner".into()))
    }

    /// Redecomposes the sum of `count` blocks with a fresh orthogonal
    /// basis so that exactly those labels change.
    fn multi_index_partner(
        rng: &mut ChaCha8Rng,
        a: &SelfAdjointOperator,
        count: usize,
    ) -> Result<SelfAdjointOperator> {
        let k = a.spectral().len();
        if k < count {
            return Err(Error::Infeasible(format!(
                "{count} differing labels need at least {count} eigenvalues"
            )));
        }
        let mut indices: Vec<usize> = (0..k).collect();
        for _ in 0..(k - count) {
            let drop = rng.gen_range(0..indices.len());
            indices.remove(drop);
        }
        let block = indices
            .iter()
            .skip(1)
            .fold(a.eigenspace(indices[0]).clone(), |acc, &t| {
                acc.sum(a.eigenspace(t)).expect("same ambient")
            });
        'multi: for _ in 0..200 {
            // Random orthogonal basis of the block: random independent rows
            // inside it, orthogonalised directly (canonicalising first would
            // discard the randomness).
            let dim = block.dim();
            let coeffs = crate::gen::random_matrix(rng, dim, dim, OPGEN_HEIGHT);
            if coeffs.rank() != dim {
                continue 'multi;
            }
            let raw_rows: Vec<Vec<GaussianRational>> = (0..dim)
                .map(|r| apply_row(coeffs.row(r), block.basis()))
                .collect();
            let raw = ExactMatrix::from_rows(raw_rows, a.ambient_dim())?;
            let rows = crate::subspace::orthogonalize_rows(&raw)?;
            let mut eigenspaces = a.eigenspaces().to_vec();
            let mut start = 0;
            for &t in &indices {
                let m = a.eigenspace(t).dim();
                let part = rows[start..start + m].to_vec();
                eigenspaces[t] = Subspace::span_rows(part, a.ambient_dim())?;
                start += m;
            }
            for &t in &indices {
                if eigenspaces[t] == *a.eigenspace(t) {
                    continue 'multi;
                }
            }
            return SelfAdjointOperator::new(a.eigenvalues().to_vec(), eigenspaces);
        }
        Err(Error::SearchExhausted("multi-index partner".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::rng_from_seed;
    use crate::subspace::Subspace;

    fn e(ambient: usize, idx: &[usize]) -> Subspace {
        Subspace::coordinate(ambient, idx)
    }

    fn ev(values: &[i64]) -> Vec<BigRational> {
        values.iter().map(|&v| eigenvalue_from_int(v)).collect()
    }

    /// The worked C^6 pair with sigma = {0,1,2}, d = {2,2,2}: B replaces the
    /// last two eigenspaces by the interleaved coordinate planes.
    fn c6_pair() -> (SelfAdjointOperator, SelfAdjointOperator) {
        let a = SelfAdjointOperator::new(
            ev(&[0, 1, 2]),
            vec![e(6, &[0, 1]), e(6, &[2, 3]), e(6, &[4, 5])],
        )
        .unwrap();
        let b = SelfAdjointOperator::new(
            ev(&[0, 1, 2]),
            vec![e(6, &[0, 1]), e(6, &[2, 4]), e(6, &[3, 5])],
        )
        .unwrap();
        (a, b)
    }

    #[test]
    fn matrix_of_rank_one_projection() {
        let a = SelfAdjointOperator::new(ev(&[1, 0]), vec![e(2, &[0]), e(2, &[1])]).unwrap();
        assert_eq!(
            a.to_matrix(),
            &ExactMatrix::parse(&[&["1", "0"], &["0", "0"]]).unwrap()
        );
        let diag = SelfAdjointOperator::new(ev(&[1, 2]), vec![e(2, &[0]), e(2, &[1])]).unwrap();
        assert_eq!(
            diag.to_matrix(),
            &ExactMatrix::parse(&[&["1", "0"], &["0", "2"]]).unwrap()
        );
    }

    #[test]
    fn matrix_of_diagonal_line_projection() {
        let sum = Subspace::parse(2, &[&["1", "1"]]).unwrap();
        let diff = Subspace::parse(2, &[&["1", "-1"]]).unwrap();
        let a = SelfAdjointOperator::new(ev(&[1, 0]), vec![sum, diff]).unwrap();
        assert_eq!(
            a.to_matrix(),
            &ExactMatrix::parse(&[&["1/2", "1/2"], &["1/2", "1/2"]]).unwrap()
        );
    }

    #[test]
    fn operator_invariants_rejected() {
        // Non-orthogonal eigenspaces.
        let skew = Subspace::parse(2, &[&["1", "1"]]).unwrap();
        assert!(SelfAdjointOperator::new(ev(&[0, 1]), vec![e(2, &[0]), skew]).is_err());
        // Repeated eigenvalue.
        assert!(SelfAdjointOperator::new(ev(&[1, 1]), vec![e(2, &[0]), e(2, &[1])]).is_err());
    }

    #[test]
    fn permutation_action() {
        let x = e(4, &[0, 1]);
        let a = SelfAdjointOperator::new(
            ev(&[1, 0]),
            vec![x.clone(), x.orthocomplement()],
        )
        .unwrap();
        let swap = DeltaPermutation::new(vec![1, 0], a.spectral().multiplicities()).unwrap();
        let swapped = permute(&a, &swap).unwrap();
        // Eigenvalue 1 now sits on the orthocomplement.
        assert_eq!(swapped.eigenspace(0), &x.orthocomplement());
        assert_eq!(swapped.eigenspace(1), &x);
        let id = DeltaPermutation::identity(2);
        assert_eq!(permute(&a, &id).unwrap(), a);
        // Unequal multiplicities cannot be permuted.
        let uneven = SelfAdjointOperator::new(
            ev(&[0, 1]),
            vec![e(4, &[0]), e(4, &[1, 2, 3])],
        )
        .unwrap();
        assert!(DeltaPermutation::new(vec![1, 0], uneven.spectral().multiplicities()).is_err());
    }

    #[test]
    fn adjacency_of_the_c6_pair() {
        let (a, b) = c6_pair();
        assert!(is_adjacent_ops(&a, &b).unwrap());
        assert_eq!(adjacency_type(&a, &b).unwrap(), Some((1, 2)));
        // Difference acts as -1 on e4 and +1 on e5, zero elsewhere.
        let d = a.to_matrix().sub(b.to_matrix()).unwrap();
        assert_eq!(d.rank(), 2);
        let mut e4 = vec![GaussianRational::zero(); 6];
        e4[3] = GaussianRational::one();
        let out = apply_row(&e4, &d);
        assert_eq!(out[3], GaussianRational::from_int(-1));
        assert!(out.iter().enumerate().all(|(i, v)| i == 3 || v.is_zero()));
        // Self-distance and 3-label differences are not adjacent.
        assert!(!is_adjacent_ops(&a, &a).unwrap());
        let c = SelfAdjointOperator::new(
            ev(&[0, 1, 2]),
            vec![e(6, &[0, 2]), e(6, &[1, 4]), e(6, &[3, 5])],
        )
        .unwrap();
        assert_eq!(differing_indices(&a, &c).len(), 3);
        assert!(!is_adjacent_ops(&a, &c).unwrap());
    }

    #[test]
    fn commutative_adjacency_examples() {
        let (a, b) = c6_pair();
        assert!(is_commutatively_adjacent(&a, &b).unwrap());
        // A skew replacement stays adjacent but stops commuting.
        let skew = Subspace::parse(
            6,
            &[
                &["0", "0", "1", "0", "0", "0"],
                &["0", "0", "0", "1", "1", "0"],
            ],
        )
        .unwrap();
        let v = e(6, &[2, 3, 4, 5]);
        let comp = skew.ortho_within(&v).unwrap();
        let c = SelfAdjointOperator::new(
            ev(&[0, 1, 2]),
            vec![e(6, &[0, 1]), skew, comp],
        )
        .unwrap();
        assert!(is_adjacent_ops(&a, &c).unwrap());
        assert!(!is_commutatively_adjacent(&a, &c).unwrap());
        assert!(!is_commutatively_adjacent(&a, &a).unwrap());
    }

    #[test]
    fn spectrum_swap_preserves_relations() {
        let (a, b) = c6_pair();
        let a2 = spectrum_swap(&a, ev(&[1, 4, 9])).unwrap();
        let b2 = spectrum_swap(&b, ev(&[1, 4, 9])).unwrap();
        assert!(is_adjacent_ops(&a2, &b2).unwrap());
        assert_eq!(adjacency_type(&a2, &b2).unwrap(), Some((1, 2)));
        assert!(is_commutatively_adjacent(&a2, &b2).unwrap());
        // Scaling {0,1} to {0,5} multiplies the projection by 5.
        let p = SelfAdjointOperator::new(
            ev(&[1, 0]),
            vec![e(2, &[0]), e(2, &[1])],
        )
        .unwrap();
        let scaled = spectrum_swap(&p, ev(&[5, 0])).unwrap();
        assert_eq!(
            scaled.to_matrix(),
            &p.to_matrix().scalar_mul(&GaussianRational::from_int(5))
        );
        // Repeated values are rejected.
        assert!(spectrum_swap(&a, ev(&[1, 1, 2])).is_err());
    }

    #[test]
    fn midpoint_construction() {
        let (a, _) = c6_pair();
        let mut rng = rng_from_seed(9);
        let b = opgen::partner(&mut rng, &a, opgen::OpPairKind::TwoIndexNonCommuting).unwrap();
        let c = midpoint(&a, &b).unwrap();
        assert!(is_commutatively_adjacent(&c, &a).unwrap());
        assert!(is_commutatively_adjacent(&c, &b).unwrap());
        // Untouched labels keep their eigenspaces.
        let (i, j) = adjacency_type(&a, &b).unwrap().unwrap();
        for t in 0..3 {
            if t != i && t != j {
                assert_eq!(c.eigenspace(t), a.eigenspace(t));
            }
        }
        // Commuting pairs are rejected.
        let (a2, b2) = c6_pair();
        assert!(midpoint(&a2, &b2).is_err());
    }

    #[test]
    fn six_bound_enumeration() {
        // Four differing labels in C^8 with four eigenvalues.
        let a = SelfAdjointOperator::new(
            ev(&[0, 1, 2, 3]),
            vec![e(8, &[0, 1]), e(8, &[2, 3]), e(8, &[4, 5]), e(8, &[6, 7])],
        )
        .unwrap();
        let b = SelfAdjointOperator::new(
            ev(&[0, 1, 2, 3]),
            vec![e(8, &[0, 2]), e(8, &[1, 3]), e(8, &[4, 6]), e(8, &[5, 7])],
        )
        .unwrap();
        assert_eq!(differing_indices(&a, &b).len(), 4);
        let neighbors = enumerate_common_comm_neighbors(&a, &b).unwrap();
        assert!(neighbors.len() <= 6);
        for c in &neighbors {
            assert!(is_commutatively_adjacent(c, &a).unwrap());
            assert!(is_commutatively_adjacent(c, &b).unwrap());
        }
        // Three differing labels with d = {3,3,2} in C^8.
        let a3 = SelfAdjointOperator::new(
            ev(&[0, 1, 2]),
            vec![e(8, &[0, 1, 2]), e(8, &[3, 4, 5]), e(8, &[6, 7])],
        )
        .unwrap();
        let mut rng = rng_from_seed(4);
        let b3 = opgen::partner(&mut rng, &a3, opgen::OpPairKind::ThreeIndex).unwrap();
        assert_eq!(differing_indices(&a3, &b3).len(), 3);
        let n3 = enumerate_common_comm_neighbors(&a3, &b3).unwrap();
        assert!(n3.len() <= 6);
        for c in &n3 {
            assert!(is_commutatively_adjacent(c, &a3).unwrap());
            assert!(is_commutatively_adjacent(c, &b3).unwrap());
        }
        // Two differing labels are outside this enumeration.
        let (x, y) = c6_pair();
        assert!(enumerate_common_comm_neighbors(&x, &y).is_err());
    }

    #[test]
    fn distance2_classification_of_operators() {
        // Two-label non-commuting difference with min multiplicity 2 and
        // block dimension 5: the narrow regime.
        let a = SelfAdjointOperator::new(
            ev(&[0, 1, 2]),
            vec![e(8, &[0, 1, 2]), e(8, &[3, 4]), e(8, &[5, 6, 7])],
        )
        .unwrap();
        let mut rng = rng_from_seed(12);
        let b = loop {
            let cand =
                opgen::partner(&mut rng, &a, opgen::OpPairKind::TwoIndexNonCommuting).unwrap();
            if adjacency_type(&a, &cand).unwrap() == Some((1, 2)) {
                break cand;
            }
        };
        let evdn = classify_distance2_ops(&a, &b, 3).unwrap();
        match evdn {
            OpsDistance2Evidence::TwoIndex(d2) => {
                assert_eq!(d2.class, Distance2Class::AdjacentNonCompatible);
                // Narrow regime: exactly one partner per sampled neighbor.
                assert!(!d2.neighbor_profiles.is_empty());
                assert!(d2.neighbor_profiles.iter().all(|p| matches!(
                    p,
                    crate::orthograph::ExtensionProfile::ExactlyOne
                )));
            }
            other => panic!("expected reduced classification, got {other:?}"),
        }
        // Three-label difference: finite census.
        let b3 = opgen::partner(&mut rng, &a, opgen::OpPairKind::ThreeIndex).unwrap();
        match classify_distance2_ops(&a, &b3, 3).unwrap() {
            OpsDistance2Evidence::Finite { neighbors } => assert!(neighbors <= 6),
            other => panic!("expected finite census, got {other:?}"),
        }
    }

    #[test]
    fn permutation_is_an_automorphism_transforming_types() {
        // d = {2,2,2}: every permutation preserves multiplicities. The pair
        // differs at labels (1,2); after relabeling by delta, the differing
        // labels move to delta^{-1} of those.
        let (a, b) = c6_pair();
        let delta =
            DeltaPermutation::new(vec![2, 0, 1], a.spectral().multiplicities()).unwrap();
        let pa = permute(&a, &delta).unwrap();
        let pb = permute(&b, &delta).unwrap();
        assert!(is_commutatively_adjacent(&pa, &pb).unwrap());
        // delta maps slot t to eigenspace X_{delta(t)}; slots holding the
        // changed eigenspaces are t with delta(t) in {1,2}, i.e. {0,2}.
        assert_eq!(adjacency_type(&pa, &pb).unwrap(), Some((0, 2)));
        // Non-commuting adjacency is likewise preserved.
        let mut rng = rng_from_seed(21);
        let c = opgen::partner(&mut rng, &a, opgen::OpPairKind::TwoIndexNonCommuting).unwrap();
        let pc = permute(&c, &delta).unwrap();
        assert!(is_adjacent_ops(&pa, &pc).unwrap());
        assert!(!is_commutatively_adjacent(&pa, &pc).unwrap());
    }

    #[test]
    fn distance2_wide_regime_profile() {
        // d = {2,4,2}: differing pair at labels (0,1) has min multiplicity 2
        // and block dimension 6, so the wide regime applies: many neighbors,
        // each with many extensions.
        let a = SelfAdjointOperator::new(
            ev(&[0, 1, 2]),
            vec![e(8, &[0, 1]), e(8, &[2, 3, 4, 5]), e(8, &[6, 7])],
        )
        .unwrap();
        let mut rng = rng_from_seed(31);
        let b = loop {
            let cand =
                opgen::partner(&mut rng, &a, opgen::OpPairKind::TwoIndexNonCommuting).unwrap();
            if adjacency_type(&a, &cand).unwrap() == Some((0, 1)) {
                break cand;
            }
        };
        match classify_distance2_ops(&a, &b, 3).unwrap() {
            OpsDistance2Evidence::TwoIndex(d2) => {
                assert_eq!(d2.class, Distance2Class::AdjacentNonCompatible);
                assert!(!d2.neighbor_profiles.is_empty());
                assert!(d2.neighbor_profiles.iter().all(|p| matches!(
                    p,
                    crate::orthograph::ExtensionProfile::AtLeast(c) if *c >= 3
                )));
            }
            other => panic!("expected reduced classification, got {other:?}"),
        }
    }

    #[test]
    fn basis_spanned_class_is_connected() {
        let basis = OrthoBasis::standard(4);
        let ops = basis_spanned_operators(&basis, &ev(&[0, 1]), &[2, 2]).unwrap();
        assert_eq!(ops.len(), 6);
        assert!(operators_connected(&ops).unwrap());
    }

    #[test]
    fn operator_json_round_trip() {
        let (a, _) = c6_pair();
        let text = serde_json::to_string(&a).unwrap();
        assert!(text.contains("eigenvalues"));
        let back: SelfAdjointOperator = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
        // Overlapping eigenspaces are rejected on load.
        let bad = r#"{"eigenvalues":["0","1"],"eigenspaces":[
            {"ambient":2,"basis":[["1","0"]]},
            {"ambient":2,"basis":[["1","1"]]}]}"#;
        assert!(serde_json::from_str::<SelfAdjointOperator>(bad).is_err());
    }

    #[test]
    fn eigenspace_annihilation() {
        let (a, _) = c6_pair();
        let m = a.to_matrix();
        for (val, x) in a.eigenvalues().iter().zip(a.eigenspaces()) {
            let shifted = m
                .sub(&ExactMatrix::identity(6).scalar_mul(&GaussianRational::from_rational(
                    val.clone(),
                )))
                .unwrap();
            for row in x.basis_rows() {
                assert!(apply_row(row, &shifted).iter().all(|e| e.is_zero()));
            }
        }
    }
}
