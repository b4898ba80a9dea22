//! Seeded instance factories for verification campaigns.
//!
//! All generators are deterministic per seed (ChaCha8 stream) and re-check
//! the requested exact configuration with the subspace predicates before
//! returning. The `height` parameter bounds the numerator/denominator
//! magnitude of sampled entries.

use num::bigint::BigInt;
use num::rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{apply_row, ExactMatrix};
use crate::scalar::GaussianRational;
use crate::subspace::{is_compatible, OrthoBasis, Subspace};

pub const DEFAULT_HEIGHT: i64 = 4;

const MAX_ATTEMPTS: usize = 400;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives a per-trial seed from a campaign seed (splitmix64 step).
pub fn trial_seed(campaign_seed: u64, index: u64) -> u64 {
    let mut z = campaign_seed
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn random_scalar(rng: &mut ChaCha8Rng, height: i64) -> GaussianRational {
    let h = height.max(1);
    let part = |rng: &mut ChaCha8Rng| {
        let num = rng.gen_range(-h..=h);
        let den = rng.gen_range(1..=h);
        BigRational::new(BigInt::from(num), BigInt::from(den))
    };
    GaussianRational::new(part(rng), part(rng))
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize, height: i64) -> Vec<GaussianRational> {
    (0..n).map(|_| random_scalar(rng, height)).collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, height: i64) -> ExactMatrix {
    let data = (0..rows).map(|_| random_vector(rng, cols, height)).collect();
    ExactMatrix::from_rows(data, cols).expect("uniform rows")
}

/// A uniform-ish random k-dimensional subspace of C^n, full rank by
/// rejection.
pub fn random_subspace(n: usize, k: usize, height: i64, seed: u64) -> Result<Subspace> {
    random_subspace_rng(&mut rng_from_seed(seed), n, k, height)
}

pub fn random_subspace_rng(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    height: i64,
) -> Result<Subspace> {
    if k == 0 || k > n {
        return Err(Error::Infeasible(format!("subspace of dim {k} in C^{n}")));
    }
    for _ in 0..MAX_ATTEMPTS {
        let m = random_matrix(rng, k, n, height);
        if m.rank() == k {
            return Subspace::span_matrix(&m);
        }
    }
    Err(Error::SearchExhausted("random full-rank matrix".into()))
}

/// A random k-dimensional subspace of `v` (coefficients against its basis).
pub fn random_subspace_in(
    rng: &mut ChaCha8Rng,
    v: &Subspace,
    k: usize,
    height: i64,
) -> Result<Subspace> {
    if k == 0 || k > v.dim() {
        return Err(Error::Infeasible(format!(
            "subspace of dim {k} inside a {}-dimensional space",
            v.dim()
        )));
    }
    for _ in 0..MAX_ATTEMPTS {
        let coeffs = random_matrix(rng, k, v.dim(), height);
        if coeffs.rank() < k {
            continue;
        }
        let rows = (0..k).map(|r| apply_row(coeffs.row(r), v.basis())).collect();
        let candidate = Subspace::span_rows(rows, v.ambient_dim())?;
        if candidate.dim() == k {
            return Ok(candidate);
        }
    }
    Err(Error::SearchExhausted("random subspace inside".into()))
}

pub fn random_line_in(rng: &mut ChaCha8Rng, v: &Subspace, height: i64) -> Result<Subspace> {
    random_subspace_in(rng, v, 1, height)
}

/// A random hyperplane of `x` (codimension 1 inside `x`).
pub fn random_hyperplane_of(rng: &mut ChaCha8Rng, x: &Subspace, height: i64) -> Result<Subspace> {
    if x.dim() < 1 {
        return Err(Error::Infeasible("hyperplane of the zero space".into()));
    }
    if x.dim() == 1 {
        return Ok(Subspace::zero(x.ambient_dim()));
    }
    random_subspace_in(rng, x, x.dim() - 1, height)
}

/// A pair (X, Y) of k-dimensional subspaces with `dim(X∩Y) = m` and the
/// requested compatibility, verified before return.
pub fn pair_with_intersection(
    n: usize,
    k: usize,
    m: usize,
    compatible: bool,
    height: i64,
    seed: u64,
) -> Result<(Subspace, Subspace)> {
    pair_with_intersection_rng(&mut rng_from_seed(seed), n, k, m, compatible, height)
}

pub fn pair_with_intersection_rng(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    m: usize,
    compatible: bool,
    height: i64,
) -> Result<(Subspace, Subspace)> {
    if k == 0 || k > n || m > k || 2 * k - m > n {
        return Err(Error::Infeasible(format!(
            "pair with n={n} k={k} intersection {m}"
        )));
    }
    if !compatible && m == k {
        return Err(Error::Infeasible(
            "equal subspaces are always compatible".into(),
        ));
    }
    if compatible {
        compatible_pair_rng(rng, n, k, m, height)
    } else {
        noncompatible_pair_rng(rng, n, k, m, height)
    }
}

fn extend_by(
    rng: &mut ChaCha8Rng,
    base: &Subspace,
    inside: &Subspace,
    count: usize,
    height: i64,
) -> Result<Subspace> {
    // base + a random count-dimensional complement drawn from `inside`.
    let extra = random_subspace_in(rng, inside, count, height)?;
    base.sum(&extra)
}

fn compatible_pair_rng(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    m: usize,
    height: i64,
) -> Result<(Subspace, Subspace)> {
    // Mutually orthogonal blocks M ⟂ X' ⟂ Y' force the configuration.
    for _ in 0..MAX_ATTEMPTS {
        let core = if m > 0 {
            random_subspace_rng(rng, n, m, height)?
        } else {
            Subspace::zero(n)
        };
        let d = k - m;
        let (x, y) = if d == 0 {
            (core.clone(), core.clone())
        } else {
            let xpart = random_subspace_in(rng, &core.orthocomplement(), d, height)?;
            let x = core.sum(&xpart)?;
            let ypart = random_subspace_in(rng, &x.orthocomplement(), d, height)?;
            let y = core.sum(&ypart)?;
            (x, y)
        };
        if x.dim() == k
            && y.dim() == k
            && x.intersect(&y)?.dim() == m
            && is_compatible(&x, &y)?
        {
            return Ok((x, y));
        }
    }
    Err(Error::SearchExhausted("compatible pair".into()))
}

fn noncompatible_pair_rng(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    m: usize,
    height: i64,
) -> Result<(Subspace, Subspace)> {
    for _ in 0..MAX_ATTEMPTS {
        let core = if m > 0 {
            random_subspace_rng(rng, n, m, height)?
        } else {
            Subspace::zero(n)
        };
        let d = k - m;
        let room = core.orthocomplement();
        let x = extend_by(rng, &core, &room, d, height)?;
        let y = extend_by(rng, &core, &room, d, height)?;
        if x.dim() == k
            && y.dim() == k
            && x.intersect(&y)?.dim() == m
            && !is_compatible(&x, &y)?
        {
            return Ok((x, y));
        }
    }
    Err(Error::SearchExhausted("non-compatible pair".into()))
}

/// Adjacent (intersection k-1) and non-compatible.
pub fn adjacent_noncompatible_pair(
    n: usize,
    k: usize,
    height: i64,
    seed: u64,
) -> Result<(Subspace, Subspace)> {
    adjacent_noncompatible_pair_rng(&mut rng_from_seed(seed), n, k, height)
}

pub fn adjacent_noncompatible_pair_rng(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    height: i64,
) -> Result<(Subspace, Subspace)> {
    if k == 0 {
        return Err(Error::Infeasible("k must be positive".into()));
    }
    pair_with_intersection_rng(rng, n, k, k - 1, false, height)
}

/// Compatible with intersection of codimension 2 in each.
pub fn compatible_codim2_pair(
    n: usize,
    k: usize,
    height: i64,
    seed: u64,
) -> Result<(Subspace, Subspace)> {
    compatible_codim2_pair_rng(&mut rng_from_seed(seed), n, k, height)
}

pub fn compatible_codim2_pair_rng(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    height: i64,
) -> Result<(Subspace, Subspace)> {
    if k < 2 {
        return Err(Error::Infeasible("codim-2 intersection needs k >= 2".into()));
    }
    pair_with_intersection_rng(rng, n, k, k - 2, true, height)
}

/// A random orthogonal basis of C^n, built from the standard basis by
/// levels of exact plane rotations over random perfect matchings.
///
/// Every rotation level keeps all row norms equal (each coefficient pair
/// `(a, b)` satisfies `|a|^2 + |b|^2 = 2`), so the rotation
/// `(a b_i + b b_j, -conj(b) b_i + conj(a) b_j)` needs no norm
/// corrections and entries stay small Gaussian integers. Entry height in
/// the basis propagates into every downstream Gram matrix and projection,
/// which is why this matters. The `height` parameter is accepted for
/// signature uniformity; the construction is already minimal-height.
pub fn random_orthogonal_basis(n: usize, height: i64, seed: u64) -> Result<OrthoBasis> {
    random_orthogonal_basis_rng(&mut rng_from_seed(seed), n, height)
}

pub fn random_orthogonal_basis_rng(
    rng: &mut ChaCha8Rng,
    n: usize,
    _height: i64,
) -> Result<OrthoBasis> {
    use crate::scalar::GaussianRational;
    use crate::subspace::rescale_row;
    use rand::seq::SliceRandom;
    let mut rows: Vec<Vec<GaussianRational>> = (0..n)
        .map(|i| {
            let mut v = vec![GaussianRational::zero(); n];
            v[i] = GaussianRational::one();
            v
        })
        .collect();
    if n < 2 {
        return OrthoBasis::new(ExactMatrix::from_rows(rows, n)?);
    }
    let one = GaussianRational::one();
    let i_unit = GaussianRational::i();
    let one_plus_i = &one + &i_unit;
    let zero = GaussianRational::zero();
    // All (a, b) with |a|^2 + |b|^2 = 2.
    let coeffs: Vec<(GaussianRational, GaussianRational)> = vec![
        (one.clone(), one.clone()),
        (one.clone(), -&one),
        (one.clone(), i_unit.clone()),
        (one.clone(), -&i_unit),
        (i_unit.clone(), one.clone()),
        (i_unit.clone(), -&one),
        (i_unit.clone(), i_unit.clone()),
        (one_plus_i.clone(), zero.clone()),
        (zero.clone(), one_plus_i.clone()),
        ((-&one_plus_i).clone(), zero.clone()),
    ];
    let levels = (usize::BITS - n.leading_zeros()) as usize + 1;
    for _ in 0..levels {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        for pair in order.chunks(2) {
            if let [i, j] = *pair {
                let (a, b) = coeffs[rng.gen_range(0..coeffs.len())].clone();
                let c = -&b.conjugate();
                let d = a.conjugate();
                let mut new_i = Vec::with_capacity(n);
                let mut new_j = Vec::with_capacity(n);
                for t in 0..n {
                    new_i.push(&(&a * &rows[i][t]) + &(&b * &rows[j][t]));
                    new_j.push(&(&c * &rows[i][t]) + &(&d * &rows[j][t]));
                }
                rows[i] = new_i;
                rows[j] = new_j;
            } else if let [lone] = *pair {
                // Odd row count: scale by 1+i to keep its norm in step.
                for t in 0..n {
                    rows[lone][t] = &rows[lone][t] * &one_plus_i;
                }
            }
        }
    }
    for row in rows.iter_mut() {
        rescale_row(row);
    }
    OrthoBasis::new(ExactMatrix::from_rows(rows, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::{is_adjacent, is_ortho_adjacent};

    #[test]
    fn same_seed_gives_identical_subspace() {
        let a = random_subspace(4, 2, DEFAULT_HEIGHT, 99).unwrap();
        let b = random_subspace(4, 2, DEFAULT_HEIGHT, 99).unwrap();
        assert_eq!(a, b);
        let c = random_subspace(4, 2, DEFAULT_HEIGHT, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn noncompatible_pair_with_given_intersection() {
        let (x, y) = pair_with_intersection(4, 2, 1, false, DEFAULT_HEIGHT, 5).unwrap();
        assert_eq!(x.intersect(&y).unwrap().dim(), 1);
        assert!(!is_compatible(&x, &y).unwrap());
        assert!(is_adjacent(&x, &y).unwrap());
        assert!(!is_ortho_adjacent(&x, &y).unwrap());
    }

    #[test]
    fn compatible_disjoint_pair_is_orthogonal_when_room_is_tight() {
        // 2k <= n with zero intersection: the construction yields an
        // orthogonal, hence compatible, pair.
        let (x, y) = pair_with_intersection(5, 2, 0, true, DEFAULT_HEIGHT, 11).unwrap();
        assert_eq!(x.intersect(&y).unwrap().dim(), 0);
        assert!(is_compatible(&x, &y).unwrap());
        assert!(x.is_orthogonal_to(&y).unwrap());
    }

    #[test]
    fn infeasible_parameters_rejected() {
        assert!(pair_with_intersection(4, 3, 1, false, 4, 1).is_err()); // 2k-m > n
        assert!(pair_with_intersection(4, 2, 3, false, 4, 1).is_err()); // m > k
        assert!(pair_with_intersection(4, 2, 2, false, 4, 1).is_err()); // X = Y
    }

    #[test]
    fn orthogonal_basis_is_orthogonal_and_seeded() {
        let b1 = random_orthogonal_basis(5, 2, 3).unwrap();
        let b2 = random_orthogonal_basis(5, 2, 3).unwrap();
        assert_eq!(b1.vectors(), b2.vectors());
        assert_eq!(b1.len(), 5);
    }

    #[test]
    fn trial_seed_spreads() {
        let s: Vec<u64> = (0..8).map(|i| trial_seed(7, i)).collect();
        let mut dedup = s.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(dedup.len(), s.len());
    }
}
