//! The ortho-Grassmann graph: common-neighbor constructions for adjacent
//! non-compatible pairs, exact neighbor counts per dimensional regime, the
//! two-extensions construction, the geodesic-based compatibility decision
//! procedure, and ortho-star / ortho-top cliques.
//!
//! Several operations take an explicit `within` subspace so the same
//! constructions can run relative to an invariant block (used by the
//! operator-class module); the plain entry points fix `within` to the full
//! space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen::{random_hyperplane_of, rng_from_seed, DEFAULT_HEIGHT};
use crate::grassmann::{build_geodesic_through, GeodesicPath, GraphKind};
use crate::scalar::GaussianRational;
use crate::subspace::{is_adjacent, is_compatible, is_ortho_adjacent, OrthoBasis, Subspace};

/// The two parameterised families of common ortho-neighbors of an adjacent
/// pair: outside `X+Y` (a line orthogonal to the span) or inside `X+Y`
/// (a hyperplane of the intersection).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NeighborKind {
    Type1,
    Type2,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommonNeighborFamily {
    pub kind: NeighborKind,
    pub base_pair: (Subspace, Subspace),
    /// Dimension of the parameter domain: lines in `(X+Y)^⟂` for Type1,
    /// hyperplanes of `X∩Y` for Type2.
    pub parameter_space_dim: usize,
}

/// The families available for an adjacent pair inside `within`
/// (Type1 needs room outside `X+Y`, Type2 needs `k > 1`).
pub fn common_neighbor_families(
    x: &Subspace,
    y: &Subspace,
    within: &Subspace,
) -> Result<Vec<CommonNeighborFamily>> {
    require_adjacent_in(x, y, within)?;
    let k = x.dim();
    let n = within.dim();
    let mut out = Vec::new();
    if k < n - 1 {
        out.push(CommonNeighborFamily {
            kind: NeighborKind::Type1,
            base_pair: (x.clone(), y.clone()),
            parameter_space_dim: n - k - 1,
        });
    }
    if k > 1 {
        out.push(CommonNeighborFamily {
            kind: NeighborKind::Type2,
            base_pair: (x.clone(), y.clone()),
            parameter_space_dim: k - 1,
        });
    }
    Ok(out)
}

fn require_adjacent_in(x: &Subspace, y: &Subspace, within: &Subspace) -> Result<()> {
    if !x.is_subspace_of(within)? || !y.is_subspace_of(within)? {
        return Err(Error::Precondition(
            "pair does not lie inside the ambient block".into(),
        ));
    }
    if !is_adjacent(x, y)? {
        return Err(Error::Precondition("pair is not adjacent".into()));
    }
    Ok(())
}

/// `Z = (X∩Y) + P` for a line `P` orthogonal to `X+Y`; ortho-adjacent to
/// both by construction, which is asserted.
pub fn type1_neighbor(x: &Subspace, y: &Subspace, p: &Subspace) -> Result<Subspace> {
    type1_neighbor_within(x, y, p, &Subspace::full(x.ambient_dim()))
}

pub fn type1_neighbor_within(
    x: &Subspace,
    y: &Subspace,
    p: &Subspace,
    within: &Subspace,
) -> Result<Subspace> {
    require_adjacent_in(x, y, within)?;
    if p.dim() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "P must be a line, got dim {}",
            p.dim()
        )));
    }
    if !p.is_subspace_of(within)? {
        return Err(Error::Precondition("P lies outside the ambient block".into()));
    }
    let span = x.sum(y)?;
    if !p.is_orthogonal_to(&span)? {
        return Err(Error::Precondition("P is not orthogonal to X+Y".into()));
    }
    let z = x.intersect(y)?.sum(p)?;
    assert!(
        is_ortho_adjacent(&z, x)? && is_ortho_adjacent(&z, y)?,
        "type-1 construction failed its ortho-adjacency contract"
    );
    Ok(z)
}

/// `Z = S + W` where `S` is the 2-dimensional orthogonal complement of
/// `X∩Y` in `X+Y` and `W ⊆ X∩Y` has dimension k-2.
pub fn type2_neighbor(x: &Subspace, y: &Subspace, w: &Subspace) -> Result<Subspace> {
    require_adjacent_in(x, y, &Subspace::full(x.ambient_dim()))?;
    let k = x.dim();
    if k < 2 {
        return Err(Error::Precondition("type-2 neighbors require k > 1".into()));
    }
    let core = x.intersect(y)?;
    if w.dim() + 2 != k {
        return Err(Error::DimensionMismatch(format!(
            "W must have dimension {}, got {}",
            k - 2,
            w.dim()
        )));
    }
    if !w.is_subspace_of(&core)? {
        return Err(Error::Precondition("W is not contained in X∩Y".into()));
    }
    let s = core.ortho_within(&x.sum(y)?)?;
    debug_assert_eq!(s.dim(), 2);
    let z = s.sum(w)?;
    assert!(
        is_ortho_adjacent(&z, x)? && is_ortho_adjacent(&z, y)?,
        "type-2 construction failed its ortho-adjacency contract"
    );
    Ok(z)
}

/// Classifies a common ortho-neighbor of an adjacent non-compatible pair and
/// checks the classification round-trips through the constructors.
pub fn classify_common_neighbor(
    x: &Subspace,
    y: &Subspace,
    z: &Subspace,
) -> Result<NeighborKind> {
    if !is_adjacent(x, y)? || is_compatible(x, y)? {
        return Err(Error::Precondition(
            "pair must be adjacent and non-compatible".into(),
        ));
    }
    if z == x || z == y || !is_ortho_adjacent(z, x)? || !is_ortho_adjacent(z, y)? {
        return Err(Error::Precondition(
            "Z is not a common ortho-neighbor of the pair".into(),
        ));
    }
    let span = x.sum(y)?;
    let core = x.intersect(y)?;
    if z.is_subspace_of(&span)? {
        let w = z.intersect(&core)?;
        let rebuilt = type2_neighbor(x, y, &w)?;
        assert_eq!(rebuilt, *z, "type-2 classification does not round-trip");
        Ok(NeighborKind::Type2)
    } else {
        assert!(
            core.is_subspace_of(z)?,
            "neighbor outside X+Y must contain X∩Y"
        );
        let p = core.ortho_within(z)?;
        let rebuilt = type1_neighbor(x, y, &p)?;
        assert_eq!(rebuilt, *z, "type-1 classification does not round-trip");
        Ok(NeighborKind::Type1)
    }
}

/// Distinct lines inside `space`: the basis lines first, then combinations
/// `b_1 + t b_2`. Infinitely many exist whenever `dim >= 2`.
pub fn distinct_lines(space: &Subspace, count: usize) -> Vec<Subspace> {
    let d = space.dim();
    let mut out = Vec::new();
    if d == 0 || count == 0 {
        return out;
    }
    if d == 1 {
        out.push(space.clone());
        return out;
    }
    for row in space.basis_rows() {
        if out.len() == count {
            return out;
        }
        out.push(Subspace::line(row.to_vec()).expect("basis row is nonzero"));
    }
    let b1 = space.basis().row_vec(0);
    let b2 = space.basis().row_vec(1);
    let mut t: i64 = 1;
    while out.len() < count {
        let factor = GaussianRational::from_int(t);
        let v: Vec<GaussianRational> = b1
            .iter()
            .zip(&b2)
            .map(|(a, b)| a + &(&factor * b))
            .collect();
        out.push(Subspace::line(v).expect("nonzero combination"));
        t += 1;
    }
    out
}

/// Distinct hyperplanes of `space`, via orthocomplements of distinct lines
/// within it.
pub fn distinct_hyperplanes(space: &Subspace, count: usize) -> Result<Vec<Subspace>> {
    distinct_lines(space, count)
        .iter()
        .map(|l| l.ortho_within(space))
        .collect()
}

/// Count of common ortho-neighbors of an adjacent non-compatible pair:
/// exactly two in the minimal regime, otherwise a requested number of
/// pairwise-distinct exact witnesses from the two parameterised families.
#[derive(Clone, Debug)]
pub enum CommonNeighborCount {
    /// The two neighbors, which are mutually orthogonal.
    ExactlyTwo(Subspace, Subspace),
    AtLeast(Vec<Subspace>),
}

pub fn count_common_neighbors(
    x: &Subspace,
    y: &Subspace,
    witness_budget: usize,
) -> Result<CommonNeighborCount> {
    count_common_neighbors_within(x, y, witness_budget, &Subspace::full(x.ambient_dim()))
}

pub fn count_common_neighbors_within(
    x: &Subspace,
    y: &Subspace,
    witness_budget: usize,
    within: &Subspace,
) -> Result<CommonNeighborCount> {
    require_adjacent_in(x, y, within)?;
    if is_compatible(x, y)? {
        return Err(Error::Precondition(
            "pair must be non-compatible for the geodesic count".into(),
        ));
    }
    let k = x.dim();
    let n = within.dim();
    let core = x.intersect(y)?;
    let span = x.sum(y)?;
    if n == 4 && k == 2 {
        // Both parameter families are singletons: the line family is the
        // whole 1-dimensional complement of X+Y, the hyperplane family is
        // the zero subspace.
        let outside = span.ortho_within(within)?;
        debug_assert_eq!(outside.dim(), 1);
        let z1 = core.sum(&outside)?;
        let z2 = core.ortho_within(&span)?;
        for z in [&z1, &z2] {
            assert!(
                is_ortho_adjacent(z, x)? && is_ortho_adjacent(z, y)?,
                "minimal-regime neighbor fails ortho-adjacency"
            );
        }
        assert_ne!(z1, z2);
        assert!(
            z1.is_orthogonal_to(&z2)?,
            "the two minimal-regime neighbors must be orthogonal"
        );
        return Ok(CommonNeighborCount::ExactlyTwo(z1, z2));
    }
    let mut witnesses: Vec<Subspace> = Vec::new();
    let push = |z: Subspace, witnesses: &mut Vec<Subspace>| {
        if !witnesses.contains(&z) {
            witnesses.push(z);
        }
    };
    let type1 = if k + 1 < n {
        let outside = span.ortho_within(within)?;
        distinct_lines(&outside, witness_budget)
            .iter()
            .map(|p| type1_neighbor_within(x, y, p, within))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let type2 = if k > 1 {
        distinct_hyperplanes(&core, witness_budget)?
            .iter()
            .map(|w| type2_neighbor(x, y, w))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let mut iter1 = type1.into_iter();
    let mut iter2 = type2.into_iter();
    while witnesses.len() < witness_budget {
        match (iter1.next(), iter2.next()) {
            (None, None) => break,
            (a, b) => {
                if let Some(z) = a {
                    push(z, &mut witnesses);
                }
                if let Some(z) = b {
                    push(z, &mut witnesses);
                }
            }
        }
    }
    witnesses.truncate(witness_budget);
    if witnesses.len() < witness_budget {
        return Err(Error::WitnessesExhausted(format!(
            "only {} distinct common neighbors available for n={n}, k={k}",
            witnesses.len()
        )));
    }
    Ok(CommonNeighborCount::AtLeast(witnesses))
}

/// For compatible `X, Y` meeting in codimension 2 and a common
/// ortho-neighbor `Z`: the precisely two subspaces ortho-adjacent to all of
/// `X, Y, Z`, built from the orthocomplement swap of `Z`'s trace lines.
pub fn two_extensions(
    x: &Subspace,
    y: &Subspace,
    z: &Subspace,
) -> Result<(Subspace, Subspace)> {
    if !is_compatible(x, y)? {
        return Err(Error::Precondition("pair must be compatible".into()));
    }
    let k = x.dim();
    let core = x.intersect(y)?;
    if core.dim() + 2 != k {
        return Err(Error::Precondition(format!(
            "intersection must have dimension k-2, got {}",
            core.dim()
        )));
    }
    if !is_ortho_adjacent(z, x)? || !is_ortho_adjacent(z, y)? {
        return Err(Error::Precondition(
            "Z is not ortho-adjacent to both X and Y".into(),
        ));
    }
    if !core.is_subspace_of(z)? {
        return Err(Error::Precondition("Z does not contain X∩Y".into()));
    }
    let core_perp = core.orthocomplement();
    let x_prime = x.intersect(&core_perp)?;
    let y_prime = y.intersect(&core_perp)?;
    debug_assert_eq!(x_prime.dim(), 2);
    debug_assert_eq!(y_prime.dim(), 2);
    let p = z.intersect(&x_prime)?;
    let q = z.intersect(&y_prime)?;
    if p.dim() != 1 || q.dim() != 1 {
        return Err(Error::Precondition(
            "Z does not trace lines on the reduced pair".into(),
        ));
    }
    let p_swap = p.ortho_within(&x_prime)?;
    let q_swap = q.ortho_within(&y_prime)?;
    let z1 = p_swap.sum(&core)?.sum(&q)?;
    let z2 = p.sum(&core)?.sum(&q_swap)?;
    assert_ne!(z1, z2, "the two extensions must differ");
    for ext in [&z1, &z2] {
        assert!(
            is_ortho_adjacent(ext, x)?
                && is_ortho_adjacent(ext, y)?
                && is_ortho_adjacent(ext, z)?,
            "extension fails the triple ortho-adjacency check"
        );
    }
    Ok((z1, z2))
}

/// In the regime `dim within = k+3`, the unique subspace ortho-adjacent to
/// an adjacent non-compatible pair and a given Type-1 neighbor `Z`.
pub fn unique_partner(x: &Subspace, y: &Subspace, z: &Subspace) -> Result<Subspace> {
    unique_partner_within(x, y, z, &Subspace::full(x.ambient_dim()))
}

pub fn unique_partner_within(
    x: &Subspace,
    y: &Subspace,
    z: &Subspace,
    within: &Subspace,
) -> Result<Subspace> {
    require_adjacent_in(x, y, within)?;
    let k = x.dim();
    let n = within.dim();
    if n != k + 3 {
        return Err(Error::Precondition(format!(
            "unique partner requires ambient dimension k+3, got n={n}, k={k}"
        )));
    }
    if is_compatible(x, y)? {
        return Err(Error::Precondition("pair must be non-compatible".into()));
    }
    let core = x.intersect(y)?;
    let span = x.sum(y)?;
    if !core.is_subspace_of(z)? {
        return Err(Error::Precondition("Z does not contain X∩Y".into()));
    }
    if !z.is_subspace_of(within)? {
        return Err(Error::Precondition("Z lies outside the ambient block".into()));
    }
    let p = core.ortho_within(z)?;
    if p.dim() != 1 || !p.is_orthogonal_to(&span)? {
        return Err(Error::Precondition(
            "Z is not a Type-1 neighbor of the pair".into(),
        ));
    }
    let outside = span.ortho_within(within)?;
    debug_assert_eq!(outside.dim(), 2);
    let q = p.ortho_within(&outside)?;
    debug_assert_eq!(q.dim(), 1);
    let partner = q.sum(&core)?;
    assert!(
        is_ortho_adjacent(&partner, x)?
            && is_ortho_adjacent(&partner, y)?
            && is_ortho_adjacent(&partner, z)?,
        "constructed partner fails the triple check"
    );
    // The competing Type-2 candidates S+W are never adjacent to Z.
    if k > 1 {
        let s = core.ortho_within(&span)?;
        let ws = if k == 2 {
            vec![Subspace::zero(x.ambient_dim())]
        } else {
            distinct_hyperplanes(&core, 3)?
        };
        for w in &ws {
            let candidate = s.sum(w)?;
            assert!(
                !is_adjacent(&candidate, z)?,
                "a Type-2 candidate is unexpectedly adjacent to Z"
            );
        }
    }
    Ok(partner)
}

#[derive(Clone, Debug)]
pub enum CompatibilityDecision {
    Compatible,
    /// A Grassmann geodesic between the endpoints with at least one
    /// consecutive pair that is not ortho-adjacent.
    NonCompatibleWitness(GeodesicPath),
}

/// Decides compatibility through the geodesic characterisation: the pair is
/// compatible iff every Grassmann geodesic between the two is also an
/// ortho-Grassmann geodesic. For non-compatible pairs a violating geodesic
/// is constructed explicitly by the reduction to the disjoint trace pair.
///
/// The decision is cross-checked against the direct projection-commutation
/// predicate; a search failure on a non-compatible pair is reported as a
/// distinct diagnostic error, never as `Compatible`.
pub fn decide_compatibility_by_geodesics(
    x: &Subspace,
    y: &Subspace,
    search_budget: usize,
) -> Result<CompatibilityDecision> {
    if x.ambient_dim() != y.ambient_dim() {
        return Err(Error::AmbientMismatch(x.ambient_dim(), y.ambient_dim()));
    }
    if x.dim() != y.dim() || x == y {
        return Err(Error::Precondition(
            "endpoints must be distinct and of equal dimension".into(),
        ));
    }
    let reference = is_compatible(x, y)?;
    if is_adjacent(x, y)? {
        if reference {
            return Ok(CompatibilityDecision::Compatible);
        }
        // A length-1 Grassmann geodesic that is not an ortho edge.
        let path = GeodesicPath::new(vec![x.clone(), y.clone()], GraphKind::Grassmann)?;
        assert!(path.first_non_ortho_step()?.is_some());
        return Ok(CompatibilityDecision::NonCompatibleWitness(path));
    }
    let core = x.intersect(y)?;
    let reduced_ambient = core.ortho_within(&x.sum(y)?)?;
    let x_prime = x.intersect(&reduced_ambient)?;
    let y_prime = y.intersect(&reduced_ambient)?;
    debug_assert_eq!(x_prime.dim(), y_prime.dim());
    if x_prime.is_orthogonal_to(&y_prime)? {
        assert!(reference, "orthogonal traces but non-commuting projections");
        return Ok(CompatibilityDecision::Compatible);
    }
    assert!(!reference, "non-orthogonal traces but commuting projections");
    // A line of Y' that is not orthogonal to X' exists because Y' is not.
    let line = distinct_lines(&y_prime, y_prime.dim())
        .into_iter()
        .find(|l| !l.is_orthogonal_to(&x_prime).unwrap_or(false))
        .ok_or_else(|| {
            Error::SearchExhausted("no basis line of Y' avoids orthogonality to X'".into())
        })?;
    // Hyperplane candidates for N: coordinate hyperplanes of X' first, then
    // seeded random ones up to the budget.
    let mut candidates: Vec<Subspace> = Vec::new();
    let d = x_prime.dim();
    if d == 1 {
        candidates.push(Subspace::zero(x.ambient_dim()));
    } else {
        for drop in 0..d {
            let rows: Vec<Vec<GaussianRational>> = x_prime
                .basis_rows()
                .enumerate()
                .filter(|(i, _)| *i != drop)
                .map(|(_, r)| r.to_vec())
                .collect();
            candidates.push(Subspace::span_rows(rows, x.ambient_dim())?);
        }
        let mut rng = rng_from_seed(0x0C0F_FEE5);
        while candidates.len() < search_budget {
            candidates.push(random_hyperplane_of(&mut rng, &x_prime, DEFAULT_HEIGHT)?);
        }
    }
    for hyperplane in candidates.into_iter().take(search_budget.max(1)) {
        let reduced_witness = line.sum(&hyperplane)?;
        if is_ortho_adjacent(&x_prime, &reduced_witness)? {
            continue;
        }
        let waypoint = reduced_witness.sum(&core)?;
        assert!(
            !is_ortho_adjacent(x, &waypoint)?,
            "lifted waypoint should not be ortho-adjacent to X"
        );
        let path = build_geodesic_through(x, &waypoint, y)?;
        assert_eq!(path.first_non_ortho_step()?, Some(0));
        return Ok(CompatibilityDecision::NonCompatibleWitness(path));
    }
    Err(Error::SearchExhausted(format!(
        "pair is non-compatible but no witness hyperplane found within budget {search_budget}"
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Distance2Class {
    AdjacentNonCompatible,
    CompatibleCodim2,
    NonCompatibleCodim2,
}

/// Per-sampled-neighbor extension profile observed during classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtensionProfile {
    /// At least this many distinct third subspaces ortho-adjacent to all
    /// three.
    AtLeast(usize),
    ExactlyOne,
    ExactlyTwo,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Distance2Evidence {
    pub class: Distance2Class,
    pub neighbor_profiles: Vec<ExtensionProfile>,
}

/// Classifies a pair at ortho-distance 2 and cross-validates the direct
/// predicate classification against the geodesic-profile characterisation
/// (sampled witness families). Disagreement is an error, not a preference.
pub fn classify_distance2(
    x: &Subspace,
    y: &Subspace,
    witness_budget: usize,
) -> Result<Distance2Evidence> {
    classify_distance2_within(x, y, witness_budget, &Subspace::full(x.ambient_dim()))
}

pub fn classify_distance2_within(
    x: &Subspace,
    y: &Subspace,
    witness_budget: usize,
    within: &Subspace,
) -> Result<Distance2Evidence> {
    if x == y {
        return Err(Error::Precondition("pair must be distinct".into()));
    }
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} vs {}",
            x.dim(),
            y.dim()
        )));
    }
    if is_ortho_adjacent(x, y)? {
        return Err(Error::Precondition("pair is at ortho-distance 1".into()));
    }
    let k = x.dim();
    let adjacent = is_adjacent(x, y)?;
    let compatible = is_compatible(x, y)?;
    let meet = x.intersect(y)?.dim();
    let class = if adjacent && !compatible {
        Distance2Class::AdjacentNonCompatible
    } else if meet + 2 == k {
        if compatible {
            Distance2Class::CompatibleCodim2
        } else {
            Distance2Class::NonCompatibleCodim2
        }
    } else {
        return Err(Error::Precondition(
            "pair is not at ortho-distance 2".into(),
        ));
    };
    let budget = witness_budget.max(2);
    let mut profiles = Vec::new();
    match class {
        Distance2Class::AdjacentNonCompatible => {
            let n = within.dim();
            let span = x.sum(y)?;
            let core = x.intersect(y)?;
            let outside = span.ortho_within(within)?;
            if k + 4 <= n {
                // Wide regime: many neighbors, each with many third
                // subspaces (orthogonal line pairs in the outside space).
                for p in distinct_lines(&outside, budget) {
                    let z = type1_neighbor_within(x, y, &p, within)?;
                    let perp_of_p = p.ortho_within(&outside)?;
                    let mut count = 0;
                    for q in distinct_lines(&perp_of_p, budget) {
                        let partner = type1_neighbor_within(x, y, &q, within)?;
                        assert!(is_ortho_adjacent(&partner, &z)?);
                        count += 1;
                    }
                    if count < budget {
                        return Err(Error::CrossCheck(format!(
                            "expected many third subspaces, found {count}"
                        )));
                    }
                    profiles.push(ExtensionProfile::AtLeast(count));
                }
            } else if k + 3 == n {
                // Narrow regime: many neighbors, each with exactly one
                // partner, certified by the unique-partner construction.
                for p in distinct_lines(&outside, budget) {
                    let z = type1_neighbor_within(x, y, &p, within)?;
                    let partner = unique_partner_within(x, y, &z, within)?;
                    let q = core.ortho_within(&partner)?;
                    // Any other line of the outside space fails: it is not
                    // orthogonal to P, so its neighbor is not compatible
                    // with Z.
                    for other in distinct_lines(&outside, budget + 2) {
                        if other == q || other == p {
                            continue;
                        }
                        let candidate = type1_neighbor_within(x, y, &other, within)?;
                        assert!(
                            !is_ortho_adjacent(&candidate, &z)?,
                            "a second partner appeared in the narrow regime"
                        );
                    }
                    profiles.push(ExtensionProfile::ExactlyOne);
                }
            } else {
                // k + 2 = n; for k = 2 this is the minimal regime with the
                // exact two-neighbor count, otherwise only the hyperplane
                // family remains and witnesses are reported as a count.
                match count_common_neighbors_within(x, y, budget.min(2), within)? {
                    CommonNeighborCount::ExactlyTwo(..) => {
                        profiles.push(ExtensionProfile::ExactlyTwo);
                    }
                    CommonNeighborCount::AtLeast(ws) => {
                        profiles.push(ExtensionProfile::AtLeast(ws.len()));
                    }
                }
            }
        }
        Distance2Class::CompatibleCodim2 => {
            let core = x.intersect(y)?;
            let core_perp = core.orthocomplement();
            let x_prime = x.intersect(&core_perp)?;
            let y_prime = y.intersect(&core_perp)?;
            // Any pair of trace lines yields a common ortho-neighbor.
            let px = distinct_lines(&x_prime, 2);
            let qy = distinct_lines(&y_prime, 2);
            'outer: for p in &px {
                for q in &qy {
                    let z = core.sum(p)?.sum(q)?;
                    if !is_ortho_adjacent(&z, x)? || !is_ortho_adjacent(&z, y)? {
                        return Err(Error::CrossCheck(
                            "constructed codim-2 neighbor failed adjacency".into(),
                        ));
                    }
                    two_extensions(x, y, &z)?;
                    profiles.push(ExtensionProfile::ExactlyTwo);
                    if profiles.len() >= budget.min(4) {
                        break 'outer;
                    }
                }
            }
        }
        Distance2Class::NonCompatibleCodim2 => {
            // No constructive witness family exists here: by the
            // witness lemma, no two common neighbors are ortho-adjacent to
            // each other, so no extension profile is reported.
        }
    }
    Ok(Distance2Evidence {
        class,
        neighbor_profiles: profiles,
    })
}

/// Elements of the ortho-star of `s` with respect to an orthogonal basis
/// spanning it: all `s + b` for basis vectors `b` outside `s`. Exactly
/// `n - k + 1` elements, pairwise ortho-adjacent (asserted).
pub fn ortho_star_elements(s: &Subspace, basis: &OrthoBasis) -> Result<Vec<Subspace>> {
    let inside = basis.spanning_subset(s)?;
    let n = basis.len();
    let mut elements = Vec::with_capacity(n - inside.len());
    for i in 0..n {
        if inside.contains(&i) {
            continue;
        }
        let mut idx = inside.clone();
        idx.push(i);
        elements.push(basis.subset_span(&idx));
    }
    let k = s.dim() + 1;
    assert_eq!(elements.len(), n - k + 1, "ortho-star size is n-k+1");
    assert_clique(&elements)?;
    Ok(elements)
}

/// Elements of the ortho-top of `u`: all hyperplanes of `u` spanned by
/// subsets of the basis. Exactly `k + 1` elements, pairwise ortho-adjacent.
pub fn ortho_top_elements(u: &Subspace, basis: &OrthoBasis) -> Result<Vec<Subspace>> {
    let inside = basis.spanning_subset(u)?;
    let mut elements = Vec::with_capacity(inside.len());
    for drop in &inside {
        let idx: Vec<usize> = inside.iter().copied().filter(|i| i != drop).collect();
        elements.push(basis.subset_span(&idx));
    }
    let k = u.dim() - 1;
    assert_eq!(elements.len(), k + 1, "ortho-top size is k+1");
    assert_clique(&elements)?;
    Ok(elements)
}

fn assert_clique(elements: &[Subspace]) -> Result<()> {
    for (i, a) in elements.iter().enumerate() {
        for b in &elements[..i] {
            if !is_ortho_adjacent(a, b)? {
                return Err(Error::CrossCheck(
                    "clique elements are not pairwise ortho-adjacent".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Cardinality of the intersection of two clique element lists under
/// canonical equality.
pub fn clique_intersection_size(c1: &[Subspace], c2: &[Subspace]) -> usize {
    c1.iter().filter(|a| c2.contains(a)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::grassmann::grassmann_distance;

    fn e(ambient: usize, idx: &[usize]) -> Subspace {
        Subspace::coordinate(ambient, idx)
    }

    fn sp(ambient: usize, rows: &[&[&str]]) -> Subspace {
        Subspace::parse(ambient, rows).unwrap()
    }

    /// The canonical adjacent non-compatible pair used across the examples.
    fn anc_pair(ambient: usize) -> (Subspace, Subspace) {
        let mut x_rows = vec!["1", "0", "0", "0"];
        let mut y_row = vec!["0", "1", "1", "0"];
        x_rows.resize(ambient, "0");
        y_row.resize(ambient, "0");
        let mut e2 = vec!["0", "1", "0", "0"];
        e2.resize(ambient, "0");
        let x = Subspace::parse(ambient, &[&x_rows, &e2]).unwrap();
        let y = Subspace::parse(ambient, &[&x_rows, &y_row]).unwrap();
        (x, y)
    }

    #[test]
    fn type1_neighbor_examples() {
        let (x, y) = anc_pair(4);
        let z = type1_neighbor(&x, &y, &e(4, &[3])).unwrap();
        assert_eq!(z, e(4, &[0, 3]));
        let (x5, y5) = anc_pair(5);
        let z5 = type1_neighbor(&x5, &y5, &e(5, &[4])).unwrap();
        assert_eq!(z5, e(5, &[0, 4]));
        // P must be orthogonal to X+Y.
        assert!(type1_neighbor(&x, &y, &e(4, &[2])).is_err());
    }

    #[test]
    fn type2_neighbor_examples() {
        let (x, y) = anc_pair(4);
        let z = type2_neighbor(&x, &y, &Subspace::zero(4)).unwrap();
        assert_eq!(z, e(4, &[1, 2]));
        // k = 3 instance with W a line of the intersection.
        let x6 = e(6, &[0, 1, 2]);
        let y6 = sp(
            6,
            &[
                &["1", "0", "0", "0", "0", "0"],
                &["0", "1", "0", "0", "0", "0"],
                &["0", "0", "1", "1", "0", "0"],
            ],
        );
        let w = e(6, &[0]);
        let z6 = type2_neighbor(&x6, &y6, &w).unwrap();
        assert!(is_ortho_adjacent(&z6, &x6).unwrap());
        assert!(is_ortho_adjacent(&z6, &y6).unwrap());
        // Wrong W dimension.
        assert!(type2_neighbor(&x6, &y6, &e(6, &[0, 1])).is_err());
    }

    #[test]
    fn classify_common_neighbor_round_trips() {
        let (x, y) = anc_pair(4);
        assert_eq!(
            classify_common_neighbor(&x, &y, &e(4, &[0, 3])).unwrap(),
            NeighborKind::Type1
        );
        assert_eq!(
            classify_common_neighbor(&x, &y, &e(4, &[1, 2])).unwrap(),
            NeighborKind::Type2
        );
        assert!(classify_common_neighbor(&x, &y, &x).is_err());
    }

    #[test]
    fn minimal_regime_has_exactly_two_orthogonal_neighbors() {
        let (x, y) = anc_pair(4);
        match count_common_neighbors(&x, &y, 5).unwrap() {
            CommonNeighborCount::ExactlyTwo(z1, z2) => {
                assert_eq!(z1, e(4, &[0, 3]));
                assert_eq!(z2, e(4, &[1, 2]));
                assert!(z1.is_orthogonal_to(&z2).unwrap());
            }
            other => panic!("expected the exact pair, got {other:?}"),
        }
    }

    #[test]
    fn wider_regimes_produce_distinct_witnesses() {
        let (x5, y5) = anc_pair(5);
        match count_common_neighbors(&x5, &y5, 5).unwrap() {
            CommonNeighborCount::AtLeast(ws) => {
                assert_eq!(ws.len(), 5);
                for (i, w) in ws.iter().enumerate() {
                    assert!(is_ortho_adjacent(w, &x5).unwrap());
                    assert!(is_ortho_adjacent(w, &y5).unwrap());
                    assert!(!ws[..i].contains(w));
                }
            }
            other => panic!("expected witnesses, got {other:?}"),
        }
        // k = 3 in C^6: both families open.
        let x6 = e(6, &[0, 1, 2]);
        let y6 = sp(
            6,
            &[
                &["1", "0", "0", "0", "0", "0"],
                &["0", "1", "0", "0", "0", "0"],
                &["0", "0", "1", "1", "0", "0"],
            ],
        );
        match count_common_neighbors(&x6, &y6, 5).unwrap() {
            CommonNeighborCount::AtLeast(ws) => assert_eq!(ws.len(), 5),
            other => panic!("expected witnesses, got {other:?}"),
        }
    }

    #[test]
    fn two_extensions_examples() {
        let x = e(4, &[0, 1]);
        let y = e(4, &[2, 3]);
        let (z1, z2) = two_extensions(&x, &y, &e(4, &[0, 2])).unwrap();
        assert_eq!((z1, z2), (e(4, &[1, 2]), e(4, &[0, 3])));
        let (w1, w2) = two_extensions(&x, &y, &e(4, &[1, 3])).unwrap();
        assert_eq!((w1, w2), (e(4, &[0, 3]), e(4, &[1, 2])));
        // Non-compatible pair rejected.
        let (a, b) = anc_pair(4);
        assert!(two_extensions(&a, &b, &e(4, &[0, 3])).is_err());
    }

    #[test]
    fn unique_partner_examples() {
        let (x, y) = anc_pair(5);
        let partner = unique_partner(&x, &y, &e(5, &[0, 3])).unwrap();
        assert_eq!(partner, e(5, &[0, 4]));
        let symmetric = unique_partner(&x, &y, &e(5, &[0, 4])).unwrap();
        assert_eq!(symmetric, e(5, &[0, 3]));
        // Ambient must be k + 3.
        let (x4, y4) = anc_pair(4);
        assert!(unique_partner(&x4, &y4, &e(4, &[0, 3])).is_err());
    }

    #[test]
    fn compatibility_decision_examples() {
        // Orthogonal disjoint pair: compatible.
        let x = e(4, &[0, 1]);
        let y = e(4, &[2, 3]);
        assert!(matches!(
            decide_compatibility_by_geodesics(&x, &y, 16).unwrap(),
            CompatibilityDecision::Compatible
        ));
        // Disjoint non-orthogonal pair: a two-step witness geodesic.
        let y_bad = sp(4, &[&["1", "0", "1", "0"], &["0", "0", "0", "1"]]);
        match decide_compatibility_by_geodesics(&x, &y_bad, 16).unwrap() {
            CompatibilityDecision::NonCompatibleWitness(path) => {
                assert_eq!(path.len(), 2);
                assert_eq!(path.first_non_ortho_step().unwrap(), Some(0));
                assert_eq!(grassmann_distance(&x, &y_bad).unwrap(), 2);
            }
            other => panic!("expected witness, got {other:?}"),
        }
        // Adjacent non-compatible: the edge itself is the witness.
        let (a, b) = anc_pair(4);
        match decide_compatibility_by_geodesics(&a, &b, 16).unwrap() {
            CompatibilityDecision::NonCompatibleWitness(path) => {
                assert_eq!(path.len(), 1);
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn decision_agrees_with_direct_predicate_on_random_pairs() {
        let mut checked = 0;
        for seed in 0..30u64 {
            for &(n, k, m, compat) in &[
                (4, 2, 0, true),
                (4, 2, 0, false),
                (5, 2, 1, false),
                (6, 3, 1, true),
                (6, 3, 0, false),
                (6, 2, 0, true),
            ] {
                let Ok((x, y)) = gen::pair_with_intersection(n, k, m, compat, 2, seed)
                else {
                    continue;
                };
                let decision = decide_compatibility_by_geodesics(&x, &y, 64).unwrap();
                match decision {
                    CompatibilityDecision::Compatible => assert!(compat),
                    CompatibilityDecision::NonCompatibleWitness(path) => {
                        assert!(!compat);
                        assert!(path.first_non_ortho_step().unwrap().is_some());
                    }
                }
                checked += 1;
            }
            if checked > 40 {
                break;
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn distance2_classification_examples() {
        // Wide regime: many neighbors, many extensions each.
        let (x6, y6) = anc_pair(6);
        let ev = classify_distance2(&x6, &y6, 4).unwrap();
        assert_eq!(ev.class, Distance2Class::AdjacentNonCompatible);
        assert!(ev
            .neighbor_profiles
            .iter()
            .all(|p| matches!(p, ExtensionProfile::AtLeast(c) if *c >= 4)));
        // Compatible codimension 2: exactly two extensions per neighbor.
        let ev2 = classify_distance2(&e(4, &[0, 1]), &e(4, &[2, 3]), 4).unwrap();
        assert_eq!(ev2.class, Distance2Class::CompatibleCodim2);
        assert!(ev2
            .neighbor_profiles
            .iter()
            .all(|p| matches!(p, ExtensionProfile::ExactlyTwo)));
        assert!(!ev2.neighbor_profiles.is_empty());
        // Narrow regime: exactly one partner per neighbor.
        let (x5, y5) = anc_pair(5);
        let ev3 = classify_distance2(&x5, &y5, 4).unwrap();
        assert_eq!(ev3.class, Distance2Class::AdjacentNonCompatible);
        assert!(ev3
            .neighbor_profiles
            .iter()
            .all(|p| matches!(p, ExtensionProfile::ExactlyOne)));
        // Non-compatible codimension-2: direct classification, no
        // constructive profile.
        let xq = sp(4, &[&["0", "0", "1", "0"], &["0", "1", "0", "1"]]);
        let yq = sp(4, &[&["1", "0", "-1", "0"], &["0", "1", "0", "-1"]]);
        let ev4 = classify_distance2(&xq, &yq, 4).unwrap();
        assert_eq!(ev4.class, Distance2Class::NonCompatibleCodim2);
        assert!(ev4.neighbor_profiles.is_empty());
        // Ortho-adjacent pairs are rejected (distance 1).
        assert!(classify_distance2(&e(4, &[0, 1]), &e(4, &[0, 2]), 4).is_err());
    }

    #[test]
    fn ortho_star_and_top_sizes() {
        let basis = OrthoBasis::standard(4);
        let star = ortho_star_elements(&e(4, &[0]), &basis).unwrap();
        assert_eq!(star.len(), 3);
        assert!(star.contains(&e(4, &[0, 1])));
        assert!(star.contains(&e(4, &[0, 2])));
        assert!(star.contains(&e(4, &[0, 3])));
        let top = ortho_top_elements(&e(4, &[0, 1, 2]), &basis).unwrap();
        assert_eq!(top.len(), 3);
        assert!(top.contains(&e(4, &[0, 1])));
        assert!(top.contains(&e(4, &[0, 2])));
        assert!(top.contains(&e(4, &[1, 2])));
    }

    #[test]
    fn ortho_star_under_rotated_basis() {
        let basis = OrthoBasis::standard(4).rotate_plane(1, 2).unwrap();
        let s = Subspace::line(basis.vector(1).to_vec()).unwrap();
        let star = ortho_star_elements(&s, &basis).unwrap();
        assert_eq!(star.len(), 3);
        // Defining subspace not spanned by a basis subset is rejected.
        assert!(ortho_star_elements(&e(4, &[1]), &basis).is_err());
    }

    #[test]
    fn clique_intersection_spot_checks() {
        let std6 = OrthoBasis::standard(6);
        let s = e(6, &[0, 1]);
        let star1 = ortho_star_elements(&s, &std6).unwrap();
        // Same core, one rotated plane kills two elements: m = k-1 = 2.
        let rot = std6.rotate_plane(2, 3).unwrap();
        let star2 = ortho_star_elements(&s, &rot).unwrap();
        assert_eq!(clique_intersection_size(&star1, &star2), 2);
        // Distinct cores share at most one element.
        let other = ortho_star_elements(&e(6, &[0, 2]), &std6).unwrap();
        assert!(clique_intersection_size(&star1, &other) <= 1);
        // Star and top sharing the flag meet in two elements.
        let top = ortho_top_elements(&e(6, &[0, 1, 2, 3]), &std6).unwrap();
        assert_eq!(clique_intersection_size(&star1, &top), 2);
    }

    #[test]
    fn witness_pair_forces_compatibility() {
        // Positive direction: basis-spanned witnesses exist for compatible
        // codimension-2 pairs.
        for seed in 0..8u64 {
            let basis = gen::random_orthogonal_basis(6, 2, seed).unwrap();
            let x = basis.subset_span(&[0, 1, 2]);
            let y = basis.subset_span(&[0, 3, 4]);
            let z = basis.subset_span(&[0, 1, 3]);
            let zp = basis.subset_span(&[0, 2, 3]);
            assert!(is_ortho_adjacent(&z, &zp).unwrap());
            for w in [&z, &zp] {
                assert!(is_ortho_adjacent(w, &x).unwrap());
                assert!(is_ortho_adjacent(w, &y).unwrap());
            }
            assert!(is_compatible(&x, &y).unwrap());
        }
        // Sampled converse: non-compatible codimension-2 pairs never admit
        // an ortho-adjacent witness pair among constructed candidates.
        for seed in 0..6u64 {
            let Ok((x, y)) = gen::pair_with_intersection(5, 2, 0, false, 2, seed) else {
                continue;
            };
            let mut rng = gen::rng_from_seed(seed ^ 0xBEEF);
            let mut neighbors = Vec::new();
            for _ in 0..24 {
                let h = gen::random_hyperplane_of(&mut rng, &x, 2).unwrap();
                let l = gen::random_line_in(&mut rng, &x.orthocomplement(), 2).unwrap();
                let z = h.sum(&l).unwrap();
                if is_ortho_adjacent(&z, &y).unwrap() {
                    neighbors.push(z);
                }
            }
            for (i, z) in neighbors.iter().enumerate() {
                for zp in &neighbors[..i] {
                    assert!(!is_ortho_adjacent(z, zp).unwrap());
                }
            }
        }
    }

    #[test]
    fn dim4_perp_invariance_of_ortho_adjacency() {
        for seed in 0..10u64 {
            let mut rng = gen::rng_from_seed(seed);
            let x = gen::random_subspace_rng(&mut rng, 4, 2, 2).unwrap();
            let y = gen::random_subspace_rng(&mut rng, 4, 2, 2).unwrap();
            assert_eq!(
                is_ortho_adjacent(&x, &y).unwrap(),
                is_ortho_adjacent(&x, &y.orthocomplement()).unwrap()
            );
        }
        let (a, b) = anc_pair(4);
        assert_eq!(
            is_ortho_adjacent(&a, &b).unwrap(),
            is_ortho_adjacent(&a, &b.orthocomplement()).unwrap()
        );
    }

    #[test]
    fn neighbor_families_listing() {
        let (x, y) = anc_pair(6);
        let fams = common_neighbor_families(&x, &y, &Subspace::full(6)).unwrap();
        assert_eq!(fams.len(), 2);
        assert!(fams
            .iter()
            .any(|f| f.kind == NeighborKind::Type1 && f.parameter_space_dim == 3));
        assert!(fams
            .iter()
            .any(|f| f.kind == NeighborKind::Type2 && f.parameter_space_dim == 1));
    }
}
