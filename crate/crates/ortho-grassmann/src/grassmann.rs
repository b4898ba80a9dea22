//! The Grassmann graph: exact distance, geodesic construction and
//! validation, triangle classification, stars and tops, and finite-universe
//! BFS used as an independent distance oracle.

use std::collections::VecDeque;

use itertools::Itertools;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen::rng_from_seed;
use crate::matrix::ExactMatrix;
use crate::subspace::{is_adjacent, is_compatible, is_ortho_adjacent, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Grassmann,
    #[serde(rename = "ortho")]
    OrthoGrassmann,
}

impl GraphKind {
    pub fn edge(&self, x: &Subspace, y: &Subspace) -> Result<bool> {
        match self {
            GraphKind::Grassmann => is_adjacent(x, y),
            GraphKind::OrthoGrassmann => is_ortho_adjacent(x, y),
        }
    }
}

/// Distance in the Grassmann graph: `k - dim(X∩Y)`.
pub fn grassmann_distance(x: &Subspace, y: &Subspace) -> Result<usize> {
    if x.ambient_dim() != y.ambient_dim() {
        return Err(Error::AmbientMismatch(x.ambient_dim(), y.ambient_dim()));
    }
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} vs {}",
            x.dim(),
            y.dim()
        )));
    }
    Ok(x.dim() - x.intersect(y)?.dim())
}

/// A validated shortest path. Construction checks every consecutive edge
/// under the graph kind and that the length equals the endpoint distance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicPath {
    vertices: Vec<Subspace>,
    kind: GraphKind,
}

impl GeodesicPath {
    pub fn new(vertices: Vec<Subspace>, kind: GraphKind) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Precondition("empty path".into()));
        }
        for pair in vertices.windows(2) {
            if !kind.edge(&pair[0], &pair[1])? {
                return Err(Error::Precondition(
                    "consecutive path vertices are not an edge".into(),
                ));
            }
        }
        let len = vertices.len() - 1;
        let first = &vertices[0];
        let last = &vertices[vertices.len() - 1];
        let expected = match kind {
            GraphKind::Grassmann => grassmann_distance(first, last)?,
            GraphKind::OrthoGrassmann => ortho_distance_if_certifiable(first, last)?,
        };
        if len != expected {
            return Err(Error::Precondition(format!(
                "path length {len} differs from graph distance {expected}"
            )));
        }
        Ok(GeodesicPath { vertices, kind })
    }

    pub fn vertices(&self) -> &[Subspace] {
        &self.vertices
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn endpoints(&self) -> (&Subspace, &Subspace) {
        (&self.vertices[0], &self.vertices[self.vertices.len() - 1])
    }

    /// Index of the first consecutive pair that is not ortho-adjacent, if any.
    pub fn first_non_ortho_step(&self) -> Result<Option<usize>> {
        for (i, pair) in self.vertices.windows(2).enumerate() {
            if !is_ortho_adjacent(&pair[0], &pair[1])? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

/// Distance in the ortho-Grassmann graph in the two certifiable regimes:
/// compatible endpoints (equal to the Grassmann distance) and adjacent
/// non-compatible endpoints (equal to 2).
fn ortho_distance_if_certifiable(x: &Subspace, y: &Subspace) -> Result<usize> {
    if is_compatible(x, y)? {
        return grassmann_distance(x, y);
    }
    if is_adjacent(x, y)? {
        return Ok(2);
    }
    Err(Error::CannotCertifyGeodesic(
        "non-compatible endpoints at Grassmann distance > 1".into(),
    ))
}

/// Deterministic complement rows: basis rows of `x` that extend `base` to
/// all of `x`, taken in basis order.
fn complement_rows(x: &Subspace, base: &Subspace) -> Vec<Vec<crate::scalar::GaussianRational>> {
    let mut current = base.basis().clone();
    let mut picked = Vec::new();
    let mut rank = base.dim();
    for row in x.basis_rows() {
        let candidate = current
            .vstack(&ExactMatrix::from_rows(vec![row.to_vec()], x.ambient_dim()).unwrap())
            .unwrap();
        if candidate.rank() > rank {
            rank += 1;
            picked.push(row.to_vec());
            current = candidate;
        }
        if rank == x.dim() {
            break;
        }
    }
    picked
}

fn geodesic_between(
    x: &Subspace,
    y: &Subspace,
    shuffle_seed: Option<u64>,
) -> Result<GeodesicPath> {
    if x == y {
        return Err(Error::Precondition("geodesic endpoints coincide".into()));
    }
    let core = x.intersect(y)?;
    let mut from_x = complement_rows(x, &core);
    let mut from_y = complement_rows(y, &core);
    debug_assert_eq!(from_x.len(), from_y.len());
    if let Some(seed) = shuffle_seed {
        let mut rng = rng_from_seed(seed);
        from_x.shuffle(&mut rng);
        from_y.shuffle(&mut rng);
    }
    let d = from_x.len();
    let mut vertices = Vec::with_capacity(d + 1);
    let span = x.sum(y)?;
    for i in 0..=d {
        // Swap one direction of X for one of Y per step.
        let mut rows: Vec<Vec<crate::scalar::GaussianRational>> =
            core.basis_rows().map(|r| r.to_vec()).collect();
        rows.extend(from_y[..i].iter().cloned());
        rows.extend(from_x[i..].iter().cloned());
        let v = Subspace::span_rows(rows, x.ambient_dim())?;
        assert_eq!(v.dim(), x.dim(), "geodesic vertex dropped dimension");
        assert!(
            core.is_subspace_of(&v)? && v.is_subspace_of(&span)?,
            "geodesic vertex escapes the interval [X∩Y, X+Y]"
        );
        vertices.push(v);
    }
    GeodesicPath::new(vertices, GraphKind::Grassmann)
}

/// A Grassmann geodesic from `x` to `y` with deterministic pivot order:
/// the first remaining basis direction of X is exchanged for the first
/// remaining direction of Y at every step.
pub fn build_geodesic(x: &Subspace, y: &Subspace) -> Result<GeodesicPath> {
    geodesic_between(x, y, None)
}

/// Randomised variant: the seed permutes the exchange order.
pub fn build_geodesic_seeded(x: &Subspace, y: &Subspace, seed: u64) -> Result<GeodesicPath> {
    geodesic_between(x, y, Some(seed))
}

/// A geodesic from `x` to `y` through the waypoint `z`; errors unless
/// `d(x,z) + d(z,y) = d(x,y)`.
pub fn build_geodesic_through(x: &Subspace, z: &Subspace, y: &Subspace) -> Result<GeodesicPath> {
    let total = grassmann_distance(x, y)?;
    let first = grassmann_distance(x, z)?;
    let second = grassmann_distance(z, y)?;
    if first + second != total {
        return Err(Error::Precondition(format!(
            "not a geodesic waypoint: d(X,Z)={first}, d(Z,Y)={second}, d(X,Y)={total}"
        )));
    }
    let mut vertices = Vec::new();
    if first > 0 {
        vertices.extend(build_geodesic(x, z)?.vertices().to_vec());
    } else {
        vertices.push(x.clone());
    }
    if second > 0 {
        let tail = build_geodesic(z, y)?;
        vertices.extend(tail.vertices()[1..].to_vec());
    }
    GeodesicPath::new(vertices, GraphKind::Grassmann)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriangleType {
    /// Common intersection of dimension k-1 only.
    T1Only,
    /// Common span of dimension k+1 only.
    T2Only,
    Both,
}

/// Classifies a mutually adjacent triple by which of the two clique
/// conditions holds; at least one always does, which is asserted.
pub fn triangle_classify(x: &Subspace, y: &Subspace, z: &Subspace) -> Result<TriangleType> {
    for (a, b) in [(x, y), (x, z), (y, z)] {
        if !is_adjacent(a, b)? {
            return Err(Error::Precondition("triple is not mutually adjacent".into()));
        }
    }
    let k = x.dim();
    let triple_meet = x.intersect(y)?.intersect(z)?.dim();
    let triple_span = x.sum(y)?.sum(z)?.dim();
    let t1 = triple_meet == k - 1;
    let t2 = triple_span == k + 1;
    assert!(
        t1 || t2,
        "mutually adjacent triple satisfies neither clique condition"
    );
    if !t1 {
        assert_eq!(triple_meet, k - 2, "T1 fails but meet is not k-2");
        assert!(k > 1);
    }
    if !t2 {
        assert_eq!(triple_span, k + 2, "T2 fails but span is not k+2");
        assert!(k < x.ambient_dim() - 1);
    }
    Ok(match (t1, t2) {
        (true, true) => TriangleType::Both,
        (true, false) => TriangleType::T1Only,
        (false, true) => TriangleType::T2Only,
        (false, false) => unreachable!(),
    })
}

/// Membership in the star of a (k-1)-dimensional subspace `s`.
pub fn star_contains(s: &Subspace, x: &Subspace) -> Result<bool> {
    if s.dim() + 1 != x.dim() {
        return Err(Error::DimensionMismatch(format!(
            "star core dim {} vs vertex dim {}",
            s.dim(),
            x.dim()
        )));
    }
    s.is_subspace_of(x)
}

/// Membership in the top of a (k+1)-dimensional subspace `u`.
pub fn top_contains(u: &Subspace, x: &Subspace) -> Result<bool> {
    if x.dim() + 1 != u.dim() {
        return Err(Error::DimensionMismatch(format!(
            "top span dim {} vs vertex dim {}",
            u.dim(),
            x.dim()
        )));
    }
    x.is_subspace_of(u)
}

/// An explicit finite vertex set with one of the two edge relations,
/// providing a BFS oracle independent of the distance formulas.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "UniverseJson", into = "UniverseJson")]
pub struct FiniteUniverse {
    vertices: Vec<Subspace>,
    edge_kind: GraphKind,
    #[serde(skip)]
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct UniverseJson {
    edges: GraphKind,
    vertices: Vec<Subspace>,
}

impl TryFrom<UniverseJson> for FiniteUniverse {
    type Error = Error;
    fn try_from(j: UniverseJson) -> Result<Self> {
        FiniteUniverse::new(j.vertices, j.edges)
    }
}

impl From<FiniteUniverse> for UniverseJson {
    fn from(u: FiniteUniverse) -> Self {
        UniverseJson {
            edges: u.edge_kind,
            vertices: u.vertices,
        }
    }
}

impl FiniteUniverse {
    /// Errors on duplicate vertices (canonical equality).
    pub fn new(vertices: Vec<Subspace>, edge_kind: GraphKind) -> Result<Self> {
        for (i, v) in vertices.iter().enumerate() {
            for w in &vertices[..i] {
                if v == w {
                    return Err(Error::DuplicateVertex);
                }
            }
        }
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for i in 0..vertices.len() {
            for j in 0..i {
                if edge_kind.edge(&vertices[i], &vertices[j])? {
                    adjacency[i].push(j);
                    adjacency[j].push(i);
                }
            }
        }
        Ok(FiniteUniverse {
            vertices,
            edge_kind,
            adjacency,
        })
    }

    /// All k-subsets of the standard basis of C^n; with Grassmann edges this
    /// is the Johnson graph J(n, k).
    pub fn johnson(n: usize, k: usize, edge_kind: GraphKind) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::Infeasible(format!("J({n},{k})")));
        }
        let vertices = (0..n)
            .combinations(k)
            .map(|idx| Subspace::coordinate(n, &idx))
            .collect();
        Self::new(vertices, edge_kind)
    }

    pub fn vertices(&self) -> &[Subspace] {
        &self.vertices
    }

    pub fn edge_kind(&self) -> GraphKind {
        self.edge_kind
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, x: &Subspace) -> Option<usize> {
        self.vertices.iter().position(|v| v == x)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// BFS shortest-path length; `None` when unreachable.
    pub fn bfs_distance(&self, x: &Subspace, y: &Subspace) -> Result<Option<usize>> {
        let start = self.index_of(x).ok_or(Error::VertexNotInUniverse)?;
        let goal = self.index_of(y).ok_or(Error::VertexNotInUniverse)?;
        if start == goal {
            return Ok(Some(0));
        }
        let mut dist = vec![usize::MAX; self.len()];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    if w == goal {
                        return Ok(Some(dist[w]));
                    }
                    queue.push_back(w);
                }
            }
        }
        Ok(None)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.len()
    }

    /// Graphviz DOT rendering for inspection.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph universe {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let label: Vec<String> = v
                .basis_rows()
                .map(|r| {
                    r.iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect();
            out.push_str(&format!("  v{i} [label=\"[{}]\"];\n", label.join(" | ")));
        }
        for (i, nbrs) in self.adjacency.iter().enumerate() {
            for &j in nbrs {
                if i < j {
                    out.push_str(&format!("  v{i} -- v{j};\n"));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}
