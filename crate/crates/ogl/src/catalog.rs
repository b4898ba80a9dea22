//! The registry of verifiable claims: one entry per campaign, with the
//! claim text embedded in reports and the command template shown by
//! `list-lemmas`.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct LemmaInfo {
    pub id: &'static str,
    /// The statement the campaign checks, in library terms.
    pub claim: &'static str,
    pub command: &'static str,
    pub default_trials: usize,
}

pub const CATALOG: &[LemmaInfo] = &[
    LemmaInfo {
        id: "geodesic-count-dim4",
        claim: "for adjacent non-compatible planes in C^4 there are precisely two \
                common ortho-neighbors, and they are mutually orthogonal",
        command: "ogl verify geodesic-count-dim4 --trials 500 --seed 7",
        default_trials: 500,
    },
    LemmaInfo {
        id: "common-neighbors",
        claim: "an adjacent non-compatible pair has two parameterised families of \
                common ortho-neighbors (a line orthogonal to the span, or a \
                hyperplane of the intersection), yielding any requested number of \
                distinct witnesses outside the minimal regime",
        command: "ogl verify common-neighbors --trials 60 --witness-budget 5 --seed 7",
        default_trials: 60,
    },
    LemmaInfo {
        id: "clique-sizes",
        claim: "with respect to an orthogonal basis, every ortho-top has exactly \
                k+1 elements and every ortho-star exactly n-k+1, and each is a \
                clique under ortho-adjacency",
        command: "ogl verify clique-sizes --trials 20 --seed 7",
        default_trials: 20,
    },
    LemmaInfo {
        id: "clique-intersections",
        claim: "for n=6, k=3: two ortho-stars on the same core realise every \
                intersection size in {0,1,2}; ortho-stars on distinct cores meet \
                in at most one element; an ortho-star and an ortho-top realise \
                every size in {0,1,2}",
        command: "ogl verify clique-intersections --seed 7",
        default_trials: 12,
    },
    LemmaInfo {
        id: "two-extensions",
        claim: "for a compatible pair meeting in codimension 2 and any common \
                ortho-neighbor, exactly two subspaces are ortho-adjacent to all \
                three; exhaustion over the shared-basis universe finds no third",
        command: "ogl verify two-extensions --trials 300 --seed 7",
        default_trials: 300,
    },
    LemmaInfo {
        id: "unique-partner",
        claim: "when the ambient dimension is k+3, each outside-type common \
                neighbor of an adjacent non-compatible pair admits precisely one \
                third subspace ortho-adjacent to all three, and the inside-type \
                candidates fail adjacency",
        command: "ogl verify unique-partner --trials 200 --seed 7",
        default_trials: 200,
    },
    LemmaInfo {
        id: "compat-geodesics",
        claim: "two equal-dimension subspaces commute exactly when every shortest \
                path between them in the Grassmann graph is also a shortest path \
                in the ortho-Grassmann graph; non-compatibility always yields an \
                explicit violating geodesic",
        command: "ogl verify compat-geodesics --trials 500 --seed 7",
        default_trials: 500,
    },
    LemmaInfo {
        id: "distance-formula",
        claim: "on the Johnson universes J(6,3) and J(5,2), BFS distance equals \
                k minus the intersection dimension for every vertex pair",
        command: "ogl verify distance-formula --seed 7",
        default_trials: 2,
    },
    LemmaInfo {
        id: "dim4-exceptional",
        claim: "swapping a perp-closed family of planes in C^4 with their \
                orthocomplements preserves ortho-adjacency in both directions \
                but breaks plain adjacency, so it is an automorphism of the \
                ortho graph that no unitary or anti-unitary operator induces",
        command: "ogl verify dim4-exceptional --trials 10 --witness-budget 200 --seed 7",
        default_trials: 10,
    },
    LemmaInfo {
        id: "ops-adjacency-equiv",
        claim: "for operators with the same spectrum and multiplicities, the \
                matrix-level adjacency test (rank-2 difference with invariant \
                kernel and image) agrees with the eigenspace-level test (exactly \
                two labels differ, adjacently) on every pair",
        command: "ogl verify ops-adjacency-equiv --trials 300 --seed 7",
        default_trials: 300,
    },
    LemmaInfo {
        id: "ops-six-bound",
        claim: "operator pairs whose eigenspaces differ in three or four labels \
                admit at most six common commutatively-adjacent operators, each \
                verified against both inputs",
        command: "ogl verify ops-six-bound --trials 200 --seed 7",
        default_trials: 200,
    },
    LemmaInfo {
        id: "spectrum-swap",
        claim: "relabeling the spectrum is an isomorphism preserving both \
                adjacency and commutative adjacency, and every non-commuting \
                adjacent pair admits a commutatively adjacent midpoint",
        command: "ogl verify spectrum-swap --trials 200 --seed 7",
        default_trials: 200,
    },
    LemmaInfo {
        id: "ops-connectivity",
        claim: "the commutative-adjacency graph on a conjugacy class is \
                connected: basis-spanned finite universes are connected and \
                midpoints bridge non-commuting adjacent pairs",
        command: "ogl verify ops-connectivity --trials 40 --seed 7",
        default_trials: 40,
    },
];

pub fn find(id: &str) -> Option<&'static LemmaInfo> {
    CATALOG.iter().find(|info| info.id == id)
}
