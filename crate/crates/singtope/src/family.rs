//! The three-parameter splice family and its recognizer.
//!
//! For `k ≥ 1` the member `(n, k, l)` is a star: a central vertex of weight
//! `-(n+1)` carrying `n` arms of length `l·k` made of `-2`s, one arm of
//! length `k` that is all `-2`s except for a far end of weight `-(l+1)`,
//! and one arm of length `l` whose first vertex has weight `-(k+1)` and the
//! rest `-2`. For `k = 0` (requires `n > l`) it degenerates to the chain
//! `(-2) … (-2) (-1) (-(n+1))` with `l-1` leading `-2`s.

use crate::canonical::canonical_form;
use crate::graph::{blow_down, Vertex, WeightedGraph};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("invalid family parameters (n={n}, k={k}, l={l}): requires n ≥ 1, l ≥ 1, and n > l whenever k = 0")]
    InvalidParams { n: u32, k: u32, l: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub n: u32,
    pub k: u32,
    pub l: u32,
}

impl FamilyParams {
    pub fn new(n: u32, k: u32, l: u32) -> Result<Self, FamilyError> {
        if n < 1 || l < 1 || (k == 0 && n <= l) {
            return Err(FamilyError::InvalidParams { n, k, l });
        }
        Ok(FamilyParams { n, k, l })
    }

    /// Number of vertices of the generated graph.
    pub fn vertex_count(&self) -> usize {
        let (n, k, l) = (self.n as usize, self.k as usize, self.l as usize);
        if k == 0 {
            1 + l
        } else {
            1 + n * l * k + k + l
        }
    }
}

impl std::fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.n, self.k, self.l)
    }
}

/// Builds the member `(n, k, l)`. The center always has id 0; arms are laid
/// out consecutively, the `n` plain arms first, then the `-(l+1)`-tipped
/// arm, then the `-(k+1)`-headed arm.
pub fn generate(params: &FamilyParams) -> WeightedGraph {
    let (n, k, l) = (params.n as i64, params.k as i64, params.l as i64);
    let mut vertices = vec![Vertex::new(0, -(n + 1))];
    let mut edges = Vec::new();

    if k == 0 {
        // (-2) x (l-1) chain, then (-1), attached to the center
        vertices.push(Vertex::new(1, -1));
        edges.push((0, 1));
        for _ in 0..(l - 1) as usize {
            let id = vertices.len();
            vertices.push(Vertex::new(id, -2));
            edges.push((id - 1, id));
        }
    } else {
        let mut arm = |weights: Vec<i64>| {
            let mut prev = 0usize;
            for w in weights {
                let id = vertices.len();
                vertices.push(Vertex::new(id, w));
                edges.push((prev, id));
                prev = id;
            }
        };
        for _ in 0..n {
            arm(vec![-2; (l * k) as usize]);
        }
        let mut tipped = vec![-2; k as usize];
        *tipped.last_mut().expect("k ≥ 1") = -(l + 1);
        arm(tipped);
        let mut headed = vec![-2; l as usize];
        headed[0] = -(k + 1);
        arm(headed);
    }

    WeightedGraph::new(vertices, edges).expect("family members are valid trees")
}

pub const DEFAULT_RECOGNIZE_BOUND: usize = 4;

/// Finds the lexicographically smallest `(n, k, l)` whose member matches
/// `g` up to blow-down and relabelling, or `None`.
pub fn recognize(g: &WeightedGraph) -> Option<FamilyParams> {
    recognize_bounded(g, DEFAULT_RECOGNIZE_BOUND)
}

/// [`recognize`] with an explicit search bound: candidate parameters whose
/// member would have more than `bound · |g| + 8` vertices are not tried.
///
/// A reduced single vertex of weight `-p` is the reduced `k = 0` member for
/// every `(p+l-1, 0, l)`, least of which is `(p, 0, 1)`. Members with
/// `k ≥ 1` contain no `-1` vertices, so they can only match a reduced graph
/// of exactly their own size; that pins `n·l·k + k + l` and leaves a small
/// candidate set to confirm by canonical form.
pub fn recognize_bounded(g: &WeightedGraph, bound: usize) -> Option<FamilyParams> {
    let reduced = blow_down(g).ok()?;
    let rn = reduced.vertex_count();
    let cap = bound.saturating_mul(g.vertex_count()).saturating_add(8);

    if rn == 1 {
        let p = -reduced.weight(0);
        if p >= 2 {
            return FamilyParams::new(p as u32, 0, 1).ok();
        }
        return None;
    }

    let reduced_key = canonical_form(&reduced).ok()?;
    let mut candidates = Vec::new();
    for k in 1..rn {
        for l in 1..rn {
            if k + l >= rn {
                continue;
            }
            let rest = rn - 1 - k - l;
            if rest == 0 || rest % (k * l) != 0 {
                continue;
            }
            let params = FamilyParams {
                n: (rest / (k * l)) as u32,
                k: k as u32,
                l: l as u32,
            };
            if params.vertex_count() <= cap {
                candidates.push(params);
            }
        }
    }
    candidates.sort();
    candidates.into_iter().find(|params| {
        canonical_form(&generate(params)).map(|key| key == reduced_key).unwrap_or(false)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::star_decomposition;

    #[test]
    fn param_validation() {
        assert!(FamilyParams::new(1, 1, 1).is_ok());
        assert!(FamilyParams::new(3, 0, 2).is_ok());
        assert!(matches!(FamilyParams::new(2, 0, 2), Err(FamilyError::InvalidParams { .. })));
        assert!(matches!(FamilyParams::new(2, 0, 3), Err(FamilyError::InvalidParams { .. })));
        assert!(matches!(FamilyParams::new(0, 1, 1), Err(FamilyError::InvalidParams { .. })));
        assert!(matches!(FamilyParams::new(1, 1, 0), Err(FamilyError::InvalidParams { .. })));
    }

    #[test]
    fn the_smallest_member_is_d4() {
        let g = generate(&FamilyParams::new(1, 1, 1).unwrap());
        let d4 = WeightedGraph::parse("star center=-2 arms=[-2|-2|-2]").unwrap();
        assert_eq!(canonical_form(&g).unwrap(), canonical_form(&d4).unwrap());
    }

    #[test]
    fn member_2_1_2_has_the_documented_shape() {
        let g = generate(&FamilyParams::new(2, 1, 2).unwrap());
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.weight(0), -3);
        let star = star_decomposition(&g).unwrap();
        assert_eq!(star.center, 0);
        let mut arms: Vec<Vec<i64>> =
            (0..star.arms.len()).map(|i| star.arm_weights(&g, i)).collect();
        arms.sort();
        assert_eq!(arms, vec![vec![-3], vec![-2, -2], vec![-2, -2], vec![-2, -2]]);
    }

    #[test]
    fn member_2_1_3_has_the_documented_shape() {
        let g = generate(&FamilyParams::new(2, 1, 3).unwrap());
        let star = star_decomposition(&g).unwrap();
        assert_eq!(g.weight(star.center), -3);
        let mut arms: Vec<Vec<i64>> =
            (0..star.arms.len()).map(|i| star.arm_weights(&g, i)).collect();
        arms.sort();
        assert_eq!(
            arms,
            vec![vec![-4], vec![-2, -2, -2], vec![-2, -2, -2], vec![-2, -2, -2]]
        );
    }

    #[test]
    fn degenerate_members_are_chains() {
        let g = generate(&FamilyParams::new(2, 0, 1).unwrap());
        assert_eq!(g.vertex_count(), 2);
        assert_eq!((g.weight(0), g.weight(1)), (-3, -1));

        let h = generate(&FamilyParams::new(5, 0, 3).unwrap());
        assert_eq!(h.vertex_count(), 4);
        let star = star_decomposition(&h).unwrap();
        let mut weights: Vec<i64> = (0..4).map(|v| h.weight(v)).collect();
        weights.sort();
        assert_eq!(weights, vec![-6, -2, -2, -1]);
        assert!(star.arms.len() <= 2);
    }

    #[test]
    fn vertex_counts_match_the_closed_form() {
        for (n, k, l) in [(1u32, 1u32, 1u32), (2, 1, 2), (3, 2, 2), (5, 4, 4)] {
            let params = FamilyParams::new(n, k, l).unwrap();
            assert_eq!(generate(&params).vertex_count(), params.vertex_count());
        }
        assert_eq!(generate(&FamilyParams::new(4, 0, 2).unwrap()).vertex_count(), 3);
    }

    #[test]
    fn recognize_round_trips_small_members() {
        for n in 1..=3 {
            for k in 1..=2 {
                for l in 1..=2 {
                    let params = FamilyParams::new(n, k, l).unwrap();
                    let found = recognize(&generate(&params)).unwrap();
                    // the recognizer may return an equivalent smaller label
                    let same = canonical_form(&generate(&found)).unwrap()
                        == canonical_form(&blow_down(&generate(&params)).unwrap()).unwrap();
                    assert!(same, "({n},{k},{l}) came back as {found}");
                }
            }
        }
    }

    #[test]
    fn recognize_prefers_the_lexicographically_smallest_label() {
        // (n, k, 1) and (n, 1, k) generate the same graph
        let g = generate(&FamilyParams::new(3, 2, 1).unwrap());
        assert_eq!(recognize(&g), Some(FamilyParams { n: 3, k: 1, l: 2 }));
        let h = generate(&FamilyParams::new(3, 1, 2).unwrap());
        assert_eq!(recognize(&h), Some(FamilyParams { n: 3, k: 1, l: 2 }));
    }

    #[test]
    fn recognize_single_vertices() {
        for p in 2..=6 {
            let g = WeightedGraph::new(vec![Vertex::new(0, -p)], vec![]).unwrap();
            assert_eq!(recognize(&g), Some(FamilyParams { n: p as u32, k: 0, l: 1 }));
        }
        // a single -1 vertex is no singularity at all
        let smooth = WeightedGraph::new(vec![Vertex::new(0, -1)], vec![]).unwrap();
        assert_eq!(recognize(&smooth), None);
    }

    #[test]
    fn recognize_rejects_near_misses() {
        let e8 = WeightedGraph::parse("star center=-2 arms=[-2|-2,-2|-2,-2,-2,-2]").unwrap();
        assert_eq!(recognize(&e8), None);
        let a2 = WeightedGraph::parse("vertices: 2\nv 0 -2\nv 1 -2\ne 0 1\n").unwrap();
        assert_eq!(recognize(&a2), None);
    }
}
