//! Canonical byte keys deciding weighted-tree isomorphism.
//!
//! Two graphs get the same key iff they are isomorphic as weighted,
//! genus-labelled trees. Paths and stars are encoded directly (so they work
//! at any size); other trees go through a rooted canonical code minimized
//! over the tree centers and are capped at [`GENERAL_CANONICAL_CAP`]
//! vertices.

use crate::graph::{star_decomposition, GraphError, WeightedGraph};
use std::fmt;

pub const GENERAL_CANONICAL_CAP: usize = 16;

/// Opaque, totally ordered canonicalization result.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", String::from_utf8_lossy(&self.0))
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", String::from_utf8_lossy(&self.0))
    }
}

fn label(g: &WeightedGraph, v: usize) -> String {
    format!("{}g{}", g.weight(v), g.genus(v))
}

fn sequence_key(g: &WeightedGraph, vs: &[usize]) -> String {
    let labels: Vec<String> = vs.iter().map(|&v| label(g, v)).collect();
    labels.join(";")
}

fn rooted_code(g: &WeightedGraph, v: usize, parent: Option<usize>) -> String {
    let mut children: Vec<String> = g
        .neighbors(v)
        .iter()
        .filter(|&&u| Some(u) != parent)
        .map(|&u| rooted_code(g, u, Some(v)))
        .collect();
    children.sort();
    format!("({}{})", label(g, v), children.concat())
}

fn tree_centers(g: &WeightedGraph) -> Vec<usize> {
    let n = g.vertex_count();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = (0..n).map(|v| g.valence(v)).collect();
    let mut removed = vec![false; n];
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        let mut next = Vec::new();
        for &v in &layer {
            removed[v] = true;
            remaining -= 1;
            for &u in g.neighbors(v) {
                if !removed[u] {
                    degree[u] -= 1;
                    if degree[u] == 1 {
                        next.push(u);
                    }
                }
            }
        }
        layer = next;
    }
    (0..n).filter(|&v| !removed[v]).collect()
}

/// Computes the canonical key of `g`.
///
/// Star-shaped graphs (including bamboos and the single vertex) are handled
/// at any size; general trees fail with
/// [`GraphError::TooLargeForCanonicalForm`] above the cap.
pub fn canonical_form(g: &WeightedGraph) -> Result<CanonicalKey, GraphError> {
    let n = g.vertex_count();

    let is_path = (0..n).all(|v| g.valence(v) <= 2);
    if is_path {
        let order = match star_decomposition(g) {
            Some(star) if star.arms.is_empty() => vec![star.center],
            Some(star) => {
                let mut order = vec![star.center];
                order.extend(&star.arms[0]);
                order
            }
            None => unreachable!("paths are star-shaped"),
        };
        let forward = sequence_key(g, &order);
        let reversed: Vec<usize> = order.iter().rev().copied().collect();
        let backward = sequence_key(g, &reversed);
        let body = forward.min(backward);
        return Ok(CanonicalKey(format!("P:{body}").into_bytes()));
    }

    if let Some(star) = star_decomposition(g) {
        let mut arm_keys: Vec<String> = (0..star.arms.len())
            .map(|i| sequence_key(g, &star.arms[i]))
            .collect();
        arm_keys.sort();
        let body = format!("{}|{}", label(g, star.center), arm_keys.join("|"));
        return Ok(CanonicalKey(format!("S:{body}").into_bytes()));
    }

    if n > GENERAL_CANONICAL_CAP {
        return Err(GraphError::TooLargeForCanonicalForm {
            vertices: n,
            cap: GENERAL_CANONICAL_CAP,
        });
    }
    let body = tree_centers(g)
        .into_iter()
        .map(|c| rooted_code(g, c, None))
        .min()
        .expect("trees have at least one center");
    Ok(CanonicalKey(format!("T:{body}").into_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;

    fn graph(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> WeightedGraph {
        WeightedGraph::new(vertices, edges).unwrap()
    }

    fn path(weights: &[i64]) -> WeightedGraph {
        let vertices = weights.iter().enumerate().map(|(i, &w)| Vertex::new(i, w)).collect();
        let edges = (1..weights.len()).map(|i| (i - 1, i)).collect();
        graph(vertices, edges)
    }

    #[test]
    fn relabelled_stars_agree() {
        let a = WeightedGraph::parse("star center=-2 arms=[-2,-3|-4|-2]").unwrap();
        // same star, arms declared in another order
        let b = WeightedGraph::parse("star center=-2 arms=[-4|-2|-2,-3]").unwrap();
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
    }

    #[test]
    fn path_key_ignores_direction() {
        let a = path(&[-2, -3, -4]);
        let b = path(&[-4, -3, -2]);
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
        let c = path(&[-3, -2, -4]);
        assert_ne!(canonical_form(&a).unwrap(), canonical_form(&c).unwrap());
    }

    #[test]
    fn genus_is_part_of_the_key() {
        let plain = path(&[-2, -2]);
        let mut vs = plain.vertices().to_vec();
        vs[1].genus = 2;
        let marked = graph(vs, plain.edges().to_vec());
        assert_ne!(canonical_form(&plain).unwrap(), canonical_form(&marked).unwrap());
    }

    #[test]
    fn general_trees_are_keyed_up_to_relabelling() {
        // H-shaped tree, two different labelings
        let a = graph(
            (0..6).map(|i| Vertex::new(i, -2 - (i as i64 % 2))).collect(),
            vec![(0, 1), (0, 2), (0, 3), (3, 4), (3, 5)],
        );
        let perm = [5usize, 4, 3, 2, 1, 0];
        let b = graph(
            (0..6).map(|i| Vertex::new(perm[i], -2 - (i as i64 % 2))).collect(),
            vec![(5, 4), (5, 3), (5, 2), (2, 1), (2, 0)],
        );
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
    }

    #[test]
    fn general_cap_is_enforced_but_stars_are_exempt() {
        // 17-vertex double star: over the cap and not star-shaped
        let mut vertices = vec![Vertex::new(0, -2), Vertex::new(1, -2)];
        let mut edges = vec![(0, 1)];
        for i in 2..17 {
            vertices.push(Vertex::new(i, -2));
            edges.push((i % 2, i));
        }
        let big = graph(vertices, edges);
        assert!(matches!(
            canonical_form(&big),
            Err(GraphError::TooLargeForCanonicalForm { vertices: 17, .. })
        ));

        let mut arm = vec!["-2"; 30].join(",");
        arm = format!("star center=-3 arms=[{arm}|{arm}|-2]");
        let wide = WeightedGraph::parse(&arm).unwrap();
        assert!(canonical_form(&wide).is_ok());
    }
}
