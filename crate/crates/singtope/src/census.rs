//! Exhaustive enumeration of small weighted trees and the equivalence check
//! between the conical verdict and family membership.
//!
//! Graphs are produced canonically where the shape allows it (single
//! vertices, weight paths up to reversal, stars as a center weight plus a
//! sorted multiset of outward arm strings) and by shape enumeration with
//! key dedup for general trees, so no isomorph is ever visited twice. The
//! stream is processed in fixed-size chunks; within a chunk the per-graph
//! work may fan out to worker threads, but chunk boundaries and merge order
//! are fixed, so the report is identical no matter how many workers run.

use crate::canonical::{canonical_form, CanonicalKey};
use crate::family::{generate, recognize, FamilyParams};
use crate::graph::{Vertex, WeightedGraph};
use crate::laufer::{laufer_zmin_unchecked, LauferConfig};
use crate::matrix::{is_negative_definite, IntersectionMatrix};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashSet;
use thiserror::Error;

pub const MAX_CENSUS_VERTICES: usize = 12;
pub const MIN_CENSUS_WEIGHT: i64 = -9;

const CHUNK: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("max_vertices must lie in 1..={MAX_CENSUS_VERTICES} (got {got})")]
    BadMaxVertices { got: usize },
    #[error("min_weight must lie in {MIN_CENSUS_WEIGHT}..=-2 (got {got})")]
    BadMinWeight { got: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusMode {
    /// Every tree.
    #[default]
    Trees,
    /// Trees with at most one vertex of valence ≥ 3.
    Stars,
    /// Paths with at least two vertices.
    Bamboos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CensusBounds {
    pub max_vertices: usize,
    /// Weights range over `[min_weight, -2]`; `-1` never occurs in a
    /// reduced graph.
    pub min_weight: i64,
    pub mode: CensusMode,
}

impl CensusBounds {
    pub fn new(max_vertices: usize, min_weight: i64, mode: CensusMode) -> Result<Self, CensusError> {
        if max_vertices == 0 || max_vertices > MAX_CENSUS_VERTICES {
            return Err(CensusError::BadMaxVertices { got: max_vertices });
        }
        if !(MIN_CENSUS_WEIGHT..=-2).contains(&min_weight) {
            return Err(CensusError::BadMinWeight { got: min_weight });
        }
        Ok(CensusBounds { max_vertices, min_weight, mode })
    }

    fn weights(&self) -> Vec<i64> {
        (self.min_weight..=-2).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub graph: WeightedGraph,
    pub negative_definite: bool,
    pub rational: bool,
    pub conical: bool,
    pub family: Option<FamilyParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusReport {
    pub schema: u32,
    pub bounds: CensusBounds,
    pub total: u64,
    pub negative_definite: u64,
    pub rational: u64,
    pub conical: u64,
    pub family_matched: u64,
    pub counterexamples: Vec<Counterexample>,
}

/// Runs the census with the crate-default worker setup: the shared thread
/// pool when the `parallel` feature is on, otherwise sequentially.
pub fn census(bounds: &CensusBounds) -> CensusReport {
    #[cfg(feature = "parallel")]
    {
        run_census(bounds, true)
    }
    #[cfg(not(feature = "parallel"))]
    {
        census_sequential(bounds)
    }
}

/// Census on a dedicated pool of `jobs` workers (0 uses the default size).
/// Without the `parallel` feature this falls back to the sequential run.
pub fn census_with_jobs(bounds: &CensusBounds, jobs: usize) -> CensusReport {
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("worker pool construction");
        pool.install(|| run_census(bounds, true))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        census_sequential(bounds)
    }
}

pub fn census_sequential(bounds: &CensusBounds) -> CensusReport {
    run_census(bounds, false)
}

struct Outcome {
    negative_definite: bool,
    rational: bool,
    conical: bool,
    recognized: bool,
}

fn run_census(bounds: &CensusBounds, parallel: bool) -> CensusReport {
    let index = family_key_index(bounds.max_vertices);
    let mut report = CensusReport {
        schema: crate::classify::REPORT_SCHEMA,
        bounds: *bounds,
        total: 0,
        negative_definite: 0,
        rational: 0,
        conical: 0,
        family_matched: 0,
        counterexamples: Vec::new(),
    };

    let mut chunk: Vec<WeightedGraph> = Vec::with_capacity(CHUNK);
    for_each_graph(bounds, |g| {
        chunk.push(g);
        if chunk.len() == CHUNK {
            drain_chunk(&mut chunk, &index, &mut report, parallel);
        }
    });
    drain_chunk(&mut chunk, &index, &mut report, parallel);

    report
        .counterexamples
        .sort_by_cached_key(|c| canonical_form(&c.graph).expect("census graphs are small"));
    report
}

fn drain_chunk(
    chunk: &mut Vec<WeightedGraph>,
    index: &HashSet<CanonicalKey>,
    report: &mut CensusReport,
    parallel: bool,
) {
    if chunk.is_empty() {
        return;
    }
    let outcomes: Vec<Outcome> = if parallel {
        #[cfg(feature = "parallel")]
        {
            chunk.par_iter().map(|g| evaluate(g, index)).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            unreachable!("parallel census requires the parallel feature")
        }
    } else {
        chunk.iter().map(|g| evaluate(g, index)).collect()
    };

    for (g, o) in chunk.iter().zip(&outcomes) {
        report.total += 1;
        report.negative_definite += o.negative_definite as u64;
        report.rational += o.rational as u64;
        report.conical += o.conical as u64;
        report.family_matched += o.recognized as u64;
        if (o.rational && o.conical) != o.recognized {
            report.counterexamples.push(Counterexample {
                graph: g.clone(),
                negative_definite: o.negative_definite,
                rational: o.rational,
                conical: o.conical,
                family: recognize(g),
            });
        }
    }
    chunk.clear();
}

fn evaluate(g: &WeightedGraph, index: &HashSet<CanonicalKey>) -> Outcome {
    let negative_definite = is_negative_definite(&IntersectionMatrix::from_graph(g));
    let mut rational = false;
    let mut conical = false;
    if negative_definite {
        if let Ok(trace) = laufer_zmin_unchecked(g, &LauferConfig::default()) {
            rational = trace.rational;
            if rational {
                let mut negative = 0usize;
                let mut nodes = 0usize;
                for v in 0..g.vertex_count() {
                    let d = trace.zmin.get(v) * g.weight(v)
                        + g.neighbors(v).iter().map(|&u| trace.zmin.get(u)).sum::<i64>();
                    if d < 0 {
                        negative += 1;
                        nodes += 1;
                    } else if g.valence(v) >= 3 {
                        nodes += 1;
                    }
                }
                conical = negative == 1 && nodes == 1;
            }
        }
    }
    Outcome { negative_definite, rational, conical, recognized: recognized_by_index(g, index) }
}

/// Canonical keys of every reduced family member small enough to appear.
/// Census graphs never carry a −1 weight, so they are their own reductions:
/// a multi-vertex census graph matches the family exactly when its key is
/// in this set, and a single vertex of weight ≤ −2 always matches.
fn family_key_index(max_vertices: usize) -> HashSet<CanonicalKey> {
    let mut keys = HashSet::new();
    for k in 1..=max_vertices as u32 {
        for l in 1..=max_vertices as u32 {
            for n in 1..=max_vertices as u32 {
                let Ok(params) = FamilyParams::new(n, k, l) else { continue };
                if params.vertex_count() <= max_vertices {
                    let member = generate(&params);
                    keys.insert(canonical_form(&member).expect("members within bounds are small"));
                }
            }
        }
    }
    keys
}

fn recognized_by_index(g: &WeightedGraph, index: &HashSet<CanonicalKey>) -> bool {
    if g.vertex_count() == 1 {
        return g.weight(0) <= -2;
    }
    match canonical_form(g) {
        Ok(key) => index.contains(&key),
        Err(_) => false,
    }
}

/// Calls `f` once per census graph, in a fixed order independent of any
/// worker configuration.
pub fn for_each_graph(bounds: &CensusBounds, mut f: impl FnMut(WeightedGraph)) {
    let weights = bounds.weights();
    match bounds.mode {
        CensusMode::Bamboos => each_path(bounds.max_vertices, &weights, &mut f),
        CensusMode::Stars => {
            for &w in &weights {
                f(single(w));
            }
            each_path(bounds.max_vertices, &weights, &mut f);
            each_proper_star(bounds.max_vertices, &weights, &mut f);
        }
        CensusMode::Trees => each_tree(bounds.max_vertices, &weights, &mut f),
    }
}

fn single(w: i64) -> WeightedGraph {
    WeightedGraph::new(vec![Vertex::new(0, w)], vec![]).expect("one vertex")
}

fn path_graph(weights: &[i64]) -> WeightedGraph {
    let vertices = weights.iter().enumerate().map(|(i, &w)| Vertex::new(i, w)).collect();
    let edges = (1..weights.len()).map(|i| (i - 1, i)).collect();
    WeightedGraph::new(vertices, edges).expect("paths are valid")
}

fn star_graph(center: i64, arms: &[&[i64]]) -> WeightedGraph {
    let mut vertices = vec![Vertex::new(0, center)];
    let mut edges = Vec::new();
    for arm in arms {
        let mut prev = 0;
        for &w in *arm {
            let id = vertices.len();
            vertices.push(Vertex::new(id, w));
            edges.push((prev, id));
            prev = id;
        }
    }
    WeightedGraph::new(vertices, edges).expect("stars are valid")
}

/// Weight paths on 2..=max vertices, one per reversal class: only the
/// sequences that are ≤ their own reversal are emitted.
fn each_path(max_vertices: usize, weights: &[i64], f: &mut impl FnMut(WeightedGraph)) {
    for n in 2..=max_vertices {
        let mut idx = vec![0usize; n];
        loop {
            let forward = idx.iter().map(|&i| weights[i]);
            let backward = idx.iter().rev().map(|&i| weights[i]);
            if forward.cmp(backward) != std::cmp::Ordering::Greater {
                let seq: Vec<i64> = idx.iter().map(|&i| weights[i]).collect();
                f(path_graph(&seq));
            }
            if !advance(&mut idx, weights.len()) {
                break;
            }
        }
    }
}

/// Stars with at least three arms: a center weight and a non-decreasing
/// sequence of arm indices into the arm universe, which is ordered by
/// (length, entries), so every isomorphism class appears exactly once.
fn each_proper_star(max_vertices: usize, weights: &[i64], f: &mut impl FnMut(WeightedGraph)) {
    if max_vertices < 4 {
        return;
    }
    let max_arm = max_vertices - 3;
    let mut universe: Vec<Vec<i64>> = Vec::new();
    for len in 1..=max_arm {
        let mut idx = vec![0usize; len];
        loop {
            universe.push(idx.iter().map(|&i| weights[i]).collect());
            if !advance(&mut idx, weights.len()) {
                break;
            }
        }
    }

    for n in 4..=max_vertices {
        for &center in weights {
            let mut picked: Vec<usize> = Vec::new();
            pick_arms(&universe, 0, n - 1, &mut picked, &mut |picked| {
                let arms: Vec<&[i64]> = picked.iter().map(|&i| universe[i].as_slice()).collect();
                f(star_graph(center, &arms));
            });
        }
    }
}

fn pick_arms(
    universe: &[Vec<i64>],
    start: usize,
    remaining: usize,
    picked: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if remaining == 0 {
        if picked.len() >= 3 {
            emit(picked);
        }
        return;
    }
    for i in start..universe.len() {
        let len = universe[i].len();
        if len > remaining {
            break;
        }
        picked.push(i);
        pick_arms(universe, i, remaining - len, picked, emit);
        picked.pop();
    }
}

/// All trees: shapes grown by leaf addition and deduplicated by canonical
/// key, then all weight assignments per shape, again deduplicated (shape
/// symmetries identify some assignments).
fn each_tree(max_vertices: usize, weights: &[i64], f: &mut impl FnMut(WeightedGraph)) {
    let mut level: Vec<WeightedGraph> = vec![single(-2)];
    for n in 1..=max_vertices {
        if n > 1 {
            let mut next = Vec::new();
            let mut seen = HashSet::new();
            for shape in &level {
                for v in 0..shape.vertex_count() {
                    let mut vertices = shape.vertices().to_vec();
                    vertices.push(Vertex::new(vertices.len(), -2));
                    let mut edges = shape.edges().to_vec();
                    edges.push((v, vertices.len() - 1));
                    let grown = WeightedGraph::new(vertices, edges).expect("leaf addition");
                    let key = canonical_form(&grown).expect("shapes stay small");
                    if seen.insert(key) {
                        next.push(grown);
                    }
                }
            }
            next.sort_by_cached_key(|g| canonical_form(g).expect("shapes stay small"));
            level = next;
        }

        for shape in &level {
            let mut seen = HashSet::new();
            let mut idx = vec![0usize; n];
            loop {
                let vertices = idx
                    .iter()
                    .enumerate()
                    .map(|(v, &i)| Vertex::new(v, weights[i]))
                    .collect();
                let g = WeightedGraph::new(vertices, shape.edges().to_vec())
                    .expect("reweighted shape");
                let key = canonical_form(&g).expect("census graphs are small");
                if seen.insert(key) {
                    f(g);
                }
                if !advance(&mut idx, weights.len()) {
                    break;
                }
            }
        }
    }
}

/// Odometer step over base-`base` digit vectors, most significant first.
fn advance(idx: &mut [usize], base: usize) -> bool {
    for digit in idx.iter_mut().rev() {
        *digit += 1;
        if *digit < base {
            return true;
        }
        *digit = 0;
    }
    false
}
