//! The minimal cycle: a brute-force box oracle and the stepwise algorithm.
//!
//! A cycle assigns a nonnegative multiplicity to every vertex. Among the
//! nonzero cycles whose product with every vertex is ≤ 0 there is a unique
//! componentwise-least element; [`zmin_oracle`] finds it by exhaustive
//! search over a bounded box, [`laufer_zmin`] by the incremental
//! computation that also yields the rationality verdict.

use crate::graph::WeightedGraph;
use crate::matrix::{is_negative_definite, IntersectionMatrix};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LauferError {
    #[error("multiplicities must be nonnegative (entry {index} is {value})")]
    NegativeMultiplicity { index: usize, value: i64 },
    #[error("cycle has {got} entries but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("unknown vertex {id}")]
    UnknownVertex { id: usize },
    #[error("intersection form is not negative definite")]
    NotNegativeDefinite,
    #[error("step budget of {budget} exceeded; the computation did not stabilize")]
    StepBudgetExceeded { budget: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle is limited to 8 vertices (got {vertices})")]
    TooManyVertices { vertices: usize },
    #[error("oracle box bound must lie in 1..=12 (got {bound})")]
    BadBound { bound: i64 },
    #[error("no admissible cycle with entries ≤ {bound}; box exhausted")]
    BoxExhausted { bound: i64 },
    #[error("no componentwise-least admissible cycle in the box")]
    NonUniqueMinimum,
}

/// Nonnegative multiplicity vector indexed by vertex id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cycle(Vec<i64>);

impl Cycle {
    pub fn new(entries: Vec<i64>) -> Result<Self, LauferError> {
        for (index, &value) in entries.iter().enumerate() {
            if value < 0 {
                return Err(LauferError::NegativeMultiplicity { index, value });
            }
        }
        Ok(Cycle(entries))
    }

    pub fn ones(n: usize) -> Self {
        Cycle(vec![1; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&m| m == 0)
    }

    pub fn get(&self, v: usize) -> i64 {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// Sum of all multiplicities.
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }
}

fn check_len(g: &WeightedGraph, z: &Cycle) -> Result<(), LauferError> {
    if z.len() != g.vertex_count() {
        return Err(LauferError::LengthMismatch { expected: g.vertex_count(), got: z.len() });
    }
    Ok(())
}

/// The product `z · E_v`: the weighted diagonal term plus the neighbor
/// multiplicities.
pub fn dot(g: &WeightedGraph, z: &Cycle, v: usize) -> Result<i64, LauferError> {
    check_len(g, z)?;
    if v >= g.vertex_count() {
        return Err(LauferError::UnknownVertex { id: v });
    }
    Ok(dot_unchecked(g, z.as_slice(), v))
}

fn dot_unchecked(g: &WeightedGraph, z: &[i64], v: usize) -> i64 {
    z[v] * g.weight(v) + g.neighbors(v).iter().map(|&u| z[u]).sum::<i64>()
}

/// Membership in the top set: `z` is nonzero, nonnegative, and has
/// `z · E_v ≤ 0` at every vertex.
pub fn is_in_ztop(g: &WeightedGraph, z: &Cycle) -> Result<bool, LauferError> {
    check_len(g, z)?;
    if z.is_zero() {
        return Ok(false);
    }
    Ok((0..g.vertex_count()).all(|v| dot_unchecked(g, z.as_slice(), v) <= 0))
}

/// Exhaustively searches the box `[0, bound]^n` for admissible cycles and
/// returns the componentwise-least one.
///
/// This is the verification oracle: it never runs the stepwise algorithm.
/// The enumeration visits every admissible cycle in the box (subtrees whose
/// already-determined vertices violate admissibility are skipped, which
/// discards no admissible completion), keeps the running componentwise
/// minimum, and finally checks that this minimum is itself admissible,
/// i.e. that the set has a least element.
pub fn zmin_oracle(g: &WeightedGraph, bound: i64) -> Result<Cycle, OracleError> {
    let n = g.vertex_count();
    if n > 8 {
        return Err(OracleError::TooManyVertices { vertices: n });
    }
    if !(1..=12).contains(&bound) {
        return Err(OracleError::BadBound { bound });
    }

    // breadth-first assignment order, so prefixes stay connected
    let mut order = Vec::with_capacity(n);
    let mut pos = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::from([0usize]);
    pos[0] = 0;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &u in g.neighbors(v) {
            if pos[u] == usize::MAX {
                pos[u] = order.len() + queue.len();
                queue.push_back(u);
            }
        }
    }
    // vertex v is fully determined once v and all its neighbors are assigned
    let mut determined_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        let last = g.neighbors(v).iter().map(|&u| pos[u]).chain([pos[v]]).max().unwrap();
        determined_at[last].push(v);
    }

    let mut z = vec![0i64; n];
    let mut meet: Option<Vec<i64>> = None;
    search(g, &order, &determined_at, bound, 0, &mut z, &mut meet);

    let meet = meet.ok_or(OracleError::BoxExhausted { bound })?;
    let candidate = Cycle(meet);
    if candidate.is_zero() || !is_in_ztop(g, &candidate).expect("length fixed") {
        return Err(OracleError::NonUniqueMinimum);
    }
    Ok(candidate)
}

fn search(
    g: &WeightedGraph,
    order: &[usize],
    determined_at: &[Vec<usize>],
    bound: i64,
    depth: usize,
    z: &mut Vec<i64>,
    meet: &mut Option<Vec<i64>>,
) {
    if depth == order.len() {
        if z.iter().all(|&m| m == 0) {
            return;
        }
        match meet {
            None => *meet = Some(z.clone()),
            Some(m) => {
                for i in 0..z.len() {
                    m[i] = m[i].min(z[i]);
                }
            }
        }
        return;
    }
    let v = order[depth];
    'values: for value in 0..=bound {
        z[v] = value;
        for &u in &determined_at[depth] {
            if dot_unchecked(g, z, u) > 0 {
                continue 'values;
            }
        }
        search(g, order, determined_at, bound, depth + 1, z, meet);
    }
    z[v] = 0;
}

/// Vertex choice rule for the stepwise run. The default picks the largest
/// positive product, breaking ties toward the lowest id; the alternative
/// picks the smallest positive product, ties toward the highest id, and
/// exists to demonstrate that the final cycle does not depend on the rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Selection {
    #[default]
    MaxDotLowestId,
    MinDotHighestId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LauferConfig {
    /// Cap on addition steps; `None` means `64 · |V| · max|weight|`.
    pub step_budget: Option<u64>,
    pub selection: Selection,
}

impl Default for LauferConfig {
    fn default() -> Self {
        LauferConfig { step_budget: None, selection: Selection::MaxDotLowestId }
    }
}

pub fn default_step_budget(g: &WeightedGraph) -> u64 {
    64 * g.vertex_count() as u64 * g.max_abs_weight() as u64
}

/// One addition: at step `i` the rule chose `vertex`, whose product with
/// the running cycle was `dot`; `max_dot` is the largest product over all
/// vertices before the addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LauferStep {
    pub i: usize,
    pub vertex: usize,
    pub dot: i64,
    pub max_dot: i64,
}

/// First step at which some vertex had product ≥ 2, spoiling rationality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub step: usize,
    pub vertex: usize,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LauferTrace {
    pub steps: Vec<LauferStep>,
    pub zmin: Cycle,
    pub rational: bool,
    pub violation: Option<Violation>,
}

/// Runs the stepwise computation with default configuration. See
/// [`laufer_zmin_with`].
pub fn laufer_zmin(g: &WeightedGraph) -> Result<LauferTrace, LauferError> {
    laufer_zmin_with(g, &LauferConfig::default())
}

/// Starts from the all-ones cycle and, while some vertex has positive
/// product, adds that vertex once and records the step. Requires a
/// negative-definite intersection form (this is what guarantees
/// termination).
///
/// The verdict is `rational` iff every genus is zero and no vertex ever
/// showed a product ≥ 2 at any step. Since the default rule always examines
/// the maximal product, the check covers all vertices, not just the added
/// one, under either selection rule.
pub fn laufer_zmin_with(g: &WeightedGraph, config: &LauferConfig) -> Result<LauferTrace, LauferError> {
    if !is_negative_definite(&IntersectionMatrix::from_graph(g)) {
        return Err(LauferError::NotNegativeDefinite);
    }
    laufer_zmin_unchecked(g, config)
}

/// Rationality verdict alone. For a negative-definite graph this is the
/// verdict carried by [`laufer_zmin`]. Without definiteness the computation
/// has no guaranteed endpoint, but a product ≥ 2 seen along the way already
/// settles the answer as `false`; the scan runs until it sees one,
/// stabilizes, or exhausts the budget, and refuses in the latter two cases.
pub fn is_rational(g: &WeightedGraph) -> Result<bool, LauferError> {
    is_rational_with(g, &LauferConfig::default())
}

pub fn is_rational_with(g: &WeightedGraph, config: &LauferConfig) -> Result<bool, LauferError> {
    if g.vertices().iter().any(|v| v.genus > 0) {
        return Ok(false);
    }
    match laufer_zmin_with(g, config) {
        Ok(trace) => Ok(trace.rational),
        Err(LauferError::NotNegativeDefinite) => {
            let budget = config.step_budget.unwrap_or_else(|| default_step_budget(g));
            let mut dots = initial_dots(g);
            for _ in 0..budget {
                let (v, max) = hottest(&dots);
                if max >= 2 {
                    return Ok(false);
                }
                if max <= 0 {
                    return Err(LauferError::NotNegativeDefinite);
                }
                dots[v] += g.weight(v);
                for &u in g.neighbors(v) {
                    dots[u] += 1;
                }
            }
            if hottest(&dots).1 >= 2 {
                return Ok(false);
            }
            Err(LauferError::NotNegativeDefinite)
        }
        Err(e) => Err(e),
    }
}

fn initial_dots(g: &WeightedGraph) -> Vec<i64> {
    (0..g.vertex_count()).map(|v| g.weight(v) + g.valence(v) as i64).collect()
}

fn hottest(dots: &[i64]) -> (usize, i64) {
    let mut best = (0usize, dots[0]);
    for (v, &d) in dots.iter().enumerate().skip(1) {
        if d > best.1 {
            best = (v, d);
        }
    }
    best
}

pub(crate) fn laufer_zmin_unchecked(
    g: &WeightedGraph,
    config: &LauferConfig,
) -> Result<LauferTrace, LauferError> {
    let n = g.vertex_count();
    let budget = config.step_budget.unwrap_or_else(|| default_step_budget(g));
    let mut z = vec![1i64; n];
    let mut dots = initial_dots(g);
    let mut steps = Vec::new();
    let mut violation = None;

    loop {
        let (max_vertex, max_dot) = hottest(&dots);
        if max_dot <= 0 {
            break;
        }
        if steps.len() as u64 >= budget {
            return Err(LauferError::StepBudgetExceeded { budget });
        }
        let chosen = match config.selection {
            Selection::MaxDotLowestId => max_vertex,
            Selection::MinDotHighestId => {
                let mut best = (max_vertex, max_dot);
                for (v, &d) in dots.iter().enumerate() {
                    if d >= 1 && (d < best.1 || (d == best.1 && v > best.0)) {
                        best = (v, d);
                    }
                }
                best.0
            }
        };
        let index = steps.len() + 1;
        if max_dot >= 2 && violation.is_none() {
            violation = Some(Violation { step: index, vertex: max_vertex, value: max_dot });
        }
        steps.push(LauferStep { i: index, vertex: chosen, dot: dots[chosen], max_dot });
        z[chosen] += 1;
        dots[chosen] += g.weight(chosen);
        for &u in g.neighbors(chosen) {
            dots[u] += 1;
        }
    }

    let all_genus_zero = g.vertices().iter().all(|v| v.genus == 0);
    let rational = all_genus_zero && violation.is_none();
    Ok(LauferTrace { steps, zmin: Cycle(z), rational, violation })
}
