//! Vertices met by a generic hyperplane section, the thick-thin split, and
//! the aggregate per-graph report.
//!
//! A vertex with `zmin · E_v < 0` is called an L-node; a node is a vertex of
//! valence at least 3 or an L-node. The conicality verdict is licensed only
//! for rational graphs: there must be exactly one node and it must be the
//! unique L-node. The decomposition first blows up edges until no two
//! L-nodes are adjacent, then splits the remaining vertices into bamboos
//! hanging off an L-node (thick, together with that L-node) and everything
//! else (thin).

use crate::arms::ArmReport;
use crate::family::{recognize_bounded, FamilyParams, DEFAULT_RECOGNIZE_BOUND};
use crate::graph::{blow_up_edge, star_decomposition, GraphError, WeightedGraph};
use crate::laufer::{
    dot, is_rational_with, laufer_zmin, laufer_zmin_with, Cycle, LauferConfig, LauferError,
    LauferTrace,
};
use crate::matrix::{is_negative_definite, IntersectionMatrix};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("graph is not rational: conicality not topologically determined")]
    NotRational,
    #[error("blow-up cap of {cap} exceeded while separating adjacent L-nodes")]
    BlowupCapExceeded { cap: usize },
    #[error(transparent)]
    Laufer(#[from] LauferError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Vertices whose product with the given cycle is negative, ascending.
pub fn l_nodes(g: &WeightedGraph, zmin: &Cycle) -> Result<Vec<usize>, LauferError> {
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        if dot(g, zmin, v)? < 0 {
            out.push(v);
        }
    }
    Ok(out)
}

/// Number of vertices that are either of valence ≥ 3 or L-nodes.
pub fn node_count(g: &WeightedGraph, l_nodes: &[usize]) -> usize {
    (0..g.vertex_count())
        .filter(|&v| g.valence(v) >= 3 || l_nodes.contains(&v))
        .count()
}

/// Whether the graph has exactly one node, namely its unique L-node.
///
/// Refuses non-rational graphs: without rationality the hyperplane cycle is
/// not determined by the graph, so neither is the verdict.
pub fn is_metrically_conical(g: &WeightedGraph) -> Result<bool, ClassifyError> {
    let trace = laufer_zmin(g)?;
    if !trace.rational {
        return Err(ClassifyError::NotRational);
    }
    let ln = l_nodes(g, &trace.zmin)?;
    Ok(ln.len() == 1 && node_count(g, &ln) == 1)
}

/// One L-node together with the bamboos hanging off it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThickPiece {
    pub l_node: usize,
    pub bamboos: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub l_nodes: Vec<usize>,
    pub thick_pieces: Vec<ThickPiece>,
    pub tjurina_components: Vec<Vec<usize>>,
    pub thin_pieces: Vec<Vec<usize>>,
    pub blowups_performed: usize,
    /// The graph the pieces refer to: the input after the separating
    /// blow-ups, so vertex ids here may exceed the input's.
    pub working_graph: WeightedGraph,
}

pub fn default_blowup_cap(g: &WeightedGraph) -> usize {
    2 * g.vertex_count()
}

pub fn thick_thin(g: &WeightedGraph) -> Result<Decomposition, ClassifyError> {
    thick_thin_with(g, default_blowup_cap(g))
}

pub fn thick_thin_with(g: &WeightedGraph, cap: usize) -> Result<Decomposition, ClassifyError> {
    let trace = laufer_zmin(g)?;
    if !trace.rational {
        return Err(ClassifyError::NotRational);
    }

    let mut working = g.clone();
    let mut zmin = trace.zmin;
    let mut blowups = 0usize;
    let lnodes = loop {
        let ln = l_nodes(&working, &zmin)?;
        let mut pair = None;
        'scan: for (i, &u) in ln.iter().enumerate() {
            for &v in &ln[i + 1..] {
                if working.has_edge(u, v) {
                    pair = Some((u, v));
                    break 'scan;
                }
            }
        }
        let Some((u, v)) = pair else { break ln };
        if blowups >= cap {
            return Err(ClassifyError::BlowupCapExceeded { cap });
        }
        working = blow_up_edge(&working, u, v)?;
        blowups += 1;
        zmin = laufer_zmin(&working)?.zmin;
    };

    let n = working.vertex_count();
    let mut is_l = vec![false; n];
    for &v in &lnodes {
        is_l[v] = true;
    }

    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; n];
    for start in 0..n {
        if is_l[start] || seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < comp.len() {
            let v = comp[head];
            head += 1;
            for &u in working.neighbors(v) {
                if !is_l[u] && !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }

    let is_bamboo = |comp: &[usize]| {
        let mut ends = 0;
        for &v in comp {
            match working.valence(v) {
                0 | 1 => ends += 1,
                2 => {}
                _ => return false,
            }
        }
        ends == 1
    };

    let mut bamboos: Vec<Vec<Vec<usize>>> = vec![Vec::new(); lnodes.len()];
    let mut thin_pieces = Vec::new();
    for comp in &components {
        if !is_bamboo(comp) {
            thin_pieces.push(comp.clone());
            continue;
        }
        let anchor = comp
            .iter()
            .flat_map(|&v| working.neighbors(v))
            .filter(|&&u| is_l[u])
            .min()
            .expect("a bamboo hangs off some L-node in a connected graph");
        let slot = lnodes.binary_search(anchor).expect("anchor is an L-node");
        bamboos[slot].push(comp.clone());
    }

    let thick_pieces = lnodes
        .iter()
        .zip(bamboos)
        .map(|(&l_node, bamboos)| ThickPiece { l_node, bamboos })
        .collect();

    Ok(Decomposition {
        l_nodes: lnodes,
        thick_pieces,
        tjurina_components: components,
        thin_pieces,
        blowups_performed: blowups,
        working_graph: working,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Cap on algorithm steps; `None` for the size-derived default.
    pub step_budget: Option<u64>,
    /// Search bound forwarded to the family recognizer.
    pub recognize_bound: usize,
    pub with_decomposition: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            step_budget: None,
            recognize_bound: DEFAULT_RECOGNIZE_BOUND,
            with_decomposition: true,
        }
    }
}

/// Everything the pipeline can say about one graph. Fields that do not
/// apply (the verdicts below a failed precondition) are `null` in JSON
/// rather than omitted, with the reason under `conical_reason` or
/// `diagnostics`.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub graph: WeightedGraph,
    pub negative_definite: bool,
    pub zmin: Option<Cycle>,
    pub trace: Option<LauferTrace>,
    pub rational: Option<bool>,
    pub l_nodes: Option<Vec<usize>>,
    pub node_count: Option<usize>,
    pub conical: Option<bool>,
    pub conical_reason: Option<String>,
    pub decomposition: Option<Decomposition>,
    pub family: Option<FamilyParams>,
    pub arms: Option<Vec<ArmReport>>,
    pub diagnostics: Vec<String>,
}

pub const REPORT_SCHEMA: u32 = 1;

pub fn analyze(g: &WeightedGraph) -> AnalysisReport {
    analyze_with(g, &AnalyzeOptions::default())
}

pub fn analyze_with(g: &WeightedGraph, options: &AnalyzeOptions) -> AnalysisReport {
    let config = LauferConfig { step_budget: options.step_budget, ..LauferConfig::default() };
    let mut diagnostics = Vec::new();

    let negative_definite = is_negative_definite(&IntersectionMatrix::from_graph(g));
    let mut zmin = None;
    let mut trace = None;
    let mut rational = None;
    let mut lnodes = None;
    let mut nodes = None;

    if negative_definite {
        match laufer_zmin_with(g, &config) {
            Ok(t) => {
                let ln = l_nodes(g, &t.zmin).expect("cycle length matches by construction");
                nodes = Some(node_count(g, &ln));
                lnodes = Some(ln);
                zmin = Some(t.zmin.clone());
                rational = Some(t.rational);
                trace = Some(t);
            }
            Err(e) => diagnostics.push(format!("minimal cycle: {e}")),
        }
    } else {
        match is_rational_with(g, &config) {
            Ok(r) => rational = Some(r),
            Err(LauferError::NotNegativeDefinite) => diagnostics
                .push("rationality undetermined: intersection form is not negative definite".into()),
            Err(e) => diagnostics.push(format!("rationality: {e}")),
        }
    }

    let mut conical = None;
    let mut conical_reason = None;
    let mut decomposition = None;
    if rational == Some(true) {
        if let (Some(ln), Some(nodes)) = (&lnodes, nodes) {
            conical = Some(ln.len() == 1 && nodes == 1);
        }
        if options.with_decomposition {
            match thick_thin(g) {
                Ok(d) => decomposition = Some(d),
                Err(e) => diagnostics.push(format!("decomposition: {e}")),
            }
        }
    } else {
        conical_reason = Some("conicality not topologically determined".into());
    }

    let arms = match (star_decomposition(g), &zmin) {
        (Some(star), Some(z)) => match crate::arms::check_multeq(g, &star, z) {
            Ok(check) => Some(check.arms),
            Err(e) => {
                diagnostics.push(format!("arm report: {e}"));
                None
            }
        },
        _ => None,
    };

    AnalysisReport {
        schema: REPORT_SCHEMA,
        graph: g.clone(),
        negative_definite,
        zmin,
        trace,
        rational,
        l_nodes: lnodes,
        node_count: nodes,
        conical,
        conical_reason,
        decomposition,
        family: recognize_bounded(g, options.recognize_bound),
        arms,
        diagnostics,
    }
}
