//! The full pipeline for one graph: rigidity check, clique choice, exact
//! counts, the permanent cross-check, elimination traces and closed forms.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    alpha_beta, bezout_bound, bm_basis, borcea_streinu_bound, bregman_minc, corollary_bound_with,
    new_closed_bound, AlphaBeta,
};
use crate::elimination::{eliminate_with, formula_bound, SuccessorRule, TraceStep};
use crate::graph::{find_cliques, maxwell_check, RigidityReport};
use crate::orient::{
    b_from_permanent, count_valid_orientations_with, count_with_profile_with, incidence_permanent_with,
    partial_fixings, partially_fixed_instance, CountOptions, PartialFixing, MAX_RYSER_SIDE,
};
use crate::pseudograph::build_pseudograph;
use crate::util::round_sig;
use crate::{check_dimension, Clique, Error, Graph, Result, Vertex};

/// Most cliques (or partial fixings) examined per graph.
pub const MAX_CLIQUES: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CliquePolicy {
    All,
    #[default]
    Best,
    Explicit(Vec<Vertex>),
}

impl std::str::FromStr for CliquePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "all" => Ok(Self::All),
            "best" => Ok(Self::Best),
            list => list
                .split(',')
                .map(|t| {
                    t.trim().parse::<Vertex>().map_err(|_| Error::InvalidSize(format!("bad clique vertex '{t}'")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Self::Explicit),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Methods {
    pub backtracking: bool,
    pub permanent: bool,
    pub elimination: bool,
    pub formulas: bool,
}

impl Default for Methods {
    fn default() -> Self {
        Self { backtracking: true, permanent: true, elimination: true, formulas: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub d: u32,
    pub policy: CliquePolicy,
    pub methods: Methods,
    /// Applies to each method run separately.
    pub time_limit: Option<Duration>,
    pub parallel: bool,
    /// Include the elimination steps in the report.
    pub traces: bool,
}

impl AnalysisConfig {
    pub fn new(d: u32) -> Self {
        Self { d, policy: CliquePolicy::Best, methods: Methods::default(), time_limit: None, parallel: true, traces: false }
    }

    fn deadline(&self) -> Option<Instant> {
        self.time_limit.map(|t| Instant::now() + t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphInfo {
    pub name: String,
    pub vertices: usize,
    pub edges: usize,
    pub rigidity: RigidityReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EliminationSummary {
    /// Product of costs along the canonical successors.
    #[serde(with = "crate::util::decimal")]
    pub canonical: BigUint,
    /// Product of costs along the successors with the most orientations;
    /// absent when exact counting was disabled or timed out.
    #[serde(with = "crate::util::decimal::option", default)]
    pub max_count: Option<BigUint>,
    pub zero_count: bool,
    pub complete: bool,
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceStep>,
}

/// Results for one fixed clique, or one partial fixing in dimension 3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueReport {
    pub clique: Vec<Vertex>,
    /// Set for a partial fixing: this vertex has outdegree `d - 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial: Option<Vertex>,
    /// `(vertices, hanging edges)` per connected component.
    pub components: Vec<(u64, u64)>,
    #[serde(with = "crate::util::decimal::option", default)]
    pub exact: Option<BigUint>,
    /// `2^(|V| - |K|) * exact`.
    #[serde(with = "crate::util::decimal::option", default)]
    pub orientation_bound: Option<BigUint>,
    #[serde(with = "crate::util::decimal::option", default)]
    pub permanent: Option<BigUint>,
    /// `per / (d!)^(|V| - d)`, as `p` or `p/q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permanent_b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permanent_agrees: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elimination: Option<EliminationSummary>,
    /// Product of `alpha^n beta^(k-1)` over components.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bregman_minc: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub timeouts: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphBounds {
    pub alpha: f64,
    pub beta: f64,
    pub base: f64,
    pub closed_form_literal: f64,
    pub closed_form_variant: f64,
    pub closed_form_floor: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form_exact: Option<String>,
    #[serde(with = "crate::util::decimal::option", default)]
    pub bezout: Option<BigUint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub borcea_streinu: Option<String>,
    pub bm_basis: f64,
    /// Smallest orientation bound over the examined cliques.
    #[serde(with = "crate::util::decimal::option", default)]
    pub best_orientation_bound: Option<BigUint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub graph: GraphInfo,
    pub d: u32,
    pub cliques: Vec<CliqueReport>,
    pub bounds: GraphBounds,
    pub flags: Vec<String>,
}

impl BoundReport {
    pub fn timed_out(&self) -> bool {
        self.cliques.iter().any(|c| !c.timeouts.is_empty())
    }

    pub fn violations(&self) -> Vec<String> {
        self.flags.iter().filter(|f| f.starts_with("violation")).cloned().collect()
    }

    pub fn uses_profile(&self) -> bool {
        self.cliques.iter().any(|c| c.partial.is_some())
    }
}

fn sig(x: f64) -> f64 {
    round_sig(x, 12)
}

fn rational_text(x: &BigRational) -> String {
    if x.is_integer() { x.numer().to_string() } else { format!("{}/{}", x.numer(), x.denom()) }
}

fn big_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Runs every enabled method on `g` and collects the results.
pub fn analyze(name: &str, g: &Graph, cfg: &AnalysisConfig) -> Result<BoundReport> {
    check_dimension(cfg.d)?;
    let d = cfg.d;
    let n = g.vertex_count() as u64;
    if n < d as u64 {
        return Err(Error::InvalidSize(format!("graph has {n} vertices, fewer than d = {d}")));
    }
    let ab = alpha_beta(d)?;
    let rigidity = maxwell_check(g, d)?;
    let mut flags = Vec::new();
    if !rigidity.global_ok {
        flags.push("rigidity check failed".to_string());
    }
    if rigidity.necessary_only {
        flags.push("rigidity check is necessary only".to_string());
    }

    let mut cliques = match &cfg.policy {
        CliquePolicy::Explicit(members) => vec![Clique::new(g, members)?],
        _ => find_cliques(g, d)?,
    };
    if let CliquePolicy::Explicit(members) = &cfg.policy {
        if members.len() != d as usize {
            return Err(Error::InvalidSize(format!("clique has {} vertices, dimension is {d}", members.len())));
        }
    }
    if cliques.len() > MAX_CLIQUES {
        flags.push(format!("clique cap: examined {MAX_CLIQUES} of {}", cliques.len()));
        cliques.truncate(MAX_CLIQUES);
    }

    let mut reports: Vec<CliqueReport> = if !cliques.is_empty() {
        flags.push(format!("cliques: {}", cliques.len()));
        run_parallel(cfg.parallel, &cliques, |k| clique_report(g, k, cfg, &ab))?
    } else if d == 3 && !matches!(cfg.policy, CliquePolicy::Explicit(_)) {
        let mut fixings = partial_fixings(g);
        flags.push("profile: no triangle, using partial fixings".to_string());
        if fixings.len() > MAX_CLIQUES {
            flags.push(format!("fixing cap: examined {MAX_CLIQUES} of {}", fixings.len()));
            fixings.truncate(MAX_CLIQUES);
        }
        run_parallel(cfg.parallel, &fixings, |f| profile_report(g, *f, cfg))?
    } else {
        flags.push(format!("no {d}-clique"));
        Vec::new()
    };

    if cfg.policy == CliquePolicy::Best && reports.len() > 1 {
        let best = reports
            .iter()
            .enumerate()
            .min_by(|(i, a), (j, b)| best_key(a).cmp(&best_key(b)).then(i.cmp(j)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        reports = vec![reports.swap_remove(best)];
    }

    let has_clique = reports.iter().any(|r| r.partial.is_none());
    let closed = new_closed_bound(n, d, has_clique || reports.is_empty())?;
    let bounds = GraphBounds {
        alpha: sig(ab.alpha),
        beta: sig(ab.beta),
        base: sig(ab.base),
        closed_form_literal: sig(closed.literal),
        closed_form_variant: sig(closed.variant),
        closed_form_floor: sig(closed.floor),
        closed_form_exact: closed.exact.as_ref().map(rational_text),
        bezout: bezout_bound(n, d).ok(),
        borcea_streinu: borcea_streinu_bound(n, d).ok().map(|x| rational_text(&x)),
        bm_basis: sig(bm_basis(d)),
        best_orientation_bound: reports.iter().filter_map(|r| r.orientation_bound.clone()).min(),
    };

    for r in &reports {
        check_chain(r, &closed.effective(), &mut flags);
    }
    Ok(BoundReport {
        graph: GraphInfo { name: name.to_string(), vertices: g.vertex_count(), edges: g.edge_count(), rigidity },
        d,
        cliques: reports,
        bounds,
        flags,
    })
}

fn run_parallel<T: Sync, F>(parallel: bool, items: &[T], f: F) -> Result<Vec<CliqueReport>>
where
    F: Fn(&T) -> Result<CliqueReport> + Sync,
{
    if parallel {
        items.par_iter().map(&f).collect()
    } else {
        items.iter().map(&f).collect()
    }
}

/// Exact orientation bound first, then the certified elimination bound.
fn best_key(r: &CliqueReport) -> (u8, BigUint) {
    if let Some(b) = &r.orientation_bound {
        return (0, b.clone());
    }
    match r.elimination.as_ref().and_then(|e| e.max_count.clone()) {
        Some(b) => (1, b),
        None => (2, BigUint::default()),
    }
}

/// Flags every bound that falls below the exact count.
fn check_chain(r: &CliqueReport, closed: &f64, flags: &mut Vec<String>) {
    let Some(exact) = &r.exact else { return };
    let label = match r.partial {
        Some(p) => format!("{:?}+{p}", r.clique),
        None => format!("{:?}", r.clique),
    };
    let e = big_f64(exact);
    let tol = 1.0 + 1e-9;
    if let Some(el) = &r.elimination {
        if !el.zero_count && el.complete && el.canonical < *exact {
            flags.push(format!("violation: canonical elimination {} < exact {exact} at {label}", el.canonical));
        }
        if let Some(m) = &el.max_count {
            if m < exact {
                flags.push(format!("violation: max-count elimination {m} < exact {exact} at {label}"));
            }
        }
    }
    if let Some(f) = r.formula {
        if f * tol < e {
            flags.push(format!("violation: formula {f} < exact {exact} at {label}"));
        }
    }
    if let Some(bm) = r.bregman_minc {
        if bm * tol < e {
            flags.push(format!("violation: bregman-minc {bm} < exact {exact} at {label}"));
        }
    }
    if let Some(ob) = &r.orientation_bound {
        if r.partial.is_none() && *closed * tol < big_f64(ob) {
            flags.push(format!("violation: closed form {closed} < orientation bound {ob} at {label}"));
        }
    }
}

fn clique_report(g: &Graph, k: &Clique, cfg: &AnalysisConfig, ab: &AlphaBeta) -> Result<CliqueReport> {
    let d = cfg.d;
    let n = g.vertex_count();
    let l = build_pseudograph(g, k)?;
    let components: Vec<(u64, u64)> =
        l.components().iter().map(|c| (c.vertex_count() as u64, c.hanging_count())).collect();
    let mut r = CliqueReport {
        clique: k.members().to_vec(),
        partial: None,
        components: components.clone(),
        exact: None,
        orientation_bound: None,
        permanent: None,
        permanent_b: None,
        permanent_agrees: None,
        elimination: None,
        formula: None,
        bregman_minc: None,
        timeouts: Vec::new(),
        notes: Vec::new(),
    };

    if cfg.methods.backtracking {
        let opts = CountOptions { deadline: cfg.deadline(), parallel: cfg.parallel };
        match count_valid_orientations_with(&l, d, &opts) {
            Ok(c) => {
                r.orientation_bound = Some(&c.count << (n - d as usize));
                r.exact = Some(c.count);
            }
            Err(Error::Timeout) => r.timeouts.push("backtracking".into()),
            Err(e) => return Err(e),
        }
    }

    if cfg.methods.permanent {
        let side = d as usize * (n - d as usize);
        if side > MAX_RYSER_SIDE {
            r.notes.push(format!("permanent skipped: matrix side {side} exceeds {MAX_RYSER_SIDE}"));
        } else {
            match incidence_permanent_with(g, k, d, cfg.deadline()) {
                Ok(per) => {
                    let b = b_from_permanent(&per, n, d);
                    r.permanent_agrees = r.exact.as_ref().map(|e| b == BigRational::from_integer(e.clone().into()));
                    r.permanent_b = Some(rational_text(&b));
                    if r.exact.is_none() && b.is_integer() {
                        let value = b.to_integer().to_biguint().unwrap_or_default();
                        r.orientation_bound = Some(&value << (n - d as usize));
                    }
                    r.permanent = Some(per);
                }
                Err(Error::Timeout) => r.timeouts.push("permanent".into()),
                Err(e @ Error::DimensionMismatch { .. }) => r.notes.push(format!("permanent skipped: {e}")),
                Err(e) => return Err(e),
            }
        }
    }

    if cfg.methods.elimination {
        let canonical = eliminate_with(&l, d, SuccessorRule::Canonical);
        // the max-count rule counts every successor exactly; only run it
        // when the exact count itself finished
        let max_count = r.exact.is_some().then(|| eliminate_with(&l, d, SuccessorRule::MaxCount).bound());
        r.elimination = Some(EliminationSummary {
            canonical: canonical.bound(),
            max_count,
            zero_count: canonical.zero_count,
            complete: canonical.is_complete(),
            steps: canonical.steps.len(),
            trace: if cfg.traces { canonical.steps } else { Vec::new() },
        });
    }

    if cfg.methods.formulas {
        let per_component: f64 =
            components.iter().map(|&(ni, ki)| formula_bound(ni, ki.max(1), ab)).product();
        r.formula = Some(sig(per_component));
        // integrity of the clique-forced hanging edges
        corollary_bound_with(&components, ab)?;
        let bm = bregman_minc(l.vertex_count() as u64, l.hanging_count(), d)?;
        r.bregman_minc = Some(sig(bm.value));
        if bm.extended {
            r.notes.push("bregman-minc: extended form".into());
        }
    }
    Ok(r)
}

fn profile_report(g: &Graph, f: PartialFixing, cfg: &AnalysisConfig) -> Result<CliqueReport> {
    let (l, profile) = partially_fixed_instance(g, f)?;
    let mut r = CliqueReport {
        clique: vec![f.fixed.0, f.fixed.1],
        partial: Some(f.partial),
        components: l.components().iter().map(|c| (c.vertex_count() as u64, c.hanging_count())).collect(),
        exact: None,
        orientation_bound: None,
        permanent: None,
        permanent_b: None,
        permanent_agrees: None,
        elimination: None,
        formula: None,
        bregman_minc: None,
        timeouts: Vec::new(),
        notes: vec!["profile: elimination, permanent and formulas need a full clique".into()],
    };
    if cfg.methods.backtracking {
        let opts = CountOptions { deadline: cfg.deadline(), parallel: cfg.parallel };
        match count_with_profile_with(&l, &profile, &opts) {
            Ok(c) => {
                r.orientation_bound = Some(&c.count << (g.vertex_count() - 3));
                r.exact = Some(c.count);
            }
            Err(Error::Timeout) => r.timeouts.push("backtracking".into()),
            Err(e) => return Err(e),
        }
    }
    Ok(r)
}
