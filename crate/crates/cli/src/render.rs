use std::fmt::Write;

use num_traits::ToPrimitive;
use rigibound_core::analysis::{BoundReport, CliqueReport};
use rigibound_core::graph::RigidityReport;

pub fn check_text(r: &RigidityReport, cliques: usize) -> String {
    let d = r.dimension;
    let mut out = String::new();
    if !r.count_ok {
        let rel = if r.edge_count as i64 > r.required_edges { '>' } else { '<' };
        let _ = writeln!(out, "maxwell count violated: |E|={} {rel} {}", r.edge_count, r.required_edges);
        return out;
    }
    if let Some(sub) = &r.violating_subgraph {
        let _ = writeln!(out, "subgraph inequality violated on vertices {sub:?}");
        return out;
    }
    let status = match (d, r.sparse) {
        (2, _) => "laman: yes".to_string(),
        (_, Some(true)) => "maxwell(necessary): pass".to_string(),
        _ => "maxwell(necessary): count only (subgraphs not checked)".to_string(),
    };
    let _ = write!(out, "{status}; {d}-cliques: {cliques}");
    if d == 3 && cliques == 0 {
        out.push_str("; fallback K2' profile available");
    }
    out.push('\n');
    out
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

fn clique_label(c: &CliqueReport) -> String {
    let members: Vec<String> = c.clique.iter().map(u64::to_string).collect();
    match c.partial {
        Some(p) => format!("{{{}}} + partial {p}", members.join(",")),
        None => format!("{{{}}}", members.join(",")),
    }
}

pub fn bound_text(r: &BoundReport) -> String {
    let mut out = String::new();
    let g = &r.graph;
    let _ = writeln!(out, "graph {}: {} vertices, {} edges, d = {}", g.name, g.vertices, g.edges, r.d);
    for c in &r.cliques {
        let _ = writeln!(out, "clique {}", clique_label(c));
        let _ = writeln!(out, "  exact orientations B:   {}", opt(&c.exact));
        let _ = writeln!(out, "  orientation bound:      {}", opt(&c.orientation_bound));
        if let Some(per) = &c.permanent {
            let agree = match c.permanent_agrees {
                Some(true) => " (agrees)",
                Some(false) => " (MISMATCH)",
                None => "",
            };
            let _ = writeln!(out, "  permanent:              {per} -> B = {}{agree}", opt(&c.permanent_b));
        }
        if let Some(e) = &c.elimination {
            let _ = writeln!(
                out,
                "  elimination product:    {} ({} steps), max-count successor: {}",
                e.canonical,
                e.steps,
                opt(&e.max_count)
            );
            for s in &e.trace {
                let _ = writeln!(out, "    {}", serde_json::to_string(s).unwrap_or_default());
            }
        }
        if let Some(f) = c.formula {
            let _ = writeln!(out, "  formula bound:          {f}");
        }
        if let Some(bm) = c.bregman_minc {
            let _ = writeln!(out, "  bregman-minc:           {bm}");
        }
        for t in &c.timeouts {
            let _ = writeln!(out, "  timeout: {t}");
        }
        for n in &c.notes {
            let _ = writeln!(out, "  note: {n}");
        }
    }
    let b = &r.bounds;
    let _ = writeln!(out, "closed form:              {} (literal exponent: {})", b.closed_form_variant, b.closed_form_literal);
    let _ = writeln!(out, "borcea-streinu:           {}", opt(&b.borcea_streinu));
    let _ = writeln!(out, "bezout:                   {}", opt(&b.bezout));
    let _ = writeln!(out, "basis: this {}, bregman-minc {}", b.base, b.bm_basis);
    for f in &r.flags {
        let _ = writeln!(out, "flag: {f}");
    }
    out
}

pub fn compare_header() -> String {
    "graph,vertices,edges,d,kind,clique,exact,orientation_bound,elimination,elimination_max,formula,\
     closed_form,bregman_minc,bezout,borcea_streinu,closed_ratio,violations\n"
        .to_string()
}

pub fn compare_row(r: &BoundReport) -> String {
    let c = r.cliques.first();
    let field = |f: &dyn Fn(&CliqueReport) -> String| c.map_or_else(|| "-".to_string(), f);
    let ratio = c
        .and_then(|c| c.orientation_bound.as_ref())
        .and_then(|b| b.to_f64())
        .map_or_else(|| "-".to_string(), |b| format!("{:.6}", r.bounds.closed_form_variant / b));
    let violations = r.violations();
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        r.graph.name,
        r.graph.vertices,
        r.graph.edges,
        r.d,
        field(&|c| if c.partial.is_some() { "profile".into() } else { "clique".into() }),
        field(&|c| clique_label(c).replace(',', " ")),
        field(&|c| opt(&c.exact)),
        field(&|c| opt(&c.orientation_bound)),
        field(&|c| opt(&c.elimination.as_ref().map(|e| e.canonical.clone()))),
        field(&|c| opt(&c.elimination.as_ref().and_then(|e| e.max_count.clone()))),
        field(&|c| opt(&c.formula)),
        r.bounds.closed_form_variant,
        field(&|c| opt(&c.bregman_minc)),
        opt(&r.bounds.bezout),
        opt(&r.bounds.borcea_streinu),
        ratio,
        if violations.is_empty() { "none".to_string() } else { violations.join(" | ").replace(',', ";") },
    )
}
