use std::io::{Read, Write};
use std::path::Path;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use rigibound_core::analysis::{analyze, AnalysisConfig, CliquePolicy, Methods};
use rigibound_core::bounds::{format_table1_csv, format_table1_text, table1 as table1_rows};
use rigibound_core::graph::{find_cliques, henneberg1_generate, maxwell_check, parse_graph, to_edge_list};
use rigibound_core::Graph;

use crate::render;
use crate::{exit, BoundArgs, CheckArgs, CompareArgs, Format, GenArgs, TableArgs};

pub struct Output {
    pub text: String,
    pub status: u8,
    pub warnings: Vec<String>,
    /// Printed to stderr as is.
    pub info: Vec<String>,
}

impl Output {
    fn new(text: String, status: u8, warnings: Vec<String>) -> Self {
        Self { text, status, warnings, info: Vec::new() }
    }

    fn ok(text: String) -> Self {
        Self::new(text, exit::OK, Vec::new())
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

/// Reads a graph from a file, stdin (`-`), or inline text with `;` as the
/// line separator.
pub fn load_graph(input: &str) -> Result<(String, Graph)> {
    let (name, text) = if input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        ("stdin".to_string(), s)
    } else if Path::new(input).is_file() {
        let s = std::fs::read_to_string(input).with_context(|| format!("reading {input}"))?;
        (input.to_string(), s)
    } else if input.contains(';') {
        ("inline".to_string(), input.replace(';', "\n"))
    } else {
        bail!("{input}: no such file");
    };
    let g = parse_graph(&text).with_context(|| format!("parsing {name}"))?;
    Ok((name, g))
}

pub fn check(a: &CheckArgs, format: Format) -> Result<Output> {
    let (_, g) = load_graph(&a.input)?;
    let report = maxwell_check(&g, a.dim)?;
    let cliques = find_cliques(&g, a.dim)?;
    let status = if report.global_ok { exit::OK } else { exit::RIGIDITY };
    let text = match format {
        Format::Json => {
            let value = serde_json::json!({ "rigidity": report, "cliques": cliques });
            serde_json::to_string_pretty(&value)? + "\n"
        }
        _ => render::check_text(&report, cliques.len()),
    };
    Ok(Output::new(text, status, Vec::new()))
}

fn config(dim: u32, time_limit: Option<f64>) -> AnalysisConfig {
    let mut cfg = AnalysisConfig::new(dim);
    cfg.time_limit = time_limit.map(Duration::from_secs_f64);
    cfg
}

pub fn bound(a: &BoundArgs, format: Format) -> Result<Output> {
    let (name, g) = load_graph(&a.input)?;
    let mut cfg = config(a.dim, a.time_limit);
    cfg.policy = a.clique.parse::<CliquePolicy>()?;
    cfg.traces = a.trace;
    cfg.methods = Methods {
        backtracking: !a.no_backtracking,
        permanent: !a.no_permanent,
        elimination: !a.no_elimination,
        formulas: !a.no_formulas,
    };
    let rigidity = maxwell_check(&g, a.dim)?;
    if !rigidity.global_ok && !a.force {
        let mut text = render::check_text(&rigidity, 0);
        text.push_str("refusing to bound a graph that fails the rigidity check (use --force)\n");
        return Ok(Output::new(text, exit::RIGIDITY, Vec::new()));
    }
    let report = analyze(&name, &g, &cfg)?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => render::compare_header() + &render::compare_row(&report),
        Format::Text => render::bound_text(&report),
    };
    let status = if report.timed_out() { exit::TIMEOUT } else { exit::OK };
    let warnings = report.flags.iter().filter(|f| f.contains("cap") || f.starts_with("violation")).cloned().collect();
    Ok(Output::new(text, status, warnings))
}

pub fn table1(a: &TableArgs, format: Format) -> Result<Output> {
    let rows = table1_rows(2..=a.max_d)?;
    let text = match format {
        Format::Csv => format_table1_csv(&rows),
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Text => format_table1_text(&rows),
    };
    Ok(Output::ok(text))
}

pub fn gen(a: &GenArgs) -> Result<Output> {
    let g = henneberg1_generate(a.n, a.dim, a.seed)?;
    let mut text = format!("# henneberg n={} d={} seed={}\n", a.n, a.dim, a.seed);
    text.push_str(&to_edge_list(&g));
    let mut out = Output::ok(text);
    out.info.push(format!("seed: {}", a.seed));
    Ok(out)
}

pub fn compare(a: &CompareArgs) -> Result<Output> {
    let mut paths: Vec<_> = std::fs::read_dir(&a.dir)
        .with_context(|| format!("reading directory {}", a.dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    let mut text = render::compare_header();
    let mut warnings = Vec::new();
    let cfg = config(a.dim, a.time_limit);
    let (mut done, mut timed_out) = (0usize, false);
    for path in &paths {
        let name = path.file_name().map_or_else(|| path.display().to_string(), |f| f.to_string_lossy().into_owned());
        let row = load_graph(&path.display().to_string()).and_then(|(_, g)| Ok(analyze(&name, &g, &cfg)?));
        match row {
            Ok(report) => {
                timed_out |= report.timed_out();
                for v in report.violations() {
                    warnings.push(format!("{name}: {v}"));
                }
                text.push_str(&render::compare_row(&report));
                done += 1;
            }
            Err(e) => warnings.push(format!("skipping {name}: {e:#}")),
        }
    }
    if paths.is_empty() {
        warnings.push(format!("{} contains no graph files", a.dir.display()));
    }
    let status = if !paths.is_empty() && done == 0 {
        exit::USAGE
    } else if timed_out {
        exit::TIMEOUT
    } else {
        exit::OK
    };
    Ok(Output::new(text, status, warnings))
}
