//! The `linkforge` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::bounds::{
    lambda_star_min, linking_matrix, obstruction_three_comp, obstruction_two_comp, uk_bounds,
    Bound, ComponentFlags, LinkingMatrix, ObstructionCertificate,
};
use crate::catalog::{catalog_link, CatalogSpec};
use crate::diagram::{parse_pd_code, validate_pd, LinkDiagram};
use crate::magnus::DEFAULT_CAPACITY;
use crate::milnor::{milnor_table, v2, MilnorError, MilnorOptions, MilnorTable};
use crate::search::{min_witness_size, SearchError, SearchOptions};

pub const CAPACITY_ENV: &str = "LINKFORGE_CAPACITY";

#[derive(Parser, Debug)]
#[command(name = "linkforge", version, about = "Link diagram invariants, unlinking bounds and crossing-change search")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Linking matrix, Milnor invariants and per-component v2.
    Invariants(Common),
    /// Bounds on u_k with the applicable obstructions.
    Bounds(Common),
    /// Lower-bound certificates for two- and three-component links.
    Obstructions(Common),
    /// Smallest crossing-change set killing all invariants up to length k.
    Search(Common),
    /// List catalog entries, or print the PD code of the given input.
    Catalog(Common),
    /// Report diagram invariant violations.
    Validate(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// PD file.
    #[arg(long, conflicts_with = "catalog")]
    pd: Option<PathBuf>,
    /// Catalog spec such as `fig5a(m=6,k1=trefoil,k2=trefoil)`.
    #[arg(long)]
    catalog: Option<String>,
    /// Milnor length / C_k level.
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Most crossing changes tried by `search`.
    #[arg(long, default_value_t = 2)]
    budget: usize,
    /// Emit a JSON report.
    #[arg(long)]
    json: bool,
    /// Also minimise Lambda* over component orders (n <= 8).
    #[arg(long)]
    min_ordering: bool,
    /// Worker threads for `search`.
    #[arg(long)]
    workers: Option<usize>,
    /// Report wall time in `search` output.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Capacity(String),
}

impl From<MilnorError> for CliError {
    fn from(e: MilnorError) -> Self {
        if e.is_capacity() {
            CliError::Capacity(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Milnor(m) => m.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn input_err<E: ToString>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

/// A report: JSON value plus its plain-text rendering.
struct Report {
    json: Value,
    text: String,
    /// Exit code when the command itself succeeded.
    code: i32,
}

/// Runs the CLI on `args` (program name first); returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let line = msg.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(err, "linkforge: {}", line.trim_start_matches("error: "));
            return 1;
        }
    };
    let (name, common) = match &cli.verb {
        Verb::Invariants(c) => ("invariants", c),
        Verb::Bounds(c) => ("bounds", c),
        Verb::Obstructions(c) => ("obstructions", c),
        Verb::Search(c) => ("search", c),
        Verb::Catalog(c) => ("catalog", c),
        Verb::Validate(c) => ("validate", c),
    };
    let result = capacity().and_then(|cap| match &cli.verb {
        Verb::Invariants(c) => invariants(c, cap),
        Verb::Bounds(c) => bounds(c, cap),
        Verb::Obstructions(c) => obstructions(c, cap),
        Verb::Search(c) => search(c, cap),
        Verb::Catalog(c) => catalog(c),
        Verb::Validate(c) => validate(c),
    });
    match result {
        Ok(report) => {
            let written = if common.json {
                let envelope = json!({
                    "tool": "linkforge",
                    "version": env!("CARGO_PKG_VERSION"),
                    "command": name,
                    "result": report.json,
                });
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&envelope).expect("serializable")
                )
            } else {
                write!(out, "{}", report.text)
            };
            if written.is_err() {
                return 1;
            }
            report.code
        }
        Err(CliError::Input(msg)) => {
            let _ = writeln!(err, "linkforge: {msg}");
            1
        }
        Err(CliError::Capacity(msg)) => {
            let _ = writeln!(err, "linkforge: capacity exceeded: {msg}");
            2
        }
    }
}

fn capacity() -> Result<usize, CliError> {
    match std::env::var(CAPACITY_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{CAPACITY_ENV}={v} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_CAPACITY),
    }
}

enum Source {
    Pd(PathBuf, String),
    Catalog(CatalogSpec),
}

impl Source {
    fn label(&self) -> String {
        match self {
            Source::Pd(p, _) => format!("pd:{}", p.display()),
            Source::Catalog(s) => format!("catalog:{s}"),
        }
    }
}

fn source(c: &Common) -> Result<Option<Source>, CliError> {
    match (&c.pd, &c.catalog) {
        (Some(p), None) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display())))?;
            Ok(Some(Source::Pd(p.clone(), text)))
        }
        (None, Some(s)) => Ok(Some(Source::Catalog(s.parse().map_err(input_err)?))),
        (None, None) => Ok(None),
        (Some(_), Some(_)) => Err(CliError::Input("give either --pd or --catalog, not both".into())),
    }
}

fn load(c: &Common) -> Result<(String, LinkDiagram), CliError> {
    let src = source(c)?
        .ok_or_else(|| CliError::Input("an input is required: --pd <path> or --catalog <spec>".into()))?;
    let d = match &src {
        Source::Pd(_, text) => {
            let code = parse_pd_code(text).map_err(input_err)?;
            LinkDiagram::try_from(&code).map_err(input_err)?
        }
        Source::Catalog(spec) => catalog_link(spec).map_err(input_err)?,
    };
    Ok((src.label(), d))
}

fn need_k(k: usize, min: usize) -> Result<(), CliError> {
    if k < min {
        return Err(CliError::Input(format!("--k must be at least {min}, got {k}")));
    }
    Ok(())
}

struct Computed {
    lm: LinkingMatrix,
    v2: Vec<i64>,
    crossing_free: Vec<bool>,
}

fn basics(d: &LinkDiagram) -> Result<Computed, CliError> {
    let lm = linking_matrix(d).map_err(input_err)?;
    let n = d.component_count();
    let v2 = (1..=n)
        .map(|i| v2(d, i))
        .collect::<Result<Vec<_>, _>>()?;
    let crossing_free = (1..=n)
        .map(|i| d.component_edges(i).map(|e| e.is_empty()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(input_err)?;
    Ok(Computed {
        lm,
        v2,
        crossing_free,
    })
}

fn matrix_text(m: &LinkingMatrix) -> String {
    m.rows()
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|v| format!("{v:>3}")).collect();
            format!("  {}\n", cells.join(" "))
        })
        .collect()
}

fn invariants(c: &Common, cap: usize) -> Result<Report, CliError> {
    need_k(c.k, 2)?;
    let (label, d) = load(c)?;
    let base = basics(&d)?;
    let table: MilnorTable<i64> = milnor_table(&d, c.k, &MilnorOptions::with_capacity(cap))?;
    let mut text = format!(
        "input: {label}\ncomponents: {}  crossings: {}\nlinking matrix:\n{}v2: {:?}\nmilnor invariants up to length {}:\n",
        d.component_count(),
        d.crossings().len(),
        matrix_text(&base.lm),
        base.v2,
        c.k
    );
    let nonzero: Vec<_> = table.entries.iter().filter(|e| e.mu != 0).collect();
    if nonzero.is_empty() {
        text.push_str("  all vanish\n");
    }
    for e in nonzero {
        text.push_str(&format!("  mu{:?} = {} (indeterminacy {})\n", e.index, e.mu, e.delta));
    }
    Ok(Report {
        json: json!({
            "input": label,
            "components": d.component_count(),
            "crossings": d.crossings().len(),
            "linking_matrix": base.lm.rows(),
            "v2": base.v2,
            "milnor": table.to_json(),
        }),
        text,
        code: 0,
    })
}

/// Certificates applicable to `d`, computed with flags at C_4 strength.
fn certificates(
    d: &LinkDiagram,
    base: &Computed,
    cap: usize,
) -> Result<Vec<ObstructionCertificate>, CliError> {
    let n = d.component_count();
    if n != 2 && n != 3 {
        return Ok(Vec::new());
    }
    let flags = ComponentFlags::from_v2(&base.v2, &base.crossing_free, 4);
    let table: MilnorTable<i64> = milnor_table(&d.clone(), 4, &MilnorOptions::with_capacity(cap))?;
    let mu = |i: &[usize]| table.get(i).map_or(0, |e| e.mu);
    Ok(if n == 2 {
        vec![obstruction_two_comp(base.lm.get(1, 2), mu(&[1, 1, 2, 2]), &flags)]
    } else {
        let pairs = [mu(&[1, 1, 2, 2]), mu(&[1, 1, 3, 3]), mu(&[2, 2, 3, 3])];
        obstruction_three_comp(&base.lm, mu(&[1, 2, 3]), pairs, &flags)
    })
}

fn certificate_text(cs: &[ObstructionCertificate]) -> String {
    if cs.is_empty() {
        return "  none applicable\n".into();
    }
    cs.iter()
        .map(|c| match c.conclusion {
            Some(b) => format!("  {}: u_{} >= {}\n", c.theorem, b.k, b.value),
            None => format!(
                "  {}: no conclusion (failed: {})\n",
                c.theorem,
                c.failed_hypotheses().join(", ")
            ),
        })
        .collect()
}

fn bounds(c: &Common, cap: usize) -> Result<Report, CliError> {
    need_k(c.k, 1)?;
    let (label, d) = load(c)?;
    let base = basics(&d)?;
    let flags = ComponentFlags::from_v2(&base.v2, &base.crossing_free, c.k);
    let report = uk_bounds(&base.lm, &flags, c.k as i64).map_err(input_err)?;
    let certs = certificates(&d, &base, cap)?;
    let mut effective = report.lower.clone();
    for cert in &certs {
        if let Some(b) = cert.conclusion {
            if b.k <= c.k && b.value >= effective.value {
                if b.value > effective.value {
                    effective = Bound {
                        value: b.value,
                        provenance: Vec::new(),
                    };
                }
                effective.provenance.push(cert.theorem.to_string());
            }
        }
    }
    let mut text = format!(
        "input: {label}\nk = {}\nu_k lower: {} [{}]\nu_k upper: {} [{}]\n",
        c.k,
        report.lower.value,
        report.lower.provenance.join(", "),
        report.upper.value,
        report.upper.provenance.join(", ")
    );
    if let Some(e) = &report.exact {
        text.push_str(&format!("u_k exact: {} [{}]\n", e.value, e.provenance.join(", ")));
    }
    text.push_str(&format!(
        "homotopy unlinking number: {} ..= {}\nobstructions:\n{}effective lower bound: {} [{}]\n",
        report.homotopy_lower,
        report.homotopy_upper,
        certificate_text(&certs),
        effective.value,
        effective.provenance.join(", ")
    ));
    let mut json = json!({
        "input": label,
        "linking_matrix": base.lm.rows(),
        "flags": flags,
        "report": report.to_json(),
        "obstructions": certs.iter().map(ObstructionCertificate::to_json).collect::<Vec<_>>(),
        "effective_lower": effective,
    });
    if c.min_ordering {
        let min = lambda_star_min(&base.lm);
        let value = match &min {
            Some((v, order)) => {
                text.push_str(&format!(
                    "extension: min Lambda* over orderings = {v} (order {order:?})\n"
                ));
                json!({"value": v, "ordering": order})
            }
            None => {
                text.push_str("extension: min Lambda* skipped (more than 8 components)\n");
                Value::Null
            }
        };
        json["lambda_star_min"] = value;
    }
    Ok(Report {
        json,
        text,
        code: 0,
    })
}

fn obstructions(c: &Common, cap: usize) -> Result<Report, CliError> {
    let (label, d) = load(c)?;
    let base = basics(&d)?;
    let certs = certificates(&d, &base, cap)?;
    let lower: Vec<Value> = certs
        .iter()
        .filter_map(|x| {
            x.conclusion
                .map(|b| json!({"theorem": x.theorem, "k": b.k, "value": b.value}))
        })
        .collect();
    Ok(Report {
        json: json!({
            "input": label,
            "certificates": certs.iter().map(ObstructionCertificate::to_json).collect::<Vec<_>>(),
            "lower_bounds": lower,
        }),
        text: format!("input: {label}\nobstructions:\n{}", certificate_text(&certs)),
        code: 0,
    })
}

fn search(c: &Common, cap: usize) -> Result<Report, CliError> {
    need_k(c.k, 1)?;
    let (label, d) = load(c)?;
    let opts = SearchOptions {
        workers: c.workers,
        milnor: MilnorOptions::with_capacity(cap),
    };
    let r = min_witness_size(&d, c.k, c.budget, &opts)?;
    let mut text = format!(
        "input: {label}\nk = {}, budget = {}\nexamined {} change sets; exhausted: {}\n",
        c.k, c.budget, r.examined, r.exhausted
    );
    match r.min_witness_size {
        Some(s) => {
            text.push_str(&format!("smallest witness size: {s}\n"));
            for w in &r.witnesses {
                text.push_str(&format!("  change {:?}\n", w.changes));
            }
        }
        None => text.push_str("no witness within budget\n"),
    }
    if c.timing {
        text.push_str(&format!("{} ms\n", r.wall_time.as_millis()));
    }
    let mut json = r.to_json(c.timing);
    json["input"] = json!(label);
    Ok(Report {
        json,
        text,
        code: 0,
    })
}

fn catalog(c: &Common) -> Result<Report, CliError> {
    match source(c)? {
        None => {
            let entries = CatalogSpec::examples();
            let text = entries
                .iter()
                .map(|s| format!("{:<36} {}\n", s.to_string(), s.description()))
                .collect();
            let json = json!({
                "entries": entries
                    .iter()
                    .map(|s| json!({"spec": s.to_string(), "description": s.description()}))
                    .collect::<Vec<_>>(),
            });
            Ok(Report { json, text, code: 0 })
        }
        Some(_) => {
            let (label, d) = load(c)?;
            let pd = d.serialize();
            Ok(Report {
                json: json!({
                    "input": label,
                    "components": d.component_count(),
                    "crossings": d.crossings().len(),
                    "pd": pd,
                }),
                text: pd,
                code: 0,
            })
        }
    }
}

fn validate(c: &Common) -> Result<Report, CliError> {
    let src = source(c)?
        .ok_or_else(|| CliError::Input("an input is required: --pd <path> or --catalog <spec>".into()))?;
    let violations: Vec<String> = match &src {
        Source::Pd(_, text) => {
            let code = parse_pd_code(text).map_err(input_err)?;
            validate_pd(&code).iter().map(ToString::to_string).collect()
        }
        Source::Catalog(spec) => catalog_link(spec)
            .map_err(input_err)?
            .validate()
            .iter()
            .map(ToString::to_string)
            .collect(),
    };
    let label = src.label();
    let text = if violations.is_empty() {
        format!("{label}: valid\n")
    } else {
        let mut t = format!("{label}: {} violation(s)\n", violations.len());
        for v in &violations {
            t.push_str(&format!("  {v}\n"));
        }
        t
    };
    Ok(Report {
        json: json!({"input": label, "valid": violations.is_empty(), "violations": violations}),
        text,
        code: if violations.is_empty() { 0 } else { 1 },
    })
}
