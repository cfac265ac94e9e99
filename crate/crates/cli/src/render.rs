use std::fmt::Write;

use isoflow_core::CheckEntry;

use crate::catalog::Catalog;
use crate::ScenarioOutcome;

/// Residuals below this print as exact zeros.
pub const ZERO_FLOOR: f64 = 1e-14;

pub fn format_residual(r: f64) -> String {
    if r.abs() < ZERO_FLOOR {
        "0.000000e0".to_string()
    } else {
        format!("{r:.6e}")
    }
}

fn entry_line(e: &CheckEntry) -> String {
    let dims: Vec<String> = e.dims.iter().map(|d| d.to_string()).collect();
    let mut line = format!(
        "check_id={} residual={} dims=[{}] pass={}",
        e.check_id,
        format_residual(e.residual),
        dims.join(","),
        e.pass
    );
    if let Some(note) = &e.note {
        let _ = write!(line, " note={note:?}");
    }
    line
}

/// Text report for a sequence of scenarios, in input order.
pub fn render_report(outcomes: &[ScenarioOutcome]) -> String {
    let mut out = format!("isoflow {}\n", env!("CARGO_PKG_VERSION"));
    for o in outcomes {
        let params: Vec<String> = o.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let t = &o.tolerances;
        let _ = writeln!(out, "\n[{}]", o.name);
        let _ = writeln!(out, "construction={}", o.construction);
        let _ = writeln!(out, "params {}", params.join(" "));
        let _ = writeln!(out, "tolerances rank_rel={:e} resid_abs={:e} angle={:e}", t.rank_rel, t.resid_abs, t.angle);
        for e in &o.report.entries {
            out.push_str(&entry_line(e));
            out.push('\n');
        }
        let _ = writeln!(out, "overall pass={}", o.report.passed());
    }
    out
}

pub fn render_catalog(catalog: &Catalog) -> String {
    let mut out = String::new();
    for c in catalog.iter() {
        let _ = writeln!(out, "{}", c.name());
        let _ = writeln!(out, "  anchor: {}", c.anchor());
        let _ = writeln!(out, "  {}", c.summary());
        for p in c.params() {
            let default = p.default.unwrap_or("required");
            let _ = writeln!(out, "    {} ({}; default {}): {}", p.name, p.kind, default, p.help);
        }
    }
    out
}
