//! The human-readable experiment report: a single self-contained HTML
//! document with summary metrics, the full configuration echo, and one block
//! per processed instance (situation, gold utterance, perception dump and the
//! learner's candidate descriptions).

use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::persist::to_versioned_ron;

use super::run::{ExperimentReport, StageRole};

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

const STYLE: &str = "\
body { font-family: sans-serif; margin: 2em auto; max-width: 60em; color: #222; }\n\
h1, h2 { border-bottom: 1px solid #ccc; padding-bottom: 0.2em; }\n\
table { border-collapse: collapse; margin: 0.5em 0; }\n\
td, th { border: 1px solid #bbb; padding: 0.25em 0.6em; text-align: left; }\n\
pre { background: #f6f6f6; padding: 0.6em; overflow-x: auto; font-size: 0.85em; }\n\
.instance { border: 1px solid #ddd; border-radius: 4px; padding: 0.5em 1em; margin: 1em 0; }\n\
.gold { font-weight: bold; }\n\
.role { color: #666; font-size: 0.9em; }\n\
details summary { cursor: pointer; color: #346; }";

fn role_label(role: StageRole) -> &'static str {
    match role {
        StageRole::WarmUp => "warm-up",
        StageRole::Train => "train",
        StageRole::Test => "test",
    }
}

/// Render the report as one self-contained HTML string (inline styles, no
/// external assets).
pub fn html_report(report: &ExperimentReport) -> Result<String> {
    let mut out = String::new();
    out.push_str("<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n");
    out.push_str("<title>Experiment report</title>\n<style>\n");
    out.push_str(STYLE);
    out.push_str("\n</style>\n</head>\n<body>\n");
    out.push_str("<h1>Experiment report</h1>\n");

    out.push_str("<h2>Metrics</h2>\n<table>\n");
    out.push_str(&format!(
        "<tr><th>Test instances</th><td>{}</td></tr>\n",
        report.metrics.test_instances
    ));
    out.push_str(&format!(
        "<tr><th>Top-choice accuracy</th><td>{:.4}</td></tr>\n",
        report.metrics.top_choice_accuracy
    ));
    out.push_str(&format!(
        "<tr><th>Gold-in-candidates accuracy</th><td>{:.4}</td></tr>\n",
        report.metrics.gold_in_candidates_accuracy
    ));
    out.push_str("</table>\n");

    out.push_str("<h2>Configuration</h2>\n<pre>");
    out.push_str(&escape(&to_versioned_ron(&report.config)?));
    out.push_str("</pre>\n");

    out.push_str("<h2>Instances</h2>\n");
    if report.instances.is_empty() {
        out.push_str("<p>No instances were processed.</p>\n");
    }
    for record in &report.instances {
        out.push_str("<div class=\"instance\">\n");
        out.push_str(&format!(
            "<h3>{} <span class=\"role\">({} #{})</span></h3>\n",
            escape(&record.stage),
            role_label(record.role),
            record.index
        ));
        out.push_str(&format!(
            "<p class=\"gold\">Gold: <code>{}</code></p>\n",
            escape(&record.instance.utterance.join(" "))
        ));
        out.push_str("<details><summary>Situation</summary><pre>");
        out.push_str(&escape(&to_versioned_ron(&record.instance.situation)?));
        out.push_str("</pre></details>\n");
        out.push_str("<details><summary>Perception</summary><pre>");
        out.push_str(&escape(&to_versioned_ron(&record.instance.perception)?));
        out.push_str("</pre></details>\n");
        if record.candidates.is_empty() {
            out.push_str("<p>No candidate descriptions.</p>\n");
        } else {
            out.push_str("<table>\n<tr><th>Rank</th><th>Description</th><th>Score</th></tr>\n");
            for (rank, (tokens, score)) in record.candidates.iter().enumerate() {
                out.push_str(&format!(
                    "<tr><td>{}</td><td><code>{}</code></td><td>{:.6}</td></tr>\n",
                    rank + 1,
                    escape(&tokens.join(" ")),
                    score
                ));
            }
            out.push_str("</table>\n");
        }
        out.push_str("</div>\n");
    }

    out.push_str("</body>\n</html>\n");
    Ok(out)
}

/// Write the HTML report to `path`.
pub fn emit_html_report(report: &ExperimentReport, path: &Path) -> Result<()> {
    fs::write(path, html_report(report)?)?;
    Ok(())
}
