//! Text and JSON renderings of reports for the command line and the HTTP
//! API.

use std::fmt::Write;

use serde_json::{json, Value};
use vvp_core::analytics::{
    ComparisonReport, ConsensusReport, DigestGroup, Metric, MetricComparison, Normality,
};
use vvp_core::graph::{BranchPaths, Issue, NavigationPoint, ValidationReport};
use vvp_core::session::SessionMetrics;
use vvp_core::stats::{GroupSummary, TestKind, TestResult};

use crate::bundle::MetricsDto;
use crate::document::{MediaRefIssue, MediaRefKind};
use crate::time::format_timestamp;
use crate::wire::{AnchorDto, BodyItemDto};

fn issue_value(issue: &Issue) -> Value {
    json!({
        "code": issue.code.as_str(),
        "node": issue.node.as_ref().map(|n| n.as_str()),
        "detail": issue.detail,
    })
}

fn media_note(issue: &MediaRefIssue) -> String {
    match issue.kind {
        MediaRefKind::Missing => format!("media {} not found at {}", issue.media_id, issue.uri),
        MediaRefKind::Remote => format!("media {} is remote ({}), not checked", issue.media_id, issue.uri),
    }
}

pub fn validation_text(
    report: &ValidationReport,
    unknown_fields: &[String],
    media: &[MediaRefIssue],
) -> String {
    let mut out = String::new();
    for issue in &report.errors {
        writeln!(out, "error   {issue}").unwrap();
    }
    for issue in &report.warnings {
        writeln!(out, "warning {issue}").unwrap();
    }
    for field in unknown_fields {
        writeln!(out, "warning unknown field {field} ignored").unwrap();
    }
    for issue in media {
        writeln!(out, "warning {}", media_note(issue)).unwrap();
    }
    writeln!(
        out,
        "{} error(s), {} warning(s)",
        report.errors.len(),
        report.warnings.len() + unknown_fields.len() + media.len()
    )
    .unwrap();
    out
}

pub fn validation_value(
    report: &ValidationReport,
    unknown_fields: &[String],
    media: &[MediaRefIssue],
) -> Value {
    json!({
        "playable": report.is_playable(),
        "errors": report.errors.iter().map(issue_value).collect::<Vec<_>>(),
        "warnings": report.warnings.iter().map(issue_value).collect::<Vec<_>>(),
        "unknown_fields": unknown_fields,
        "media": media.iter().map(|m| json!({
            "media_id": m.media_id.as_str(),
            "uri": m.uri,
            "status": match m.kind {
                MediaRefKind::Missing => "missing",
                MediaRefKind::Remote => "remote",
            },
        })).collect::<Vec<_>>(),
    })
}

pub fn paths_text(paths: &BranchPaths) -> String {
    let mut out = if paths.paths.is_empty() {
        String::from("0 branch paths\n")
    } else {
        format!(
            "{} branch paths, minimum {} per playthrough\n",
            paths.paths.len(),
            paths.minimum_paths_per_playthrough
        )
    };
    for p in &paths.paths {
        let chain: Vec<&str> = p.nodes.iter().map(|n| n.as_str()).collect();
        writeln!(out, "  {}/{}: {}", p.fork, p.option, chain.join(" -> ")).unwrap();
    }
    out
}

pub fn paths_value(paths: &BranchPaths) -> Value {
    json!({
        "count": paths.paths.len(),
        "minimum_paths_per_playthrough": paths.minimum_paths_per_playthrough,
        "paths": paths.paths.iter().map(|p| json!({
            "fork": p.fork.as_str(),
            "option": p.option.as_str(),
            "nodes": p.nodes.iter().map(|n| n.as_str()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn navigation_value(points: &[NavigationPoint]) -> Value {
    Value::Array(
        points
            .iter()
            .map(|p| {
                json!({
                    "node": p.node.as_str(),
                    "timeline_position_ms": p.timeline_position_ms,
                    "title": p.title,
                    "category": p.category.as_str(),
                })
            })
            .collect(),
    )
}

/// `m:ss` for a duration in milliseconds.
pub fn minutes(ms: f64) -> String {
    let total = (ms / 1000.0).round() as i64;
    format!("{}:{:02}", total / 60, total % 60)
}

pub fn metrics_text(m: &SessionMetrics) -> String {
    format!(
        "correct answers        {} of {}\n\
         time spent             {} ({} ms)\n\
         active time            {} ({} ms)\n\
         optional interactions  {}\n\
         branch paths seen      {}\n\
         comments               {}\n",
        m.correct_answers,
        m.questions_available,
        minutes(m.time_spent_ms as f64),
        m.time_spent_ms,
        minutes(m.active_time_ms as f64),
        m.active_time_ms,
        m.optional_interactions,
        m.branch_paths_seen,
        m.comments,
    )
}

pub fn metrics_value(m: &SessionMetrics) -> Value {
    serde_json::to_value(MetricsDto::from(m)).expect("metrics serialize")
}

fn p_text(p: f64) -> String {
    if p < 0.001 {
        String::from("p < 0.001")
    } else {
        format!("p = {p:.3}")
    }
}

fn value_text(metric: Metric, v: f64) -> String {
    match metric {
        Metric::TimeSpent => minutes(v),
        _ => format!("{v:.2}"),
    }
}

fn summary_line(label: &str, metric: Metric, g: &GroupSummary) -> String {
    format!(
        "  {label}  n = {}  mean = {}  median = {}  sd = {}  range = {}..{}",
        g.n,
        value_text(metric, g.mean),
        value_text(metric, g.median),
        value_text(metric, g.sample_sd),
        value_text(metric, g.min),
        value_text(metric, g.max),
    )
}

fn normality_text(n: &Normality) -> String {
    match n {
        Normality::Tested(r) => format!("W = {:.3}, {}", r.statistic, p_text(r.p_two_tailed)),
        Normality::Constant => String::from("constant"),
    }
}

fn test_text(r: &TestResult) -> String {
    match r.test {
        TestKind::StudentT => format!(
            "t({}) = {:.2}, {}",
            r.df.unwrap_or_default(),
            r.statistic,
            p_text(r.p_two_tailed)
        ),
        TestKind::MannWhitneyU => {
            let mut s = format!(
                "U = {}, z = {:.3}, {}",
                r.u.unwrap_or_default(),
                r.z.unwrap_or_default(),
                p_text(r.p_two_tailed)
            );
            if let Some(exact) = r.p_exact {
                write!(s, " (exact {})", p_text(exact)).unwrap();
            }
            s
        }
        TestKind::ShapiroWilk => format!("W = {:.3}, {}", r.statistic, p_text(r.p_two_tailed)),
    }
}

fn comparison_row_text(row: &MetricComparison, labels: (&str, &str), out: &mut String) {
    writeln!(out, "{}", row.metric.as_str()).unwrap();
    writeln!(out, "{}", summary_line(labels.0, row.metric, &row.group_a)).unwrap();
    writeln!(out, "{}", summary_line(labels.1, row.metric, &row.group_b)).unwrap();
    writeln!(
        out,
        "  normality  {}: {}  {}: {}",
        labels.0,
        normality_text(&row.normality_a),
        labels.1,
        normality_text(&row.normality_b)
    )
    .unwrap();
    let test = match row.chosen_test {
        TestKind::StudentT => "Student's t",
        _ => "Mann-Whitney U",
    };
    let flag = if row.significant_at_alpha {
        format!("  significant at alpha = {}", row.alpha)
    } else {
        String::new()
    };
    writeln!(out, "  {test}: {}{flag}", test_text(&row.result)).unwrap();
}

pub fn comparison_text(report: &ComparisonReport, labels: (&str, &str)) -> String {
    let mut out = String::new();
    for (i, row) in report.metrics.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        comparison_row_text(row, labels, &mut out);
    }
    out
}

fn test_value(r: &TestResult) -> Value {
    json!({
        "test": r.test.as_str(),
        "statistic": r.statistic,
        "df": r.df,
        "u": r.u,
        "z": r.z,
        "p_two_tailed": r.p_two_tailed,
        "p_exact": r.p_exact,
    })
}

fn summary_value(g: &GroupSummary) -> Value {
    json!({
        "metric_name": g.metric_name,
        "n": g.n,
        "mean": g.mean,
        "median": g.median,
        "sample_sd": g.sample_sd,
        "min": g.min,
        "max": g.max,
        "values": g.values,
        "degenerate": g.degenerate,
    })
}

fn normality_value(n: &Normality) -> Value {
    match n {
        Normality::Tested(r) => test_value(r),
        Normality::Constant => json!({ "test": "shapiro_wilk", "constant": true }),
    }
}

pub fn comparison_value(report: &ComparisonReport) -> Value {
    json!({
        "alpha": report.alpha,
        "metrics": report.metrics.iter().map(|row| json!({
            "metric": row.metric.as_str(),
            "group_a": summary_value(&row.group_a),
            "group_b": summary_value(&row.group_b),
            "normality_a": normality_value(&row.normality_a),
            "normality_b": normality_value(&row.normality_b),
            "chosen_test": row.chosen_test.as_str(),
            "result": test_value(&row.result),
            "significant_at_alpha": row.significant_at_alpha,
            "alpha": row.alpha,
        })).collect::<Vec<_>>(),
    })
}

pub fn consensus_value(report: &ConsensusReport) -> Value {
    let counts = |c: &[vvp_core::analytics::OptionCount]| -> Value {
        c.iter()
            .map(|c| (c.option.to_string(), Value::from(c.count)))
            .collect::<serde_json::Map<_, _>>()
            .into()
    };
    json!({
        "sessions": report.sessions,
        "forks": report.forks.iter().map(|f| json!({
            "fork": f.fork.as_str(),
            "first_pass": counts(&f.first_pass),
            "additional_views": counts(&f.additional_views),
            "controversy": f.controversy,
        })).collect::<Vec<_>>(),
    })
}

pub fn digest_value(groups: &[DigestGroup]) -> Value {
    Value::Array(
        groups
            .iter()
            .map(|g| {
                json!({
                    "node": g.node.as_str(),
                    "entries": g.entries.iter().map(|e| json!({
                        "anchor": AnchorDto::from(&e.anchor),
                        "session_id": e.session_id,
                        "viewer_id": e.viewer_id,
                        "title": e.title,
                        "body": e.body.iter().map(BodyItemDto::from).collect::<Vec<_>>(),
                        "created_at": format_timestamp(e.created_at),
                    })).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}
