//! Per-method aggregates and the between-method statistics block.
//!
//! Each compared measure gets a Shapiro-Wilk W per method. When every
//! method's W reaches the threshold, the methods are compared with one-way
//! ANOVA; otherwise with Mann-Whitney U (pairwise when there are more than two
//! methods). The rule and threshold are echoed in the report.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::layout::Method;
use crate::metrics::MetricsReport;
use crate::stats::{anova_oneway, mann_whitney, mean, sample_sd, shapiro_wilk, TestResult};

pub const DEFAULT_NORMALITY_THRESHOLD: f64 = 0.90;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelectionRule {
    pub normality_threshold: f64,
}

impl Default for SelectionRule {
    fn default() -> Self {
        SelectionRule {
            normality_threshold: DEFAULT_NORMALITY_THRESHOLD,
        }
    }
}

impl SelectionRule {
    pub fn describe(&self) -> String {
        format!(
            "anova when every method's Shapiro-Wilk W >= {}, else mann-whitney",
            self.normality_threshold
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub sd: Option<f64>,
}

impl Summary {
    fn of(xs: &[f64]) -> Summary {
        Summary {
            mean: mean(xs),
            sd: sample_sd(xs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodAggregate {
    pub trials: usize,
    pub wpm: Summary,
    pub duration_s: Summary,
    pub errors: Summary,
    pub corrections: Summary,
    pub kspc: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Ok { result: TestResult },
    Skipped { reason: String },
}

impl Outcome {
    fn from(r: Result<TestResult, crate::stats::StatsError>) -> Outcome {
        match r {
            Ok(result) => Outcome::Ok { result },
            Err(e) => Outcome::Skipped { reason: e.to_string() },
        }
    }

    pub fn result(&self) -> Option<&TestResult> {
        match self {
            Outcome::Ok { result } => Some(result),
            Outcome::Skipped { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    /// `"anova"`, `"mann_whitney"`, or `"none"` with fewer than two methods.
    pub selected: &'static str,
    pub groups: Vec<Method>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureStats {
    pub normality: BTreeMap<Method, Outcome>,
    pub comparisons: Vec<Comparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub methods: BTreeMap<Method, MethodAggregate>,
    pub rule: String,
    pub normality_threshold: f64,
    /// Keyed by measure: `wpm`, `duration_s`, `errors`.
    pub stats: BTreeMap<&'static str, MeasureStats>,
}

impl ComparisonReport {
    pub fn to_pretty_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<18} {:>6} {:>16} {:>18} {:>14} {:>14}\n",
            "method", "trials", "wpm mean (sd)", "duration s (sd)", "errors", "kspc"
        ));
        let fmt = |s: &Summary| match s.sd {
            Some(sd) => format!("{:.3} ({:.3})", s.mean, sd),
            None => format!("{:.3}", s.mean),
        };
        for (m, a) in &self.methods {
            out.push_str(&format!(
                "{:<18} {:>6} {:>16} {:>18} {:>14} {:>14}\n",
                m.name(),
                a.trials,
                fmt(&a.wpm),
                fmt(&a.duration_s),
                format!("{:.3}", a.errors.mean),
                format!("{:.3}", a.kspc.mean),
            ));
        }
        out.push_str(&format!("rule: {}\n", self.rule));
        for (measure, s) in &self.stats {
            for (m, o) in &s.normality {
                match o {
                    Outcome::Ok { result } => out.push_str(&format!(
                        "{measure}: W({}) {} = {:.4}\n",
                        self.methods[m].trials, m, result.value
                    )),
                    Outcome::Skipped { reason } => out.push_str(&format!("{measure}: W {m} skipped ({reason})\n")),
                }
            }
            for c in &s.comparisons {
                let groups: Vec<_> = c.groups.iter().map(|g| g.name()).collect();
                match &c.outcome {
                    Outcome::Ok { result } => out.push_str(&format!(
                        "{measure}: {} [{}] {:?} = {:.4}, p = {}\n",
                        c.selected,
                        groups.join(" vs "),
                        result.statistic,
                        result.value,
                        result.p_value.map_or("n/a".into(), format_p),
                    )),
                    Outcome::Skipped { reason } => out.push_str(&format!(
                        "{measure}: {} [{}] skipped ({reason})\n",
                        c.selected,
                        groups.join(" vs ")
                    )),
                }
            }
        }
        out
    }
}

fn format_p(p: f64) -> String {
    if p != 0.0 && p < 1e-4 {
        format!("{p:.2e}")
    } else {
        format!("{p:.4}")
    }
}

type Measure = (&'static str, fn(&MetricsReport) -> f64);

/// Aggregate trial metrics per method and run the statistics block.
pub fn compare(trials: &[(Method, MetricsReport)], rule: SelectionRule) -> ComparisonReport {
    let mut by_method: BTreeMap<Method, Vec<&MetricsReport>> = BTreeMap::new();
    for (m, r) in trials {
        by_method.entry(*m).or_default().push(r);
    }

    let column =
        |rs: &[&MetricsReport], f: fn(&MetricsReport) -> f64| -> Vec<f64> { rs.iter().map(|r| f(r)).collect() };
    let measures: [Measure; 3] = [
        ("wpm", |r| r.wpm),
        ("duration_s", |r| r.duration_s),
        ("errors", |r| r.msd as f64),
    ];

    let methods = by_method
        .iter()
        .map(|(m, rs)| {
            (
                *m,
                MethodAggregate {
                    trials: rs.len(),
                    wpm: Summary::of(&column(rs, |r| r.wpm)),
                    duration_s: Summary::of(&column(rs, |r| r.duration_s)),
                    errors: Summary::of(&column(rs, |r| r.msd as f64)),
                    corrections: Summary::of(&column(rs, |r| r.corrections as f64)),
                    kspc: Summary::of(&column(rs, |r| r.kspc)),
                },
            )
        })
        .collect();

    let mut stats = BTreeMap::new();
    for (name, f) in measures {
        let samples: Vec<(Method, Vec<f64>)> = by_method.iter().map(|(m, rs)| (*m, column(rs, f))).collect();
        stats.insert(name, measure_stats(&samples, rule));
    }

    ComparisonReport {
        methods,
        rule: rule.describe(),
        normality_threshold: rule.normality_threshold,
        stats,
    }
}

fn measure_stats(samples: &[(Method, Vec<f64>)], rule: SelectionRule) -> MeasureStats {
    let normality: BTreeMap<Method, Outcome> = samples
        .iter()
        .map(|(m, xs)| (*m, Outcome::from(shapiro_wilk(xs))))
        .collect();

    let all_normal = normality
        .values()
        .all(|o| o.result().is_some_and(|r| r.value >= rule.normality_threshold));

    let mut comparisons = Vec::new();
    if samples.len() >= 2 {
        if all_normal {
            let groups: Vec<&[f64]> = samples.iter().map(|(_, xs)| xs.as_slice()).collect();
            comparisons.push(Comparison {
                selected: "anova",
                groups: samples.iter().map(|(m, _)| *m).collect(),
                outcome: Outcome::from(anova_oneway(&groups)),
            });
        } else {
            for (i, (ma, a)) in samples.iter().enumerate() {
                for (mb, b) in &samples[i + 1..] {
                    comparisons.push(Comparison {
                        selected: "mann_whitney",
                        groups: vec![*ma, *mb],
                        outcome: Outcome::from(mann_whitney(a, b)),
                    });
                }
            }
        }
    }
    MeasureStats { normality, comparisons }
}
