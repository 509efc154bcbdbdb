//! Multi-class evaluation: confusion matrix, per-class and macro
//! precision/recall/F1, accuracy.

use serde::Serialize;
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("label {0:?} is not in the declared class set")]
    UnknownLabel(String),
    #[error("cannot compute metrics over zero evaluated pairs")]
    EmptyMatrix,
}

/// Rows are truth, columns are prediction, both in the declared class
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix<L> {
    pub classes: Vec<L>,
    pub counts: Vec<Vec<u64>>,
}

impl<L: Clone + Eq + fmt::Display> ConfusionMatrix<L> {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    fn index_of(&self, label: &L) -> Result<usize, EvalError> {
        self.classes
            .iter()
            .position(|c| c == label)
            .ok_or_else(|| EvalError::UnknownLabel(label.to_string()))
    }
}

/// Tallies (truth, predicted) pairs against a class set fixed in advance.
pub fn confusion<L: Clone + Eq + fmt::Display>(
    classes: &[L],
    pairs: &[(L, L)],
) -> Result<ConfusionMatrix<L>, EvalError> {
    let n = classes.len();
    let mut cm = ConfusionMatrix {
        classes: classes.to_vec(),
        counts: vec![vec![0u64; n]; n],
    };
    for (truth, predicted) in pairs {
        let i = cm.index_of(truth)?;
        let j = cm.index_of(predicted)?;
        cm.counts[i][j] += 1;
    }
    Ok(cm)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Number of evaluated pairs whose truth is this class.
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub per_class: Vec<ClassMetrics>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub accuracy: f64,
}

fn safe_div(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Per-class precision/recall/F1 with the zero-denominator convention of
/// zero, macro (unweighted) averages, and accuracy = trace / total.
pub fn metrics<L: Clone + Eq + fmt::Display>(
    cm: &ConfusionMatrix<L>,
) -> Result<MetricsReport, EvalError> {
    metrics_excluding(cm, &[])
}

/// Like [`metrics`], but the listed classes are left out of the macro
/// averages (they keep their per-class rows and still count toward
/// accuracy). Used to keep the abstention label out of the averages.
pub fn metrics_excluding<L: Clone + Eq + fmt::Display>(
    cm: &ConfusionMatrix<L>,
    exclude_from_macro: &[L],
) -> Result<MetricsReport, EvalError> {
    let total = cm.total();
    if total == 0 {
        return Err(EvalError::EmptyMatrix);
    }
    let n = cm.classes.len();

    let mut per_class = Vec::with_capacity(n);
    for i in 0..n {
        let tp = cm.counts[i][i] as f64;
        let row: u64 = cm.counts[i].iter().sum();
        let col: u64 = (0..n).map(|r| cm.counts[r][i]).sum();
        let precision = safe_div(tp, col as f64);
        let recall = safe_div(tp, row as f64);
        let f1 = safe_div(2.0 * precision * recall, precision + recall);
        per_class.push(ClassMetrics {
            class: cm.classes[i].to_string(),
            precision,
            recall,
            f1,
            support: row,
        });
    }

    let averaged: Vec<&ClassMetrics> = per_class
        .iter()
        .zip(&cm.classes)
        .filter(|(_, c)| !exclude_from_macro.contains(c))
        .map(|(m, _)| m)
        .collect();
    let k = averaged.len() as f64;
    let macro_precision = safe_div(averaged.iter().map(|m| m.precision).sum(), k);
    let macro_recall = safe_div(averaged.iter().map(|m| m.recall).sum(), k);
    let macro_f1 = safe_div(averaged.iter().map(|m| m.f1).sum(), k);

    let trace: u64 = (0..n).map(|i| cm.counts[i][i]).sum();
    Ok(MetricsReport {
        per_class,
        macro_precision,
        macro_recall,
        macro_f1,
        accuracy: trace as f64 / total as f64,
    })
}

impl MetricsReport {
    /// Support-weighted averages, as an alternative to the macro default.
    pub fn weighted(&self) -> (f64, f64, f64) {
        let total: u64 = self.per_class.iter().map(|m| m.support).sum();
        if total == 0 {
            return (0.0, 0.0, 0.0);
        }
        let w = |f: fn(&ClassMetrics) -> f64| {
            self.per_class
                .iter()
                .map(|m| f(m) * m.support as f64)
                .sum::<f64>()
                / total as f64
        };
        (w(|m| m.precision), w(|m| m.recall), w(|m| m.f1))
    }

    /// Aligned plain-text table with one row per class plus the summary.
    pub fn to_table(&self) -> String {
        let mut width = "macro average".len();
        for m in &self.per_class {
            width = width.max(m.class.len());
        }
        let mut out = String::new();
        out.push_str(&format!(
            "{:<width$}  {:>9}  {:>9}  {:>8}  {:>8}\n",
            "Class", "Precision", "Recall", "F1-score", "Support"
        ));
        for m in &self.per_class {
            out.push_str(&format!(
                "{:<width$}  {:>9.3}  {:>9.3}  {:>8.3}  {:>8}\n",
                m.class, m.precision, m.recall, m.f1, m.support
            ));
        }
        out.push_str(&format!(
            "{:<width$}  {:>9.3}  {:>9.3}  {:>8.3}\n",
            "macro average", self.macro_precision, self.macro_recall, self.macro_f1
        ));
        out.push_str(&format!("{:<width$}  {:.3}\n", "accuracy", self.accuracy));
        out
    }
}
