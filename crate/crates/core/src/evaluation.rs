//! Correlation and classification metrics against annotated document pairs.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("pairs line {line}: {message}")]
    Pairs { line: usize, message: String },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least two observations, got {0}")]
    TooFew(usize),
    #[error("correlation undefined for a constant sequence")]
    Constant,
    #[error("no pairs evaluated")]
    Empty,
    #[error("incalculable: {0} has a zero denominator")]
    Incalculable(&'static str),
    #[error("thresholds must be sorted ascending")]
    UnsortedThresholds,
    #[error("bad threshold list: {0}")]
    BadThresholds(String),
}

/// A document pair with its binary and five-level human judgements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnnotatedPair {
    pub did_a: String,
    pub did_b: String,
    /// 0 or 1.
    pub label2: u8,
    /// 1 to 5.
    pub label5: u8,
}

/// Parsed pair file plus the lines that repeated an earlier pair.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PairFile {
    pub pairs: Vec<AnnotatedPair>,
    pub duplicate_lines: Vec<usize>,
}

/// `did_a <TAB> did_b <TAB> label2 <TAB> label5` lines; `#` comments.
/// A pair seen again (in either order) is reported and skipped.
pub fn load_pair_file(source: &str) -> Result<PairFile, EvalError> {
    let mut out = PairFile::default();
    let mut seen: HashSet<(String, String)> = HashSet::new();
    for (n, line) in source.lines().enumerate() {
        let line_no = n + 1;
        let err = |message: String| EvalError::Pairs {
            line: line_no,
            message,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
        let [a, b, l2, l5] = fields[..] else {
            return Err(err(format!(
                "expected 4 tab-separated fields, found {}",
                fields.len()
            )));
        };
        if a.is_empty() || b.is_empty() {
            return Err(err("empty document id".into()));
        }
        let label2 = l2
            .parse::<u8>()
            .ok()
            .filter(|v| *v <= 1)
            .ok_or_else(|| err(format!("label2 must be 0 or 1, found {l2:?}")))?;
        let label5 = l5
            .parse::<u8>()
            .ok()
            .filter(|v| (1..=5).contains(v))
            .ok_or_else(|| err(format!("label5 must be an integer in 1..=5, found {l5:?}")))?;
        let key = if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        };
        if !seen.insert(key) {
            log::warn!(
                "pairs line {line_no}: duplicate pair {a} {b}, keeping the first occurrence"
            );
            out.duplicate_lines.push(line_no);
            continue;
        }
        out.pairs.push(AnnotatedPair {
            did_a: a.into(),
            did_b: b.into(),
            label2,
            label5,
        });
    }
    Ok(out)
}

pub fn load_pairs(source: &str) -> Result<Vec<AnnotatedPair>, EvalError> {
    load_pair_file(source).map(|f| f.pairs)
}

/// Pearson correlation coefficient from population moments.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, EvalError> {
    if x.len() != y.len() {
        return Err(EvalError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(EvalError::TooFew(x.len()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(EvalError::Constant);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }
}

/// Predicts similar when `score > threshold`.
pub fn confusion_at_threshold(
    scores: &[f64],
    labels: &[bool],
    threshold: f64,
) -> Result<ConfusionCounts, EvalError> {
    if scores.len() != labels.len() {
        return Err(EvalError::LengthMismatch(scores.len(), labels.len()));
    }
    let mut c = ConfusionCounts::default();
    for (&s, &l) in scores.iter().zip(labels) {
        match (s > threshold, l) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, true) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

pub fn accuracy(c: &ConfusionCounts) -> Result<f64, EvalError> {
    match c.total() {
        0 => Err(EvalError::Empty),
        total => Ok((c.tp + c.tn) as f64 / total as f64),
    }
}

pub fn precision(c: &ConfusionCounts) -> Result<f64, EvalError> {
    match c.tp + c.fp {
        0 => Err(EvalError::Incalculable("precision")),
        d => Ok(c.tp as f64 / d as f64),
    }
}

pub fn recall(c: &ConfusionCounts) -> Result<f64, EvalError> {
    match c.tp + c.fn_ {
        0 => Err(EvalError::Incalculable("recall")),
        d => Ok(c.tp as f64 / d as f64),
    }
}

/// `(1 + β²)·P·R / (β²·P + R)`; 0 when precision and recall are both 0.
pub fn f_score(c: &ConfusionCounts, beta: f64) -> Result<f64, EvalError> {
    let (p, r) = (precision(c)?, recall(c)?);
    let b2 = beta * beta;
    let denom = b2 * p + r;
    Ok(if denom == 0.0 {
        0.0
    } else {
        (1.0 + b2) * p * r / denom
    })
}

/// `0.05, 0.10, ..., 0.95`.
pub fn default_grid() -> Vec<f64> {
    (1..=19).map(|i| (i * 5) as f64 / 100.0).collect()
}

/// Comma-separated thresholds, or `start:stop:step` (inclusive).
pub fn parse_thresholds(text: &str) -> Result<Vec<f64>, EvalError> {
    let bad = || EvalError::BadThresholds(text.to_string());
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let out: Vec<f64> = if let [start, stop, step] = parts[..] {
        let (start, stop, step): (f64, f64, f64) = (
            start.parse().map_err(|_| bad())?,
            stop.parse().map_err(|_| bad())?,
            step.parse().map_err(|_| bad())?,
        );
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(bad());
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        // round to the step's decimal places so 0.1 + 2*0.05 prints as 0.2
        let scale = 1e9;
        (0..=n)
            .map(|i| ((start + i as f64 * step) * scale).round() / scale)
            .collect()
    } else {
        text.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?
    };
    if out.is_empty() || out.iter().any(|t| !t.is_finite()) {
        return Err(bad());
    }
    if out.windows(2).any(|w| w[0] > w[1]) {
        return Err(EvalError::UnsortedThresholds);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub threshold: f64,
    pub counts: ConfusionCounts,
    pub accuracy: Option<f64>,
    /// `None` when precision or recall is incalculable.
    pub f1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
}

impl Sweep {
    fn best(&self, pick: impl Fn(&SweepRow) -> Option<f64>) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for row in &self.rows {
            if let Some(v) = pick(row) {
                if best.is_none_or(|(_, b)| v > b) {
                    best = Some((row.threshold, v));
                }
            }
        }
        best
    }

    /// `(threshold, accuracy)`; the lowest threshold wins ties.
    pub fn best_accuracy(&self) -> Option<(f64, f64)> {
        self.best(|r| r.accuracy)
    }

    /// `(threshold, f1)`; the lowest threshold wins ties.
    pub fn best_f1(&self) -> Option<(f64, f64)> {
        self.best(|r| r.f1)
    }
}

/// One row per threshold; per-row failures are recorded, not raised.
pub fn threshold_sweep(
    scores: &[f64],
    labels: &[bool],
    thresholds: &[f64],
) -> Result<Sweep, EvalError> {
    if thresholds.windows(2).any(|w| w[0] > w[1]) {
        return Err(EvalError::UnsortedThresholds);
    }
    let rows = thresholds
        .iter()
        .map(|&t| {
            let counts = confusion_at_threshold(scores, labels, t)?;
            Ok(SweepRow {
                threshold: t,
                counts,
                accuracy: accuracy(&counts).ok(),
                f1: f_score(&counts, 1.0).ok(),
            })
        })
        .collect::<Result<_, EvalError>>()?;
    Ok(Sweep { rows })
}

/// Sweep plus correlations against both label levels.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub sweep: Sweep,
    pub pearson_5level: Option<f64>,
    pub pearson_2level: Option<f64>,
}

impl EvalReport {
    pub fn compute(
        scores: &[f64],
        pairs: &[AnnotatedPair],
        thresholds: &[f64],
    ) -> Result<Self, EvalError> {
        if scores.len() != pairs.len() {
            return Err(EvalError::LengthMismatch(scores.len(), pairs.len()));
        }
        if pairs.is_empty() {
            return Err(EvalError::Empty);
        }
        let labels: Vec<bool> = pairs.iter().map(|p| p.label2 == 1).collect();
        let y2: Vec<f64> = pairs.iter().map(|p| f64::from(p.label2)).collect();
        let y5: Vec<f64> = pairs.iter().map(|p| f64::from(p.label5)).collect();
        Ok(Self {
            sweep: threshold_sweep(scores, &labels, thresholds)?,
            pearson_5level: pearson(scores, &y5).ok(),
            pearson_2level: pearson(scores, &y2).ok(),
        })
    }

    /// `threshold,accuracy,f1` rows followed by `key=value` summary lines.
    pub fn to_csv(&self) -> String {
        let fmt =
            |v: Option<f64>, missing: &str| v.map_or(missing.to_string(), |x| format!("{x:.6}"));
        let mut out = String::from("threshold,accuracy,f1\n");
        for r in &self.sweep.rows {
            let _ = writeln!(
                out,
                "{},{},{}",
                r.threshold,
                fmt(r.accuracy, "undefined"),
                fmt(r.f1, "incalculable")
            );
        }
        let acc = self.sweep.best_accuracy();
        let f1 = self.sweep.best_f1();
        let thr = |b: Option<(f64, f64)>| b.map_or("none".to_string(), |(t, _)| t.to_string());
        let _ = writeln!(out, "best_accuracy={}", fmt(acc.map(|b| b.1), "undefined"));
        let _ = writeln!(out, "best_accuracy_threshold={}", thr(acc));
        let _ = writeln!(out, "best_f1={}", fmt(f1.map(|b| b.1), "incalculable"));
        let _ = writeln!(out, "best_f1_threshold={}", thr(f1));
        let _ = writeln!(
            out,
            "pearson_5level={}",
            fmt(self.pearson_5level, "undefined")
        );
        let _ = writeln!(
            out,
            "pearson_2level={}",
            fmt(self.pearson_2level, "undefined")
        );
        out
    }
}
