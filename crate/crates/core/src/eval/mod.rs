//! Screening metrics and mask overlap.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::imgio::{Annotation, Image};
use crate::segmentation::{
    active_contour, conservative_contour, partition_regions, region_growing, saliency_segment,
    Contour, Mask, SaliencyConfig, SegError, SnakeParams,
};
use crate::SCHEMA_VERSION;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("{predictions} predictions but {labels} labels")]
    LengthMismatch { predictions: usize, labels: usize },
    #[error("mask dimensions differ: {a:?} vs {b:?}")]
    DimensionMismatch { a: (usize, usize), b: (usize, usize) },
    #[error("overlap undefined: both masks are empty")]
    BothEmpty,
    #[error("outcome file line {line}: {message}")]
    Outcomes { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// Counts over paired outcomes, `true` meaning positive.
pub fn confusion(predictions: &[bool], labels: &[bool]) -> Result<ConfusionMatrix, EvalError> {
    if predictions.len() != labels.len() {
        return Err(EvalError::LengthMismatch {
            predictions: predictions.len(),
            labels: labels.len(),
        });
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &l) in predictions.iter().zip(labels) {
        match (p, l) {
            (true, true) => cm.tp += 1,
            (true, false) => cm.fp += 1,
            (false, false) => cm.tn += 1,
            (false, true) => cm.fn_ += 1,
        }
    }
    Ok(cm)
}

/// `None` where the denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScreeningMetrics {
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
    pub fnr: Option<f64>,
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn screening_metrics(cm: &ConfusionMatrix) -> ScreeningMetrics {
    ScreeningMetrics {
        sensitivity: ratio(cm.tp, cm.tp + cm.fn_),
        specificity: ratio(cm.tn, cm.tn + cm.fp),
        fnr: ratio(cm.fn_, cm.tp + cm.fn_),
        accuracy: ratio(cm.tp + cm.tn, cm.total()),
        precision: ratio(cm.tp, cm.tp + cm.fp),
    }
}

fn parse_outcome(token: &str) -> Option<bool> {
    match token.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "positive" | "pos" => Some(true),
        "0" | "false" | "negative" | "neg" => Some(false),
        _ => None,
    }
}

/// Reads a `prediction,label` CSV. Accepts 1/0, true/false, positive/negative
/// and pos/neg, case-insensitive. Returns `(predictions, labels)`.
pub fn parse_outcomes_csv(text: &str) -> Result<(Vec<bool>, Vec<bool>), EvalError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let err = |line: usize, message: String| EvalError::Outcomes { line, message };
    let headers = reader.headers().map_err(|e| err(1, e.to_string()))?.clone();
    if headers.len() != 2 || &headers[0] != "prediction" || &headers[1] != "label" {
        return Err(err(1, "expected header `prediction,label`".into()));
    }
    let (mut preds, mut labels) = (Vec::new(), Vec::new());
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| err(line, e.to_string()))?;
        if record.len() != 2 {
            return Err(err(line, format!("expected 2 fields, found {}", record.len())));
        }
        let p = parse_outcome(&record[0])
            .ok_or_else(|| err(line, format!("bad prediction `{}`", &record[0])))?;
        let l = parse_outcome(&record[1])
            .ok_or_else(|| err(line, format!("bad label `{}`", &record[1])))?;
        preds.push(p);
        labels.push(l);
    }
    Ok((preds, labels))
}

/// Overlap scores of one mask pair. `hausdorff` is `None` when exactly one
/// mask is empty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    pub dice: f64,
    pub jaccard: f64,
    pub hausdorff: Option<f64>,
}

pub fn overlap(a: &Mask, b: &Mask) -> Result<Overlap, EvalError> {
    if !a.same_dims(b) {
        return Err(EvalError::DimensionMismatch {
            a: (a.width(), a.height()),
            b: (b.width(), b.height()),
        });
    }
    let (na, nb) = (a.count(), b.count());
    if na == 0 && nb == 0 {
        return Err(EvalError::BothEmpty);
    }
    let inter = a.bits().iter().zip(b.bits()).filter(|(x, y)| **x && **y).count();
    let union = na + nb - inter;
    let hausdorff = if na == 0 || nb == 0 {
        None
    } else {
        Some(hausdorff(a, b))
    };
    Ok(Overlap {
        dice: 2.0 * inter as f64 / (na + nb) as f64,
        jaccard: inter as f64 / union as f64,
        hausdorff,
    })
}

/// Symmetric Hausdorff distance between the boundary pixels of two non-empty
/// masks, Euclidean.
pub fn hausdorff(a: &Mask, b: &Mask) -> f64 {
    let ba = RowIndex::new(&a.boundary());
    let bb = RowIndex::new(&b.boundary());
    directed(&ba, &bb).max(directed(&bb, &ba)).sqrt()
}

/// Boundary pixels bucketed by row, each row sorted by x.
struct RowIndex {
    rows: Vec<Vec<i64>>,
}

impl RowIndex {
    fn new(mask: &Mask) -> Self {
        let mut rows = vec![Vec::new(); mask.height()];
        for (x, y) in mask.iter_set() {
            rows[y].push(x as i64);
        }
        RowIndex { rows }
    }

    fn points(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(y, xs)| xs.iter().map(move |&x| (x, y as i64)))
    }

    /// Squared distance from `(x, y)` to the nearest point in the index.
    fn nearest_sq(&self, x: i64, y: i64) -> i64 {
        let mut best = i64::MAX;
        let h = self.rows.len() as i64;
        for dy in 0..h {
            if dy * dy >= best {
                break;
            }
            let rows = if dy == 0 { [y, -1] } else { [y - dy, y + dy] };
            for ry in rows {
                if ry < 0 || ry >= h {
                    continue;
                }
                let xs = &self.rows[ry as usize];
                let i = xs.partition_point(|&v| v < x);
                for nx in [i.checked_sub(1), Some(i)].into_iter().flatten().filter_map(|j| xs.get(j)) {
                    best = best.min((nx - x).pow(2) + dy * dy);
                }
            }
        }
        best
    }
}

fn directed(from: &RowIndex, to: &RowIndex) -> f64 {
    from.points()
        .map(|(x, y)| to.nearest_sq(x, y))
        .max()
        .unwrap_or(0) as f64
}

/// Filled disc of an annotation's mass, in top-left coordinates.
pub fn annotation_disc(annotation: &Annotation, width: usize, height: usize) -> Option<Mask> {
    let (cx, cy) = annotation.seed(height)?;
    let r = annotation.radius? as i64;
    let (cx, cy) = (cx as i64, cy as i64);
    Some(Mask::from_fn(width, height, |x, y| {
        let (dx, dy) = (x as i64 - cx, y as i64 - cy);
        dx * dx + dy * dy <= r * r
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Saliency,
    RegionGrowing,
    ActiveContour,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Saliency, Method::RegionGrowing, Method::ActiveContour];

    pub fn name(self) -> &'static str {
        match self {
            Method::Saliency => "saliency",
            Method::RegionGrowing => "region_growing",
            Method::ActiveContour => "active_contour",
        }
    }
}

/// Settings of all three segmentation methods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct MethodConfig {
    pub saliency: SaliencyConfig,
    /// Region-growing tolerance in gray levels; `None` uses `max_gray / 8`.
    pub rg_tau: Option<u32>,
    pub snake: SnakeParams,
    /// Initial circle radius for the active contour. `None` uses 1.5 × the
    /// bootstrap contour's largest centroid distance, or 32 px when the
    /// bootstrap fails.
    pub ac_init_radius: Option<f64>,
}

impl MethodConfig {
    pub fn rg_tau(&self, image: &Image) -> u32 {
        self.rg_tau.unwrap_or(image.max_gray() as u32 / 8)
    }

    pub fn ac_init_radius(&self, image: &Image, seed: (usize, usize)) -> f64 {
        self.ac_init_radius.unwrap_or_else(|| {
            conservative_contour(image, seed, &self.saliency.contour)
                .and_then(|c| partition_regions(&c, image.width(), image.height()))
                .map(|p| 1.5 * p.d_max)
                .unwrap_or(32.0)
        })
    }
}

/// Segments `image` from `seed` with one method.
pub fn run_method(
    image: &Image,
    seed: (usize, usize),
    method: Method,
    config: &MethodConfig,
) -> Result<Mask, SegError> {
    let (w, h) = (image.width(), image.height());
    if seed.0 >= w || seed.1 >= h {
        return Err(SegError::SeedOutOfBounds { seed, width: w, height: h });
    }
    match method {
        Method::Saliency => saliency_segment(image, seed, &config.saliency),
        Method::RegionGrowing => region_growing(image, seed, config.rg_tau(image)),
        Method::ActiveContour => {
            let r = config.ac_init_radius(image, seed);
            let init = Contour::circle((seed.0 as f64, seed.1 as f64), r, w, h)?;
            Ok(active_contour(image, &init, &config.snake)?.fill(w, h))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapRow {
    pub method: String,
    pub dice: Option<f64>,
    pub jaccard: Option<f64>,
    pub hausdorff: Option<f64>,
    pub pixels: Option<usize>,
    pub error: Option<String>,
    #[serde(skip)]
    pub mask: Option<Mask>,
}

impl OverlapRow {
    pub fn scored(method: &str, result: Result<Mask, String>, truth: &Mask) -> OverlapRow {
        let mut row = OverlapRow {
            method: method.to_string(),
            dice: None,
            jaccard: None,
            hausdorff: None,
            pixels: None,
            error: None,
            mask: None,
        };
        match result.and_then(|m| overlap(&m, truth).map(|o| (m, o)).map_err(|e| e.to_string())) {
            Ok((m, o)) => {
                row.dice = Some(o.dice);
                row.jaccard = Some(o.jaccard);
                row.hausdorff = o.hausdorff;
                row.pixels = Some(m.count());
                row.mask = Some(m);
            }
            Err(e) => row.error = Some(e),
        }
        row
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub schema_version: u32,
    pub seed: (usize, usize),
    /// Where the ground truth came from, e.g. `phantom` or `annotation_disc`.
    pub ground_truth: String,
    pub note: Option<String>,
    pub rows: Vec<OverlapRow>,
}

pub const ANNOTATION_DISC_NOTE: &str =
    "ground truth is the annotated disc (center, radius); it does not follow the mass outline";

fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.digits$}"))
}

impl OverlapReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// Aligned-column text table.
    pub fn to_table(&self) -> String {
        let header = ["method", "dice", "jaccard", "hausdorff", "pixels", "status"];
        let mut rows: Vec<[String; 6]> = vec![header.map(String::from)];
        for r in &self.rows {
            rows.push([
                r.method.clone(),
                fmt_opt(r.dice, 4),
                fmt_opt(r.jaccard, 4),
                fmt_opt(r.hausdorff, 2),
                r.pixels.map_or_else(|| "-".into(), |p| p.to_string()),
                r.error.clone().unwrap_or_else(|| "ok".into()),
            ]);
        }
        let widths: Vec<usize> = (0..6)
            .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for r in &rows {
            let line: Vec<String> = r
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(c, (s, w))| if c == 5 { s.clone() } else { format!("{s:<w$}") })
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        if let Some(note) = &self.note {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}

/// Runs every method from one seed and scores each against `truth`. A
/// failing method yields a row carrying its error.
pub fn compare_methods(
    image: &Image,
    seed: (usize, usize),
    truth: &Mask,
    config: &MethodConfig,
) -> OverlapReport {
    let rows = Method::ALL
        .iter()
        .map(|&m| {
            let result = run_method(image, seed, m, config).map_err(|e| e.to_string());
            OverlapRow::scored(m.name(), result, truth)
        })
        .collect();
    OverlapReport {
        schema_version: SCHEMA_VERSION,
        seed,
        ground_truth: "phantom".into(),
        note: None,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcomes(cm: ConfusionMatrix) -> (Vec<bool>, Vec<bool>) {
        let mut p = Vec::new();
        let mut l = Vec::new();
        for (n, pred, lab) in [
            (cm.tp, true, true),
            (cm.fp, true, false),
            (cm.tn, false, false),
            (cm.fn_, false, true),
        ] {
            p.extend(std::iter::repeat_n(pred, n));
            l.extend(std::iter::repeat_n(lab, n));
        }
        (p, l)
    }

    #[test]
    fn table_three_counts_and_rates() {
        let big = ConfusionMatrix { tp: 39, fp: 27, tn: 511, fn_: 21 };
        let (p, l) = outcomes(big);
        let cm = confusion(&p, &l).unwrap();
        assert_eq!(cm, big);
        assert_eq!(cm.total(), 598);
        let m = screening_metrics(&cm);
        assert!((m.sensitivity.unwrap() - 0.650).abs() < 1e-3);
        assert!((m.specificity.unwrap() - 0.9498).abs() < 1e-3);
        assert!((m.fnr.unwrap() - 0.350).abs() < 1e-3);

        let small = ConfusionMatrix { tp: 6, fp: 0, tn: 5, fn_: 10 };
        let (p, l) = outcomes(small);
        let m = screening_metrics(&confusion(&p, &l).unwrap());
        assert_eq!(m.sensitivity, Some(0.375));
        assert_eq!(m.specificity, Some(1.0));
        assert_eq!(m.fnr, Some(0.625));
    }

    #[test]
    fn zero_denominators_are_undefined() {
        let m = screening_metrics(&ConfusionMatrix { tp: 0, fp: 0, tn: 4, fn_: 0 });
        assert_eq!(m.sensitivity, None);
        assert_eq!(m.fnr, None);
        assert_eq!(m.precision, None);
        assert_eq!(m.specificity, Some(1.0));
        let m = screening_metrics(&ConfusionMatrix { tp: 3, fp: 1, tn: 0, fn_: 0 });
        assert_eq!((m.sensitivity, m.fnr), (Some(1.0), Some(0.0)));
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            confusion(&[true], &[]),
            Err(EvalError::LengthMismatch { predictions: 1, labels: 0 })
        ));
    }

    #[test]
    fn outcome_csv() {
        let (p, l) = parse_outcomes_csv("prediction,label\n1,0\nPositive,neg\nfalse,TRUE\n").unwrap();
        assert_eq!(p, vec![true, true, false]);
        assert_eq!(l, vec![false, false, true]);
        assert!(parse_outcomes_csv("pred,label\n1,0\n").is_err());
        assert!(matches!(
            parse_outcomes_csv("prediction,label\n1,maybe\n"),
            Err(EvalError::Outcomes { line: 2, .. })
        ));
    }

    #[test]
    fn overlap_half_shared() {
        // Two 10x10 squares sharing a 10x5 strip.
        let a = Mask::from_fn(40, 40, |x, y| (5..15).contains(&x) && (5..15).contains(&y));
        let b = Mask::from_fn(40, 40, |x, y| (5..15).contains(&x) && (10..20).contains(&y));
        let o = overlap(&a, &b).unwrap();
        assert_eq!(o.dice, 0.5);
        assert!((o.jaccard - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(o.hausdorff, Some(5.0));
    }

    #[test]
    fn overlap_edge_cases() {
        let a = Mask::from_fn(20, 20, |x, y| x < 5 && y < 5);
        let o = overlap(&a, &a).unwrap();
        assert_eq!((o.dice, o.jaccard, o.hausdorff), (1.0, 1.0, Some(0.0)));
        let b = Mask::from_fn(20, 20, |x, y| x > 10 && y > 10);
        let o = overlap(&a, &b).unwrap();
        assert_eq!((o.dice, o.jaccard), (0.0, 0.0));
        let empty = Mask::new(20, 20);
        assert_eq!(overlap(&empty, &empty), Err(EvalError::BothEmpty));
        assert_eq!(overlap(&a, &empty).unwrap().hausdorff, None);
        assert!(matches!(overlap(&a, &Mask::new(5, 5)), Err(EvalError::DimensionMismatch { .. })));
    }

    #[test]
    fn hausdorff_matches_brute_force() {
        let a = Mask::from_fn(50, 50, |x, y| {
            let (dx, dy) = (x as f64 - 20.0, y as f64 - 22.0);
            dx * dx + dy * dy <= 100.0
        });
        let b = Mask::from_fn(50, 50, |x, y| (30..45).contains(&x) && (3..12).contains(&y));
        let (ba, bb) = (a.boundary(), b.boundary());
        let dir = |p: &Mask, q: &Mask| {
            p.iter_set()
                .map(|(x, y)| {
                    q.iter_set()
                        .map(|(u, v)| ((x as f64 - u as f64).powi(2) + (y as f64 - v as f64).powi(2)).sqrt())
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        let brute = dir(&ba, &bb).max(dir(&bb, &ba));
        assert_eq!(hausdorff(&a, &b), brute);
    }

    #[test]
    fn table_is_aligned() {
        let report = OverlapReport {
            schema_version: SCHEMA_VERSION,
            seed: (1, 2),
            ground_truth: "annotation_disc".into(),
            note: Some(ANNOTATION_DISC_NOTE.into()),
            rows: vec![
                OverlapRow::scored("saliency", Ok(Mask::from_fn(4, 4, |x, _| x < 2)), &Mask::from_fn(4, 4, |x, _| x < 2)),
                OverlapRow::scored("region_growing", Err("NoContrast".into()), &Mask::new(4, 4)),
            ],
        };
        let t = report.to_table();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 4);
        let col = lines[0].find("dice").unwrap();
        assert_eq!(lines[1].find("1.0000").unwrap(), col);
        assert!(lines[2].ends_with("NoContrast"));
        assert!(lines[3].starts_with("note:"));
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["schema_version"], 1);
        assert_eq!(json["rows"][1]["error"], "NoContrast");
    }
}
