//! The `mamseg` command-line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O or invalid input,
//! 3 segmentation failure, 4 model or dataset schema mismatch.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::eval::{
    annotation_disc, confusion, parse_outcomes_csv, run_method, screening_metrics,
    ConfusionMatrix, Method, MethodConfig, OverlapReport, OverlapRow, ScreeningMetrics,
    ANNOTATION_DISC_NOTE,
};
use crate::features::{extract_from_mask, parse_feature_csv, write_feature_csv, FeatureError, FeatureRow};
use crate::imgio::{
    parse_annotations, parse_pgm, synth_phantom, write_pgm, Annotation, Image, PgmVariant,
    PhantomShape, PhantomSpec,
};
use crate::learn::{train, Algorithm, Dataset, LearnError, ModelFile};
use crate::segmentation::{Mask, SegError};
use crate::SCHEMA_VERSION;

pub use output::{default_out_dir, write_atomic};

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub const USAGE: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const SEGMENTATION: u8 = 3;
    pub const SCHEMA: u8 = 4;

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::input(format!("{}: {e}", path.display()))
    }

    fn input(message: impl Into<String>) -> Self {
        CliError { code: Self::INPUT, message: message.into() }
    }

    fn schema(message: impl Into<String>) -> Self {
        CliError { code: Self::SCHEMA, message: message.into() }
    }

    fn seg(e: SegError) -> Self {
        CliError { code: Self::SEGMENTATION, message: e.to_string() }
    }

    fn learn(e: LearnError) -> Self {
        match e {
            LearnError::SchemaVersion { .. } | LearnError::Format(_) | LearnError::UnknownLabel(_) => {
                CliError::schema(e.to_string())
            }
            other => CliError::input(other.to_string()),
        }
    }

    fn features(e: FeatureError) -> Self {
        match e {
            FeatureError::Csv { line: 1, .. } => CliError::schema(e.to_string()),
            other => CliError::input(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mamseg", version, about = "Seeded mass segmentation, shape features and classifiers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Segment a mass from a seed point.
    Segment(SegmentArgs),
    /// Append one feature row for an image and its mask.
    Features(FeaturesArgs),
    /// Train a classifier or clusterer on a feature CSV.
    Train(TrainArgs),
    /// Screening metrics from a model and dataset, or from an outcome file.
    Evaluate(EvaluateArgs),
    /// Run every segmentation method and score each against ground truth.
    Compare(CompareArgs),
    /// Render a synthetic phantom and its ground-truth mask.
    Phantom(PhantomArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Saliency,
    Rg,
    Ac,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Saliency => Method::Saliency,
            MethodArg::Rg => Method::RegionGrowing,
            MethodArg::Ac => Method::ActiveContour,
        }
    }
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// Seed pixel `x,y`, top-left origin.
    #[arg(long, value_parser = parse_pair, conflicts_with = "annotation")]
    pub seed: Option<(usize, usize)>,
    /// Seed from an annotation file: `FILE:RECORD_ID`. MIAS centers are
    /// converted to top-left coordinates.
    #[arg(long)]
    pub annotation: Option<String>,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    /// Input PGM.
    pub image: PathBuf,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Saliency)]
    pub method: MethodArg,
    /// Method settings as JSON; unknown keys are rejected.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory. Defaults to `$MAMSEG_OUT_DIR`, else `.`.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Also write the outline as SVG.
    #[arg(long)]
    pub svg: bool,
    /// Record wall-clock timings in the JSON summary.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct FeaturesArgs {
    pub image: PathBuf,
    /// Mask PGM; any non-zero pixel is inside.
    pub mask: PathBuf,
    /// CSV to append to; created with a header when missing. Prints to
    /// stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Row id. Defaults to the image file stem.
    #[arg(long)]
    pub id: Option<String>,
    /// Class label, e.g. B or M.
    #[arg(long)]
    pub label: Option<String>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Feature CSV.
    pub dataset: PathBuf,
    /// tree, knn, naive_bayes, kmeans, fcm, pam or svm.
    #[arg(long, default_value = "knn")]
    pub algorithm: String,
    /// Full algorithm settings as JSON, e.g. `{"algorithm":"knn","k":1}`.
    /// Overrides --algorithm.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override one setting, `KEY=VALUE` (JSON value). Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Seed of randomised trainers (kmeans, fcm, svm).
    #[arg(long)]
    pub rng_seed: Option<u64>,
    /// Model JSON path. Defaults to `model.json` in the output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long, requires = "dataset", conflicts_with = "outcomes")]
    pub model: Option<PathBuf>,
    /// Labelled feature CSV.
    #[arg(long, requires = "model")]
    pub dataset: Option<PathBuf>,
    /// `prediction,label` CSV of binary outcomes.
    #[arg(long, required_unless_present = "model")]
    pub outcomes: Option<PathBuf>,
    /// Class name counted as positive.
    #[arg(long, default_value = "M")]
    pub positive: String,
    /// Metrics JSON path. Defaults to `metrics.json` in the output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Input PGM; not used with --phantom.
    #[arg(required_unless_present = "phantom", conflicts_with = "phantom")]
    pub image: Option<PathBuf>,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Ground-truth mask PGM. Without it an annotation's disc is used.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Phantom JSON written by `mamseg phantom`; supplies image, truth and
    /// seed.
    #[arg(long)]
    pub phantom: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub svg: bool,
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct PhantomArgs {
    /// Phantom spec JSON; overrides the shape flags.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 256)]
    pub size: usize,
    /// Disc center `x,y`; defaults to the image center.
    #[arg(long, value_parser = parse_fpair)]
    pub center: Option<(f64, f64)>,
    #[arg(long, default_value_t = 40.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 200)]
    pub fg: u16,
    #[arg(long, default_value_t = 50)]
    pub bg: u16,
    /// Gaussian noise sigma in gray levels.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Base name of the written files.
    #[arg(long, default_value = "phantom")]
    pub name: String,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Write plain (P2) instead of raw (P5) PGM.
    #[arg(long)]
    pub plain: bool,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected x,y")?;
    let p = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

fn parse_fpair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected x,y")?;
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

/// On-disk phantom description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhantomFile {
    pub schema_version: u32,
    pub spec: PhantomSpec,
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { CliError::USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Segment(a) => segment(a),
        Command::Features(a) => features(a),
        Command::Train(a) => train_cmd(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Compare(a) => compare(a),
        Command::Phantom(a) => phantom(a),
    }
}

fn load_image(path: &Path) -> Result<Image, CliError> {
    parse_pgm(&output::read(path)?).map_err(|e| CliError::io(path, e))
}

fn load_mask(path: &Path) -> Result<Mask, CliError> {
    Ok(Mask::from_image(&load_image(path)?))
}

fn load_method_config(path: &Option<PathBuf>) -> Result<MethodConfig, CliError> {
    match path {
        None => Ok(MethodConfig::default()),
        Some(p) => serde_json::from_str(&output::read_text(p)?).map_err(|e| CliError::io(p, e)),
    }
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    output::write_atomic(path, bytes)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn to_json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

/// Looks up `FILE:RECORD_ID`, taking the first record with a center.
fn find_annotation(spec: &str) -> Result<Annotation, CliError> {
    let (file, id) = spec
        .rsplit_once(':')
        .ok_or_else(|| CliError::input(format!("--annotation expects FILE:RECORD_ID, got {spec:?}")))?;
    let path = Path::new(file);
    let all = parse_annotations(&output::read_text(path)?).map_err(|e| CliError::io(path, e))?;
    let mut matching = all.into_iter().filter(|a| a.record_id == id).peekable();
    if matching.peek().is_none() {
        return Err(CliError::input(format!("no record {id:?} in {file}")));
    }
    matching
        .find(|a| a.center.is_some())
        .ok_or_else(|| CliError::input(format!("record {id:?} has no mass center")))
}

/// Seed in raster coordinates plus the annotation it came from, if any.
fn resolve_seed(args: &SeedArgs, image: &Image) -> Result<((usize, usize), Option<Annotation>), CliError> {
    match (&args.seed, &args.annotation) {
        (Some(s), _) => Ok((*s, None)),
        (None, Some(spec)) => {
            let a = find_annotation(spec)?;
            let seed = a.seed(image.height()).expect("center checked");
            Ok((seed, Some(a)))
        }
        (None, None) => Err(CliError::input("a seed is required: --seed x,y or --annotation FILE:ID")),
    }
}

fn annotation_json(a: &Annotation, seed: (usize, usize)) -> Value {
    json!({
        "record_id": a.record_id,
        "origin": a.origin,
        "raw_center": a.center,
        "radius": a.radius,
        "seed": seed,
    })
}

fn ms(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn segment(a: SegmentArgs) -> Result<(), CliError> {
    let image = load_image(&a.image)?;
    let config = load_method_config(&a.config)?;
    let (seed, annotation) = resolve_seed(&a.seed, &image)?;
    let method: Method = a.method.into();

    let start = Instant::now();
    let mask = run_method(&image, seed, method, &config).map_err(CliError::seg)?;
    let elapsed = ms(start);

    let base = format!("{}.{}", output::stem(&a.image), method.name());
    let mask_path = output::out_path(&a.out_dir, &format!("{base}.mask.pgm"));
    let overlay_path = output::out_path(&a.out_dir, &format!("{base}.overlay.pgm"));
    let json_path = output::out_path(&a.out_dir, &format!("{base}.json"));

    let mask_image = mask.to_image().map_err(|e| CliError::input(e.to_string()))?;
    write(&mask_path, &write_pgm(&mask_image, PgmVariant::Raw))?;
    write(&overlay_path, &write_pgm(&output::overlay(&image, &mask), PgmVariant::Raw))?;

    let mut outputs = json!({
        "mask": mask_path.file_name().map(|s| s.to_string_lossy()),
        "overlay": overlay_path.file_name().map(|s| s.to_string_lossy()),
    });
    if a.svg {
        let svg_path = output::out_path(&a.out_dir, &format!("{base}.svg"));
        if let Some(svg) = output::svg(&mask) {
            write(&svg_path, svg.as_bytes())?;
            outputs["svg"] = json!(svg_path.file_name().map(|s| s.to_string_lossy()));
        }
    }

    let mut effective = json!({});
    match method {
        Method::RegionGrowing => effective["rg_tau"] = json!(config.rg_tau(&image)),
        Method::ActiveContour => effective["ac_init_radius"] = json!(config.ac_init_radius(&image, seed)),
        Method::Saliency => {}
    }
    let mut summary = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "segment",
        "image": a.image.display().to_string(),
        "method": method,
        "seed": seed,
        "params": config,
        "effective": effective,
        "pixels": mask.count(),
        "outputs": outputs,
    });
    if let Some(ann) = &annotation {
        summary["annotation"] = annotation_json(ann, seed);
    }
    if a.timings {
        summary["timings_ms"] = json!({ "segment": elapsed });
    }
    write(&json_path, to_json(&summary).as_bytes())
}

fn features(a: FeaturesArgs) -> Result<(), CliError> {
    let image = load_image(&a.image)?;
    let mask = load_mask(&a.mask)?;
    let fv = extract_from_mask(&image, &mask).map_err(CliError::features)?;
    let row = FeatureRow {
        id: a.id.clone().unwrap_or_else(|| output::stem(&a.image)),
        features: fv,
        label: a.label.clone(),
    };
    match &a.out {
        None => {
            print!("{}", write_feature_csv(&[row], true).map_err(CliError::features)?);
            Ok(())
        }
        Some(path) => {
            let mut text = if path.exists() {
                let existing = output::read_text(path)?;
                parse_feature_csv(&existing).map_err(CliError::features)?;
                existing
            } else {
                String::new()
            };
            if !text.is_empty() && !text.ends_with('\n') {
                text.push('\n');
            }
            let header = text.is_empty();
            text.push_str(&write_feature_csv(&[row], header).map_err(CliError::features)?);
            write(path, text.as_bytes())
        }
    }
}

fn load_dataset(path: &Path) -> Result<Vec<FeatureRow>, CliError> {
    parse_feature_csv(&output::read_text(path)?).map_err(CliError::features)
}

fn algorithm_from(a: &TrainArgs) -> Result<Algorithm, CliError> {
    let mut value = match &a.config {
        Some(p) => serde_json::from_str::<Value>(&output::read_text(p)?).map_err(|e| CliError::io(p, e))?,
        None => {
            let alg = Algorithm::by_name(&a.algorithm)
                .ok_or_else(|| CliError::input(format!("unknown algorithm {:?}", a.algorithm)))?;
            serde_json::to_value(alg).expect("serialisable")
        }
    };
    let obj = value
        .as_object_mut()
        .ok_or_else(|| CliError::input("algorithm config must be a JSON object"))?;
    for kv in &a.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::input(format!("--set expects KEY=VALUE, got {kv:?}")))?;
        let v = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
        obj.insert(k.to_string(), v);
    }
    if let Some(seed) = a.rng_seed {
        let alg: Algorithm = serde_json::from_value(Value::Object(obj.clone()))
            .map_err(|e| CliError::input(format!("algorithm config: {e}")))?;
        if !matches!(alg, Algorithm::Kmeans(_) | Algorithm::Fcm(_) | Algorithm::Svm(_)) {
            return Err(CliError::input(format!("{} takes no rng seed", alg.name())));
        }
        obj.insert("rng_seed".into(), json!(seed));
    }
    serde_json::from_value(value).map_err(|e| CliError::input(format!("algorithm config: {e}")))
}

fn train_cmd(a: TrainArgs) -> Result<(), CliError> {
    let algorithm = algorithm_from(&a)?;
    let rows = load_dataset(&a.dataset)?;
    let data = Dataset::from_rows(&rows).map_err(CliError::learn)?;
    let model = train(&data.x(), &data.partial_labels(), &algorithm).map_err(CliError::learn)?;
    let file = ModelFile::new(algorithm, data.classes.clone(), model);
    let path = a.out.clone().unwrap_or_else(|| output::default_out_dir().join("model.json"));
    let mut text = file.to_json();
    text.push('\n');
    println!(
        "trained {} on {} samples, classes [{}]",
        file.algorithm.name(),
        data.samples.len(),
        data.classes.join(", ")
    );
    write(&path, text.as_bytes())
}

fn fmt_metric(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".into(), |v| format!("{v:.4}"))
}

fn evaluate(a: EvaluateArgs) -> Result<(), CliError> {
    let (preds, labels, source) = match (&a.outcomes, &a.model, &a.dataset) {
        (Some(path), _, _) => {
            let (p, l) = parse_outcomes_csv(&output::read_text(path)?).map_err(|e| CliError::io(path, e))?;
            (p, l, json!({ "outcomes": path.display().to_string() }))
        }
        (None, Some(model_path), Some(data_path)) => {
            let file = ModelFile::from_json(&output::read_text(model_path)?).map_err(CliError::learn)?;
            let names: Vec<&str> = file.feature_names.iter().map(String::as_str).collect();
            if names != crate::features::FeatureVector::NAMES {
                return Err(CliError::schema("model feature names differ from the feature CSV schema"));
            }
            let positive = file
                .classes
                .iter()
                .position(|c| *c == a.positive)
                .ok_or_else(|| {
                    CliError::input(format!(
                        "positive class {:?} not among model classes [{}]",
                        a.positive,
                        file.classes.join(", ")
                    ))
                })?;
            let rows = load_dataset(data_path)?;
            let data = Dataset::from_rows_with_classes(&rows, file.classes.clone()).map_err(CliError::learn)?;
            let y = data.y().map_err(CliError::learn)?;
            let mut p = Vec::with_capacity(y.len());
            for s in &data.samples {
                p.push(file.model.predict(&s.features).map_err(CliError::learn)? == positive);
            }
            let l = y.iter().map(|&c| c == positive).collect();
            let source = json!({
                "model": model_path.display().to_string(),
                "dataset": data_path.display().to_string(),
                "algorithm": file.algorithm.name(),
                "positive_class": a.positive,
            });
            (p, l, source)
        }
        _ => return Err(CliError::input("give --outcomes, or --model with --dataset")),
    };
    let cm: ConfusionMatrix = confusion(&preds, &labels).map_err(|e| CliError::input(e.to_string()))?;
    let m: ScreeningMetrics = screening_metrics(&cm);
    println!("n {}", cm.total());
    println!("tp {} fp {} tn {} fn {}", cm.tp, cm.fp, cm.tn, cm.fn_);
    for (name, v) in [
        ("sensitivity", m.sensitivity),
        ("specificity", m.specificity),
        ("fnr", m.fnr),
        ("accuracy", m.accuracy),
        ("precision", m.precision),
    ] {
        println!("{name} {}", fmt_metric(v));
    }
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "evaluate",
        "source": source,
        "n": cm.total(),
        "confusion": cm,
        "metrics": m,
    });
    let path = a.out.clone().unwrap_or_else(|| output::default_out_dir().join("metrics.json"));
    write(&path, to_json(&report).as_bytes())
}

fn load_phantom(path: &Path) -> Result<PhantomSpec, CliError> {
    let value: Value = serde_json::from_str(&output::read_text(path)?).map_err(|e| CliError::io(path, e))?;
    let found = value.get("schema_version").and_then(Value::as_u64);
    if found != Some(SCHEMA_VERSION as u64) {
        return Err(CliError::schema(format!(
            "{}: schema_version {found:?}, expected {SCHEMA_VERSION}",
            path.display()
        )));
    }
    let file: PhantomFile = serde_json::from_value(value).map_err(|e| CliError::schema(format!("{}: {e}", path.display())))?;
    Ok(file.spec)
}

fn compare(a: CompareArgs) -> Result<(), CliError> {
    let config = load_method_config(&a.config)?;
    let (stem, image, truth, seed, ground_truth, note, annotation) = match &a.phantom {
        Some(path) => {
            let spec = load_phantom(path)?;
            let (image, truth) = synth_phantom(&spec).map_err(|e| CliError::io(path, e))?;
            let (cx, cy) = spec.shape.center();
            let seed = match a.seed.seed {
                Some(s) => s,
                None => (cx.round().max(0.0) as usize, cy.round().max(0.0) as usize),
            };
            (output::stem(path), image, truth, seed, "phantom", None, None)
        }
        None => {
            let path = a.image.as_ref().expect("clap requires image or phantom");
            let image = load_image(path)?;
            let (seed, annotation) = resolve_seed(&a.seed, &image)?;
            let (truth, source, note) = match (&a.truth, &annotation) {
                (Some(t), _) => (load_mask(t)?, "mask", None),
                (None, Some(ann)) => {
                    let disc = annotation_disc(ann, image.width(), image.height())
                        .ok_or_else(|| CliError::input("annotation has no radius"))?;
                    (disc, "annotation_disc", Some(ANNOTATION_DISC_NOTE.to_string()))
                }
                (None, None) => return Err(CliError::input("ground truth needed: --truth, --annotation or --phantom")),
            };
            if !truth.same_dims(&Mask::new(image.width(), image.height())) {
                return Err(CliError::input("ground-truth mask dimensions differ from the image"));
            }
            (output::stem(path), image, truth, seed, source, note, annotation)
        }
    };

    let start = Instant::now();
    let mut timings = serde_json::Map::new();
    let mut rows = Vec::new();
    for m in Method::ALL {
        let t = Instant::now();
        let result = run_method(&image, seed, m, &config).map_err(|e| e.to_string());
        timings.insert(m.name().into(), json!(ms(t)));
        rows.push(OverlapRow::scored(m.name(), result, &truth));
    }
    let report = OverlapReport {
        schema_version: SCHEMA_VERSION,
        seed,
        ground_truth: ground_truth.into(),
        note,
        rows,
    };
    for row in &report.rows {
        if let Some(mask) = &row.mask {
            let p = output::out_path(&a.out_dir, &format!("{stem}.{}.overlay.pgm", row.method));
            write(&p, &write_pgm(&output::overlay(&image, mask), PgmVariant::Raw))?;
            if a.svg {
                if let Some(svg) = output::svg(mask) {
                    let p = output::out_path(&a.out_dir, &format!("{stem}.{}.svg", row.method));
                    write(&p, svg.as_bytes())?;
                }
            }
        }
    }
    let truth_path = output::out_path(&a.out_dir, &format!("{stem}.truth.overlay.pgm"));
    write(&truth_path, &write_pgm(&output::overlay(&image, &truth), PgmVariant::Raw))?;

    let table = report.to_table();
    print!("{table}");
    write(&output::out_path(&a.out_dir, &format!("{stem}.compare.txt")), table.as_bytes())?;

    let mut value = serde_json::to_value(&report).expect("serialisable");
    value["params"] = json!(config);
    if let Some(ann) = &annotation {
        value["annotation"] = annotation_json(ann, seed);
    }
    if a.timings {
        timings.insert("total".into(), json!(ms(start)));
        value["timings_ms"] = Value::Object(timings);
    }
    write(&output::out_path(&a.out_dir, &format!("{stem}.compare.json")), to_json(&value).as_bytes())
}

fn phantom(a: PhantomArgs) -> Result<(), CliError> {
    let spec = match &a.spec {
        Some(p) => serde_json::from_str(&output::read_text(p)?).map_err(|e| CliError::io(p, e))?,
        None => {
            let c = a.center.unwrap_or(((a.size as f64 - 1.0) / 2.0, (a.size as f64 - 1.0) / 2.0));
            PhantomSpec {
                width: a.size,
                height: a.size,
                shape: PhantomShape::Disc { center: c, radius: a.radius },
                fg_level: a.fg,
                bg_level: a.bg,
                noise_sigma: a.noise,
                rng_seed: a.rng_seed,
                max_gray: 255,
            }
        }
    };
    let (image, truth) = synth_phantom(&spec).map_err(|e| CliError::input(e.to_string()))?;
    let variant = if a.plain { PgmVariant::Plain } else { PgmVariant::Raw };
    let truth_image = truth.to_image().map_err(|e| CliError::input(e.to_string()))?;
    write(&output::out_path(&a.out_dir, &format!("{}.pgm", a.name)), &write_pgm(&image, variant))?;
    write(
        &output::out_path(&a.out_dir, &format!("{}.truth.pgm", a.name)),
        &write_pgm(&truth_image, variant),
    )?;
    let file = PhantomFile { schema_version: SCHEMA_VERSION, spec };
    write(&output::out_path(&a.out_dir, &format!("{}.json", a.name)), to_json(&file).as_bytes())
}
