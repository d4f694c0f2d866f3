use super::{FeatureError, FeatureVector};

pub const CSV_HEADER: [&str; 10] = [
    "id",
    "radius",
    "perimeter",
    "area",
    "compactness",
    "smoothness",
    "symmetry",
    "fractal_dimension",
    "texture",
    "label",
];

/// One mass in a feature table. `label` is the class name (`B`/`M` for
/// annotated MIAS masses) or `None` when unknown.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub id: String,
    pub features: FeatureVector,
    pub label: Option<String>,
}

fn csv_err(line: usize, message: impl Into<String>) -> FeatureError {
    FeatureError::Csv {
        line,
        message: message.into(),
    }
}

/// Serialises rows with the header. Floats use the shortest representation
/// that parses back to the same value.
pub fn write_feature_csv(rows: &[FeatureRow], with_header: bool) -> Result<String, FeatureError> {
    let mut w = ::csv::WriterBuilder::new()
        .terminator(::csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: ::csv::Error| csv_err(0, e.to_string());
    if with_header {
        w.write_record(CSV_HEADER).map_err(io)?;
    }
    for (i, row) in rows.iter().enumerate() {
        if row.features.to_array().iter().any(|v| !v.is_finite()) {
            return Err(csv_err(i + 1, format!("non-finite feature in row {}", row.id)));
        }
        let mut rec = vec![row.id.clone()];
        rec.extend(row.features.to_array().iter().map(|v| v.to_string()));
        rec.push(row.label.clone().unwrap_or_default());
        w.write_record(&rec).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| csv_err(0, e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| csv_err(0, e.to_string()))
}

pub fn parse_feature_csv(text: &str) -> Result<Vec<FeatureRow>, FeatureError> {
    let mut r = ::csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| csv_err(1, e.to_string()))?;
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(csv_err(
            1,
            format!("expected header `{}`", CSV_HEADER.join(",")),
        ));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| csv_err(line, e.to_string()))?;
        let mut v = [0.0f64; 8];
        for (k, slot) in v.iter_mut().enumerate() {
            let field = &rec[k + 1];
            *slot = field
                .trim()
                .parse()
                .map_err(|_| csv_err(line, format!("{}: not a number: {field:?}", CSV_HEADER[k + 1])))?;
            if !slot.is_finite() {
                return Err(csv_err(line, format!("{} is not finite", CSV_HEADER[k + 1])));
            }
        }
        let label = rec[9].trim();
        rows.push(FeatureRow {
            id: rec[0].to_string(),
            features: FeatureVector::from_array(v),
            label: (!label.is_empty()).then(|| label.to_string()),
        });
    }
    Ok(rows)
}
