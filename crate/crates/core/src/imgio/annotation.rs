//! MIAS-style ground-truth records.
//!
//! One record per line:
//!
//! ```text
//! <id> <tissue F|G|D> <class CALC|CIRC|SPIC|MISC|ARCH|ASYM|NORM> [<severity B|M> [<x> <y> <radius>]]
//! ```
//!
//! Coordinates in the file use the MIAS convention: origin at the bottom-left
//! corner of the image, `y` growing upwards. Internally everything is top-left
//! row-major, so records keep their file coordinates together with the
//! origin they are expressed in, and [`Annotation::to_top_left`] performs the
//! flip once the image height is known.

use serde::{Deserialize, Serialize};

use super::ImgError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tissue {
    Fatty,
    FattyGlandular,
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Abnormality {
    Calcification,
    Circumscribed,
    Spiculated,
    IllDefined,
    ArchitecturalDistortion,
    Asymmetry,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Severity {
    Benign,
    Malignant,
}

impl Severity {
    pub fn code(self) -> &'static str {
        match self {
            Severity::Benign => "B",
            Severity::Malignant => "M",
        }
    }
}

/// Which corner the `center` coordinates are measured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoordinateOrigin {
    /// MIAS file convention.
    BottomLeft,
    /// Row-major raster convention used by every other module.
    TopLeft,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    pub record_id: String,
    pub tissue: Tissue,
    pub abnormality: Abnormality,
    pub severity: Option<Severity>,
    pub center: Option<(u32, u32)>,
    pub radius: Option<u32>,
    pub origin: CoordinateOrigin,
}

impl Annotation {
    /// Re-expresses `center` with a top-left origin for an image of the given
    /// height. Idempotent.
    pub fn to_top_left(&self, image_height: usize) -> Annotation {
        let mut out = self.clone();
        if self.origin == CoordinateOrigin::BottomLeft {
            out.center = self.center.map(|(x, y)| {
                let flipped = (image_height as i64 - 1 - y as i64).max(0);
                (x, flipped as u32)
            });
            out.origin = CoordinateOrigin::TopLeft;
        }
        out
    }

    /// Mass center in raster (top-left) coordinates.
    pub fn seed(&self, image_height: usize) -> Option<(usize, usize)> {
        self.to_top_left(image_height)
            .center
            .map(|(x, y)| (x as usize, y as usize))
    }
}

fn tissue(code: &str) -> Option<Tissue> {
    Some(match code {
        "F" => Tissue::Fatty,
        "G" => Tissue::FattyGlandular,
        "D" => Tissue::Dense,
        _ => return None,
    })
}

fn abnormality(code: &str) -> Option<Abnormality> {
    Some(match code {
        "CALC" => Abnormality::Calcification,
        "CIRC" => Abnormality::Circumscribed,
        "SPIC" => Abnormality::Spiculated,
        "MISC" => Abnormality::IllDefined,
        "ARCH" => Abnormality::ArchitecturalDistortion,
        "ASYM" => Abnormality::Asymmetry,
        "NORM" => Abnormality::Normal,
        _ => return None,
    })
}

fn severity(code: &str) -> Option<Severity> {
    match code {
        "B" => Some(Severity::Benign),
        "M" => Some(Severity::Malignant),
        _ => None,
    }
}

pub fn parse_annotations(text: &str) -> Result<Vec<Annotation>, ImgError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| ImgError::Annotation {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() < 3 {
            return Err(err(format!("expected at least 3 fields, found {}", fields.len())));
        }
        let tissue =
            tissue(fields[1]).ok_or_else(|| err(format!("unknown tissue code {:?}", fields[1])))?;
        let abnormality = abnormality(fields[2])
            .ok_or_else(|| err(format!("unknown abnormality code {:?}", fields[2])))?;
        let rest = &fields[3..];
        if abnormality == Abnormality::Normal && !rest.is_empty() {
            return Err(err("NORM record must not carry severity or coordinates".into()));
        }
        let (severity, center, radius) = match rest {
            [] => {
                if abnormality != Abnormality::Normal {
                    return Err(err("abnormal record without severity".into()));
                }
                (None, None, None)
            }
            [sev] => (
                Some(severity(sev).ok_or_else(|| err(format!("unknown severity code {sev:?}")))?),
                None,
                None,
            ),
            [sev, x, y, r] => {
                let sev =
                    severity(sev).ok_or_else(|| err(format!("unknown severity code {sev:?}")))?;
                let num = |s: &str, what: &str| {
                    s.parse::<u32>()
                        .map_err(|_| err(format!("non-numeric {what} {s:?}")))
                };
                let (x, y, r) = (num(x, "x")?, num(y, "y")?, num(r, "radius")?);
                if r == 0 {
                    return Err(err("radius must be positive".into()));
                }
                (Some(sev), Some((x, y)), Some(r))
            }
            _ => {
                return Err(err(format!(
                    "expected severity and optionally x y radius, found {} trailing fields",
                    rest.len()
                )))
            }
        };
        out.push(Annotation {
            record_id: fields[0].to_string(),
            tissue,
            abnormality,
            severity,
            center,
            radius,
            origin: CoordinateOrigin::BottomLeft,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circumscribed_benign() {
        let a = &parse_annotations("mdb001 G CIRC B 535 425 197").unwrap()[0];
        assert_eq!(a.record_id, "mdb001");
        assert_eq!(a.tissue, Tissue::FattyGlandular);
        assert_eq!(a.abnormality, Abnormality::Circumscribed);
        assert_eq!(a.severity, Some(Severity::Benign));
        assert_eq!(a.center, Some((535, 425)));
        assert_eq!(a.radius, Some(197));
        assert_eq!(a.origin, CoordinateOrigin::BottomLeft);
    }

    #[test]
    fn dense_normal() {
        let a = &parse_annotations("mdb003 D NORM").unwrap()[0];
        assert_eq!(a.tissue, Tissue::Dense);
        assert_eq!(a.abnormality, Abnormality::Normal);
        assert_eq!((a.severity, a.center, a.radius), (None, None, None));
    }

    #[test]
    fn fatty_malignant() {
        let a = &parse_annotations("mdbX F CIRC M 338 314 56").unwrap()[0];
        assert_eq!(a.tissue, Tissue::Fatty);
        assert_eq!(a.severity, Some(Severity::Malignant));
        assert_eq!(a.center, Some((338, 314)));
        assert_eq!(a.radius, Some(56));
    }

    #[test]
    fn all_codes_and_blank_lines() {
        let text = "a F CALC B\n\nb G CIRC M 1 2 3\nc D SPIC B\n  \nd F MISC M\ne F ARCH B\nf F ASYM M\ng F NORM\n";
        let parsed = parse_annotations(text).unwrap();
        assert_eq!(parsed.len(), 7);
        let classes: Vec<_> = parsed.iter().map(|a| a.abnormality).collect();
        assert_eq!(
            classes,
            vec![
                Abnormality::Calcification,
                Abnormality::Circumscribed,
                Abnormality::Spiculated,
                Abnormality::IllDefined,
                Abnormality::ArchitecturalDistortion,
                Abnormality::Asymmetry,
                Abnormality::Normal,
            ]
        );
    }

    #[test]
    fn rejects_bad_records() {
        for bad in [
            "x Q CIRC B 1 2 3",
            "x F BLOB B 1 2 3",
            "x F NORM B",
            "x F NORM 1 2 3",
            "x F CIRC B 1 two 3",
            "x F CIRC X 1 2 3",
            "x F CIRC B 1 2",
            "x F CIRC B 1 2 0",
            "x F CIRC",
            "x F",
        ] {
            assert!(parse_annotations(bad).is_err(), "{bad}");
        }
        match parse_annotations("ok F NORM\nbad F NORM 1 2 3") {
            Err(ImgError::Annotation { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn flips_to_top_left() {
        let a = &parse_annotations("mdb001 G CIRC B 535 425 197").unwrap()[0];
        let t = a.to_top_left(1024);
        assert_eq!(t.center, Some((535, 598)));
        assert_eq!(t.origin, CoordinateOrigin::TopLeft);
        assert_eq!(t.to_top_left(1024), t);
        assert_eq!(a.seed(1024), Some((535, 598)));
    }
}
