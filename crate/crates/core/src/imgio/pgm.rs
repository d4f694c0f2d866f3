//! Netpbm graymap (PGM) reader and writer, plain (P2) and raw (P5).

use super::{Image, ImgError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PgmVariant {
    /// ASCII samples.
    Plain,
    /// Binary samples; one byte per sample when `max_gray < 256`, otherwise
    /// two bytes big-endian.
    #[default]
    Raw,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    /// Next whitespace-delimited token, or `None` at end of input.
    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && !self.bytes[self.pos].is_ascii_whitespace()
            && self.bytes[self.pos] != b'#'
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn header_int(&mut self, what: &str) -> Result<i64, ImgError> {
        let tok = self
            .token()
            .ok_or_else(|| ImgError::BadHeader(format!("missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse::<i64>().ok())
            .ok_or_else(|| {
                ImgError::BadHeader(format!(
                    "{what} is not an integer: {:?}",
                    String::from_utf8_lossy(tok)
                ))
            })
    }
}

/// Parses a P2 or P5 graymap. Comments (`#` to end of line) are accepted
/// anywhere in the header.
pub fn parse_pgm(bytes: &[u8]) -> Result<Image, ImgError> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(ImgError::BadMagic);
    }
    let raw = match bytes[1] {
        b'2' => false,
        b'5' => true,
        _ => return Err(ImgError::BadMagic),
    };
    if bytes.len() > 2 && !(bytes[2].is_ascii_whitespace() || bytes[2] == b'#') {
        return Err(ImgError::BadMagic);
    }
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.header_int("width")?;
    let height = cur.header_int("height")?;
    if width <= 0 || height <= 0 {
        return Err(ImgError::BadDimensions {
            width: width.max(0) as usize,
            height: height.max(0) as usize,
        });
    }
    let max_gray = cur.header_int("max gray")?;
    if !(1..=65535).contains(&max_gray) {
        return Err(ImgError::BadMaxGray(max_gray.max(0) as u64));
    }
    let (width, height, max_gray) = (width as usize, height as usize, max_gray as u16);
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| ImgError::BadHeader("dimensions overflow".into()))?;

    let mut pixels = Vec::with_capacity(expected);
    if raw {
        // Exactly one whitespace byte separates the header from the raster.
        if cur.pos >= bytes.len() || !bytes[cur.pos].is_ascii_whitespace() {
            return Err(ImgError::Truncated { expected, found: 0 });
        }
        let data = &bytes[cur.pos + 1..];
        if max_gray < 256 {
            if data.len() < expected {
                return Err(ImgError::Truncated {
                    expected,
                    found: data.len(),
                });
            }
            pixels.extend(data[..expected].iter().map(|&b| b as u16));
        } else {
            if data.len() < 2 * expected {
                return Err(ImgError::Truncated {
                    expected,
                    found: data.len() / 2,
                });
            }
            pixels.extend(
                data[..2 * expected]
                    .chunks_exact(2)
                    .map(|c| u16::from_be_bytes([c[0], c[1]])),
            );
        }
    } else {
        while pixels.len() < expected {
            let Some(tok) = cur.token() else {
                return Err(ImgError::Truncated {
                    expected,
                    found: pixels.len(),
                });
            };
            let value = std::str::from_utf8(tok)
                .ok()
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| {
                    ImgError::BadHeader(format!(
                        "non-numeric sample {:?}",
                        String::from_utf8_lossy(tok)
                    ))
                })?;
            if value > max_gray as u64 {
                return Err(ImgError::PixelOutOfRange {
                    index: pixels.len(),
                    value,
                    max_gray,
                });
            }
            pixels.push(value as u16);
        }
    }
    Image::new(width, height, max_gray, pixels)
}

pub fn write_pgm(image: &Image, variant: PgmVariant) -> Vec<u8> {
    let magic = match variant {
        PgmVariant::Plain => "P2",
        PgmVariant::Raw => "P5",
    };
    let mut out = format!(
        "{magic}\n{} {}\n{}\n",
        image.width(),
        image.height(),
        image.max_gray()
    )
    .into_bytes();
    match variant {
        PgmVariant::Plain => {
            for row in image.pixels().chunks(image.width()) {
                let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
        PgmVariant::Raw if image.max_gray() < 256 => {
            out.extend(image.pixels().iter().map(|&v| v as u8));
        }
        PgmVariant::Raw => {
            for &v in image.pixels() {
                out.extend_from_slice(&v.to_be_bytes());
            }
        }
    }
    out
}
