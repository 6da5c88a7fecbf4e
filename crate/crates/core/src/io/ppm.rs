//! Binary portable pixmap (`P6`, maxval 255).
//!
//! The header is `P6`, width, height and maxval separated by whitespace, with
//! `#` comments running to the end of a line. A single whitespace byte
//! separates the maxval from the raster. Output is always the canonical
//! `P6\n<w> <h>\n255\n` form.

use thiserror::Error;

use super::RasterImage;
use crate::colorspace::RgbColor;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PpmError {
    #[error("byte {offset}: bad magic number, expected \"P6\"")]
    BadMagic { offset: usize },
    #[error("byte {offset}: expected {what}")]
    BadHeader { offset: usize, what: &'static str },
    #[error("byte {offset}: unsupported maxval {maxval}, only 255 is accepted")]
    UnsupportedMaxval { offset: usize, maxval: u64 },
    #[error("byte {offset}: truncated raster, expected {expected} bytes of pixel data, found {found}")]
    Truncated {
        offset: usize,
        expected: usize,
        found: usize,
    },
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderReader<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Returns the value and the offset where it starts.
    fn number(&mut self, what: &'static str) -> Result<(u64, usize), PpmError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PpmError::BadHeader {
                offset: start,
                what,
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .map(|v| (v, start))
            .ok_or(PpmError::BadHeader {
                offset: start,
                what,
            })
    }
}

pub fn read_ppm(bytes: &[u8]) -> Result<RasterImage, PpmError> {
    if bytes.len() < 2 || &bytes[..2] != b"P6" {
        return Err(PpmError::BadMagic { offset: 0 });
    }
    let mut header = HeaderReader { bytes, pos: 2 };
    if !header
        .bytes
        .get(2)
        .is_some_and(|b| b.is_ascii_whitespace() || *b == b'#')
    {
        return Err(PpmError::BadMagic { offset: 2 });
    }
    let (width, _) = header.number("image width")?;
    let (height, _) = header.number("image height")?;
    let (maxval, maxval_offset) = header.number("maxval")?;
    if maxval != 255 {
        return Err(PpmError::UnsupportedMaxval {
            offset: maxval_offset,
            maxval,
        });
    }
    if width == 0 || height == 0 {
        return Err(PpmError::BadHeader {
            offset: maxval_offset,
            what: "positive image dimensions",
        });
    }
    match bytes.get(header.pos) {
        Some(b) if b.is_ascii_whitespace() => header.pos += 1,
        _ => {
            return Err(PpmError::BadHeader {
                offset: header.pos,
                what: "a single whitespace byte before the raster",
            })
        }
    }
    let (width, height) = (width as usize, height as usize);
    let data = &bytes[header.pos..];
    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(3))
        .ok_or(PpmError::BadHeader {
            offset: 2,
            what: "image dimensions that fit in memory",
        })?;
    if data.len() < expected {
        return Err(PpmError::Truncated {
            offset: bytes.len(),
            expected,
            found: data.len(),
        });
    }
    let pixels = data[..expected]
        .chunks_exact(3)
        .map(|px| RgbColor {
            r: f64::from(px[0]) / 255.0,
            g: f64::from(px[1]) / 255.0,
            b: f64::from(px[2]) / 255.0,
        })
        .collect();
    Ok(RasterImage::from_trusted(width, height, pixels))
}

fn quantize(v: f64) -> u8 {
    (v * 255.0).round().clamp(0.0, 255.0) as u8
}

pub fn write_ppm(img: &RasterImage) -> Vec<u8> {
    let header = format!("P6\n{} {}\n255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + 3 * img.len());
    out.extend_from_slice(header.as_bytes());
    for p in img.pixels() {
        out.extend_from_slice(&[quantize(p.r), quantize(p.g), quantize(p.b)]);
    }
    out
}
