//! Binary PGM (`P5`, maxval 255) reading and writing.
//!
//! Values `>= 128` load as edge pixels; edges save as 255 and free pixels as 0.

use crate::error::{Error, Result};
use crate::image::EdgeImage;

pub const EDGE_THRESHOLD: u8 = 128;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
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

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(start, format!("{what} out of range")))
    }
}

pub fn load_pgm(bytes: &[u8]) -> Result<EdgeImage> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(Error::parse(0, "missing P5 magic number"));
    }
    let mut cur = Cursor { bytes, pos: 2 };
    if !cur.bytes.get(2).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::parse(2, "expected whitespace after magic number"));
    }
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    cur.skip_space_and_comments();
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if maxval != 255 {
        return Err(Error::parse(maxval_at, format!("maxval must be 255, got {maxval}")));
    }
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(Error::parse(cur.pos, "expected single whitespace before pixel data")),
    }
    let len = width
        .checked_mul(height)
        .ok_or_else(|| Error::parse(cur.pos, "image dimensions overflow"))?;
    let payload = bytes.get(cur.pos..cur.pos + len).ok_or_else(|| {
        Error::parse(
            bytes.len(),
            format!(
                "truncated payload: expected {len} bytes, found {}",
                bytes.len() - cur.pos
            ),
        )
    })?;
    EdgeImage::new(width, height, payload.iter().map(|&v| v >= EDGE_THRESHOLD).collect())
}

pub fn save_pgm(image: &EdgeImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend(image.edges().iter().map(|&e| if e { 255u8 } else { 0 }));
    out
}
