//! Portable pixmap (`P3` plain and `P6` binary) to and from [`Raster`].

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{Raster, CHANNELS};

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidRaster(msg.into())
}

struct Tokens<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn skip_space(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn next(&mut self) -> Option<&'a str> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.bytes[start..self.pos]).ok()).flatten()
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad(format!("ppm: missing or malformed {what}")))
    }
}

pub fn decode(bytes: &[u8]) -> Result<Raster> {
    let mut t = Tokens { bytes, pos: 0 };
    let magic = t.next().ok_or_else(|| bad("ppm: empty input"))?;
    let binary = match magic {
        "P3" => false,
        "P6" => true,
        other => return Err(bad(format!("ppm: unsupported magic `{other}`"))),
    };
    let width = t.number("width")?;
    let height = t.number("height")?;
    let maxval = t.number("maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(bad(format!("ppm: maxval {maxval} out of range")));
    }
    let n = width as usize * height as usize * CHANNELS;
    let scale = f64::from(maxval);
    let mut data = Vec::with_capacity(n);
    if binary {
        // exactly one whitespace byte separates maxval from the raster
        let start = t.pos + 1;
        let wide = maxval > 255;
        let need = if wide { 2 * n } else { n };
        let body = bytes.get(start..start + need).ok_or_else(|| bad("ppm: truncated raster"))?;
        if wide {
            data.extend(body.chunks_exact(2).map(|c| f64::from(u16::from_be_bytes([c[0], c[1]])) / scale));
        } else {
            data.extend(body.iter().map(|&b| f64::from(b) / scale));
        }
    } else {
        for _ in 0..n {
            let v = t.number("sample")?;
            if v > maxval {
                return Err(bad(format!("ppm: sample {v} exceeds maxval {maxval}")));
            }
            data.push(f64::from(v) / scale);
        }
    }
    Raster::new(width, height, data)
}

/// Plain `P3` with maxval 255; values are rounded to the nearest level.
pub fn encode_plain(r: &Raster) -> String {
    let mut out = format!("P3\n{} {}\n255\n", r.width(), r.height());
    for y in 0..r.height() {
        let row: Vec<String> = (0..r.width())
            .flat_map(|x| (0..CHANNELS).map(move |c| (x, c)))
            .map(|(x, c)| ((r.get(x, y, c) * 255.0).round() as u8).to_string())
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn read_ppm(path: &Path) -> Result<Raster> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    decode(&bytes)
}

pub fn write_ppm(r: &Raster, path: &Path) -> Result<()> {
    super::write_text(path, &encode_plain(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_roundtrip() {
        let r = Raster::from_fn(3, 2, |x, y, c| ((x as usize + 2 * y as usize + c) % 4) as f64 * 85.0 / 255.0).unwrap();
        let back = decode(encode_plain(&r).as_bytes()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn binary_and_comments() {
        let mut bytes = b"P6\n# a comment\n2 1\n255\n".to_vec();
        bytes.extend([0, 255, 51, 255, 0, 102]);
        let r = decode(&bytes).unwrap();
        assert_eq!((r.width(), r.height()), (2, 1));
        assert_eq!(r.get(0, 0, 2), 0.2);
        assert_eq!(r.get(1, 0, 0), 1.0);
    }

    #[test]
    fn rejects_malformed() {
        assert!(decode(b"P5\n1 1\n255\n\0").is_err());
        assert!(decode(b"P3\n1 1\n255\n0 0\n").is_err());
        assert!(decode(b"P3\n1 1\n10\n0 0 11\n").is_err());
        assert!(decode(b"P6\n2 2\n255\n\0\0").is_err());
    }
}
