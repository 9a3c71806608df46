use std::io::{self, Read, Write};

use thiserror::Error;

use super::palette::Rgb;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    /// Row-major RGB.
    pub pixels: Vec<Rgb>,
}

#[derive(Debug, Error)]
pub enum PpmError {
    #[error("not a binary PPM (P6) file")]
    BadMagic,
    #[error("malformed PPM header: {0}")]
    BadHeader(String),
    #[error("only 8-bit PPM is supported (maxval {0})")]
    UnsupportedMaxval(usize),
    #[error("pixel data truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Raster {
    pub fn new(width: usize, height: usize, fill: Rgb) -> Self {
        Raster { width, height, pixels: vec![fill; width * height] }
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, c: Rgb) {
        self.pixels[y * self.width + x] = c;
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn write_ppm(&self, mut w: impl Write) -> io::Result<()> {
        write!(w, "P6\n{} {}\n255\n", self.width, self.height)?;
        let bytes: Vec<u8> = self.pixels.iter().flatten().copied().collect();
        w.write_all(&bytes)
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.pixels.len() * 3 + 20);
        self.write_ppm(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn read_ppm(mut r: impl Read) -> Result<Raster, PpmError> {
        let mut data = Vec::new();
        r.read_to_end(&mut data)?;
        Raster::from_ppm(&data)
    }

    /// Parses a binary PPM. Header comments (`#` to end of line) are skipped.
    pub fn from_ppm(data: &[u8]) -> Result<Raster, PpmError> {
        if !data.starts_with(b"P6") {
            return Err(PpmError::BadMagic);
        }
        let mut pos = 2;
        let mut fields = [0usize; 3];
        for field in &mut fields {
            loop {
                while pos < data.len() && data[pos].is_ascii_whitespace() {
                    pos += 1;
                }
                if pos < data.len() && data[pos] == b'#' {
                    while pos < data.len() && data[pos] != b'\n' {
                        pos += 1;
                    }
                    continue;
                }
                break;
            }
            let start = pos;
            while pos < data.len() && data[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err(PpmError::BadHeader(format!("expected a number at byte {start}")));
            }
            *field = std::str::from_utf8(&data[start..pos])
                .unwrap()
                .parse()
                .map_err(|_| PpmError::BadHeader("number out of range".into()))?;
        }
        if pos >= data.len() || !data[pos].is_ascii_whitespace() {
            return Err(PpmError::BadHeader("missing separator before pixel data".into()));
        }
        pos += 1;
        let [width, height, maxval] = fields;
        if maxval != 255 {
            return Err(PpmError::UnsupportedMaxval(maxval));
        }
        let expected = width * height * 3;
        let body = &data[pos..];
        if body.len() < expected {
            return Err(PpmError::Truncated { expected, found: body.len() });
        }
        let pixels = body[..expected].chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        Ok(Raster { width, height, pixels })
    }
}
