//! Binary and text formats for sinograms and images.
//!
//! `SINO1`: magic, `n_phi` and `n_s` as little-endian `u64`, `s_max` as
//! little-endian `f64`, then the row-major values. `IMG1` uses the same
//! layout with `n`, `n`, `r`. Images can also be written as 16-bit PGM with
//! the min/max scaling recorded in a sidecar `<file>.txt`.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use super::grid::{ImageGrid, Sinogram, SinogramGrid};
use crate::error::{Error, Result};

const SINO_MAGIC: &[u8] = b"SINO1";
const IMG_MAGIC: &[u8] = b"IMG1";

fn write_block(magic: &[u8], a: u64, b: u64, x: f64, values: &[f64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(magic.len() + 24 + 8 * values.len());
    out.extend_from_slice(magic);
    out.extend_from_slice(&a.to_le_bytes());
    out.extend_from_slice(&b.to_le_bytes());
    out.extend_from_slice(&x.to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn read_block(bytes: &[u8], magic: &[u8]) -> Result<(u64, u64, f64, Vec<f64>)> {
    let bad = |m: &str| Error::Parse { line: 0, msg: m.to_string() };
    if bytes.len() < magic.len() + 24 || &bytes[..magic.len()] != magic {
        return Err(bad("missing or wrong magic header"));
    }
    let mut p = magic.len();
    let mut take8 = || {
        let mut b = [0u8; 8];
        b.copy_from_slice(&bytes[p..p + 8]);
        p += 8;
        b
    };
    let a = u64::from_le_bytes(take8());
    let b = u64::from_le_bytes(take8());
    let x = f64::from_le_bytes(take8());
    let count = (a as usize).checked_mul(b as usize).ok_or_else(|| bad("dimensions overflow"))?;
    let body = &bytes[magic.len() + 24..];
    if body.len() != 8 * count {
        return Err(bad("payload length does not match header"));
    }
    let values = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok((a, b, x, values))
}

impl Sinogram {
    pub fn to_bytes(&self) -> Vec<u8> {
        write_block(SINO_MAGIC, self.grid.n_phi as u64, self.grid.n_s as u64, self.grid.s_max, &self.values)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (n_phi, n_s, s_max, values) = read_block(bytes, SINO_MAGIC)?;
        let grid = SinogramGrid::new(n_s as usize, n_phi as usize, s_max)?;
        Ok(Self { grid, values })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::File::create(path)?.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }

    /// Header line `n_phi,n_s,s_max`, its values, then one line per angle.
    pub fn to_csv(&self) -> String {
        let g = &self.grid;
        let mut s = format!("n_phi,n_s,s_max\n{},{},{}\n", g.n_phi, g.n_s, g.s_max);
        for j in 0..g.n_phi {
            let row: Vec<String> = self.row(j).iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }
}

impl ImageGrid {
    pub fn to_bytes(&self) -> Vec<u8> {
        write_block(IMG_MAGIC, self.n as u64, self.n as u64, self.r, &self.values)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (n, m, r, values) = read_block(bytes, IMG_MAGIC)?;
        if n != m {
            return Err(Error::Parse { line: 0, msg: "image is not square".into() });
        }
        let mut img = ImageGrid::zeros(n as usize, r)?;
        img.values = values;
        Ok(img)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::File::create(path)?.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }

    /// 16-bit binary PGM scaled from `[min, max]` to `[0, 65535]`, top row
    /// at the largest `x₂`. Returns `(min, max)`.
    pub fn to_pgm(&self) -> (Vec<u8>, f64, f64) {
        let (lo, hi) = self
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let span = if hi > lo { hi - lo } else { 1.0 };
        let mut out = format!("P5\n{} {}\n65535\n", self.n, self.n).into_bytes();
        for j in (0..self.n).rev() {
            for i in 0..self.n {
                let q = ((self.get(i, j) - lo) / span * 65535.0).round().clamp(0.0, 65535.0) as u16;
                out.extend_from_slice(&q.to_be_bytes());
            }
        }
        (out, lo, hi)
    }

    /// Writes `path` as PGM and `path.txt` with the scaling.
    pub fn save_pgm(&self, path: &Path) -> Result<()> {
        let (bytes, lo, hi) = self.to_pgm();
        std::fs::write(path, bytes)?;
        let mut side = path.as_os_str().to_owned();
        side.push(".txt");
        std::fs::write(side, format!("min = {lo:e}\nmax = {hi:e}\nextent = {}\n", self.r))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinogram_round_trip() {
        let grid = SinogramGrid::new(5, 3, 1.25).unwrap();
        let s = Sinogram::from_fn(grid, |s, p| s * 10.0 + p);
        let back = Sinogram::from_bytes(&s.to_bytes()).unwrap();
        assert_eq!(s, back);
        assert_eq!(&s.to_bytes()[..5], b"SINO1");
        assert!(Sinogram::from_bytes(b"SINO2xxxxxxxxxxxxxxxxxxxxxxxxxxxxxx").is_err());
        let mut short = s.to_bytes();
        short.pop();
        assert!(Sinogram::from_bytes(&short).is_err());
        let csv = s.to_csv();
        assert_eq!(csv.lines().count(), 2 + 3);
    }

    #[test]
    fn image_round_trip_and_pgm() {
        let img = ImageGrid::from_fn(4, 1.0, |x| x.x + 2.0 * x.y).unwrap();
        assert_eq!(ImageGrid::from_bytes(&img.to_bytes()).unwrap(), img);
        let (pgm, lo, hi) = img.to_pgm();
        assert!(pgm.starts_with(b"P5\n4 4\n65535\n"));
        assert_eq!(pgm.len(), 13 + 2 * 16);
        assert!(lo < hi);
        // first stored pixel is the top-left corner: smallest x, largest y
        let first = u16::from_be_bytes([pgm[13], pgm[14]]);
        let expect = ((img.get(0, 3) - lo) / (hi - lo) * 65535.0).round() as u16;
        assert_eq!(first, expect);
    }
}
