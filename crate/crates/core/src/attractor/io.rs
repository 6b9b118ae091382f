//! PGM and CSV serialisation of covers and samples.

use serde::Serialize;

use super::{BoxCover, PointSample};

/// Sidecar describing the pixel grid of a cover PGM.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PgmMeta {
    /// Lower-left corner of pixel (column 0, bottom row).
    pub origin: [f64; 2],
    pub cell: f64,
    pub width: usize,
    pub height: usize,
    pub dim: usize,
}

/// Binary P5 image with maxval 255 and the given row-major pixels.
pub fn pgm_bytes(width: usize, height: usize, pixels: &[u8]) -> Vec<u8> {
    assert_eq!(pixels.len(), width * height);
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

/// Occupied cells black (0), empty white (255); the top row holds the
/// largest second index.
pub fn cover_to_pgm(cover: &BoxCover) -> (Vec<u8>, PgmMeta) {
    let Some((lo, hi)) = cover.index_bounds() else {
        let meta = PgmMeta { origin: cover.origin, cell: cover.cell, width: 0, height: 0, dim: cover.dim };
        return (pgm_bytes(0, 0, &[]), meta);
    };
    let width = (hi[0] - lo[0] + 1) as usize;
    let height = (hi[1] - lo[1] + 1) as usize;
    let mut pixels = vec![255u8; width * height];
    for c in &cover.cells {
        let x = (c[0] - lo[0]) as usize;
        let y = (hi[1] - c[1]) as usize;
        pixels[y * width + x] = 0;
    }
    let origin = [cover.origin[0] + lo[0] as f64 * cover.cell, cover.origin[1] + lo[1] as f64 * cover.cell];
    (pgm_bytes(width, height, &pixels), PgmMeta { origin, cell: cover.cell, width, height, dim: cover.dim })
}

/// Float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `x` or `x,y` per line.
pub fn sample_to_csv(sample: &PointSample) -> String {
    let mut out = String::from(if sample.dim == 1 { "x\n" } else { "x,y\n" });
    for p in &sample.points {
        out.push_str(&fmt_f64(p[0]));
        if sample.dim == 2 {
            out.push(',');
            out.push_str(&fmt_f64(p[1]));
        }
        out.push('\n');
    }
    out
}

/// Cell centres as CSV.
pub fn cover_to_csv(cover: &BoxCover) -> String {
    sample_to_csv(&PointSample::new(cover.dim, cover.centers()))
}
