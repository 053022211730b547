use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{LineSet, ParamCurve, PlaneCurve, Vec2};
use crate::numeric::{pairwise_sum, quantile};
use crate::transform::ImageGrid;

/// Vertices of the polygon standing in for the boundary curve.
pub const BOUNDARY_POLYGON: usize = 2048;

/// How much of the strongest-gradient mass lies near the predicted set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArtifactScore {
    /// Tube half-width in pixels.
    pub tube_radius: f64,
    pub threshold_quantile: f64,
    /// Number of pixels above the threshold.
    pub selected: usize,
    pub inside_fraction: f64,
    /// Mass fraction attributed to each predicted line (nearest object wins).
    pub per_line: Vec<f64>,
    /// Mass fraction attributed to the boundary itself.
    pub boundary: f64,
}

impl ArtifactScore {
    /// `key = value` report, one entry per line.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "tube_radius_px = {}\nthreshold_quantile = {}\nselected_pixels = {}\ninside_fraction = {:.6}\nboundary_fraction = {:.6}\n",
            self.tube_radius, self.threshold_quantile, self.selected, self.inside_fraction, self.boundary
        );
        for (k, f) in self.per_line.iter().enumerate() {
            out.push_str(&format!("line_{k}_fraction = {f:.6}\n"));
        }
        out
    }
}

struct Predicted {
    lines: Vec<(Vec2, f64)>,
    polygon: Vec<Vec2>,
}

impl Predicted {
    fn new(lines: &LineSet, curve: &ParamCurve) -> Self {
        let polygon = curve.sample_params(BOUNDARY_POLYGON).into_iter().map(|t| curve.point(t)).collect();
        let lines = lines.lines.iter().map(|l| (l.line.normal(), l.line.s)).collect();
        Self { lines, polygon }
    }

    fn boundary_distance(&self, x: Vec2) -> f64 {
        let m = self.polygon.len();
        let mut best = f64::INFINITY;
        for k in 0..m {
            let a = self.polygon[k];
            let b = self.polygon[(k + 1) % m];
            let ab = b - a;
            let u = ((x - a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
            let d = x - (a + ab * u);
            best = best.min(d.dot(d));
        }
        best.sqrt()
    }

    /// Index of the nearest object within `radius` (lines first, then the
    /// boundary as index `lines.len()`).
    fn nearest(&self, x: Vec2, radius: f64) -> Option<usize> {
        let mut best = (f64::INFINITY, usize::MAX);
        for (k, &(nrm, s)) in self.lines.iter().enumerate() {
            let d = (x.dot(nrm) - s).abs();
            if d < best.0 {
                best = (d, k);
            }
        }
        let d = self.boundary_distance(x);
        if d < best.0 {
            best = (d, self.lines.len());
        }
        (best.0 <= radius).then_some(best.1)
    }
}

/// Scores `gradmap` against the predicted lines and the boundary.
///
/// Pixels strictly above the `quantile`-quantile of the map are selected and
/// weighted by their value; `inside_fraction` is the share of that weight
/// within `tube_radius` pixels of some line or of the boundary polygon.
pub fn localization_score(
    gradmap: &ImageGrid,
    lines: &LineSet,
    curve: &ParamCurve,
    tube_radius: f64,
    quantile_level: f64,
) -> Result<ArtifactScore> {
    if !(quantile_level > 0.0 && quantile_level < 1.0) {
        return Err(Error::InvalidArgument(format!("quantile must lie in (0, 1), got {quantile_level}")));
    }
    if !(tube_radius >= 1.0) {
        return Err(Error::InvalidArgument(format!("tube radius must be at least one pixel, got {tube_radius}")));
    }
    let cut = quantile(&gradmap.values, quantile_level)
        .ok_or_else(|| Error::EmptyThreshold("empty gradient map".into()))?;
    let n = gradmap.n;
    let picked: Vec<(usize, f64)> =
        gradmap.values.iter().enumerate().filter(|(_, &v)| v > cut && v.is_finite()).map(|(k, &v)| (k, v)).collect();
    if picked.is_empty() {
        return Err(Error::EmptyThreshold(format!("no pixel exceeds the {quantile_level} quantile ({cut})")));
    }
    let pred = Predicted::new(lines, curve);
    let radius = tube_radius * gradmap.pixel();
    let owner: Vec<Option<usize>> =
        picked.par_iter().map(|&(k, _)| pred.nearest(gradmap.center(k % n, k / n), radius)).collect();
    let weights: Vec<f64> = picked.iter().map(|p| p.1).collect();
    let total = pairwise_sum(&weights);
    if !(total > 0.0) {
        return Err(Error::EmptyThreshold("selected pixels carry no mass".into()));
    }
    let share = |k: usize| {
        let w: Vec<f64> = owner.iter().zip(&weights).map(|(o, &w)| if *o == Some(k) { w } else { 0.0 }).collect();
        pairwise_sum(&w) / total
    };
    let per_line: Vec<f64> = (0..pred.lines.len()).map(share).collect();
    let boundary = share(pred.lines.len());
    let inside: Vec<f64> = owner.iter().zip(&weights).map(|(o, &w)| if o.is_some() { w } else { 0.0 }).collect();
    Ok(ArtifactScore {
        tube_radius,
        threshold_quantile: quantile_level,
        selected: picked.len(),
        inside_fraction: (pairwise_sum(&inside) / total).clamp(0.0, 1.0),
        per_line,
        boundary,
    })
}

/// Fraction of all pixel centres lying within the tube around the predicted
/// set: the score a map without any structure is expected to get.
pub fn tube_area_fraction(n: usize, r: f64, lines: &LineSet, curve: &ParamCurve, tube_radius: f64) -> Result<f64> {
    let grid = ImageGrid::zeros(n, r)?;
    let pred = Predicted::new(lines, curve);
    let radius = tube_radius * grid.pixel();
    let hits: usize = (0..n * n).into_par_iter().filter(|&k| pred.nearest(grid.center(k % n, k / n), radius).is_some()).count();
    Ok(hits as f64 / (n * n) as f64)
}

/// Score of a uniformly random map on the same raster, seeded.
pub fn random_baseline(
    like: &ImageGrid,
    lines: &LineSet,
    curve: &ParamCurve,
    tube_radius: f64,
    quantile_level: f64,
    seed: u64,
) -> Result<ArtifactScore> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let values = (0..like.n * like.n).map(|_| rng.gen::<f64>()).collect();
    localization_score(&ImageGrid { n: like.n, r: like.r, values }, lines, curve, tube_radius, quantile_level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{LineCoord, LineKind, PredictedLine};

    fn one_line(phi: f64, s: f64) -> LineSet {
        LineSet { lines: vec![PredictedLine { line: LineCoord::normalized(phi, s), kind: LineKind::Bitangent, params: vec![] }] }
    }

    #[test]
    fn map_on_a_line_scores_one() {
        let n = 128;
        let lines = one_line(0.0, 0.3);
        let img = ImageGrid::from_fn(n, 2.0, |x| if (x.x - 0.3).abs() < 0.02 { 1.0 } else { 0.0 }).unwrap();
        let curve = ParamCurve::circle(0.5);
        let s = localization_score(&img, &lines, &curve, 1.0, 0.9).unwrap();
        assert_eq!(s.inside_fraction, 1.0);
        assert!((s.per_line[0] - 1.0).abs() < 1e-12 && s.boundary == 0.0);
    }

    #[test]
    fn constant_map_has_empty_threshold() {
        let img = ImageGrid::from_fn(32, 1.0, |_| 1.0).unwrap();
        let r = localization_score(&img, &LineSet::default(), &ParamCurve::circle(0.5), 2.0, 0.99);
        assert!(matches!(r, Err(Error::EmptyThreshold(_))));
        assert!(localization_score(&img, &LineSet::default(), &ParamCurve::circle(0.5), 0.5, 0.99).is_err());
        assert!(localization_score(&img, &LineSet::default(), &ParamCurve::circle(0.5), 2.0, 1.0).is_err());
    }

    #[test]
    fn breakdown_bounded_by_inside_fraction() {
        let img = ImageGrid::from_fn(96, 1.5, |x| (x.x * 7.0).sin().abs() + (x.y * 3.0).cos().abs()).unwrap();
        let lines = one_line(0.4, 0.2);
        let s = localization_score(&img, &lines, &ParamCurve::kidney(), 3.0, 0.8).unwrap();
        let parts: f64 = s.per_line.iter().sum::<f64>() + s.boundary;
        assert!((parts - s.inside_fraction).abs() < 1e-12);
        assert!(s.inside_fraction <= 1.0);
    }

    #[test]
    fn monotone_in_tube_radius() {
        let img = ImageGrid::from_fn(96, 1.5, |x| 1.0 + (x.x * 11.0).sin() * (x.y * 5.0).cos()).unwrap();
        let lines = one_line(1.0, -0.4);
        let mut last = 0.0;
        for tube in [1.0, 2.0, 3.0, 5.0, 8.0, 13.0] {
            let s = localization_score(&img, &lines, &ParamCurve::ellipse(1.0, 0.5), tube, 0.9).unwrap();
            assert!(s.inside_fraction >= last);
            last = s.inside_fraction;
        }
    }
}
