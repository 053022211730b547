use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use super::bitangent::{find_bitangents, tangency_points};
use super::curve::PlaneCurve;
use super::dual::LineCoord;
use super::flat::{find_flat_points, scan_samples, FlatKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineKind {
    Bitangent,
    InflectionTangent,
}

impl LineKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            LineKind::Bitangent => "bitangent",
            LineKind::InflectionTangent => "inflection-tangent",
        }
    }
}

/// A line along which streak artifacts are expected.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictedLine {
    pub line: LineCoord,
    pub kind: LineKind,
    /// Curve parameters of the tangency points (two for a bitangent).
    pub params: Vec<f64>,
}

/// The catalogue of predicted streak lines.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LineSet {
    pub lines: Vec<PredictedLine>,
}

impl LineSet {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn count(&self, kind: LineKind) -> usize {
        self.lines.iter().filter(|l| l.kind == kind).count()
    }

    /// Copy with the line at `index` removed.
    pub fn without(&self, index: usize) -> LineSet {
        let mut lines = self.lines.clone();
        lines.remove(index);
        LineSet { lines }
    }

    /// CSV with header `phi,s,kind,t1,t2`; `t2` is empty for inflection
    /// tangents.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("phi,s,kind,t1,t2\n");
        for l in &self.lines {
            let t1 = l.params.first().map(|v| v.to_string()).unwrap_or_default();
            let t2 = l.params.get(1).map(|v| v.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{},{}", l.line.phi, l.line.s, l.kind.as_str(), t1, t2);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<LineSet> {
        let mut lines = Vec::new();
        for (i, row) in text.lines().enumerate() {
            if i == 0 || row.trim().is_empty() {
                continue;
            }
            let perr = |msg: &str| Error::Parse { line: i + 1, msg: msg.to_string() };
            let cols: Vec<&str> = row.split(',').collect();
            if cols.len() != 5 {
                return Err(perr("expected 5 columns"));
            }
            let num = |s: &str| s.trim().parse::<f64>().map_err(|_| perr("bad number"));
            let kind = match cols[2].trim() {
                "bitangent" => LineKind::Bitangent,
                "inflection-tangent" => LineKind::InflectionTangent,
                _ => return Err(perr("unknown line kind")),
            };
            let mut params = vec![num(cols[3])?];
            if !cols[4].trim().is_empty() {
                params.push(num(cols[4])?);
            }
            lines.push(PredictedLine { line: LineCoord { phi: num(cols[0])?, s: num(cols[1])? }, kind, params });
        }
        Ok(LineSet { lines })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Every line along which streaks are predicted: all bitangents and the
/// tangent lines at inflection points.
///
/// Flat points where curvature touches zero without changing sign produce
/// no line. An inflection tangent that also touches the curve elsewhere, or
/// a line tangent at three or more points, is reported as
/// [`Error::TangencyViolation`].
pub fn predicted_lines<C: PlaneCurve + ?Sized>(curve: &C) -> Result<LineSet> {
    let flats = find_flat_points(curve, 1e-13)?;
    let bitangents = find_bitangents(curve, 1e-14)?;
    let n = scan_samples(curve);
    let mut lines = Vec::new();
    for b in &bitangents {
        let touch = tangency_points(curve, &b.line, n);
        if touch.len() > 2 {
            return Err(Error::TangencyViolation(format!(
                "line phi = {:.6}, s = {:.6} is tangent at {} points",
                b.line.phi,
                b.line.s,
                touch.len()
            )));
        }
        lines.push(PredictedLine { line: b.line, kind: LineKind::Bitangent, params: vec![b.t1, b.t2] });
    }
    for f in flats.iter().filter(|f| f.kind == FlatKind::Inflection) {
        let touch = tangency_points(curve, &f.tangent_line, n);
        let elsewhere = touch.iter().filter(|&&t| curve.param_distance(t, f.t) > 1e-5).count();
        if elsewhere > 0 {
            return Err(Error::TangencyViolation(format!(
                "inflection tangent at t = {:.6} touches the curve again",
                f.t
            )));
        }
        lines.push(PredictedLine { line: f.tangent_line, kind: LineKind::InflectionTangent, params: vec![f.t] });
    }
    Ok(LineSet { lines })
}

/// Pass/fail status of the two geometric hypotheses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    /// Curvature vanishes only at isolated points, to finite order.
    pub isolated_flat_points: bool,
    /// No line is tangent at three or more points, and no inflection tangent
    /// touches the curve elsewhere.
    pub finite_tangency: bool,
    pub messages: Vec<String>,
}

impl AssumptionReport {
    pub fn ok(&self) -> bool {
        self.isolated_flat_points && self.finite_tangency
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let pf = |b: bool| if b { "pass" } else { "fail" };
        let _ = writeln!(s, "isolated_flat_points = {}", pf(self.isolated_flat_points));
        let _ = writeln!(s, "finite_tangency = {}", pf(self.finite_tangency));
        for m in &self.messages {
            let _ = writeln!(s, "# {m}");
        }
        s
    }
}

pub fn validate_assumptions<C: PlaneCurve + ?Sized>(curve: &C) -> AssumptionReport {
    let mut report = AssumptionReport { isolated_flat_points: true, finite_tangency: true, messages: Vec::new() };
    if let Err(e) = find_flat_points(curve, 1e-13) {
        report.isolated_flat_points = false;
        report.messages.push(e.to_string());
        return report;
    }
    match predicted_lines(curve) {
        Ok(_) => {}
        Err(e @ Error::TangencyViolation(_)) => {
            report.finite_tangency = false;
            report.messages.push(e.to_string());
        }
        Err(e) => {
            report.finite_tangency = false;
            report.messages.push(e.to_string());
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ParamCurve;

    #[test]
    fn kidney_catalogue() {
        let set = predicted_lines(&ParamCurve::kidney()).unwrap();
        assert_eq!(set.count(LineKind::Bitangent), 1);
        assert_eq!(set.count(LineKind::InflectionTangent), 2);
        let back = LineSet::from_csv(&set.to_csv()).unwrap();
        assert_eq!(back, set);
    }

    #[test]
    fn ellipse_catalogue_is_empty() {
        let set = predicted_lines(&ParamCurve::ellipse(1.0, 0.6)).unwrap();
        assert!(set.is_empty());
        assert!(validate_assumptions(&ParamCurve::ellipse(1.0, 0.6)).ok());
    }

    #[test]
    fn csv_header_and_errors() {
        assert!(LineSet::from_csv("phi,s,kind,t1,t2\n0.1,0.2,bogus,0,\n").is_err());
        assert!(LineSet::from_csv("phi,s,kind,t1,t2\n0.1,0.2\n").is_err());
        assert!(LineSet::default().to_csv().starts_with("phi,s,kind,t1,t2"));
    }
}
