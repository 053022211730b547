//! Run configuration: a TOML document with one table per pipeline stage.
//!
//! Every key has a default, unknown keys are rejected, and single values can
//! be overridden with dotted `section.key=value` assignments.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ParamCurve;
use crate::nonlinearity::{BeamModel, Variant};
use crate::transform::SinogramGrid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CurveConfig {
    /// Built-in shape: `circle`, `ellipse`, `kidney` or `bean`.
    pub preset: String,
    /// Harmonic curve file; takes precedence over `preset` when set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

impl Default for CurveConfig {
    fn default() -> Self {
        Self { preset: "kidney".into(), file: None }
    }
}

impl CurveConfig {
    pub fn load(&self) -> Result<ParamCurve> {
        if let Some(path) = &self.file {
            return ParamCurve::load(path);
        }
        match self.preset.as_str() {
            "circle" => Ok(ParamCurve::circle(1.0)),
            "ellipse" => Ok(ParamCurve::ellipse(1.0, 0.6)),
            "kidney" => Ok(ParamCurve::kidney()),
            "bean" => Ok(ParamCurve::bean()),
            other => Err(Error::Config(format!("unknown curve preset '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SinogramConfig {
    pub n_s: usize,
    pub n_phi: usize,
    /// Half-range of `s`; when absent the image diagonal is covered.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_max: Option<f64>,
}

impl Default for SinogramConfig {
    fn default() -> Self {
        Self { n_s: 1025, n_phi: 720, s_max: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Background {
    /// Reconstruct the artifact alone.
    #[default]
    None,
    /// Add a soft-tissue disk of value 0.2 filling most of the field of view.
    Water,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ImageConfig {
    pub n: usize,
    pub r: f64,
    pub background: Background,
}

impl Default for ImageConfig {
    fn default() -> Self {
        Self { n: 512, r: 1.6, background: Background::None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantName {
    BeamHardening,
    Quadratic,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NonlinearityConfig {
    pub variant: VariantName,
    pub eps: f64,
    pub a: f64,
    pub alpha: f64,
    /// `(u, F(u))` pairs for the `table` variant.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<(f64, f64)>,
}

impl Default for NonlinearityConfig {
    fn default() -> Self {
        Self { variant: VariantName::Quadratic, eps: 1.0, a: 1.0, alpha: 1.0, points: Vec::new() }
    }
}

impl NonlinearityConfig {
    pub fn model(&self) -> Result<BeamModel> {
        let variant = match self.variant {
            VariantName::BeamHardening => Variant::BeamHardening,
            VariantName::Quadratic => Variant::Quadratic { a: self.a },
            VariantName::Table => Variant::Table { points: self.points.clone() },
        };
        BeamModel::new(self.eps, self.alpha, variant).map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScoreConfig {
    pub quantile: f64,
    /// In pixels.
    pub tube_radius: f64,
}

impl Default for ScoreConfig {
    fn default() -> Self {
        Self { quantile: 0.99, tube_radius: 3.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CuspConfig {
    pub rho: f64,
    pub eps: f64,
    pub n: usize,
    pub freq_scale: f64,
    pub window: (f64, f64),
    /// Also run the windowed localisation test.
    pub wavefront: bool,
}

impl Default for CuspConfig {
    fn default() -> Self {
        use crate::cuspwave::{DEFAULT_EPSILON, DEFAULT_FREQ_SCALE, DEFAULT_WINDOW};
        Self {
            rho: 3.0,
            eps: DEFAULT_EPSILON,
            n: 8192,
            freq_scale: DEFAULT_FREQ_SCALE,
            window: DEFAULT_WINDOW,
            wavefront: true,
        }
    }
}

/// Resolutions and tolerances of the self-check suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    /// Raster size of the coarser normal-operator run; the finer one doubles it.
    pub n: usize,
    pub n_phi: usize,
    pub roundtrips: usize,
    pub roundtrip_tol: f64,
    pub tangency_tol: f64,
    /// Allowed raster-disk sinogram error, in units of `Δs`.
    pub disk_tol_ds: f64,
    pub normal_residual: f64,
    /// Allowed relative change of the normal-operator constant between runs.
    pub normal_c_rel: f64,
    pub parseval_tol: f64,
    pub cusp_n: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n: 256,
            n_phi: 360,
            roundtrips: 10_000,
            roundtrip_tol: 1e-12,
            tangency_tol: 1e-9,
            disk_tol_ds: 2.0,
            normal_residual: 0.02,
            normal_c_rel: 5e-3,
            parseval_tol: 1e-10,
            cusp_n: 2048,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub seed: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub curve: CurveConfig,
    pub sinogram: SinogramConfig,
    pub image: ImageConfig,
    pub nonlinearity: NonlinearityConfig,
    pub score: ScoreConfig,
    pub cusp: CuspConfig,
    pub verify: VerifyConfig,
    pub run: RunSection,
}

fn toml_error(e: impl std::fmt::Display) -> Error {
    Error::Config(e.to_string())
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(toml_error)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; a relative `curve.file` is resolved against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_toml(&text)?;
        if let (Some(f), Some(dir)) = (&cfg.curve.file, path.parent()) {
            if f.is_relative() {
                cfg.curve.file = Some(dir.join(f));
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config always serialises")
    }

    /// Applies `section.key=value`. The value is read as a TOML literal and
    /// falls back to a bare string.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override '{assignment}' is not of the form key=value")))?;
        let (key, raw) = (key.trim(), raw.trim());
        let value: toml::Value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(raw.to_string()));
        let mut root = toml::Value::try_from(&*self).map_err(toml_error)?;
        let mut node = &mut root;
        let parts: Vec<&str> = key.split('.').collect();
        for (k, part) in parts.iter().enumerate() {
            let table =
                node.as_table_mut().ok_or_else(|| Error::Config(format!("'{key}' does not name a config value")))?;
            if k + 1 == parts.len() {
                table.insert(part.to_string(), value.clone());
                break;
            }
            node = table.entry(part.to_string()).or_insert_with(|| toml::Value::Table(Default::default()));
        }
        let updated: RunConfig = root.try_into().map_err(toml_error)?;
        updated.validate()?;
        *self = updated;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        let s = &self.sinogram;
        if s.n_s < 2 || s.n_phi < 2 {
            return bad(format!("sinogram needs n_s ≥ 2 and n_phi ≥ 2, got {} and {}", s.n_s, s.n_phi));
        }
        if let Some(m) = s.s_max {
            if !(m > 0.0) {
                return bad(format!("sinogram.s_max must be positive, got {m}"));
            }
        }
        if self.image.n < 8 || !(self.image.r > 0.0) {
            return bad(format!("image needs n ≥ 8 and r > 0, got {} and {}", self.image.n, self.image.r));
        }
        self.nonlinearity.model()?;
        let q = self.score.quantile;
        if !(q > 0.0 && q < 1.0) {
            return bad(format!("score.quantile must lie in (0, 1), got {q}"));
        }
        if !(self.score.tube_radius >= 1.0) {
            return bad(format!("score.tube_radius must be at least 1 pixel, got {}", self.score.tube_radius));
        }
        let c = &self.cusp;
        if !(c.rho > 2.0) {
            return bad(format!("cusp.rho must exceed 2, got {}", c.rho));
        }
        if !(c.eps > 0.0) {
            return bad(format!("cusp.eps must be positive, got {}", c.eps));
        }
        if c.n < 2048 || !c.n.is_power_of_two() {
            return bad(format!("cusp.n must be a power of two ≥ 2048, got {}", c.n));
        }
        if !(c.freq_scale > 0.0) || !(c.window.0 > 0.0 && c.window.1 > c.window.0) {
            return bad("cusp.freq_scale and cusp.window must be positive and increasing".into());
        }
        let v = &self.verify;
        if v.n < 16 || v.n_phi < 2 || v.roundtrips == 0 {
            return bad("verify.n ≥ 16, verify.n_phi ≥ 2 and verify.roundtrips ≥ 1 are required".into());
        }
        if v.cusp_n < 2048 || !v.cusp_n.is_power_of_two() {
            return bad(format!("verify.cusp_n must be a power of two ≥ 2048, got {}", v.cusp_n));
        }
        Ok(())
    }

    /// The sinogram grid, covering the image diagonal unless `s_max` is set.
    pub fn sinogram_grid(&self) -> Result<SinogramGrid> {
        let s_max = self.sinogram.s_max.unwrap_or(1.01 * self.image.r * std::f64::consts::SQRT_2);
        SinogramGrid::new(self.sinogram.n_s, self.sinogram.n_phi, s_max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        let text = c.to_toml();
        let back = RunConfig::from_toml(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_toml(), text);
    }

    #[test]
    fn partial_documents_fill_defaults() {
        let c = RunConfig::from_toml("[image]\nn = 128\n[run]\nseed = 9\n").unwrap();
        assert_eq!(c.image.n, 128);
        assert_eq!(c.image.r, 1.6);
        assert_eq!(c.run.seed, 9);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_toml("[image]\nsize = 3\n").is_err());
        assert!(RunConfig::from_toml("[imagery]\nn = 3\n").is_err());
    }

    #[test]
    fn overrides() {
        let mut c = RunConfig::default();
        c.set("image.n=128").unwrap();
        c.set("nonlinearity.variant = beam-hardening").unwrap();
        c.set("cusp.window=[8.0, 80.0]").unwrap();
        c.set("curve.preset=ellipse").unwrap();
        assert_eq!(c.image.n, 128);
        assert_eq!(c.nonlinearity.variant, VariantName::BeamHardening);
        assert_eq!(c.cusp.window, (8.0, 80.0));
        assert_eq!(c.curve.preset, "ellipse");
        assert!(c.set("image.colour=3").is_err());
        assert!(c.set("score.quantile=1.5").is_err());
        assert!(c.set("image.n").is_err());
        assert_eq!(c.image.n, 128);
    }

    #[test]
    fn presets_and_grid() {
        let mut c = RunConfig::default();
        for p in ["circle", "ellipse", "kidney", "bean"] {
            c.curve.preset = p.into();
            c.curve.load().unwrap();
        }
        c.curve.preset = "blob".into();
        assert!(c.curve.load().is_err());
        let g = c.sinogram_grid().unwrap();
        assert!(g.s_max > c.image.r * std::f64::consts::SQRT_2);
    }
}
