use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::Error;
use crate::symplectic::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Core,
    Continuity,
    Gallery,
    Kg,
    Probe,
    All,
}

impl SuiteName {
    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Core => "core",
            SuiteName::Continuity => "continuity",
            SuiteName::Gallery => "gallery",
            SuiteName::Kg => "kg",
            SuiteName::Probe => "probe",
            SuiteName::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct CoreParams {
    /// Random primary instances for the μ_s family checks.
    pub instances: usize,
    /// Mode counts n are drawn from [min_modes, max_modes] (dimension 2n).
    pub min_modes: usize,
    pub max_modes: usize,
    pub squeeze: f64,
    pub mix: f64,
    /// Exponents for the domination/purification-collapse checks, within [0, 1].
    pub s_grid: Vec<f64>,
    /// Engineered |R| = c·1 levels for the rigidity checks.
    pub rigidity_levels: Vec<f64>,
    pub defect_samples: usize,
}

impl Default for CoreParams {
    fn default() -> Self {
        CoreParams {
            instances: 100,
            min_modes: 1,
            max_modes: 20,
            squeeze: 4.0,
            mix: 0.3,
            s_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            rigidity_levels: vec![0.5, 0.9, 1.0],
            defect_samples: 32,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ContinuityParams {
    /// Seeded (G, V, W) triples for the adjoint-pair bound.
    pub instances: usize,
    pub min_modes: usize,
    pub max_modes: usize,
    pub squeeze: f64,
    pub mix: f64,
    /// Full-range grid in [0, 2].
    pub s_grid: Vec<f64>,
    /// Seeded (X, Y, Q) triples for the three-line bound.
    pub interpolation_instances: usize,
    pub interpolation_max_dim: usize,
    pub tau_grid: Vec<f64>,
    /// Dimensions of the growing-truncation ladder.
    pub ladder_dims: Vec<usize>,
}

impl Default for ContinuityParams {
    fn default() -> Self {
        ContinuityParams {
            instances: 500,
            min_modes: 1,
            max_modes: 20,
            squeeze: 4.0,
            mix: 0.3,
            s_grid: crate::continuity::DEFAULT_S_GRID.to_vec(),
            interpolation_instances: 500,
            interpolation_max_dim: 60,
            tau_grid: vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
            ladder_dims: vec![10, 20, 50, 100, 200],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct GalleryParams {
    /// Lattice for the classification/purification cross-checks.
    pub multiplier_sites: usize,
    pub multiplier_half_length: f64,
    /// Larger lattice for the norm-growth curve.
    pub growth_sites: usize,
    pub growth_half_length: f64,
    pub bump_width: f64,
    /// Translates used for the log-log slope fit.
    pub fit_translates: Vec<usize>,
    /// Site counts for the frequency-flip refinement comparison.
    pub flip_sites: Vec<usize>,
    pub flip_half_length: f64,
    pub isometry_trials: usize,
}

impl Default for GalleryParams {
    fn default() -> Self {
        GalleryParams {
            multiplier_sites: 384,
            multiplier_half_length: 8.0,
            growth_sites: 1536,
            growth_half_length: 16.0,
            bump_width: 1.0,
            fit_translates: (4..=12).collect(),
            flip_sites: vec![128, 256],
            flip_half_length: 8.0,
            isometry_trials: 100,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct KgParams {
    /// Site counts for the purification-identity checks.
    pub sizes: Vec<usize>,
    /// Site counts for the cutoff-evolution experiment.
    pub cutoff_sizes: Vec<usize>,
    pub spacing: f64,
    /// Evolution time for the experiments.
    pub time: f64,
    pub tau_grid: Vec<f64>,
    /// Upper potential level of the piecewise step (lower level is 1).
    pub potential_step: f64,
    /// Fraction of the circle covered by the experiment region.
    pub region_fraction: f64,
    /// Explicit region (site list) overriding `region_fraction`.
    pub region_sites: Option<Vec<usize>>,
    /// Explicit per-site cutoff profile overriding the raised-cosine
    /// default (must be 1 on the region). Lengths must match the lattice,
    /// so this is only usable with a single entry in `cutoff_sizes`.
    pub chi_profile: Option<Vec<f64>>,
    /// Explicit piecewise potential [(t_start, level)] overriding the
    /// built-in 1 → potential_step step.
    pub potential_pieces: Option<Vec<(f64, f64)>>,
    pub conservation_trials: usize,
}

impl Default for KgParams {
    fn default() -> Self {
        KgParams {
            sizes: vec![64, 128, 256],
            cutoff_sizes: vec![64, 128, 256],
            spacing: 1.0,
            time: 1.3,
            tau_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            potential_step: 16.0,
            region_fraction: 0.25,
            region_sites: None,
            chi_profile: None,
            potential_pieces: None,
            conservation_trials: 100,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeParams {
    /// Site counts for the local-structure probes (all proper arcs each).
    pub sizes: Vec<usize>,
    pub roundtrip_instances: usize,
    pub roundtrip_step: f64,
}

impl Default for ProbeParams {
    fn default() -> Self {
        ProbeParams {
            sizes: vec![16, 32, 64],
            roundtrip_instances: 100,
            roundtrip_step: 1e-3,
        }
    }
}

/// Tolerances in force, including the bound-verification slack, as echoed
/// in every report header.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceTable {
    pub degeneracy: f64,
    pub domination: f64,
    pub classification: f64,
    pub metric: f64,
    pub verification: f64,
}

impl Default for ToleranceTable {
    fn default() -> Self {
        let t = Tolerances::default();
        ToleranceTable {
            degeneracy: t.degeneracy,
            domination: t.domination,
            classification: t.classification,
            metric: t.metric,
            verification: crate::continuity::VERIFICATION_TOLERANCE,
        }
    }
}

impl ToleranceTable {
    pub fn as_tolerances(&self) -> Tolerances {
        Tolerances {
            degeneracy: self.degeneracy,
            domination: self.domination,
            classification: self.classification,
            metric: self.metric,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// Config schema version; only 1 exists.
    pub schema: u32,
    pub suite: SuiteName,
    pub seed: u64,
    pub core: CoreParams,
    pub continuity: ContinuityParams,
    pub gallery: GalleryParams,
    pub kg: KgParams,
    pub probe: ProbeParams,
    pub tolerances: ToleranceTable,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            schema: 1,
            suite: SuiteName::All,
            seed: 0,
            core: CoreParams::default(),
            continuity: ContinuityParams::default(),
            gallery: GalleryParams::default(),
            kg: KgParams::default(),
            probe: ProbeParams::default(),
            tolerances: ToleranceTable::default(),
            output: None,
            format: OutputFormat::Json,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.schema != 1 {
            return Err(Error::InvalidValue(format!(
                "unknown config schema version {}",
                self.schema
            )));
        }
        let t = &self.tolerances;
        for (name, value) in [
            ("degeneracy", t.degeneracy),
            ("domination", t.domination),
            ("classification", t.classification),
            ("metric", t.metric),
            ("verification", t.verification),
        ] {
            if value.is_nan() || value <= 0.0 {
                return Err(Error::InvalidValue(format!(
                    "tolerance `{name}` must be positive, got {value}"
                )));
            }
        }
        if self.core.min_modes == 0 || self.core.min_modes > self.core.max_modes {
            return Err(Error::InvalidValue(
                "core mode range must satisfy 1 <= min_modes <= max_modes".into(),
            ));
        }
        if self.continuity.min_modes == 0 || self.continuity.min_modes > self.continuity.max_modes {
            return Err(Error::InvalidValue(
                "continuity mode range must satisfy 1 <= min_modes <= max_modes".into(),
            ));
        }
        if self.core.squeeze < 1.0 || self.continuity.squeeze < 1.0 {
            return Err(Error::InvalidValue("squeeze must be >= 1".into()));
        }
        for s in self.core.s_grid.iter().chain(&self.continuity.s_grid) {
            if !(0.0..=2.0).contains(s) {
                return Err(Error::InvalidValue(format!("s = {s} outside [0, 2]")));
            }
        }
        for tau in &self.kg.tau_grid {
            if !(0.0..=1.0).contains(tau) {
                return Err(Error::InvalidValue(format!("tau = {tau} outside [0, 1]")));
            }
        }
        if !(0.0 < self.kg.region_fraction && self.kg.region_fraction < 1.0) {
            return Err(Error::InvalidValue(
                "region_fraction must be in (0, 1)".into(),
            ));
        }
        if self.kg.potential_step < 1.0 {
            return Err(Error::InvalidValue("potential_step must be >= 1".into()));
        }
        if let Some(region) = &self.kg.region_sites {
            if region.is_empty() {
                return Err(Error::InvalidValue("region_sites must be nonempty".into()));
            }
        }
        if let Some(chi) = &self.kg.chi_profile {
            if self.kg.cutoff_sizes.len() != 1 || chi.len() != self.kg.cutoff_sizes[0] {
                return Err(Error::InvalidValue(
                    "chi_profile needs exactly one cutoff size matching its length".into(),
                ));
            }
        }
        if let Some(pieces) = &self.kg.potential_pieces {
            if pieces.is_empty()
                || pieces
                    .iter()
                    .any(|(_, level)| level.is_nan() || *level <= 0.0)
            {
                return Err(Error::InvalidValue(
                    "potential_pieces must be nonempty with positive levels".into(),
                ));
            }
        }
        Ok(())
    }

    /// Canonical JSON echo for report headers. Output path and format are
    /// delivery options, not suite parameters, so they are masked to keep
    /// reports for the same run byte-comparable.
    pub fn echo(&self) -> String {
        let mut masked = self.clone();
        masked.output = None;
        masked.format = OutputFormat::Json;
        serde_json::to_string(&masked).expect("config serializes")
    }
}

/// Parse and validate a config file. Unknown keys are rejected; defaults
/// fill everything absent; the result is deterministic in the file bytes.
pub fn load_config(path: &Path) -> Result<SuiteConfig, Error> {
    let bytes = std::fs::read_to_string(path)?;
    load_config_str(&bytes)
}

pub fn load_config_str(text: &str) -> Result<SuiteConfig, Error> {
    let config: SuiteConfig = serde_json::from_str(text)?;
    config.validate()?;
    Ok(config)
}
