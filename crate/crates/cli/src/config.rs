//! Problem configuration files.

use std::path::Path;

use anyhow::{bail, Context};
use range_enclosure::boundary::{default_viewport, Viewport};
use range_enclosure::{ExtReal, OmegaBox, ProblemParams};
use serde::Deserialize;

/// A number or one of the strings `"inf"`, `"-inf"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Endpoint {
    Number(f64),
    Text(String),
}

impl Endpoint {
    fn to_ext(&self) -> anyhow::Result<ExtReal> {
        match self {
            Endpoint::Number(x) => Ok(ExtReal::Finite(*x)),
            Endpoint::Text(s) => match s.trim() {
                "inf" | "+inf" => Ok(ExtReal::PosInfinity),
                "-inf" => Ok(ExtReal::NegInfinity),
                other => bail!("interval endpoint {other:?} is neither a number nor \"inf\"/\"-inf\""),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct ViewportConfig {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub c: f64,
    pub d: f64,
    pub alpha: [Endpoint; 2],
    pub beta: [Endpoint; 2],
    pub viewport: Option<ViewportConfig>,
    pub resolution: Option<usize>,
    pub epsilon: Option<f64>,
    pub seed: Option<u64>,
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct Problem {
    pub params: ProblemParams,
    pub omega_box: OmegaBox,
    pub viewport: Option<Viewport>,
    pub resolution: usize,
    pub epsilon: Option<f64>,
    pub seed: u64,
}

pub const DEFAULT_RESOLUTION: usize = 256;

impl Problem {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: ProblemConfig = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        Self::from_config(&cfg)
    }

    pub fn from_config(cfg: &ProblemConfig) -> anyhow::Result<Self> {
        let params = ProblemParams::new(cfg.c, cfg.d)?;
        let omega_box = OmegaBox::new(
            cfg.alpha[0].to_ext()?,
            cfg.alpha[1].to_ext()?,
            cfg.beta[0].to_ext()?,
            cfg.beta[1].to_ext()?,
        )?;
        let viewport = match cfg.viewport {
            Some(v) => {
                let finite = [v.re_min, v.re_max, v.im_min, v.im_max].iter().all(|x| x.is_finite());
                if !finite || v.re_min >= v.re_max || v.im_min >= v.im_max {
                    bail!("viewport must be a finite rectangle with min < max");
                }
                Some(Viewport { re_min: v.re_min, re_max: v.re_max, im_min: v.im_min, im_max: v.im_max })
            }
            None => None,
        };
        let resolution = cfg.resolution.unwrap_or(DEFAULT_RESOLUTION);
        if !(2..=8192).contains(&resolution) {
            bail!("resolution {resolution} outside [2, 8192]");
        }
        if let Some(e) = cfg.epsilon {
            if !(e > 0.0 && e.is_finite()) {
                bail!("epsilon must be positive and finite, got {e}");
            }
        }
        Ok(Problem { params, omega_box, viewport, resolution, epsilon: cfg.epsilon, seed: cfg.seed.unwrap_or(0) })
    }

    pub fn viewport(&self) -> Viewport {
        self.viewport.unwrap_or_else(|| default_viewport(&self.omega_box, &self.params))
    }
}
