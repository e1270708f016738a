//! Pipeline parameters: defaults, flat key=value config files, and CLI flag
//! overrides (flags win over the config file, the config file over defaults).

use anyhow::{bail, Context, Result};
use clap::Args;

use goi_core::eval::PipelineParams;
use goi_core::partition::AssignMetric;

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Flat key=value parameter file applied before any explicit flags.
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,

    /// Minimum dwell for a stay, seconds.
    #[arg(long, global = true)]
    pub t_min: Option<i64>,

    /// Roaming radius for the reference-point based extractors, meters.
    #[arg(long, global = true)]
    pub d_max: Option<f64>,

    /// Maximum point-set diameter for the diameter stay extractor, meters.
    #[arg(long, global = true)]
    pub diam_max: Option<f64>,

    /// Hull buffer width, meters.
    #[arg(long, global = true)]
    pub buffer: Option<f64>,

    /// Jaccard threshold for geometric-similarity merging.
    #[arg(long, global = true)]
    pub j_min: Option<f64>,

    /// Minimum visit frequency for a destination.
    #[arg(long, global = true)]
    pub f_min: Option<u32>,

    /// OPTICS neighborhood radius, meters.
    #[arg(long, global = true)]
    pub eps: Option<f64>,

    /// OPTICS minimum neighborhood size.
    #[arg(long, global = true)]
    pub min_pts: Option<usize>,

    /// Maximum merged diameter for diameter-based destination merging, meters.
    #[arg(long, global = true)]
    pub diameter_min: Option<f64>,

    /// Micro-grid cell size, meters.
    #[arg(long, global = true)]
    pub cell_size: Option<f64>,

    /// Cell assignment metric: GS or PCS.
    #[arg(long, global = true)]
    pub metric: Option<String>,
}

impl ParamArgs {
    /// Resolves defaults -> config file -> explicit flags.
    pub fn resolve(&self) -> Result<PipelineParams> {
        let mut p = PipelineParams::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            apply_config(&mut p, &text)?;
        }
        if let Some(v) = self.t_min {
            p.stay.t_min = v;
        }
        if let Some(v) = self.d_max {
            p.stay.d_max = v;
        }
        if let Some(v) = self.diam_max {
            p.stay.diam_max = v;
        }
        if let Some(v) = self.buffer {
            p.stay.buffer_width = v;
        }
        if let Some(v) = self.j_min {
            p.merge.j_min = v;
        }
        if let Some(v) = self.f_min {
            p.merge.f_min = v;
        }
        if let Some(v) = self.eps {
            p.merge.eps = v;
        }
        if let Some(v) = self.min_pts {
            p.merge.min_pts = v;
        }
        if let Some(v) = self.diameter_min {
            p.merge.diameter_min = v;
        }
        if let Some(v) = self.cell_size {
            p.cell_size = v;
        }
        if let Some(v) = &self.metric {
            p.metric = v.parse::<AssignMetric>()?;
        }
        p.stay.validate()?;
        p.merge.validate()?;
        Ok(p)
    }
}

fn apply_config(p: &mut PipelineParams, text: &str) -> Result<()> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected `key = value`", lineno + 1);
        };
        let (key, value) = (key.trim(), value.trim());
        let parse_ctx = || format!("config line {}: bad value `{value}`", lineno + 1);
        match key {
            "t_min" => p.stay.t_min = value.parse().with_context(parse_ctx)?,
            "d_max" => p.stay.d_max = value.parse().with_context(parse_ctx)?,
            "diam_max" => p.stay.diam_max = value.parse().with_context(parse_ctx)?,
            "buffer" => p.stay.buffer_width = value.parse().with_context(parse_ctx)?,
            "j_min" => p.merge.j_min = value.parse().with_context(parse_ctx)?,
            "f_min" => p.merge.f_min = value.parse().with_context(parse_ctx)?,
            "eps" => p.merge.eps = value.parse().with_context(parse_ctx)?,
            "min_pts" => p.merge.min_pts = value.parse().with_context(parse_ctx)?,
            "diameter_min" => p.merge.diameter_min = value.parse().with_context(parse_ctx)?,
            "cell_size" => p.cell_size = value.parse().with_context(parse_ctx)?,
            "metric" => p.metric = value.parse::<AssignMetric>()?,
            other => bail!("config line {}: unknown key `{other}`", lineno + 1),
        }
    }
    Ok(())
}

/// The full parameter echo recorded in sidecars and reports.
pub fn params_json(p: &PipelineParams) -> serde_json::Value {
    serde_json::json!({
        "t_min": p.stay.t_min,
        "d_max": p.stay.d_max,
        "diam_max": p.stay.diam_max,
        "buffer": p.stay.buffer_width,
        "j_min": p.merge.j_min,
        "f_min": p.merge.f_min,
        "eps": p.merge.eps,
        "min_pts": p.merge.min_pts,
        "diameter_min": p.merge.diameter_min,
        "cell_size": p.cell_size,
        "metric": p.metric.name(),
    })
}
