use std::path::PathBuf;

use clap::ValueEnum;
use serde::Deserialize;

use wnl_core::norms::OptimizerConfig;
use wnl_core::LpSpace;

use crate::Failure;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

/// Defaults < WNL_SEED < config file < flags, applied in that order.
pub struct Settings {
    pub cfg: OptimizerConfig,
    pub format: Option<FormatArg>,
    pub out: Option<PathBuf>,
    /// expected ambient space taken from the config file; a --space flag
    /// on the command still wins
    pub space_hint: Option<(usize, f64)>,
}

pub struct Flags {
    pub config: Option<PathBuf>,
    pub format: Option<FormatArg>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub max_iters: Option<usize>,
    pub radial_grid: Option<usize>,
    pub step_tol: Option<f64>,
    pub value_tol: Option<f64>,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n: Option<usize>,
    p: Option<serde_json::Value>,
    seed: Option<u64>,
    restarts: Option<usize>,
    max_iters: Option<usize>,
    s_grid: Option<usize>,
    step_tol: Option<f64>,
    value_tol: Option<f64>,
    format: Option<String>,
    out: Option<PathBuf>,
}

fn parse_p(v: &serde_json::Value) -> Result<f64, Failure> {
    match v {
        serde_json::Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Failure::Usage(format!("p = {n} is not representable"))),
        serde_json::Value::String(w) if w == "inf" => Ok(f64::INFINITY),
        other => Err(Failure::Usage(format!(
            "p must be a number or \"inf\", got {other}"
        ))),
    }
}

/// "n,p" with p a number or "inf", e.g. "4,2" or "8,inf".
pub fn parse_space(text: &str) -> Result<(usize, f64), Failure> {
    let bad = || Failure::Usage(format!("--space wants \"n,p\", got {text:?}"));
    let (n_part, p_part) = text.split_once(',').ok_or_else(bad)?;
    let n: usize = n_part.trim().parse().map_err(|_| bad())?;
    let p = match p_part.trim() {
        "inf" => f64::INFINITY,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    // rejects n = 0, p < 1 and friends up front
    LpSpace::new(n, p)?;
    Ok((n, p))
}

pub fn effective(flags: &Flags) -> Result<Settings, Failure> {
    let mut cfg = OptimizerConfig::default();
    let mut format = None;
    let mut out = None;
    let mut space_hint = None;

    if let Ok(raw) = std::env::var("WNL_SEED") {
        cfg.seed = raw.trim().parse().map_err(|_| {
            Failure::Usage(format!("WNL_SEED must be an unsigned integer, got {raw:?}"))
        })?;
    }

    if let Some(path) = &flags.config {
        let file: FileConfig = crate::io::read_json(path)?;
        if let Some(v) = file.seed {
            cfg.seed = v;
        }
        if let Some(v) = file.restarts {
            cfg.restarts = v;
        }
        if let Some(v) = file.max_iters {
            cfg.max_iters = v;
        }
        if let Some(v) = file.s_grid {
            cfg.s_grid = v;
        }
        if let Some(v) = file.step_tol {
            cfg.step_tol = v;
        }
        if let Some(v) = file.value_tol {
            cfg.value_tol = v;
        }
        if let Some(v) = &file.format {
            format = Some(match v.as_str() {
                "json" => FormatArg::Json,
                "csv" => FormatArg::Csv,
                other => {
                    return Err(Failure::Usage(format!(
                        "format must be \"json\" or \"csv\", got {other:?}"
                    )))
                }
            });
        }
        if let Some(v) = file.out {
            out = Some(v);
        }
        match (file.n, &file.p) {
            (Some(n), Some(p)) => {
                let p = parse_p(p)?;
                LpSpace::new(n, p)?;
                space_hint = Some((n, p));
            }
            (None, None) => {}
            _ => {
                return Err(Failure::Usage(
                    "config file must set n and p together or not at all".into(),
                ))
            }
        }
    }

    if let Some(v) = flags.seed {
        cfg.seed = v;
    }
    if let Some(v) = flags.restarts {
        cfg.restarts = v;
    }
    if let Some(v) = flags.max_iters {
        cfg.max_iters = v;
    }
    if let Some(v) = flags.radial_grid {
        cfg.s_grid = v;
    }
    if let Some(v) = flags.step_tol {
        cfg.step_tol = v;
    }
    if let Some(v) = flags.value_tol {
        cfg.value_tol = v;
    }
    if let Some(v) = flags.format {
        format = Some(v);
    }
    if let Some(v) = &flags.out {
        out = Some(v.clone());
    }

    Ok(Settings {
        cfg,
        format,
        out,
        space_hint,
    })
}
