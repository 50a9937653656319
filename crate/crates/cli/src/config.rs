use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use floquet_core::lattice::{LatticeKind, LatticeSpec};
use floquet_core::potential::SeparabilityPattern;
use floquet_core::rigidity::Tolerances;
use serde::Deserialize;

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
    Csv,
}

/// Settings shared by all subcommands. The same fields are read from the
/// `--config` JSON file (keys use underscores); flags take precedence.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Falls back to FLOQUET_SEED, then 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_delimiter = ',')]
    pub periods: Option<Vec<usize>>,
    #[arg(long, global = true)]
    pub lattice: Option<LatticeKind>,
    /// Block sizes, e.g. 1,1.
    #[arg(long, global = true, value_delimiter = ',')]
    pub pattern: Option<Vec<usize>>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Extra roots of unity per side of each recovery grid.
    #[arg(long, global = true)]
    pub guard: Option<usize>,
    #[arg(long, global = true)]
    pub iso_tol: Option<f64>,
    #[arg(long, global = true)]
    pub sep_tol: Option<f64>,
    #[arg(long, global = true)]
    pub cross_tol: Option<f64>,
    #[arg(long, global = true)]
    pub component_tol: Option<f64>,
    #[arg(long, global = true)]
    pub mean_tol: Option<f64>,
    #[arg(long, global = true)]
    pub power_tol: Option<f64>,
    #[arg(long, global = true)]
    pub resolvent_tol: Option<f64>,
    #[arg(long, global = true)]
    pub dual_tol: Option<f64>,
    #[arg(long, global = true)]
    pub resolvent_samples: Option<usize>,
}

macro_rules! merge_fields {
    ($a:ident, $b:ident; $($f:ident),*) => {
        RunConfig { $($f: $a.$f.or($b.$f)),* }
    };
}

impl RunConfig {
    /// Flags in `self` override values from `file`.
    pub fn over(self, file: RunConfig) -> RunConfig {
        merge_fields!(self, file; output, format, seed, periods, lattice, pattern, trials, guard,
            iso_tol, sep_tol, cross_tol, component_tol, mean_tol, power_tol, resolvent_tol, dual_tol, resolvent_samples)
    }

    pub fn load(path: &Path) -> Result<RunConfig, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("config {}: {e}", path.display())))
    }

    pub fn seed(&self) -> Result<u64, Failure> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var("FLOQUET_SEED") {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| Failure::usage(format!("FLOQUET_SEED is not an unsigned integer: {s:?}"))),
            Err(_) => Ok(0),
        }
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn trials(&self) -> usize {
        self.trials.unwrap_or(floquet_core::rigidity::DEFAULT_TRIALS)
    }

    pub fn spec(&self) -> Result<LatticeSpec, Failure> {
        let periods = self
            .periods
            .clone()
            .ok_or_else(|| Failure::usage("--periods is required"))?;
        Ok(LatticeSpec::new(periods, self.lattice.unwrap_or(LatticeKind::Hypercubic))?)
    }

    /// The pattern, defaulting to `(1, 1)` in two dimensions.
    pub fn pattern_for(&self, spec: &LatticeSpec) -> Result<SeparabilityPattern, Failure> {
        let blocks = match (&self.pattern, spec.dim()) {
            (Some(p), _) => p.clone(),
            (None, 2) => vec![1, 1],
            (None, _) => return Err(Failure::usage("--pattern is required")),
        };
        Ok(SeparabilityPattern::new(spec, &blocks)?)
    }

    pub fn optional_pattern(&self, spec: &LatticeSpec) -> Result<Option<SeparabilityPattern>, Failure> {
        match &self.pattern {
            Some(p) => Ok(Some(SeparabilityPattern::new(spec, p)?)),
            None => Ok(None),
        }
    }

    pub fn tolerances(&self) -> Result<Tolerances, Failure> {
        let d = Tolerances::default();
        let t = Tolerances {
            isospectral: self.iso_tol.unwrap_or(d.isospectral),
            separability: self.sep_tol.unwrap_or(d.separability),
            cross_power: self.cross_tol.unwrap_or(d.cross_power),
            component: self.component_tol.unwrap_or(d.component),
            mean: self.mean_tol.unwrap_or(d.mean),
            resolvent: self.resolvent_tol.unwrap_or(d.resolvent),
            power: self.power_tol.unwrap_or(d.power),
            dual: self.dual_tol.unwrap_or(d.dual),
            resolvent_samples: self.resolvent_samples.unwrap_or(d.resolvent_samples),
        };
        let all = [t.isospectral, t.separability, t.cross_power, t.component, t.mean, t.resolvent, t.power, t.dual];
        if all.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Failure::usage("tolerances must be positive and finite"));
        }
        Ok(t)
    }

    pub fn recovery(&self) -> floquet_core::charpoly::RecoveryOptions {
        let mut o = floquet_core::charpoly::RecoveryOptions::default();
        if let Some(g) = self.guard {
            o.guard = g;
        }
        o
    }
}
