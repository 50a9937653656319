//! Reproducible experiments on generated Floquet-isospectral pairs.
//!
//! Pairs come from translations, either global or one per separable
//! component, and every generated pair is itself checked with
//! [`floquet_isospectral`] before it is used. Each trial draws from its own
//! stream `rng::trial_seed(seed, trial)`, so reports depend only on
//! `(spec, pattern, trials, seed, tolerances)`.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::charpoly::{
    extract_component_charpoly, invariant_report, recover_ptilde_with, InvariantReport,
    RecoveryOptions, TildeRoute,
};
use crate::error::{Error, Result};
use crate::floquet::{dual_equivalence_residual, floquet_isospectral};
use crate::laurent::Scalar;
use crate::lattice::{LatticeKind, LatticeSpec, MultiIndex};
use crate::potential::{
    dft, is_separable, join, mean, random_potential_from, split, translate, Potential,
    PotentialMode, SeparabilityPattern, SeparabilityVerdict,
};
use crate::rng::{self, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Relative λ-coefficient agreement for `floquet_isospectral`.
    pub isospectral: f64,
    pub separability: f64,
    /// Bound on `Σ_{l∈S} |V^(l)|²` relative to `scale²`.
    pub cross_power: f64,
    /// Relative agreement of component polynomials.
    pub component: f64,
    pub mean: f64,
    pub resolvent: f64,
    pub power: f64,
    pub dual: f64,
    pub resolvent_samples: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            isospectral: 1e-9,
            separability: 1e-9,
            cross_power: 1e-18,
            component: 1e-8,
            mean: 1e-10,
            resolvent: 1e-8,
            power: 1e-9,
            dual: 1e-9,
            resolvent_samples: 100,
        }
    }
}

pub const DEFAULT_TRIALS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// Passes iff `value ≤ limit`.
    fn at_most(name: &str, value: f64, limit: f64) -> Check {
        Check {
            name: name.into(),
            value,
            limit,
            passed: value <= limit,
            detail: None,
        }
    }

    /// Passes iff `value > limit` (a negative control must be rejected).
    fn above(name: &str, value: f64, limit: f64) -> Check {
        Check {
            name: name.into(),
            value,
            limit,
            passed: value > limit,
            detail: None,
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Check {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: usize,
    pub seed: u64,
    pub generator: String,
    pub isospectral_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separability: Option<SeparabilityVerdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub component_residuals: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constants: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantReport>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl TrialRecord {
    fn new(index: usize, seed: u64, generator: impl Into<String>) -> Self {
        TrialRecord {
            index,
            seed,
            generator: generator.into(),
            isospectral_residual: 0.0,
            separability: None,
            component_residuals: vec![],
            constants: vec![],
            invariants: None,
            checks: vec![],
            passed: false,
        }
    }

    fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    fn finish(mut self) -> Self {
        self.passed = self.checks.iter().all(|c| c.passed);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub experiment: String,
    pub periods: Vec<usize>,
    pub lattice: LatticeKind,
    pub pattern: Option<Vec<usize>>,
    pub generator: String,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub trials: Vec<TrialRecord>,
    pub max_isospectral_residual: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub passed: bool,
}

impl RigidityReport {
    fn new(
        experiment: &str,
        spec: &LatticeSpec,
        pattern: Option<&SeparabilityPattern>,
        generator: &str,
        seed: u64,
        tol: &Tolerances,
    ) -> Self {
        RigidityReport {
            experiment: experiment.into(),
            periods: spec.periods().to_vec(),
            lattice: spec.kind(),
            pattern: pattern.map(|p| p.blocks().to_vec()),
            generator: generator.into(),
            seed,
            tolerances: *tol,
            trials: vec![],
            max_isospectral_residual: 0.0,
            notes: vec![],
            passed: false,
        }
    }

    fn finish(mut self) -> Self {
        self.max_isospectral_residual = self
            .trials
            .iter()
            .map(|t| t.isospectral_residual)
            .fold(0.0, f64::max);
        self.passed = self.trials.iter().all(|t| t.passed);
        self
    }

    pub fn failed_trials(&self) -> impl Iterator<Item = &TrialRecord> {
        self.trials.iter().filter(|t| !t.passed)
    }

    /// Human-readable summary, one line per trial plus a verdict line.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let pattern = self
            .pattern
            .as_ref()
            .map(|p| format!(" pattern={p:?}"))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{} periods={:?} lattice={}{} seed={} trials={}",
            self.experiment,
            self.periods,
            self.lattice,
            pattern,
            self.seed,
            self.trials.len()
        );
        for t in &self.trials {
            let failed: Vec<&str> = t.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            let _ = writeln!(
                out,
                "  trial {:>3} seed={:<20} {:<10} {} residual={:.3e}{}",
                t.index,
                t.seed,
                t.generator,
                if t.passed { "PASS" } else { "FAIL" },
                t.isospectral_residual,
                if failed.is_empty() { String::new() } else { format!(" failed={failed:?}") }
            );
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        let _ = writeln!(
            out,
            "{}: {} (max isospectral residual {:.3e})",
            self.experiment,
            if self.passed { "PASS" } else { "FAIL" },
            self.max_isospectral_residual
        );
        out
    }
}

fn random_translation(rng: &mut Stream, spec: &LatticeSpec) -> MultiIndex {
    MultiIndex(
        spec.periods()
            .iter()
            .map(|&q| rng::uniform(rng, 0.0, q as f64).floor().min(q as f64 - 1.0) as i64)
            .collect(),
    )
}

/// A generated pair with how it was made.
#[derive(Debug, Clone)]
pub struct IsospectralPair {
    pub v: Potential,
    pub y: Potential,
    /// One translation for mode (a), one per component for mode (b).
    pub translations: Vec<MultiIndex>,
    pub residual: f64,
}

fn translate_components(
    rng: &mut Stream,
    v: &Potential,
    p: &SeparabilityPattern,
    tol: f64,
) -> Result<(Potential, Vec<MultiIndex>)> {
    let parts = split(v, p, tol)?;
    let mut shifts = Vec::with_capacity(parts.components.len());
    let mut moved = Vec::with_capacity(parts.components.len());
    for comp in &parts.components {
        let t = random_translation(rng, comp.spec());
        moved.push(translate(comp, &t)?);
        shifts.push(t);
    }
    Ok((join(parts.constant, &moved, p)?, shifts))
}

fn generate_pair(rng: &mut Stream, spec: &LatticeSpec, p: Option<&SeparabilityPattern>, tol: &Tolerances) -> Result<IsospectralPair> {
    let (v, y, translations) = match p {
        None => {
            let v = random_potential_from(rng, spec, &PotentialMode::Real)?;
            let t = random_translation(rng, spec);
            let y = translate(&v, &t)?;
            (v, y, vec![t])
        }
        Some(p) => {
            let mode = PotentialMode::Separable { pattern: p.blocks().to_vec(), complex: false };
            let v = random_potential_from(rng, spec, &mode)?;
            let (y, shifts) = translate_components(rng, &v, p, tol.separability)?;
            (v, y, shifts)
        }
    };
    let report = floquet_isospectral(&v, &y, tol.isospectral)?;
    if !report.accepted {
        return Err(Error::GeneratorFailed(report.relative_residual));
    }
    Ok(IsospectralPair { v, y, translations, residual: report.relative_residual })
}

/// Draws `V` and an isospectral partner `Y`: a global translate when no
/// pattern is given, otherwise a separable `V` with independently translated
/// components.
pub fn isospectral_pair(spec: &LatticeSpec, p: Option<&SeparabilityPattern>, seed: u64) -> Result<IsospectralPair> {
    generate_pair(&mut rng::stream(seed, 0), spec, p, &Tolerances::default())
}

/// `Σ_{l∈S} |V^(l)|²` and `scale = max(1, max_l |V^(l)|)`.
fn cross_power(v: &Potential, p: &SeparabilityPattern) -> (f64, f64) {
    let f = dft(v);
    let total = p.cross_set().iter().map(|l| f.at(l).norm_sqr()).sum();
    (total, f.sup_norm().max(1.0))
}

fn planted(rng: &mut Stream, v: &Potential, p: &SeparabilityPattern) -> Result<Potential> {
    crate::potential::plant_cross_coefficient(rng, v, p)
}

/// Separable `Y`, isospectral `V` ⇒ `V` separable, per trial, with a planted
/// negative control that must break isospectrality.
pub fn verify_thm_main2(
    spec: &LatticeSpec,
    p: &SeparabilityPattern,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<RigidityReport> {
    let mut report = RigidityReport::new("thm-main2", spec, Some(p), "separable Y, translated V", seed, tol);
    let mode = PotentialMode::Separable { pattern: p.blocks().to_vec(), complex: false };
    for i in 0..trials {
        let ts = rng::trial_seed(seed, i);
        let mut r = rng::stream(ts, 0);
        let y = random_potential_from(&mut r, spec, &mode)?;
        let componentwise = i % 2 == 1;
        let v = if componentwise {
            translate_components(&mut r, &y, p, tol.separability)?.0
        } else {
            translate(&y, &random_translation(&mut r, spec))?
        };
        let mut rec = TrialRecord::new(i, ts, if componentwise { "components" } else { "global" });
        let iso = floquet_isospectral(&v, &y, tol.isospectral)?;
        rec.isospectral_residual = iso.relative_residual;
        rec.push(Check::at_most("isospectral", iso.relative_residual, tol.isospectral));
        let verdict = is_separable(&dft(&v), p, tol.separability)?;
        rec.push(Check::at_most("v_separable", verdict.max_cross / verdict.scale, tol.separability));
        rec.separability = Some(verdict);
        let (sy, scale_y) = cross_power(&y, p);
        rec.push(Check::at_most("y_cross_power", sy / (scale_y * scale_y), tol.cross_power));
        let (sv, scale_v) = cross_power(&v, p);
        rec.push(Check::at_most("v_cross_power", sv / (scale_v * scale_v), tol.cross_power));
        let inv = invariant_report(&v, &y, Some(p), 0, ts)?;
        rec.push(Check::at_most("power_sums", inv.total_residual.max(inv.block_residual), tol.power));
        rec.invariants = Some(inv);
        let bad = planted(&mut r, &v, p)?;
        let neg = floquet_isospectral(&bad, &y, tol.isospectral)?;
        rec.push(
            Check::above("negative_control", neg.relative_residual, tol.isospectral)
                .with_detail("planted cross coefficient must break isospectrality"),
        );
        report.trials.push(rec.finish());
    }
    Ok(report.finish())
}

fn centered(v: &Potential) -> Potential {
    v.shifted(-mean(v))
}

/// Complex separable pairs: component polynomials agree after mean
/// normalization, both computed directly and by extraction.
///
/// `constants` fixes the per-component shifts `c_j` (they must sum to zero);
/// otherwise they are drawn per trial.
pub fn verify_thm_main3(
    spec: &LatticeSpec,
    p: &SeparabilityPattern,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
    constants: Option<&[Complex64]>,
) -> Result<RigidityReport> {
    if let Some(c) = constants {
        if c.len() != p.block_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} constants for {} blocks",
                c.len(),
                p.block_count()
            )));
        }
        let sum: Complex64 = c.iter().sum();
        if sum.norm() > 1e-12 {
            return Err(Error::InvalidPattern(format!("component constants sum to {sum}, expected 0")));
        }
    }
    let generator = if constants.is_some() { "translated components, fixed constants" } else { "translated components, drawn constants" };
    let mut report = RigidityReport::new("thm-main3", spec, Some(p), generator, seed, tol);
    let mode = PotentialMode::Separable { pattern: p.blocks().to_vec(), complex: true };
    let opts = RecoveryOptions::default();
    for i in 0..trials {
        let ts = rng::trial_seed(seed, i);
        let mut r = rng::stream(ts, 0);
        let v = random_potential_from(&mut r, spec, &mode)?;
        let parts = split(&v, p, tol.separability)?;
        let shifts: Vec<Complex64> = match constants {
            Some(c) => c.to_vec(),
            None => {
                let mut c: Vec<Complex64> = (0..p.block_count() - 1)
                    .map(|_| Complex64::new(rng::uniform(&mut r, -0.5, 0.5), rng::uniform(&mut r, -0.5, 0.5)))
                    .collect();
                let last = -c.iter().sum::<Complex64>();
                c.push(last);
                c
            }
        };
        let y_parts: Vec<Potential> = parts
            .components
            .iter()
            .zip(&shifts)
            .map(|(comp, &cj)| Ok(translate(comp, &random_translation(&mut r, comp.spec()))?.shifted(cj)))
            .collect::<Result<_>>()?;
        let y = join(parts.constant, &y_parts, p)?;

        let mut rec = TrialRecord::new(i, ts, "components");
        rec.constants = shifts;
        let iso = floquet_isospectral(&v, &y, tol.isospectral)?;
        rec.isospectral_residual = iso.relative_residual;
        rec.push(Check::at_most("isospectral", iso.relative_residual, tol.isospectral));

        for (j, (vj, yj)) in parts.components.iter().zip(&y_parts).enumerate() {
            let pv = recover_ptilde_with(&centered(vj), TildeRoute::Dual, opts)?;
            let py = recover_ptilde_with(&centered(yj), TildeRoute::Dual, opts)?;
            let diff = pv.relative_diff(&py);
            rec.component_residuals.push(diff);
            rec.push(Check::at_most(&format!("component_{}", j + 1), diff, tol.component));

            let ev = extract_component_charpoly(&v, p, j, tol.separability, opts)?;
            let ey = extract_component_charpoly(&y, p, j, tol.separability, opts)?;
            rec.push(Check::at_most(&format!("extracted_{}", j + 1), ev.relative_diff(&ey), tol.component));
            let direct = pv.with_scalar(Scalar::Y);
            rec.push(Check::at_most(&format!("extracted_vs_direct_{}", j + 1), ev.relative_diff(&direct), tol.component));
        }

        // negative control: redraw the last component
        let last = p.block_count() - 1;
        let fresh = random_potential_from(&mut r, &p.block_spec(last), &PotentialMode::Complex)?;
        let mut bad_parts = y_parts.clone();
        bad_parts[last] = centered(&fresh).shifted(rec.constants[last]);
        let bad = join(parts.constant, &bad_parts, p)?;
        let neg = floquet_isospectral(&v, &bad, tol.isospectral)?;
        rec.push(
            Check::above("negative_control", neg.relative_residual, tol.isospectral)
                .with_detail("independently redrawn component must break isospectrality"),
        );
        report.trials.push(rec.finish());
    }
    Ok(report.finish())
}

/// Outcome of [`key_invariants_trial`] when the pair is not isospectral.
pub const NECESSARY_ONLY: &str = "invariants agree but spectra differ";

fn key_invariants_trial(
    index: usize,
    seed: u64,
    generator: &str,
    v: &Potential,
    y: &Potential,
    p: Option<&SeparabilityPattern>,
    tol: &Tolerances,
) -> Result<TrialRecord> {
    if !v.is_real() || !y.is_real() {
        return Err(Error::NotReal("the invariant checks"));
    }
    let mut rec = TrialRecord::new(index, seed, generator);
    let iso = floquet_isospectral(v, y, tol.isospectral)?;
    rec.isospectral_residual = iso.relative_residual;
    let inv = invariant_report(v, y, p, tol.resolvent_samples, seed)?;
    let resolvent = inv.resolvent_residual.unwrap_or(0.0);
    if iso.accepted {
        rec.push(Check::at_most("isospectral", iso.relative_residual, tol.isospectral));
        rec.push(Check::at_most("mean", inv.mean_residual, tol.mean));
        rec.push(Check::at_most("resolvent", resolvent, tol.resolvent));
        rec.push(Check::at_most("total_power", inv.total_residual, tol.power));
        rec.push(Check::at_most("block_power", inv.block_residual, tol.power));
    } else {
        let differs = inv.mean_residual > tol.mean
            || resolvent > tol.resolvent
            || inv.total_residual > tol.power
            || inv.block_residual > tol.power;
        let detail = if differs { "rejected; an invariant differs" } else { NECESSARY_ONLY };
        rec.push(Check::above("isospectral", iso.relative_residual, tol.isospectral).with_detail(detail));
    }
    rec.invariants = Some(inv);
    Ok(rec.finish())
}

/// Invariant checks for one real pair: when the pair is isospectral, the
/// mean, the resolvent sums and the power sums must agree; otherwise the
/// report records whether some invariant differs or only the spectra do.
pub fn verify_key1_key4(
    v: &Potential,
    y: &Potential,
    p: Option<&SeparabilityPattern>,
    seed: u64,
    tol: &Tolerances,
) -> Result<RigidityReport> {
    let mut report = RigidityReport::new("key-invariants", v.spec(), p, "given pair", seed, tol);
    let rec = key_invariants_trial(0, seed, "given", v, y, p, tol)?;
    if rec.checks.iter().any(|c| c.detail.as_deref() == Some(NECESSARY_ONLY)) {
        report.notes.push(NECESSARY_ONLY.into());
    }
    report.trials.push(rec);
    Ok(report.finish())
}

/// Reflection `n_j → −n_j` in the first coordinate with period ≥ 3.
fn partial_reflection(v: &Potential) -> Option<Potential> {
    let spec = v.spec();
    let axis = spec.periods().iter().position(|&q| q >= 3)?;
    let values = spec
        .fundamental_domain()
        .iter()
        .map(|n| {
            let mut m = n.coords().to_vec();
            m[axis] = -m[axis];
            v.at(&m)
        })
        .collect();
    Potential::new(spec.clone(), values).ok()
}

/// Translated real pairs, then two controls: a constant shift (mean differs,
/// rejected) and, when some period is at least 3, a partial reflection whose
/// Fourier magnitudes are a rearrangement of the original ones.
pub fn verify_key_suite(
    spec: &LatticeSpec,
    p: Option<&SeparabilityPattern>,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<RigidityReport> {
    let mut report = RigidityReport::new("key-invariants", spec, p, "translated real pairs", seed, tol);
    for i in 0..trials {
        let ts = rng::trial_seed(seed, i);
        let pair = generate_pair(&mut rng::stream(ts, 0), spec, None, tol)?;
        report.trials.push(key_invariants_trial(i, ts, "global", &pair.v, &pair.y, p, tol)?);
    }
    let ts = rng::trial_seed(seed, trials);
    let v = random_potential_from(&mut rng::stream(ts, 0), spec, &PotentialMode::Real)?;
    let shifted = v.shifted(Complex64::new(0.1, 0.0));
    let mut rec = key_invariants_trial(trials, ts, "shift", &v, &shifted, p, tol)?;
    let mean_differs = rec.invariants.as_ref().is_some_and(|inv| inv.mean_residual > tol.mean);
    rec.push(Check {
        name: "mean_detected".into(),
        value: rec.invariants.as_ref().map_or(0.0, |inv| inv.mean_residual),
        limit: tol.mean,
        passed: mean_differs,
        detail: None,
    });
    report.trials.push(rec.finish());
    match partial_reflection(&v) {
        Some(reflected) => {
            let rec = key_invariants_trial(trials + 1, ts, "reflection", &v, &reflected, p, tol)?;
            if rec.checks.iter().any(|c| c.detail.as_deref() == Some(NECESSARY_ONLY)) {
                report.notes.push(format!("reflection control: {NECESSARY_ONLY}"));
            }
            report.trials.push(rec);
        }
        None => report.notes.push("no period ≥ 3; reflection control not applicable".into()),
    }
    Ok(report.finish())
}

/// Triangular lattice: dual equivalence, translated pairs and separability
/// transfer with pattern `(1, 1)`.
pub fn verify_triangular(spec: &LatticeSpec, trials: usize, seed: u64, tol: &Tolerances) -> Result<RigidityReport> {
    if spec.kind() != LatticeKind::Triangular {
        return Err(Error::LatticeMismatch("verify_triangular needs a triangular lattice".into()));
    }
    let p = SeparabilityPattern::new(spec, &[1, 1])?;
    let mut report = RigidityReport::new("triangular", spec, Some(&p), "dual check, translated pairs, separable transfer", seed, tol);
    let mode = PotentialMode::Separable { pattern: vec![1, 1], complex: false };
    for i in 0..trials {
        let ts = rng::trial_seed(seed, i);
        let mut r = rng::stream(ts, 0);
        let mut rec = TrialRecord::new(i, ts, "triangular");

        let complex = i % 2 == 1;
        let any = random_potential_from(&mut r, spec, if complex { &PotentialMode::Complex } else { &PotentialMode::Real })?;
        let z: Vec<Complex64> = (0..2)
            .map(|_| Complex64::from_polar(1.0, rng::uniform(&mut r, 0.0, std::f64::consts::TAU)))
            .collect();
        rec.push(Check::at_most("dual_equivalence", dual_equivalence_residual(&any, &z)?, tol.dual));

        let pair = generate_pair(&mut r, spec, None, tol)?;
        rec.push(Check::at_most("translated_pair", pair.residual, tol.isospectral));

        let y = random_potential_from(&mut r, spec, &mode)?;
        let v = translate(&y, &random_translation(&mut r, spec))?;
        let iso = floquet_isospectral(&v, &y, tol.isospectral)?;
        rec.isospectral_residual = iso.relative_residual;
        rec.push(Check::at_most("isospectral", iso.relative_residual, tol.isospectral));
        let verdict = is_separable(&dft(&v), &p, tol.separability)?;
        rec.push(Check::at_most("v_separable", verdict.max_cross / verdict.scale, tol.separability));
        rec.separability = Some(verdict);
        let bad = planted(&mut r, &v, &p)?;
        let neg = floquet_isospectral(&bad, &y, tol.isospectral)?;
        rec.push(Check::above("negative_control", neg.relative_residual, tol.isospectral));
        report.trials.push(rec.finish());
    }
    Ok(report.finish())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub reports: Vec<RigidityReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn summary(&self) -> String {
        let mut out: String = self.reports.iter().map(|r| r.summary()).collect();
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(out, "suite: {}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

/// Every suite applicable to `periods`: main2, main3 and key on the
/// hypercubic lattice, and the triangular suite when `d = 2`.
pub fn verify_all(periods: &[usize], blocks: &[usize], trials: usize, seed: u64, tol: &Tolerances) -> Result<SuiteReport> {
    let spec = LatticeSpec::hypercubic(periods)?;
    let p = SeparabilityPattern::new(&spec, blocks)?;
    let mut reports = vec![
        verify_thm_main2(&spec, &p, trials, seed, tol)?,
        verify_thm_main3(&spec, &p, trials, seed, tol, None)?,
        verify_key_suite(&spec, Some(&p), trials, seed, tol)?,
    ];
    let mut notes = vec![];
    if periods.len() == 2 {
        let tri = LatticeSpec::triangular(periods[0], periods[1])?;
        reports.push(verify_triangular(&tri, trials, seed, tol)?);
    } else {
        notes.push(format!("triangular suite needs d = 2, periods are {periods:?}"));
    }
    let passed = reports.iter().all(|r| r.passed);
    Ok(SuiteReport { reports, notes, passed })
}
