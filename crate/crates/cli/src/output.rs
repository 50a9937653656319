use std::fmt::Write as _;

use floquet_core::charpoly::PowerSums;
use floquet_core::io::{fmt_float, potential_to_json, to_json};
use floquet_core::laurent::LaurentPoly;
use floquet_core::potential::{FourierTable, SeparabilityVerdict, SeparableParts};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::Format;
use crate::Failure;

fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, Failure> {
    Ok(to_json(value)?)
}

/// JSON for `json`, the given text otherwise.
pub fn report<T: Serialize>(value: &T, format: Format, text: impl FnOnce() -> String) -> Result<String, Failure> {
    match format {
        Format::Json => json(value),
        Format::Text => Ok(text()),
        Format::Csv => Err(Failure::usage("csv output is not available for this subcommand")),
    }
}

pub fn verdict_text(v: &SeparabilityVerdict) -> String {
    match &v.witness {
        Some(w) => format!("separable: false (witness {w}, |coefficient| {:.3e}, scale {:.3e})\n", v.max_cross, v.scale),
        None => format!("separable: true (max cross {:.3e}, scale {:.3e})\n", v.max_cross, v.scale),
    }
}

pub fn fourier(f: &FourierTable, format: Format) -> Result<String, Failure> {
    let spec = f.spec();
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Entry {
                l: Vec<i64>,
                value: [f64; 2],
            }
            #[derive(Serialize)]
            struct Doc<'a> {
                periods: &'a [usize],
                lattice: floquet_core::lattice::LatticeKind,
                coefficients: Vec<Entry>,
            }
            let coefficients = spec
                .fundamental_domain()
                .into_iter()
                .zip(f.coefficients())
                .map(|(l, c)| Entry { l: l.0, value: [c.re, c.im] })
                .collect();
            json(&Doc { periods: spec.periods(), lattice: spec.kind(), coefficients })
        }
        Format::Csv | Format::Text => {
            let sep = if format == Format::Csv { "," } else { " " };
            let mut out = String::new();
            if format == Format::Csv {
                let head: Vec<String> = (1..=spec.dim()).map(|j| format!("l{j}")).collect();
                let _ = writeln!(out, "{},re,im", head.join(","));
            }
            for (l, c) in spec.fundamental_domain().into_iter().zip(f.coefficients()) {
                let mut cells: Vec<String> = l.0.iter().map(|x| x.to_string()).collect();
                cells.push(fmt_float(c.re));
                cells.push(fmt_float(c.im));
                let _ = writeln!(out, "{}", cells.join(sep));
            }
            Ok(out)
        }
    }
}

pub fn parts(p: &SeparableParts) -> Result<String, Failure> {
    let components = p
        .components
        .iter()
        .map(|c| Ok(serde_json::from_str::<serde_json::Value>(&potential_to_json(c)?)?))
        .collect::<Result<Vec<_>, floquet_core::Error>>()?;
    #[derive(Serialize)]
    struct Doc {
        constant: [f64; 2],
        components: Vec<serde_json::Value>,
    }
    json(&Doc { constant: [p.constant.re, p.constant.im], components })
}

pub struct SpectrumRow {
    pub k: Vec<f64>,
    pub eigenvalues: Option<Vec<f64>>,
    pub coefficients: Vec<Complex64>,
}

/// Eigenvalue CSV when every row is Hermitian, coefficient CSV otherwise.
pub fn spectrum(rows: &[SpectrumRow], volume: usize, format: Format) -> Result<String, Failure> {
    let hermitian = rows.iter().all(|r| r.eigenvalues.is_some());
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                k: &'a [f64],
                #[serde(skip_serializing_if = "Option::is_none")]
                eigenvalues: Option<&'a [f64]>,
                #[serde(skip_serializing_if = "Option::is_none")]
                coefficients: Option<Vec<[f64; 2]>>,
            }
            let doc: Vec<Row> = rows
                .iter()
                .map(|r| Row {
                    k: &r.k,
                    eigenvalues: if hermitian { r.eigenvalues.as_deref() } else { None },
                    coefficients: (!hermitian).then(|| r.coefficients.iter().map(|c| [c.re, c.im]).collect()),
                })
                .collect();
            json(&doc)
        }
        Format::Csv | Format::Text => {
            let dim = rows.first().map_or(0, |r| r.k.len());
            let mut head: Vec<String> = (1..=dim).map(|j| format!("k{j}")).collect();
            if hermitian {
                head.extend((1..=volume).map(|i| format!("lambda_{i}")));
            } else {
                for i in 0..=volume {
                    head.push(format!("c{i}_re"));
                    head.push(format!("c{i}_im"));
                }
            }
            let mut out = head.join(",") + "\n";
            for r in rows {
                let mut cells: Vec<String> = r.k.iter().map(|&x| fmt_float(x)).collect();
                match (&r.eigenvalues, hermitian) {
                    (Some(e), true) => cells.extend(e.iter().map(|&x| fmt_float(x))),
                    _ => {
                        for c in &r.coefficients {
                            cells.push(fmt_float(c.re));
                            cells.push(fmt_float(c.im));
                        }
                    }
                }
                let _ = writeln!(out, "{}", cells.join(","));
            }
            Ok(out)
        }
    }
}

pub fn poly(p: &LaurentPoly, format: Format) -> Result<String, Failure> {
    match format {
        Format::Text => Ok(p.to_dump()),
        Format::Json => {
            #[derive(Serialize)]
            struct Term<'a> {
                z: &'a [i32],
                b: u32,
                value: [f64; 2],
            }
            #[derive(Serialize)]
            struct Doc<'a> {
                scalar: String,
                window: &'a [i32],
                b_max: u32,
                terms: Vec<Term<'a>>,
            }
            let terms = p.terms().map(|(m, c)| Term { z: &m.z, b: m.b, value: [c.re, c.im] }).collect();
            json(&Doc { scalar: p.scalar().to_string(), window: p.window(), b_max: p.b_max(), terms })
        }
        Format::Csv => Err(Failure::usage("csv output is not available for polynomials")),
    }
}

#[derive(Serialize)]
pub struct Invariants {
    pub mean: Complex64,
    pub power: PowerSums,
}

impl Invariants {
    pub fn text(&self) -> String {
        let mut out = format!("mean {} {}\npower {}\n", fmt_float(self.mean.re), fmt_float(self.mean.im), fmt_float(self.power.total));
        for (j, s) in self.power.blocks.iter().enumerate() {
            let _ = writeln!(out, "block {} {}", j + 1, fmt_float(*s));
        }
        out
    }
}
