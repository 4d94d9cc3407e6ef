//! Serializable reports. Field order is fixed and no timing data is included
//! unless asked for, so equal runs produce byte-identical JSON.

use std::fmt::Write as _;

use serde::Serialize;

use super::PipelineResult;
use crate::cubic_io::json::{complex_to_json, matrix_to_json, JsonComplexOut, JsonMatrixOut};
use crate::multipoly::MultiPoly;
use crate::numerics::float_to_decimal;
use crate::ternary_canon::{CanonLabel, CanonicalTernary, ProjectiveLine};
use crate::verifier::Certificate;

#[derive(Clone, Debug, Serialize)]
pub struct D11Json {
    pub value: JsonComplexOut,
    pub branch: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransformsJson {
    pub ternary: Option<JsonMatrixOut>,
    pub quaternary: Option<JsonMatrixOut>,
    pub rotation: Option<JsonMatrixOut>,
    pub shear_beta: Option<JsonComplexOut>,
    pub d11: Option<D11Json>,
    pub plane: Option<Vec<JsonComplexOut>>,
    pub sign_swap: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateJson {
    pub pass: bool,
    pub max_coeff_residual: f64,
    pub pf_residual: f64,
    pub det_residual: f64,
    pub consistency_residual: f64,
    pub sample_residual: f64,
    pub cert_eps: f64,
    pub precision_bits: u32,
    /// The sign of `Pf(M) / f`; always `+1` for a passing certificate.
    pub pf_sign: i8,
}

impl CertificateJson {
    pub fn new(c: &Certificate) -> Self {
        let pf = c.pf_residual.to_f64();
        let det = c.det_residual.to_f64();
        CertificateJson {
            pass: c.pass,
            max_coeff_residual: pf.max(det),
            pf_residual: pf,
            det_residual: det,
            consistency_residual: c.consistency_residual.to_f64(),
            sample_residual: c.sample_residual.to_f64(),
            cert_eps: c.cert_eps.to_f64(),
            precision_bits: c.precision_bits,
            pf_sign: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RepresentReport {
    pub cubic: String,
    pub matrices: Vec<JsonMatrixOut>,
    pub branch: &'static str,
    pub classification: String,
    pub transforms: TransformsJson,
    pub certificate: CertificateJson,
    pub precision_bits: u32,
    pub escalated: bool,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Vec<(String, f64)>>,
}

impl RepresentReport {
    pub fn new(r: &PipelineResult, timings: bool) -> Self {
        let t = &r.transforms;
        RepresentReport {
            cubic: r.surface.render(),
            matrices: r.rep.matrices.matrices().iter().map(matrix_to_json).collect(),
            branch: r.rep.branch.as_str(),
            classification: r.classification.name(),
            transforms: TransformsJson {
                ternary: t.ternary.as_ref().map(matrix_to_json),
                quaternary: t.quaternary.as_ref().map(matrix_to_json),
                rotation: t.rotation.as_ref().map(matrix_to_json),
                shear_beta: t.shear_beta.as_ref().map(complex_to_json),
                d11: t.d11.as_ref().map(|d| D11Json {
                    value: complex_to_json(&d.value),
                    branch: d.branch.as_str(),
                }),
                plane: t.plane.as_ref().map(|p| p.iter().map(complex_to_json).collect()),
                sign_swap: r.rep.pf_sign == -1,
            },
            certificate: CertificateJson::new(&r.certificate),
            precision_bits: r.precision_bits,
            escalated: r.escalated,
            warnings: r.warnings.clone(),
            timings_ms: timings.then(|| {
                r.timings
                    .stages
                    .iter()
                    .map(|(s, d)| (s.to_string(), d.as_secs_f64() * 1000.0))
                    .collect()
            }),
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "cubic: {}", self.cubic);
        let _ = writeln!(out, "branch: {}", self.branch);
        let _ = writeln!(out, "classification: {}", self.classification);
        let c = &self.certificate;
        let _ = writeln!(
            out,
            "certificate: {} (pf {:e}, det {:e}, samples {:e}, cert_eps {:e}, {} bits)",
            if c.pass { "pass" } else { "FAIL" },
            c.pf_residual,
            c.det_residual,
            c.sample_residual,
            c.cert_eps,
            c.precision_bits
        );
        for (k, m) in self.matrices.iter().enumerate() {
            let _ = writeln!(out, "A{k} =");
            for row in m {
                let cells: Vec<String> = row.iter().map(|[re, im]| short_complex(re, im)).collect();
                let _ = writeln!(out, "  [{}]", cells.join(", "));
            }
        }
        for w in &self.warnings {
            let _ = writeln!(out, "note: {w}");
        }
        if let Some(t) = &self.timings_ms {
            for (stage, ms) in t {
                let _ = writeln!(out, "time {stage}: {ms:.3} ms");
            }
        }
        out
    }
}

fn short_complex(re: &str, im: &str) -> String {
    // noise far below the printed digits shows as zero
    let clip = |v: f64| if v.abs() < 5e-7 { 0.0 } else { v };
    let r = clip(re.parse().unwrap_or(f64::NAN));
    let i = clip(im.parse().unwrap_or(f64::NAN));
    match (r == 0.0, i == 0.0) {
        (_, true) => format!("{r:.6}"),
        (true, false) => format!("{i:.6}i"),
        _ => format!("{r:.6}{i:+.6}i"),
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CanonReport {
    pub slice: String,
    pub label: Option<String>,
    pub form: Option<&'static str>,
    pub alpha: Option<JsonComplexOut>,
    pub ambiguous: bool,
    pub lam3: Option<JsonComplexOut>,
    pub lam7: Option<JsonComplexOut>,
    pub lam8: Option<JsonComplexOut>,
    pub transform: Option<JsonMatrixOut>,
    pub residual: Option<String>,
    pub lines: Vec<String>,
    pub warnings: Vec<String>,
    pub note: Option<String>,
}

impl CanonReport {
    pub(super) fn new(slice: &MultiPoly) -> Self {
        CanonReport {
            slice: slice.render_with(&["x", "z", "t"]),
            ..Default::default()
        }
    }

    fn set_label(&mut self, l: &CanonLabel) {
        self.label = Some(l.name());
        self.form = Some(l.form());
        self.alpha = l.alpha.as_ref().map(complex_to_json);
        self.ambiguous = l.ambiguous;
    }

    pub(super) fn set_reducible(&mut self, l: CanonLabel, lines: &[ProjectiveLine]) {
        self.set_label(&l);
        self.lines = lines.iter().map(|l| l.form().render_with(&["x", "z", "t"])).collect();
    }

    pub(super) fn set_irreducible(&mut self, ct: &CanonicalTernary) {
        self.set_label(&ct.label);
        self.lam3 = Some(complex_to_json(&ct.lam3));
        self.lam7 = Some(complex_to_json(&ct.lam7));
        self.lam8 = Some(complex_to_json(&ct.lam8));
        self.transform = Some(matrix_to_json(ct.transform.matrix()));
        self.residual = Some(float_to_decimal(&ct.residual));
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "slice: {}", self.slice);
        if let Some(n) = &self.note {
            let _ = writeln!(out, "{n}");
        }
        if let (Some(l), Some(f)) = (&self.label, self.form) {
            let _ = writeln!(out, "label: {l} ({f}){}", if self.ambiguous { " [ambiguous]" } else { "" });
        }
        if let Some([re, im]) = &self.alpha {
            let _ = writeln!(out, "alpha: {}", short_complex(re, im));
        }
        for (name, v) in [("lam3", &self.lam3), ("lam7", &self.lam7), ("lam8", &self.lam8)] {
            if let Some([re, im]) = v {
                let _ = writeln!(out, "{name}: {}", short_complex(re, im));
            }
        }
        if let Some(t) = &self.transform {
            let _ = writeln!(out, "transform:");
            for row in t {
                let cells: Vec<String> = row.iter().map(|[re, im]| short_complex(re, im)).collect();
                let _ = writeln!(out, "  [{}]", cells.join(", "));
            }
        }
        for l in &self.lines {
            let _ = writeln!(out, "line: {l} = 0");
        }
        for w in &self.warnings {
            let _ = writeln!(out, "note: {w}");
        }
        out
    }
}
