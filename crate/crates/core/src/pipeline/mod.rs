//! End-to-end construction: dispatch on the `y = 0` section, build, pull
//! back, certify, and retry once at doubled precision on failure.

mod report;

use std::time::{Duration, Instant};

use rug::Float;

pub use report::{CanonReport, CertificateJson, RepresentReport, TransformsJson};

use crate::cubic_io::json::parse_matrices;
use crate::cubic_io::{CubicIoError, CubicSurface};
use crate::multipoly::{LinearChange, MultiPoly};
use crate::numerics::{BigComplex, Matrix, NumericsError, TolerancePolicy, MAX_PRECISION_BITS};
use crate::quaternary_builder::{
    block_representation, build_m0, compute_d11, embed_and_shear, normalize_sign, pull_back,
    quadric_to_pfaffian_pair, rotate_until_irreducible, split_plane, Branch, BuildError, D11Branch, PfaffianRep,
    PlaneSplit, D11,
};
use crate::ternary_canon::{classify_reducible, find_lines, slice_y0, weierstrass_reduce, CanonLabel, TernaryError};
use crate::verifier::{certify, Certificate, LinearMatrix, VerifyError, DEFAULT_SAMPLES};

/// Rotations tried before probing for a plane component.
const PLANE_PROBE_AFTER: usize = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub precision_bits: u32,
    /// Overrides the default `2^(-P/2)`.
    pub cert_eps: Option<f64>,
    pub seed: u64,
    pub d11_branch: D11Branch,
    pub max_rotations: usize,
    pub samples: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            precision_bits: crate::numerics::DEFAULT_PRECISION_BITS,
            cert_eps: None,
            seed: 0,
            d11_branch: D11Branch::Plus,
            max_rotations: crate::quaternary_builder::reducible::DEFAULT_MAX_ROTATIONS,
            samples: DEFAULT_SAMPLES,
        }
    }
}

impl Options {
    pub fn tolerance(&self) -> Result<TolerancePolicy, NumericsError> {
        tolerance_at(self.precision_bits, self.cert_eps)
    }
}

fn tolerance_at(bits: u32, cert_eps: Option<f64>) -> Result<TolerancePolicy, NumericsError> {
    let tol = TolerancePolicy::new(bits)?;
    match cert_eps {
        Some(e) => tol.with_cert_eps(Float::with_val(bits, e)),
        None => Ok(tol),
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Input(#[from] CubicIoError),
    #[error(transparent)]
    Config(#[from] NumericsError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("representation failed at stage {stage}: {detail}")]
    RepresentationFailed {
        stage: String,
        detail: String,
        residual: Option<f64>,
    },
}

/// How the `y = 0` section, or the surface itself, was classified.
#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    Slice(CanonLabel),
    SurfaceReducible,
}

impl Classification {
    pub fn name(&self) -> String {
        match self {
            Classification::Slice(l) => l.name(),
            Classification::SurfaceReducible => "surface_reducible".into(),
        }
    }
}

/// Every change of coordinates used. When present, `quaternary` satisfies
/// `Pf(M0(w)) = f(w T)` for the matrix `M0` before pull-back.
#[derive(Clone, Debug, Default)]
pub struct Transforms {
    pub ternary: Option<Matrix>,
    pub quaternary: Option<Matrix>,
    pub rotation: Option<Matrix>,
    pub shear_beta: Option<BigComplex>,
    pub d11: Option<D11>,
    pub plane: Option<[BigComplex; 4]>,
    pub yt2_residual: Option<Float>,
}

#[derive(Clone, Debug, Default)]
pub struct Timings {
    pub stages: Vec<(&'static str, Duration)>,
}

impl Timings {
    fn time<T>(&mut self, stage: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.stages.push((stage, start.elapsed()));
        out
    }

    pub fn total(&self) -> Duration {
        self.stages.iter().map(|(_, d)| *d).sum()
    }
}

#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub surface: CubicSurface,
    pub rep: PfaffianRep,
    pub certificate: Certificate,
    pub classification: Classification,
    pub transforms: Transforms,
    pub timings: Timings,
    /// Precision of the successful run.
    pub precision_bits: u32,
    pub escalated: bool,
    pub warnings: Vec<String>,
}

struct Failure {
    stage: &'static str,
    detail: String,
    residual: Option<f64>,
}

impl From<(&'static str, BuildError)> for Failure {
    fn from((stage, e): (&'static str, BuildError)) -> Self {
        let residual = match &e {
            BuildError::CertificationFailed { residual, .. } => Some(*residual),
            BuildError::Ternary(TernaryError::CertificationFailed { residual }) => Some(*residual),
            _ => None,
        };
        Failure {
            stage,
            detail: e.to_string(),
            residual,
        }
    }
}

/// Builds and certifies a linear Pfaffian representation of `c`.
pub fn represent(c: &CubicSurface, opts: &Options) -> Result<PipelineResult, PipelineError> {
    let tol = opts.tolerance()?;
    let first = match attempt(c, &tol, opts) {
        Ok(r) => return Ok(r),
        Err(f) => f,
    };
    let bits = (opts.precision_bits * 2).min(MAX_PRECISION_BITS);
    if bits == opts.precision_bits {
        return Err(failed(first));
    }
    let tol = tolerance_at(bits, opts.cert_eps)?;
    match attempt(c, &tol, opts) {
        Ok(mut r) => {
            r.escalated = true;
            r.warnings.push(format!(
                "escalated to {bits} bits after {} failed: {}",
                first.stage, first.detail
            ));
            Ok(r)
        }
        Err(second) => Err(failed(second)),
    }
}

fn failed(f: Failure) -> PipelineError {
    PipelineError::RepresentationFailed {
        stage: f.stage.to_string(),
        detail: f.detail,
        residual: f.residual,
    }
}

struct Built {
    rep: PfaffianRep,
    classification: Classification,
    transforms: Transforms,
    warnings: Vec<String>,
}

fn attempt(c: &CubicSurface, tol: &TolerancePolicy, opts: &Options) -> Result<PipelineResult, Failure> {
    let prec = tol.prec();
    let surface = c.with_prec(prec);
    let mut timings = Timings::default();
    let built = dispatch(&surface, tol, opts, &mut timings)?;
    let certificate = timings.time("certify", || certify(&built.rep.matrices, &surface, tol, opts.samples, opts.seed));
    if !certificate.pass {
        return Err(Failure {
            stage: "certify",
            detail: format!(
                "{} branch residual {:e} exceeds cert_eps {:e}",
                built.rep.branch.as_str(),
                certificate.max_residual().to_f64(),
                certificate.cert_eps.to_f64()
            ),
            residual: Some(certificate.max_residual().to_f64()),
        });
    }
    Ok(PipelineResult {
        surface,
        rep: built.rep,
        certificate,
        classification: built.classification,
        transforms: built.transforms,
        timings,
        precision_bits: prec,
        escalated: false,
        warnings: built.warnings,
    })
}

fn dispatch(f: &CubicSurface, tol: &TolerancePolicy, opts: &Options, timings: &mut Timings) -> Result<Built, Failure> {
    let s = slice_y0(f);
    let mut warnings = Vec::new();
    if s.max_abs_coeff() <= tol.cert_bound(&f.max_abs()) {
        return plane_branch(f, tol, opts, timings, warnings);
    }
    let search = timings.time("find_lines", || find_lines(&s, tol));
    warnings.extend(search.warnings);
    if search.lines.is_empty() {
        match irreducible_branch(f, None, tol, opts, timings) {
            Ok(mut b) => {
                b.warnings.splice(0..0, warnings);
                return Ok(b);
            }
            Err(e) => warnings.push(format!("irreducible section failed at {}: {}", e.stage, e.detail)),
        }
    }
    let slice_label = (!search.lines.is_empty()).then(|| classify_reducible(&s, &search.lines, tol));
    // A surface containing a plane has no irreducible section, so after a
    // couple of failed rotations it is cheaper to look for the plane first.
    let probe = opts.max_rotations.min(PLANE_PROBE_AFTER);
    let mut rotation = timings.time("rotate", || rotate_until_irreducible(f, tol, opts.seed, probe));
    if let Err(BuildError::RotationExhausted { attempts }) = rotation {
        match timings.time("split_plane", || split_plane(f, tol, opts.seed)) {
            Ok(split) => {
                warnings.push(format!("no irreducible section after {attempts} rotations"));
                return block_branch(f, split, tol, timings, warnings);
            }
            Err(BuildError::NotSplit) if opts.max_rotations > probe => {
                let rest = opts.max_rotations - probe;
                rotation = timings.time("rotate", || {
                    rotate_until_irreducible(f, tol, opts.seed.wrapping_add(1), rest)
                        .map_err(|_| BuildError::RotationExhausted { attempts: opts.max_rotations })
                });
            }
            Err(e) => return Err(("split_plane", e).into()),
        }
    }
    match rotation {
        Ok(rot) => {
            let mut b = irreducible_branch(&rot.surface, Some(&rot.change), tol, opts, timings)?;
            b.rep.branch = Branch::Rotated;
            if let Some(l) = slice_label {
                b.classification = Classification::Slice(l);
            }
            warnings.push(format!(
                "reducible section: replaced by a random change of coordinates after {} attempt(s)",
                rot.attempts
            ));
            b.warnings.splice(0..0, warnings);
            Ok(b)
        }
        Err(BuildError::RotationExhausted { attempts }) => {
            warnings.push(format!("no irreducible section after {attempts} rotations"));
            plane_branch(f, tol, opts, timings, warnings)
        }
        Err(e) => Err(("rotate", e).into()),
    }
}

/// The construction for a surface whose `y = 0` section is irreducible;
/// with `rotation = Some(R)` the input is `g = f ∘ R` and the result is
/// pulled back to `f`.
fn irreducible_branch(
    g: &CubicSurface,
    rotation: Option<&LinearChange>,
    tol: &TolerancePolicy,
    opts: &Options,
    timings: &mut Timings,
) -> Result<Built, Failure> {
    let s = slice_y0(g);
    let ct = timings
        .time("weierstrass_reduce", || weierstrass_reduce(&s, tol, opts.seed))
        .map_err(|e| ("weierstrass_reduce", BuildError::from(e)))?;
    let gp = g.to_poly();
    let cq = timings
        .time("embed_and_shear", || embed_and_shear(&gp, &ct, tol))
        .map_err(|e| ("embed_and_shear", e))?;
    let d11 = compute_d11(&cq.lam.xyt, opts.d11_branch);
    let target = cq.lam.target();
    let (m0, sign) = timings
        .time("build", || normalize_sign(build_m0(&cq.lam, &d11.value), &target, tol))
        .map_err(|e| ("normalize_sign", e))?;
    let total = match rotation {
        // g ∘ T = f ∘ (T R)
        Some(r) => cq.transform.product(r),
        None => cq.transform.clone(),
    };
    let matrices = timings.time("pull_back", || pull_back(&m0, &total));
    let yt2 = gp.substitute_linear(&cq.transform).map_err(|e| ("embed_and_shear", BuildError::from(e)))?;
    let yt2_residual = Float::with_val(tol.prec(), yt2.coeff_of(&[0, 1, 0, 2]).abs() / target.max_abs_coeff());
    Ok(Built {
        rep: PfaffianRep {
            matrices,
            branch: Branch::Irreducible,
            pf_sign: sign,
        },
        classification: Classification::Slice(ct.label.clone()),
        transforms: Transforms {
            ternary: Some(ct.transform.matrix().clone()),
            quaternary: Some(total.matrix().clone()),
            rotation: rotation.map(|r| r.matrix().clone()),
            shear_beta: Some(cq.shear_beta),
            d11: Some(d11),
            plane: None,
            yt2_residual: Some(yt2_residual),
        },
        warnings: Vec::new(),
    })
}

fn plane_branch(
    f: &CubicSurface,
    tol: &TolerancePolicy,
    opts: &Options,
    timings: &mut Timings,
    warnings: Vec<String>,
) -> Result<Built, Failure> {
    let split = timings
        .time("split_plane", || split_plane(f, tol, opts.seed))
        .map_err(|e| ("split_plane", e))?;
    block_branch(f, split, tol, timings, warnings)
}

fn block_branch(
    f: &CubicSurface,
    split: PlaneSplit,
    tol: &TolerancePolicy,
    timings: &mut Timings,
    mut warnings: Vec<String>,
) -> Result<Built, Failure> {
    let pair = timings
        .time("quadric_pair", || quadric_to_pfaffian_pair(&split.quotient, tol))
        .map_err(|e| ("quadric_to_pfaffian_pair", e))?;
    let rep = block_representation(&MultiPoly::linear(&split.plane), &pair);
    let (matrices, sign) = normalize_sign(rep.matrices, &f.to_poly(), tol).map_err(|e| ("normalize_sign", e))?;
    warnings.push("surface contains a plane: block construction used".into());
    Ok(Built {
        rep: PfaffianRep {
            matrices,
            branch: Branch::PlaneSplit,
            pf_sign: sign,
        },
        classification: Classification::SurfaceReducible,
        transforms: Transforms {
            plane: Some(split.plane),
            ..Transforms::default()
        },
        warnings,
    })
}

/// Certifies matrices read from JSON (as written by `represent`, or a bare
/// list of four matrices) against `c`.
pub fn verify_file(
    matrices_json: &str,
    c: &CubicSurface,
    tol: &TolerancePolicy,
    samples: usize,
    seed: u64,
) -> Result<Certificate, PipelineError> {
    let mats = parse_matrices(matrices_json, tol.prec())?;
    let m = LinearMatrix::from_vec(mats)?;
    Ok(certify(&m, &c.with_prec(tol.prec()), tol, samples, seed))
}

/// Analysis of the `y = 0` section alone.
pub fn canon(c: &CubicSurface, tol: &TolerancePolicy, seed: u64) -> Result<CanonReport, PipelineError> {
    let s = slice_y0(&c.with_prec(tol.prec()));
    let mut report = CanonReport::new(&s);
    if s.max_abs_coeff() <= tol.cert_bound(&c.max_abs()) {
        report.note = Some("the section is identically zero: y divides f".into());
        return Ok(report);
    }
    let search = find_lines(&s, tol);
    report.warnings = search.warnings.clone();
    if !search.lines.is_empty() {
        report.set_reducible(classify_reducible(&s, &search.lines, tol), &search.lines);
        return Ok(report);
    }
    let ct = weierstrass_reduce(&s, tol, seed).map_err(|e| PipelineError::RepresentationFailed {
        stage: "weierstrass_reduce".into(),
        detail: e.to_string(),
        residual: None,
    })?;
    report.set_irreducible(&ct);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn run(text: &str) -> PipelineResult {
        represent(&CubicSurface::parse(text, P).unwrap(), &Options::default()).unwrap()
    }

    #[test]
    fn fermat_takes_the_irreducible_branch() {
        let r = run("x^3 + y^3 + z^3 + t^3");
        assert_eq!(r.rep.branch, Branch::Irreducible);
        assert!(r.certificate.pass);
        assert!(!r.escalated);
    }

    #[test]
    fn triangle_section_is_rotated() {
        let r = run("x*t*z + y^3");
        assert_eq!(r.rep.branch, Branch::Rotated);
        assert_eq!(r.classification.name(), "II3");
        assert!(r.certificate.pass);
    }

    #[test]
    fn plane_component_is_split() {
        let r = run("z*(x^2 + t^2 + z^2)");
        assert_eq!(r.rep.branch, Branch::PlaneSplit);
        assert_eq!(r.classification, Classification::SurfaceReducible);
        assert!(r.certificate.pass);
        let r = run("y*(x^2 + t*z)");
        assert_eq!(r.rep.branch, Branch::PlaneSplit);
    }

    #[test]
    fn shear_leaves_no_y_t2() {
        let r = run("x^3 - t^2*z + y*t^2");
        assert!(r.transforms.yt2_residual.unwrap() <= r.certificate.cert_eps);
        assert!(r.certificate.pass);
    }

    #[test]
    fn minus_branch_also_certifies() {
        let opts = Options {
            d11_branch: D11Branch::Minus,
            ..Options::default()
        };
        let r = represent(&CubicSurface::parse("x^3 + 2*x*y*t - t^2*z + y^3", P).unwrap(), &opts).unwrap();
        assert!(r.certificate.pass);
        assert_eq!(r.transforms.d11.unwrap().branch, D11Branch::Minus);
    }

    #[test]
    fn verify_round_trip_and_perturbation() {
        let r = run("x^3 + y^3 + z^3 + t^3");
        let json = serde_json::to_string(&RepresentReport::new(&r, false)).unwrap();
        let tol = TolerancePolicy::default();
        assert!(verify_file(&json, &r.surface, &tol, 4, 0).unwrap().pass);
        let mut mats = r.rep.matrices.clone().into_matrices();
        let v = mats[1].get(0, 2) + &BigComplex::from_f64(P, 1e-3, 0.0);
        mats[1].set(0, 2, v.clone());
        mats[1].set(2, 0, -&v);
        let bad: Vec<_> = mats.iter().map(crate::cubic_io::json::matrix_to_json).collect();
        let cert = verify_file(&serde_json::to_string(&bad).unwrap(), &r.surface, &tol, 4, 0).unwrap();
        assert!(!cert.pass);
        assert!(cert.pf_residual.to_f64() > 1e-5);
    }

    #[test]
    fn canon_reports() {
        let tol = TolerancePolicy::default();
        let r = canon(&CubicSurface::parse("x^3 + z^3 - t^2*z", P).unwrap(), &tol, 0).unwrap();
        assert_eq!(r.label.as_deref(), Some("I3"));
        let r = canon(&CubicSurface::parse("x*t*z", P).unwrap(), &tol, 0).unwrap();
        assert_eq!(r.lines.len(), 3);
    }
}
