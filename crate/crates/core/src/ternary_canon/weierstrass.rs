use rug::Float;

use super::flex::flex_candidates;
use super::label::{label_from_lambdas, CanonLabel};
use super::TernaryError;
use crate::multipoly::{LinearChange, MultiPoly};
use crate::numerics::{BigComplex, Matrix, TolerancePolicy};

/// Exponents `(x, z, t)` that may not occur in the canonical shape.
const FORBIDDEN: [[u8; 3]; 5] = [[0, 0, 3], [2, 0, 1], [1, 0, 2], [0, 2, 1], [1, 1, 1]];

/// A plane cubic brought to `x^3 + l8 x z^2 + l3 z^3 - t^2 z + l7 x^2 z`
/// by `transform` (so `slice ∘ transform` is that form).
#[derive(Clone, Debug)]
pub struct CanonicalTernary {
    pub lam3: BigComplex,
    pub lam7: BigComplex,
    pub lam8: BigComplex,
    pub transform: LinearChange,
    pub label: CanonLabel,
    /// Largest coefficient of `slice ∘ transform` minus the canonical form,
    /// relative to the form's largest coefficient.
    pub residual: Float,
    /// The flex moved to `(0, 0, 1)`; `None` when the input was already canonical.
    pub flex: Option<[BigComplex; 3]>,
}

/// `x^3 + l8 x z^2 + l3 z^3 - t^2 z + l7 x^2 z` in `(x, z, t)`.
pub fn canonical_form(lam3: &BigComplex, lam7: &BigComplex, lam8: &BigComplex) -> MultiPoly {
    let prec = lam3.prec().max(lam7.prec()).max(lam8.prec());
    let one = BigComplex::one(prec);
    MultiPoly::from_terms(
        3,
        prec,
        [
            ([3, 0, 0], one.clone()),
            ([1, 2, 0], lam8.clone()),
            ([0, 3, 0], lam3.clone()),
            ([0, 1, 2], -&one),
            ([2, 1, 0], lam7.clone()),
        ]
        .map(|(e, c)| (crate::multipoly::Monomial::new(&e), c)),
    )
}

fn is_canonical_shape(p: &MultiPoly, prec: u32) -> bool {
    p.coeff_of(&[3, 0, 0]) == BigComplex::one(prec)
        && p.coeff_of(&[0, 1, 2]) == BigComplex::from_i64(prec, -1)
        && FORBIDDEN.iter().all(|e| p.coeff_of(e).is_zero())
}

fn certify(
    p: &MultiPoly,
    transform: LinearChange,
    flex: Option<[BigComplex; 3]>,
    tol: &TolerancePolicy,
) -> Result<CanonicalTernary, TernaryError> {
    let image = p.substitute_linear(&transform)?;
    let lam3 = image.coeff_of(&[0, 3, 0]);
    let lam7 = image.coeff_of(&[2, 1, 0]);
    let lam8 = image.coeff_of(&[1, 2, 0]);
    let form = canonical_form(&lam3, &lam7, &lam8);
    let scale = form.max_abs_coeff();
    let residual = Float::with_val(tol.prec(), image.max_coeff_diff(&form) / &scale);
    if residual > tol.cert_eps {
        return Err(TernaryError::CertificationFailed {
            residual: residual.to_f64(),
        });
    }
    let label = label_from_lambdas(&lam3, &lam7, &lam8, tol);
    Ok(CanonicalTernary {
        lam3,
        lam7,
        lam8,
        transform,
        label,
        residual,
        flex,
    })
}

/// Rows `[n × e_k, e_j, q]`: the last row sends `(0, 0, 1)` to the flex, the
/// first two make the tangent line `n · w = 0` become `z = 0`.
fn flex_frame(q: &[BigComplex; 3], n: &[BigComplex; 3], tol: &TolerancePolicy) -> Option<LinearChange> {
    let prec = tol.prec();
    let cross = |k: usize| -> Vec<BigComplex> {
        let mut e = [BigComplex::zero(prec), BigComplex::zero(prec), BigComplex::zero(prec)];
        e[k] = BigComplex::one(prec);
        vec![
            &(&n[1] * &e[2]) - &(&n[2] * &e[1]),
            &(&n[2] * &e[0]) - &(&n[0] * &e[2]),
            &(&n[0] * &e[1]) - &(&n[1] * &e[0]),
        ]
    };
    let mut best: Option<(Float, Matrix)> = None;
    for k in 0..3 {
        for j in 0..3 {
            let mut ej = vec![BigComplex::zero(prec); 3];
            ej[j] = BigComplex::one(prec);
            let m = Matrix::from_rows(vec![cross(k), ej, q.to_vec()]);
            let d = m.det().abs();
            if best.as_ref().is_none_or(|(b, _)| d > *b) {
                best = Some((d, m));
            }
        }
    }
    LinearChange::new(best?.1, tol).ok()
}

fn reduce_at_flex(
    p: &MultiPoly,
    q: &[BigComplex; 3],
    tol: &TolerancePolicy,
) -> Result<CanonicalTernary, TernaryError> {
    let prec = tol.prec();
    let grad: Vec<BigComplex> = p.gradient().iter().map(|g| g.eval(q).expect("arity 3")).collect();
    let gmax = crate::numerics::max_abs(&grad);
    let ginv = BigComplex::from_floats(gmax.clone(), Float::with_val(prec, 0)).recip()?;
    let n = [&grad[0] * &ginv, &grad[1] * &ginv, &grad[2] * &ginv];
    let frame = flex_frame(q, &n, tol).ok_or(TernaryError::DegenerateTangent)?;
    let g = p.substitute_linear(&frame)?;
    let scale = g.max_abs_coeff();
    let a = g.coeff_of(&[3, 0, 0]);
    let b = g.coeff_of(&[0, 1, 2]);
    if b.abs() <= tol.cert_bound(&scale) || a.abs() <= tol.cert_bound(&scale) {
        return Err(TernaryError::DegenerateTangent);
    }
    let c1 = g.coeff_of(&[1, 1, 1]);
    let c2 = g.coeff_of(&[0, 2, 1]);
    let half_b_inv = b.scale_i64(2).recip()?;
    let mut square = Matrix::identity(3, prec);
    square.set(0, 2, -&(&c1 * &half_b_inv));
    square.set(1, 2, -&(&c2 * &half_b_inv));
    let mut diag = Matrix::identity(3, prec);
    diag.set(0, 0, a.cbrt().recip()?);
    diag.set(2, 2, (-&b.recip()?).sqrt());
    let square = LinearChange::new(square, tol)?;
    let diag = LinearChange::new(diag, tol)?;
    let composite = diag.product(&square.product(&frame));
    certify(p, composite, Some(q.clone()), tol)
}

/// Brings an irreducible plane cubic to the canonical shape through a flex.
/// Flex candidates are tried in rank order until one certifies.
pub fn weierstrass_reduce(p: &MultiPoly, tol: &TolerancePolicy, seed: u64) -> Result<CanonicalTernary, TernaryError> {
    assert_eq!(p.arity(), 3);
    let prec = tol.prec();
    if p.is_zero() {
        return Err(TernaryError::ZeroSlice);
    }
    if is_canonical_shape(p, prec) {
        return certify(p, LinearChange::identity(3, prec), None, tol);
    }
    let mut last = TernaryError::NoFlexFound;
    for flex in flex_candidates(p, tol, seed)? {
        match reduce_at_flex(p, &flex.point, tol) {
            Ok(c) => return Ok(c),
            Err(e) => last = e,
        }
    }
    Err(last)
}
