use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;

use super::lines::projective_distance;
use super::solve::solve_bivariate;
use super::TernaryError;
use crate::multipoly::{hessian3, LinearChange, MultiPoly};
use crate::numerics::{BigComplex, Matrix, TolerancePolicy};

const FLEX_ATTEMPTS: usize = 6;

/// A flex with the data used to rank it.
#[derive(Clone, Debug)]
pub struct FlexPoint {
    /// Projective coordinates `(x, z, t)`, largest coordinate equal to 1.
    pub point: [BigComplex; 3],
    pub gradient_norm: Float,
}

fn normalize(v: [BigComplex; 3]) -> Option<[BigComplex; 3]> {
    let k = (0..3).max_by(|&a, &b| v[a].abs().partial_cmp(&v[b].abs()).unwrap())?;
    let inv = v[k].recip().ok()?;
    let mut out = v.map(|c| &c * &inv);
    out[k] = BigComplex::one(inv.prec());
    Some(out)
}

fn gradient_norm(grad: &[MultiPoly], q: &[BigComplex; 3]) -> Float {
    let prec = q[0].prec();
    let mut s = Float::with_val(prec, 0);
    for g in grad {
        s += g.eval(q).expect("arity 3").norm_sqr();
    }
    s.sqrt()
}

/// Gaussian-integer entries: small real integer matrices keep too many
/// symmetric inputs (such as the Fermat cubic) on the chart's line at infinity.
fn random_change(rng: &mut ChaCha8Rng, tol: &TolerancePolicy) -> LinearChange {
    let prec = tol.prec();
    loop {
        let rows: Vec<Vec<BigComplex>> = (0..3)
            .map(|_| {
                (0..3)
                    .map(|_| BigComplex::from_parts_i64(prec, rng.random_range(-9i64..=9), rng.random_range(-9i64..=9)))
                    .collect()
            })
            .collect();
        if let Ok(c) = LinearChange::new(Matrix::from_rows(rows), tol) {
            return c;
        }
    }
}

fn rank(a: &FlexPoint, b: &FlexPoint, tie: &Float) -> Ordering {
    let diff = Float::with_val(tie.prec(), &a.gradient_norm - &b.gradient_norm);
    if diff.clone().abs() > *tie {
        return b.gradient_norm.partial_cmp(&a.gradient_norm).unwrap_or(Ordering::Equal);
    }
    for (x, y) in a.point.iter().zip(&b.point) {
        match x.magnitude_lex_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Nonsingular common points of `p` and its Hessian, best first: largest
/// gradient norm, then magnitude-lex order of the coordinates.
pub fn flex_candidates(p: &MultiPoly, tol: &TolerancePolicy, seed: u64) -> Result<Vec<FlexPoint>, TernaryError> {
    assert_eq!(p.arity(), 3);
    let prec = tol.prec();
    let hess = hessian3(p);
    if hess.is_zero() {
        return Err(TernaryError::NoFlexFound);
    }
    let grad = p.gradient();
    let p_bound = tol.cert_bound(&p.sum_abs_coeff());
    let h_bound = tol.cert_bound(&hess.sum_abs_coeff());
    let singular = tol.zero_bound(&p.sum_abs_coeff());
    let same = Float::with_val(prec, &tol.cert_eps * 10u32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut notes = Vec::new();
    for _ in 0..FLEX_ATTEMPTS {
        let g = random_change(&mut rng, tol);
        let pg = p.substitute_linear(&g)?;
        let hg = hessian3(&pg);
        let chart = [
            MultiPoly::var(2, 0, prec),
            MultiPoly::var(2, 1, prec),
            MultiPoly::constant(2, BigComplex::one(prec)),
        ];
        let eqs = [pg.compose(&chart)?, hg.compose(&chart)?];
        let mut found: Vec<FlexPoint> = Vec::new();
        for [u, v] in solve_bivariate(&eqs, tol, &mut rng, &mut notes) {
            let w = Matrix::from_rows(vec![vec![u, v, BigComplex::one(prec)]]);
            let image = w.mul(g.matrix());
            let Some(q) = normalize([image.get(0, 0).clone(), image.get(0, 1).clone(), image.get(0, 2).clone()])
            else {
                continue;
            };
            if p.eval(&q)?.abs() > p_bound || hess.eval(&q)?.abs() > h_bound {
                continue;
            }
            let gn = gradient_norm(&grad, &q);
            if gn <= singular {
                continue;
            }
            let dup = found.iter().any(|f| projective_distance(&f.point, &q) <= same);
            if !dup {
                found.push(FlexPoint { point: q, gradient_norm: gn });
            }
        }
        if !found.is_empty() {
            let top = found
                .iter()
                .map(|f| f.gradient_norm.clone())
                .fold(Float::with_val(prec, 0), |a, b| a.max(&b));
            let tie = Float::with_val(prec, &tol.cert_eps * &top);
            found.sort_by(|a, b| rank(a, b, &tie));
            return Ok(found);
        }
    }
    Err(TernaryError::NoFlexFound)
}

/// The preferred flex of an irreducible plane cubic.
pub fn find_flex(p: &MultiPoly, tol: &TolerancePolicy, seed: u64) -> Result<[BigComplex; 3], TernaryError> {
    Ok(flex_candidates(p, tol, seed)?.swap_remove(0).point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic_io::parse_expression;

    const P: u32 = 256;

    fn ternary(text: &str) -> MultiPoly {
        parse_expression(text, P).unwrap().project_vars(&[0, 2, 3]).unwrap()
    }

    fn check_flex(p: &MultiPoly, q: &[BigComplex; 3]) {
        assert!(p.eval(q).unwrap().abs_f64() < 1e-60);
        assert!(hessian3(p).eval(q).unwrap().abs_f64() < 1e-60);
        let g: f64 = p.gradient().iter().map(|d| d.eval(q).unwrap().abs_f64()).sum();
        assert!(g > 1e-3);
    }

    #[test]
    fn fermat_flexes() {
        let p = ternary("x^3+z^3+t^3");
        let all = flex_candidates(&p, &TolerancePolicy::default(), 0).unwrap();
        assert_eq!(all.len(), 9);
        for f in &all {
            check_flex(&p, &f.point);
            // Hessian 216 x z t: one coordinate vanishes
            assert!(f.point.iter().any(|c| c.abs_f64() < 1e-60));
        }
    }

    #[test]
    fn cusp_point_is_rejected() {
        let p = ternary("x^3-t^2*z");
        let q = find_flex(&p, &TolerancePolicy::default(), 0).unwrap();
        check_flex(&p, &q);
        // the only flex is (0, 0, 1); the cusp (0, 1, 0) is singular
        assert!(q[0].abs_f64() < 1e-60 && q[1].abs_f64() < 1e-60);
    }

    #[test]
    fn generic_member() {
        let p = ternary("x^3+x*z^2-t^2*z");
        let q = find_flex(&p, &TolerancePolicy::default(), 3).unwrap();
        check_flex(&p, &q);
    }
}
