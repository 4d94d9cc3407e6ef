//! Finite solution sets of small bivariate systems: two generic linear
//! combinations of the equations are intersected through a resultant, each
//! root is back-substituted, and the pairs are polished by Newton's method.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rug::Float;

use crate::multipoly::{resultant_bivariate, Monomial, MultiPoly, PolyError};
use crate::numerics::{cluster_roots, roots_univariate, trim_leading, BigComplex, TolerancePolicy};

const COMBINATION_ATTEMPTS: usize = 4;
const NEWTON_STEPS: usize = 80;

fn random_unit(rng: &mut ChaCha8Rng, prec: u32) -> BigComplex {
    loop {
        let re = rng.random_range(-7i64..=7);
        let im = rng.random_range(-7i64..=7);
        if re != 0 || im != 0 {
            return BigComplex::from_parts_i64(prec, re, im);
        }
    }
}

fn combine(eqs: &[MultiPoly], rng: &mut ChaCha8Rng, prec: u32) -> MultiPoly {
    let mut out = MultiPoly::zero(2, prec);
    for e in eqs {
        out = &out + &e.scale(&random_unit(rng, prec));
    }
    out
}

/// Ascending coefficients in variable `var` after fixing the other one.
fn restrict(p: &MultiPoly, var: usize, other_value: &BigComplex) -> Vec<BigComplex> {
    let kept = 1 - var;
    p.coefficients_in(var)
        .iter()
        .map(|c| {
            let mut pt = [BigComplex::zero(p.prec()), BigComplex::zero(p.prec())];
            pt[kept] = other_value.clone();
            c.eval(&pt).expect("arity 2")
        })
        .collect()
}

fn univariate_roots(mut coeffs: Vec<BigComplex>, tol: &TolerancePolicy) -> Vec<BigComplex> {
    trim_leading(&mut coeffs, tol);
    if coeffs.len() < 2 {
        return Vec::new();
    }
    match roots_univariate(&coeffs, tol) {
        Ok(r) => cluster_roots(&coeffs, &r, tol).into_iter().map(|c| c.center).collect(),
        Err(_) => Vec::new(),
    }
}

fn residual(eqs: &[MultiPoly], pt: &[BigComplex; 2]) -> Float {
    let prec = pt[0].prec();
    let mut worst = Float::with_val(prec, 0);
    for e in eqs {
        let v = e.eval(pt).expect("arity 2").abs();
        if v > worst {
            worst = v;
        }
    }
    worst
}

/// Newton's method on the square system `(f1, f2)`. Steps are only kept
/// while the residual over `all` does not grow, so singular solutions are
/// left where the resultant put them.
pub(crate) fn newton2(
    f1: &MultiPoly,
    f2: &MultiPoly,
    all: &[MultiPoly],
    start: [BigComplex; 2],
    tol: &TolerancePolicy,
) -> [BigComplex; 2] {
    let prec = tol.prec();
    let grad1 = [f1.derivative(0), f1.derivative(1)];
    let grad2 = [f2.derivative(0), f2.derivative(1)];
    let mut pt = start;
    let mut best = residual(all, &pt);
    let floor = tol.hard_floor();
    for _ in 0..NEWTON_STEPS {
        if best.is_zero() {
            break;
        }
        let v1 = f1.eval(&pt).expect("arity 2");
        let v2 = f2.eval(&pt).expect("arity 2");
        let j = [
            [grad1[0].eval(&pt).unwrap(), grad1[1].eval(&pt).unwrap()],
            [grad2[0].eval(&pt).unwrap(), grad2[1].eval(&pt).unwrap()],
        ];
        let det = &(&j[0][0] * &j[1][1]) - &(&j[0][1] * &j[1][0]);
        let Ok(inv) = det.recip() else { break };
        let d0 = &(&(&j[1][1] * &v1) - &(&j[0][1] * &v2)) * &inv;
        let d1 = &(&(&j[0][0] * &v2) - &(&j[1][0] * &v1)) * &inv;
        let next = [&pt[0] - &d0, &pt[1] - &d1];
        let r = residual(all, &next);
        if r > best {
            break;
        }
        let step = Float::with_val(prec, d0.abs() + d1.abs());
        let size = Float::with_val(prec, pt[0].abs() + pt[1].abs() + 1u32);
        pt = next;
        best = r;
        if step <= Float::with_val(prec, &floor * &size) {
            break;
        }
    }
    pt
}

/// Candidate solutions of `eqs = 0` (arity-2 polynomials). Candidates are
/// not validated; a degenerate elimination yields an empty list and a note.
pub(crate) fn solve_bivariate(
    eqs: &[MultiPoly],
    tol: &TolerancePolicy,
    rng: &mut ChaCha8Rng,
    notes: &mut Vec<String>,
) -> Vec<[BigComplex; 2]> {
    let prec = tol.prec();
    let eqs: Vec<MultiPoly> = eqs.iter().filter(|e| !e.is_zero()).cloned().collect();
    if eqs.is_empty() {
        notes.push("every equation vanishes identically".into());
        return Vec::new();
    }
    if eqs.iter().any(|e| e.total_degree() == Some(0)) {
        return Vec::new();
    }
    for _ in 0..COMBINATION_ATTEMPTS {
        let e1 = combine(&eqs, rng, prec);
        let e2 = combine(&eqs, rng, prec);
        for elim in [0usize, 1] {
            let res = match resultant_bivariate(&e1, &e2, elim, tol) {
                Ok(r) => r,
                Err(PolyError::ConstantInEliminated) => continue,
                Err(_) => return Vec::new(),
            };
            let m = e1.degree_in(elim);
            let n = e2.degree_in(elim);
            let bound = Float::with_val(
                prec,
                rug::ops::Pow::pow(e1.sum_abs_coeff(), n) * rug::ops::Pow::pow(e2.sum_abs_coeff(), m),
            );
            if res.max_abs_coeff() <= tol.zero_bound(&bound) {
                notes.push("generic combinations share a factor; retrying".into());
                break;
            }
            let mut out = Vec::new();
            for v0 in univariate_roots(res.univariate_coeffs(), tol) {
                let mut us = Vec::new();
                for e in [&e1, &e2].into_iter().chain(eqs.iter()) {
                    let coeffs = restrict(e, elim, &v0);
                    let scale = e.sum_abs_coeff();
                    let big = coeffs.iter().any(|c| c.abs() > tol.zero_bound(&scale));
                    if big {
                        us = univariate_roots(coeffs, tol);
                        break;
                    }
                }
                for u0 in us {
                    let mut pt = [BigComplex::zero(prec), BigComplex::zero(prec)];
                    pt[elim] = u0;
                    pt[1 - elim] = v0.clone();
                    out.push(newton2(&e1, &e2, &eqs, pt, tol));
                }
            }
            return out;
        }
        if e1.total_degree() == Some(0) || e2.total_degree() == Some(0) {
            return Vec::new();
        }
    }
    notes.push("elimination stayed degenerate for every combination tried".into());
    Vec::new()
}

/// Polynomials `E_k(a, b)` whose common zeros describe the lines
/// `v_c + a v_i + b v_j = 0` dividing `p` (arity 3), where `c` is the chart
/// variable and `(i, j)` the other two in increasing order.
pub(crate) fn line_equations(p: &MultiPoly, chart: usize) -> Vec<MultiPoly> {
    let prec = p.prec();
    let others: Vec<usize> = (0..3).filter(|&v| v != chart).collect();
    let s0 = MultiPoly::var(4, 0, prec);
    let s1 = MultiPoly::var(4, 1, prec);
    let a = MultiPoly::var(4, 2, prec);
    let b = MultiPoly::var(4, 3, prec);
    let mut images = vec![MultiPoly::zero(4, prec); 3];
    images[others[0]] = s0.clone();
    images[others[1]] = s1.clone();
    images[chart] = -&(&(&a * &s0) + &(&b * &s1));
    let sub = p.compose(&images).expect("arity 3");
    let mut groups: std::collections::BTreeMap<(u8, u8), MultiPoly> = Default::default();
    for (m, c) in sub.terms() {
        groups
            .entry((m.exp(0), m.exp(1)))
            .or_insert_with(|| MultiPoly::zero(2, prec))
            .add_term(Monomial::new(&[m.exp(2), m.exp(3)]), c);
    }
    groups.into_values().collect()
}
