//! Sylvester resultants of bivariate polynomials.
//!
//! The Sylvester determinant is a polynomial in the kept variable of known
//! degree bound `D`; it is sampled at `N >= D + 1` roots of unity (each
//! sample a numeric determinant) and recovered by an inverse DFT.

use super::{Monomial, MultiPoly, PolyError};
use crate::numerics::{eval_univariate, BigComplex, Matrix, TolerancePolicy};

fn dense_in_kept(p: &MultiPoly, kept: usize) -> Vec<BigComplex> {
    let deg = p.degree_in(kept) as usize;
    let mut out = vec![BigComplex::zero(p.prec()); deg + 1];
    for (m, c) in p.terms() {
        out[m.exp(kept) as usize] += c;
    }
    out
}

/// Numeric Sylvester matrix for `a(w) = sum a[i] w^i`, `b(w) = sum b[j] w^j`
/// with formal degrees `a.len()-1`, `b.len()-1`.
pub fn sylvester_matrix(a: &[BigComplex], b: &[BigComplex], prec: u32) -> Matrix {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut s = Matrix::zeros(size, size, prec);
    for r in 0..n {
        for (k, coef) in a.iter().rev().enumerate() {
            s.set(r, r + k, coef.clone());
        }
    }
    for r in 0..m {
        for (k, coef) in b.iter().rev().enumerate() {
            s.set(n + r, r + k, coef.clone());
        }
    }
    s
}

/// Resultant of `p` and `q` (arity 2) with respect to variable `eliminate`;
/// the result is an arity-1 polynomial in the remaining variable.
///
/// Uses the standard Sylvester determinant, so
/// `res(p, q) = (-1)^(deg p * deg q) res(q, p)`.
pub fn resultant_bivariate(
    p: &MultiPoly,
    q: &MultiPoly,
    eliminate: usize,
    tol: &TolerancePolicy,
) -> Result<MultiPoly, PolyError> {
    for f in [p, q] {
        if f.arity() != 2 {
            return Err(PolyError::ArityMismatch {
                expected: 2,
                found: f.arity(),
            });
        }
    }
    assert!(eliminate < 2);
    let kept = 1 - eliminate;
    let prec = tol.prec();
    let pc: Vec<Vec<BigComplex>> = p
        .coefficients_in(eliminate)
        .iter()
        .map(|c| dense_in_kept(c, kept))
        .collect();
    let qc: Vec<Vec<BigComplex>> = q
        .coefficients_in(eliminate)
        .iter()
        .map(|c| dense_in_kept(c, kept))
        .collect();
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    if m == 0 && n == 0 {
        return Err(PolyError::ConstantInEliminated);
    }
    let dv_p = p.degree_in(kept) as usize;
    let dv_q = q.degree_in(kept) as usize;
    let bound = n * dv_p + m * dv_q;
    let samples = (bound + 1).next_power_of_two();

    let mut values = Vec::with_capacity(samples);
    let nodes: Vec<BigComplex> = (0..samples)
        .map(|k| BigComplex::root_of_unity(prec, k as i64, samples as i64))
        .collect();
    for w in &nodes {
        let a: Vec<BigComplex> = pc.iter().map(|c| eval_univariate(c, w)).collect();
        let b: Vec<BigComplex> = qc.iter().map(|c| eval_univariate(c, w)).collect();
        values.push(sylvester_matrix(&a, &b, prec).det());
    }

    let inv_n = BigComplex::from_ratio(prec, 1, samples as i64);
    let mut coeffs = Vec::with_capacity(bound + 1);
    for j in 0..=bound {
        let mut acc = BigComplex::zero(prec);
        for (k, v) in values.iter().enumerate() {
            // conj(w_k)^j = w_{-jk mod N}
            let idx = (samples - (j * k) % samples) % samples;
            acc += &(v * &nodes[idx]);
        }
        coeffs.push(&acc * &inv_n);
    }
    let out = MultiPoly::from_terms(
        1,
        prec,
        coeffs
            .into_iter()
            .enumerate()
            .map(|(k, c)| (Monomial::new(&[k as u8]), c)),
    );
    Ok(out.cleanup(&tol.zero_eps))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn poly2(terms: &[([u8; 2], i64)]) -> MultiPoly {
        MultiPoly::from_terms(
            2,
            P,
            terms.iter().map(|(e, c)| (Monomial::new(e), BigComplex::from_i64(P, *c))),
        )
    }

    fn assert_univariate(r: &MultiPoly, expected: &[i64]) {
        let cs = r.univariate_coeffs();
        let mut want: Vec<BigComplex> = expected.iter().map(|&v| BigComplex::from_i64(P, v)).collect();
        want.resize(cs.len().max(want.len()), BigComplex::zero(P));
        for (k, w) in want.iter().enumerate() {
            let got = cs.get(k).cloned().unwrap_or_else(|| BigComplex::zero(P));
            assert!((&got - w).abs_f64() < 1e-70, "coefficient {k}: {got} vs {w}");
        }
    }

    #[test]
    fn linear_pair() {
        // p = u - v, q = u + v: standard Sylvester det [[1, -v], [1, v]] = 2v
        let p = poly2(&[([1, 0], 1), ([0, 1], -1)]);
        let q = poly2(&[([1, 0], 1), ([0, 1], 1)]);
        assert_univariate(&resultant_bivariate(&p, &q, 0, &tol()).unwrap(), &[0, 2]);
    }

    #[test]
    fn quadratic_against_linear() {
        // p = u^2 - v, q = u - 1 -> 1 - v
        let p = poly2(&[([2, 0], 1), ([0, 1], -1)]);
        let q = poly2(&[([1, 0], 1), ([0, 0], -1)]);
        assert_univariate(&resultant_bivariate(&p, &q, 0, &tol()).unwrap(), &[1, -1]);
    }

    #[test]
    fn both_constant_in_eliminated_variable() {
        let p = poly2(&[([0, 1], 1)]);
        let q = poly2(&[([0, 2], 1)]);
        assert!(matches!(
            resultant_bivariate(&p, &q, 0, &tol()),
            Err(PolyError::ConstantInEliminated)
        ));
    }

    #[test]
    fn one_side_constant_gives_power() {
        // p = v (degree 0 in u), q = u^2 + 1 -> v^2
        let p = poly2(&[([0, 1], 1)]);
        let q = poly2(&[([2, 0], 1), ([0, 0], 1)]);
        assert_univariate(&resultant_bivariate(&p, &q, 0, &tol()).unwrap(), &[0, 0, 1]);
    }
}
