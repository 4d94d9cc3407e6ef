//! Certification of Pfaffian representations: symbolic Pfaffian and
//! determinant of a matrix of linear forms, coefficientwise comparison with
//! `f` and `f^2`, and a numeric cross-check at random points.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;

use crate::cubic_io::CubicSurface;
use crate::multipoly::{Monomial, MultiPoly};
use crate::numerics::{BigComplex, Matrix, TolerancePolicy};

pub const DEFAULT_SAMPLES: usize = 16;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("matrix {index} is not skew-symmetric")]
    NotSkew { index: usize },
    #[error("matrices must be four square matrices of one even size")]
    BadShape,
}

/// `M(x, y, z, t) = x A0 + y A1 + z A2 + t A3` with every `Ai` skew.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMatrix {
    mats: [Matrix; 4],
}

impl LinearMatrix {
    pub fn new(mats: [Matrix; 4]) -> Result<Self, VerifyError> {
        let n = mats[0].rows();
        if n == 0 || n % 2 == 1 || mats.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(VerifyError::BadShape);
        }
        if let Some(index) = mats.iter().position(|m| !m.is_exactly_skew()) {
            return Err(VerifyError::NotSkew { index });
        }
        Ok(LinearMatrix { mats })
    }

    pub fn from_vec(mats: Vec<Matrix>) -> Result<Self, VerifyError> {
        let arr: [Matrix; 4] = mats.try_into().map_err(|_| VerifyError::BadShape)?;
        Self::new(arr)
    }

    pub fn matrices(&self) -> &[Matrix; 4] {
        &self.mats
    }

    pub fn into_matrices(self) -> [Matrix; 4] {
        self.mats
    }

    pub fn size(&self) -> usize {
        self.mats[0].rows()
    }

    pub fn prec(&self) -> u32 {
        self.mats.iter().map(Matrix::prec).max().unwrap_or(64)
    }

    /// Entry `(i, j)` as a linear form in `(x, y, z, t)`.
    pub fn entry(&self, i: usize, j: usize) -> MultiPoly {
        let coeffs: Vec<BigComplex> = self.mats.iter().map(|m| m.get(i, j).clone()).collect();
        MultiPoly::linear(&coeffs)
    }

    fn entries(&self) -> Vec<Vec<MultiPoly>> {
        let n = self.size();
        (0..n).map(|i| (0..n).map(|j| self.entry(i, j)).collect()).collect()
    }

    /// The constant matrix `M(v)`.
    pub fn eval(&self, v: &[BigComplex; 4]) -> Matrix {
        let mut out = self.mats[0].scale(&v[0]);
        for k in 1..4 {
            out = out.add(&self.mats[k].scale(&v[k]));
        }
        out
    }

    /// Congruence `P M P^T` applied to each coefficient matrix.
    pub fn congruent(&self, p: &Matrix) -> LinearMatrix {
        let pt = p.transpose();
        let mats = self.mats.clone().map(|a| skew_part(&p.mul(&a).mul(&pt)));
        LinearMatrix { mats }
    }

    pub fn negated(&self) -> LinearMatrix {
        let minus = BigComplex::from_i64(self.prec(), -1);
        LinearMatrix {
            mats: self.mats.clone().map(|a| a.scale(&minus)),
        }
    }
}

/// Keeps the strict upper triangle and mirrors it with a sign change, so
/// the result is skew entrywise even after rounding.
pub fn skew_part(a: &Matrix) -> Matrix {
    let n = a.rows();
    let mut out = Matrix::zeros(n, n, a.prec());
    for i in 0..n {
        for j in i + 1..n {
            out.set(i, j, a.get(i, j).clone());
            out.set(j, i, -a.get(i, j));
        }
    }
    out
}

fn pf_rec(m: &[Vec<MultiPoly>], idx: &[usize], arity: usize, prec: u32) -> MultiPoly {
    if idx.is_empty() {
        return MultiPoly::constant(arity, BigComplex::one(prec));
    }
    let first = idx[0];
    let mut acc = MultiPoly::zero(arity, prec);
    for k in 1..idx.len() {
        let e = &m[first][idx[k]];
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&v| v != idx[k]).collect();
        let sub = pf_rec(m, &rest, arity, prec);
        if sub.is_zero() {
            continue;
        }
        let term = e * &sub;
        acc = if k % 2 == 1 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Pfaffian by recursive expansion along the first row.
pub fn pfaffian_symbolic(m: &LinearMatrix) -> MultiPoly {
    let idx: Vec<usize> = (0..m.size()).collect();
    pf_rec(&m.entries(), &idx, 4, m.prec())
}

/// Determinant by Laplace expansion along rows, memoized on the set of
/// columns still available.
pub fn det_symbolic(m: &LinearMatrix) -> MultiPoly {
    let n = m.size();
    let prec = m.prec();
    let e = m.entries();
    let mut memo: HashMap<u32, MultiPoly> = HashMap::new();
    fn rec(
        row: usize,
        cols: u32,
        n: usize,
        e: &[Vec<MultiPoly>],
        memo: &mut HashMap<u32, MultiPoly>,
        prec: u32,
    ) -> MultiPoly {
        if row == n {
            return MultiPoly::constant(4, BigComplex::one(prec));
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = MultiPoly::zero(4, prec);
        let mut position = 0;
        for c in 0..n {
            if cols & (1 << c) == 0 {
                continue;
            }
            let entry = &e[row][c];
            if !entry.is_zero() {
                let minor = rec(row + 1, cols & !(1 << c), n, e, memo, prec);
                if !minor.is_zero() {
                    let term = entry * &minor;
                    acc = if position % 2 == 0 { &acc + &term } else { &acc - &term };
                }
            }
            position += 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    rec(0, (1u32 << n) - 1, n, &e, &mut memo, prec)
}

/// Residual bundle for a claimed representation of `f`. Residuals are
/// relative: Pfaffian against `max |theta|`, determinants against its
/// square, samples against `(sum |theta|)^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub pf_residual: Float,
    pub det_residual: Float,
    pub consistency_residual: Float,
    pub sample_residual: Float,
    pub cert_eps: Float,
    pub precision_bits: u32,
    pub pass: bool,
}

impl Certificate {
    pub fn max_residual(&self) -> Float {
        self.pf_residual
            .clone()
            .max(&self.det_residual)
            .max(&self.consistency_residual)
            .max(&self.sample_residual)
    }
}

fn random_point(rng: &mut ChaCha8Rng, prec: u32) -> [BigComplex; 4] {
    // |re|, |im| <= 0.7 keeps every coordinate inside the unit disc
    std::array::from_fn(|_| {
        BigComplex::from_f64(prec, rng.random_range(-0.7..=0.7), rng.random_range(-0.7..=0.7))
    })
}

/// Certifies `Pf(M) = f` and `det(M) = f^2`.
pub fn certify(
    m: &LinearMatrix,
    f: &CubicSurface,
    tol: &TolerancePolicy,
    n_samples: usize,
    seed: u64,
) -> Certificate {
    let prec = tol.prec();
    let fp = f.to_poly().with_prec(prec);
    let scale = f.max_abs();
    let scale2 = Float::with_val(prec, &scale * &scale);
    let pf = pfaffian_symbolic(m);
    let det = det_symbolic(m);
    let f2 = &fp * &fp;
    let pf_residual = Float::with_val(prec, pf.max_coeff_diff(&fp) / &scale);
    let det_residual = Float::with_val(prec, det.max_coeff_diff(&f2) / &scale2);
    let consistency_residual = Float::with_val(prec, det.max_coeff_diff(&(&pf * &pf)) / &scale2);

    let sum = f.sum_abs();
    let sample_scale = Float::with_val(prec, &sum * &sum);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample_residual = Float::with_val(prec, 0);
    for _ in 0..n_samples {
        let v = random_point(&mut rng, prec);
        let fv = fp.eval(&v).expect("arity 4");
        let d = m.eval(&v).det();
        let r = Float::with_val(prec, (&d - &(&fv * &fv)).abs() / &sample_scale);
        if r > sample_residual {
            sample_residual = r;
        }
    }
    let cert_eps = tol.cert_eps.clone();
    let pass = [&pf_residual, &det_residual, &consistency_residual, &sample_residual]
        .iter()
        .all(|r| r.is_finite() && **r <= cert_eps);
    Certificate {
        pf_residual,
        det_residual,
        consistency_residual,
        sample_residual,
        cert_eps,
        precision_bits: prec,
        pass,
    }
}

/// Decomposes a matrix of linear forms (arity 4, degree at most 1) into
/// the four coefficient matrices.
pub fn from_linear_entries(entries: &[Vec<MultiPoly>], prec: u32) -> [Matrix; 4] {
    let n = entries.len();
    std::array::from_fn(|k| {
        let mut a = Matrix::zeros(n, n, prec);
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, entries[i][j].coeff(&Monomial::var(k)));
            }
        }
        a
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn block(pairs: &[(usize, usize, usize)]) -> LinearMatrix {
        // (i, j, var): m_ij = var, m_ji = -var
        let mats = std::array::from_fn(|k| {
            let mut a = Matrix::zeros(6, 6, P);
            for &(i, j, v) in pairs {
                if v == k {
                    a.set(i, j, BigComplex::one(P));
                    a.set(j, i, BigComplex::from_i64(P, -1));
                }
            }
            a
        });
        LinearMatrix::new(mats).unwrap()
    }

    #[test]
    fn block_diagonal_pfaffian() {
        let m = block(&[(0, 1, 0), (2, 3, 2), (4, 5, 3)]);
        let pf = pfaffian_symbolic(&m);
        assert_eq!(pf.render(), "x*z*t");
        let det = det_symbolic(&m);
        assert_eq!(det, &pf * &pf);
    }

    #[test]
    fn no_perfect_matching() {
        let m = block(&[(0, 2, 0), (2, 3, 2), (4, 5, 3)]);
        assert!(pfaffian_symbolic(&m).is_zero());
    }

    #[test]
    fn zero_row_gives_zero_determinant() {
        let m = block(&[(1, 2, 0), (3, 4, 1)]);
        assert!(det_symbolic(&m).is_zero());
    }

    #[test]
    fn non_skew_rejected() {
        let mut a = Matrix::zeros(6, 6, P);
        a.set(0, 1, BigComplex::one(P));
        let z = Matrix::zeros(6, 6, P);
        let err = LinearMatrix::new([a, z.clone(), z.clone(), z]).unwrap_err();
        assert_eq!(err, VerifyError::NotSkew { index: 0 });
    }

    #[test]
    fn certificate_detects_wrong_target() {
        let m = block(&[(0, 1, 0), (2, 3, 2), (4, 5, 3)]);
        let tol = TolerancePolicy::default();
        let good = certify(&m, &CubicSurface::parse("x*z*t", P).unwrap(), &tol, 4, 0);
        assert!(good.pass);
        assert!(good.pf_residual.is_zero());
        let bad = certify(&m, &CubicSurface::parse("x^3", P).unwrap(), &tol, 4, 0);
        assert!(!bad.pass);
        assert_eq!(bad.pf_residual.to_f64(), 1.0);
    }
}
