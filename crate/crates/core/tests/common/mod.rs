//! Oracles shared by the integration tests. They avoid the library's own
//! expansion code: the Pfaffian comes from the permutation formula and
//! polynomials are compared by evaluation.
#![allow(dead_code)]

use cubic_pfaffian::cubic_io::CubicSurface;
use cubic_pfaffian::numerics::{BigComplex, Matrix};
use cubic_pfaffian::verifier::LinearMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const P: u32 = 256;

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i64)>) {
        let n = used.len();
        if prefix.len() == n {
            let mut inversions = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if prefix[i] > prefix[j] {
                        inversions += 1;
                    }
                }
            }
            out.push((prefix.clone(), if inversions % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `Pf(A) = 1/(2^n n!) sum_sigma sgn(sigma) prod_i a[sigma(2i)][sigma(2i+1)]`.
pub fn pfaffian_by_permutations(a: &Matrix) -> BigComplex {
    let n2 = a.rows();
    let n = n2 / 2;
    let prec = a.prec();
    let mut acc = BigComplex::zero(prec);
    for (perm, sign) in permutations(n2) {
        let mut term = BigComplex::from_i64(prec, sign);
        for i in 0..n {
            term = &term * a.get(perm[2 * i], perm[2 * i + 1]);
        }
        acc += &term;
    }
    let norm: i64 = (1..=n as i64).product::<i64>() << n;
    acc.try_div(&BigComplex::from_i64(prec, norm)).unwrap()
}

pub fn random_point(rng: &mut ChaCha8Rng) -> [BigComplex; 4] {
    std::array::from_fn(|_| BigComplex::from_f64(P, rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7)))
}

/// Largest `|Pf(M(v)) - f(v)|` over `n` random points, relative to `sum |theta|`.
pub fn pointwise_pf_gap(m: &LinearMatrix, f: &CubicSurface, rng: &mut ChaCha8Rng, n: usize) -> f64 {
    let scale = f.sum_abs().to_f64();
    let fp = f.to_poly();
    (0..n)
        .map(|_| {
            let v = random_point(rng);
            let pf = pfaffian_by_permutations(&m.eval(&v));
            (&pf - &fp.eval(&v).unwrap()).abs_f64() / scale
        })
        .fold(0.0, f64::max)
}

pub fn gaussian_int(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> BigComplex {
    BigComplex::from_parts_i64(P, rng.random_range(lo..=hi), rng.random_range(lo..=hi))
}

/// A cubic with integer coefficients in `[-9, 9]`, not all zero.
pub fn random_integer_cubic(rng: &mut ChaCha8Rng) -> CubicSurface {
    loop {
        let theta: [BigComplex; 20] = std::array::from_fn(|_| BigComplex::from_i64(P, rng.random_range(-9..=9)));
        if let Ok(c) = CubicSurface::from_theta(theta) {
            return c;
        }
    }
}
