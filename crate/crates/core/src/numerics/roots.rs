//! All-roots solver for univariate complex polynomials.
//!
//! Simultaneous Newton iteration with mutual repulsion (Aberth–Ehrlich).
//! Each approximation is frozen once either its correction drops below
//! `2^(-P+32)` relative to its modulus, or `|p(z)|` reaches the rounding
//! noise of a Horner evaluation, which is what lets clustered (multiple)
//! roots terminate instead of oscillating at the `eps^(1/m)` scale.

use rug::Float;

use super::complex::{pow2, BigComplex};
use super::tolerance::TolerancePolicy;
use super::NumericsError;

pub const DEFAULT_MAX_ITERATIONS: usize = 2000;

/// A group of root approximations that cannot be separated at the working
/// precision, reported by its centroid.
#[derive(Clone, Debug)]
pub struct RootCluster {
    pub center: BigComplex,
    pub multiplicity: usize,
}

/// Horner evaluation of `p` (ascending coefficients) and its derivative,
/// along with the running bound `sum |c_k| |z|^k` used for stopping tests.
pub fn horner(coeffs: &[BigComplex], z: &BigComplex) -> (BigComplex, BigComplex, Float) {
    let prec = z.prec();
    let mut p = BigComplex::zero(prec);
    let mut dp = BigComplex::zero(prec);
    let mut bound = Float::with_val(prec, 0);
    let az = z.abs();
    for c in coeffs.iter().rev() {
        dp = &dp * z + &p;
        p = &p * z + c;
        bound *= &az;
        bound += c.abs();
    }
    (p, dp, bound)
}

pub fn eval_univariate(coeffs: &[BigComplex], z: &BigComplex) -> BigComplex {
    let mut p = BigComplex::zero(z.prec());
    for c in coeffs.iter().rev() {
        p = &p * z + c;
    }
    p
}

pub fn max_abs(values: &[BigComplex]) -> Float {
    let prec = values.iter().map(|v| v.prec()).max().unwrap_or(64);
    values
        .iter()
        .map(|v| v.abs())
        .fold(Float::with_val(prec, 0), |m, a| if a > m { a } else { m })
}

/// Drops leading coefficients that are negligible (relative to the largest
/// coefficient) under `tol.zero_eps`.
pub fn trim_leading(coeffs: &mut Vec<BigComplex>, tol: &TolerancePolicy) {
    let scale = max_abs(coeffs);
    let bound = tol.zero_bound(&scale);
    while let Some(last) = coeffs.last() {
        if last.abs() <= bound {
            coeffs.pop();
        } else {
            break;
        }
    }
}

/// Roots of `sum coeffs[k] z^k` with multiplicity, `coeffs.len() - 1` of them.
pub fn roots_univariate(
    coeffs: &[BigComplex],
    tol: &TolerancePolicy,
) -> Result<Vec<BigComplex>, NumericsError> {
    roots_univariate_with(coeffs, tol, DEFAULT_MAX_ITERATIONS)
}

pub fn roots_univariate_with(
    coeffs: &[BigComplex],
    tol: &TolerancePolicy,
    max_iterations: usize,
) -> Result<Vec<BigComplex>, NumericsError> {
    let prec = tol.prec();
    if coeffs.len() < 2 {
        return Err(NumericsError::DegreeZero);
    }
    let n = coeffs.len() - 1;
    let scale = max_abs(coeffs);
    let lead = &coeffs[n];
    if lead.abs() <= tol.zero_bound(&scale) {
        return Err(NumericsError::LeadingZero);
    }
    let monic: Vec<BigComplex> = coeffs
        .iter()
        .map(|c| c.with_prec(prec).try_div(lead))
        .collect::<Result<_, _>>()?;

    if n == 1 {
        return Ok(vec![-&monic[0]]);
    }

    // Fujiwara bound on root moduli.
    let mut radius: f64 = 0.0;
    for k in 1..=n {
        let mut a = monic[n - k].abs_f64();
        if k == n {
            a /= 2.0;
        }
        radius = radius.max(a.powf(1.0 / k as f64));
    }
    if radius == 0.0 {
        return Ok(vec![BigComplex::zero(prec); n]);
    }
    if !radius.is_finite() {
        radius = 1.0;
    }
    let mut z: Vec<BigComplex> = (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            BigComplex::from_f64(prec, radius * angle.cos(), radius * angle.sin())
        })
        .collect();

    let step_eps = pow2(prec, -(prec as i32) + 32);
    let noise = Float::with_val(prec, pow2(prec, -(prec as i32) + 8) * (4 * n as u32));
    let mut done = vec![false; n];
    let mut iterations = 0;
    while done.iter().any(|d| !d) {
        if iterations >= max_iterations {
            return Err(NumericsError::NoConvergence { iterations });
        }
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp, bound) = horner(&monic, &z[i]);
            if p.abs() <= Float::with_val(prec, &noise * &bound) {
                done[i] = true;
                continue;
            }
            let mut repulsion = BigComplex::zero(prec);
            for j in 0..n {
                if j != i {
                    let diff = &z[i] - &z[j];
                    match diff.recip() {
                        Ok(r) => repulsion += &r,
                        Err(_) => {
                            // coincident approximations: nudge apart
                            let nudge = BigComplex::from_f64(prec, 1e-8, 1e-8);
                            z[i] = &z[i] + &nudge.mul_float(&Float::with_val(53, radius));
                        }
                    }
                }
            }
            let ratio = match p.try_div(&dp) {
                Ok(r) => r,
                Err(_) => {
                    z[i] = &z[i] + &BigComplex::from_f64(prec, 1e-6 * radius, 0.0);
                    continue;
                }
            };
            let denom = BigComplex::one(prec) - &ratio * &repulsion;
            let w = match ratio.try_div(&denom) {
                Ok(w) => w,
                Err(_) => ratio,
            };
            z[i] -= &w;
            let zmag = z[i].abs().max(&Float::with_val(prec, 1));
            if w.abs() <= Float::with_val(prec, &step_eps * &zmag) {
                done[i] = true;
            }
        }
    }

    let cert = tol.cert_eps.clone();
    for r in &z {
        let (p, _, bound) = horner(&monic, r);
        if p.abs() > Float::with_val(prec, &cert * &bound.max(&Float::with_val(prec, 1))) {
            return Err(NumericsError::NoConvergence { iterations });
        }
    }
    Ok(z)
}

/// Groups approximations whose Weierstrass inclusion disks overlap and
/// returns one centroid per group. Centroids of multiple roots are then
/// polished by Newton's method on the `(m-1)`-th derivative.
pub fn cluster_roots(
    coeffs: &[BigComplex],
    roots: &[BigComplex],
    tol: &TolerancePolicy,
) -> Vec<RootCluster> {
    let prec = tol.prec();
    let n = roots.len();
    if n == 0 {
        return Vec::new();
    }
    let lead = &coeffs[coeffs.len() - 1];
    let floor = pow2(prec, -(prec as i32) + 32);
    let radii: Vec<Float> = (0..n)
        .map(|i| {
            let mut prod = lead.clone();
            for j in 0..n {
                if j != i {
                    prod *= &(&roots[i] - &roots[j]);
                }
            }
            let p = eval_univariate(coeffs, &roots[i]);
            let zmag = roots[i].abs().max(&Float::with_val(prec, 1));
            let fl = Float::with_val(prec, &floor * &zmag);
            match p.try_div(&prod) {
                Ok(w) => {
                    let r = Float::with_val(prec, w.abs() * n as u32);
                    if r.is_finite() {
                        r.max(&fl)
                    } else {
                        fl
                    }
                }
                Err(_) => fl,
            }
        })
        .collect();

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut k = i;
        while parent[k] != r {
            let next = parent[k];
            parent[k] = r;
            k = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (&roots[i] - &roots[j]).abs();
            let reach = Float::with_val(prec, &radii[i] + &radii[j]);
            if d <= reach {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }

    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, members)) => members.push(i),
            None => groups.push((r, vec![i])),
        }
    }

    let mut clusters: Vec<RootCluster> = groups
        .into_iter()
        .map(|(_, members)| {
            let m = members.len();
            let mut sum = BigComplex::zero(prec);
            for &k in &members {
                sum += &roots[k];
            }
            let mean = sum
                .try_div(&BigComplex::from_i64(prec, m as i64))
                .expect("nonzero count");
            let center = if m > 1 {
                polish_multiple(coeffs, mean, m)
            } else {
                roots[members[0]].clone()
            };
            RootCluster {
                center,
                multiplicity: m,
            }
        })
        .collect();
    clusters.sort_by(|a, b| a.center.magnitude_lex_cmp(&b.center));
    clusters
}

fn derivative(coeffs: &[BigComplex]) -> Vec<BigComplex> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale_i64(k as i64))
        .collect()
}

fn polish_multiple(coeffs: &[BigComplex], start: BigComplex, m: usize) -> BigComplex {
    let mut d = coeffs.to_vec();
    for _ in 0..(m - 1) {
        d = derivative(&d);
    }
    if d.len() < 2 {
        return start;
    }
    let mut z = start;
    let mut last = eval_univariate(&d, &z).abs();
    for _ in 0..16 {
        let (p, dp, _) = horner(&d, &z);
        let Ok(step) = p.try_div(&dp) else { break };
        let candidate = &z - &step;
        let val = eval_univariate(&d, &candidate).abs();
        if val < last {
            z = candidate;
            last = val;
        } else {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn c(re: i64) -> BigComplex {
        BigComplex::from_i64(256, re)
    }

    fn contains(roots: &[BigComplex], target: &BigComplex, eps: f64) -> bool {
        roots.iter().any(|r| (r - target).abs_f64() < eps)
    }

    #[test]
    fn quadratic_unit_roots() {
        let roots = roots_univariate(&[c(-1), c(0), c(1)], &tol()).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(contains(&roots, &c(1), 1e-70));
        assert!(contains(&roots, &c(-1), 1e-70));
    }

    #[test]
    fn cube_roots_of_unity() {
        let roots = roots_univariate(&[c(-1), c(0), c(0), c(1)], &tol()).unwrap();
        for k in 0..3 {
            let w = BigComplex::root_of_unity(256, k, 3);
            assert!(contains(&roots, &w, 1e-70));
        }
    }

    #[test]
    fn residual_of_depressed_cubic() {
        // z^3 - 2z + 5
        let coeffs = [c(5), c(-2), c(0), c(1)];
        let roots = roots_univariate(&coeffs, &tol()).unwrap();
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert!(eval_univariate(&coeffs, r).abs_f64() <= 1e-70);
        }
    }

    #[test]
    fn leading_zero_rejected() {
        let err = roots_univariate(&[c(1), c(2), c(0)], &tol()).unwrap_err();
        assert!(matches!(err, NumericsError::LeadingZero));
    }

    #[test]
    fn iteration_cap_reported() {
        let coeffs = [c(5), c(-2), c(0), c(1)];
        let err = roots_univariate_with(&coeffs, &tol(), 1).unwrap_err();
        assert!(matches!(err, NumericsError::NoConvergence { .. }));
    }

    #[test]
    fn triple_root_clusters_to_its_centroid() {
        // (z - 2)^3 (z + 1)
        let coeffs = [c(8), c(-4), c(-6), c(5), c(-1)]
            .iter()
            .map(|v| -v)
            .collect::<Vec<_>>();
        let roots = roots_univariate(&coeffs, &tol()).unwrap();
        let clusters = cluster_roots(&coeffs, &roots, &tol());
        assert_eq!(clusters.len(), 2);
        let triple = clusters.iter().find(|k| k.multiplicity == 3).unwrap();
        assert!((&triple.center - &c(2)).abs_f64() < 1e-60);
        let simple = clusters.iter().find(|k| k.multiplicity == 1).unwrap();
        assert!((&simple.center - &c(-1)).abs_f64() < 1e-60);
    }

    #[test]
    fn pure_power_has_zero_roots() {
        let roots = roots_univariate(&[c(0), c(0), c(0), c(3)], &tol()).unwrap();
        assert!(roots.iter().all(|r| r.is_zero()));
    }
}
