use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;

use super::{BuildError, Branch, PfaffianRep};
use crate::cubic_io::CubicSurface;
use crate::multipoly::{linear_pivot, LinearChange, MultiPoly};
use crate::numerics::{BigComplex, Matrix, TolerancePolicy};
use crate::ternary_canon::{find_lines, slice_y0};
use crate::verifier::LinearMatrix;

pub const DEFAULT_MAX_ROTATIONS: usize = 20;
const SECTION_ATTEMPTS: usize = 4;

/// `g = f ∘ change` with an irreducible `y = 0` section.
#[derive(Clone, Debug)]
pub struct Rotation {
    pub surface: CubicSurface,
    pub change: LinearChange,
    pub attempts: usize,
}

fn det_i64(m: &[[i64; 4]; 4]) -> i64 {
    // cofactor expansion along the first row; entries are tiny
    let minor3 = |rows: [usize; 3], cols: [usize; 3]| {
        let a = |i: usize, j: usize| m[rows[i]][cols[j]];
        a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
    };
    (0..4)
        .map(|j| {
            let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * minor3([1, 2, 3], [cols[0], cols[1], cols[2]])
        })
        .sum()
}

fn section_is_irreducible(s: &MultiPoly, f_scale: &Float, tol: &TolerancePolicy) -> bool {
    s.max_abs_coeff() > tol.cert_bound(f_scale) && find_lines(s, tol).lines.is_empty()
}

/// Tries up to `max_attempts` integer changes of coordinates (entries in
/// `[-3, 3]`) until the `y = 0` section of the transformed surface is
/// irreducible.
pub fn rotate_until_irreducible(
    c: &CubicSurface,
    tol: &TolerancePolicy,
    seed: u64,
    max_attempts: usize,
) -> Result<Rotation, BuildError> {
    let prec = tol.prec();
    let f = c.to_poly().with_prec(prec);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    while attempts < max_attempts {
        let r: [[i64; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-3i64..=3)));
        if det_i64(&r) == 0 {
            continue;
        }
        attempts += 1;
        let rows: Vec<Vec<i64>> = r.iter().map(|row| row.to_vec()).collect();
        let change = LinearChange::new(Matrix::from_i64(&rows, prec), tol)?;
        let g = f.substitute_linear(&change)?;
        let Ok(surface) = CubicSurface::from_poly(&g) else { continue };
        let s = slice_y0(&surface);
        if section_is_irreducible(&s, &g.max_abs_coeff(), tol) {
            return Ok(Rotation {
                surface,
                change,
                attempts,
            });
        }
    }
    Err(BuildError::RotationExhausted { attempts })
}

/// `f = plane * quotient`.
#[derive(Clone, Debug)]
pub struct PlaneSplit {
    /// Coefficients of `(x, y, z, t)`, largest equal to 1.
    pub plane: [BigComplex; 4],
    pub quotient: MultiPoly,
    /// Division remainder relative to `sum |coeff f|`.
    pub residual: Float,
}

fn random_section(rng: &mut ChaCha8Rng, prec: u32) -> Matrix {
    Matrix::from_rows(
        (0..3)
            .map(|_| {
                (0..4)
                    .map(|_| BigComplex::from_parts_i64(prec, rng.random_range(-9i64..=9), rng.random_range(-9i64..=9)))
                    .collect()
            })
            .collect(),
    )
}

/// Two points in four-space spanning the line `c . u = 0` of the section
/// plane parametrized by `u -> u P`.
fn line_points(c: &[BigComplex; 3], p: &Matrix) -> [Vec<BigComplex>; 2] {
    let prec = p.prec();
    let k = linear_pivot(c);
    let rest: Vec<usize> = (0..3).filter(|&v| v != k).collect();
    let inv = c[k].recip().expect("pivot is the largest coefficient");
    std::array::from_fn(|which| {
        let mut u: Vec<BigComplex> = vec![BigComplex::zero(prec); 3];
        u[rest[which]] = BigComplex::one(prec);
        u[k] = -&(&c[rest[which]] * &inv);
        Matrix::from_rows(vec![u]).mul(p).row(0).to_vec()
    })
}

/// The plane through three points, via the 3x3 minors of their 3x4 matrix.
fn plane_through(points: [&[BigComplex]; 3]) -> [BigComplex; 4] {
    std::array::from_fn(|k| {
        let cols: Vec<usize> = (0..4).filter(|&c| c != k).collect();
        let m = Matrix::from_rows(points.iter().map(|p| cols.iter().map(|&c| p[c].clone()).collect()).collect());
        let d = m.det();
        if k % 2 == 0 {
            d
        } else {
            -d
        }
    })
}

fn normalize_plane(v: [BigComplex; 4], tol: &TolerancePolicy) -> Option<[BigComplex; 4]> {
    let k = linear_pivot(&v);
    let inv = v[k].recip().ok()?;
    let mut out = v.map(|c| &c * &inv);
    out[k] = BigComplex::one(tol.prec());
    for c in out.iter_mut() {
        if c.abs() <= tol.zero_eps {
            *c = BigComplex::zero(tol.prec());
        }
    }
    Some(out)
}

const REFINE_STEPS: usize = 40;

/// `v_k -> -sum_{j != k} a_j v_j` for the plane with `plane[k] = 1`.
fn on_plane(plane: &[BigComplex; 4], k: usize, prec: u32) -> Vec<MultiPoly> {
    (0..4)
        .map(|v| {
            if v == k {
                let c: Vec<BigComplex> = (0..4)
                    .map(|j| if j == k { BigComplex::zero(prec) } else { -&plane[j] })
                    .collect();
                MultiPoly::linear(&c)
            } else {
                MultiPoly::var(4, v, prec)
            }
        })
        .collect()
}

/// Polishes an approximate factor. A plane of multiplicity `m` in `f` is a
/// simple factor of the `(m-1)`-th derivative along its pivot variable, where
/// Gauss-Newton on the division remainder converges quadratically.
fn refine_plane(f: &MultiPoly, plane: [BigComplex; 4], tol: &TolerancePolicy) -> [BigComplex; 4] {
    let prec = tol.prec();
    let k = linear_pivot(&plane);
    let loose = Float::with_val(prec, tol.cert_eps.clone().sqrt().sqrt());
    let mut h = f.clone();
    for _ in 0..2 {
        let d = h.derivative(k);
        let scale = d.max_abs_coeff();
        let Ok((_, rem)) = d.div_linear(&plane) else { break };
        if scale.is_zero() || rem.max_abs_coeff() > Float::with_val(prec, &loose * &scale) {
            break;
        }
        h = d;
    }
    let hk = h.derivative(k);
    let others: Vec<usize> = (0..4).filter(|&j| j != k).collect();
    let mut a = plane.clone();
    let mut best: Option<([BigComplex; 4], Float)> = None;
    for _ in 0..REFINE_STEPS {
        let images = on_plane(&a, k, prec);
        let Ok(r) = h.compose(&images) else { break };
        let Ok(dk) = hk.compose(&images) else { break };
        let norm = r.max_abs_coeff();
        if best.as_ref().is_some_and(|(_, l)| norm >= *l) {
            break;
        }
        best = Some((a.clone(), norm.clone()));
        if norm.is_zero() {
            break;
        }
        // dR/da_j = -v_j * (d_k h)(on plane)
        let cols: Vec<MultiPoly> = others.iter().map(|&j| -&(&MultiPoly::var(4, j, prec) * &dk)).collect();
        let mut monos: Vec<crate::multipoly::Monomial> = r.terms().map(|(m, _)| *m).collect();
        for c in &cols {
            monos.extend(c.terms().map(|(m, _)| *m));
        }
        monos.sort();
        monos.dedup();
        let jac = Matrix::from_rows(monos.iter().map(|m| cols.iter().map(|c| c.coeff(m)).collect()).collect());
        let rhs = Matrix::from_rows(monos.iter().map(|m| vec![-&r.coeff(m)]).collect());
        let jh = Matrix::from_rows((0..3).map(|i| (0..monos.len()).map(|n| jac.get(n, i).conj()).collect()).collect());
        let Ok(inv) = jh.mul(&jac).inverse() else { break };
        let step = inv.mul(&jh.mul(&rhs));
        for (i, &j) in others.iter().enumerate() {
            a[j] = &a[j] + step.get(i, 0);
        }
    }
    best.map_or(plane, |(a, _)| a)
}

/// Finds a plane dividing `f`. Lines of two generic plane sections are
/// traces of such planes; a plane through one trace and a point of
/// another is tested by division.
pub fn split_plane(c: &CubicSurface, tol: &TolerancePolicy, seed: u64) -> Result<PlaneSplit, BuildError> {
    let prec = tol.prec();
    let f = c.to_poly().with_prec(prec);
    let scale = f.sum_abs_coeff();
    let bound = tol.cert_bound(&scale);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let section = |rng: &mut ChaCha8Rng| -> Result<Vec<[Vec<BigComplex>; 2]>, BuildError> {
        let p = random_section(rng, prec);
        let images: Vec<MultiPoly> = (0..4)
            .map(|j| MultiPoly::linear(&(0..3).map(|i| p.get(i, j).clone()).collect::<Vec<_>>()))
            .collect();
        let s = f.compose(&images)?;
        Ok(find_lines(&s, tol).lines.iter().map(|l| line_points(l.coeffs(), &p)).collect())
    };
    for _ in 0..SECTION_ATTEMPTS {
        let first = section(&mut rng)?;
        if first.is_empty() {
            continue;
        }
        let second = section(&mut rng)?;
        for a in &first {
            for b in &second {
                for extra in b {
                    let Some(plane) = normalize_plane(plane_through([&a[0], &a[1], extra]), tol) else {
                        continue;
                    };
                    let plane = normalize_plane(refine_plane(&f, plane, tol), tol).expect("pivot stays 1");
                    let (quotient, rem) = f.div_linear(&plane)?;
                    let residual = Float::with_val(prec, rem.max_abs_coeff() / &scale);
                    if rem.max_abs_coeff() <= bound {
                        return Ok(PlaneSplit {
                            plane,
                            quotient,
                            residual,
                        });
                    }
                }
            }
        }
    }
    Err(BuildError::NotSplit)
}

/// Symmetric Gram matrix with `q(v) = v G v^T`.
fn gram(q: &MultiPoly) -> Matrix {
    let prec = q.prec();
    let half = BigComplex::from_ratio(prec, 1, 2);
    let mut g = Matrix::zeros(4, 4, prec);
    for i in 0..4 {
        for j in i..4 {
            let mut e = [0u8; 4];
            e[i] += 1;
            e[j] += 1;
            let c = q.coeff_of(&e);
            if i == j {
                g.set(i, i, c);
            } else {
                let h = &c * &half;
                g.set(i, j, h.clone());
                g.set(j, i, h);
            }
        }
    }
    g
}

fn axpy(a: &[BigComplex], k: &BigComplex, b: &[BigComplex]) -> Vec<BigComplex> {
    a.iter().zip(b).map(|(x, y)| x + &(k * y)).collect()
}

fn scaled(a: &[BigComplex], k: &BigComplex) -> Vec<BigComplex> {
    a.iter().map(|x| x * k).collect()
}

/// Linear forms `w_1..w_r` with `q = sum w_i^2`, by symmetric elimination.
fn sum_of_squares(q: &MultiPoly, tol: &TolerancePolicy) -> Vec<Vec<BigComplex>> {
    let prec = tol.prec();
    let mut g = gram(q);
    let floor = tol.cert_bound(&g.max_abs());
    let mut squares = Vec::new();
    for _ in 0..4 {
        let mut best: Option<(usize, Float)> = None;
        for i in 0..4 {
            let a = g.get(i, i).abs();
            if a > floor && best.as_ref().is_none_or(|(_, b)| a > *b) {
                best = Some((i, a));
            }
        }
        if let Some((i, _)) = best {
            let piv = g.get(i, i).clone();
            let row = g.row(i).to_vec();
            let inv = piv.recip().expect("pivot above floor");
            squares.push(scaled(&row, &piv.sqrt().recip().expect("nonzero")));
            // G -= row row^T / piv
            for r in 0..4 {
                for s in 0..4 {
                    let v = g.get(r, s) - &(&(&row[r] * &row[s]) * &inv);
                    g.set(r, s, v);
                }
            }
            continue;
        }
        // zero diagonal: pair an off-diagonal entry
        let mut off: Option<(usize, usize, Float)> = None;
        for i in 0..4 {
            for j in i + 1..4 {
                let a = g.get(i, j).abs();
                if a > floor && off.as_ref().is_none_or(|(_, _, b)| a > *b) {
                    off = Some((i, j, a));
                }
            }
        }
        let Some((i, j, _)) = off else { break };
        let gij = g.get(i, j).clone();
        let (a, b) = (g.row(i).to_vec(), g.row(j).to_vec());
        // q_ij part = 2 a b / g_ij = ((a+b)^2 + (i(a-b))^2) / (2 g_ij)
        let s = gij.scale_i64(2).sqrt().recip().expect("nonzero");
        let one = BigComplex::one(prec);
        let minus = BigComplex::from_i64(prec, -1);
        squares.push(scaled(&axpy(&a, &one, &b), &s));
        squares.push(scaled(&axpy(&a, &minus, &b), &(&s * &BigComplex::i(prec))));
        let inv = gij.recip().expect("nonzero");
        for r in 0..4 {
            for c in 0..4 {
                let sym = &(&a[r] * &b[c]) + &(&b[r] * &a[c]);
                let v = g.get(r, c) - &(&sym * &inv);
                g.set(r, c, v);
            }
        }
    }
    squares
}

/// Linear forms `(l1, l2, l3, l4)` with `q = l1 l2 + l3 l4`.
pub fn quadric_to_pfaffian_pair(q: &MultiPoly, tol: &TolerancePolicy) -> Result<[MultiPoly; 4], BuildError> {
    let prec = tol.prec();
    let q = q.with_prec(prec);
    let w = sum_of_squares(&q, tol);
    let i = BigComplex::i(prec);
    let minus_i = -&i;
    let zero = vec![BigComplex::zero(prec); 4];
    let (l1, l2, l3, l4) = match w.len() {
        0 => (zero.clone(), zero.clone(), zero.clone(), zero),
        1 => (w[0].clone(), w[0].clone(), zero.clone(), zero),
        2 => (axpy(&w[0], &i, &w[1]), axpy(&w[0], &minus_i, &w[1]), zero.clone(), zero),
        3 => (axpy(&w[0], &i, &w[1]), axpy(&w[0], &minus_i, &w[1]), w[2].clone(), w[2].clone()),
        _ => (
            axpy(&w[0], &i, &w[1]),
            axpy(&w[0], &minus_i, &w[1]),
            axpy(&w[2], &i, &w[3]),
            axpy(&w[2], &minus_i, &w[3]),
        ),
    };
    let forms = [l1, l2, l3, l4].map(|v| MultiPoly::linear(&v));
    let back = &(&forms[0] * &forms[1]) + &(&forms[2] * &forms[3]);
    let scale = q.max_abs_coeff();
    let residual = Float::with_val(prec, back.max_coeff_diff(&q) / &scale);
    if !(residual <= tol.cert_eps) {
        return Err(BuildError::CertificationFailed {
            stage: "quadric_to_pfaffian_pair",
            residual: residual.to_f64(),
        });
    }
    Ok(forms)
}

/// Block matrix `[[0, l], [-l, 0]] (+) N` where the 4x4 block `N` has
/// `n12 = l1, n34 = l2, n14 = l3, n23 = l4`, so `Pf = l (l1 l2 + l3 l4)`.
pub fn block_representation(plane: &MultiPoly, pair: &[MultiPoly; 4]) -> PfaffianRep {
    let prec = pair.iter().map(MultiPoly::prec).chain([plane.prec()]).max().unwrap_or(64);
    let zero = MultiPoly::zero(4, prec);
    let mut entries = vec![vec![zero; 6]; 6];
    let mut put = |i: usize, j: usize, l: &MultiPoly| {
        entries[i][j] = l.clone();
        entries[j][i] = -l;
    };
    put(0, 1, plane);
    put(2, 3, &pair[0]);
    put(4, 5, &pair[1]);
    put(2, 5, &pair[2]);
    put(3, 4, &pair[3]);
    let mats = crate::verifier::from_linear_entries(&entries, prec);
    PfaffianRep {
        matrices: LinearMatrix::new(mats).expect("skew by construction"),
        branch: Branch::PlaneSplit,
        pf_sign: 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic_io::parse_expression;
    use crate::verifier::{certify, pfaffian_symbolic};

    const P: u32 = 256;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn poly(text: &str) -> MultiPoly {
        parse_expression(text, P).unwrap()
    }

    fn surface(text: &str) -> CubicSurface {
        CubicSurface::parse(text, P).unwrap()
    }

    fn close(a: &MultiPoly, b: &MultiPoly) -> bool {
        a.max_coeff_diff(b).to_f64() < 1e-60
    }

    #[test]
    fn integer_determinant() {
        let id = std::array::from_fn(|i| std::array::from_fn(|j| (i == j) as i64 * (i as i64 + 1)));
        assert_eq!(det_i64(&id), 24);
        let singular = [[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 0, 1], [3, 0, 0, 1]];
        assert_eq!(det_i64(&singular), 0);
        let m = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        assert_eq!(det_i64(&m), -1);
    }

    #[test]
    fn rotation_repairs_a_reducible_section() {
        let c = surface("x^3 + x*t*z + y^3");
        let r = rotate_until_irreducible(&c, &tol(), 0, DEFAULT_MAX_ROTATIONS).unwrap();
        assert!(find_lines(&slice_y0(&r.surface), &tol()).lines.is_empty());
        let g = c.to_poly().substitute_linear(&r.change).unwrap();
        assert!(close(&g, &r.surface.to_poly()));
    }

    #[test]
    fn rotation_gives_up_on_a_plane_component() {
        let err = rotate_until_irreducible(&surface("z*(x^2 + t*z)"), &tol(), 0, DEFAULT_MAX_ROTATIONS).unwrap_err();
        assert_eq!(err, BuildError::RotationExhausted { attempts: 20 });
    }

    #[test]
    fn split_examples() {
        for (text, plane, quotient) in [
            ("y*(x^2 + t*z)", "y", "x^2 + z*t"),
            ("z*(x^2 + t^2 + z^2)", "z", "x^2 + z^2 + t^2"),
            ("x^3", "x", "x^2"),
        ] {
            let s = split_plane(&surface(text), &tol(), 0).unwrap();
            let l = MultiPoly::linear(&s.plane);
            assert!(close(&l, &poly(plane)), "{text}: {}", l.render());
            assert!(close(&s.quotient, &poly(quotient)), "{text}: {}", s.quotient.render());
        }
    }

    #[test]
    fn split_a_tilted_plane() {
        let f = poly("(x + 2*y - z + 3*t)*(x*y + z^2 - t^2)");
        let s = split_plane(&CubicSurface::from_poly(&f).unwrap(), &tol(), 1).unwrap();
        let back = &MultiPoly::linear(&s.plane) * &s.quotient;
        assert!(close(&back, &f));
    }

    #[test]
    fn irreducible_surface_is_not_split() {
        let err = split_plane(&surface("x^3 + y^3 + z^3 + t^3"), &tol(), 0).unwrap_err();
        assert_eq!(err, BuildError::NotSplit);
    }

    #[test]
    fn quadric_pairs() {
        let [l1, l2, l3, l4] = quadric_to_pfaffian_pair(&poly("x^2 + z^2"), &tol()).unwrap();
        assert_eq!(l1, poly("x + i*z"));
        assert_eq!(l2, poly("x - i*z"));
        assert!(l3.is_zero() && l4.is_zero());
        for text in ["x*t", "x^2 + y^2 + z^2 + t^2", "x*y + z*t", "(x + y)^2", "x^2 + 2*x*y - 3*z*t + i*y*t"] {
            let q = poly(text);
            let l = quadric_to_pfaffian_pair(&q, &tol()).unwrap();
            assert!(close(&(&(&l[0] * &l[1]) + &(&l[2] * &l[3])), &q), "{text}");
        }
    }

    #[test]
    fn block_examples() {
        let cases = [
            ("x", ["z", "t", "0", "0"], "x*z*t"),
            ("x", ["x", "x", "0", "0"], "x^3"),
        ];
        for (plane, pair, expect) in cases {
            let rep = block_representation(&poly(plane), &pair.map(poly));
            assert!(close(&pfaffian_symbolic(&rep.matrices), &poly(expect)));
        }
        let pair = quadric_to_pfaffian_pair(&poly("x^2 + t*z"), &tol()).unwrap();
        let rep = block_representation(&poly("y"), &pair);
        let cert = certify(&rep.matrices, &surface("y*(x^2 + t*z)"), &tol(), 4, 0);
        assert!(cert.pass, "{cert:?}");
    }
}
