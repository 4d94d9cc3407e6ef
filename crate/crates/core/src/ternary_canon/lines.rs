use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::Float;

use super::label::{near_zero, CanonLabel};
use super::solve::{line_equations, solve_bivariate};
use crate::multipoly::{linear_pivot, MultiPoly};
use crate::numerics::{BigComplex, Matrix, TolerancePolicy};

const LINE_SEED: u64 = 0x6c69_6e65;
const ILL_CONDITIONED_FACTOR: u32 = 1000;

/// The line `u x + v z + w t = 0`, scaled so its largest coordinate is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveLine {
    coeffs: [BigComplex; 3],
}

impl ProjectiveLine {
    /// `None` for the zero vector.
    pub fn new(coeffs: [BigComplex; 3]) -> Option<Self> {
        let k = (0..3).max_by(|&a, &b| coeffs[a].abs().partial_cmp(&coeffs[b].abs()).unwrap())?;
        let inv = coeffs[k].recip().ok()?;
        let mut c = coeffs.map(|v| &v * &inv);
        c[k] = BigComplex::one(inv.prec());
        Some(ProjectiveLine { coeffs: c })
    }

    pub fn coeffs(&self) -> &[BigComplex; 3] {
        &self.coeffs
    }

    pub fn form(&self) -> MultiPoly {
        MultiPoly::linear(&self.coeffs)
    }

    pub fn render(&self) -> String {
        self.form().render()
    }

    fn distance(&self, other: &ProjectiveLine) -> Float {
        projective_distance(&self.coeffs, &other.coeffs)
    }

    /// Sets coordinates of magnitude at most `eps` to exact zeros.
    fn snapped(mut self, eps: &Float) -> Self {
        for c in self.coeffs.iter_mut() {
            if c.abs() <= *eps {
                *c = BigComplex::zero(c.prec());
            }
        }
        self
    }
}

/// Largest 2x2 minor of the pair; zero iff the vectors are proportional.
pub(crate) fn projective_distance(a: &[BigComplex; 3], b: &[BigComplex; 3]) -> Float {
    let prec = a[0].prec();
    let mut d = Float::with_val(prec, 0);
    for i in 0..3 {
        for j in i + 1..3 {
            let v = (&(&a[i] * &b[j]) - &(&a[j] * &b[i])).abs();
            if v > d {
                d = v;
            }
        }
    }
    d
}

/// Result of a line search: the lines found plus diagnostics about
/// candidates whose division remainder landed near the acceptance bound.
#[derive(Clone, Debug, Default)]
pub struct LineSearch {
    pub lines: Vec<ProjectiveLine>,
    pub warnings: Vec<String>,
}

/// Lines dividing a ternary form of arity 3 (at most `deg` of them).
pub fn find_lines(p: &MultiPoly, tol: &TolerancePolicy) -> LineSearch {
    assert_eq!(p.arity(), 3);
    let mut out = LineSearch::default();
    if p.is_zero() {
        out.warnings.push("zero form: every line divides it".into());
        return out;
    }
    let max_lines = p.total_degree().unwrap_or(0) as usize;
    let scale = p.sum_abs_coeff();
    let bound = tol.cert_bound(&scale);
    let warn_bound = Float::with_val(tol.prec(), &bound * ILL_CONDITIONED_FACTOR);
    let dedupe = Float::with_val(tol.prec(), &tol.cert_eps * 10u32);
    let mut rng = ChaCha8Rng::seed_from_u64(LINE_SEED);
    for chart in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&v| v != chart).collect();
        let eqs = line_equations(p, chart);
        for [a, b] in solve_bivariate(&eqs, tol, &mut rng, &mut out.warnings) {
            let mut coeffs: [BigComplex; 3] = std::array::from_fn(|_| BigComplex::zero(tol.prec()));
            coeffs[chart] = BigComplex::one(tol.prec());
            coeffs[others[0]] = a;
            coeffs[others[1]] = b;
            let Some(line) = ProjectiveLine::new(coeffs) else { continue };
            let line = line.snapped(&tol.zero_eps);
            if out.lines.iter().any(|l| l.distance(&line) <= dedupe) {
                continue;
            }
            let Ok((_, rem)) = p.div_linear(line.coeffs()) else { continue };
            let r = rem.max_abs_coeff();
            if r <= bound {
                out.lines.push(line);
            } else if r <= warn_bound {
                out.warnings.push(format!(
                    "IllConditioned: candidate line {} has remainder {:e}",
                    line.render(),
                    r.to_f64()
                ));
            }
        }
    }
    if out.lines.len() > max_lines {
        out.warnings
            .push(format!("found {} lines for a form of degree {max_lines}", out.lines.len()));
        out.lines.truncate(max_lines);
    }
    out
}

/// Label from the reducible list for a cubic with the given (nonempty) set
/// of linear factors.
pub fn classify_reducible(p: &MultiPoly, lines: &[ProjectiveLine], tol: &TolerancePolicy) -> CanonLabel {
    let prec = tol.prec();
    match lines.len() {
        0 => panic!("classify_reducible needs at least one line"),
        1 => {
            let line = &lines[0];
            let (q, _) = p.div_linear(line.coeffs()).expect("nonzero line");
            // restrict the conic to the line by eliminating the pivot variable
            let (_, on_line) = q.div_linear(line.coeffs()).expect("nonzero line");
            let qs = q.max_abs_coeff();
            let (vanishes, amb0) = near_zero(tol, &on_line.max_abs_coeff(), &qs);
            if vanishes {
                return CanonLabel::reducible(6, amb0);
            }
            let k = linear_pivot(line.coeffs());
            let rest: Vec<usize> = (0..3).filter(|&v| v != k).collect();
            let c = |e: [u8; 2]| {
                let mut exps = [0u8; 3];
                exps[rest[0]] = e[0];
                exps[rest[1]] = e[1];
                on_line.coeff_of(&exps)
            };
            let (a2, ab, b2) = (c([2, 0]), c([1, 1]), c([0, 2]));
            let disc = &(&ab * &ab) - &(&a2 * &b2).scale_i64(4);
            let ds = Float::with_val(prec, qs.clone() * &qs);
            let (tangent, amb1) = near_zero(tol, &disc.abs(), &ds);
            CanonLabel::reducible(if tangent { 1 } else { 2 }, amb0 || amb1)
        }
        2 => CanonLabel::reducible(5, false),
        _ => {
            let m = Matrix::from_rows(lines.iter().map(|l| l.coeffs().to_vec()).collect());
            let one = Float::with_val(prec, 1);
            let (concurrent, amb) = near_zero(tol, &m.det().abs(), &one);
            CanonLabel::reducible(if concurrent { 4 } else { 3 }, amb)
        }
    }
}
