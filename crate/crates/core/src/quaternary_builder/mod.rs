//! From a canonical plane section to a 6x6 linear Pfaffian representation:
//! the four-variable embedding of the ternary transform, the shear that
//! removes the `y t^2` term, the matrices `B0..B3`, sign normalization and
//! pull-back. The reducible fall-backs live in [`reducible`].

pub mod reducible;

use rug::Float;

use crate::multipoly::{LinearChange, Monomial, MultiPoly, PolyError};
use crate::numerics::{BigComplex, Matrix, TolerancePolicy};
use crate::ternary_canon::{CanonicalTernary, TernaryError};
use crate::verifier::{pfaffian_symbolic, skew_part, LinearMatrix, VerifyError};

pub use reducible::{
    block_representation, quadric_to_pfaffian_pair, rotate_until_irreducible, split_plane, PlaneSplit,
    Rotation,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BuildError {
    #[error("{stage}: residual {residual:e} exceeds the certification bound")]
    CertificationFailed { stage: &'static str, residual: f64 },
    #[error("Pfaffian matches neither the target nor its negative")]
    SignIndeterminate,
    #[error("no rotation with an irreducible section after {attempts} attempts")]
    RotationExhausted { attempts: usize },
    #[error("no plane divides the cubic")]
    NotSplit,
    #[error(transparent)]
    Ternary(#[from] TernaryError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// The `y = 0` section is irreducible.
    Irreducible,
    /// A random change of coordinates made the section irreducible.
    Rotated,
    /// The cubic contains a plane.
    PlaneSplit,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Irreducible => "irreducible",
            Branch::Rotated => "rotated",
            Branch::PlaneSplit => "plane_split",
        }
    }
}

/// A linear Pfaffian representation together with how it was obtained.
#[derive(Clone, Debug, PartialEq)]
pub struct PfaffianRep {
    pub matrices: LinearMatrix,
    pub branch: Branch,
    /// `-1` when rows and columns 1 and 2 were swapped to fix the sign.
    pub pf_sign: i8,
}

/// Coefficients of the normalized cubic, named by their monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct Lambdas {
    pub z3: BigComplex,
    pub x2z: BigComplex,
    pub xz2: BigComplex,
    pub y3: BigComplex,
    pub x2y: BigComplex,
    pub xy2: BigComplex,
    pub y2z: BigComplex,
    pub yz2: BigComplex,
    pub y2t: BigComplex,
    pub xyz: BigComplex,
    pub xyt: BigComplex,
    pub yzt: BigComplex,
}

/// `(name, exponents in (x, y, z, t))` for every field of [`Lambdas`].
pub const LAMBDA_MONOMIALS: [(&str, [u8; 4]); 12] = [
    ("z3", [0, 0, 3, 0]),
    ("x2z", [2, 0, 1, 0]),
    ("xz2", [1, 0, 2, 0]),
    ("y3", [0, 3, 0, 0]),
    ("x2y", [2, 1, 0, 0]),
    ("xy2", [1, 2, 0, 0]),
    ("y2z", [0, 2, 1, 0]),
    ("yz2", [0, 1, 2, 0]),
    ("y2t", [0, 2, 0, 1]),
    ("xyz", [1, 1, 1, 0]),
    ("xyt", [1, 1, 0, 1]),
    ("yzt", [0, 1, 1, 1]),
];

impl Lambdas {
    pub fn zero(prec: u32) -> Self {
        Self::from_values(std::array::from_fn(|_| BigComplex::zero(prec)))
    }

    /// Values in the order of [`LAMBDA_MONOMIALS`].
    pub fn from_values(v: [BigComplex; 12]) -> Self {
        let [z3, x2z, xz2, y3, x2y, xy2, y2z, yz2, y2t, xyz, xyt, yzt] = v;
        Lambdas {
            z3,
            x2z,
            xz2,
            y3,
            x2y,
            xy2,
            y2z,
            yz2,
            y2t,
            xyz,
            xyt,
            yzt,
        }
    }

    pub fn values(&self) -> [&BigComplex; 12] {
        [
            &self.z3, &self.x2z, &self.xz2, &self.y3, &self.x2y, &self.xy2, &self.y2z, &self.yz2, &self.y2t,
            &self.xyz, &self.xyt, &self.yzt,
        ]
    }

    pub fn read(p: &MultiPoly) -> Self {
        Self::from_values(LAMBDA_MONOMIALS.map(|(_, e)| p.coeff_of(&e)))
    }

    /// `x^3 - t^2 z + sum lambda * monomial`.
    pub fn target(&self) -> MultiPoly {
        let prec = self.values().iter().map(|v| v.prec()).max().unwrap_or(64);
        let mut p = MultiPoly::from_terms(
            4,
            prec,
            [
                (Monomial::new(&[3, 0, 0, 0]), BigComplex::one(prec)),
                (Monomial::new(&[0, 0, 1, 2]), BigComplex::from_i64(prec, -1)),
            ],
        );
        for ((_, e), v) in LAMBDA_MONOMIALS.iter().zip(self.values()) {
            p.add_term(Monomial::new(e), v);
        }
        p
    }
}

/// Normalized cubic `f ∘ transform = lam.target()`.
#[derive(Clone, Debug)]
pub struct CanonicalQuaternary {
    pub lam: Lambdas,
    pub transform: LinearChange,
    pub embedding: Matrix,
    pub shear_beta: BigComplex,
    /// Coefficientwise distance to the target, relative to its largest coefficient.
    pub residual: Float,
}

/// The ternary change `[a_ij]` on `(x, z, t)` placed in four variables with
/// `y` fixed.
pub fn embed_ternary(t3: &Matrix) -> Matrix {
    let prec = t3.prec();
    let pos = [0usize, 2, 3];
    let mut m = Matrix::zeros(4, 4, prec);
    m.set(1, 1, BigComplex::one(prec));
    for (i, &pi) in pos.iter().enumerate() {
        for (j, &pj) in pos.iter().enumerate() {
            m.set(pi, pj, t3.get(i, j).clone());
        }
    }
    m
}

/// Embeds the section transform, then shears `z -> z + beta y` so the
/// `y t^2` coefficient vanishes, and reads off the twelve coefficients.
pub fn embed_and_shear(
    f: &MultiPoly,
    ct: &CanonicalTernary,
    tol: &TolerancePolicy,
) -> Result<CanonicalQuaternary, BuildError> {
    let prec = tol.prec();
    let embedding = embed_ternary(ct.transform.matrix());
    let embed = LinearChange::new(embedding.clone(), tol)?;
    let g = f.substitute_linear(&embed)?;
    let beta = g.coeff_of(&[0, 1, 0, 2]);
    let mut s = Matrix::identity(4, prec);
    s.set(1, 2, beta.clone());
    let shear = LinearChange::new(s, tol)?;
    // (f ∘ E) ∘ S = f ∘ (S E)
    let transform = shear.product(&embed);
    let h = f.substitute_linear(&transform)?;
    let lam = Lambdas::read(&h);
    let target = lam.target();
    let residual = Float::with_val(prec, h.max_coeff_diff(&target) / target.max_abs_coeff());
    if residual > tol.cert_eps {
        return Err(BuildError::CertificationFailed {
            stage: "embed_and_shear",
            residual: residual.to_f64(),
        });
    }
    Ok(CanonicalQuaternary {
        lam,
        transform,
        embedding,
        shear_beta: beta,
        residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum D11Branch {
    Plus,
    Minus,
}

impl D11Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            D11Branch::Plus => "plus",
            D11Branch::Minus => "minus",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct D11 {
    pub value: BigComplex,
    pub branch: D11Branch,
}

/// A root of `d^2 + lam18 d + 1`: `(-lam18 ± sqrt(lam18^2 - 4)) / 2` with the
/// principal square root.
pub fn compute_d11(lam18: &BigComplex, branch: D11Branch) -> D11 {
    let prec = lam18.prec();
    let disc = &(lam18 * lam18) - &BigComplex::from_i64(prec, 4);
    let root = disc.sqrt();
    let half = BigComplex::from_ratio(prec, 1, 2);
    let num = match branch {
        D11Branch::Plus => &root - lam18,
        D11Branch::Minus => &(-&root) - lam18,
    };
    D11 {
        value: &num * &half,
        branch,
    }
}

fn skew_from_upper(n: usize, prec: u32, upper: &[(usize, usize, BigComplex)]) -> Matrix {
    let mut m = Matrix::zeros(n, n, prec);
    for (i, j, v) in upper {
        m.set(*i, *j, v.clone());
        m.set(*j, *i, -v);
    }
    m
}

/// `M0 = x B0 + y B1 + z B2 + t B3` for the given coefficients and root `d`.
pub fn build_m0(lam: &Lambdas, d: &BigComplex) -> LinearMatrix {
    let prec = lam.values().iter().map(|v| v.prec()).max().unwrap_or(64).max(d.prec());
    let one = BigComplex::one(prec);
    let neg = |v: &BigComplex| -v;
    let b0 = skew_from_upper(
        6,
        prec,
        &[
            (0, 1, one.clone()),
            (0, 5, neg(&lam.x2z)),
            (1, 5, neg(&lam.x2y)),
            (2, 3, neg(&one)),
            (4, 5, neg(&one)),
        ],
    );
    let b1 = skew_from_upper(
        6,
        prec,
        &[
            (0, 2, lam.y2z.clone()),
            (0, 4, neg(&one)),
            (0, 5, &lam.y3 - &lam.xyz),
            (1, 2, lam.y3.clone()),
            (1, 5, neg(&lam.xy2)),
            (2, 5, lam.yz2.clone()),
            (3, 5, one.clone()),
        ],
    );
    let b2 = skew_from_upper(
        6,
        prec,
        &[
            (0, 3, neg(&one)),
            (0, 5, neg(&lam.xz2)),
            (1, 4, one.clone()),
            (2, 5, lam.z3.clone()),
        ],
    );
    let b3 = skew_from_upper(
        6,
        prec,
        &[
            (0, 2, &lam.yzt - &(d * &lam.xy2)),
            (0, 5, &lam.y2t + &(d * &lam.x2y)),
            (1, 2, lam.y2t.clone()),
            (1, 5, &neg(&lam.xyt) - d),
            (2, 4, d.clone()),
        ],
    );
    LinearMatrix::new([b0, b1, b2, b3]).expect("built skew")
}

/// Swaps the first two rows and columns of every coefficient matrix when
/// the Pfaffian equals `-target`; fails when it matches neither sign.
/// Returns the representation with `Pf = +target` and the sign found.
pub fn normalize_sign(
    m: LinearMatrix,
    target: &MultiPoly,
    tol: &TolerancePolicy,
) -> Result<(LinearMatrix, i8), BuildError> {
    let pf = pfaffian_symbolic(&m);
    let scale = target.max_abs_coeff();
    let bound = tol.cert_bound(&scale);
    if pf.max_coeff_diff(target) <= bound {
        return Ok((m, 1));
    }
    if (&pf + target).max_abs_coeff() <= bound {
        let n = m.size();
        let mut p = Matrix::identity(n, m.prec());
        p.swap_rows(0, 1);
        return Ok((m.congruent(&p), -1));
    }
    Err(BuildError::SignIndeterminate)
}

/// Given `Pf(M(w)) = f(w T)`, returns `M'` with `Pf(M'(v)) = f(v)`:
/// `A'_j = sum_i S[j][i] A_i` where `S = T^(-1)`.
pub fn pull_back(m: &LinearMatrix, t: &LinearChange) -> LinearMatrix {
    let s = t.inverse_matrix();
    let prec = m.prec().max(s.prec());
    let n = m.size();
    let mats: [Matrix; 4] = std::array::from_fn(|j| {
        let mut acc = Matrix::zeros(n, n, prec);
        for (i, a) in m.matrices().iter().enumerate() {
            acc = acc.add(&a.scale(s.get(j, i)));
        }
        skew_part(&acc)
    });
    LinearMatrix::new(mats).expect("skew by construction")
}
