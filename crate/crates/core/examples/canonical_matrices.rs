//! The explicit 6x6 family on the normalized cubic. For random coefficients
//! the Pfaffian is expanded symbolically and compared with
//! x^3 - t^2 z + sum lam_k m_k, for both roots d of d^2 + lam18 d + 1.

use cubic_pfaffian::numerics::{BigComplex, TolerancePolicy};
use cubic_pfaffian::quaternary_builder::{build_m0, compute_d11, D11Branch, Lambdas};
use cubic_pfaffian::verifier::{det_symbolic, pfaffian_symbolic};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = TolerancePolicy::new(256)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..5 {
        let lam = Lambdas::from_values(std::array::from_fn(|_| {
            BigComplex::from_f64(256, rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
        }));
        let target = lam.target();
        for branch in [D11Branch::Plus, D11Branch::Minus] {
            let d = compute_d11(&lam.xyt, branch);
            let m = build_m0(&lam, &d.value);
            let pf = pfaffian_symbolic(&m);
            let scale = target.max_abs_coeff();
            // the raw family may carry an overall sign
            let gap = pf.max_coeff_diff(&target).min(&pf.max_coeff_diff(&-&target)) / &scale;
            let det_gap = det_symbolic(&m).max_coeff_diff(&(&target * &target)) / scale.clone().square();
            println!(
                "trial {trial} {:5}: d = {}, |Pf - f| = {:.2e}, |det - f^2| = {:.2e}",
                branch.as_str(),
                d.value,
                gap.to_f64(),
                det_gap.to_f64()
            );
            assert!(gap <= tol.cert_eps && det_gap <= tol.cert_eps);
        }
    }
    println!("all identities hold to within {:e}", tol.cert_eps.to_f64());
    Ok(())
}
