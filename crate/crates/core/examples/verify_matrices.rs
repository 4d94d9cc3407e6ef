//! Independent certification of a given matrix quadruple, as the `verify`
//! subcommand does for matrices read from JSON.

use cubic_pfaffian::cubic_io::CubicSurface;
use cubic_pfaffian::numerics::{BigComplex, TolerancePolicy};
use cubic_pfaffian::pipeline::{represent, verify_file, Options, RepresentReport};
use cubic_pfaffian::verifier::{certify, LinearMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = TolerancePolicy::new(256)?;
    let c = CubicSurface::parse("x^3 + y^3 + z^3 + t^3 + 3*x*y*t", 256)?;
    let r = represent(&c, &Options::default())?;

    let json = serde_json::to_string(&RepresentReport::new(&r, false))?;
    let cert = verify_file(&json, &c, &tol, 8, 0)?;
    println!("round trip through JSON: pass = {}, worst {:e}", cert.pass, cert.max_residual().to_f64());

    // nudge one skew pair and the certificate must fail
    let mut mats = r.rep.matrices.clone().into_matrices();
    let eps = BigComplex::from_f64(256, 1e-20, 0.0);
    let a = &mats[2].get(0, 3).clone() + &eps;
    mats[2].set(0, 3, a.clone());
    mats[2].set(3, 0, -&a);
    let bad = certify(&LinearMatrix::new(mats)?, &c, &tol, 8, 0);
    println!("perturbed by 1e-20: pass = {}, Pf gap {:e}", bad.pass, bad.pf_residual.to_f64());

    let other = CubicSurface::parse("x^3 + y^3 + z^3 + t^3", 256)?;
    let wrong = certify(&r.rep.matrices, &other, &tol, 8, 0);
    println!("against another cubic: pass = {}", wrong.pass);
    Ok(())
}
