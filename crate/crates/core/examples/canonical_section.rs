//! The plane section y = 0: line search for reducible sections and the
//! normal form x^3 - t^2 z + lam3 z^3 + lam7 x z^2 + lam8 x z t otherwise.
//!
//! cargo run --example canonical_section -- "x^3 + y^3 + z^3 + t^3"

use cubic_pfaffian::cubic_io::CubicSurface;
use cubic_pfaffian::numerics::TolerancePolicy;
use cubic_pfaffian::ternary_canon::{classify_reducible, find_lines, slice_y0, weierstrass_reduce};

fn show(text: &str, tol: &TolerancePolicy) -> Result<(), Box<dyn std::error::Error>> {
    let c = CubicSurface::parse(text, tol.prec())?;
    let s = slice_y0(&c);
    println!("{text}\n  section: {}", s.render_with(&["x", "z", "t"]));
    if s.is_zero() {
        println!("  y divides the cubic");
        return Ok(());
    }
    let lines = find_lines(&s, tol).lines;
    if !lines.is_empty() {
        let label = classify_reducible(&s, &lines, tol);
        println!("  reducible, {} ({})", label.name(), label.form());
        for l in &lines {
            println!("  line {} = 0", l.form().render_with(&["x", "z", "t"]));
        }
        return Ok(());
    }
    let ct = weierstrass_reduce(&s, tol, 0)?;
    println!("  {} ({})", ct.label.name(), ct.label.form());
    println!("  lam3 = {}, lam7 = {}, lam8 = {}", ct.lam3, ct.lam7, ct.lam8);
    if let Some(a) = &ct.label.alpha {
        println!("  alpha = {a}");
    }
    println!("  residual {:e}", ct.residual.to_f64());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = TolerancePolicy::new(256)?;
    let inputs: Vec<String> = std::env::args().skip(1).collect();
    if !inputs.is_empty() {
        for t in &inputs {
            show(t, &tol)?;
        }
        return Ok(());
    }
    for t in [
        "x^3 + y^3 + z^3 + t^3",
        "x^3 - t^2*z + z^3 + y*x*z",
        "x^3 - t^2*z + x^2*z",
        "x^3 - t^2*z",
        "x*z*t + y^3",
        "x*(x*z - t^2) + y*t^2",
        "y*(x^2 + z*t)",
    ] {
        show(t, &tol)?;
    }
    Ok(())
}
