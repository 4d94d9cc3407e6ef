//! Surfaces whose y = 0 section splits. If the surface is irreducible a
//! random change of coordinates fixes the section; if it contains a plane
//! the representation is assembled from the plane and the residual quadric.

use cubic_pfaffian::cubic_io::CubicSurface;
use cubic_pfaffian::numerics::TolerancePolicy;
use cubic_pfaffian::pipeline::{represent, Options};
use cubic_pfaffian::quaternary_builder::reducible::{rotate_until_irreducible, split_plane};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = TolerancePolicy::new(256)?;

    let tri = CubicSurface::parse("x*z*t + y^3 + y*x^2", 256)?;
    let rot = rotate_until_irreducible(&tri, &tol, 0, 20)?;
    println!("{} -> after {} attempt(s): {}", tri.render(), rot.attempts, rot.surface.render());

    let with_plane = CubicSurface::parse("(x + 2*y - i*t)*(x^2 + y*z + t^2)", 256)?;
    let split = split_plane(&with_plane, &tol, 0)?;
    let plane: Vec<String> = split.plane.iter().map(|c| c.to_string()).collect();
    println!("{}\n  plane [{}], residual {:e}", with_plane.render(), plane.join(", "), split.residual.to_f64());
    println!("  quotient {}", split.quotient.cleanup(&tol.zero_eps).render_with(&["x", "y", "z", "t"]));

    for text in ["x*z*t + y^3 + y*x^2", "z*(x^2 + t*z) + y^3", "y*(x^2 + z*t)", "x^3"] {
        let c = CubicSurface::parse(text, 256)?;
        let r = represent(&c, &Options::default())?;
        println!(
            "{text:24} branch {:12} pass {} ({} warnings)",
            r.rep.branch.as_str(),
            r.certificate.pass,
            r.warnings.len()
        );
    }
    Ok(())
}
