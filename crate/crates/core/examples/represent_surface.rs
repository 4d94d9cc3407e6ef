//! End to end: cubic in, certified 6x6 linear skew matrices out.
//!
//! cargo run --example represent_surface -- "x^3 + y^3 + z^3 + t^3 - x*y*z"

use cubic_pfaffian::cubic_io::CubicSurface;
use cubic_pfaffian::pipeline::{represent, Options, RepresentReport};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "x^3 + y^3 + z^3 + t^3 - x*y*z".into());
    let opts = Options::default();
    let c = CubicSurface::parse(&text, opts.precision_bits)?;
    let r = represent(&c, &opts)?;

    print!("{}", RepresentReport::new(&r, true).render_text());
    println!("classification of y = 0: {}", r.classification.name());
    if let Some(d) = &r.transforms.d11 {
        let (re, im) = d.value.to_f64_parts();
        println!("d11 = {re:.6} {im:+.6}i ({} root)", d.branch.as_str());
    }
    let cert = &r.certificate;
    println!(
        "Pf gap {:e}, det gap {:e}, pass = {}",
        cert.pf_residual.to_f64(),
        cert.det_residual.to_f64(),
        cert.pass
    );
    Ok(())
}
