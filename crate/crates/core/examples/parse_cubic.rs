//! Reading a cubic: expression syntax, the 20 coefficient slots, JSON requests.
//!
//! cargo run --example parse_cubic -- "x^3 + 2*i*y*z*t - (x + t)^3"

use cubic_pfaffian::cubic_io::json::parse_request;
use cubic_pfaffian::cubic_io::CubicSurface;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "x^3 + 2*i*y*z*t - (x + t)^3".into());
    let c = CubicSurface::parse(&text, 256)?;
    println!("input:     {text}");
    println!("canonical: {}", c.render());

    for (k, v) in c.theta().iter().enumerate() {
        if !v.is_zero() {
            println!("  theta[{:2}] = {v}", k + 1);
        }
    }

    // rendering is parseable and stable
    assert_eq!(CubicSurface::parse(&c.render(), 256)?, c);

    let req = parse_request(r#"{"cubic": {"theta": [[1,0],[1,0],[1,0],[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],["0.5","-1"]]}, "seed": 3}"#)?;
    println!("from theta request: {} (seed {:?})", req.cubic.to_surface(256)?.render(), req.seed);

    for bad in ["x^2 + y^2", "x^3 + w^3", "x^3 *"] {
        match CubicSurface::parse(bad, 256) {
            Ok(_) => println!("{bad:12} accepted?"),
            Err(e) => println!("{bad:12} rejected: {e}"),
        }
    }
    Ok(())
}
