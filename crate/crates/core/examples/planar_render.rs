//! Planar pictures of p-adic orbits: embed, render to SVG, and check the
//! self-similarity of the embedding under multiplication by p.

use arithdyn::padic::PadicNumber;
use arithdyn::planar::{embed, homothety_check, portrait, render, EmbedConfig, OrbitImage, PortraitConfig};
use arithdyn::series::TruncatedSeries;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::var_os("ARITHDYN_OUT_DIR").map_or_else(std::env::temp_dir, Into::into);
    let p = 3;
    let cfg = EmbedConfig::new(p, 8);

    let all: Vec<_> = (0..p.pow(4) as i64)
        .map(|n| embed(&PadicNumber::from_int(p, 12, n).unwrap(), &cfg).unwrap())
        .collect();
    let tree = OrbitImage::new("Z/81", all);

    let u: TruncatedSeries = "x^3*(1 + 1*x)".parse()?;
    let orbits = [3, 6]
        .iter()
        .map(|&s| {
            let orbit = u.iterate(&PadicNumber::from_int(p, 20, s)?, 3)?;
            Ok(OrbitImage::from_orbit(format!("seed {s}"), &orbit, &cfg)?)
        })
        .collect::<Result<Vec<_>, Box<dyn std::error::Error>>>()?;

    let file = out.join("z3.svg");
    render(&[vec![tree.clone()], orbits].concat(), &file)?;
    println!("wrote {}", file.display());

    // x -> p x contracts the picture by 1 / (2p)
    let shifted = OrbitImage::new(
        "p * Z/81",
        (0..p.pow(4) as i64)
            .map(|n| embed(&PadicNumber::from_int(p, 12, n * p as i64).unwrap(), &cfg).unwrap())
            .collect(),
    );
    let fit = homothety_check(&tree, &shifted, 1.0 / (2.0 * p as f64), 1e-6)?;
    println!("fitted scale {:.6}, residual {:.2e}, pass {}", fit.scale, fit.residual, fit.pass);

    let pic = portrait(&u, &PortraitConfig::new(p))?;
    render(&[pic], &out.join("portrait.svg"))?;
    Ok(())
}
