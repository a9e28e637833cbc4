//! A Weierstrass curve and the power series of its formal group determine
//! each other: six coefficients pin the curve down, the rest must agree.

use arithdyn::elliptic::{formal_expansion, series_to_curve, WeierstrassCurve};
use arithdyn::series::TruncatedSeries;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let e: WeierstrassCurve = "[1,-1,1,-3,5]".parse()?;
    let w = formal_expansion(&e, 8)?;
    println!("{e}\n  w(z) = {w}");
    let back = series_to_curve(&w)?;
    println!("  recovered {back}");
    assert_eq!(back, e);

    // perturb a coefficient past the sixth: no curve produces it
    let mut bad = w.coefficients.clone();
    bad[7] += 1;
    match series_to_curve(&TruncatedSeries::new(bad)) {
        Err(err) => println!("  tampered series: {err}"),
        Ok(c) => unreachable!("{c}"),
    }
    Ok(())
}
