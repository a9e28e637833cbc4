//! Orbits of `u(x) = x^3 (1 + A1 x + ...)` on `pZ_p`: every orbit falls into
//! the fixed point 0, tripling its valuation each step.

use arithdyn::padic::PadicNumber;
use arithdyn::series::TruncatedSeries;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u: TruncatedSeries = "x^3*(1 + 2*x - 1*x^2)".parse()?;
    let p = 3;
    for seed in [3, 6, -9, 12] {
        let x = PadicNumber::from_int(p, 40, seed)?;
        let orbit = u.iterate(&x, 3)?;
        let vals: Vec<String> = orbit
            .valuations
            .iter()
            .map(|v| v.map_or("inf".into(), |v| v.to_string()))
            .collect();
        println!("{u} from {seed:>3}: valuations {}", vals.join(" -> "));
        assert!(orbit.attracted_to_zero());
    }

    let x = PadicNumber::from_int(p, 40, 18)?;
    let v = x.valuation().unwrap();
    println!("u(18) lies in V_{} but not V_{}", 3 * v, 3 * v + 1);
    assert!(u.vn_membership(&x, 3 * v)? && !u.vn_membership(&x, 3 * v + 1)?);
    Ok(())
}
