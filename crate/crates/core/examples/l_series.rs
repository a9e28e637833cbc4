//! L-series coefficients: point counts at good primes, the Hecke recursion
//! for prime powers, and a check of the Hasse bound.

use arithdyn::elliptic::{ap_bruteforce, ap_count, l_coefficients, local_data, WeierstrassCurve};
use arithdyn::padic::is_prime;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let e: WeierstrassCurve = "[0,0,1,-1,0]".parse()?;
    let v = l_coefficients(&e, 20)?;
    let coeffs: Vec<String> = v.coeffs.iter().map(ToString::to_string).collect();
    println!("level {}: a(1..20) = {}", v.level, coeffs.join(" "));

    for p in [2, 3, 5, 7] {
        assert_eq!(ap_count(&e, p)?, ap_bruteforce(&e, p)?);
    }

    let bad = local_data(&e)?;
    let worst = (2..2000u64)
        .filter(|&p| is_prime(p) && bad.at(p).is_none())
        .map(|p| Ok::<_, arithdyn::elliptic::EllipticError>(ap_count(&e, p)? as f64 / (2.0 * (p as f64).sqrt())))
        .try_fold(0.0f64, |m, r| r.map(|x| m.max(x.abs())))?;
    println!("max |a_p| / 2 sqrt(p) over good p < 2000: {worst:.4}");
    Ok(())
}
