//! A character mod p* built from L-series coefficients, the recovery of the
//! coefficients from it, and the counting laws of the formation.

use arithdyn::elliptic::{l_coefficients, WeierstrassCurve};
use arithdyn::formation::formation_report;
use num_bigint::BigInt;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // nonnegative coefficients recover exactly
    let small: Vec<BigInt> = [3, 1, 4, 1, 5, 9, 2, 6].iter().map(|&a| a.into()).collect();
    let r = formation_report(&small, 3.0, None, 100_000, 1_000_000)?;
    println!("{}", serde_json::to_string_pretty(&r)?);

    // coefficients of 11a3 are signed; the sign comes back from Im chi
    let e: WeierstrassCurve = "[0,-1,1,0,0]".parse()?;
    let v = l_coefficients(&e, 12)?;
    let coeffs: Vec<BigInt> = v.coeffs[1..].iter().map(|c| c.to_integer()).collect();
    let r = formation_report(&coeffs, 3.0, None, 10_000, 100_000)?;
    println!("11a3: p* = {}, recovery {} vs L {}", r.p_star, r.recovery_sum, r.truncated_l);
    Ok(())
}
