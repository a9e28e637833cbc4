//! The `q`-expansion of `j` and its inverse series, evaluated at a curve with
//! multiplicative reduction.

use arithdyn::elliptic::{composition_residual, j_q_expansion, tate_parameter, tate_parameter_coefficients, WeierstrassCurve};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let j = j_q_expansion(6);
    println!("q j(q) = {:?}", j.iter().map(ToString::to_string).collect::<Vec<_>>());

    let h = tate_parameter_coefficients(6);
    println!("q(w)   = sum h_n w^n with h = {:?}", h.iter().map(ToString::to_string).collect::<Vec<_>>());
    assert!(composition_residual(&h).iter().all(|c| c == &0.into()));

    let e: WeierstrassCurve = "[0,-1,1,0,0]".parse()?;
    let jv = e.j_invariant()?;
    let t = tate_parameter(&jv, 8, 11)?;
    println!("j = {jv}; over Q_11 the Tate parameter is {} (v = {})", t.value, t.valuation);
    Ok(())
}
