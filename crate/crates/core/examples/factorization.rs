//! Two semistable curves sharing a multiplicative prime, glued there.

use arithdyn::elliptic::{factorize, WeierstrassCurve};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let e1: WeierstrassCurve = "[0,-1,1,0,0]".parse()?;
    let e2: WeierstrassCurve = "[1,1,0,-11,0]".parse()?;
    let rec = factorize(&e1, &e2, 6)?;
    println!("shared prime {}", rec.prime);
    for (name, proj) in [("first", rec.proj1()), ("second", rec.proj2())] {
        println!("  {name}: {} level {} q = {} (v = {})", proj.curve, proj.level, proj.q.value, proj.q.valuation);
    }

    let e3: WeierstrassCurve = "[0,0,1,-1,0]".parse()?;
    if let Err(err) = factorize(&e1, &e3, 6) {
        println!("{e1} and {e3}: {err}");
    }
    Ok(())
}
