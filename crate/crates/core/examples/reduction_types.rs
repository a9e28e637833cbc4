//! Local reduction data from Tate's algorithm, for a handful of curves.

use arithdyn::elliptic::{conductor, local_data, WeierstrassCurve};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let curves = ["[0,-1,1,0,0]", "[0,0,1,-1,0]", "[1,0,1,4,-6]", "[0,1,0,-1,0]", "[0,0,1,0,-7]", "[0,0,0,-1,0]"];
    println!("{:<16} {:>9}  bad primes", "curve", "conductor");
    for s in curves {
        let e: WeierstrassCurve = s.parse()?;
        let local = local_data(&e)?;
        let bad: Vec<String> = local
            .bad
            .iter()
            .map(|r| format!("{}: {} {} f={}", r.prime, r.kind, r.kodaira, r.conductor_exponent))
            .collect();
        println!("{s:<16} {:>9}  {}", conductor(&e)?, bad.join(", "));
    }
    Ok(())
}
