//! Arithmetic in Q_p: valuations, absolute values, sides of zero and discs.

use arithdyn::json::parse_rational;
use arithdyn::padic::{same_side_of_zero, PadicBall, PadicNumber};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = 5;
    let q = |s: &str| PadicNumber::from_rational(p, 10, &parse_rational(s).unwrap());

    let x = q("-7/50")?;
    let y = q("3/10")?;
    println!("x = -7/50  ->  {x}  (v = {:?}, |x| = {})", x.valuation(), x.abs());
    println!("y =  3/10  ->  {y}");
    println!("x + y = {}", x.add(&y)?);
    println!("x * y = {}   (valuations add)", x.mul(&y)?);
    let w = q("2/7")?;
    println!("1 / (2/7) = {}", w.invert()?);
    if let Err(e) = y.invert() {
        println!("1 / y: {e} (only units of Z_5 are inverted)");
    }

    // 1 and 6 share a side of zero, 1 and 2 do not
    let (one, two, six) = (q("1")?, q("2")?, q("6")?);
    println!("side(1) = side(6)? {}", same_side_of_zero(&one, &six)?);
    println!("side(1) = side(2)? {}", same_side_of_zero(&one, &two)?);

    let disc = PadicBall::closed(q("1")?, 2);
    for n in ["26", "51", "6"] {
        println!("{n} in B(1, 5^-2)? {}", disc.contains(&q(n)?)?);
    }
    Ok(())
}
