//! A decreasing sequence of holes shrinking onto the beach disc, checked
//! against the four filter properties, and an exact continuation fix-up.

use arithdyn::json::parse_rational;
use arithdyn::tfilter::{base_for, continuation_adjust, evaluator, generate_hole_sequence, verify_specs};
use num_rational::BigRational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r = parse_rational("1/3")?;
    let r_star = parse_rational("2/3")?;
    let seq = generate_hole_sequence(&r, &r_star, 6)?;
    for h in &seq.holes {
        println!("hole on side {}: radius {}", h.side_id, h.radius);
    }
    let report = verify_specs(&seq, &base_for(&seq));
    println!("specs i-iv: {} {} {} {}", report.spec_i, report.spec_ii, report.spec_iii, report.spec_iv);

    let y = evaluator(|x: &BigRational| x * x);
    let dy = evaluator(|x: &BigRational| x * BigRational::from_integer(2.into()));
    let targets = vec![(parse_rational("1/2")?, parse_rational("1")?), (parse_rational("3")?, parse_rational("2")?)];
    let fixed = continuation_adjust(y, dy, &targets)?;
    for (a, b) in &targets {
        println!("y0({a}) = {} (target {b})", fixed.eval(a));
    }
    Ok(())
}
