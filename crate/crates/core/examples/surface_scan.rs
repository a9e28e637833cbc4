//! Scan the linear family between two curves, find the gaps, pick the
//! extremal path and write the distance plot.

use arithdyn::elliptic::WeierstrassCurve;
use arithdyn::modular::MetricConfig;
use arithdyn::surface::{distance_plot, precursor_report, scan, select_geodesic, FiberFamily, FiberStatus};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::var_os("ARITHDYN_OUT_DIR").map_or_else(std::env::temp_dir, Into::into);

    let e1: WeierstrassCurve = "[0,-1,1,0,0]".parse()?;
    let e2: WeierstrassCurve = "[0,-1,1,-11,0]".parse()?;
    // a wide window lets the path jump over the run of gaps at grid 11
    for (k, window) in [(8, 3), (11, 11)] {
        let fam = FiberFamily::uniform(e1.clone(), e2.clone(), k, None)?;
        let recs = scan(&fam, 30)?;
        let row: String = recs
            .iter()
            .map(|r| match r.status {
                FiberStatus::Appropriate => 'o',
                FiberStatus::Gap => '.',
            })
            .collect();
        let path = select_geodesic(&recs, &MetricConfig::new(30), window)?;
        let report = precursor_report(&path, 1.0, 3);
        println!(
            "grid {k:>2} at p = {}: {row}  path {:?}  collapses {}",
            fam.prime,
            path.steps,
            report.collapses.len()
        );
        let file = out.join(format!("distances-{k}.svg"));
        std::fs::write(&file, distance_plot(&recs, &path))?;
        println!("  plot: {}", file.display());
    }

    // y^2 = x^3 + (1 - 2t) degenerates at t = 1/2
    let g = FiberFamily::uniform("[0,0,0,0,1]".parse()?, "[0,0,0,0,-1]".parse()?, 6, Some(5))?;
    for r in scan(&g, 5)?.iter().filter(|r| r.singular) {
        println!("singular fiber at t = {}", r.t);
    }
    Ok(())
}
