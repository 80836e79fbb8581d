//! Which pairs of catalog parts realize a functionality: series composition
//! over the powerset of implementation pairs.

use qodesign::lax::{catalog_problem, implementation_series, Catalog};
use qodesign::quantale::Quantale;
use qodesign::QCategory;

fn chain(xs: &[&str]) -> qodesign::Result<QCategory> {
    let objs: Vec<String> = xs.iter().map(|s| s.to_string()).collect();
    let pairs: Vec<(String, String)> = objs.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    QCategory::from_order(objs, &pairs)
}

fn main() -> qodesign::Result<()> {
    let power = chain(&["5W", "10W", "20W"])?;
    let quality = chain(&["Low", "High"])?;
    let load = chain(&["1 tgt", "2 tgts", "3 tgts"])?;
    let sensors = Catalog::new(&[("cam", "5W", "Low"), ("lidar", "20W", "High"), ("radar", "10W", "High")]);
    let processors = Catalog::new(&[("mcu", "Low", "1 tgt"), ("gpu", "High", "3 tgts"), ("fpga", "Low", "2 tgts")]);

    let ps = Quantale::powerset("P(sensors)", sensors.parts.clone())?;
    let d = catalog_problem(&ps, &sensors, &power, &quality)?;
    println!("sensors able to deliver each quality:");
    for p in power.objects() {
        let row: Vec<String> = quality
            .objects()
            .iter()
            .map(|m| Ok(format!("{m}: {}", ps.render_short(&d.evaluate(p, m)?))))
            .collect::<qodesign::Result<_>>()?;
        println!("  {p:>4}  {}", row.join("   "));
    }

    let s = implementation_series(&sensors, &processors, &power, &quality, &load)?;
    let q = s.quantale().clone();
    println!("\n(sensor, processor) pairs:");
    for p in power.objects() {
        for f in load.objects() {
            println!("  {p:>4} {f:>6}  {}", q.render_short(&s.evaluate(p, f)?));
        }
    }
    Ok(())
}
