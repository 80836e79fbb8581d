//! Series, parallel and feedback composition of cost-valued design problems.

use qodesign::quantale::{QValue, Quantale};
use qodesign::{DesignProblem, QCategory};

fn print(name: &str, d: &DesignProblem) {
    let q = d.quantale();
    println!("{name}: {:?} -> {:?}", d.source().objects(), d.target().objects());
    for (r, row) in d.source().objects().iter().zip(d.rows()) {
        let cells: Vec<String> = row.iter().map(|v| format!("{:>5}", q.render_short(v))).collect();
        println!("  {r:>10} {}", cells.join(""));
    }
}

fn main() -> qodesign::Result<()> {
    let cost = Quantale::cost();
    let r = QValue::real;
    let inf = QValue::inf;
    let chain = |xs: &[&str]| {
        let objs: Vec<String> = xs.iter().map(|s| s.to_string()).collect();
        let pairs: Vec<(String, String)> = objs.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        let b = QCategory::from_order(objs, &pairs)?;
        qodesign::LaxMap::bool_to_unit(&cost).push_category(&b)
    };

    let power = chain(&["5W", "10W", "20W"])?;
    let quality = chain(&["Low", "High"])?;
    let load = chain(&["1 tgt", "2 tgts", "3 tgts"])?;
    let sensor = DesignProblem::new(
        &power,
        &quality,
        vec![vec![r(30.0), inf()], vec![r(20.0), r(50.0)], vec![r(10.0), r(30.0)]],
    )?;
    let processor = DesignProblem::new(
        &quality,
        &load,
        vec![vec![r(40.0), r(70.0), inf()], vec![r(10.0), r(30.0), r(50.0)]],
    )?;
    let tracking = DesignProblem::series(&sensor, &processor)?;
    print("series", &tracking);
    for (m, v) in DesignProblem::series_terms(&sensor, &processor, "10W", "2 tgts")? {
        println!("  10W -> 2 tgts via {m}: {}", cost.render_short(&v));
    }

    let both = DesignProblem::parallel(&sensor, &DesignProblem::identity(&quality))?;
    println!("parallel: {} x {} entries", both.source().len(), both.target().len());
    println!(
        "  ((10W,Low), (High,Low)) = {}",
        cost.render_short(&both.evaluate("(10W,Low)", "(High,Low)")?)
    );

    // A loop on the quality wire: the sensor may also take back the quality it
    // delivers, and a High input halves its cost. `closure` lifts the raw
    // table to the smallest design problem above it before tracing.
    let src = QCategory::tensor(&power, &quality)?;
    let tgt = QCategory::tensor(&load, &quality)?;
    let mut raw = Vec::new();
    for i in 0..src.len() {
        for j in 0..tgt.len() {
            let (p, qin) = (i / 2, i % 2);
            let (l, qout) = (j / 2, j % 2);
            let base = sensor.value(p, qout).as_real().unwrap() + processor.value(qout, l).as_real().unwrap();
            raw.push(r(if qin == 1 { base / 2.0 } else { base }));
        }
    }
    let open = qodesign::random::closure(&src, &tgt, &raw);
    print("trace", &DesignProblem::trace(&open, &quality)?);
    Ok(())
}
