//! Both UAV formulations: cheapest design per payload, and which
//! (actuator, battery) pairs fit a budget.

use std::time::Instant;

use qodesign::cases::uav::{self, Parameters, UavTaskSpec};

fn main() -> qodesign::Result<()> {
    let params = Parameters::shipped();
    let task = UavTaskSpec::default();

    let t = Instant::now();
    let cost = uav::uav_cost_model(&task, &params.actuators, &params.batteries)?;
    println!("cost model built and closed in {:.2?}", t.elapsed());
    println!("{:>8}  {:>10}  {:>6}", "payload", "cost", "served");
    for (p, k, c) in uav::best_deliveries(&cost, &task)? {
        let k = k.map_or("-".to_string(), |k| k.to_string());
        println!("{p:>8}  {:>10}  {k:>6}", qodesign::quantale::format_sig6(c));
    }

    let coarse = UavTaskSpec::coarse();
    let t = Instant::now();
    let pset = uav::uav_powerset_model(&coarse, &params.actuators, &params.batteries)?;
    println!("\npowerset model built and closed in {:.2?}", t.elapsed());
    let d = pset.evaluate("uav_p")?;
    let budget = uav::budget_name(150.0);
    for p in d.target().objects() {
        let set = d.evaluate(&budget, p)?.as_set().unwrap();
        let (a, b) = uav::projections(&params.actuators, &params.batteries, set);
        println!("{budget} {p:>6}: actuators {a:?}, batteries {b:?}");
    }

    let coarse_cost = uav::uav_cost_model(&coarse, &params.actuators, &params.batteries)?;
    println!();
    for (doc, label) in [(&coarse_cost, "cost"), (&pset, "powerset")] {
        for s in doc.size_report()? {
            println!("{label:>8} {:>6}: max cut {:>5}, cuts {:?}, {:.2}s", s.diagram, s.max_cut, s.cuts, s.seconds);
        }
    }
    Ok(())
}
