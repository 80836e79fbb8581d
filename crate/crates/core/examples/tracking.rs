//! Target tracking: a sensor and a processor joined by a data-quality wire,
//! once with costs and once with the budget carried as a resource.

use qodesign::cases::tracking::{self, LOADS};

fn main() -> qodesign::Result<()> {
    let doc = tracking::tracking_model()?;
    print!("{}", doc.run_sweep("composite")?.to_text());

    let t = doc.explain_query("tracking", "10W", "2 tgts")?;
    for (m, v) in t.terms.unwrap_or_default() {
        println!("10W, 2 tgts via {m}: {}", v.as_real().unwrap());
    }
    println!("10W, 2 tgts: {}", t.value.as_real().unwrap());

    let bool_doc = tracking::tracking_bool_model()?;
    println!("\nminimal (power, budget) per load:");
    for (f, front) in tracking::pareto_fronts(&bool_doc)? {
        println!("  {f:>6}: {}", front.join(" "));
    }

    let d = bool_doc.evaluate("tracking_u")?;
    let r = tracking::resource_name("10W", 80);
    for f in LOADS {
        println!("{r} covers {f}: {}", d.evaluate(&r, f)?.as_bool().unwrap());
    }
    Ok(())
}
