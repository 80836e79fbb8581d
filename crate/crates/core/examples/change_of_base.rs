//! Lax maps between quantales: checking laxity, pushing categories forward,
//! and composing problems that live in different quantales.

use qodesign::lax::{classify_cost_to_bool, hetero_series, CheckPolicy};
use qodesign::quantale::{format_sig6, QValue, Quantale};
use qodesign::{DesignProblem, LaxMap, QCategory};

fn main() -> qodesign::Result<()> {
    let cost = Quantale::cost();
    let policy = CheckPolicy::default();
    for m in [
        LaxMap::cost_to_bool_finite(),
        LaxMap::cost_to_bool_zero(),
        LaxMap::constant_true(&cost),
        LaxMap::bool_to_unit(&cost),
        LaxMap::scale(2.0)?,
        LaxMap::sqrt_cost(2.0)?,
        LaxMap::threshold(5.0)?,
    ] {
        println!("{:<24} {}", m.rule_text(), m.check(&policy));
    }

    println!("\nlax Cost → Bool maps on {{0, 1, 5, inf}}:");
    let grid = [0.0, 1.0, 5.0, f64::INFINITY];
    for c in classify_cost_to_bool(&grid)? {
        let cells: Vec<String> = grid.iter().zip(&c.table).map(|(x, b)| format!("{}↦{b}", format_sig6(*x))).collect();
        println!("  {:?}: {}", c.class, cells.join(" "));
    }

    // Three objects with hom(a,b) = hom(b,c) = 3: the threshold map at 5 keeps
    // both steps feasible but not the 6-unit composite.
    let r = QValue::real;
    let w = QCategory::new(
        &cost,
        vec!["a".into(), "b".into(), "c".into()],
        vec![
            vec![r(0.0), r(3.0), r(6.0)],
            vec![QValue::inf(), r(0.0), r(3.0)],
            vec![QValue::inf(), QValue::inf(), r(0.0)],
        ],
    )?;
    let threshold = LaxMap::threshold(5.0)?;
    println!("\npush through unverified threshold: {}", threshold.push_category(&w).unwrap_err());
    println!("with override: {}", threshold.unsafe_override().push_category(&w).unwrap_err());

    // A feasibility check on quality followed by a cost-valued processor.
    let quality = QCategory::from_order(vec!["Low".into(), "High".into()], &[("Low".into(), "High".into())])?;
    let power = QCategory::from_order(vec!["5W".into(), "20W".into()], &[("5W".into(), "20W".into())])?;
    let t = QValue::Bool(true);
    let f = QValue::Bool(false);
    let sensor = DesignProblem::new(&power, &quality, vec![vec![t.clone(), f], vec![t.clone(), t]])?;
    let to_cost = LaxMap::bool_to_unit(&cost);
    let load = to_cost.push_category(&QCategory::from_order(vec!["1 tgt".into(), "2 tgts".into()], &[("1 tgt".into(), "2 tgts".into())])?)?;
    let processor = DesignProblem::new(
        &to_cost.push_category(&quality)?,
        &load,
        vec![vec![r(40.0), r(70.0)], vec![r(10.0), r(30.0)]],
    )?;
    let system = hetero_series(&sensor, &processor, &to_cost, &LaxMap::identity(&cost))?;
    println!("\nBool sensor ; Cost processor over {}:", system.quantale().id());
    for (p, row) in power.objects().iter().zip(system.rows()) {
        let cells: Vec<String> = row.iter().map(|v| cost.render_short(v)).collect();
        println!("  {p:>4}: {}", cells.join("  "));
    }
    Ok(())
}
