//! Target tracking: a sensor feeding a processor through a data-quality interface.

use crate::error::Result;
use crate::model::{CategoryExpr, Decl, DiagramExpr, ModelDocument, ProblemExpr, QuantaleExpr};
use crate::quantale::QValue;

pub const POWERS: [&str; 3] = ["5W", "10W", "20W"];
pub const QUALITIES: [&str; 2] = ["Low", "High"];
pub const LOADS: [&str; 3] = ["1 tgt", "2 tgts", "3 tgts"];

/// Sensor cost by power (rows) and delivered quality (columns).
pub const SENSOR: [[f64; 2]; 3] = [[30.0, f64::INFINITY], [20.0, 50.0], [10.0, 30.0]];
/// Processor cost by input quality (rows) and target load (columns).
pub const PROCESSOR: [[f64; 3]; 2] = [[40.0, 70.0, f64::INFINITY], [10.0, 30.0, 50.0]];

/// Budget points of the uncurried model, in dollars.
pub const BUDGETS: [u32; 11] = [0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100];

pub(crate) fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

pub(crate) fn chain(name: &str, quantale: &str, objects: Vec<String>) -> Decl {
    Decl::Category {
        name: name.into(),
        quantale: quantale.into(),
        expr: CategoryExpr::Chain(objects),
    }
}

pub(crate) fn tensor(name: &str, quantale: &str, factors: &[&str]) -> Decl {
    Decl::Category {
        name: name.into(),
        quantale: quantale.into(),
        expr: CategoryExpr::Tensor(strings(factors)),
    }
}

pub(crate) fn problem(name: &str, source: &str, target: &str, rows: Vec<Vec<QValue>>) -> Decl {
    Decl::Problem {
        name: name.into(),
        source: source.into(),
        target: target.into(),
        over: None,
        expr: ProblemExpr::Table(rows),
    }
}

pub(crate) fn diagram(name: &str, expr: DiagramExpr) -> Decl {
    Decl::Diagram {
        name: name.into(),
        expr,
    }
}

pub(crate) fn r(name: &str) -> DiagramExpr {
    DiagramExpr::Ref(name.into())
}

fn reals<const N: usize>(rows: &[[f64; N]]) -> Vec<Vec<QValue>> {
    rows.iter().map(|row| row.iter().map(|x| QValue::Real(*x)).collect()).collect()
}

/// The composite cost matrix computed by hand: min over the two qualities.
pub fn expected_composite() -> [[f64; 3]; 3] {
    let mut out = [[f64::INFINITY; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            for k in 0..2 {
                *cell = cell.min(SENSOR[i][k] + PROCESSOR[k][j]);
            }
        }
    }
    out
}

/// Cost-valued model: `tracking = series(d_sensor, d_proc)`.
pub fn tracking_model() -> Result<ModelDocument> {
    ModelDocument::from_decls([
        Decl::Quantale {
            name: "Cost".into(),
            expr: QuantaleExpr::Cost,
        },
        chain("P", "Cost", strings(&POWERS)),
        chain("M", "Cost", strings(&QUALITIES)),
        chain("F", "Cost", strings(&LOADS)),
        problem("d_sensor", "P", "M", reals(&SENSOR)),
        problem("d_proc", "M", "F", reals(&PROCESSOR)),
        diagram("tracking", DiagramExpr::Series(vec![r("d_sensor"), r("d_proc")])),
        Decl::Query {
            diagram: "tracking".into(),
            resource: "10W".into(),
            functionality: "2 tgts".into(),
        },
        Decl::Sweep {
            name: "composite".into(),
            diagram: "tracking".into(),
            rows: None,
            cols: None,
        },
    ])
}

pub fn budget_name(b: u32) -> String {
    format!("${b}")
}

/// Name of an uncurried resource `(power, budget)`.
pub fn resource_name(power: &str, budget: u32) -> String {
    format!("({power},{})", budget_name(budget))
}

/// Bool model with the cost wires made explicit: the sensor takes power and a
/// budget and passes the remaining budget `b'` along with the quality.
pub fn tracking_bool_model() -> Result<ModelDocument> {
    let budgets: Vec<String> = BUDGETS.iter().map(|b| budget_name(*b)).collect();
    let mut sensor = Vec::new();
    for row in &SENSOR {
        for &b in &BUDGETS {
            let mut line = Vec::new();
            for cost in row {
                for &rest in &BUDGETS {
                    line.push(QValue::Bool(cost + f64::from(rest) <= f64::from(b)));
                }
            }
            sensor.push(line);
        }
    }
    let mut proc = Vec::new();
    for row in &PROCESSOR {
        for &rest in &BUDGETS {
            proc.push(row.iter().map(|c| QValue::Bool(*c <= f64::from(rest))).collect());
        }
    }
    ModelDocument::from_decls([
        chain("P", "Bool", strings(&POWERS)),
        chain("B", "Bool", budgets.clone()),
        chain("M", "Bool", strings(&QUALITIES)),
        chain("B'", "Bool", budgets),
        chain("F", "Bool", strings(&LOADS)),
        tensor("PB", "Bool", &["P", "B"]),
        tensor("MB'", "Bool", &["M", "B'"]),
        problem("sensor_u", "PB", "MB'", sensor),
        problem("proc_u", "MB'", "F", proc),
        diagram("tracking_u", DiagramExpr::Series(vec![r("sensor_u"), r("proc_u")])),
    ])
}

/// Minimal `(power, budget)` pairs per target load, from the uncurried model.
pub fn pareto_fronts(doc: &ModelDocument) -> Result<Vec<(String, Vec<String>)>> {
    let d = doc.evaluate("tracking_u")?;
    LOADS
        .iter()
        .map(|f| Ok((f.to_string(), d.pareto_front(f)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composite_matches_hand_computation() {
        let doc = tracking_model().unwrap();
        let d = doc.evaluate("tracking").unwrap();
        let want = expected_composite();
        for (i, p) in POWERS.iter().enumerate() {
            for (j, f) in LOADS.iter().enumerate() {
                let got = d.evaluate(p, f).unwrap().as_real().unwrap();
                assert!(got == want[i][j] || (got - want[i][j]).abs() < 1e-9, "{p} {f}");
            }
        }
    }

    #[test]
    fn bool_model_agrees_with_cost_model() {
        let cost = tracking_model().unwrap().evaluate("tracking").unwrap();
        let b = tracking_bool_model().unwrap().evaluate("tracking_u").unwrap();
        for p in POWERS {
            for &budget in &BUDGETS {
                for f in LOADS {
                    let c = cost.evaluate(p, f).unwrap().as_real().unwrap();
                    let feasible = b.evaluate(&resource_name(p, budget), f).unwrap();
                    assert_eq!(feasible, QValue::Bool(c <= f64::from(budget)), "{p} {budget} {f}");
                }
            }
        }
    }
}
