//! Delivery UAV: battery, perception, actuation and task management, discretized
//! onto finite grids and closed by a feedback loop on the battery mass.

use serde::{Deserialize, Serialize};

use super::tracking::{chain, diagram, problem, r, tensor};
use crate::error::{Error, Result};
use crate::model::{CategoryExpr, Decl, DiagramExpr, LaxExpr, ModelDocument, ProblemExpr, QuantaleExpr};
use crate::quantale::{format_sig6, QValue};

pub const GRAVITY: f64 = 9.81;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActuatorSpec {
    pub name: String,
    pub weight_g: f64,
    pub cost: f64,
    pub max_velocity: f64,
    /// Watts.
    pub p0: f64,
    /// Watts per newton squared.
    pub p1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatterySpec {
    pub name: String,
    /// Wh/kg.
    pub energy_density: f64,
    /// Wh/$.
    pub power_per_cost: f64,
    pub cycles_per_maintenance: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub actuators: Vec<ActuatorSpec>,
    pub batteries: Vec<BatterySpec>,
}

/// The shipped parameter file.
pub const PARAMS_JSON: &str = include_str!("../../../../models/uav_params.json");

impl Parameters {
    pub fn from_json(text: &str) -> Result<Parameters> {
        let p: Parameters = serde_json::from_str(text).map_err(|e| Error::Model(format!("parameters: {e}")))?;
        p.check()?;
        Ok(p)
    }

    pub fn shipped() -> Parameters {
        Parameters::from_json(PARAMS_JSON).expect("shipped parameters parse")
    }

    fn check(&self) -> Result<()> {
        for a in &self.actuators {
            if [a.weight_g, a.cost, a.max_velocity, a.p0, a.p1].iter().any(|x| !(*x >= 0.0)) {
                return Err(Error::InvalidParameter(format!("actuator `{}` has a negative value", a.name)));
            }
        }
        for b in &self.batteries {
            if !(b.energy_density > 0.0 && b.power_per_cost > 0.0 && b.cycles_per_maintenance > 0) {
                return Err(Error::InvalidParameter(format!("battery `{}` needs positive values", b.name)));
            }
        }
        Ok(())
    }
}

/// Mission and discretization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UavTaskSpec {
    pub total_deliveries: u32,
    /// Meters, one way.
    pub max_distance: f64,
    /// Seconds between deliveries.
    pub period: f64,
    /// `M` in the unserved-delivery cost `M·√(unserved)`.
    pub unserved_cost_scale: f64,
    /// Frame mass carried in addition to payload, battery and actuator (fixture).
    pub frame_g: f64,
    /// Perception power `a + b·v` in watts (fixture).
    pub perception: (f64, f64),
    pub payload_grid: Vec<f64>,
    pub budget_grid: Vec<f64>,
    /// Deliveries served.
    pub deliveries_grid: Vec<u32>,
    pub velocity_grid: Vec<f64>,
    pub power_grid: Vec<f64>,
    pub energy_grid: Vec<f64>,
    /// Battery mass.
    pub weight_grid: Vec<f64>,
    /// Payload plus battery mass the actuators can lift.
    pub lift_grid: Vec<f64>,
    /// Money grid for the battery budget wire; battery cost is rounded up to it when set.
    pub battery_price_grid: Option<Vec<f64>>,
}

fn steps(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

fn geometric(lo: f64, hi: f64, ratio: f64) -> Vec<f64> {
    let mut out = vec![lo];
    while out.last().unwrap() * ratio <= hi {
        out.push(out.last().unwrap() * ratio);
    }
    out
}

impl Default for UavTaskSpec {
    /// Cost-model grids.
    fn default() -> Self {
        UavTaskSpec {
            total_deliveries: 1000,
            max_distance: 1000.0,
            period: 500.0,
            unserved_cost_scale: 2.0,
            frame_g: 250.0,
            perception: (2.0, 3.0),
            payload_grid: steps(100.0, 2900.0, 200.0),
            budget_grid: steps(0.0, 300.0, 25.0),
            deliveries_grid: (0..=20).map(|i| i * 50).collect(),
            velocity_grid: steps(0.5, 3.0, 0.5),
            power_grid: geometric(5.0, 5000.0, 1.2),
            energy_grid: geometric(1.0, 600.0, 1.25),
            weight_grid: steps(50.0, 2000.0, 50.0),
            lift_grid: steps(150.0, 3500.0, 50.0),
            battery_price_grid: None,
        }
    }
}

impl UavTaskSpec {
    /// Coarser grids shared by the powerset model and its cost-model cross-check.
    pub fn coarse() -> Self {
        UavTaskSpec {
            payload_grid: steps(100.0, 2900.0, 400.0),
            deliveries_grid: (0..=4).map(|i| i * 250).collect(),
            power_grid: geometric(5.0, 5000.0, 1.5),
            energy_grid: geometric(1.0, 600.0, 1.5),
            weight_grid: steps(100.0, 2000.0, 100.0),
            lift_grid: steps(200.0, 3500.0, 100.0),
            battery_price_grid: Some(steps(0.0, 150.0, 10.0)),
            ..UavTaskSpec::default()
        }
    }

    /// Required cruise speed: one delivery distance per period.
    pub fn required_velocity(&self) -> f64 {
        self.max_distance / self.period
    }

    /// Watts drawn by perception at speed `v`.
    pub fn perception_power(&self, v: f64) -> f64 {
        self.perception.0 + self.perception.1 * v
    }

    /// Wh for one round trip at speed `v` with actuation power `p`.
    pub fn flight_energy(&self, p: f64, v: f64) -> f64 {
        (p + self.perception_power(v)) * (2.0 * self.max_distance / v) / 3600.0
    }

    /// Watts actuator `a` needs to hover with `lift_g` grams of payload and battery.
    pub fn actuator_power(&self, a: &ActuatorSpec, lift_g: f64) -> f64 {
        let force = (lift_g + a.weight_g + self.frame_g) * GRAVITY / 1000.0;
        a.p0 + a.p1 * force * force
    }

    /// Purchase and maintenance cost of a battery with capacity `e` serving `k` deliveries.
    pub fn battery_cost(&self, b: &BatterySpec, e: f64, k: u32) -> f64 {
        let batteries = k.div_ceil(b.cycles_per_maintenance).max(1);
        e / b.power_per_cost * f64::from(batteries)
    }

    /// Battery cost as charged on the budget wire.
    pub fn charged_battery_cost(&self, b: &BatterySpec, e: f64, k: u32) -> f64 {
        let c = self.battery_cost(b, e, k);
        match &self.battery_price_grid {
            None => c,
            Some(g) => g.iter().copied().find(|x| *x >= c).unwrap_or(f64::INFINITY),
        }
    }

    pub fn battery_mass_g(&self, b: &BatterySpec, e: f64) -> f64 {
        e / b.energy_density * 1000.0
    }

    pub fn unserved_cost(&self, k: u32) -> f64 {
        self.unserved_cost_scale * f64::from(self.total_deliveries - k).sqrt()
    }

    fn check(&self) -> Result<()> {
        let grids: [(&str, &[f64]); 8] = [
            ("payload", &self.payload_grid),
            ("budget", &self.budget_grid),
            ("velocity", &self.velocity_grid),
            ("power", &self.power_grid),
            ("energy", &self.energy_grid),
            ("weight", &self.weight_grid),
            ("lift", &self.lift_grid),
            ("battery price", self.battery_price_grid.as_deref().unwrap_or(&[0.0])),
        ];
        for (name, g) in grids {
            if g.is_empty() || g.windows(2).any(|w| !(w[0] < w[1])) || g.iter().any(|x| !(*x >= 0.0)) {
                return Err(Error::InvalidParameter(format!("{name} grid must be non-empty, increasing and non-negative")));
            }
        }
        let ks = &self.deliveries_grid;
        if ks.is_empty() || ks.windows(2).any(|w| w[0] >= w[1]) || ks.iter().any(|k| *k > self.total_deliveries) {
            return Err(Error::InvalidParameter("deliveries grid must be increasing and within the total".into()));
        }
        if self.velocity_grid[0] <= 0.0 {
            return Err(Error::InvalidParameter("velocities must be positive".into()));
        }
        Ok(())
    }
}

pub fn payload_name(p: f64) -> String {
    format!("{}g", format_sig6(p))
}

fn grams(xs: &[f64]) -> Vec<String> {
    xs.iter().map(|x| payload_name(*x)).collect()
}

fn unit(xs: &[f64], u: &str) -> Vec<String> {
    xs.iter().map(|x| format!("{}{u}", format_sig6(*x))).collect()
}

/// Deliveries-served objects, fewest-served last: serving fewer is the larger resource.
fn deliveries(task: &UavTaskSpec) -> Vec<String> {
    task.deliveries_grid.iter().rev().map(|k| k.to_string()).collect()
}

fn discrete(name: &str, quantale: &str, objects: Vec<String>) -> Decl {
    Decl::Category {
        name: name.into(),
        quantale: quantale.into(),
        expr: CategoryExpr::Discrete(objects),
    }
}

fn lax(name: &str, source: &str, target: &str, kind: &str, params: Vec<f64>) -> Decl {
    Decl::Lax {
        name: name.into(),
        source: source.into(),
        target: target.into(),
        expr: LaxExpr::Builtin {
            kind: kind.into(),
            params,
        },
        unchecked: false,
    }
}

fn over(name: &str, source: &str, target: &str, q: &str, rows: Vec<Vec<QValue>>) -> Decl {
    Decl::Problem {
        name: name.into(),
        source: source.into(),
        target: target.into(),
        over: Some(q.into()),
        expr: ProblemExpr::Table(rows),
    }
}

fn hseries(d: DiagramExpr, e: DiagramExpr, p: &str, q: &str) -> DiagramExpr {
    DiagramExpr::HSeries(Box::new(d), Box::new(e), p.into(), q.into())
}

/// The Bool categories shared by both formulations, all named by grid value.
fn shared_categories(task: &UavTaskSpec, q: &str) -> Vec<Decl> {
    vec![
        chain("K", q, deliveries(task)),
        chain("Wb", q, grams(&task.weight_grid)),
        chain("En", q, unit(&task.energy_grid, "Wh")),
        chain("Pw", q, unit(&task.power_grid, "W")),
        discrete("V", q, unit(&task.velocity_grid, "m/s")),
        chain("L", q, grams(&task.lift_grid)),
        chain("Pay", q, grams(&task.payload_grid)),
        tensor("PwV", q, &["Pw", "V"]),
        tensor("LV", q, &["L", "V"]),
        tensor("PayWb", q, &["Pay", "Wb"]),
    ]
}

/// `pc(e, (P, v))`: the energy per charge covers one round trip.
fn perception_table(task: &UavTaskSpec) -> Vec<Vec<QValue>> {
    task.energy_grid
        .iter()
        .map(|&e| {
            let mut row = Vec::new();
            for &p in &task.power_grid {
                for &v in &task.velocity_grid {
                    row.push(QValue::Bool(task.flight_energy(p, v) <= e));
                }
            }
            row
        })
        .collect()
}

/// `tm((l, v), (p, m))`: lift covers payload and battery, and the speed meets the schedule.
fn task_table(task: &UavTaskSpec) -> Vec<Vec<QValue>> {
    let v_req = task.required_velocity();
    let mut rows = Vec::new();
    for &l in &task.lift_grid {
        for &v in &task.velocity_grid {
            let mut row = Vec::new();
            for &p in &task.payload_grid {
                for &m in &task.weight_grid {
                    row.push(QValue::Bool(p + m <= l && v >= v_req));
                }
            }
            rows.push(row);
        }
    }
    rows
}

/// Actuators able to fly `lift_g` at `v` on power `p`.
pub fn capable_actuators<'a>(
    task: &'a UavTaskSpec,
    actuators: &'a [ActuatorSpec],
    p: f64,
    v: f64,
    lift_g: f64,
) -> impl Iterator<Item = (usize, &'a ActuatorSpec)> + 'a {
    actuators
        .iter()
        .enumerate()
        .filter(move |(_, a)| a.max_velocity >= v && task.actuator_power(a, lift_g) <= p)
}

/// Cheapest capable actuator, by name and cost.
pub fn cheapest_actuator(task: &UavTaskSpec, actuators: &[ActuatorSpec], p: f64, v: f64, lift_g: f64) -> Option<(String, f64)> {
    capable_actuators(task, actuators, p, v, lift_g)
        .min_by(|a, b| a.1.cost.total_cmp(&b.1.cost))
        .map(|(_, a)| (a.name.clone(), a.cost))
}

/// `act((P, v), (l, v'))` as `cell(capable actuators)` when `v = v'`, else `none`.
fn actuation_rows(
    task: &UavTaskSpec,
    actuators: &[ActuatorSpec],
    budget: Option<f64>,
    cell: &dyn Fn(&mut dyn Iterator<Item = (usize, &ActuatorSpec)>) -> QValue,
    none: &QValue,
) -> Vec<Vec<QValue>> {
    let mut rows = Vec::new();
    for &p in &task.power_grid {
        for &v in &task.velocity_grid {
            let mut row = Vec::new();
            for &l in &task.lift_grid {
                for &v2 in &task.velocity_grid {
                    row.push(if v2 == v {
                        let mut it = capable_actuators(task, actuators, p, v, l)
                            .filter(|(_, a)| budget.is_none_or(|b| a.cost <= b));
                        cell(&mut it)
                    } else {
                        none.clone()
                    });
                }
            }
            rows.push(row);
        }
    }
    rows
}

fn params_ok(task: &UavTaskSpec, actuators: &[ActuatorSpec], batteries: &[BatterySpec]) -> Result<()> {
    task.check()?;
    Parameters {
        actuators: actuators.to_vec(),
        batteries: batteries.to_vec(),
    }
    .check()?;
    if actuators.is_empty() || batteries.is_empty() {
        return Err(Error::EmptyProduct);
    }
    Ok(())
}

fn loop_closes(doc: &ModelDocument, diagram: &str) -> Result<()> {
    let d = doc.evaluate(diagram)?;
    if d.values().iter().all(|v| d.quantale().is_bottom(v)) {
        return Err(Error::Model(format!(
            "grid too coarse to close the feedback loop on wire `Wb` of `{diagram}`: no battery mass is feasible"
        )));
    }
    Ok(())
}

/// Cost-valued formulation: `uav(⋆, payload)` is the cheapest design including
/// the unserved-delivery cost.
pub fn uav_cost_model(task: &UavTaskSpec, actuators: &[ActuatorSpec], batteries: &[BatterySpec]) -> Result<ModelDocument> {
    params_ok(task, actuators, batteries)?;
    let mut decls = vec![Decl::Quantale {
        name: "Cost".into(),
        expr: QuantaleExpr::Cost,
    }];
    decls.push(lax("b2c", "Bool", "Cost", "bool_to_unit", vec![]));
    decls.push(lax("idc", "Cost", "Cost", "identity", vec![]));
    decls.push(lax("unserved", "Nat", "Cost", "sqrt_cost", vec![task.unserved_cost_scale]));
    decls.extend(shared_categories(task, "Bool"));
    for d in shared_categories(task, "Cost") {
        if let Decl::Category { name, quantale, expr } = d {
            let expr = match expr {
                CategoryExpr::Tensor(fs) => CategoryExpr::Tensor(fs.iter().map(|f| format!("{f}_c")).collect()),
                e => e,
            };
            decls.push(Decl::Category {
                name: format!("{name}_c"),
                quantale,
                expr,
            });
        }
    }
    decls.push(tensor("KWb_c", "Cost", &["K_c", "Wb_c"]));
    decls.push(discrete("Star", "Nat", vec!["⋆".into()]));
    decls.push(chain("K_n", "Nat", deliveries(task)));

    let x0 = vec![task
        .deliveries_grid
        .iter()
        .rev()
        .map(|k| QValue::Nat(u64::from(task.total_deliveries - k)))
        .collect()];
    decls.push(Decl::Problem {
        name: "x0".into(),
        source: "Star".into(),
        target: "K_n".into(),
        over: None,
        expr: ProblemExpr::Table(x0),
    });

    let mut bat = Vec::new();
    for &k in task.deliveries_grid.iter().rev() {
        for &m in &task.weight_grid {
            bat.push(
                task.energy_grid
                    .iter()
                    .map(|&e| {
                        let c = batteries
                            .iter()
                            .filter(|b| task.battery_mass_g(b, e) <= m)
                            .map(|b| task.charged_battery_cost(b, e, k))
                            .fold(f64::INFINITY, f64::min);
                        QValue::Real(c)
                    })
                    .collect(),
            );
        }
    }
    decls.push(Decl::Problem {
        name: "battery".into(),
        source: "KWb_c".into(),
        target: "En_c".into(),
        over: None,
        expr: ProblemExpr::Table(bat),
    });
    decls.push(Decl::Problem {
        name: "perception".into(),
        source: "En".into(),
        target: "PwV".into(),
        over: None,
        expr: ProblemExpr::Table(perception_table(task)),
    });
    let act = actuation_rows(
        task,
        actuators,
        None,
        &|it| QValue::Real(it.map(|(_, a)| a.cost).fold(f64::INFINITY, f64::min)),
        &QValue::inf(),
    );
    decls.push(Decl::Problem {
        name: "actuation".into(),
        source: "PwV_c".into(),
        target: "LV_c".into(),
        over: None,
        expr: ProblemExpr::Table(act),
    });
    decls.push(Decl::Problem {
        name: "task".into(),
        source: "LV".into(),
        target: "PayWb".into(),
        over: None,
        expr: ProblemExpr::Table(task_table(task)),
    });
    decls.push(diagram("drive", hseries(r("actuation"), r("task"), "idc", "b2c")));
    decls.push(diagram("flight", hseries(r("perception"), r("drive"), "b2c", "idc")));
    decls.push(diagram("open", DiagramExpr::Series(vec![r("battery"), r("flight")])));
    decls.push(diagram("core", DiagramExpr::Trace(Box::new(r("open")), "Wb_c".into())));
    decls.push(diagram("uav", hseries(r("x0"), r("core"), "unserved", "idc")));
    decls.push(Decl::Sweep {
        name: "payload".into(),
        diagram: "uav".into(),
        rows: None,
        cols: None,
    });
    let doc = ModelDocument::from_decls(decls)?;
    loop_closes(&doc, "core")?;
    Ok(doc)
}

pub fn budget_name(b: f64) -> String {
    format!("${}", format_sig6(b))
}

fn money(xs: &[f64]) -> Vec<String> {
    xs.iter().map(|x| budget_name(*x)).collect()
}

/// Distinct actuator prices, the values carried on the actuator budget wire.
pub fn actuator_budgets(actuators: &[ActuatorSpec]) -> Vec<f64> {
    let mut g: Vec<f64> = actuators.iter().map(|a| a.cost).collect();
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

/// Powerset formulation over `P(I_a × I_b)`: `uav_p(budget, payload)` is the set of
/// (actuator, battery) pairs with a design within budget. Costs travel as budget wires.
pub fn uav_powerset_model(task: &UavTaskSpec, actuators: &[ActuatorSpec], batteries: &[BatterySpec]) -> Result<ModelDocument> {
    params_ok(task, actuators, batteries)?;
    let price_grid = task
        .battery_price_grid
        .clone()
        .ok_or_else(|| Error::InvalidParameter("the powerset model needs a battery price grid".into()))?;
    let ga = actuator_budgets(actuators);
    let an: Vec<String> = actuators.iter().map(|a| a.name.clone()).collect();
    let bn: Vec<String> = batteries.iter().map(|b| b.name.clone()).collect();
    let mut decls = vec![
        Decl::Quantale {
            name: "PA".into(),
            expr: QuantaleExpr::Powerset(an),
        },
        Decl::Quantale {
            name: "PB".into(),
            expr: QuantaleExpr::Powerset(bn),
        },
        Decl::Quantale {
            name: "PAB".into(),
            expr: QuantaleExpr::PowersetPairs("PA".into(), "PB".into()),
        },
        lax("ia", "PA", "PAB", "inject_left", vec![]),
        lax("ib", "PB", "PAB", "inject_right", vec![]),
        lax("b2p", "Bool", "PAB", "bool_to_unit", vec![]),
        lax("idp", "PAB", "PAB", "identity", vec![]),
    ];
    decls.extend(shared_categories(task, "Bool"));
    decls.push(chain("Budget", "Bool", money(&task.budget_grid)));
    decls.push(chain("Ga", "Bool", money(&ga)));
    decls.push(chain("Bb", "Bool", money(&price_grid)));
    decls.push(tensor("GaKBb", "Bool", &["Ga", "K", "Bb"]));
    decls.push(tensor("KBbWb", "Bool", &["K", "Bb", "Wb"]));
    decls.push(tensor("GaPwV", "Bool", &["Ga", "Pw", "V"]));
    decls.push(Decl::Category {
        name: "Wb_p".into(),
        quantale: "PAB".into(),
        expr: CategoryExpr::Push {
            category: "Wb".into(),
            map: "b2p".into(),
        },
    });

    let mut split = Vec::new();
    for &b in &task.budget_grid {
        let mut row = Vec::new();
        for &a in &ga {
            for &k in task.deliveries_grid.iter().rev() {
                for &bb in &price_grid {
                    row.push(QValue::Bool(a + bb + task.unserved_cost(k) <= b));
                }
            }
        }
        split.push(row);
    }
    decls.push(problem("split", "Budget", "GaKBb", split));

    let mut bat = Vec::new();
    for &k in task.deliveries_grid.iter().rev() {
        for &bb in &price_grid {
            for &m in &task.weight_grid {
                bat.push(
                    task.energy_grid
                        .iter()
                        .map(|&e| {
                            let mut bits = 0u64;
                            for (i, b) in batteries.iter().enumerate() {
                                if task.battery_mass_g(b, e) <= m && task.charged_battery_cost(b, e, k) <= bb {
                                    bits |= 1 << i;
                                }
                            }
                            QValue::Set(bits)
                        })
                        .collect(),
                );
            }
        }
    }
    decls.push(over("battery", "KBbWb", "En", "PB", bat));
    decls.push(Decl::Problem {
        name: "perception".into(),
        source: "En".into(),
        target: "PwV".into(),
        over: None,
        expr: ProblemExpr::Table(perception_table(task)),
    });
    let mut act = Vec::new();
    for &g in &ga {
        act.extend(actuation_rows(
            task,
            actuators,
            Some(g),
            &|it| QValue::Set(it.fold(0u64, |s, (i, _)| s | 1 << i)),
            &QValue::Set(0),
        ));
    }
    decls.push(over("actuation", "GaPwV", "LV", "PA", act));
    decls.push(Decl::Problem {
        name: "task".into(),
        source: "LV".into(),
        target: "PayWb".into(),
        over: None,
        expr: ProblemExpr::Table(task_table(task)),
    });

    let id = |c: &str| DiagramExpr::Identity(c.into());
    decls.push(diagram(
        "front",
        DiagramExpr::Parallel(vec![r("split"), id("Wb")]),
    ));
    decls.push(diagram(
        "storage",
        DiagramExpr::HParallel(Box::new(id("Ga")), Box::new(r("battery")), "b2p".into(), "ib".into()),
    ));
    decls.push(diagram(
        "sensing",
        DiagramExpr::Parallel(vec![id("Ga"), r("perception")]),
    ));
    decls.push(diagram("drive", hseries(r("actuation"), r("task"), "ia", "b2p")));
    decls.push(diagram("flight", hseries(r("sensing"), r("drive"), "b2p", "idp")));
    decls.push(diagram("tail", DiagramExpr::Series(vec![r("storage"), r("flight")])));
    decls.push(diagram("open", hseries(r("front"), r("tail"), "b2p", "idp")));
    decls.push(diagram("uav_p", DiagramExpr::Trace(Box::new(r("open")), "Wb_p".into())));
    decls.push(Decl::Sweep {
        name: "feasible".into(),
        diagram: "uav_p".into(),
        rows: None,
        cols: None,
    });
    let doc = ModelDocument::from_decls(decls)?;
    loop_closes(&doc, "uav_p")?;
    Ok(doc)
}

/// Cheapest cost per payload, from a cost-model document.
pub fn payload_costs(doc: &ModelDocument) -> Result<Vec<(String, f64)>> {
    let d = doc.evaluate("uav")?;
    Ok(d.target()
        .objects()
        .iter()
        .enumerate()
        .map(|(j, p)| (p.clone(), d.value(0, j).as_real().unwrap_or(f64::INFINITY)))
        .collect())
}

/// Per payload, the deliveries-served level minimizing component plus unserved cost,
/// found by scanning the loop-closed core.
pub fn best_deliveries(doc: &ModelDocument, task: &UavTaskSpec) -> Result<Vec<(String, Option<u32>, f64)>> {
    let core = doc.evaluate("core")?;
    let ks: Vec<u32> = task.deliveries_grid.iter().rev().copied().collect();
    Ok(core
        .target()
        .objects()
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let mut best = (None, f64::INFINITY);
            for (i, &k) in ks.iter().enumerate() {
                let c = core.value(i, j).as_real().unwrap() + task.unserved_cost(k);
                if c < best.1 {
                    best = (Some(k), c);
                }
            }
            (p.clone(), best.0, best.1)
        })
        .collect())
}

/// Pair names of a `P(I_a × I_b)` value, projected to the actuator and battery sides.
pub fn projections(actuators: &[ActuatorSpec], batteries: &[BatterySpec], set: u64) -> (Vec<String>, Vec<String>) {
    let nb = batteries.len();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (i, act) in actuators.iter().enumerate() {
        if (set >> (i * nb)) & ((1u64 << nb) - 1) != 0 {
            a.push(act.name.clone());
        }
    }
    for (j, bat) in batteries.iter().enumerate() {
        if (0..actuators.len()).any(|i| set >> (i * nb + j) & 1 == 1) {
            b.push(bat.name.clone());
        }
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_parameters() {
        let p = Parameters::shipped();
        assert_eq!(p.actuators.len(), 3);
        assert_eq!(p.batteries.len(), 8);
        assert_eq!(p.batteries[1].cycles_per_maintenance, 20000);
    }

    #[test]
    fn physics_fixtures() {
        let t = UavTaskSpec::default();
        assert_eq!(t.required_velocity(), 2.0);
        assert_eq!(t.unserved_cost(1000), 0.0);
        assert_eq!(t.unserved_cost(996), 4.0);
        let p = Parameters::shipped();
        let lipo = &p.batteries[6];
        assert_eq!(t.battery_cost(lipo, 25.0, 0), 10.0);
        assert_eq!(t.battery_cost(lipo, 25.0, 601), 20.0);
        let (name, cost) = cheapest_actuator(&t, &p.actuators, 100.0, 3.0, 200.0).unwrap();
        assert_eq!((name.as_str(), cost), ("a1", 50.0));
        assert!(cheapest_actuator(&t, &p.actuators, 5000.0, 3.5, 200.0).is_none());
    }
}
