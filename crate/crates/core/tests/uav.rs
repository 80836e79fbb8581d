use qodesign::cases::uav::{self, ActuatorSpec, BatterySpec, Parameters, UavTaskSpec};

fn first_at_least(grid: &[f64], x: f64) -> Option<f64> {
    grid.iter().copied().find(|g| *g >= x)
}

/// Cheapest design for `payload` by direct enumeration, taking the smallest
/// grid point that covers each physical requirement.
fn brute_force(task: &UavTaskSpec, actuators: &[ActuatorSpec], batteries: &[BatterySpec], payload: f64) -> f64 {
    let mut best = f64::INFINITY;
    for &v in task.velocity_grid.iter().filter(|v| **v >= task.required_velocity()) {
        for &m in &task.weight_grid {
            let Some(lift) = first_at_least(&task.lift_grid, payload + m) else { continue };
            for a in actuators.iter().filter(|a| a.max_velocity >= v) {
                let Some(p) = first_at_least(&task.power_grid, task.actuator_power(a, lift)) else { continue };
                let Some(e) = first_at_least(&task.energy_grid, task.flight_energy(p, v)) else { continue };
                for &k in &task.deliveries_grid {
                    for b in batteries.iter().filter(|b| task.battery_mass_g(b, e) <= m) {
                        let c = task.charged_battery_cost(b, e, k) + a.cost + task.unserved_cost(k);
                        best = best.min(c);
                    }
                }
            }
        }
    }
    best
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-9 * a.abs().max(1.0)
}

#[test]
fn cost_model_matches_enumeration() {
    let p = Parameters::shipped();
    for task in [UavTaskSpec::default(), UavTaskSpec::coarse()] {
        let doc = uav::uav_cost_model(&task, &p.actuators, &p.batteries).unwrap();
        for ((name, got), &payload) in uav::payload_costs(&doc).unwrap().iter().zip(&task.payload_grid) {
            let want = brute_force(&task, &p.actuators, &p.batteries, payload);
            assert!(close(*got, want), "{name}: model {got}, enumeration {want}");
        }
    }
}

#[test]
fn chosen_deliveries_minimize_the_family() {
    let p = Parameters::shipped();
    let task = UavTaskSpec::default();
    let doc = uav::uav_cost_model(&task, &p.actuators, &p.batteries).unwrap();
    let core = doc.evaluate("core").unwrap();
    let totals = uav::payload_costs(&doc).unwrap();
    for (j, ((name, k, cost), (_, total))) in uav::best_deliveries(&doc, &task).unwrap().iter().zip(&totals).enumerate() {
        assert!(close(*cost, *total), "{name}");
        let scan: Vec<(u32, f64)> = core
            .source()
            .objects()
            .iter()
            .enumerate()
            .map(|(i, kname)| {
                let k: u32 = kname.parse().unwrap();
                (k, core.value(i, j).as_real().unwrap() + task.unserved_cost(k))
            })
            .collect();
        let min = scan.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
        match k {
            Some(k) => assert!(scan.iter().any(|s| s.0 == *k && s.1 == min), "{name}"),
            None => assert!(min.is_infinite(), "{name}"),
        }
    }
}

#[test]
fn light_payloads_are_feasible_and_heavy_ones_are_not() {
    let p = Parameters::shipped();
    let task = UavTaskSpec::default();
    let doc = uav::uav_cost_model(&task, &p.actuators, &p.batteries).unwrap();
    let costs = uav::payload_costs(&doc).unwrap();
    assert!(costs[0].1.is_finite());
    assert!(costs.last().unwrap().1.is_infinite());
}

#[test]
fn too_coarse_weight_grid_is_reported() {
    let p = Parameters::shipped();
    let task = UavTaskSpec {
        weight_grid: vec![1.0, 2.0],
        ..UavTaskSpec::coarse()
    };
    let err = uav::uav_cost_model(&task, &p.actuators, &p.batteries).unwrap_err();
    assert!(err.to_string().contains("grid too coarse"), "{err}");
}

#[test]
fn parameter_checks() {
    let p = Parameters::shipped();
    let bad = UavTaskSpec {
        velocity_grid: vec![0.0, 1.0],
        ..UavTaskSpec::coarse()
    };
    assert!(uav::uav_cost_model(&bad, &p.actuators, &p.batteries).is_err());
    assert!(uav::uav_cost_model(&UavTaskSpec::coarse(), &[], &p.batteries).is_err());
    assert!(uav::uav_powerset_model(&UavTaskSpec::default(), &p.actuators, &p.batteries).is_err());
}

#[test]
fn projections_split_pairs() {
    let p = Parameters::shipped();
    let nb = p.batteries.len();
    let set = 1u64 << (2 * nb + 3) | 1 << 1;
    let (a, b) = uav::projections(&p.actuators, &p.batteries, set);
    assert_eq!(a, vec![p.actuators[0].name.clone(), p.actuators[2].name.clone()]);
    assert_eq!(b, vec![p.batteries[1].name.clone(), p.batteries[3].name.clone()]);
}
