//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Run with `cargo test --test acceptance`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qodesign::cases::tracking::{self, LOADS, POWERS};
use qodesign::cases::uav::{self, Parameters, UavTaskSpec};
use qodesign::lax::{
    classify_cost_to_bool, hetero_parallel, hetero_series, hetero_trace, implementation_series, Catalog, CheckPolicy,
    CostBoolClass,
};
use qodesign::profunctor::{bimodule_direct, bimodule_via_hom};
use qodesign::quantale::{QValue, Quantale, TNorm};
use qodesign::{random, DesignProblem, Error, LaxMap, QCategory};

/// Absolute tolerance on finite reals.
const TOL: f64 = 1e-9;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s(e: Error) -> String {
    e.to_string()
}

fn report(n: usize, title: &str, limit: Option<Duration>, run: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let out = run();
    let dt = t.elapsed();
    let (ok, detail) = match out {
        Ok(d) => match limit {
            Some(l) if dt > l => (false, format!("{d}; over the {:.0?} limit", l)),
            _ => (true, d),
        },
        Err(d) => (false, d),
    };
    println!(
        "criterion {n:>2}  {}  {title}  [{:.2}s]  {detail}",
        if ok { "PASS" } else { "FAIL" },
        dt.as_secs_f64()
    );
    ok
}

fn chain_names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn families() -> Vec<Quantale> {
    vec![
        Quantale::bool(),
        Quantale::cost(),
        Quantale::fuzz(TNorm::Godel),
        Quantale::fuzz(TNorm::Goguen),
        Quantale::fuzz(TNorm::Lukasiewicz),
        Quantale::pace(),
        Quantale::powerset("P5", chain_names(&["i1", "i2", "i3", "i4", "i5"])).unwrap(),
    ]
}

fn c1() -> Outcome {
    let d = tracking::tracking_model().map_err(e2s)?.evaluate("tracking").map_err(e2s)?;
    let want = [[70.0, 100.0, f64::INFINITY], [60.0, 80.0, 100.0], [40.0, 60.0, 80.0]];
    for (i, p) in POWERS.iter().enumerate() {
        for (j, f) in LOADS.iter().enumerate() {
            let got = d.evaluate(p, f).map_err(e2s)?.as_real().unwrap();
            let w = want[i][j];
            let ok = if w.is_infinite() { got.is_infinite() } else { (got - w).abs() <= TOL };
            check(ok, || format!("({p}, {f}) = {got}, expected {w}"))?;
        }
    }
    Ok("9 cells match".into())
}

fn c2() -> Outcome {
    let doc = tracking::tracking_bool_model().map_err(e2s)?;
    let want: [&[(&str, u32)]; 3] = [
        &[("5W", 70), ("10W", 60), ("20W", 40)],
        &[("5W", 100), ("10W", 80), ("20W", 60)],
        &[("10W", 100), ("20W", 80)],
    ];
    for ((f, front), w) in tracking::pareto_fronts(&doc).map_err(e2s)?.into_iter().zip(want) {
        let got: BTreeSet<String> = front.into_iter().collect();
        let exp: BTreeSet<String> = w.iter().map(|(p, b)| tracking::resource_name(p, *b)).collect();
        check(got == exp, || format!("{f}: got {got:?}, expected {exp:?}"))?;
    }
    Ok("three antichains match".into())
}

fn c3() -> Outcome {
    let doc = tracking::tracking_model().map_err(e2s)?;
    let v = doc.run_query("tracking", "10W", "2 tgts").map_err(e2s)?;
    check(v == QValue::Real(80.0), || format!("query gave {v:?}"))?;
    let t = doc.explain_query("tracking", "10W", "2 tgts").map_err(e2s)?;
    let terms = t.terms.ok_or("no verbose terms")?;
    let want = vec![("Low".to_string(), QValue::Real(90.0)), ("High".to_string(), QValue::Real(80.0))];
    check(terms == want, || format!("terms {terms:?}"))?;
    Ok("min{90, 80} = 80".into())
}

fn c4() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let mut checked = 0;
    for q in families() {
        for i in 0..500 {
            let cat = |rng: &mut StdRng| {
                let n = rng.gen_range(1..=5);
                random::category(&q, n, rng)
            };
            let (r, m, f, l) = (cat(&mut rng), cat(&mut rng), cat(&mut rng), cat(&mut rng));
            let d = random::problem(&r, &m, &mut rng);
            let e = random::problem(&m, &f, &mut rng);
            let s = DesignProblem::series(&d, &e).map_err(e2s)?;
            let p = DesignProblem::parallel(&d, &e).map_err(e2s)?;
            let open = random::problem(&r.tensor(&l).map_err(e2s)?, &f.tensor(&l).map_err(e2s)?, &mut rng);
            let t = DesignProblem::trace(&open, &l).map_err(e2s)?;
            for (name, x) in [("series", &s), ("parallel", &p), ("trace", &t)] {
                bimodule_direct(x.source(), x.target(), x.values())
                    .map_err(|err| format!("{} instance {i}: {name}: {err}", q.id()))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} outputs over 7 families, 0 failures"))
}

/// Lax maps into a common evaluation quantale, with their source quantales.
fn hetero_fixtures() -> Vec<(&'static str, Vec<LaxMap>)> {
    let cost = Quantale::cost();
    let pi = Quantale::powerset("PI", chain_names(&["i1", "i2", "i3"])).unwrap();
    let pj = Quantale::powerset("PJ", chain_names(&["j1", "j2"])).unwrap();
    let pij = Quantale::powerset_pairs("PIJ", &pi, &pj).unwrap();
    vec![
        (
            "Bool",
            vec![LaxMap::cost_to_bool_finite(), LaxMap::cost_to_bool_zero(), LaxMap::identity(&Quantale::bool())],
        ),
        (
            "Cost",
            vec![
                LaxMap::bool_to_unit(&cost),
                LaxMap::scale(2.5).unwrap(),
                LaxMap::sqrt_cost(2.0).unwrap(),
                LaxMap::identity(&cost),
            ],
        ),
        (
            "PIJ",
            vec![
                LaxMap::inject_left(&pij).unwrap(),
                LaxMap::inject_right(&pij).unwrap(),
                LaxMap::bool_to_unit(&pij),
            ],
        ),
    ]
}

fn c5() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let fixtures = hetero_fixtures();
    let mut kinds = [0usize; 3];
    for i in 0..300 {
        let (_, maps) = &fixtures[rng.gen_range(0..fixtures.len())];
        let pd = &maps[rng.gen_range(0..maps.len())];
        let pe = &maps[rng.gen_range(0..maps.len())];
        let (qd, qe) = (pd.source().clone(), pe.source().clone());
        let mut size = || rng.gen_range(1..=3);
        let (nr, nm, nf) = (size(), size(), size());
        let kind = i % 3;
        let out = match kind {
            0 => {
                let d = random::problem(&random::category(&qd, nr, &mut rng), &random::category(&qd, nm, &mut rng), &mut rng);
                let e = random::problem(&random::category(&qe, nm, &mut rng), &random::category(&qe, nf, &mut rng), &mut rng);
                hetero_series(&d, &e, pd, pe)
            }
            1 => {
                let d = random::problem(&random::category(&qd, nr, &mut rng), &random::category(&qd, nm, &mut rng), &mut rng);
                let e = random::problem(&random::category(&qe, nm, &mut rng), &random::category(&qe, nf, &mut rng), &mut rng);
                hetero_parallel(&d, &e, pd, pe)
            }
            _ => {
                let m = random::category(&qd, nm, &mut rng);
                let r = random::category(&qd, nr, &mut rng).tensor(&m).map_err(e2s)?;
                let f = random::category(&qd, nf, &mut rng).tensor(&m).map_err(e2s)?;
                hetero_trace(&random::problem(&r, &f, &mut rng), &m, pd)
            }
        }
        .map_err(|e| format!("composition {i} ({} / {}): {e}", pd.rule_text(), pe.rule_text()))?;
        bimodule_direct(out.source(), out.target(), out.values())
            .map_err(|e| format!("composition {i} ({} / {}): {e}", pd.rule_text(), pe.rule_text()))?;
        kinds[kind] += 1;
    }
    Ok(format!("{} series, {} parallel, {} trace, all valid", kinds[0], kinds[1], kinds[2]))
}

fn c6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let finite = vec![
        Quantale::bool(),
        Quantale::pace(),
        Quantale::powerset("P3", chain_names(&["a", "b", "c"])).unwrap(),
        Quantale::chain("L4", chain_names(&["l0", "l1", "l2", "l3"])).unwrap(),
        Quantale::product("Bool×Pace", vec![Quantale::bool(), Quantale::pace()]).unwrap(),
    ];
    let (mut valid, mut invalid) = (0, 0);
    for q in &finite {
        for i in 0..200 {
            let (n, m) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let r = random::category(q, n, &mut rng);
            let f = random::category(q, m, &mut rng);
            let mut values = random::problem(&r, &f, &mut rng).values().to_vec();
            if i % 2 == 1 {
                let k = rng.gen_range(0..values.len());
                values[k] = q.random_value(&mut rng);
            }
            let direct = bimodule_direct(&r, &f, &values).is_ok();
            let via = bimodule_via_hom(&r, &f, &values).is_ok();
            check(direct == via, || format!("{} instance {i}: direct {direct}, via hom {via}", q.id()))?;
            if direct {
                valid += 1;
            } else {
                invalid += 1;
            }
        }
    }
    check(invalid > 0, || "no invalid instance was generated".into())?;
    Ok(format!("{} instances ({valid} valid, {invalid} invalid), 0 disagreements", valid + invalid))
}

fn c7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut grids = 0;
    for n in 2..=8usize {
        let mut cases = vec![(0..n - 1).map(|i| i as f64).chain([f64::INFINITY]).collect::<Vec<f64>>()];
        for _ in 0..20 {
            let mut pts: BTreeSet<u32> = BTreeSet::new();
            while pts.len() < n - 2 {
                pts.insert(rng.gen_range(1..200));
            }
            let mut g = vec![0.0];
            g.extend(pts.iter().map(|p| f64::from(*p) * 0.25));
            g.push(f64::INFINITY);
            cases.push(g);
        }
        for g in cases {
            let maps = classify_cost_to_bool(&g).map_err(e2s)?;
            let classes: Vec<CostBoolClass> = maps.iter().map(|m| m.class).collect();
            check(
                classes == [CostBoolClass::FiniteFeasible, CostBoolClass::OnlyZero, CostBoolClass::AllFeasible],
                || format!("grid {g:?}: classes {classes:?}"),
            )?;
            let expect: [Vec<bool>; 3] = [
                g.iter().map(|x| x.is_finite()).collect(),
                g.iter().map(|x| *x == 0.0).collect(),
                vec![true; g.len()],
            ];
            for (m, e) in maps.iter().zip(&expect) {
                check(&m.table == e, || format!("grid {g:?}: {:?} table {:?}", m.class, m.table))?;
            }
            grids += 1;
        }
    }
    Ok(format!("{grids} grids of 2 to 8 points, 3 maps each"))
}

fn c8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let cost = Quantale::cost();
    let pi = Quantale::powerset("PI", chain_names(&["i1", "i2"])).unwrap();
    let pj = Quantale::powerset("PJ", chain_names(&["j1", "j2", "j3"])).unwrap();
    let pij = Quantale::powerset_pairs("PIJ", &pi, &pj).unwrap();
    let fixtures = vec![
        LaxMap::cost_to_bool_finite(),
        LaxMap::cost_to_bool_zero(),
        LaxMap::constant_true(&cost),
        LaxMap::bool_to_unit(&cost),
        LaxMap::bool_to_unit(&pij),
        LaxMap::scale(2.5).unwrap(),
        LaxMap::sqrt_cost(2.0).unwrap(),
        LaxMap::inject_left(&pij).unwrap(),
        LaxMap::inject_right(&pij).unwrap(),
        LaxMap::identity(&Quantale::fuzz(TNorm::Goguen)),
    ];
    let policy = CheckPolicy::default();
    for m in &fixtures {
        let v = m.check(&policy).verdict;
        check(v.is_lax(), || format!("{} is not verified lax: {v:?}", m.rule_text()))?;
        for i in 0..200 {
            let n = rng.gen_range(1..=5);
            let c = random::category(m.source(), n, &mut rng);
            let pushed = m.push_category(&c).map_err(|e| format!("{} category {i}: {e}", m.rule_text()))?;
            pushed.validate().map_err(|e| format!("{} category {i}: {e}", m.rule_text()))?;
        }
    }
    let r = QValue::Real;
    let bot = QValue::inf();
    let w = QCategory::new(
        &cost,
        chain_names(&["a", "b", "c"]),
        vec![vec![r(0.0), r(3.0), r(6.0)], vec![bot.clone(), r(0.0), r(3.0)], vec![bot.clone(), bot, r(0.0)]],
    )
    .map_err(e2s)?;
    let err = LaxMap::threshold(5.0).map_err(e2s)?.unsafe_override().push_category(&w);
    let hit = matches!(
        &err,
        Err(Error::OverrideFailure { cause, .. }) if **cause == Error::CompositionAxiom("a".into(), "b".into(), "c".into())
    );
    check(hit, || format!("threshold pushforward of W gave {err:?}"))?;
    Ok(format!("{} fixtures x 200 categories valid; threshold(5) fails on W at (a, b, c)", fixtures.len()))
}

fn c9() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let mut pairs = 0usize;
    for c in 0..100 {
        let (nr, nm, nf) = (rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(1..=4));
        let (r, m, f) = (random::order(nr, &mut rng), random::order(nm, &mut rng), random::order(nf, &mut rng));
        let (ni, nj) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let ci: Vec<(String, usize, usize)> =
            (0..ni).map(|i| (format!("i{i}"), rng.gen_range(0..nr), rng.gen_range(0..nm))).collect();
        let cj: Vec<(String, usize, usize)> =
            (0..nj).map(|j| (format!("j{j}"), rng.gen_range(0..nm), rng.gen_range(0..nf))).collect();
        let cat = |entries: &[(String, usize, usize)], a: &QCategory, b: &QCategory| Catalog {
            parts: entries.iter().map(|e| e.0.clone()).collect(),
            req: entries.iter().map(|e| a.objects()[e.1].clone()).collect(),
            prov: entries.iter().map(|e| b.objects()[e.2].clone()).collect(),
        };
        let s = implementation_series(&cat(&ci, &r, &m), &cat(&cj, &m, &f), &r, &m, &f).map_err(e2s)?;
        let t = QValue::Bool(true);
        for ro in 0..nr {
            for fo in 0..nf {
                let mut want = 0u64;
                for (i, (_, req_i, prov_i)) in ci.iter().enumerate() {
                    for (j, (_, req_j, prov_j)) in cj.iter().enumerate() {
                        let through = (0..nm).any(|mo| *m.hom(mo, *prov_i) == t && *m.hom(*req_j, mo) == t);
                        if through && *r.hom(*req_i, ro) == t && *f.hom(fo, *prov_j) == t {
                            want |= 1 << (i * nj + j);
                        }
                    }
                }
                let got = s.value(ro, fo).as_set().unwrap();
                check(got == want, || format!("catalog {c}, r={ro}, f={fo}: got {got:#b}, expected {want:#b}"))?;
                pairs += want.count_ones() as usize;
            }
        }
    }
    Ok(format!("100 catalogs agree ({pairs} feasible pairs in total)"))
}

fn c10() -> Outcome {
    let mut rng = StdRng::seed_from_u64(10);
    let t = QValue::Bool(true);
    for i in 0..200 {
        let mut size = || rng.gen_range(1..=5);
        let (nr, nm, nf) = (size(), size(), size());
        let (r, m, f) = (random::order(nr, &mut rng), random::order(nm, &mut rng), random::order(nf, &mut rng));
        let d = random::problem(&r, &m, &mut rng);
        let e = random::problem(&m, &f, &mut rng);
        let s = DesignProblem::series(&d, &e).map_err(e2s)?;
        let open = random::problem(&r.tensor(&m).map_err(e2s)?, &f.tensor(&m).map_err(e2s)?, &mut rng);
        let tr = DesignProblem::trace(&open, &m).map_err(e2s)?;
        for a in 0..nr {
            for b in 0..nf {
                let reach = (0..nm).any(|k| *d.value(a, k) == t && *e.value(k, b) == t);
                check(*s.value(a, b) == QValue::Bool(reach), || format!("instance {i}: series at ({a}, {b})"))?;
                let diag = (0..nm).any(|k| *open.value(a * nm + k, b * nm + k) == t);
                let ordered = (0..nm)
                    .any(|k1| (0..nm).any(|k2| *m.hom(k1, k2) == t && *open.value(a * nm + k1, b * nm + k2) == t));
                check(diag == ordered, || format!("instance {i}: diagonal and ordered loop formulas differ"))?;
                check(*tr.value(a, b) == QValue::Bool(diag), || format!("instance {i}: trace at ({a}, {b})"))?;
            }
        }
    }
    Ok("200 instances, 0 disagreements".into())
}

fn c11() -> Outcome {
    let params = Parameters::shipped();
    let (acts, bats) = (&params.actuators, &params.batteries);

    let fine = UavTaskSpec::default();
    let costs = uav::payload_costs(&uav::uav_cost_model(&fine, acts, bats).map_err(e2s)?).map_err(e2s)?;
    for w in costs.windows(2) {
        check(w[0].1 <= w[1].1 + TOL, || format!("cost of {} ({}) exceeds cost of {} ({})", w[0].0, w[0].1, w[1].0, w[1].1))?;
    }

    let coarse = UavTaskSpec::coarse();
    let pdoc = uav::uav_powerset_model(&coarse, acts, bats).map_err(e2s)?;
    let pset = pdoc.evaluate("uav_p").map_err(e2s)?;
    let (nb, np) = (coarse.budget_grid.len(), coarse.payload_grid.len());
    let set = |b: usize, p: usize| pset.value(b, p).as_set().unwrap();
    for p in 0..np {
        for b in 1..nb {
            check(set(b - 1, p) & !set(b, p) == 0, || format!("budget step {b} at payload {p} removes a pair"))?;
        }
    }
    for b in 0..nb {
        for p in 1..np {
            check(set(b, p) & !set(b, p - 1) == 0, || format!("payload step {p} at budget {b} adds a pair"))?;
        }
    }

    let mut points = 0;
    let mut members = 0;
    for (ia, a) in acts.iter().enumerate() {
        for (ib, bat) in bats.iter().enumerate() {
            let only = uav::uav_cost_model(&coarse, std::slice::from_ref(a), std::slice::from_ref(bat));
            let values: Vec<f64> = match only {
                Ok(doc) => uav::payload_costs(&doc).map_err(e2s)?.into_iter().map(|c| c.1).collect(),
                Err(Error::Model(m)) if m.contains("grid too coarse") => vec![f64::INFINITY; np],
                Err(e) => return Err(e.to_string()),
            };
            let bit = 1u64 << (ia * bats.len() + ib);
            for (bi, &budget) in coarse.budget_grid.iter().enumerate() {
                for (pi, &c) in values.iter().enumerate() {
                    let in_set = set(bi, pi) & bit != 0;
                    check(in_set == (c <= budget + TOL), || {
                        format!("({}, {}) at ${budget}, payload {pi}: powerset {in_set}, cost {c}", a.name, bat.name)
                    })?;
                    points += 1;
                    members += usize::from(in_set);
                }
            }
        }
    }

    let cdoc = uav::uav_cost_model(&coarse, acts, bats).map_err(e2s)?;
    let width = |doc: &qodesign::ModelDocument| -> Result<usize, String> {
        Ok(doc.size_report().map_err(e2s)?.iter().map(|s| s.max_cut).max().unwrap_or(0))
    };
    let (wc, wp) = (width(&cdoc)?, width(&pdoc)?);
    check(wp > wc, || format!("powerset cut width {wp} is not above cost cut width {wc}"))?;
    Ok(format!(
        "{} payloads antitone; {points} oracle points ({members} members); cut width {wp} vs {wc}",
        costs.len()
    ))
}

fn adjunction(q: &Quantale, p: &QValue, x: &QValue, y: &QValue) -> Result<bool, String> {
    let h = q.internal_hom(x, y).map_err(e2s)?;
    Ok(q.leq(&q.mult(p, x), y) == q.leq(p, &h))
}

fn c12() -> Outcome {
    let mut exhaustive = 0usize;
    let mut finite = vec![Quantale::bool(), Quantale::pace()];
    for n in 1..=4 {
        let base: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        finite.push(Quantale::powerset(format!("P{n}"), base).map_err(e2s)?);
    }
    for q in &finite {
        let es = q.elements().ok_or("finite carrier not enumerable")?;
        for p in &es {
            for x in &es {
                for y in &es {
                    check(adjunction(q, p, x, y)?, || {
                        format!("{}: p={}, x={}, y={}", q.id(), q.render_value(p), q.render_value(x), q.render_value(y))
                    })?;
                    exhaustive += 1;
                }
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(12);
    let cost_grid: Vec<QValue> = (0..=80)
        .map(|i| QValue::Real(f64::from(i) * 0.25))
        .chain(Quantale::cost().grid())
        .collect();
    let unit_grid: Vec<QValue> = (0..=20)
        .map(|i| QValue::Real(f64::from(i) / 20.0))
        .chain(Quantale::fuzz(TNorm::Godel).grid())
        .collect();
    let sampled = [
        (Quantale::cost(), &cost_grid),
        (Quantale::fuzz(TNorm::Godel), &unit_grid),
        (Quantale::fuzz(TNorm::Goguen), &unit_grid),
        (Quantale::fuzz(TNorm::Lukasiewicz), &unit_grid),
    ];
    for (q, grid) in sampled {
        for _ in 0..10_000 {
            let mut pick = || grid[rng.gen_range(0..grid.len())].clone();
            let (p, x, y) = (pick(), pick(), pick());
            check(adjunction(&q, &p, &x, &y)?, || {
                format!("{}: p={}, x={}, y={}", q.id(), q.render_value(&p), q.render_value(&x), q.render_value(&y))
            })?;
        }
    }
    Ok(format!("{exhaustive} exhaustive triples, 4 x 10000 sampled, 0 violations"))
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        report(1, "tracking composite matrix", Some(s(1)), c1),
        report(2, "tracking Pareto fronts", Some(s(1)), c2),
        report(3, "worked query with intermediate terms", Some(s(1)), c3),
        report(4, "homogeneous operator closure", Some(s(30)), c4),
        report(5, "heterogeneous operator closure", Some(s(30)), c5),
        report(6, "bimodule check via internal hom", None, c6),
        report(7, "Cost to Bool lax map classification", None, c7),
        report(8, "pushforward of categories", None, c8),
        report(9, "implementation series against brute force", None, c9),
        report(10, "Boolean series and trace formulas", None, c10),
        report(11, "UAV property suite", Some(s(120)), c11),
        report(12, "internal hom adjunction", None, c12),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
