//! Randomized / exhaustive checking of the quantale laws.

use rand::rngs::StdRng;
use rand::{Rng, RngCore, SeedableRng};

use crate::quantale::{QValue, Quantale};

/// The operations the law checker needs. Implemented by [`Quantale`] and by
/// [`MultOverride`], which lets a test plug in a deliberately broken product.
pub trait QuantaleOps {
    fn name(&self) -> String;
    fn leq(&self, p: &QValue, q: &QValue) -> bool;
    fn eq(&self, p: &QValue, q: &QValue) -> bool;
    fn join2(&self, p: &QValue, q: &QValue) -> QValue;
    fn mult(&self, p: &QValue, q: &QValue) -> QValue;
    fn unit(&self) -> QValue;
    fn bottom(&self) -> QValue;
    fn elements(&self) -> Option<Vec<QValue>>;
    fn grid(&self) -> Vec<QValue>;
    fn random_value(&self, rng: &mut dyn RngCore) -> QValue;
    fn render(&self, v: &QValue) -> String;
}

impl QuantaleOps for Quantale {
    fn name(&self) -> String {
        self.id().to_string()
    }
    fn leq(&self, p: &QValue, q: &QValue) -> bool {
        Quantale::leq(self, p, q)
    }
    fn eq(&self, p: &QValue, q: &QValue) -> bool {
        Quantale::eq(self, p, q)
    }
    fn join2(&self, p: &QValue, q: &QValue) -> QValue {
        Quantale::join2(self, p, q)
    }
    fn mult(&self, p: &QValue, q: &QValue) -> QValue {
        Quantale::mult(self, p, q)
    }
    fn unit(&self) -> QValue {
        Quantale::unit(self)
    }
    fn bottom(&self) -> QValue {
        Quantale::bottom(self)
    }
    fn elements(&self) -> Option<Vec<QValue>> {
        Quantale::elements(self)
    }
    fn grid(&self) -> Vec<QValue> {
        Quantale::grid(self)
    }
    fn random_value(&self, rng: &mut dyn RngCore) -> QValue {
        Quantale::random_value(self, rng)
    }
    fn render(&self, v: &QValue) -> String {
        self.render_value(v)
    }
}

/// A quantale with its multiplication replaced.
pub struct MultOverride<F> {
    pub base: Quantale,
    pub mult: F,
}

impl<F: Fn(&QValue, &QValue) -> QValue> QuantaleOps for MultOverride<F> {
    fn name(&self) -> String {
        format!("{}*", self.base.id())
    }
    fn leq(&self, p: &QValue, q: &QValue) -> bool {
        self.base.leq(p, q)
    }
    fn eq(&self, p: &QValue, q: &QValue) -> bool {
        self.base.eq(p, q)
    }
    fn join2(&self, p: &QValue, q: &QValue) -> QValue {
        self.base.join2(p, q)
    }
    fn mult(&self, p: &QValue, q: &QValue) -> QValue {
        (self.mult)(p, q)
    }
    fn unit(&self) -> QValue {
        self.base.unit()
    }
    fn bottom(&self) -> QValue {
        self.base.bottom()
    }
    fn elements(&self) -> Option<Vec<QValue>> {
        self.base.elements()
    }
    fn grid(&self) -> Vec<QValue> {
        self.base.grid()
    }
    fn random_value(&self, rng: &mut dyn RngCore) -> QValue {
        self.base.random_value(rng)
    }
    fn render(&self, v: &QValue) -> String {
        self.base.render_value(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    Reflexivity,
    Antisymmetry,
    Transitivity,
    Associativity,
    Commutativity,
    Unit,
    Distributivity,
    BottomAbsorption,
}

impl Law {
    pub const ALL: [Law; 8] = [
        Law::Reflexivity,
        Law::Antisymmetry,
        Law::Transitivity,
        Law::Associativity,
        Law::Commutativity,
        Law::Unit,
        Law::Distributivity,
        Law::BottomAbsorption,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::Reflexivity => "reflexivity",
            Law::Antisymmetry => "antisymmetry",
            Law::Transitivity => "transitivity",
            Law::Associativity => "associativity",
            Law::Commutativity => "commutativity",
            Law::Unit => "unit",
            Law::Distributivity => "distributivity",
            Law::BottomAbsorption => "bottom-absorption",
        }
    }
}

#[derive(Debug, Clone)]
pub struct LawEntry {
    pub law: Law,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone)]
pub struct LawReport {
    pub quantale: String,
    pub exhaustive: bool,
    pub entries: Vec<LawEntry>,
}

impl LawReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn entry(&self, law: Law) -> &LawEntry {
        self.entries.iter().find(|e| e.law == law).expect("every law is reported")
    }
}

/// Largest carrier checked exhaustively (all triples).
const EXHAUSTIVE_LIMIT: usize = 64;

/// Checks every law. Finite carriers up to 64 elements are enumerated, anything
/// else uses the carrier grid plus `samples` random triples (seeded, deterministic).
pub fn check_laws<Q: QuantaleOps + ?Sized>(q: &Q, samples: usize) -> LawReport {
    let samples = samples.max(1);
    let (exhaustive, triples) = match q.elements() {
        Some(es) if es.len() <= EXHAUSTIVE_LIMIT => {
            let mut t = Vec::with_capacity(es.len().pow(3));
            for a in &es {
                for b in &es {
                    for c in &es {
                        t.push([a.clone(), b.clone(), c.clone()]);
                    }
                }
            }
            (true, t)
        }
        _ => {
            let mut rng = StdRng::seed_from_u64(0x5eed);
            let grid = q.grid();
            let mut t = Vec::new();
            for a in &grid {
                for b in &grid {
                    let c = grid[rng.gen_range(0..grid.len())].clone();
                    t.push([a.clone(), b.clone(), c]);
                }
            }
            for _ in 0..samples {
                t.push([q.random_value(&mut rng), q.random_value(&mut rng), q.random_value(&mut rng)]);
            }
            (false, t)
        }
    };

    let r = |v: &QValue| q.render(v);
    let mut found: Vec<Option<String>> = vec![None; Law::ALL.len()];
    let mut note = |law: Law, msg: String| {
        let slot = &mut found[law as usize];
        if slot.is_none() {
            *slot = Some(msg);
        }
    };
    let e = q.unit();
    let bot = q.bottom();
    for [a, b, c] in &triples {
        if !q.leq(a, a) {
            note(Law::Reflexivity, format!("p={}", r(a)));
        }
        if q.leq(a, b) && q.leq(b, a) && !q.eq(a, b) {
            note(Law::Antisymmetry, format!("p={}, q={}", r(a), r(b)));
        }
        if q.leq(a, b) && q.leq(b, c) && !q.leq(a, c) {
            note(Law::Transitivity, format!("p={}, q={}, r={}", r(a), r(b), r(c)));
        }
        let l = q.mult(&q.mult(a, b), c);
        let rr = q.mult(a, &q.mult(b, c));
        if !q.eq(&l, &rr) {
            note(
                Law::Associativity,
                format!("p={}, q={}, r={}: {} vs {}", r(a), r(b), r(c), r(&l), r(&rr)),
            );
        }
        if !q.eq(&q.mult(a, b), &q.mult(b, a)) {
            note(Law::Commutativity, format!("p={}, q={}", r(a), r(b)));
        }
        for (side, v) in [("e*p", q.mult(&e, a)), ("p*e", q.mult(a, &e))] {
            if !q.eq(&v, a) {
                note(Law::Unit, format!("p={}: {side} = {}", r(a), r(&v)));
            }
        }
        let lhs = q.mult(a, &q.join2(b, c));
        let rhs = q.join2(&q.mult(a, b), &q.mult(a, c));
        if !q.eq(&lhs, &rhs) {
            note(
                Law::Distributivity,
                format!("p={}, family={{{}, {}}}: {} vs {}", r(a), r(b), r(c), r(&lhs), r(&rhs)),
            );
        }
        let ab = q.mult(a, &bot);
        if !q.eq(&ab, &bot) {
            note(Law::BottomAbsorption, format!("p={}: p*bottom = {}", r(a), r(&ab)));
        }
    }

    LawReport {
        quantale: q.name(),
        exhaustive,
        entries: Law::ALL
            .iter()
            .zip(found)
            .map(|(&law, cx)| LawEntry {
                law,
                passed: cx.is_none(),
                counterexample: cx,
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::TNorm;

    #[test]
    fn builtins_satisfy_laws() {
        let mut qs = vec![
            Quantale::bool(),
            Quantale::pace(),
            Quantale::cost(),
            Quantale::nat(),
            Quantale::powerset("P3", vec!["a".into(), "b".into(), "c".into()]).unwrap(),
        ];
        qs.extend(TNorm::ALL.map(Quantale::fuzz));
        for q in qs {
            let rep = check_laws(&q, 2000);
            assert!(rep.all_passed(), "{}: {:?}", q, rep.entries);
        }
    }

    #[test]
    fn finite_carriers_are_exhaustive() {
        assert!(check_laws(&Quantale::bool(), 10).exhaustive);
        assert!(check_laws(&Quantale::pace(), 10).exhaustive);
        assert!(!check_laws(&Quantale::cost(), 10).exhaustive);
    }

    #[test]
    fn broken_unit_is_caught() {
        let broken = MultOverride {
            base: Quantale::cost(),
            mult: |p: &QValue, q: &QValue| {
                let (a, b) = (p.as_real().unwrap(), q.as_real().unwrap());
                QValue::Real(a.max(b - 1.0))
            },
        };
        let rep = check_laws(&broken, 500);
        let unit = rep.entry(Law::Unit);
        assert!(!unit.passed);
        assert!(unit.counterexample.is_some());
    }

    #[test]
    fn product_of_lawful_factors_is_lawful() {
        let q = Quantale::product(
            "PB",
            vec![Quantale::pace(), Quantale::bool(), Quantale::fuzz(TNorm::Lukasiewicz)],
        )
        .unwrap();
        assert!(check_laws(&q, 3000).all_passed());
    }
}
