//! Lax functions between quantales, pushforward, and heterogeneous composition.

use std::fmt;

use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::category::QCategory;
use crate::error::{Error, Result};
use crate::profunctor::{split_loop, tabulate, DesignProblem};
use crate::quantale::{Kind, QValue, Quantale, NAT_INF};

/// How a map acts on carrier elements.
#[derive(Debug, Clone, PartialEq)]
pub enum Rule {
    Identity,
    /// Cost → Bool, feasible iff the cost is finite.
    CostToBoolFinite,
    /// Cost → Bool, feasible iff the cost is zero.
    CostToBoolZero,
    /// Anything → Bool, always feasible.
    ConstTrue,
    /// Bool → Q, `true ↦ e`, `false ↦ ⊥`.
    BoolToUnit,
    /// Cost → Cost, `r ↦ K·r`.
    Scale(f64),
    /// N̄ → Cost, `k ↦ M·√k`.
    SqrtCost(f64),
    /// Cost → Bool, feasible iff the cost is at most `c`. Not lax for `0 < c < ∞`.
    Threshold(f64),
    /// P(I) → P(I×J), `A ↦ A × J`.
    InjectLeft,
    /// P(J) → P(I×J), `B ↦ I × B`.
    InjectRight,
    /// P(I) → Bool, `S ↦ S ≠ ∅`. Not lax.
    Nonempty,
    /// Explicit finite table.
    Table(Vec<(QValue, QValue)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    /// `"multiplicativity"`, `"unit"` or `"monotonicity"`.
    pub law: &'static str,
    pub q1: QValue,
    pub q2: Option<QValue>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Unverified,
    Lax,
    Strict,
    /// Fails a laxity law. [`LaxReport::oplax`] tells whether the reversed laws hold.
    NotLax(Box<Counterexample>),
    /// Accepted without proof; failures downstream name this map.
    Overridden,
}

impl Verdict {
    pub fn is_lax(&self) -> bool {
        matches!(self, Verdict::Lax | Verdict::Strict)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Unverified => "unverified",
            Verdict::Lax => "lax",
            Verdict::Strict => "strict",
            Verdict::NotLax(_) => "not-lax",
            Verdict::Overridden => "overridden",
        }
    }
}

/// Outcome of [`LaxMap::check`].
#[derive(Debug, Clone)]
pub struct LaxReport {
    pub verdict: Verdict,
    pub exhaustive: bool,
    /// Witness `p ⊑ q` with `φ(p) ⋢ φ(q)`, if any was found.
    pub monotonicity: Option<Counterexample>,
    /// Both laws hold with the order reversed.
    pub oplax: bool,
    pub pairs_checked: usize,
}

impl fmt::Display for LaxReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let how = if self.exhaustive { "exhaustive" } else { "sampled" };
        write!(f, "{} ({how}, {} pairs)", self.verdict.label(), self.pairs_checked)?;
        if let Verdict::NotLax(cx) = &self.verdict {
            write!(f, ": {} fails, {}", cx.law, cx.detail)?;
            if self.oplax {
                f.write_str(" (oplax)")?;
            }
        }
        if let Some(cx) = &self.monotonicity {
            write!(f, "; not monotone: {}", cx.detail)?;
        }
        Ok(())
    }
}

/// Sampling policy for continuous sources.
#[derive(Debug, Clone)]
pub struct CheckPolicy {
    /// Overrides the default sample grid of the source.
    pub grid: Option<Vec<QValue>>,
    pub random_pairs: usize,
    pub seed: u64,
}

impl Default for CheckPolicy {
    fn default() -> Self {
        CheckPolicy {
            grid: None,
            random_pairs: 2000,
            seed: 7,
        }
    }
}

/// A map between quantale carriers together with its laxity verdict.
#[derive(Debug, Clone)]
pub struct LaxMap {
    pub name: String,
    source: Quantale,
    target: Quantale,
    rule: Rule,
    verdict: Verdict,
}

fn expect_kind(q: &Quantale, ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("`{}` is not {what}", q.id())))
    }
}

impl LaxMap {
    fn build(name: &str, source: &Quantale, target: &Quantale, rule: Rule, verdict: Verdict) -> LaxMap {
        LaxMap {
            name: name.to_string(),
            source: source.clone(),
            target: target.clone(),
            rule,
            verdict,
        }
    }

    pub fn identity(q: &Quantale) -> LaxMap {
        LaxMap::build("identity", q, q, Rule::Identity, Verdict::Strict)
    }

    pub fn cost_to_bool_finite() -> LaxMap {
        LaxMap::build("cost_to_bool_finite", &Quantale::cost(), &Quantale::bool(), Rule::CostToBoolFinite, Verdict::Lax)
    }

    pub fn cost_to_bool_zero() -> LaxMap {
        LaxMap::build("cost_to_bool_zero", &Quantale::cost(), &Quantale::bool(), Rule::CostToBoolZero, Verdict::Lax)
    }

    pub fn constant_true(source: &Quantale) -> LaxMap {
        LaxMap::build("constant_true", source, &Quantale::bool(), Rule::ConstTrue, Verdict::Lax)
    }

    pub fn bool_to_unit(target: &Quantale) -> LaxMap {
        LaxMap::build("bool_to_unit", &Quantale::bool(), target, Rule::BoolToUnit, Verdict::Strict)
    }

    pub fn scale(k: f64) -> Result<LaxMap> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale factor must be positive, got {k}")));
        }
        let c = Quantale::cost();
        Ok(LaxMap::build("scale", &c, &c, Rule::Scale(k), Verdict::Strict))
    }

    pub fn sqrt_cost(m: f64) -> Result<LaxMap> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidParameter(format!("sqrt_cost factor must be positive, got {m}")));
        }
        Ok(LaxMap::build("sqrt_cost", &Quantale::nat(), &Quantale::cost(), Rule::SqrtCost(m), Verdict::Lax))
    }

    pub fn threshold(c: f64) -> Result<LaxMap> {
        if c.is_nan() || c < 0.0 {
            return Err(Error::InvalidParameter(format!("threshold must be non-negative, got {c}")));
        }
        Ok(LaxMap::build("threshold", &Quantale::cost(), &Quantale::bool(), Rule::Threshold(c), Verdict::Unverified))
    }

    /// `A ↦ A × J` into a pair powerset `P(I×J)`.
    pub fn inject_left(pairs: &Quantale) -> Result<LaxMap> {
        let (pi, _) = pairs
            .powerset_pairs_of()
            .ok_or_else(|| Error::InvalidParameter(format!("`{}` is not a pair powerset", pairs.id())))?;
        Ok(LaxMap::build("inject_left", pi, pairs, Rule::InjectLeft, Verdict::Strict))
    }

    /// `B ↦ I × B` into a pair powerset `P(I×J)`.
    pub fn inject_right(pairs: &Quantale) -> Result<LaxMap> {
        let (_, pj) = pairs
            .powerset_pairs_of()
            .ok_or_else(|| Error::InvalidParameter(format!("`{}` is not a pair powerset", pairs.id())))?;
        Ok(LaxMap::build("inject_right", pj, pairs, Rule::InjectRight, Verdict::Strict))
    }

    pub fn nonempty(source: &Quantale) -> Result<LaxMap> {
        expect_kind(source, source.powerset_base().is_some(), "a powerset")?;
        Ok(LaxMap::build("nonempty", source, &Quantale::bool(), Rule::Nonempty, Verdict::Unverified))
    }

    /// An explicit table over a finite source; every source element must be listed once.
    pub fn table(source: &Quantale, target: &Quantale, entries: Vec<(QValue, QValue)>) -> Result<LaxMap> {
        let elems = source
            .elements()
            .ok_or_else(|| Error::InvalidParameter(format!("table maps need a finite source, `{}` is not", source.id())))?;
        for (a, b) in &entries {
            source.check(a)?;
            target.check(b)?;
        }
        for e in &elems {
            let hits = entries.iter().filter(|(a, _)| source.eq(a, e)).count();
            if hits != 1 {
                return Err(Error::InvalidParameter(format!(
                    "table must list `{}` exactly once (found {hits})",
                    source.render_value(e)
                )));
            }
        }
        Ok(LaxMap::build("table", source, target, Rule::Table(entries), Verdict::Unverified))
    }

    /// Builtin by tag, as used in model files. `source` / `target` disambiguate
    /// maps whose endpoints are not fixed by the tag.
    pub fn builtin(kind: &str, params: &[f64], source: &Quantale, target: &Quantale) -> Result<LaxMap> {
        let no_params = || {
            if params.is_empty() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("`{kind}` takes no parameters")))
            }
        };
        let one_param = || match params {
            [x] => Ok(*x),
            _ => Err(Error::InvalidParameter(format!("`{kind}` takes exactly one parameter"))),
        };
        let map = match kind {
            "identity" => {
                no_params()?;
                if source != target {
                    return Err(Error::QuantaleMismatch(source.id().into(), target.id().into()));
                }
                LaxMap::identity(source)
            }
            "cost_to_bool_finite" => {
                no_params()?;
                LaxMap::cost_to_bool_finite()
            }
            "cost_to_bool_zero" => {
                no_params()?;
                LaxMap::cost_to_bool_zero()
            }
            "constant_true" => {
                no_params()?;
                LaxMap::constant_true(source)
            }
            "bool_to_unit" => {
                no_params()?;
                LaxMap::bool_to_unit(target)
            }
            "scale" => LaxMap::scale(one_param()?)?,
            "sqrt_cost" => LaxMap::sqrt_cost(one_param()?)?,
            "threshold" => LaxMap::threshold(one_param()?)?,
            "inject_left" => {
                no_params()?;
                LaxMap::inject_left(target)?
            }
            "inject_right" => {
                no_params()?;
                LaxMap::inject_right(target)?
            }
            "nonempty" => {
                no_params()?;
                LaxMap::nonempty(source)?
            }
            other => return Err(Error::UnknownKind(other.to_string())),
        };
        if map.source() != source || map.target() != target {
            return Err(Error::LaxDirection {
                map: kind.to_string(),
                expected: format!(
                    "{} -> {} (declared {} -> {})",
                    map.source().id(),
                    map.target().id(),
                    source.id(),
                    target.id()
                ),
            });
        }
        Ok(map)
    }

    pub fn named(mut self, name: impl Into<String>) -> LaxMap {
        self.name = name.into();
        self
    }

    pub fn source(&self) -> &Quantale {
        &self.source
    }

    pub fn target(&self) -> &Quantale {
        &self.target
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn verdict(&self) -> &Verdict {
        &self.verdict
    }

    /// Usable by pushforward and the heterogeneous operators.
    pub fn is_usable(&self) -> bool {
        self.verdict.is_lax() || self.verdict == Verdict::Overridden
    }

    /// Marks the map as accepted without proof.
    pub fn unsafe_override(mut self) -> LaxMap {
        if !self.verdict.is_lax() {
            self.verdict = Verdict::Overridden;
        }
        self
    }

    pub fn apply(&self, v: &QValue) -> QValue {
        let t = &self.target;
        match (&self.rule, v) {
            (Rule::Identity, _) => v.clone(),
            (Rule::CostToBoolFinite, QValue::Real(x)) => QValue::Bool(x.is_finite()),
            (Rule::CostToBoolZero, QValue::Real(x)) => QValue::Bool(*x <= crate::quantale::tolerance()),
            (Rule::ConstTrue, _) => QValue::Bool(true),
            (Rule::BoolToUnit, QValue::Bool(b)) => {
                if *b {
                    t.unit()
                } else {
                    t.bottom()
                }
            }
            (Rule::Scale(k), QValue::Real(x)) => QValue::Real(k * x),
            (Rule::SqrtCost(m), QValue::Nat(n)) => {
                if *n == NAT_INF {
                    QValue::inf()
                } else {
                    QValue::Real(m * (*n as f64).sqrt())
                }
            }
            (Rule::Threshold(c), QValue::Real(x)) => QValue::Bool(*x <= c + crate::quantale::tolerance()),
            (Rule::InjectLeft, QValue::Set(a)) => {
                let nj = self.pair_sizes().1;
                let row = low_bits(nj);
                let mut out = 0u64;
                for i in 0..64 {
                    if a >> i & 1 == 1 {
                        out |= row << (i * nj);
                    }
                }
                QValue::Set(out)
            }
            (Rule::InjectRight, QValue::Set(b)) => {
                let (ni, nj) = self.pair_sizes();
                let mut out = 0u64;
                for i in 0..ni {
                    out |= b << (i * nj);
                }
                QValue::Set(out)
            }
            (Rule::Nonempty, QValue::Set(s)) => QValue::Bool(*s != 0),
            (Rule::Table(entries), _) => entries
                .iter()
                .find(|(a, _)| self.source.eq(a, v))
                .map(|(_, b)| b.clone())
                .unwrap_or_else(|| panic!("table map `{}` has no entry for {v:?}", self.name)),
            _ => panic!("lax map `{}` applied to foreign value {v:?}", self.name),
        }
    }

    fn pair_sizes(&self) -> (usize, usize) {
        let (pi, pj) = self.target.powerset_pairs_of().expect("injections target a pair powerset");
        (pi.powerset_base().unwrap().len(), pj.powerset_base().unwrap().len())
    }

    /// Textual rule, as written in model files.
    pub fn rule_text(&self) -> String {
        match &self.rule {
            Rule::Identity => "identity".into(),
            Rule::CostToBoolFinite => "cost_to_bool_finite".into(),
            Rule::CostToBoolZero => "cost_to_bool_zero".into(),
            Rule::ConstTrue => "constant_true".into(),
            Rule::BoolToUnit => "bool_to_unit".into(),
            Rule::Scale(k) => format!("scale({k})"),
            Rule::SqrtCost(m) => format!("sqrt_cost({m})"),
            Rule::Threshold(c) => format!("threshold({c})"),
            Rule::InjectLeft => "inject_left".into(),
            Rule::InjectRight => "inject_right".into(),
            Rule::Nonempty => "nonempty".into(),
            Rule::Table(entries) => {
                let parts: Vec<String> = entries
                    .iter()
                    .map(|(a, b)| format!("{} -> {}", self.source.render_value(a), self.target.render_value(b)))
                    .collect();
                format!("table {{{}}}", parts.join("; "))
            }
        }
    }

    fn default_samples(&self) -> (bool, Vec<QValue>) {
        if let Some(es) = self.source.elements() {
            return (true, es);
        }
        let s = match self.source.kind() {
            Kind::Cost => std::iter::once(0.0)
                .chain((-3..=6).map(|k| 10f64.powi(k)))
                .chain(std::iter::once(f64::INFINITY))
                .map(QValue::Real)
                .collect(),
            Kind::Nat => [0, 1, 2, 3, 4, 10, 100, 1000, 10_000, 100_000, 1_000_000, NAT_INF]
                .into_iter()
                .map(QValue::Nat)
                .collect(),
            _ => self.source.grid(),
        };
        (false, s)
    }

    /// Checks monotonicity and both laxity inequalities, and their opposites.
    pub fn check(&self, policy: &CheckPolicy) -> LaxReport {
        let (exhaustive, samples) = match &policy.grid {
            Some(g) => (false, g.clone()),
            None => self.default_samples(),
        };
        let (src, tgt) = (&self.source, &self.target);
        let mut pairs: Vec<(QValue, QValue)> = Vec::new();
        for a in &samples {
            for b in &samples {
                pairs.push((a.clone(), b.clone()));
            }
        }
        if !exhaustive {
            let mut rng = StdRng::seed_from_u64(policy.seed);
            for _ in 0..policy.random_pairs {
                pairs.push((src.random_value(&mut rng), src.random_value(&mut rng)));
            }
        }
        let rs = |v: &QValue| src.render_value(v);
        let rt = |v: &QValue| tgt.render_value(v);

        let mut monotonicity = None;
        let mut lax_cx: Option<Counterexample> = None;
        let mut oplax_ok = true;
        for (a, b) in &pairs {
            let (fa, fb) = (self.apply(a), self.apply(b));
            if monotonicity.is_none() && src.leq(a, b) && !tgt.leq(&fa, &fb) {
                monotonicity = Some(Counterexample {
                    law: "monotonicity",
                    q1: a.clone(),
                    q2: Some(b.clone()),
                    detail: format!("{} ⊑ {} but φ = {}, {}", rs(a), rs(b), rt(&fa), rt(&fb)),
                });
            }
            let lhs = tgt.mult(&fa, &fb);
            let ab = src.mult(a, b);
            let rhs = self.apply(&ab);
            if lax_cx.is_none() && !tgt.leq(&lhs, &rhs) {
                lax_cx = Some(Counterexample {
                    law: "multiplicativity",
                    q1: a.clone(),
                    q2: Some(b.clone()),
                    detail: format!(
                        "q1={}, q2={}: φ(q1)⊙φ(q2) = {} but φ(q1⊙q2) = φ({}) = {}",
                        rs(a),
                        rs(b),
                        rt(&lhs),
                        rs(&ab),
                        rt(&rhs)
                    ),
                });
            }
            if !tgt.leq(&rhs, &lhs) {
                oplax_ok = false;
            }
        }
        let fe = self.apply(&src.unit());
        let eu = tgt.unit();
        if lax_cx.is_none() && !tgt.leq(&eu, &fe) {
            lax_cx = Some(Counterexample {
                law: "unit",
                q1: src.unit(),
                q2: None,
                detail: format!("φ(e) = {} is below e' = {}", rt(&fe), rt(&eu)),
            });
        }
        if !tgt.leq(&fe, &eu) {
            oplax_ok = false;
        }
        let verdict = match (lax_cx, oplax_ok, &monotonicity) {
            (Some(cx), _, _) => Verdict::NotLax(Box::new(cx)),
            (None, _, Some(m)) => Verdict::NotLax(Box::new(m.clone())),
            (None, true, None) => Verdict::Strict,
            (None, false, None) => Verdict::Lax,
        };
        LaxReport {
            verdict,
            exhaustive,
            monotonicity,
            oplax: oplax_ok,
            pairs_checked: pairs.len(),
        }
    }

    /// Runs [`LaxMap::check`] with the default policy and records the verdict.
    pub fn verified(mut self) -> LaxMap {
        self.verdict = self.check(&CheckPolicy::default()).verdict;
        self
    }

    fn require_usable(&self) -> Result<()> {
        if self.is_usable() {
            Ok(())
        } else {
            Err(Error::UnverifiedLax(self.name.clone()))
        }
    }

    fn require_source(&self, q: &Quantale) -> Result<()> {
        if self.source != *q {
            return Err(Error::LaxDirection {
                map: self.name.clone(),
                expected: format!("from {} (it goes from {})", q.id(), self.source.id()),
            });
        }
        Ok(())
    }

    fn blame(&self, e: Error) -> Error {
        if self.verdict == Verdict::Overridden {
            Error::OverrideFailure {
                map: self.name.clone(),
                cause: Box::new(e),
            }
        } else {
            e
        }
    }

    /// `φ∗C(x, y) = φ(C(x, y))`.
    pub fn push_category(&self, c: &QCategory) -> Result<QCategory> {
        self.require_usable()?;
        self.require_source(c.quantale())?;
        if self.rule == Rule::Identity {
            return Ok(c.clone());
        }
        if c.is_tensor() && self.verdict == Verdict::Strict {
            // Strict maps commute with ⊙, so the factor structure survives.
            let pushed = c
                .factors()
                .iter()
                .map(|f| self.push_category(f))
                .collect::<Result<Vec<_>>>()?;
            return QCategory::tensor_all(&pushed).map_err(|e| self.blame(e));
        }
        let hom = c.hom_flat().iter().map(|v| self.apply(v)).collect();
        QCategory::from_flat(&self.target, c.objects().to_vec(), hom).map_err(|e| self.blame(e))
    }

    /// `(φ∗d)(r, f) = φ(d(r, f))` between the pushed categories.
    pub fn push_problem(&self, d: &DesignProblem) -> Result<DesignProblem> {
        let source = self.push_category(d.source())?;
        let target = self.push_category(d.target())?;
        let values = d.values().iter().map(|v| self.apply(v)).collect();
        finish(source, target, values, &[self])
    }
}

fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Operator output: always validated when an overridden map took part.
fn finish(source: QCategory, target: QCategory, values: Vec<QValue>, maps: &[&LaxMap]) -> Result<DesignProblem> {
    if let Some(m) = maps.iter().find(|m| m.verdict == Verdict::Overridden) {
        return DesignProblem::from_flat(&source, &target, values).map_err(|e| m.blame(e));
    }
    DesignProblem::composed(source, target, values)
}

fn same_eval(a: &LaxMap, b: &LaxMap) -> Result<()> {
    if a.target != b.target {
        return Err(Error::QuantaleMismatch(a.target.id().into(), b.target.id().into()));
    }
    Ok(())
}

/// `(d ; e)(r, f) = ⊔_m φ_d(d(r, m)) ⊙ φ_e(e(m, f))`.
pub fn hetero_series(d: &DesignProblem, e: &DesignProblem, phi_d: &LaxMap, phi_e: &LaxMap) -> Result<DesignProblem> {
    phi_d.require_usable()?;
    phi_e.require_usable()?;
    phi_d.require_source(d.quantale())?;
    phi_e.require_source(e.quantale())?;
    same_eval(phi_d, phi_e)?;
    if d.target().objects() != e.source().objects() {
        return Err(Error::Interface(
            "heterogeneous series needs the same intermediate objects on both sides".into(),
        ));
    }
    let q = phi_d.target().clone();
    let source = phi_d.push_category(d.source())?;
    let target = phi_e.push_category(e.target())?;
    let left: Vec<QValue> = d.values().iter().map(|v| phi_d.apply(v)).collect();
    let right: Vec<QValue> = e.values().iter().map(|v| phi_e.apply(v)).collect();
    let (nr, nm, nf) = (d.source().len(), d.target().len(), e.target().len());
    let bot = q.bottom();
    let values = tabulate(nr, nf, |r, f| {
        let mut acc = bot.clone();
        for m in 0..nm {
            let a = &left[r * nm + m];
            if q.is_bottom(a) {
                continue;
            }
            acc = q.join2(&acc, &q.mult(a, &right[m * nf + f]));
        }
        acc
    });
    finish(source, target, values, &[phi_d, phi_e])
}

/// `(d ⊗ e)((r,r'),(f,f')) = φ_d(d(r,f)) ⊙ φ_e(e(r',f'))`.
pub fn hetero_parallel(d: &DesignProblem, e: &DesignProblem, phi_d: &LaxMap, phi_e: &LaxMap) -> Result<DesignProblem> {
    phi_d.require_usable()?;
    phi_e.require_usable()?;
    phi_d.require_source(d.quantale())?;
    phi_e.require_source(e.quantale())?;
    same_eval(phi_d, phi_e)?;
    let q = phi_d.target().clone();
    let source = phi_d.push_category(d.source())?.tensor(&phi_e.push_category(e.source())?)?;
    let target = phi_d.push_category(d.target())?.tensor(&phi_e.push_category(e.target())?)?;
    let (nr2, nf2) = (e.source().len(), e.target().len());
    let mut values = Vec::with_capacity(source.len() * target.len());
    for r in 0..source.len() {
        for f in 0..target.len() {
            values.push(q.mult(
                &phi_d.apply(d.value(r / nr2, f / nf2)),
                &phi_e.apply(e.value(r % nr2, f % nf2)),
            ));
        }
    }
    finish(source, target, values, &[phi_d, phi_e])
}

/// `Tr_M(d)(r, f) = ⊔_{m,m'} φ(d((r,m),(f,m'))) ⊙ φ(M(m,m'))`.
pub fn hetero_trace(d: &DesignProblem, m: &QCategory, phi: &LaxMap) -> Result<DesignProblem> {
    phi.require_usable()?;
    phi.require_source(d.quantale())?;
    let (r, f) = split_loop(d, m)?;
    let q = phi.target().clone();
    let source = phi.push_category(&r)?;
    let target = phi.push_category(&f)?;
    let nm = m.len();
    let mh: Vec<QValue> = m.hom_flat().iter().map(|v| phi.apply(v)).collect();
    let mut values = Vec::with_capacity(r.len() * f.len());
    for ri in 0..r.len() {
        for fi in 0..f.len() {
            let mut acc = q.bottom();
            for a in 0..nm {
                for b in 0..nm {
                    let v = phi.apply(d.value(ri * nm + a, fi * nm + b));
                    acc = q.join2(&acc, &q.mult(&v, &mh[a * nm + b]));
                }
            }
            values.push(acc);
        }
    }
    finish(source, target, values, &[phi])
}

/// Which of the three feasibility readings a Cost → Bool map realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CostBoolClass {
    /// Every finite cost is feasible.
    FiniteFeasible,
    /// Only zero cost is feasible.
    OnlyZero,
    /// Everything is feasible.
    AllFeasible,
    /// Lax on the grid but none of the above (never expected).
    Other,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedMap {
    pub class: CostBoolClass,
    /// `table[i]` is the image of `grid[i]`.
    pub table: Vec<bool>,
}

/// Grid addition: round the sum up to the next grid point, capping finite sums at
/// the largest finite point.
pub fn grid_add(grid: &[f64], a: usize, b: usize) -> usize {
    let (x, y) = (grid[a], grid[b]);
    if x.is_infinite() || y.is_infinite() {
        return grid.len() - 1;
    }
    let s = x + y;
    let tol = crate::quantale::tolerance();
    let max_finite = grid.len() - 2;
    grid[..=max_finite]
        .iter()
        .position(|&g| g >= s - tol)
        .unwrap_or(max_finite)
}

/// Enumerates every map from the grid to Bool, keeps the monotone ones satisfying both
/// laxity laws under [`grid_add`], and labels each survivor with the readings it matches.
/// A survivor matching several readings is listed once per reading.
pub fn classify_cost_to_bool(grid: &[f64]) -> Result<Vec<ClassifiedMap>> {
    let mut g: Vec<f64> = grid.to_vec();
    if g.iter().any(|x| x.is_nan() || *x < 0.0) {
        return Err(Error::DegenerateGrid("grid points must be non-negative numbers".into()));
    }
    g.sort_by(|a, b| a.partial_cmp(b).unwrap());
    g.dedup();
    if g.len() != grid.len() {
        return Err(Error::DegenerateGrid("grid points must be distinct".into()));
    }
    if g.first() != Some(&0.0) || !g.last().is_some_and(|x| x.is_infinite()) {
        return Err(Error::DegenerateGrid("grid must contain 0 and inf".into()));
    }
    if g.len() > 20 {
        return Err(Error::DegenerateGrid("at most 20 grid points are enumerated".into()));
    }
    let n = g.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let phi = |i: usize| mask >> i & 1 == 1;
        // Cost order: a ⊑ b iff a >= b, i.e. a later grid point sits lower.
        let monotone = (0..n).all(|i| (0..n).all(|j| !(j <= i) || !phi(i) || phi(j)));
        if !monotone || !phi(0) {
            continue;
        }
        let lax = (0..n).all(|i| (0..n).all(|j| !(phi(i) && phi(j)) || phi(grid_add(&g, i, j))));
        if !lax {
            continue;
        }
        let table: Vec<bool> = (0..n).map(phi).collect();
        let mut classes = Vec::new();
        if (0..n).all(|i| table[i] == g[i].is_finite()) {
            classes.push(CostBoolClass::FiniteFeasible);
        }
        if (0..n).all(|i| table[i] == (g[i] == 0.0)) {
            classes.push(CostBoolClass::OnlyZero);
        }
        if table.iter().all(|&b| b) {
            classes.push(CostBoolClass::AllFeasible);
        }
        if classes.is_empty() {
            classes.push(CostBoolClass::Other);
        }
        for class in classes {
            out.push(ClassifiedMap { class, table: table.clone() });
        }
    }
    out.sort_by_key(|c| c.class);
    Ok(out)
}

/// A parts catalog: each part requires one resource object and provides one functionality object.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    pub parts: Vec<String>,
    pub req: Vec<String>,
    pub prov: Vec<String>,
}

impl Catalog {
    pub fn new(entries: &[(&str, &str, &str)]) -> Catalog {
        Catalog {
            parts: entries.iter().map(|e| e.0.to_string()).collect(),
            req: entries.iter().map(|e| e.1.to_string()).collect(),
            prov: entries.iter().map(|e| e.2.to_string()).collect(),
        }
    }
}

/// `d(r, m) = { i | prov(i) ⪰ m ∧ req(i) ⪯ r }` over `P(parts)`; `r_cat`, `f_cat` are Bool orders.
pub fn catalog_problem(
    powerset: &Quantale,
    catalog: &Catalog,
    r_cat: &QCategory,
    f_cat: &QCategory,
) -> Result<DesignProblem> {
    let base = powerset
        .powerset_base()
        .ok_or_else(|| Error::InvalidParameter(format!("`{}` is not a powerset", powerset.id())))?;
    if base != catalog.parts.as_slice() {
        return Err(Error::InvalidParameter(
            "catalog parts must be exactly the powerset base, in order".into(),
        ));
    }
    for c in [r_cat, f_cat] {
        if !matches!(c.quantale().kind(), Kind::Bool) {
            return Err(Error::QuantaleMismatch(c.quantale().id().into(), "Bool".into()));
        }
    }
    let req: Vec<usize> = catalog.req.iter().map(|x| r_cat.index_of(x)).collect::<Result<_>>()?;
    let prov: Vec<usize> = catalog.prov.iter().map(|x| f_cat.index_of(x)).collect::<Result<_>>()?;
    let t = QValue::Bool(true);
    let mut values = Vec::with_capacity(r_cat.len() * f_cat.len());
    for r in 0..r_cat.len() {
        for f in 0..f_cat.len() {
            let mut bits = 0u64;
            for i in 0..catalog.parts.len() {
                if *f_cat.hom(f, prov[i]) == t && *r_cat.hom(req[i], r) == t {
                    bits |= 1 << i;
                }
            }
            values.push(QValue::Set(bits));
        }
    }
    let push = LaxMap::bool_to_unit(powerset);
    DesignProblem::from_flat(&push.push_category(r_cat)?, &push.push_category(f_cat)?, values)
}

/// Both catalog problems composed over `P(I×J)` through the two injections.
pub fn implementation_series(
    catalog_i: &Catalog,
    catalog_j: &Catalog,
    r: &QCategory,
    m: &QCategory,
    f: &QCategory,
) -> Result<DesignProblem> {
    let pi = Quantale::powerset("P(I)", catalog_i.parts.clone())?;
    let pj = Quantale::powerset("P(J)", catalog_j.parts.clone())?;
    let pij = Quantale::powerset_pairs("P(IxJ)", &pi, &pj)?;
    let d = catalog_problem(&pi, catalog_i, r, m)?;
    let e = catalog_problem(&pj, catalog_j, m, f)?;
    hetero_series(&d, &e, &LaxMap::inject_left(&pij)?, &LaxMap::inject_right(&pij)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::names;

    fn r(x: f64) -> QValue {
        QValue::Real(x)
    }

    #[test]
    fn builtin_values() {
        let f = LaxMap::cost_to_bool_finite();
        assert_eq!(f.apply(&r(3.0)), QValue::Bool(true));
        assert_eq!(f.apply(&QValue::inf()), QValue::Bool(false));
        let b = LaxMap::bool_to_unit(&Quantale::cost());
        assert_eq!(b.apply(&QValue::Bool(true)), r(0.0));
        assert_eq!(b.apply(&QValue::Bool(false)), QValue::inf());
        let s = LaxMap::sqrt_cost(2.0).unwrap();
        assert_eq!(s.apply(&QValue::Nat(4)), r(4.0));
        assert_eq!(s.apply(&QValue::Nat(0)), r(0.0));
        assert!(LaxMap::scale(0.0).is_err());
        assert!(LaxMap::sqrt_cost(-1.0).is_err());
    }

    #[test]
    fn verdicts() {
        let p = CheckPolicy::default();
        assert!(LaxMap::cost_to_bool_zero().check(&p).verdict.is_lax());
        assert_eq!(LaxMap::scale(2.0).unwrap().check(&p).verdict, Verdict::Strict);
        assert_eq!(LaxMap::sqrt_cost(2.0).unwrap().check(&p).verdict, Verdict::Lax);
        let t = LaxMap::threshold(5.0).unwrap().check(&CheckPolicy {
            grid: Some(vec![r(0.0), r(3.0), r(6.0), QValue::inf()]),
            ..CheckPolicy::default()
        });
        assert!(t.oplax);
        let Verdict::NotLax(cx) = t.verdict else { panic!("{t}") };
        assert_eq!((cx.law, &cx.q1, &cx.q2), ("multiplicativity", &r(3.0), &Some(r(3.0))));
        let pi = Quantale::powerset("P", names(&["i1", "i2"])).unwrap();
        let ne = LaxMap::nonempty(&pi).unwrap().check(&p);
        assert!(matches!(ne.verdict, Verdict::NotLax(_)) && ne.exhaustive);
    }

    #[test]
    fn injections_are_strict() {
        let pi = Quantale::powerset("PI", names(&["i1", "i2"])).unwrap();
        let pj = Quantale::powerset("PJ", names(&["j1", "j2", "j3"])).unwrap();
        let pij = Quantale::powerset_pairs("PIJ", &pi, &pj).unwrap();
        let l = LaxMap::inject_left(&pij).unwrap();
        let rr = LaxMap::inject_right(&pij).unwrap();
        let a = pi.parse_value("[i2]").unwrap();
        assert_eq!(pij.render_value(&l.apply(&a)), "[\"(i2,j1)\", \"(i2,j2)\", \"(i2,j3)\"]");
        let b = pj.parse_value("[j1, j3]").unwrap();
        assert_eq!(
            rr.apply(&b),
            pij.parse_value("[\"(i1,j1)\", \"(i1,j3)\", \"(i2,j1)\", \"(i2,j3)\"]").unwrap()
        );
        assert_eq!(l.check(&CheckPolicy::default()).verdict, Verdict::Strict);
        assert_eq!(rr.check(&CheckPolicy::default()).verdict, Verdict::Strict);
    }

    #[test]
    fn classification() {
        for grid in [vec![0.0, 1.0, 2.0, f64::INFINITY], vec![0.0, 0.5, 1.0, 5.0, f64::INFINITY]] {
            let cs = classify_cost_to_bool(&grid).unwrap();
            let classes: Vec<_> = cs.iter().map(|c| c.class).collect();
            assert_eq!(
                classes,
                vec![CostBoolClass::FiniteFeasible, CostBoolClass::OnlyZero, CostBoolClass::AllFeasible]
            );
        }
        let two = classify_cost_to_bool(&[0.0, f64::INFINITY]).unwrap();
        assert_eq!(two.len(), 3);
        assert_eq!(two[0].table, two[1].table);
        assert!(matches!(classify_cost_to_bool(&[0.0, 1.0]), Err(Error::DegenerateGrid(_))));
    }

    #[test]
    fn unverified_maps_are_refused() {
        let c = QCategory::discrete(&Quantale::cost(), names(&["a"])).unwrap();
        let t = LaxMap::threshold(5.0).unwrap();
        assert!(matches!(t.push_category(&c), Err(Error::UnverifiedLax(_))));
        assert!(t.unsafe_override().push_category(&c).is_ok());
    }

    #[test]
    fn witness_category_breaks_threshold_pushforward() {
        let q = Quantale::cost();
        let bot = QValue::inf();
        let w = QCategory::new(
            &q,
            names(&["a", "b", "c"]),
            vec![
                vec![r(0.0), r(3.0), r(6.0)],
                vec![bot.clone(), r(0.0), r(3.0)],
                vec![bot.clone(), bot, r(0.0)],
            ],
        )
        .unwrap();
        let t = LaxMap::threshold(5.0).unwrap().unsafe_override();
        let err = t.push_category(&w).unwrap_err();
        assert!(matches!(
            err,
            Error::OverrideFailure { ref cause, .. } if **cause == Error::CompositionAxiom("a".into(), "b".into(), "c".into())
        ));
    }

    #[test]
    fn strict_push_keeps_tensor_structure() {
        let a = QCategory::from_order(names(&["x", "y"]), &[("x".into(), "y".into())]).unwrap();
        let t = a.tensor(&a).unwrap();
        let pushed = LaxMap::bool_to_unit(&Quantale::cost()).push_category(&t).unwrap();
        assert!(pushed.is_tensor());
        assert_eq!(pushed.hom_by_name("(x,x)", "(y,y)").unwrap(), &r(0.0));
        assert_eq!(pushed.hom_by_name("(y,x)", "(x,x)").unwrap(), &QValue::inf());
    }

    #[test]
    fn bool_then_cost_series() {
        let b = Quantale::bool();
        let c = Quantale::cost();
        let o = QCategory::from_order(names(&["0", "1"]), &[("0".into(), "1".into())]).unwrap();
        let d = DesignProblem::new(
            &o,
            &o,
            vec![vec![QValue::Bool(true), QValue::Bool(false)], vec![QValue::Bool(true), QValue::Bool(true)]],
        )
        .unwrap();
        let to_cost = LaxMap::bool_to_unit(&c);
        let oc = to_cost.push_category(&o).unwrap();
        let e = DesignProblem::new(&oc, &oc, vec![vec![r(1.0), r(4.0)], vec![r(0.5), r(2.0)]]).unwrap();
        let s = hetero_series(&d, &e, &to_cost, &LaxMap::identity(&c)).unwrap();
        // Oracle: cheapest e(m, f) over the m that d makes feasible.
        for ri in 0..2 {
            for fi in 0..2 {
                let best = (0..2)
                    .filter(|&m| d.value(ri, m) == &QValue::Bool(true))
                    .map(|m| e.value(m, fi).as_real().unwrap())
                    .fold(f64::INFINITY, f64::min);
                assert_eq!(s.value(ri, fi), &r(best));
            }
        }
        assert!(s.validate().is_ok());
        assert!(matches!(
            hetero_series(&d, &e, &LaxMap::identity(&b), &LaxMap::identity(&c)),
            Err(Error::QuantaleMismatch(..))
        ));
    }

    #[test]
    fn single_pair_implementation() {
        let r_cat = QCategory::from_order(names(&["r"]), &[]).unwrap();
        let m = QCategory::from_order(names(&["Low", "High"]), &[("Low".into(), "High".into())]).unwrap();
        let f = QCategory::from_order(names(&["f"]), &[]).unwrap();
        let ci = Catalog::new(&[("i1", "r", "High")]);
        let cj = Catalog::new(&[("j1", "Low", "f")]);
        let s = implementation_series(&ci, &cj, &r_cat, &m, &f).unwrap();
        assert_eq!(s.quantale().render_value(s.value(0, 0)), "[\"(i1,j1)\"]");
        let cj_hi = Catalog::new(&[("j1", "High", "f")]);
        let ci_lo = Catalog::new(&[("i1", "r", "Low")]);
        let s = implementation_series(&ci_lo, &cj_hi, &r_cat, &m, &f).unwrap();
        assert_eq!(s.value(0, 0), &QValue::Set(0));
    }
}
