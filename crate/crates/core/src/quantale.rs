//! Commutative quantales used as evaluation spaces for design queries.
//!
//! A [`Quantale`] is an immutable, cheaply clonable handle. Its elements are
//! plain [`QValue`] payloads; the handle decides how they are ordered, joined
//! and multiplied. Every carrier here is integral (the unit is the top
//! element), which the composition code relies on for closures.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};

/// Environment variable overriding the float comparison tolerance.
pub const TOLERANCE_ENV: &str = "QODESIGN_FLOAT_TOL";

/// Absolute tolerance used when comparing elements of real-valued carriers.
pub fn tolerance() -> f64 {
    static TOL: OnceLock<f64> = OnceLock::new();
    *TOL.get_or_init(|| {
        std::env::var(TOLERANCE_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|t| t.is_finite() && *t >= 0.0)
            .unwrap_or(1e-9)
    })
}

/// `u64::MAX` stands for the infinite natural.
pub const NAT_INF: u64 = u64::MAX;

/// Multiplication on the unit interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TNorm {
    Godel,
    Goguen,
    Lukasiewicz,
}

impl TNorm {
    pub const ALL: [TNorm; 3] = [TNorm::Godel, TNorm::Goguen, TNorm::Lukasiewicz];

    pub fn parse(tag: &str) -> Result<TNorm> {
        match tag.trim().to_ascii_lowercase().as_str() {
            "godel" | "gödel" | "min" => Ok(TNorm::Godel),
            "goguen" | "product" => Ok(TNorm::Goguen),
            "lukasiewicz" | "łukasiewicz" => Ok(TNorm::Lukasiewicz),
            _ => Err(Error::InvalidTNorm(tag.to_string())),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            TNorm::Godel => "godel",
            TNorm::Goguen => "goguen",
            TNorm::Lukasiewicz => "lukasiewicz",
        }
    }

    pub fn apply(self, p: f64, q: f64) -> f64 {
        match self {
            TNorm::Godel => p.min(q),
            TNorm::Goguen => p * q,
            TNorm::Lukasiewicz => (p + q - 1.0).max(0.0),
        }
    }
}

/// One carrier element. Which variant is meaningful depends on the quantale.
#[derive(Debug, Clone, PartialEq)]
pub enum QValue {
    Bool(bool),
    /// Index into a chain, 0 is the bottom.
    Level(u32),
    /// Cost (`[0, inf]`) or confidence (`[0, 1]`).
    Real(f64),
    /// Natural number, [`NAT_INF`] is infinity.
    Nat(u64),
    /// Subset of a powerset base, bit `i` set iff base element `i` is present.
    Set(u64),
    Tuple(Arc<[QValue]>),
}

impl QValue {
    pub fn real(x: f64) -> QValue {
        QValue::Real(x)
    }

    pub fn inf() -> QValue {
        QValue::Real(f64::INFINITY)
    }

    pub fn tuple(items: Vec<QValue>) -> QValue {
        QValue::Tuple(items.into())
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            QValue::Real(x) => Some(*x),
            QValue::Nat(n) if *n == NAT_INF => Some(f64::INFINITY),
            QValue::Nat(n) => Some(*n as f64),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            QValue::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_set(&self) -> Option<u64> {
        match self {
            QValue::Set(s) => Some(*s),
            _ => None,
        }
    }
}

/// The carrier and operations of a quantale.
#[derive(Debug, Clone, PartialEq)]
pub enum Kind {
    Bool,
    /// Finite total order, multiplication is the meet; names listed bottom first.
    Chain(Vec<String>),
    /// `([0, inf], >=, +, 0)`.
    Cost,
    /// `([0, 1], <=, t-norm, 1)`.
    Fuzz(TNorm),
    /// `(N u {inf}, >=, +, 0)`.
    Nat,
    /// Subsets of a finite base under inclusion, union and intersection.
    /// `pairs` is set when the base is the cartesian product of two other powersets' bases.
    Powerset {
        base: Vec<String>,
        pairs: Option<(Quantale, Quantale)>,
    },
    Product(Vec<Quantale>),
}

struct Inner {
    id: String,
    kind: Kind,
}

/// Shared handle to a quantale.
#[derive(Clone)]
pub struct Quantale(Arc<Inner>);

impl PartialEq for Quantale {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.id == other.0.id && self.0.kind == other.0.kind)
    }
}

impl fmt::Debug for Quantale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quantale({})", self.0.id)
    }
}

impl fmt::Display for Quantale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.id)
    }
}

fn check_unique(names: &[String]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::Duplicate(n.clone()));
        }
    }
    Ok(())
}

impl Quantale {
    fn new(id: impl Into<String>, kind: Kind) -> Quantale {
        Quantale(Arc::new(Inner { id: id.into(), kind }))
    }

    pub fn bool() -> Quantale {
        Quantale::new("Bool", Kind::Bool)
    }

    pub fn cost() -> Quantale {
        Quantale::new("Cost", Kind::Cost)
    }

    pub fn nat() -> Quantale {
        Quantale::new("Nat", Kind::Nat)
    }

    pub fn fuzz(tnorm: TNorm) -> Quantale {
        Quantale::new(format!("Fuzz({})", tnorm.tag()), Kind::Fuzz(tnorm))
    }

    /// PACE plan levels ordered `E < C < A < P`.
    pub fn pace() -> Quantale {
        Quantale::new(
            "Pace",
            Kind::Chain(["E", "C", "A", "P"].iter().map(|s| s.to_string()).collect()),
        )
    }

    pub fn chain(id: impl Into<String>, bottom_first: Vec<String>) -> Result<Quantale> {
        if bottom_first.is_empty() {
            return Err(Error::InvalidParameter("chain needs at least one level".into()));
        }
        check_unique(&bottom_first)?;
        Ok(Quantale::new(id, Kind::Chain(bottom_first)))
    }

    pub fn powerset(id: impl Into<String>, base: Vec<String>) -> Result<Quantale> {
        check_unique(&base)?;
        if base.len() > 64 {
            return Err(Error::PowersetTooLarge(base.len()));
        }
        Ok(Quantale::new(id, Kind::Powerset { base, pairs: None }))
    }

    /// `P(I x J)` with base elements named `(i,j)`, `i` major.
    pub fn powerset_pairs(id: impl Into<String>, left: &Quantale, right: &Quantale) -> Result<Quantale> {
        let (Some(a), Some(b)) = (left.powerset_base(), right.powerset_base()) else {
            return Err(Error::InvalidParameter(
                "powerset_pairs needs two powerset quantales".into(),
            ));
        };
        if a.len() * b.len() > 64 {
            return Err(Error::PowersetTooLarge(a.len() * b.len()));
        }
        let base = a
            .iter()
            .flat_map(|i| b.iter().map(move |j| format!("({i},{j})")))
            .collect();
        Ok(Quantale::new(
            id,
            Kind::Powerset {
                base,
                pairs: Some((left.clone(), right.clone())),
            },
        ))
    }

    pub fn product(id: impl Into<String>, factors: Vec<Quantale>) -> Result<Quantale> {
        if factors.is_empty() {
            return Err(Error::EmptyProduct);
        }
        Ok(Quantale::new(id, Kind::Product(factors)))
    }

    /// `base^n`, the product indexed by a finite set.
    pub fn power(id: impl Into<String>, base: &Quantale, index: &[String]) -> Result<Quantale> {
        check_unique(index)?;
        Quantale::product(id, vec![base.clone(); index.len()])
    }

    /// Builds one of the named quantales. `params` carries the t-norm for `fuzz`.
    pub fn make_builtin(kind: &str, params: &[&str]) -> Result<Quantale> {
        let no_params = |q: Quantale| {
            if params.is_empty() {
                Ok(q)
            } else {
                Err(Error::InvalidParameter(format!("`{kind}` takes no parameters")))
            }
        };
        match kind.trim().to_ascii_lowercase().as_str() {
            "bool" => no_params(Quantale::bool()),
            "cost" => no_params(Quantale::cost()),
            "pace" => no_params(Quantale::pace()),
            "nat" => no_params(Quantale::nat()),
            "fuzz" => match params {
                [tag] => Ok(Quantale::fuzz(TNorm::parse(tag)?)),
                _ => Err(Error::InvalidTNorm(params.join(","))),
            },
            other => Err(Error::UnknownKind(other.to_string())),
        }
    }

    pub fn renamed(&self, id: impl Into<String>) -> Quantale {
        Quantale::new(id, self.0.kind.clone())
    }

    pub fn id(&self) -> &str {
        &self.0.id
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn powerset_base(&self) -> Option<&[String]> {
        match &self.0.kind {
            Kind::Powerset { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn powerset_pairs_of(&self) -> Option<&(Quantale, Quantale)> {
        match &self.0.kind {
            Kind::Powerset { pairs, .. } => pairs.as_ref(),
            _ => None,
        }
    }

    fn full_set(n: usize) -> u64 {
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    /// Whether real-valued comparisons in this quantale are tolerance based.
    pub fn is_float(&self) -> bool {
        match &self.0.kind {
            Kind::Cost | Kind::Fuzz(_) => true,
            Kind::Product(fs) => fs.iter().any(Quantale::is_float),
            _ => false,
        }
    }

    pub fn contains(&self, v: &QValue) -> bool {
        match (&self.0.kind, v) {
            (Kind::Bool, QValue::Bool(_)) => true,
            (Kind::Chain(names), QValue::Level(i)) => (*i as usize) < names.len(),
            (Kind::Cost, QValue::Real(x)) => *x >= 0.0 && !x.is_nan(),
            (Kind::Fuzz(_), QValue::Real(x)) => (0.0..=1.0).contains(x),
            (Kind::Nat, QValue::Nat(_)) => true,
            (Kind::Powerset { base, .. }, QValue::Set(s)) => s & !Self::full_set(base.len()) == 0,
            (Kind::Product(fs), QValue::Tuple(items)) => {
                fs.len() == items.len() && fs.iter().zip(items.iter()).all(|(q, x)| q.contains(x))
            }
            _ => false,
        }
    }

    pub fn check(&self, v: &QValue) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::ForeignValue {
                quantale: self.id().to_string(),
                value: format!("{v:?}"),
            })
        }
    }

    /// The order `p ⊑ q`.
    pub fn leq(&self, p: &QValue, q: &QValue) -> bool {
        let tol = tolerance();
        match (&self.0.kind, p, q) {
            (Kind::Bool, QValue::Bool(a), QValue::Bool(b)) => !a || *b,
            (Kind::Chain(_), QValue::Level(a), QValue::Level(b)) => a <= b,
            (Kind::Cost, QValue::Real(a), QValue::Real(b)) => *a >= *b - tol,
            (Kind::Fuzz(_), QValue::Real(a), QValue::Real(b)) => *a <= *b + tol,
            (Kind::Nat, QValue::Nat(a), QValue::Nat(b)) => a >= b,
            (Kind::Powerset { .. }, QValue::Set(a), QValue::Set(b)) => a & !b == 0,
            (Kind::Product(fs), QValue::Tuple(a), QValue::Tuple(b)) => fs
                .iter()
                .zip(a.iter().zip(b.iter()))
                .all(|(q, (x, y))| q.leq(x, y)),
            _ => panic!("leq on foreign values {p:?}, {q:?} in {}", self.id()),
        }
    }

    /// Equality, up to the float tolerance on real carriers.
    pub fn eq(&self, p: &QValue, q: &QValue) -> bool {
        match (&self.0.kind, p, q) {
            (Kind::Cost | Kind::Fuzz(_), QValue::Real(a), QValue::Real(b)) => {
                a == b || (a - b).abs() <= tolerance()
            }
            (Kind::Product(fs), QValue::Tuple(a), QValue::Tuple(b)) => fs
                .iter()
                .zip(a.iter().zip(b.iter()))
                .all(|(q, (x, y))| q.eq(x, y)),
            _ => p == q,
        }
    }

    pub fn join2(&self, p: &QValue, q: &QValue) -> QValue {
        match (&self.0.kind, p, q) {
            (Kind::Bool, QValue::Bool(a), QValue::Bool(b)) => QValue::Bool(*a || *b),
            (Kind::Chain(_), QValue::Level(a), QValue::Level(b)) => QValue::Level(*a.max(b)),
            (Kind::Cost, QValue::Real(a), QValue::Real(b)) => QValue::Real(a.min(*b)),
            (Kind::Fuzz(_), QValue::Real(a), QValue::Real(b)) => QValue::Real(a.max(*b)),
            (Kind::Nat, QValue::Nat(a), QValue::Nat(b)) => QValue::Nat(*a.min(b)),
            (Kind::Powerset { .. }, QValue::Set(a), QValue::Set(b)) => QValue::Set(a | b),
            (Kind::Product(fs), QValue::Tuple(a), QValue::Tuple(b)) => QValue::tuple(
                fs.iter()
                    .zip(a.iter().zip(b.iter()))
                    .map(|(q, (x, y))| q.join2(x, y))
                    .collect(),
            ),
            _ => panic!("join on foreign values {p:?}, {q:?} in {}", self.id()),
        }
    }

    /// Join of a finite family, folded left to right; the empty join is ⊥.
    pub fn join<'a, I: IntoIterator<Item = &'a QValue>>(&self, family: I) -> QValue {
        family
            .into_iter()
            .fold(self.bottom(), |acc, x| self.join2(&acc, x))
    }

    pub fn mult(&self, p: &QValue, q: &QValue) -> QValue {
        match (&self.0.kind, p, q) {
            (Kind::Bool, QValue::Bool(a), QValue::Bool(b)) => QValue::Bool(*a && *b),
            (Kind::Chain(_), QValue::Level(a), QValue::Level(b)) => QValue::Level(*a.min(b)),
            (Kind::Cost, QValue::Real(a), QValue::Real(b)) => QValue::Real(a + b),
            (Kind::Fuzz(t), QValue::Real(a), QValue::Real(b)) => QValue::Real(t.apply(*a, *b)),
            (Kind::Nat, QValue::Nat(a), QValue::Nat(b)) => QValue::Nat(a.saturating_add(*b)),
            (Kind::Powerset { .. }, QValue::Set(a), QValue::Set(b)) => QValue::Set(a & b),
            (Kind::Product(fs), QValue::Tuple(a), QValue::Tuple(b)) => QValue::tuple(
                fs.iter()
                    .zip(a.iter().zip(b.iter()))
                    .map(|(q, (x, y))| q.mult(x, y))
                    .collect(),
            ),
            _ => panic!("mult on foreign values {p:?}, {q:?} in {}", self.id()),
        }
    }

    pub fn unit(&self) -> QValue {
        match &self.0.kind {
            Kind::Bool => QValue::Bool(true),
            Kind::Chain(names) => QValue::Level(names.len() as u32 - 1),
            Kind::Cost => QValue::Real(0.0),
            Kind::Fuzz(_) => QValue::Real(1.0),
            Kind::Nat => QValue::Nat(0),
            Kind::Powerset { base, .. } => QValue::Set(Self::full_set(base.len())),
            Kind::Product(fs) => QValue::tuple(fs.iter().map(Quantale::unit).collect()),
        }
    }

    pub fn bottom(&self) -> QValue {
        match &self.0.kind {
            Kind::Bool => QValue::Bool(false),
            Kind::Chain(_) => QValue::Level(0),
            Kind::Cost => QValue::Real(f64::INFINITY),
            Kind::Fuzz(_) => QValue::Real(0.0),
            Kind::Nat => QValue::Nat(NAT_INF),
            Kind::Powerset { .. } => QValue::Set(0),
            Kind::Product(fs) => QValue::tuple(fs.iter().map(Quantale::bottom).collect()),
        }
    }

    /// Every carrier in this crate is integral, so ⊤ coincides with the unit.
    pub fn top(&self) -> QValue {
        self.unit()
    }

    pub fn is_bottom(&self, v: &QValue) -> bool {
        self.eq(v, &self.bottom())
    }

    /// `[p, q] = ⊔{ r | p ⊙ r ⊑ q }`, the largest `r` with `p ⊙ r ⊑ q`.
    pub fn internal_hom(&self, p: &QValue, q: &QValue) -> Result<QValue> {
        self.check(p)?;
        self.check(q)?;
        let tol = tolerance();
        Ok(match (&self.0.kind, p, q) {
            (Kind::Bool, QValue::Bool(a), QValue::Bool(b)) => QValue::Bool(!a || *b),
            (Kind::Cost, QValue::Real(a), QValue::Real(b)) => {
                if a.is_infinite() || *a >= *b - tol {
                    QValue::Real(0.0)
                } else {
                    QValue::Real(b - a)
                }
            }
            (Kind::Fuzz(t), QValue::Real(a), QValue::Real(b)) => QValue::Real(match t {
                TNorm::Godel => {
                    if *a <= *b + tol {
                        1.0
                    } else {
                        *b
                    }
                }
                TNorm::Goguen => {
                    if *a <= *b + tol {
                        1.0
                    } else {
                        (b / a).min(1.0)
                    }
                }
                TNorm::Lukasiewicz => (1.0 - a + b).clamp(0.0, 1.0),
            }),
            (Kind::Nat, QValue::Nat(a), QValue::Nat(b)) => {
                if *a == NAT_INF || a >= b {
                    QValue::Nat(0)
                } else if *b == NAT_INF {
                    QValue::Nat(NAT_INF)
                } else {
                    QValue::Nat(b - a)
                }
            }
            (Kind::Powerset { base, .. }, QValue::Set(a), QValue::Set(b)) => {
                QValue::Set((!a | b) & Self::full_set(base.len()))
            }
            (Kind::Product(fs), QValue::Tuple(a), QValue::Tuple(b)) => {
                let mut out = Vec::with_capacity(fs.len());
                for (f, (x, y)) in fs.iter().zip(a.iter().zip(b.iter())) {
                    out.push(f.internal_hom(x, y)?);
                }
                QValue::tuple(out)
            }
            // Finite chains use the defining join directly.
            (Kind::Chain(_), _, _) => self.definitional_hom(p, q).expect("chains are finite"),
            _ => unreachable!("membership was checked"),
        })
    }

    /// Internal hom by enumerating the carrier; `None` when it is not finite.
    pub fn definitional_hom(&self, p: &QValue, q: &QValue) -> Option<QValue> {
        let elems = self.elements()?;
        let admissible: Vec<&QValue> = elems
            .iter()
            .filter(|r| self.leq(&self.mult(p, r), q))
            .collect();
        Some(self.join(admissible))
    }

    /// All elements, when the carrier is finite and reasonably small (≤ 4096).
    pub fn elements(&self) -> Option<Vec<QValue>> {
        const LIMIT: usize = 4096;
        match &self.0.kind {
            Kind::Bool => Some(vec![QValue::Bool(false), QValue::Bool(true)]),
            Kind::Chain(names) => Some((0..names.len() as u32).map(QValue::Level).collect()),
            Kind::Powerset { base, .. } if base.len() <= 12 => {
                Some((0..(1u64 << base.len())).map(QValue::Set).collect())
            }
            Kind::Product(fs) => {
                let mut acc: Vec<Vec<QValue>> = vec![Vec::new()];
                for f in fs {
                    let es = f.elements()?;
                    if acc.len() * es.len() > LIMIT {
                        return None;
                    }
                    acc = acc
                        .into_iter()
                        .flat_map(|prefix| {
                            es.iter().map(move |e| {
                                let mut v = prefix.clone();
                                v.push(e.clone());
                                v
                            })
                        })
                        .collect();
                }
                Some(acc.into_iter().map(QValue::tuple).collect())
            }
            _ => None,
        }
    }

    /// A fixed, finite sample of the carrier that always contains ⊥ and e.
    pub fn grid(&self) -> Vec<QValue> {
        if let Some(es) = self.elements() {
            return es;
        }
        match &self.0.kind {
            Kind::Cost => [0.0, 0.5, 1.0, 2.0, 3.0, 5.0, 7.5, 10.0, 100.0, f64::INFINITY]
                .into_iter()
                .map(QValue::Real)
                .collect(),
            Kind::Fuzz(_) => [0.0, 0.1, 0.25, 0.5, 0.7, 0.9, 1.0]
                .into_iter()
                .map(QValue::Real)
                .collect(),
            Kind::Nat => [0, 1, 2, 3, 5, 10, 100, NAT_INF]
                .into_iter()
                .map(QValue::Nat)
                .collect(),
            Kind::Powerset { base, .. } => {
                let full = Self::full_set(base.len());
                let mut v = vec![QValue::Set(0), QValue::Set(full)];
                for i in 0..base.len() {
                    v.push(QValue::Set(1 << i));
                    v.push(QValue::Set(full & !(1 << i)));
                }
                v
            }
            Kind::Product(fs) => {
                // Diagonal-ish sample: pair every factor grid point with the others' extremes.
                let grids: Vec<Vec<QValue>> = fs.iter().map(Quantale::grid).collect();
                let mut out = vec![self.bottom(), self.unit()];
                for (i, g) in grids.iter().enumerate() {
                    for x in g {
                        for base in [self.bottom(), self.unit()] {
                            let QValue::Tuple(items) = base else { unreachable!() };
                            let mut items = items.to_vec();
                            items[i] = x.clone();
                            out.push(QValue::tuple(items));
                        }
                    }
                }
                out
            }
            _ => unreachable!("finite carriers handled above"),
        }
    }

    /// A random element; extremes (⊥, e) are drawn with elevated probability.
    pub fn random_value<R: Rng + ?Sized>(&self, rng: &mut R) -> QValue {
        match &self.0.kind {
            Kind::Bool => QValue::Bool(rng.gen_bool(0.5)),
            Kind::Chain(names) => QValue::Level(rng.gen_range(0..names.len() as u32)),
            Kind::Cost => {
                let u: f64 = rng.gen();
                if u < 0.15 {
                    QValue::Real(f64::INFINITY)
                } else if u < 0.25 {
                    QValue::Real(0.0)
                } else {
                    // Quarter steps keep some sums exactly tied.
                    QValue::Real(rng.gen_range(0..80) as f64 * 0.25)
                }
            }
            Kind::Fuzz(_) => {
                let u: f64 = rng.gen();
                if u < 0.1 {
                    QValue::Real(0.0)
                } else if u < 0.2 {
                    QValue::Real(1.0)
                } else {
                    QValue::Real(rng.gen_range(0..=20) as f64 / 20.0)
                }
            }
            Kind::Nat => {
                if rng.gen_bool(0.15) {
                    QValue::Nat(NAT_INF)
                } else {
                    QValue::Nat(rng.gen_range(0..30))
                }
            }
            Kind::Powerset { base, .. } => QValue::Set(rng.gen::<u64>() & Self::full_set(base.len())),
            Kind::Product(fs) => QValue::tuple(fs.iter().map(|f| f.random_value(rng)).collect()),
        }
    }

    /// Full-precision textual form, the inverse of [`Quantale::parse_value`].
    pub fn render_value(&self, v: &QValue) -> String {
        self.render_with(v, &|x| format!("{x}"))
    }

    /// Table form: reals with 6 significant digits.
    pub fn render_short(&self, v: &QValue) -> String {
        self.render_with(v, &format_sig6)
    }

    fn render_with(&self, v: &QValue, real: &dyn Fn(f64) -> String) -> String {
        match (&self.0.kind, v) {
            (Kind::Bool, QValue::Bool(b)) => b.to_string(),
            (Kind::Chain(names), QValue::Level(i)) => quote_if_needed(&names[*i as usize]),
            (Kind::Cost | Kind::Fuzz(_), QValue::Real(x)) => {
                if x.is_infinite() {
                    "inf".into()
                } else {
                    real(*x)
                }
            }
            (Kind::Nat, QValue::Nat(n)) => {
                if *n == NAT_INF {
                    "inf".into()
                } else {
                    n.to_string()
                }
            }
            (Kind::Powerset { base, .. }, QValue::Set(s)) => {
                let names: Vec<String> = (0..base.len())
                    .filter(|i| s >> i & 1 == 1)
                    .map(|i| quote_if_needed(&base[i]))
                    .collect();
                format!("[{}]", names.join(", "))
            }
            (Kind::Product(fs), QValue::Tuple(items)) => {
                let parts: Vec<String> = fs
                    .iter()
                    .zip(items.iter())
                    .map(|(q, x)| q.render_with(x, real))
                    .collect();
                format!("({})", parts.join(", "))
            }
            _ => format!("{v:?}"),
        }
    }

    pub fn parse_value(&self, text: &str) -> Result<QValue> {
        let t = text.trim();
        let bad = || Error::BadValue {
            quantale: self.id().to_string(),
            text: text.to_string(),
        };
        let parse_real = |s: &str| -> Option<f64> {
            let s = s.trim().trim_start_matches('$');
            match s {
                "inf" | "∞" => Some(f64::INFINITY),
                _ => s.parse::<f64>().ok(),
            }
        };
        let v = match &self.0.kind {
            Kind::Bool => match t {
                "true" | "t" => QValue::Bool(true),
                "false" | "f" => QValue::Bool(false),
                _ => return Err(bad()),
            },
            Kind::Chain(names) => {
                let name = unquote(t);
                QValue::Level(names.iter().position(|n| *n == name).ok_or_else(bad)? as u32)
            }
            Kind::Cost | Kind::Fuzz(_) => QValue::Real(parse_real(t).ok_or_else(bad)?),
            Kind::Nat => {
                if t == "inf" || t == "∞" {
                    QValue::Nat(NAT_INF)
                } else {
                    QValue::Nat(t.parse().map_err(|_| bad())?)
                }
            }
            Kind::Powerset { base, .. } => {
                let inner = t
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .or_else(|| t.strip_prefix('{').and_then(|s| s.strip_suffix('}')))
                    .ok_or_else(bad)?;
                let mut bits = 0u64;
                for item in split_top_level(inner) {
                    let name = unquote(&item);
                    let i = base.iter().position(|b| *b == name).ok_or_else(bad)?;
                    bits |= 1 << i;
                }
                QValue::Set(bits)
            }
            Kind::Product(fs) => {
                let inner = t
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(bad)?;
                let items = split_top_level(inner);
                if items.len() != fs.len() {
                    return Err(bad());
                }
                let mut out = Vec::with_capacity(items.len());
                for (f, item) in fs.iter().zip(items.iter()) {
                    out.push(f.parse_value(item)?);
                }
                QValue::tuple(out)
            }
        };
        if self.contains(&v) {
            Ok(v)
        } else {
            Err(bad())
        }
    }
}

/// Splits on commas that are not nested in brackets or quotes. Empty input gives no items.
pub(crate) fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut in_quote = false;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '"' => {
                in_quote = !in_quote;
                cur.push(c);
            }
            '(' | '[' | '{' if !in_quote => {
                depth += 1;
                cur.push(c);
            }
            ')' | ']' | '}' if !in_quote => {
                depth -= 1;
                cur.push(c);
            }
            ',' if depth == 0 && !in_quote => {
                out.push(cur.trim().to_string());
                cur.clear();
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

pub(crate) fn unquote(s: &str) -> String {
    let s = s.trim();
    if s.len() >= 2 && s.starts_with('"') && s.ends_with('"') {
        s[1..s.len() - 1].to_string()
    } else {
        s.to_string()
    }
}

/// Names made of "plain" characters are written bare, anything else is quoted.
pub(crate) fn is_plain_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| {
            c.is_alphanumeric() || matches!(c, '_' | '.' | '$' | '-' | '+' | '*' | '\'' | '⋆')
        })
}

pub(crate) fn quote_if_needed(s: &str) -> String {
    if is_plain_name(s) {
        s.to_string()
    } else {
        format!("\"{s}\"")
    }
}

/// `%g`-style formatting with 6 significant digits.
pub fn format_sig6(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..6).contains(&exp) {
        let s = format!("{:.5e}", x);
        let (mant, e) = s.split_once('e').unwrap();
        let mant = trim_zeros(mant);
        return format!("{mant}e{e}");
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x))
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}
