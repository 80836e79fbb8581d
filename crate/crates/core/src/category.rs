//! Finite quantale-enriched categories.
//!
//! Hom matrices are dense and row-major: entry `(x, y)` is `hom(x, y)`, the
//! row being the first argument.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quantale::{QValue, Quantale, NAT_INF};

struct Inner {
    quantale: Quantale,
    objects: Vec<String>,
    index: HashMap<String, usize>,
    hom: Vec<QValue>,
    /// Flattened tensor factors; empty for an atomic category.
    factors: Vec<QCategory>,
}

/// A validated Q-category. Cloning is cheap.
#[derive(Clone)]
pub struct QCategory(Arc<Inner>);

impl fmt::Debug for QCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QCategory[{}; {}]", self.0.quantale, self.0.objects.join(", "))
    }
}

/// Above this many objects a tensor's axioms are inherited from its factors
/// instead of being rescanned (the pointwise product of valid categories is valid).
const TENSOR_RESCAN_LIMIT: usize = 300;

pub(crate) fn index_names(objects: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(objects.len());
    for (i, o) in objects.iter().enumerate() {
        if index.insert(o.clone(), i).is_some() {
            return Err(Error::Duplicate(o.clone()));
        }
    }
    Ok(index)
}

impl QCategory {
    /// Builds and validates a category from a square hom table (rows = first argument).
    pub fn new(quantale: &Quantale, objects: Vec<String>, hom: Vec<Vec<QValue>>) -> Result<QCategory> {
        let n = objects.len();
        if hom.len() != n || hom.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension(format!(
                "hom table must be {n}x{n} for {n} objects"
            )));
        }
        QCategory::from_flat(quantale, objects, hom.into_iter().flatten().collect())
    }

    pub fn from_flat(quantale: &Quantale, objects: Vec<String>, hom: Vec<QValue>) -> Result<QCategory> {
        let n = objects.len();
        if hom.len() != n * n {
            return Err(Error::Dimension(format!(
                "hom table has {} entries, expected {}",
                hom.len(),
                n * n
            )));
        }
        for v in &hom {
            quantale.check(v)?;
        }
        let cat = QCategory::unchecked(quantale.clone(), objects, hom, Vec::new())?;
        cat.validate()?;
        Ok(cat)
    }

    pub(crate) fn unchecked(
        quantale: Quantale,
        objects: Vec<String>,
        hom: Vec<QValue>,
        factors: Vec<QCategory>,
    ) -> Result<QCategory> {
        let index = index_names(&objects)?;
        Ok(QCategory(Arc::new(Inner {
            quantale,
            objects,
            index,
            hom,
            factors,
        })))
    }

    /// `e` on the diagonal and `⊥` elsewhere.
    pub fn discrete(quantale: &Quantale, objects: Vec<String>) -> Result<QCategory> {
        let n = objects.len();
        let mut hom = vec![quantale.bottom(); n * n];
        for i in 0..n {
            hom[i * n + i] = quantale.unit();
        }
        QCategory::unchecked(quantale.clone(), objects, hom, Vec::new())
    }

    /// The Bool category of the reflexive-transitive closure of `pairs` (`(x, y)` means `x ⪯ y`).
    pub fn from_order(objects: Vec<String>, pairs: &[(String, String)]) -> Result<QCategory> {
        let index = index_names(&objects)?;
        let n = objects.len();
        let mut rel = vec![false; n * n];
        for i in 0..n {
            rel[i * n + i] = true;
        }
        for (a, b) in pairs {
            let i = *index.get(a).ok_or_else(|| Error::UnknownObject(a.clone()))?;
            let j = *index.get(b).ok_or_else(|| Error::UnknownObject(b.clone()))?;
            rel[i * n + j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if rel[i * n + k] {
                    for j in 0..n {
                        if rel[k * n + j] {
                            rel[i * n + j] = true;
                        }
                    }
                }
            }
        }
        let hom = rel.into_iter().map(QValue::Bool).collect();
        QCategory::unchecked(Quantale::bool(), objects, hom, Vec::new())
    }

    /// The Bool category of a relation given as a predicate on indices; it must already be a preorder.
    pub fn from_predicate(objects: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<QCategory> {
        let n = objects.len();
        let mut hom = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                hom.push(QValue::Bool(leq(i, j)));
            }
        }
        QCategory::from_flat(&Quantale::bool(), objects, hom)
    }

    /// `N̄`-category on `0..=cap` (plus `inf` if requested) with `hom(n, m) = m - n` truncated at 0.
    pub fn nat_category(cap: u64, with_inf: bool) -> Result<QCategory> {
        let mut values: Vec<u64> = (0..=cap).collect();
        if with_inf {
            values.push(NAT_INF);
        }
        QCategory::nat_category_on(&values)
    }

    /// `N̄`-category on an arbitrary set of naturals.
    pub fn nat_category_on(values: &[u64]) -> Result<QCategory> {
        let objects = values
            .iter()
            .map(|&v| if v == NAT_INF { "inf".to_string() } else { v.to_string() })
            .collect();
        let q = Quantale::nat();
        let mut hom = Vec::with_capacity(values.len() * values.len());
        for &n in values {
            for &m in values {
                // Truncated difference, which is exactly [n, m] in N̄.
                hom.push(q.internal_hom(&QValue::Nat(n), &QValue::Nat(m))?);
            }
        }
        let cat = QCategory::unchecked(q, objects, hom, Vec::new())?;
        if values.len() <= 64 {
            cat.validate()?;
        }
        Ok(cat)
    }

    pub fn quantale(&self) -> &Quantale {
        &self.0.quantale
    }

    pub fn objects(&self) -> &[String] {
        &self.0.objects
    }

    pub fn len(&self) -> usize {
        self.0.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.objects.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn hom(&self, x: usize, y: usize) -> &QValue {
        &self.0.hom[x * self.len() + y]
    }

    pub fn hom_by_name(&self, x: &str, y: &str) -> Result<&QValue> {
        Ok(self.hom(self.index_of(x)?, self.index_of(y)?))
    }

    pub fn hom_flat(&self) -> &[QValue] {
        &self.0.hom
    }

    pub fn hom_rows(&self) -> Vec<Vec<QValue>> {
        self.0.hom.chunks(self.len().max(1)).take(self.len()).map(|c| c.to_vec()).collect()
    }

    pub fn is_tensor(&self) -> bool {
        !self.0.factors.is_empty()
    }

    /// Flattened factors; an atomic category is its own single factor.
    pub fn factors(&self) -> Vec<QCategory> {
        if self.is_tensor() {
            self.0.factors.clone()
        } else {
            vec![self.clone()]
        }
    }

    /// Checks both axioms exhaustively, reporting the first witness.
    pub fn validate(&self) -> Result<()> {
        let q = &self.0.quantale;
        let n = self.len();
        let e = q.unit();
        for x in 0..n {
            if !q.leq(&e, self.hom(x, x)) {
                return Err(Error::IdentityAxiom(self.0.objects[x].clone()));
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = self.hom(x, y);
                if q.is_bottom(xy) {
                    continue;
                }
                for z in 0..n {
                    if !q.leq(&q.mult(xy, self.hom(y, z)), self.hom(x, z)) {
                        let o = &self.0.objects;
                        return Err(Error::CompositionAxiom(o[x].clone(), o[y].clone(), o[z].clone()));
                    }
                }
            }
        }
        Ok(())
    }

    /// `(C ⊗ D)((c,d),(c',d')) = C(c,c') ⊙ D(d,d')`, objects in lexicographic order.
    pub fn tensor(&self, other: &QCategory) -> Result<QCategory> {
        QCategory::tensor_all(&[self.clone(), other.clone()])
    }

    pub fn tensor_all(cats: &[QCategory]) -> Result<QCategory> {
        let Some(first) = cats.first() else {
            return Err(Error::Dimension("tensor of no categories".into()));
        };
        let q = first.quantale().clone();
        for c in cats {
            if *c.quantale() != q {
                return Err(Error::QuantaleMismatch(q.id().into(), c.quantale().id().into()));
            }
        }
        let factors: Vec<QCategory> = cats.iter().flat_map(|c| c.factors()).collect();
        if factors.len() == 1 {
            return Ok(factors[0].clone());
        }
        let sizes: Vec<usize> = factors.iter().map(QCategory::len).collect();
        let n: usize = sizes.iter().product();
        let tuples = mixed_radix(&sizes);
        let objects = tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t
                    .iter()
                    .zip(&factors)
                    .map(|(&i, f)| f.objects()[i].as_str())
                    .collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let mut hom = Vec::with_capacity(n * n);
        for a in &tuples {
            for b in &tuples {
                let mut v = q.unit();
                for (k, f) in factors.iter().enumerate() {
                    v = q.mult(&v, f.hom(a[k], b[k]));
                }
                hom.push(v);
            }
        }
        let cat = QCategory::unchecked(q, objects, hom, factors)?;
        if n <= TENSOR_RESCAN_LIMIT {
            cat.validate()?;
        }
        Ok(cat)
    }

    /// Splits a flat object index into per-factor indices.
    pub fn decompose(&self, idx: usize) -> Vec<usize> {
        let fs = self.factors();
        let mut out = vec![0; fs.len()];
        let mut rest = idx;
        for (k, f) in fs.iter().enumerate().rev() {
            out[k] = rest % f.len();
            rest /= f.len();
        }
        out
    }

    /// Same objects, quantale and hom-values (up to tolerance).
    pub fn same_as(&self, other: &QCategory) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        self.quantale() == other.quantale()
            && self.objects() == other.objects()
            && self
                .hom_flat()
                .iter()
                .zip(other.hom_flat())
                .all(|(a, b)| self.quantale().eq(a, b))
    }
}

/// All index tuples of a mixed-radix counter, last digit fastest.
pub(crate) fn mixed_radix(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for &s in sizes {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..s).map(move |i| {
                    let mut v = p.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
pub(crate) fn names(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> QValue {
        QValue::Real(x)
    }

    /// Independent triple-loop axiom oracle.
    fn axioms_hold(q: &Quantale, hom: &[Vec<QValue>]) -> bool {
        let n = hom.len();
        (0..n).all(|x| q.leq(&q.unit(), &hom[x][x]))
            && (0..n).all(|x| {
                (0..n).all(|y| (0..n).all(|z| q.leq(&q.mult(&hom[x][y], &hom[y][z]), &hom[x][z])))
            })
    }

    #[test]
    fn power_chain_is_valid() {
        let c = QCategory::from_order(
            names(&["5W", "10W", "20W"]),
            &[("5W".into(), "10W".into()), ("10W".into(), "20W".into())],
        )
        .unwrap();
        assert_eq!(c.hom_by_name("5W", "20W").unwrap(), &QValue::Bool(true));
        assert_eq!(c.hom_by_name("20W", "5W").unwrap(), &QValue::Bool(false));
        assert!(c.validate().is_ok());
    }

    #[test]
    fn low_high_matrix() {
        let c = QCategory::from_order(names(&["Low", "High"]), &[("Low".into(), "High".into())]).unwrap();
        let t = QValue::Bool(true);
        let f = QValue::Bool(false);
        assert_eq!(c.hom_rows(), vec![vec![t.clone(), t.clone()], vec![f, t]]);
        let empty = QCategory::from_order(names(&["a", "b"]), &[]).unwrap();
        assert_eq!(empty.hom_by_name("a", "b").unwrap(), &QValue::Bool(false));
    }

    #[test]
    fn cost_metric_and_identity_failure() {
        let q = Quantale::cost();
        let ok = QCategory::new(&q, names(&["a", "b"]), vec![vec![r(0.0), r(1.0)], vec![r(1.0), r(0.0)]]);
        assert!(ok.is_ok());
        let bad = QCategory::new(&q, names(&["a", "b"]), vec![vec![r(2.0), r(1.0)], vec![r(1.0), r(0.0)]]);
        assert_eq!(bad.unwrap_err(), Error::IdentityAxiom("a".into()));
    }

    #[test]
    fn dimension_and_foreign_values() {
        let q = Quantale::cost();
        assert!(matches!(
            QCategory::new(&q, names(&["a"]), vec![vec![r(0.0), r(0.0)]]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            QCategory::new(&q, names(&["a"]), vec![vec![QValue::Bool(true)]]),
            Err(Error::ForeignValue { .. })
        ));
    }

    #[test]
    fn nat_category_homs() {
        let c = QCategory::nat_category(20, false).unwrap();
        assert_eq!(c.hom_by_name("3", "3").unwrap(), &QValue::Nat(0));
        assert_eq!(c.hom_by_name("2", "5").unwrap(), &QValue::Nat(3));
        assert_eq!(c.hom_by_name("1", "3").unwrap(), &QValue::Nat(2));
        assert_eq!(c.hom_by_name("1", "6").unwrap(), &QValue::Nat(5));
        assert!(c.validate().is_ok());
        let ci = QCategory::nat_category(3, true).unwrap();
        assert_eq!(ci.hom_by_name("2", "inf").unwrap(), &QValue::Nat(NAT_INF));
        assert_eq!(ci.hom_by_name("inf", "2").unwrap(), &QValue::Nat(0));
    }

    #[test]
    fn tensor_of_bool_orders_is_kronecker() {
        let a = QCategory::from_order(names(&["a0", "a1"]), &[("a0".into(), "a1".into())]).unwrap();
        let b = QCategory::from_order(names(&["b0", "b1"]), &[]).unwrap();
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.objects(), &names(&["(a0,b0)", "(a0,b1)", "(a1,b0)", "(a1,b1)"]));
        for x in 0..4 {
            for y in 0..4 {
                let expect = a.hom(x / 2, y / 2).as_bool().unwrap() && b.hom(x % 2, y % 2).as_bool().unwrap();
                assert_eq!(t.hom(x, y), &QValue::Bool(expect));
            }
        }
        let rows = t.hom_rows();
        assert!(axioms_hold(t.quantale(), &rows));
    }

    #[test]
    fn tensor_cost_adds_and_flattens() {
        let q = Quantale::cost();
        let a = QCategory::new(&q, names(&["a", "b"]), vec![vec![r(0.0), r(1.0)], vec![r(2.0), r(0.0)]]).unwrap();
        let x = QCategory::new(&q, names(&["x", "y"]), vec![vec![r(0.0), r(4.0)], vec![r(3.0), r(0.0)]]).unwrap();
        let t = a.tensor(&x).unwrap();
        assert_eq!(t.hom_by_name("(a,x)", "(b,y)").unwrap(), &r(5.0));
        let left = t.tensor(&a).unwrap();
        let right = a.tensor(&x.tensor(&a).unwrap()).unwrap();
        assert!(left.same_as(&right));
        assert_eq!(left.objects()[0], "(a,x,a)");
        assert_eq!(left.decompose(5), vec![1, 0, 1]);
        let b = QCategory::from_order(names(&["p"]), &[]).unwrap();
        assert!(matches!(a.tensor(&b), Err(Error::QuantaleMismatch(..))));
    }

    #[test]
    fn validation_matches_oracle_on_random_tables() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(11);
        let qs = [Quantale::cost(), Quantale::bool(), Quantale::pace()];
        for round in 0..600 {
            let q = &qs[round % qs.len()];
            let n = rng.gen_range(1..=4);
            let hom: Vec<Vec<QValue>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j && rng.gen_bool(0.8) { q.unit() } else { q.random_value(&mut rng) })
                        .collect()
                })
                .collect();
            let objs = (0..n).map(|i| format!("o{i}")).collect();
            let built = QCategory::new(q, objs, hom.clone());
            assert_eq!(built.is_ok(), axioms_hold(q, &hom), "{q} {hom:?}");
        }
    }
}
