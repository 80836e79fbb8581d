//! Design problems (enriched profunctors) and the series / parallel / trace operators.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::category::QCategory;
use crate::error::{Error, Result};
use crate::quantale::{QValue, Quantale};

struct Inner {
    source: QCategory,
    target: QCategory,
    /// Row-major `|R| x |F|`.
    values: Vec<QValue>,
}

/// A validated design problem `d : R ⇸ F`. Cloning is cheap.
#[derive(Clone)]
pub struct DesignProblem(Arc<Inner>);

impl fmt::Debug for DesignProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DesignProblem[{}: {} x {}]",
            self.quantale(),
            self.0.source.len(),
            self.0.target.len()
        )
    }
}

/// Quadruple count up to which validation scans all `(r, r*, f, f*)` directly.
const FULL_SCAN_LIMIT: usize = 4_000_000;

/// Rows processed per parallel task; below this everything runs sequentially.
const PAR_MIN: usize = 64;

fn same_quantale(a: &QCategory, b: &QCategory) -> Result<()> {
    if a.quantale() != b.quantale() {
        return Err(Error::QuantaleMismatch(a.quantale().id().into(), b.quantale().id().into()));
    }
    Ok(())
}

fn check_shape(r: &QCategory, f: &QCategory, values: &[QValue]) -> Result<()> {
    same_quantale(r, f)?;
    if values.len() != r.len() * f.len() {
        return Err(Error::Dimension(format!(
            "value table has {} entries, expected {}x{}",
            values.len(),
            r.len(),
            f.len()
        )));
    }
    for v in values {
        r.quantale().check(v)?;
    }
    Ok(())
}

fn violation(r: &QCategory, rs: usize, r_star: usize, f: &QCategory, fs: usize, f_star: usize) -> Error {
    Error::Bimodule {
        r: r.objects()[rs].clone(),
        r_star: r.objects()[r_star].clone(),
        f: f.objects()[fs].clone(),
        f_star: f.objects()[f_star].clone(),
    }
}

/// Scans every quadruple: `F(f*,f) ⊙ d(r,f) ⊙ R(r,r*) ⊑ d(r*,f*)`.
pub fn bimodule_direct(r: &QCategory, f: &QCategory, values: &[QValue]) -> Result<()> {
    check_shape(r, f, values)?;
    let q = r.quantale();
    let (nr, nf) = (r.len(), f.len());
    let row = |ri: usize| -> Option<Error> {
        for fi in 0..nf {
            let d = &values[ri * nf + fi];
            if q.is_bottom(d) {
                continue;
            }
            for rs in 0..nr {
                let dr = q.mult(d, r.hom(ri, rs));
                for fs in 0..nf {
                    let lhs = q.mult(f.hom(fs, fi), &dr);
                    if !q.leq(&lhs, &values[rs * nf + fs]) {
                        return Some(violation(r, ri, rs, f, fi, fs));
                    }
                }
            }
        }
        None
    };
    first_failure(nr, row)
}

/// The same condition via internal homs: `F(f*,f) ⊙ R(r,r*) ⊑ [d(r,f), d(r*,f*)]`.
pub fn bimodule_via_hom(r: &QCategory, f: &QCategory, values: &[QValue]) -> Result<()> {
    check_shape(r, f, values)?;
    let q = r.quantale();
    let (nr, nf) = (r.len(), f.len());
    for ri in 0..nr {
        for rs in 0..nr {
            for fi in 0..nf {
                for fs in 0..nf {
                    let lhs = q.mult(f.hom(fs, fi), r.hom(ri, rs));
                    let h = q.internal_hom(&values[ri * nf + fi], &values[rs * nf + fs])?;
                    if !q.leq(&lhs, &h) {
                        return Err(violation(r, ri, rs, f, fi, fs));
                    }
                }
            }
        }
    }
    Ok(())
}

/// The condition split into its two sides, each checked one tensor factor at a time:
/// `d(r,f) ⊙ A_k(r_k, a) ⊑ d(r[k:=a], f)` and `B_k(b, f_k) ⊙ d(r,f) ⊑ d(r, f[k:=b])`.
///
/// Equivalent to [`bimodule_direct`] because hom-values of a tensor are products of
/// factor hom-values and every diagonal entry is above `e`.
pub fn bimodule_factored(r: &QCategory, f: &QCategory, values: &[QValue]) -> Result<()> {
    check_shape(r, f, values)?;
    let q = r.quantale();
    let (nr, nf) = (r.len(), f.len());
    let rf = factor_strides(r);
    let ff = factor_strides(f);
    let row = |ri: usize| -> Option<Error> {
        let rd = r.decompose(ri);
        for fi in 0..nf {
            let d = &values[ri * nf + fi];
            if q.is_bottom(d) {
                continue;
            }
            for (k, (cat, stride)) in rf.iter().enumerate() {
                let base = ri - rd[k] * stride;
                for a in 0..cat.len() {
                    let rs = base + a * stride;
                    let lhs = q.mult(d, cat.hom(rd[k], a));
                    if !q.leq(&lhs, &values[rs * nf + fi]) {
                        return Some(violation(r, ri, rs, f, fi, fi));
                    }
                }
            }
            let fd = f.decompose(fi);
            for (k, (cat, stride)) in ff.iter().enumerate() {
                let base = fi - fd[k] * stride;
                for b in 0..cat.len() {
                    let fs = base + b * stride;
                    let lhs = q.mult(cat.hom(b, fd[k]), d);
                    if !q.leq(&lhs, &values[ri * nf + fs]) {
                        return Some(violation(r, ri, ri, f, fi, fs));
                    }
                }
            }
        }
        None
    };
    first_failure(nr, row)
}

fn factor_strides(c: &QCategory) -> Vec<(QCategory, usize)> {
    let fs = c.factors();
    let mut stride = 1;
    let mut out = vec![(c.clone(), 0); fs.len()];
    for (k, f) in fs.iter().enumerate().rev() {
        out[k] = (f.clone(), stride);
        stride *= f.len();
    }
    out
}

/// Runs `row` over `0..n` (in parallel for large `n`) and returns the lowest-index failure.
fn first_failure(n: usize, row: impl Fn(usize) -> Option<Error> + Sync) -> Result<()> {
    let found = if n >= PAR_MIN {
        (0..n).into_par_iter().find_map_first(&row)
    } else {
        (0..n).find_map(&row)
    };
    match found {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Picks the direct scan for small problems and the factored check otherwise.
pub fn check_bimodule(r: &QCategory, f: &QCategory, values: &[QValue]) -> Result<()> {
    let quads = (r.len() * f.len()).saturating_mul(r.len() * f.len());
    if quads <= FULL_SCAN_LIMIT {
        bimodule_direct(r, f, values)
    } else {
        bimodule_factored(r, f, values)
    }
}

/// Fills a `rows x cols` table with `cell(i, j)`, in parallel by rows when large.
pub(crate) fn tabulate(rows: usize, cols: usize, cell: impl Fn(usize, usize) -> QValue + Sync) -> Vec<QValue> {
    if rows >= PAR_MIN {
        (0..rows)
            .into_par_iter()
            .flat_map_iter(|i| (0..cols).map(move |j| (i, j)).collect::<Vec<_>>())
            .map(|(i, j)| cell(i, j))
            .collect()
    } else {
        let mut v = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                v.push(cell(i, j));
            }
        }
        v
    }
}

impl DesignProblem {
    /// Builds and validates a problem from a `|R| x |F|` table.
    pub fn new(source: &QCategory, target: &QCategory, values: Vec<Vec<QValue>>) -> Result<DesignProblem> {
        if values.len() != source.len() || values.iter().any(|row| row.len() != target.len()) {
            return Err(Error::Dimension(format!(
                "value table must be {}x{}",
                source.len(),
                target.len()
            )));
        }
        DesignProblem::from_flat(source, target, values.into_iter().flatten().collect())
    }

    pub fn from_flat(source: &QCategory, target: &QCategory, values: Vec<QValue>) -> Result<DesignProblem> {
        check_bimodule(source, target, &values)?;
        Ok(DesignProblem::unchecked(source.clone(), target.clone(), values))
    }

    pub(crate) fn unchecked(source: QCategory, target: QCategory, values: Vec<QValue>) -> DesignProblem {
        DesignProblem(Arc::new(Inner { source, target, values }))
    }

    /// Operator outputs are valid by construction; debug builds re-check anyway.
    pub(crate) fn composed(source: QCategory, target: QCategory, values: Vec<QValue>) -> Result<DesignProblem> {
        if cfg!(debug_assertions) {
            DesignProblem::from_flat(&source, &target, values)
        } else {
            Ok(DesignProblem::unchecked(source, target, values))
        }
    }

    /// The unit of series composition on `C`: `id(r, f) = C(f, r)`.
    pub fn identity(c: &QCategory) -> DesignProblem {
        let n = c.len();
        let values = tabulate(n, n, |r, f| c.hom(f, r).clone());
        DesignProblem::unchecked(c.clone(), c.clone(), values)
    }

    /// Everything `⊥`.
    pub fn bottom(source: &QCategory, target: &QCategory) -> Result<DesignProblem> {
        same_quantale(source, target)?;
        let b = source.quantale().bottom();
        Ok(DesignProblem::unchecked(
            source.clone(),
            target.clone(),
            vec![b; source.len() * target.len()],
        ))
    }

    pub fn quantale(&self) -> &Quantale {
        self.0.source.quantale()
    }

    pub fn source(&self) -> &QCategory {
        &self.0.source
    }

    pub fn target(&self) -> &QCategory {
        &self.0.target
    }

    pub fn values(&self) -> &[QValue] {
        &self.0.values
    }

    pub fn value(&self, r: usize, f: usize) -> &QValue {
        &self.0.values[r * self.0.target.len() + f]
    }

    pub fn rows(&self) -> Vec<Vec<QValue>> {
        let nf = self.0.target.len();
        (0..self.0.source.len())
            .map(|r| self.0.values[r * nf..(r + 1) * nf].to_vec())
            .collect()
    }

    pub fn evaluate(&self, r: &str, f: &str) -> Result<QValue> {
        Ok(self
            .value(self.0.source.index_of(r)?, self.0.target.index_of(f)?)
            .clone())
    }

    /// Re-runs the bimodule check.
    pub fn validate(&self) -> Result<()> {
        check_bimodule(&self.0.source, &self.0.target, &self.0.values)
    }

    pub fn validate_via_hom(&self) -> Result<()> {
        bimodule_via_hom(&self.0.source, &self.0.target, &self.0.values)
    }

    /// Entrywise equality up to tolerance, over the same categories.
    pub fn same_as(&self, other: &DesignProblem) -> bool {
        self.source().same_as(other.source())
            && self.target().same_as(other.target())
            && self
                .values()
                .iter()
                .zip(other.values())
                .all(|(a, b)| self.quantale().eq(a, b))
    }

    /// `(d1 ; d2)(r, f) = ⊔_m d1(r, m) ⊙ d2(m, f)`.
    pub fn series(d1: &DesignProblem, d2: &DesignProblem) -> Result<DesignProblem> {
        if !d1.target().same_as(d2.source()) {
            return Err(Error::Interface(format!(
                "series needs d1's functionalities to be d2's resources ({} vs {} objects)",
                d1.target().len(),
                d2.source().len()
            )));
        }
        let q = d1.quantale().clone();
        let (nr, nm, nf) = (d1.source().len(), d1.target().len(), d2.target().len());
        let bot = q.bottom();
        let values = tabulate(nr, nf, |r, f| {
            let mut acc = bot.clone();
            for m in 0..nm {
                let a = d1.value(r, m);
                if q.is_bottom(a) {
                    continue;
                }
                acc = q.join2(&acc, &q.mult(a, d2.value(m, f)));
            }
            acc
        });
        DesignProblem::composed(d1.source().clone(), d2.target().clone(), values)
    }

    /// The terms `d1(r, m) ⊙ d2(m, f)` of a series entry, one per intermediate object.
    pub fn series_terms(d1: &DesignProblem, d2: &DesignProblem, r: &str, f: &str) -> Result<Vec<(String, QValue)>> {
        let ri = d1.source().index_of(r)?;
        let fi = d2.target().index_of(f)?;
        let q = d1.quantale();
        Ok(d1
            .target()
            .objects()
            .iter()
            .enumerate()
            .map(|(m, name)| (name.clone(), q.mult(d1.value(ri, m), d2.value(m, fi))))
            .collect())
    }

    /// `(d ⊗ d')((r,r'),(f,f')) = d(r,f) ⊙ d'(r',f')`.
    pub fn parallel(d: &DesignProblem, e: &DesignProblem) -> Result<DesignProblem> {
        if d.quantale() != e.quantale() {
            return Err(Error::QuantaleMismatch(d.quantale().id().into(), e.quantale().id().into()));
        }
        let source = d.source().tensor(e.source())?;
        let target = d.target().tensor(e.target())?;
        let q = d.quantale().clone();
        let (nr2, nf2) = (e.source().len(), e.target().len());
        let values = tabulate(source.len(), target.len(), |r, f| {
            q.mult(d.value(r / nr2, f / nf2), e.value(r % nr2, f % nf2))
        });
        DesignProblem::composed(source, target, values)
    }

    /// `Tr_M(d)(r, f) = ⊔_{m,m'} d((r,m),(f,m')) ⊙ M(m,m')` for `d : R ⊗ M ⇸ F ⊗ M`.
    pub fn trace(d: &DesignProblem, m: &QCategory) -> Result<DesignProblem> {
        let (r, f) = split_loop(d, m)?;
        let q = d.quantale().clone();
        let nm = m.len();
        let bot = q.bottom();
        let values = tabulate(r.len(), f.len(), |ri, fi| {
            let mut acc = bot.clone();
            for a in 0..nm {
                for b in 0..nm {
                    let v = d.value(ri * nm + a, fi * nm + b);
                    if q.is_bottom(v) {
                        continue;
                    }
                    acc = q.join2(&acc, &q.mult(v, m.hom(a, b)));
                }
            }
            acc
        });
        DesignProblem::composed(r, f, values)
    }

    /// Bool problems only: the ⪯-minimal resources feasible for `f`, in object order.
    /// Among mutually equivalent resources the first one listed is kept.
    pub fn pareto_front(&self, f: &str) -> Result<Vec<String>> {
        let q = self.quantale();
        if !matches!(q.kind(), crate::quantale::Kind::Bool) {
            return Err(Error::QuantaleMismatch(q.id().into(), "Bool".into()));
        }
        let fi = self.target().index_of(f)?;
        let r = self.source();
        let feasible: Vec<usize> = (0..r.len())
            .filter(|&i| self.value(i, fi) == &QValue::Bool(true))
            .collect();
        let below = |a: usize, b: usize| r.hom(a, b) == &QValue::Bool(true);
        Ok(feasible
            .iter()
            .filter(|&&x| {
                !feasible.iter().any(|&y| {
                    y != x && below(y, x) && (!below(x, y) || y < x)
                })
            })
            .map(|&x| r.objects()[x].clone())
            .collect())
    }
}

/// Splits `d : R ⊗ M ⇸ F ⊗ M` into `(R, F)`, checking the trailing `M` factors.
pub(crate) fn split_loop(d: &DesignProblem, m: &QCategory) -> Result<(QCategory, QCategory)> {
    let mf = m.factors();
    let split = |c: &QCategory, side: &str| -> Result<QCategory> {
        let fs = c.factors();
        let k = fs.len().checked_sub(mf.len()).filter(|&k| k >= 1).ok_or_else(|| {
            Error::Interface(format!("{side} is not a tensor ending in the loop category"))
        })?;
        for (a, b) in fs[k..].iter().zip(&mf) {
            if !a.same_as(b) {
                return Err(Error::Interface(format!(
                    "loop category does not match the trailing factor of the {side}"
                )));
            }
        }
        QCategory::tensor_all(&fs[..k])
    };
    Ok((split(d.source(), "source")?, split(d.target(), "target")?))
}
