//! Random valid categories and design problems, for property tests and demos.
//!
//! Every carrier here is integral, so closing a random table under composition
//! (Floyd–Warshall style) always yields a valid instance.

use rand::Rng;

use crate::category::QCategory;
use crate::profunctor::DesignProblem;
use crate::quantale::{QValue, Quantale};

/// Random `n`-object category: random hom-values, `e` on the diagonal, then closed
/// under `hom(i,j) ⊔= hom(i,k) ⊙ hom(k,j)`.
pub fn category<R: Rng + ?Sized>(q: &Quantale, n: usize, rng: &mut R) -> QCategory {
    let mut h: Vec<QValue> = (0..n * n)
        .map(|idx| {
            if idx / n == idx % n {
                q.unit()
            } else if rng.gen_bool(0.4) {
                q.bottom()
            } else {
                q.random_value(rng)
            }
        })
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = q.mult(&h[i * n + k], &h[k * n + j]);
                h[i * n + j] = q.join2(&h[i * n + j], &via);
            }
        }
    }
    let objects = (0..n).map(|i| format!("o{i}")).collect();
    QCategory::from_flat(q, objects, h).expect("closure of an integral table is a category")
}

/// Bool category of a random preorder.
pub fn order<R: Rng + ?Sized>(n: usize, rng: &mut R) -> QCategory {
    category(&Quantale::bool(), n, rng)
}

/// The smallest design problem above `raw`:
/// `d(r*, f*) = ⊔_{r,f} F(f*,f) ⊙ raw(r,f) ⊙ R(r,r*)`.
pub fn closure(source: &QCategory, target: &QCategory, raw: &[QValue]) -> DesignProblem {
    let q = source.quantale();
    let (nr, nf) = (source.len(), target.len());
    let mut out = Vec::with_capacity(nr * nf);
    for rs in 0..nr {
        for fs in 0..nf {
            let mut acc = q.bottom();
            for r in 0..nr {
                let rr = source.hom(r, rs);
                for f in 0..nf {
                    let v = q.mult(&q.mult(target.hom(fs, f), &raw[r * nf + f]), rr);
                    acc = q.join2(&acc, &v);
                }
            }
            out.push(acc);
        }
    }
    DesignProblem::from_flat(source, target, out).expect("closure satisfies the bimodule condition")
}

/// Random valid problem; roughly a third of the raw entries start at `⊥`.
pub fn problem<R: Rng + ?Sized>(source: &QCategory, target: &QCategory, rng: &mut R) -> DesignProblem {
    let q = source.quantale();
    let raw: Vec<QValue> = (0..source.len() * target.len())
        .map(|_| if rng.gen_bool(0.35) { q.bottom() } else { q.random_value(rng) })
        .collect();
    closure(source, target, &raw)
}

/// Random table with no validity guarantee.
pub fn table<R: Rng + ?Sized>(q: &Quantale, len: usize, rng: &mut R) -> Vec<QValue> {
    (0..len).map(|_| q.random_value(rng)).collect()
}
