//! Text model format: declarations of quantales, categories, problems, lax maps,
//! diagrams and queries, resolved into core objects as they are read.

pub mod ast;
mod eval;
mod lexer;
mod parser;
mod render;
pub mod table;

use std::collections::{HashMap, HashSet};
use std::sync::Mutex;

pub use ast::*;
pub use eval::{DiagramSize, QueryTrace};
pub use lexer::{tokenize, Tok, Token};
pub use table::ResultTable;

use crate::category::QCategory;
use crate::error::{Error, Result};
use crate::lax::{catalog_problem, Catalog, LaxMap, Verdict};
use crate::profunctor::DesignProblem;
use crate::quantale::{Kind, Quantale};

/// Quantale names available without a declaration.
pub const BUILTIN_QUANTALES: [&str; 4] = ["Bool", "Cost", "Nat", "Pace"];

/// A sweep: all or selected resources against all or selected functionalities.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub diagram: String,
    pub rows: Option<Vec<String>>,
    pub cols: Option<Vec<String>>,
}

/// A parsed and resolved model.
#[derive(Debug, Default)]
pub struct ModelDocument {
    decls: Vec<Decl>,
    names: HashSet<String>,
    locations: HashMap<String, (usize, usize)>,
    quantales: HashMap<String, Quantale>,
    lax: HashMap<String, LaxMap>,
    categories: HashMap<String, QCategory>,
    problems: HashMap<String, DesignProblem>,
    diagrams: HashMap<String, DiagramExpr>,
    sweeps: HashMap<String, SweepSpec>,
    memo: Mutex<HashMap<String, DesignProblem>>,
}

impl Clone for ModelDocument {
    fn clone(&self) -> Self {
        ModelDocument {
            decls: self.decls.clone(),
            names: self.names.clone(),
            locations: self.locations.clone(),
            quantales: self.quantales.clone(),
            lax: self.lax.clone(),
            categories: self.categories.clone(),
            problems: self.problems.clone(),
            diagrams: self.diagrams.clone(),
            sweeps: self.sweeps.clone(),
            memo: Mutex::new(self.memo.lock().unwrap().clone()),
        }
    }
}

fn unresolved(kind: &str, name: &str) -> Error {
    Error::Model(format!("unresolved reference: {kind} `{name}` is not declared"))
}

impl ModelDocument {
    pub fn empty() -> ModelDocument {
        ModelDocument::default()
    }

    pub fn parse(text: &str) -> Result<ModelDocument> {
        parser::parse_document(text)
    }

    pub fn from_file(path: impl AsRef<std::path::Path>) -> Result<ModelDocument> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Model(format!("cannot read {}: {e}", path.display())))?;
        ModelDocument::parse(&text)
    }

    /// Resolves declarations built in code, in order.
    pub fn from_decls(decls: impl IntoIterator<Item = Decl>) -> Result<ModelDocument> {
        let mut doc = ModelDocument::empty();
        for d in decls {
            let label = d.name().map(str::to_string);
            doc.add(d).map_err(|e| match label {
                Some(n) => Error::Model(format!("`{n}`: {e}")),
                None => e,
            })?;
        }
        Ok(doc)
    }

    pub fn decls(&self) -> &[Decl] {
        &self.decls
    }

    /// Same declarations, in the same order.
    pub fn equivalent(&self, other: &ModelDocument) -> bool {
        self.decls == other.decls
    }

    pub(crate) fn set_location(&mut self, name: &str, line: usize, col: usize) {
        self.locations.insert(name.to_string(), (line, col));
    }

    pub(crate) fn located(&self, name: &str, what: &str, e: Error) -> Error {
        match self.locations.get(name) {
            Some((l, c)) => Error::Model(format!("line {l}, col {c}: {what} `{name}`: {e}")),
            None => Error::Model(format!("{what} `{name}`: {e}")),
        }
    }

    pub fn quantale(&self, name: &str) -> Result<Quantale> {
        if let Some(q) = self.quantales.get(name) {
            return Ok(q.clone());
        }
        match name {
            "Bool" => Ok(Quantale::bool()),
            "Cost" => Ok(Quantale::cost()),
            "Nat" => Ok(Quantale::nat()),
            "Pace" => Ok(Quantale::pace()),
            _ => Err(unresolved("quantale", name)),
        }
    }

    pub fn category(&self, name: &str) -> Result<QCategory> {
        self.categories.get(name).cloned().ok_or_else(|| unresolved("category", name))
    }

    pub fn problem(&self, name: &str) -> Result<DesignProblem> {
        self.problems.get(name).cloned().ok_or_else(|| unresolved("problem", name))
    }

    pub fn lax_map(&self, name: &str) -> Result<LaxMap> {
        self.lax.get(name).cloned().ok_or_else(|| unresolved("lax map", name))
    }

    pub fn sweep_spec(&self, name: &str) -> Result<SweepSpec> {
        self.sweeps.get(name).cloned().ok_or_else(|| unresolved("sweep", name))
    }

    fn names_of<'a>(&'a self, f: impl Fn(&'a Decl) -> Option<&'a str>) -> Vec<&'a str> {
        self.decls.iter().filter_map(f).collect()
    }

    pub fn quantale_names(&self) -> Vec<&str> {
        self.names_of(|d| match d {
            Decl::Quantale { name, .. } => Some(name),
            _ => None,
        })
    }

    pub fn category_names(&self) -> Vec<&str> {
        self.names_of(|d| match d {
            Decl::Category { name, .. } => Some(name),
            _ => None,
        })
    }

    pub fn problem_names(&self) -> Vec<&str> {
        self.names_of(|d| match d {
            Decl::Problem { name, .. } => Some(name),
            _ => None,
        })
    }

    pub fn lax_names(&self) -> Vec<&str> {
        self.names_of(|d| match d {
            Decl::Lax { name, .. } => Some(name),
            _ => None,
        })
    }

    pub fn diagram_names(&self) -> Vec<&str> {
        self.names_of(|d| match d {
            Decl::Diagram { name, .. } => Some(name),
            _ => None,
        })
    }

    pub fn sweep_names(&self) -> Vec<&str> {
        self.names_of(|d| match d {
            Decl::Sweep { name, .. } => Some(name),
            _ => None,
        })
    }

    /// `(diagram, resource, functionality)` of each query statement.
    pub fn queries(&self) -> Vec<(&str, &str, &str)> {
        self.decls
            .iter()
            .filter_map(|d| match d {
                Decl::Query {
                    diagram,
                    resource,
                    functionality,
                } => Some((diagram.as_str(), resource.as_str(), functionality.as_str())),
                _ => None,
            })
            .collect()
    }

    /// Resolves one declaration against the ones before it.
    pub fn add(&mut self, decl: Decl) -> Result<()> {
        if let Some(n) = decl.name() {
            if self.names.contains(n) {
                return Err(Error::Duplicate(n.to_string()));
            }
        }
        match &decl {
            Decl::Quantale { name, expr } => {
                let q = self.build_quantale(name, expr)?;
                self.quantales.insert(name.clone(), q);
            }
            Decl::Lax {
                name,
                source,
                target,
                expr,
                unchecked,
            } => {
                let s = self.quantale(source)?;
                let t = self.quantale(target)?;
                let mut m = match expr {
                    LaxExpr::Builtin { kind, params } => LaxMap::builtin(kind, params, &s, &t)?,
                    LaxExpr::Table(entries) => LaxMap::table(&s, &t, entries.clone())?,
                };
                if *m.verdict() == Verdict::Unverified {
                    m = m.verified();
                }
                if *unchecked {
                    m = m.unsafe_override();
                }
                self.lax.insert(name.clone(), m.named(name.clone()));
            }
            Decl::Category { name, quantale, expr } => {
                let q = self.quantale(quantale)?;
                let c = self.build_category(&q, expr)?;
                if *c.quantale() != q {
                    return Err(Error::QuantaleMismatch(c.quantale().id().into(), q.id().into()));
                }
                self.categories.insert(name.clone(), c);
            }
            Decl::Problem {
                name,
                source,
                target,
                over,
                expr,
            } => {
                let d = self.build_problem(source, target, over.as_deref(), expr)?;
                self.problems.insert(name.clone(), d);
            }
            Decl::Diagram { name, expr } => {
                self.check_refs(expr)?;
                self.diagrams.insert(name.clone(), expr.clone());
            }
            Decl::Query { diagram, .. } => {
                if !self.diagrams.contains_key(diagram) && !self.problems.contains_key(diagram) {
                    return Err(unresolved("diagram", diagram));
                }
            }
            Decl::Sweep {
                name,
                diagram,
                rows,
                cols,
            } => {
                if !self.diagrams.contains_key(diagram) && !self.problems.contains_key(diagram) {
                    return Err(unresolved("diagram", diagram));
                }
                if rows.as_ref().is_some_and(|r| r.is_empty()) || cols.as_ref().is_some_and(|c| c.is_empty()) {
                    return Err(Error::Model(format!("sweep `{name}` is empty")));
                }
                self.sweeps.insert(
                    name.clone(),
                    SweepSpec {
                        diagram: diagram.clone(),
                        rows: rows.clone(),
                        cols: cols.clone(),
                    },
                );
            }
        }
        if let Some(n) = decl.name() {
            self.names.insert(n.to_string());
        }
        self.decls.push(decl);
        Ok(())
    }

    fn build_quantale(&self, name: &str, expr: &QuantaleExpr) -> Result<Quantale> {
        Ok(match expr {
            QuantaleExpr::Bool => Quantale::bool(),
            QuantaleExpr::Cost => Quantale::cost(),
            QuantaleExpr::Pace => Quantale::pace(),
            QuantaleExpr::Nat => Quantale::nat(),
            QuantaleExpr::Fuzz(t) => Quantale::fuzz(*t),
            QuantaleExpr::Chain(levels) => Quantale::chain(name, levels.clone())?,
            QuantaleExpr::Powerset(base) => Quantale::powerset(name, base.clone())?,
            QuantaleExpr::PowersetPairs(a, b) => Quantale::powerset_pairs(name, &self.quantale(a)?, &self.quantale(b)?)?,
            QuantaleExpr::Product(fs) => {
                let fs = fs.iter().map(|f| self.quantale(f)).collect::<Result<Vec<_>>>()?;
                Quantale::product(name, fs)?
            }
        })
    }

    /// A Bool category moved into `q` by `true ↦ e`, `false ↦ ⊥`.
    fn lift(c: QCategory, q: &Quantale) -> Result<QCategory> {
        if c.quantale() == q {
            Ok(c)
        } else {
            LaxMap::bool_to_unit(q).push_category(&c)
        }
    }

    fn build_category(&self, q: &Quantale, expr: &CategoryExpr) -> Result<QCategory> {
        match expr {
            CategoryExpr::Order { objects, pairs } => Self::lift(QCategory::from_order(objects.clone(), pairs)?, q),
            CategoryExpr::Chain(objects) => {
                let pairs: Vec<(String, String)> = objects.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
                Self::lift(QCategory::from_order(objects.clone(), &pairs)?, q)
            }
            CategoryExpr::Discrete(objects) => QCategory::discrete(q, objects.clone()),
            CategoryExpr::Table { objects, hom } => QCategory::new(q, objects.clone(), hom.clone()),
            CategoryExpr::Nat { values } => {
                if !matches!(q.kind(), Kind::Nat) {
                    return Err(Error::QuantaleMismatch(q.id().into(), "Nat".into()));
                }
                QCategory::nat_category_on(values)
            }
            CategoryExpr::Tensor(names) => {
                let cs = names.iter().map(|n| self.category(n)).collect::<Result<Vec<_>>>()?;
                QCategory::tensor_all(&cs)
            }
            CategoryExpr::Push { category, map } => self.lax_map(map)?.push_category(&self.category(category)?),
        }
    }

    fn build_problem(&self, source: &str, target: &str, over: Option<&str>, expr: &ProblemExpr) -> Result<DesignProblem> {
        let r = self.category(source)?;
        let f = self.category(target)?;
        let q = match over {
            Some(o) => self.quantale(o)?,
            None => r.quantale().clone(),
        };
        match expr {
            ProblemExpr::Table(rows) => {
                let r = self.coerce(r, &q)?;
                let f = self.coerce(f, &q)?;
                DesignProblem::new(&r, &f, rows.clone())
            }
            ProblemExpr::Catalog(entries) => {
                let catalog = Catalog {
                    parts: entries.iter().map(|e| e.part.clone()).collect(),
                    req: entries.iter().map(|e| e.req.clone()).collect(),
                    prov: entries.iter().map(|e| e.prov.clone()).collect(),
                };
                catalog_problem(&q, &catalog, &r, &f)
            }
        }
    }

    fn coerce(&self, c: QCategory, q: &Quantale) -> Result<QCategory> {
        if c.quantale() == q {
            Ok(c)
        } else if matches!(c.quantale().kind(), Kind::Bool) {
            Self::lift(c, q)
        } else {
            Err(Error::QuantaleMismatch(c.quantale().id().into(), q.id().into()))
        }
    }

    fn check_refs(&self, e: &DiagramExpr) -> Result<()> {
        let diagram = |n: &str| {
            if self.diagrams.contains_key(n) || self.problems.contains_key(n) {
                Ok(())
            } else {
                Err(unresolved("problem or diagram", n))
            }
        };
        match e {
            DiagramExpr::Ref(n) => diagram(n),
            DiagramExpr::Series(items) | DiagramExpr::Parallel(items) => items.iter().try_for_each(|i| self.check_refs(i)),
            DiagramExpr::Trace(d, m) => {
                self.check_refs(d)?;
                self.category(m).map(drop)
            }
            DiagramExpr::Identity(c) => self.category(c).map(drop),
            DiagramExpr::Push(d, phi) => {
                self.check_refs(d)?;
                self.lax_map(phi).map(drop)
            }
            DiagramExpr::HSeries(d, e, p1, p2) | DiagramExpr::HParallel(d, e, p1, p2) => {
                self.check_refs(d)?;
                self.check_refs(e)?;
                self.lax_map(p1)?;
                self.lax_map(p2).map(drop)
            }
            DiagramExpr::HTrace(d, m, phi) => {
                self.check_refs(d)?;
                self.category(m)?;
                self.lax_map(phi).map(drop)
            }
        }
    }

    /// Diagram expression of a named diagram.
    pub fn diagram(&self, name: &str) -> Result<&DiagramExpr> {
        self.diagrams.get(name).ok_or_else(|| unresolved("diagram", name))
    }

    pub fn render(&self) -> String {
        render::render(self)
    }

    /// Evaluates every diagram and sweep, reporting the first failure.
    pub fn validate_all(&self) -> Result<()> {
        for d in self.diagram_names() {
            self.evaluate(d)?;
        }
        for (d, r, f) in self.queries() {
            self.run_query(d, r, f)
                .map_err(|e| Error::Model(format!("query `{d} {r} {f}`: {e}")))?;
        }
        Ok(())
    }
}
