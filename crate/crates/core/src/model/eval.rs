//! Bottom-up evaluation of diagram expressions.

use std::collections::HashMap;
use std::time::Instant;

use super::ast::DiagramExpr;
use super::table::ResultTable;
use super::ModelDocument;
use crate::error::{Error, Result};
use crate::lax::{hetero_parallel, hetero_series, hetero_trace};
use crate::profunctor::DesignProblem;
use crate::quantale::QValue;

/// A query result with the terms of the outermost series join, when there is one.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryTrace {
    pub value: QValue,
    /// `(intermediate object, term)` of the last series split.
    pub terms: Option<Vec<(String, QValue)>>,
}

/// Intermediate object-set sizes of one diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramSize {
    pub diagram: String,
    pub resources: usize,
    pub functionalities: usize,
    /// Intermediate object counts at series joins and loop closures, in expression order.
    pub cuts: Vec<usize>,
    pub max_cut: usize,
    /// Wall-clock time of a fresh composition.
    pub seconds: f64,
}

type Memo = HashMap<String, DesignProblem>;

impl ModelDocument {
    fn eval_expr(&self, e: &DiagramExpr, memo: &mut Memo) -> Result<DesignProblem> {
        match e {
            DiagramExpr::Ref(n) => {
                if let Some(d) = self.problems.get(n) {
                    return Ok(d.clone());
                }
                if let Some(d) = memo.get(n) {
                    return Ok(d.clone());
                }
                let expr = self.diagram(n)?;
                let d = self
                    .eval_expr(expr, memo)
                    .map_err(|err| self.located(n, "diagram", err))?;
                memo.insert(n.clone(), d.clone());
                Ok(d)
            }
            DiagramExpr::Series(items) => {
                let mut acc = self.eval_expr(&items[0], memo)?;
                for i in &items[1..] {
                    acc = DesignProblem::series(&acc, &self.eval_expr(i, memo)?)?;
                }
                Ok(acc)
            }
            DiagramExpr::Parallel(items) => {
                let mut acc = self.eval_expr(&items[0], memo)?;
                for i in &items[1..] {
                    acc = DesignProblem::parallel(&acc, &self.eval_expr(i, memo)?)?;
                }
                Ok(acc)
            }
            DiagramExpr::Trace(d, m) => DesignProblem::trace(&self.eval_expr(d, memo)?, &self.category(m)?),
            DiagramExpr::Identity(c) => Ok(DesignProblem::identity(&self.category(c)?)),
            DiagramExpr::Push(d, phi) => self.lax_map(phi)?.push_problem(&self.eval_expr(d, memo)?),
            DiagramExpr::HSeries(d, e, p1, p2) => hetero_series(
                &self.eval_expr(d, memo)?,
                &self.eval_expr(e, memo)?,
                &self.lax_map(p1)?,
                &self.lax_map(p2)?,
            ),
            DiagramExpr::HParallel(d, e, p1, p2) => hetero_parallel(
                &self.eval_expr(d, memo)?,
                &self.eval_expr(e, memo)?,
                &self.lax_map(p1)?,
                &self.lax_map(p2)?,
            ),
            DiagramExpr::HTrace(d, m, phi) => hetero_trace(&self.eval_expr(d, memo)?, &self.category(m)?, &self.lax_map(phi)?),
        }
    }

    /// The composed problem of a named diagram (or a declared problem), memoized.
    pub fn evaluate(&self, name: &str) -> Result<DesignProblem> {
        let mut memo = std::mem::take(&mut *self.memo.lock().unwrap());
        let out = self.eval_expr(&DiagramExpr::Ref(name.to_string()), &mut memo);
        let mut shared = self.memo.lock().unwrap();
        for (k, v) in memo {
            shared.entry(k).or_insert(v);
        }
        out
    }

    /// Evaluates an expression that is not declared in the document.
    pub fn evaluate_expr(&self, e: &DiagramExpr) -> Result<DesignProblem> {
        let mut memo = self.memo.lock().unwrap().clone();
        self.eval_expr(e, &mut memo)
    }

    pub fn run_query(&self, diagram: &str, r: &str, f: &str) -> Result<QValue> {
        self.evaluate(diagram)?.evaluate(r, f)
    }

    /// Like [`ModelDocument::run_query`], also exposing the terms of the outermost series join.
    pub fn explain_query(&self, diagram: &str, r: &str, f: &str) -> Result<QueryTrace> {
        let value = self.run_query(diagram, r, f)?;
        let mut expr = match self.diagrams.get(diagram) {
            Some(e) => e,
            None => return Ok(QueryTrace { value, terms: None }),
        };
        while let DiagramExpr::Ref(n) = expr {
            match self.diagrams.get(n) {
                Some(e) => expr = e,
                None => return Ok(QueryTrace { value, terms: None }),
            }
        }
        let terms = match expr {
            DiagramExpr::Series(items) => {
                let n = items.len();
                let left = if n == 2 {
                    items[0].clone()
                } else {
                    DiagramExpr::Series(items[..n - 1].to_vec())
                };
                let l = self.evaluate_expr(&left)?;
                let rr = self.evaluate_expr(&items[n - 1])?;
                Some(DesignProblem::series_terms(&l, &rr, r, f)?)
            }
            _ => None,
        };
        Ok(QueryTrace { value, terms })
    }

    pub fn run_sweep(&self, name: &str) -> Result<ResultTable> {
        let s = self.sweep_spec(name)?;
        self.sweep(&s.diagram, s.rows.as_deref(), s.cols.as_deref())
    }

    /// Evaluates a diagram on selected rows and columns; `None` selects every object.
    pub fn sweep(&self, diagram: &str, rows: Option<&[String]>, cols: Option<&[String]>) -> Result<ResultTable> {
        let d = self.evaluate(diagram)?;
        let rows: Vec<String> = rows.map(<[String]>::to_vec).unwrap_or_else(|| d.source().objects().to_vec());
        let cols: Vec<String> = cols.map(<[String]>::to_vec).unwrap_or_else(|| d.target().objects().to_vec());
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::Model(format!("sweep over `{diagram}` is empty")));
        }
        let mut cells = Vec::with_capacity(rows.len());
        for r in &rows {
            let mut line = Vec::with_capacity(cols.len());
            for f in &cols {
                line.push(d.evaluate(r, f)?);
            }
            cells.push(line);
        }
        Ok(ResultTable {
            diagram: diagram.to_string(),
            quantale: d.quantale().clone(),
            rows,
            cols,
            cells,
        })
    }

    fn cuts(&self, e: &DiagramExpr, memo: &mut Memo, out: &mut Vec<usize>) -> Result<()> {
        match e {
            DiagramExpr::Ref(n) => {
                if let Some(inner) = self.diagrams.get(n) {
                    self.cuts(inner, memo, out)?;
                }
            }
            DiagramExpr::Series(items) => {
                for (k, i) in items.iter().enumerate() {
                    self.cuts(i, memo, out)?;
                    if k + 1 < items.len() {
                        out.push(self.eval_expr(i, memo)?.target().len());
                    }
                }
            }
            DiagramExpr::Parallel(items) => {
                for i in items {
                    self.cuts(i, memo, out)?;
                }
            }
            DiagramExpr::Trace(d, m) | DiagramExpr::HTrace(d, m, _) => {
                self.cuts(d, memo, out)?;
                out.push(self.category(m)?.len());
            }
            DiagramExpr::Identity(_) => {}
            DiagramExpr::Push(d, _) => self.cuts(d, memo, out)?,
            DiagramExpr::HSeries(d, e, _, _) => {
                self.cuts(d, memo, out)?;
                out.push(self.eval_expr(d, memo)?.target().len());
                self.cuts(e, memo, out)?;
            }
            DiagramExpr::HParallel(d, e, _, _) => {
                self.cuts(d, memo, out)?;
                self.cuts(e, memo, out)?;
            }
        }
        Ok(())
    }

    /// Cut widths and fresh composition time of every diagram.
    pub fn size_report(&self) -> Result<Vec<DiagramSize>> {
        let mut out = Vec::new();
        for name in self.diagram_names() {
            let mut fresh = Memo::new();
            let start = Instant::now();
            let d = self.eval_expr(&DiagramExpr::Ref(name.to_string()), &mut fresh)?;
            let seconds = start.elapsed().as_secs_f64();
            let mut cuts = Vec::new();
            self.cuts(self.diagram(name)?, &mut fresh, &mut cuts)?;
            out.push(DiagramSize {
                diagram: name.to_string(),
                resources: d.source().len(),
                functionalities: d.target().len(),
                max_cut: cuts.iter().copied().max().unwrap_or(0),
                cuts,
                seconds,
            });
        }
        Ok(out)
    }
}
