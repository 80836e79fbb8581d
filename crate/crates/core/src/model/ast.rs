//! Declarations as written in a model file.

use crate::quantale::{QValue, TNorm};

#[derive(Debug, Clone, PartialEq)]
pub enum QuantaleExpr {
    Bool,
    Cost,
    Pace,
    Nat,
    Fuzz(TNorm),
    Chain(Vec<String>),
    Powerset(Vec<String>),
    PowersetPairs(String, String),
    Product(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum LaxExpr {
    Builtin { kind: String, params: Vec<f64> },
    Table(Vec<(QValue, QValue)>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CategoryExpr {
    /// Bool order: objects plus generating pairs `a <= b`.
    Order { objects: Vec<String>, pairs: Vec<(String, String)> },
    /// Bool total order, lowest first.
    Chain(Vec<String>),
    Discrete(Vec<String>),
    Table { objects: Vec<String>, hom: Vec<Vec<QValue>> },
    Nat { values: Vec<u64> },
    Tensor(Vec<String>),
    Push { category: String, map: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub part: String,
    pub req: String,
    pub prov: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemExpr {
    Table(Vec<Vec<QValue>>),
    Catalog(Vec<CatalogEntry>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum DiagramExpr {
    Ref(String),
    Series(Vec<DiagramExpr>),
    Parallel(Vec<DiagramExpr>),
    Trace(Box<DiagramExpr>, String),
    Identity(String),
    Push(Box<DiagramExpr>, String),
    HSeries(Box<DiagramExpr>, Box<DiagramExpr>, String, String),
    HParallel(Box<DiagramExpr>, Box<DiagramExpr>, String, String),
    HTrace(Box<DiagramExpr>, String, String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decl {
    Quantale {
        name: String,
        expr: QuantaleExpr,
    },
    Lax {
        name: String,
        source: String,
        target: String,
        expr: LaxExpr,
        /// Accept without a passing laxity check.
        unchecked: bool,
    },
    Category {
        name: String,
        quantale: String,
        expr: CategoryExpr,
    },
    Problem {
        name: String,
        source: String,
        target: String,
        /// Evaluation quantale when it differs from the categories' (Bool categories are pushed).
        over: Option<String>,
        expr: ProblemExpr,
    },
    Diagram {
        name: String,
        expr: DiagramExpr,
    },
    Query {
        diagram: String,
        resource: String,
        functionality: String,
    },
    Sweep {
        name: String,
        diagram: String,
        rows: Option<Vec<String>>,
        cols: Option<Vec<String>>,
    },
}

impl Decl {
    /// The declared name, if the statement declares one.
    pub fn name(&self) -> Option<&str> {
        match self {
            Decl::Quantale { name, .. }
            | Decl::Lax { name, .. }
            | Decl::Category { name, .. }
            | Decl::Problem { name, .. }
            | Decl::Diagram { name, .. }
            | Decl::Sweep { name, .. } => Some(name),
            Decl::Query { .. } => None,
        }
    }
}
