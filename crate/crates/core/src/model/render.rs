//! Canonical text form of a document. Parsing it back gives the same declarations.

use std::fmt::Write as _;

use super::ast::*;
use super::ModelDocument;
use crate::quantale::{quote_if_needed as q, QValue, Quantale, NAT_INF};

fn list(items: &[String]) -> String {
    items.iter().map(|s| q(s)).collect::<Vec<_>>().join(", ")
}

fn num(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        format!("{x}")
    }
}

fn table(out: &mut String, quantale: &Quantale, rows: &[Vec<QValue>]) {
    out.push_str("[\n");
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| quantale.render_value(v)).collect();
        let sep = if i + 1 < rows.len() { "," } else { "" };
        writeln!(out, "  [{}]{sep}", cells.join(", ")).unwrap();
    }
    out.push(']');
}

fn diagram(e: &DiagramExpr) -> String {
    let items = |xs: &[DiagramExpr]| xs.iter().map(diagram).collect::<Vec<_>>().join(", ");
    match e {
        DiagramExpr::Ref(n) => q(n),
        DiagramExpr::Series(xs) => format!("series({})", items(xs)),
        DiagramExpr::Parallel(xs) => format!("parallel({})", items(xs)),
        DiagramExpr::Trace(d, m) => format!("trace({}, {})", diagram(d), q(m)),
        DiagramExpr::Identity(c) => format!("identity({})", q(c)),
        DiagramExpr::Push(d, phi) => format!("push({}, {})", diagram(d), q(phi)),
        DiagramExpr::HSeries(d, e, a, b) => format!("hseries({}, {}; {}, {})", diagram(d), diagram(e), q(a), q(b)),
        DiagramExpr::HParallel(d, e, a, b) => format!("hparallel({}, {}; {}, {})", diagram(d), diagram(e), q(a), q(b)),
        DiagramExpr::HTrace(d, m, phi) => format!("htrace({}, {}; {})", diagram(d), q(m), q(phi)),
    }
}

fn nat_values(values: &[u64]) -> String {
    let finite: Vec<u64> = values.iter().copied().filter(|v| *v != NAT_INF).collect();
    let has_inf = finite.len() + 1 == values.len() && values.last() == Some(&NAT_INF);
    let is_range = !finite.is_empty() && finite.iter().enumerate().all(|(i, v)| *v == i as u64);
    if is_range && (has_inf || finite.len() == values.len()) {
        let cap = finite.len() - 1;
        return if has_inf { format!("nat({cap}, inf)") } else { format!("nat({cap})") };
    }
    let items: Vec<String> = values
        .iter()
        .map(|v| if *v == NAT_INF { "inf".into() } else { v.to_string() })
        .collect();
    format!("nat {{{}}}", items.join(", "))
}

pub(crate) fn render(doc: &ModelDocument) -> String {
    let mut out = String::new();
    for d in doc.decls() {
        match d {
            Decl::Quantale { name, expr } => {
                let rhs = match expr {
                    QuantaleExpr::Bool => "bool".into(),
                    QuantaleExpr::Cost => "cost".into(),
                    QuantaleExpr::Pace => "pace".into(),
                    QuantaleExpr::Nat => "nat".into(),
                    QuantaleExpr::Fuzz(t) => format!("fuzz({})", t.tag()),
                    QuantaleExpr::Chain(xs) => format!("chain {{{}}}", list(xs)),
                    QuantaleExpr::Powerset(xs) => format!("powerset {{{}}}", list(xs)),
                    QuantaleExpr::PowersetPairs(a, b) => format!("powerset_pairs({}, {})", q(a), q(b)),
                    QuantaleExpr::Product(xs) => format!("product({})", list(xs)),
                };
                writeln!(out, "quantale {} = {rhs}", q(name)).unwrap();
            }
            Decl::Lax {
                name,
                source,
                target,
                expr,
                unchecked,
            } => {
                let rhs = match expr {
                    LaxExpr::Builtin { kind, params } if params.is_empty() => kind.clone(),
                    LaxExpr::Builtin { kind, params } => {
                        format!("{kind}({})", params.iter().map(|x| num(*x)).collect::<Vec<_>>().join(", "))
                    }
                    LaxExpr::Table(entries) => {
                        let (s, t) = (doc.quantale(source).unwrap(), doc.quantale(target).unwrap());
                        let parts: Vec<String> = entries
                            .iter()
                            .map(|(a, b)| format!("{} -> {}", s.render_value(a), t.render_value(b)))
                            .collect();
                        format!("table {{{}}}", parts.join("; "))
                    }
                };
                let flag = if *unchecked { " unchecked" } else { "" };
                writeln!(out, "lax {} : {} -> {} = {rhs}{flag}", q(name), q(source), q(target)).unwrap();
            }
            Decl::Category { name, quantale, expr } => {
                write!(out, "category {} : {} = ", q(name), q(quantale)).unwrap();
                match expr {
                    CategoryExpr::Order { objects, pairs } => {
                        let ps: Vec<String> = pairs.iter().map(|(a, b)| format!("{} <= {}", q(a), q(b))).collect();
                        write!(out, "order {{{}}} {{{}}}", list(objects), ps.join(", ")).unwrap();
                    }
                    CategoryExpr::Chain(xs) => write!(out, "chain {{{}}}", list(xs)).unwrap(),
                    CategoryExpr::Discrete(xs) => write!(out, "discrete {{{}}}", list(xs)).unwrap(),
                    CategoryExpr::Table { objects, hom } => {
                        write!(out, "table {{{}}} ", list(objects)).unwrap();
                        table(&mut out, &doc.quantale(quantale).unwrap(), hom);
                    }
                    CategoryExpr::Nat { values } => out.push_str(&nat_values(values)),
                    CategoryExpr::Tensor(xs) => write!(out, "tensor({})", list(xs)).unwrap(),
                    CategoryExpr::Push { category, map } => write!(out, "push({}, {})", q(category), q(map)).unwrap(),
                }
                out.push('\n');
            }
            Decl::Problem {
                name,
                source,
                target,
                over,
                expr,
            } => {
                write!(out, "problem {} : {} -> {}", q(name), q(source), q(target)).unwrap();
                if let Some(o) = over {
                    write!(out, " over {}", q(o)).unwrap();
                }
                out.push_str(" = ");
                match expr {
                    ProblemExpr::Table(rows) => {
                        out.push_str("table ");
                        let quantale = doc.problem(name).map(|p| p.quantale().clone()).unwrap();
                        table(&mut out, &quantale, rows);
                    }
                    ProblemExpr::Catalog(entries) => {
                        out.push_str("catalog {\n");
                        for (i, e) in entries.iter().enumerate() {
                            let sep = if i + 1 < entries.len() { ";" } else { "" };
                            writeln!(out, "  {}: req {} prov {}{sep}", q(&e.part), q(&e.req), q(&e.prov)).unwrap();
                        }
                        out.push('}');
                    }
                }
                out.push('\n');
            }
            Decl::Diagram { name, expr } => writeln!(out, "diagram {} = {}", q(name), diagram(expr)).unwrap(),
            Decl::Query {
                diagram,
                resource,
                functionality,
            } => writeln!(out, "query {} {} {}", q(diagram), q(resource), q(functionality)).unwrap(),
            Decl::Sweep {
                name,
                diagram,
                rows,
                cols,
            } => {
                let sel = |s: &Option<Vec<String>>| match s {
                    None => "*".to_string(),
                    Some(xs) => format!("{{{}}}", list(xs)),
                };
                writeln!(out, "sweep {} = {} rows {} cols {}", q(name), q(diagram), sel(rows), sel(cols)).unwrap();
            }
        }
    }
    out
}
