//! Recursive-descent parser. Each statement is resolved against the document
//! built so far, so table cells are parsed with the right quantale.

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::ModelDocument;
use crate::error::{Error, Result};
use crate::quantale::{split_top_level, QValue, Quantale, TNorm, NAT_INF};

pub(crate) struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = std::result::Result<T, String>;

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str) -> Result<Parser<'a>> {
        Ok(Parser {
            src,
            toks: tokenize(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at_end(&self) -> bool {
        self.pos + 1 >= self.toks.len()
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Name(s) => format!("`{s}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Arrow => "`->`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Newline => "end of line".into(),
        }
    }

    fn expect(&mut self, want: Tok) -> PResult<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(format!("expected {}, found {}", Self::describe(&want), Self::describe(self.peek())))
        }
    }

    fn punct(&mut self, c: char) -> PResult<()> {
        self.expect(Tok::Punct(c))
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Name(s) | Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(format!("expected a name, found {}", Self::describe(&other))),
        }
    }

    fn keyword(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Name(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(format!("expected a keyword, found {}", Self::describe(&other))),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Name(s) if s == kw)
    }

    fn number(&mut self) -> PResult<f64> {
        let s = self.keyword()?;
        match s.as_str() {
            "inf" => Ok(f64::INFINITY),
            _ => s.parse().map_err(|_| format!("expected a number, found `{s}`")),
        }
    }

    /// `{a, b, c}`; an empty list is allowed.
    fn name_set(&mut self) -> PResult<Vec<String>> {
        self.punct('{')?;
        let mut out = Vec::new();
        if self.eat_punct('}') {
            return Ok(out);
        }
        loop {
            out.push(self.name()?);
            if self.eat_punct('}') {
                return Ok(out);
            }
            self.punct(',')?;
        }
    }

    /// `(a, b, ...)` of names.
    fn name_args(&mut self) -> PResult<Vec<String>> {
        self.punct('(')?;
        let mut out = vec![self.name()?];
        while self.eat_punct(',') {
            out.push(self.name()?);
        }
        self.punct(')')?;
        Ok(out)
    }

    /// Raw source text of the balanced bracket group starting at the current token.
    fn raw_group(&mut self) -> PResult<String> {
        let open = match self.peek() {
            Tok::Punct(c @ ('[' | '{' | '(')) => *c,
            other => return Err(format!("expected a bracketed group, found {}", Self::describe(other))),
        };
        let start = self.here().start;
        let mut depth = 0i32;
        loop {
            let t = self.bump();
            match t.tok {
                Tok::Punct('[' | '{' | '(') => depth += 1,
                Tok::Punct(']' | '}' | ')') => {
                    depth -= 1;
                    if depth == 0 {
                        let inner = &self.src[start + 1..t.end - 1];
                        let _ = open;
                        return Ok(inner.to_string());
                    }
                }
                Tok::Newline if self.at_end() => return Err("unterminated group".into()),
                _ => {}
            }
        }
    }

    fn value_table(&mut self, q: &Quantale) -> PResult<Vec<Vec<QValue>>> {
        if *self.peek() != Tok::Punct('[') {
            return Err(format!("expected `[`, found {}", Self::describe(self.peek())));
        }
        let inner = self.raw_group()?;
        let mut rows = Vec::new();
        for (i, row) in split_top_level(&inner).into_iter().enumerate() {
            let body = row
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| format!("row {} is not a bracketed list", i + 1))?;
            let mut cells = Vec::new();
            for (j, cell) in split_top_level(body).into_iter().enumerate() {
                cells.push(
                    q.parse_value(&cell)
                        .map_err(|_| format!("row {}, column {}: `{cell}` is not an element of `{}`", i + 1, j + 1, q.id()))?,
                );
            }
            rows.push(cells);
        }
        Ok(rows)
    }

    pub(crate) fn statement(&mut self, doc: &ModelDocument) -> PResult<Option<Decl>> {
        while *self.peek() == Tok::Newline {
            if self.at_end() {
                return Ok(None);
            }
            self.bump();
        }
        let kw = self.keyword()?;
        let decl = match kw.as_str() {
            "quantale" => {
                let name = self.name()?;
                self.punct('=')?;
                Decl::Quantale {
                    name,
                    expr: self.quantale_expr()?,
                }
            }
            "lax" => {
                let name = self.name()?;
                self.punct(':')?;
                let source = self.name()?;
                self.expect(Tok::Arrow)?;
                let target = self.name()?;
                self.punct('=')?;
                let src_q = doc.quantale(&source).map_err(|e| e.to_string())?;
                let tgt_q = doc.quantale(&target).map_err(|e| e.to_string())?;
                let expr = self.lax_expr(&src_q, &tgt_q)?;
                let unchecked = if self.is_keyword("unchecked") {
                    self.bump();
                    true
                } else {
                    false
                };
                Decl::Lax {
                    name,
                    source,
                    target,
                    expr,
                    unchecked,
                }
            }
            "category" => {
                let name = self.name()?;
                self.punct(':')?;
                let quantale = self.name()?;
                self.punct('=')?;
                let q = doc.quantale(&quantale).map_err(|e| e.to_string())?;
                Decl::Category {
                    name,
                    quantale,
                    expr: self.category_expr(&q)?,
                }
            }
            "problem" => {
                let name = self.name()?;
                self.punct(':')?;
                let source = self.name()?;
                self.expect(Tok::Arrow)?;
                let target = self.name()?;
                let over = if self.is_keyword("over") {
                    self.bump();
                    Some(self.name()?)
                } else {
                    None
                };
                self.punct('=')?;
                let q = match &over {
                    Some(o) => doc.quantale(o),
                    None => doc.category(&source).map(|c| c.quantale().clone()),
                }
                .map_err(|e| e.to_string())?;
                let expr = match self.keyword()?.as_str() {
                    "table" => ProblemExpr::Table(self.value_table(&q)?),
                    "catalog" => ProblemExpr::Catalog(self.catalog()?),
                    other => return Err(format!("unknown problem form `{other}` (expected table or catalog)")),
                };
                Decl::Problem {
                    name,
                    source,
                    target,
                    over,
                    expr,
                }
            }
            "diagram" => {
                let name = self.name()?;
                self.punct('=')?;
                Decl::Diagram {
                    name,
                    expr: self.diagram_expr()?,
                }
            }
            "query" => Decl::Query {
                diagram: self.name()?,
                resource: self.name()?,
                functionality: self.name()?,
            },
            "sweep" => {
                let name = self.name()?;
                self.punct('=')?;
                let diagram = self.name()?;
                let mut rows = None;
                let mut cols = None;
                while let Tok::Name(k) = self.peek().clone() {
                    self.bump();
                    let sel = if self.is_keyword("*") {
                        self.bump();
                        None
                    } else {
                        Some(self.name_set()?)
                    };
                    match k.as_str() {
                        "rows" => rows = sel,
                        "cols" => cols = sel,
                        other => return Err(format!("unknown sweep clause `{other}`")),
                    }
                }
                Decl::Sweep {
                    name,
                    diagram,
                    rows,
                    cols,
                }
            }
            other => return Err(format!("unknown statement `{other}`")),
        };
        if *self.peek() != Tok::Newline {
            return Err(format!("unexpected {} after statement", Self::describe(self.peek())));
        }
        Ok(Some(decl))
    }

    fn quantale_expr(&mut self) -> PResult<QuantaleExpr> {
        let kw = self.keyword()?;
        Ok(match kw.as_str() {
            "bool" => QuantaleExpr::Bool,
            "cost" => QuantaleExpr::Cost,
            "pace" => QuantaleExpr::Pace,
            "nat" => QuantaleExpr::Nat,
            "fuzz" => {
                if *self.peek() != Tok::Punct('(') {
                    return Err(Error::InvalidTNorm(String::new()).to_string());
                }
                let args = self.name_args()?;
                match args.as_slice() {
                    [t] => QuantaleExpr::Fuzz(TNorm::parse(t).map_err(|e| e.to_string())?),
                    _ => return Err(Error::InvalidTNorm(args.join(",")).to_string()),
                }
            }
            "chain" => QuantaleExpr::Chain(self.name_set()?),
            "powerset" => QuantaleExpr::Powerset(self.name_set()?),
            "powerset_pairs" => {
                let args = self.name_args()?;
                match args.as_slice() {
                    [a, b] => QuantaleExpr::PowersetPairs(a.clone(), b.clone()),
                    _ => return Err("powerset_pairs takes two powerset quantales".into()),
                }
            }
            "product" => QuantaleExpr::Product(self.name_args()?),
            other => return Err(Error::UnknownKind(other.to_string()).to_string()),
        })
    }

    fn lax_expr(&mut self, src: &Quantale, tgt: &Quantale) -> PResult<LaxExpr> {
        let kind = self.keyword()?;
        if kind == "table" {
            if *self.peek() != Tok::Punct('{') {
                return Err("expected `{` after table".into());
            }
            let inner = self.raw_group()?;
            let mut entries = Vec::new();
            for item in split_semicolons(&inner) {
                let (a, b) = item
                    .split_once("->")
                    .ok_or_else(|| format!("table entry `{item}` needs `->`"))?;
                let a = src.parse_value(a).map_err(|e| e.to_string())?;
                let b = tgt.parse_value(b).map_err(|e| e.to_string())?;
                entries.push((a, b));
            }
            return Ok(LaxExpr::Table(entries));
        }
        let mut params = Vec::new();
        if self.eat_punct('(') {
            params.push(self.number()?);
            while self.eat_punct(',') {
                params.push(self.number()?);
            }
            self.punct(')')?;
        }
        Ok(LaxExpr::Builtin { kind, params })
    }

    fn category_expr(&mut self, q: &Quantale) -> PResult<CategoryExpr> {
        let kw = self.keyword()?;
        Ok(match kw.as_str() {
            "order" => {
                let objects = self.name_set()?;
                self.punct('{')?;
                let mut pairs = Vec::new();
                if !self.eat_punct('}') {
                    loop {
                        let a = self.name()?;
                        self.expect(Tok::Le)?;
                        let b = self.name()?;
                        pairs.push((a, b));
                        if self.eat_punct('}') {
                            break;
                        }
                        self.punct(',')?;
                    }
                }
                CategoryExpr::Order { objects, pairs }
            }
            "chain" => CategoryExpr::Chain(self.name_set()?),
            "discrete" => CategoryExpr::Discrete(self.name_set()?),
            "table" => {
                let objects = self.name_set()?;
                CategoryExpr::Table {
                    objects,
                    hom: self.value_table(q)?,
                }
            }
            "nat" => {
                if *self.peek() == Tok::Punct('{') {
                    let vals = self.name_set()?;
                    let mut values = Vec::new();
                    for v in vals {
                        values.push(if v == "inf" {
                            NAT_INF
                        } else {
                            v.parse().map_err(|_| format!("`{v}` is not a natural number"))?
                        });
                    }
                    CategoryExpr::Nat { values }
                } else {
                    self.punct('(')?;
                    let cap = self.keyword()?;
                    let cap: u64 = cap.parse().map_err(|_| format!("`{cap}` is not a natural number"))?;
                    let mut values: Vec<u64> = (0..=cap).collect();
                    if self.eat_punct(',') {
                        let k = self.keyword()?;
                        if k != "inf" {
                            return Err(format!("expected `inf`, found `{k}`"));
                        }
                        values.push(NAT_INF);
                    }
                    self.punct(')')?;
                    CategoryExpr::Nat { values }
                }
            }
            "tensor" => CategoryExpr::Tensor(self.name_args()?),
            "push" => {
                let args = self.name_args()?;
                match args.as_slice() {
                    [c, m] => CategoryExpr::Push {
                        category: c.clone(),
                        map: m.clone(),
                    },
                    _ => return Err("push takes a category and a lax map".into()),
                }
            }
            other => return Err(format!("unknown category form `{other}`")),
        })
    }

    fn catalog(&mut self) -> PResult<Vec<CatalogEntry>> {
        self.punct('{')?;
        let mut out = Vec::new();
        loop {
            if self.eat_punct('}') {
                return Ok(out);
            }
            let part = self.name()?;
            self.punct(':')?;
            let k = self.keyword()?;
            if k != "req" {
                return Err(format!("expected `req`, found `{k}`"));
            }
            let req = self.name()?;
            let k = self.keyword()?;
            if k != "prov" {
                return Err(format!("expected `prov`, found `{k}`"));
            }
            let prov = self.name()?;
            out.push(CatalogEntry { part, req, prov });
            if !self.eat_punct(';') {
                self.punct('}')?;
                return Ok(out);
            }
        }
    }

    fn diagram_expr(&mut self) -> PResult<DiagramExpr> {
        let head = self.name()?;
        if *self.peek() != Tok::Punct('(') {
            return Ok(DiagramExpr::Ref(head));
        }
        self.punct('(')?;
        let e = match head.as_str() {
            "series" | "parallel" => {
                let mut items = vec![self.diagram_expr()?];
                while self.eat_punct(',') {
                    items.push(self.diagram_expr()?);
                }
                if items.len() < 2 {
                    return Err(format!("{head} needs at least two operands"));
                }
                if head == "series" {
                    DiagramExpr::Series(items)
                } else {
                    DiagramExpr::Parallel(items)
                }
            }
            "trace" => {
                let d = self.diagram_expr()?;
                self.punct(',')?;
                DiagramExpr::Trace(Box::new(d), self.name()?)
            }
            "identity" => DiagramExpr::Identity(self.name()?),
            "push" => {
                let d = self.diagram_expr()?;
                self.punct(',')?;
                DiagramExpr::Push(Box::new(d), self.name()?)
            }
            "hseries" | "hparallel" => {
                let d = self.diagram_expr()?;
                self.punct(',')?;
                let e = self.diagram_expr()?;
                self.punct(';')?;
                let m1 = self.name()?;
                self.punct(',')?;
                let m2 = self.name()?;
                if head == "hseries" {
                    DiagramExpr::HSeries(Box::new(d), Box::new(e), m1, m2)
                } else {
                    DiagramExpr::HParallel(Box::new(d), Box::new(e), m1, m2)
                }
            }
            "htrace" => {
                let d = self.diagram_expr()?;
                self.punct(',')?;
                let m = self.name()?;
                self.punct(';')?;
                DiagramExpr::HTrace(Box::new(d), m, self.name()?)
            }
            other => return Err(format!("unknown combinator `{other}`")),
        };
        self.punct(')')?;
        Ok(e)
    }

    pub(crate) fn location(&self, pos: usize) -> (usize, usize) {
        let t = &self.toks[pos.min(self.toks.len() - 1)];
        (t.line, t.col)
    }

    pub(crate) fn position(&self) -> usize {
        self.pos
    }

    /// `keyword `name`` of the statement starting at token `start`.
    pub(crate) fn entity_label(&self, start: usize) -> Option<String> {
        let kw = match &self.toks.get(start)?.tok {
            Tok::Name(k) => k.clone(),
            _ => return None,
        };
        match &self.toks.get(start + 1)?.tok {
            Tok::Name(n) | Tok::Str(n) => Some(format!("{kw} `{n}`")),
            _ => Some(kw),
        }
    }
}

fn split_semicolons(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut in_quote = false;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '"' => in_quote = !in_quote,
            '(' | '[' | '{' if !in_quote => depth += 1,
            ')' | ']' | '}' if !in_quote => depth -= 1,
            ';' if depth == 0 && !in_quote => {
                if !cur.trim().is_empty() {
                    out.push(cur.trim().to_string());
                }
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

/// Parses a full document, resolving each statement as it is read.
pub fn parse_document(src: &str) -> Result<ModelDocument> {
    let mut p = Parser::new(src)?;
    let mut doc = ModelDocument::empty();
    loop {
        let start = p.position();
        let skip_newlines = {
            let mut k = start;
            while k < p.toks.len() && p.toks[k].tok == Tok::Newline {
                k += 1;
            }
            k
        };
        let (line, col) = p.location(skip_newlines);
        let label = p.entity_label(skip_newlines);
        let located = |msg: String| {
            let what = label.clone().map(|l| format!("{l}: ")).unwrap_or_default();
            Error::Model(format!("line {line}, col {col}: {what}{msg}"))
        };
        let decl = match p.statement(&doc) {
            Ok(Some(d)) => d,
            Ok(None) => break,
            Err(msg) => {
                let (l, c) = p.location(p.position());
                let what = label.clone().map(|l| format!("{l}: ")).unwrap_or_default();
                return Err(Error::Model(format!("line {l}, col {c}: {what}{msg}")));
            }
        };
        let name = decl.name().map(str::to_string);
        doc.add(decl).map_err(|e| located(e.to_string()))?;
        if let Some(n) = name {
            doc.set_location(&n, line, col);
        }
    }
    Ok(doc)
}

