//! Table queries: `+` union, `&` intersection, postfix `[granular]`
//! selection and parentheses over named tables.

use std::collections::BTreeMap;
use std::fmt;

use mnesor_core::relalg::{
    self, parse_granular, GranularExpr, MembershipEnv, ParseError, RelalgError, Table,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryExpr {
    Table(String),
    Union(Box<QueryExpr>, Box<QueryExpr>),
    Intersect(Box<QueryExpr>, Box<QueryExpr>),
    Select(Box<QueryExpr>, GranularExpr),
}

impl QueryExpr {
    /// Table names in order of first appearance.
    pub fn tables(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_tables(&mut out);
        out
    }

    fn collect_tables<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            QueryExpr::Table(n) => {
                if !out.contains(&n.as_str()) {
                    out.push(n);
                }
            }
            QueryExpr::Union(a, b) | QueryExpr::Intersect(a, b) => {
                a.collect_tables(out);
                b.collect_tables(out);
            }
            QueryExpr::Select(t, _) => t.collect_tables(out),
        }
    }

    /// Granular names in order of first appearance.
    pub fn granular_names(&self) -> Vec<&str> {
        fn walk_granular<'a>(g: &'a GranularExpr, out: &mut Vec<&'a str>) {
            match g {
                GranularExpr::Name(n) => {
                    if !out.contains(&n.as_str()) {
                        out.push(n);
                    }
                }
                GranularExpr::Top | GranularExpr::Bottom => {}
                GranularExpr::Join(a, b) | GranularExpr::Meet(a, b) => {
                    walk_granular(a, out);
                    walk_granular(b, out);
                }
                GranularExpr::Complement(a) => walk_granular(a, out),
            }
        }
        fn walk<'a>(q: &'a QueryExpr, out: &mut Vec<&'a str>) {
            match q {
                QueryExpr::Table(_) => {}
                QueryExpr::Union(a, b) | QueryExpr::Intersect(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                QueryExpr::Select(t, g) => {
                    walk(t, out);
                    walk_granular(g, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

impl fmt::Display for QueryExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn prec(q: &QueryExpr) -> u8 {
            match q {
                QueryExpr::Union(..) => 0,
                QueryExpr::Intersect(..) => 1,
                QueryExpr::Select(..) | QueryExpr::Table(_) => 2,
            }
        }
        fn side(f: &mut fmt::Formatter<'_>, q: &QueryExpr, min: u8) -> fmt::Result {
            if prec(q) < min {
                write!(f, "({q})")
            } else {
                write!(f, "{q}")
            }
        }
        match self {
            QueryExpr::Table(n) => f.write_str(n),
            QueryExpr::Union(a, b) => {
                side(f, a, 0)?;
                f.write_str(" + ")?;
                side(f, b, 1)
            }
            QueryExpr::Intersect(a, b) => {
                side(f, a, 1)?;
                f.write_str(" & ")?;
                side(f, b, 2)
            }
            QueryExpr::Select(t, g) => {
                side(f, t, 2)?;
                write!(f, "[{g}]")
            }
        }
    }
}

const OPERAND: &[&str] = &["table name", "`(`"];
const OPERATOR: &[&str] = &["`+`", "`&`", "`[`", "end of input"];

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn describe(src: &str, pos: usize) -> String {
    match src[pos..].chars().next() {
        None => "end of input".to_owned(),
        Some(c) => format!("`{c}`"),
    }
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            position: self.pos,
            found: describe(self.src, self.pos),
            expected: expected.to_vec(),
        }
    }

    fn union(&mut self) -> Result<QueryExpr, ParseError> {
        let mut lhs = self.intersect()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            let rhs = self.intersect()?;
            lhs = QueryExpr::Union(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn intersect(&mut self) -> Result<QueryExpr, ParseError> {
        let mut lhs = self.postfix()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            let rhs = self.postfix()?;
            lhs = QueryExpr::Intersect(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> Result<QueryExpr, ParseError> {
        let mut q = self.atom()?;
        while self.peek() == Some('[') {
            let open = self.pos;
            let start = open + 1;
            let Some(len) = self.src[start..].find(']') else {
                self.pos = self.src.len();
                return Err(self.error(&["`]`"]));
            };
            let g = parse_granular(&self.src[start..start + len]).map_err(|mut e| {
                e.position += start;
                if e.found == "end of input" {
                    e.found = "`]`".to_owned();
                }
                for x in &mut e.expected {
                    if *x == "end of input" {
                        *x = "`]`";
                    }
                }
                e
            })?;
            self.pos = start + len + 1;
            q = QueryExpr::Select(Box::new(q), g);
        }
        Ok(q)
    }

    fn atom(&mut self) -> Result<QueryExpr, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let q = self.union()?;
                if self.peek() != Some(')') {
                    return Err(self.error(&["`+`", "`&`", "`[`", "`)`"]));
                }
                self.pos += 1;
                Ok(q)
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let rest = &self.src[self.pos..];
                let len = rest
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(rest.len());
                self.pos += len;
                Ok(QueryExpr::Table(rest[..len].to_owned()))
            }
            _ => Err(self.error(OPERAND)),
        }
    }
}

pub fn parse_query(text: &str) -> Result<QueryExpr, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let q = p.union()?;
    if p.peek().is_some() {
        return Err(p.error(OPERATOR));
    }
    Ok(q)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unknown table `{name}`; bound: {}", known.join(", "))]
    UnknownTable { name: String, known: Vec<String> },
    #[error(transparent)]
    Relalg(#[from] RelalgError),
}

impl EvalError {
    /// True for name-resolution failures, false for data-dependent ones.
    pub fn is_resolution(&self) -> bool {
        matches!(
            self,
            EvalError::UnknownTable { .. } | EvalError::Relalg(RelalgError::UnknownName { .. })
        )
    }
}

pub fn evaluate(
    q: &QueryExpr,
    tables: &BTreeMap<String, Table>,
    env: &MembershipEnv,
) -> Result<Table, EvalError> {
    match q {
        QueryExpr::Table(name) => {
            tables
                .get(name)
                .cloned()
                .ok_or_else(|| EvalError::UnknownTable {
                    name: name.clone(),
                    known: tables.keys().cloned().collect(),
                })
        }
        QueryExpr::Union(a, b) => Ok(relalg::union(
            &evaluate(a, tables, env)?,
            &evaluate(b, tables, env)?,
            env,
        )?),
        QueryExpr::Intersect(a, b) => Ok(relalg::intersection(
            &evaluate(a, tables, env)?,
            &evaluate(b, tables, env)?,
            env,
        )?),
        QueryExpr::Select(t, g) => Ok(relalg::select(&evaluate(t, tables, env)?, g, env)?),
    }
}
