//! Line-oriented construction language.
//!
//! ```text
//! # two squares sharing an edge
//! graph sq = cycle 4
//! graph l3 = chain(sq, 2)
//! verify l3
//! sequence l3 6
//! ```
//!
//! Statements end at a newline or `;`. `#` starts a comment.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::graph::Family;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {col}: syntax error: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("line {line}, column {col}: undefined name `{name}`")]
    UndefinedName {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("line {line}, column {col}: duplicate name `{name}`")]
    DuplicateName {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("line {line}, column {col}: invalid arity: {message}")]
    InvalidArity {
        line: usize,
        col: usize,
        message: String,
    },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::UndefinedName { line, .. }
            | ParseError::DuplicateName { line, .. }
            | ParseError::InvalidArity { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexRef {
    pub name: String,
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRef {
    pub name: String,
    pub u: usize,
    pub v: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphExpr {
    Standard(Family, usize),
    /// Parent array; entry 0 is ignored.
    Tree(Vec<usize>),
    /// A previously bound graph.
    Ref(String),
    VGlue(VertexRef, VertexRef),
    EGlue(EdgeRef, EdgeRef),
    Bridge(VertexRef, VertexRef),
    Chain(Box<GraphExpr>, usize),
    Book(Box<GraphExpr>, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Count(String),
    Oracle(String),
    Verify(String),
    Sequence(String, usize),
}

impl Action {
    pub fn name(&self) -> &str {
        match self {
            Action::Count(n) | Action::Oracle(n) | Action::Verify(n) | Action::Sequence(n, _) => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub name: String,
    pub expr: GraphExpr,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Plan {
    pub bindings: Vec<Binding>,
    pub actions: Vec<Action>,
}

const KEYWORDS: &[&str] = &[
    "graph", "count", "oracle", "verify", "sequence", "complete", "cycle", "path", "empty", "tree",
    "vglue", "eglue", "bridge", "chain", "book",
];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(usize),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::End => f.write_str("end of statement"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

/// Splits the source into statements of tokens; each statement ends with a
/// `Tok::End` carrying the position just past its last token.
fn lex(text: &str) -> Result<Vec<Vec<Token>>, ParseError> {
    let mut statements = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    for (idx, raw) in text.split('\n').enumerate() {
        let line = idx + 1;
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                i += 1;
            } else if c == ';' {
                push_statement(&mut statements, &mut current, line, col);
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let value = digits.parse().map_err(|_| ParseError::Syntax {
                    line,
                    col,
                    message: format!("integer `{digits}` is too large"),
                })?;
                current.push(Token {
                    tok: Tok::Int(value),
                    line,
                    col,
                });
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                current.push(Token {
                    tok: Tok::Ident(word),
                    line,
                    col,
                });
            } else if "=()[],.".contains(c) {
                current.push(Token {
                    tok: Tok::Sym(c),
                    line,
                    col,
                });
                i += 1;
            } else {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
        push_statement(&mut statements, &mut current, line, chars.len() + 1);
    }
    Ok(statements)
}

fn push_statement(
    statements: &mut Vec<Vec<Token>>,
    current: &mut Vec<Token>,
    line: usize,
    col: usize,
) {
    if !current.is_empty() {
        current.push(Token {
            tok: Tok::End,
            line,
            col,
        });
        statements.push(std::mem::take(current));
    }
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn bump(&mut self) -> &Token {
        let t = &self.tokens[self.pos.min(self.tokens.len() - 1)];
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error(&self, at: &Token, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: at.line,
            col: at.col,
            message: message.into(),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        let t = self.bump().clone();
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            Err(self.error(&t, format!("expected `{c}`, found {}", t.tok)))
        }
    }

    fn int(&mut self) -> Result<(usize, Token), ParseError> {
        let t = self.bump().clone();
        match t.tok {
            Tok::Int(v) => Ok((v, t)),
            _ => Err(self.error(&t, format!("expected an integer, found {}", t.tok))),
        }
    }

    fn ident(&mut self) -> Result<(String, Token), ParseError> {
        let t = self.bump().clone();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t)),
            _ => Err(self.error(&t, format!("expected a name, found {}", t.tok))),
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        let t = self.bump().clone();
        if t.tok == Tok::End {
            Ok(())
        } else {
            Err(self.error(&t, format!("unexpected {} after statement", t.tok)))
        }
    }
}

struct Scope {
    bound: HashSet<String>,
}

impl Scope {
    fn name(&self, p: &mut Parser<'_>) -> Result<String, ParseError> {
        let (name, t) = p.ident()?;
        if KEYWORDS.contains(&name.as_str()) {
            return Err(p.error(&t, format!("`{name}` is a keyword, not a name")));
        }
        if !self.bound.contains(&name) {
            return Err(ParseError::UndefinedName {
                line: t.line,
                col: t.col,
                name,
            });
        }
        Ok(name)
    }

    fn vertex_ref(&self, p: &mut Parser<'_>) -> Result<VertexRef, ParseError> {
        let name = self.name(p)?;
        p.expect_sym('.')?;
        let (vertex, _) = p.int()?;
        Ok(VertexRef { name, vertex })
    }

    fn edge_ref(&self, p: &mut Parser<'_>) -> Result<EdgeRef, ParseError> {
        let name = self.name(p)?;
        p.expect_sym('.')?;
        let (u, _) = p.int()?;
        p.expect_sym('.')?;
        let (v, _) = p.int()?;
        Ok(EdgeRef { name, u, v })
    }

    fn two<T>(
        &self,
        p: &mut Parser<'_>,
        item: impl Fn(&Self, &mut Parser<'_>) -> Result<T, ParseError>,
    ) -> Result<(T, T), ParseError> {
        p.expect_sym('(')?;
        let a = item(self, p)?;
        p.expect_sym(',')?;
        let b = item(self, p)?;
        p.expect_sym(')')?;
        Ok((a, b))
    }

    fn copies(&self, p: &mut Parser<'_>) -> Result<(GraphExpr, usize), ParseError> {
        p.expect_sym('(')?;
        let base = self.expr(p)?;
        p.expect_sym(',')?;
        let (m, t) = p.int()?;
        if m == 0 {
            return Err(arity(&t, "at least one copy is required"));
        }
        p.expect_sym(')')?;
        Ok((base, m))
    }

    fn expr(&self, p: &mut Parser<'_>) -> Result<GraphExpr, ParseError> {
        let head = p.peek().clone();
        let Tok::Ident(word) = &head.tok else {
            return Err(p.error(
                &head,
                format!("expected a graph expression, found {}", head.tok),
            ));
        };
        let family = match word.as_str() {
            "complete" => Some(Family::Complete),
            "cycle" => Some(Family::Cycle),
            "path" => Some(Family::Path),
            "empty" => Some(Family::Empty),
            _ => None,
        };
        if let Some(family) = family {
            p.bump();
            let (n, t) = p.int()?;
            if family == Family::Cycle && n < 3 {
                return Err(arity(&t, format!("cycle needs n >= 3, got {n}")));
            }
            return Ok(GraphExpr::Standard(family, n));
        }
        match word.as_str() {
            "tree" => {
                p.bump();
                Ok(GraphExpr::Tree(parent_list(p)?))
            }
            "vglue" => {
                p.bump();
                let (a, b) = self.two(p, Self::vertex_ref)?;
                Ok(GraphExpr::VGlue(a, b))
            }
            "bridge" => {
                p.bump();
                let (a, b) = self.two(p, Self::vertex_ref)?;
                Ok(GraphExpr::Bridge(a, b))
            }
            "eglue" => {
                p.bump();
                let (a, b) = self.two(p, Self::edge_ref)?;
                Ok(GraphExpr::EGlue(a, b))
            }
            "chain" => {
                p.bump();
                let (base, m) = self.copies(p)?;
                Ok(GraphExpr::Chain(Box::new(base), m))
            }
            "book" => {
                p.bump();
                let (base, m) = self.copies(p)?;
                Ok(GraphExpr::Book(Box::new(base), m))
            }
            _ => Ok(GraphExpr::Ref(self.name(p)?)),
        }
    }
}

fn arity(at: &Token, message: impl Into<String>) -> ParseError {
    ParseError::InvalidArity {
        line: at.line,
        col: at.col,
        message: message.into(),
    }
}

fn parent_list(p: &mut Parser<'_>) -> Result<Vec<usize>, ParseError> {
    p.expect_sym('[')?;
    let mut parents = Vec::new();
    if p.peek().tok == Tok::Sym(']') {
        p.bump();
        return Ok(parents);
    }
    loop {
        let t = p.bump().clone();
        let value = match &t.tok {
            Tok::Int(v) => *v,
            Tok::Ident(s) if s == "_" && parents.is_empty() => 0,
            _ => return Err(p.error(&t, format!("expected a parent index, found {}", t.tok))),
        };
        let index = parents.len();
        if index >= 1 && value >= index {
            return Err(arity(
                &t,
                format!("parent of vertex {index} must be < {index}, got {value}"),
            ));
        }
        parents.push(value);
        let sep = p.bump().clone();
        match sep.tok {
            Tok::Sym(',') => continue,
            Tok::Sym(']') => return Ok(parents),
            _ => return Err(p.error(&sep, format!("expected `,` or `]`, found {}", sep.tok))),
        }
    }
}

/// Parses a program. Names must be bound before use and bound only once.
pub fn parse(text: &str) -> Result<Plan, ParseError> {
    let mut plan = Plan::default();
    let mut scope = Scope {
        bound: HashSet::new(),
    };
    for statement in lex(text)? {
        let mut p = Parser {
            tokens: &statement,
            pos: 0,
        };
        let (keyword, head) = p.ident()?;
        match keyword.as_str() {
            "graph" => {
                let (name, t) = p.ident()?;
                if KEYWORDS.contains(&name.as_str()) {
                    return Err(p.error(&t, format!("`{name}` is a keyword, not a name")));
                }
                if scope.bound.contains(&name) {
                    return Err(ParseError::DuplicateName {
                        line: t.line,
                        col: t.col,
                        name,
                    });
                }
                p.expect_sym('=')?;
                let expr = scope.expr(&mut p)?;
                p.end()?;
                scope.bound.insert(name.clone());
                plan.bindings.push(Binding { name, expr });
            }
            "count" | "oracle" | "verify" => {
                let name = scope.name(&mut p)?;
                p.end()?;
                plan.actions.push(match keyword.as_str() {
                    "count" => Action::Count(name),
                    "oracle" => Action::Oracle(name),
                    _ => Action::Verify(name),
                });
            }
            "sequence" => {
                let name = scope.name(&mut p)?;
                let (m, t) = p.int()?;
                if m == 0 {
                    return Err(arity(&t, "sequence length must be at least 1"));
                }
                p.end()?;
                plan.actions.push(Action::Sequence(name, m));
            }
            _ => return Err(p.error(&head, format!("unknown statement `{keyword}`"))),
        }
    }
    Ok(plan)
}

impl fmt::Display for GraphExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphExpr::Standard(family, n) => write!(f, "{family} {n}"),
            GraphExpr::Tree(parents) => {
                let list: Vec<String> = parents.iter().map(usize::to_string).collect();
                write!(f, "tree [{}]", list.join(","))
            }
            GraphExpr::Ref(name) => f.write_str(name),
            GraphExpr::VGlue(a, b) => {
                write!(f, "vglue({}.{}, {}.{})", a.name, a.vertex, b.name, b.vertex)
            }
            GraphExpr::Bridge(a, b) => write!(
                f,
                "bridge({}.{}, {}.{})",
                a.name, a.vertex, b.name, b.vertex
            ),
            GraphExpr::EGlue(a, b) => write!(
                f,
                "eglue({}.{}.{}, {}.{}.{})",
                a.name, a.u, a.v, b.name, b.u, b.v
            ),
            GraphExpr::Chain(base, m) => write!(f, "chain({base}, {m})"),
            GraphExpr::Book(base, m) => write!(f, "book({base}, {m})"),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Count(n) => write!(f, "count {n}"),
            Action::Oracle(n) => write!(f, "oracle {n}"),
            Action::Verify(n) => write!(f, "verify {n}"),
            Action::Sequence(n, m) => write!(f, "sequence {n} {m}"),
        }
    }
}

/// Bindings first, then actions, one statement per line.
impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bindings {
            writeln!(f, "graph {} = {}", b.name, b.expr)?;
        }
        for a in &self.actions {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}
