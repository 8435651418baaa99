//! File-level include graphs in the DOT language.
//!
//! The writer emits one quoted node statement per file and one edge
//! statement per include, both sorted, so output is byte-stable. The reader
//! accepts the directed subset of DOT that include-graph generators emit:
//! graph/node/edge attribute statements, `key=value` statements, node
//! statements, edge chains, subgraphs (flattened) and comments. Attributes
//! and ports are ignored.

use crate::error::{Error, Result};
use crate::model::FileGraph;

fn quote(id: &str) -> String {
    let mut out = String::with_capacity(id.len() + 2);
    out.push('"');
    for ch in id.chars() {
        if ch == '"' || ch == '\\' {
            out.push('\\');
        }
        out.push(ch);
    }
    out.push('"');
    out
}

pub fn emit_file_dot(graph: &FileGraph) -> String {
    let mut out = String::from("digraph \"include_graph\" {\n");
    for node in graph.nodes() {
        out.push_str("  ");
        out.push_str(&quote(node));
        out.push_str(";\n");
    }
    for (from, to) in graph.edges() {
        out.push_str(&format!("  {} -> {};\n", quote(from), quote(to)));
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Id(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Eq,
    Colon,
    Arrow,
    UndirectedEdge,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    at_line_start: bool,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            src: text.as_bytes(),
            pos: 0,
            line: 1,
            at_line_start: true,
        }
    }

    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::parse("<dot>", line, message)
    }

    fn peek(&self, off: usize) -> Option<u8> {
        self.src.get(self.pos + off).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.at_line_start = true;
        } else if !b.is_ascii_whitespace() {
            self.at_line_start = false;
        }
        Some(b)
    }

    fn skip_trivia(&mut self) -> Result<()> {
        loop {
            match (self.peek(0), self.peek(1)) {
                (Some(b), _) if b.is_ascii_whitespace() => {
                    self.bump();
                }
                (Some(b'#'), _) if self.at_line_start => {
                    while let Some(b) = self.peek(0) {
                        if b == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                (Some(b'/'), Some(b'/')) => {
                    while let Some(b) = self.peek(0) {
                        if b == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                (Some(b'/'), Some(b'*')) => {
                    let start = self.line;
                    self.bump();
                    self.bump();
                    loop {
                        match (self.peek(0), self.peek(1)) {
                            (Some(b'*'), Some(b'/')) => {
                                self.bump();
                                self.bump();
                                break;
                            }
                            (Some(_), _) => {
                                self.bump();
                            }
                            (None, _) => return Err(self.err(start, "unterminated comment")),
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn next(&mut self) -> Result<Option<(Tok, usize)>> {
        self.skip_trivia()?;
        let line = self.line;
        let Some(b) = self.peek(0) else {
            return Ok(None);
        };
        let tok = match b {
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b';' => Tok::Semi,
            b',' => Tok::Comma,
            b'=' => Tok::Eq,
            b':' => Tok::Colon,
            b'-' if self.peek(1) == Some(b'>') => {
                self.bump();
                Tok::Arrow
            }
            b'-' if self.peek(1) == Some(b'-') => {
                self.bump();
                Tok::UndirectedEdge
            }
            b'"' => return self.quoted(line).map(|t| Some((t, line))),
            b'<' => return self.html(line).map(|t| Some((t, line))),
            b if b.is_ascii_alphanumeric() || b == b'_' || b == b'.' || b == b'-' || b >= 0x80 => {
                return Ok(Some((self.bare(), line)));
            }
            other => {
                return Err(self.err(line, format!("unexpected character {:?}", other as char)));
            }
        };
        self.bump();
        Ok(Some((tok, line)))
    }

    fn quoted(&mut self, line: usize) -> Result<Tok> {
        self.bump();
        let mut buf = Vec::new();
        loop {
            match self.bump() {
                None => return Err(self.err(line, "unterminated string")),
                Some(b'"') => break,
                Some(b'\\') => match self.bump() {
                    Some(b'"') => buf.push(b'"'),
                    Some(b'\\') => buf.push(b'\\'),
                    Some(b'\n') => {}
                    Some(b'\r') if self.peek(0) == Some(b'\n') => {
                        self.bump();
                    }
                    Some(other) => buf.extend_from_slice(&[b'\\', other]),
                    None => return Err(self.err(line, "unterminated string")),
                },
                Some(b) => buf.push(b),
            }
        }
        // The input is a &str and escapes only remove ASCII bytes.
        Ok(Tok::Id(String::from_utf8(buf).expect("valid UTF-8")))
    }

    fn html(&mut self, line: usize) -> Result<Tok> {
        let start = self.pos;
        let mut depth = 0usize;
        loop {
            match self.bump() {
                None => return Err(self.err(line, "unterminated HTML string")),
                Some(b'<') => depth += 1,
                Some(b'>') => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                Some(_) => {}
            }
        }
        let text = &self.src[start + 1..self.pos - 1];
        Ok(Tok::Id(String::from_utf8_lossy(text).into_owned()))
    }

    fn bare(&mut self) -> Tok {
        let start = self.pos;
        while let Some(b) = self.peek(0) {
            let is_edge_op = b == b'-' && matches!(self.peek(1), Some(b'>') | Some(b'-'));
            if (b.is_ascii_alphanumeric() || b == b'_' || b == b'.' || b == b'-' || b >= 0x80)
                && !is_edge_op
            {
                self.bump();
            } else {
                break;
            }
        }
        Tok::Id(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    last_line: usize,
    graph: FileGraph,
}

fn keyword(tok: &Tok, kw: &str) -> bool {
    matches!(tok, Tok::Id(s) if s.eq_ignore_ascii_case(kw))
}

impl Parser {
    fn err(&self, message: impl Into<String>) -> Error {
        let line = self.toks.get(self.pos).map_or(self.last_line, |t| t.1);
        Error::parse("<dot>", line, message)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_at(&self, off: usize) -> Option<&Tok> {
        self.toks.get(self.pos + off).map(|t| &t.0)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn id(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Id(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err("expected identifier")),
        }
    }

    fn document(&mut self) -> Result<()> {
        if self.peek().is_some_and(|t| keyword(t, "strict")) {
            self.pos += 1;
        }
        match self.peek() {
            Some(t) if keyword(t, "digraph") => self.pos += 1,
            Some(t) if keyword(t, "graph") => {
                return Err(self.err("undirected graphs are not include graphs; expected digraph"))
            }
            _ => return Err(self.err("expected `digraph`")),
        }
        if matches!(self.peek(), Some(Tok::Id(_))) {
            self.pos += 1;
        }
        self.expect(&Tok::LBrace, "`{`")?;
        self.stmt_list()?;
        self.expect(&Tok::RBrace, "`}`")?;
        if self.peek().is_some() {
            return Err(self.err("unexpected content after graph"));
        }
        Ok(())
    }

    fn stmt_list(&mut self) -> Result<Vec<String>> {
        let mut members = Vec::new();
        while let Some(tok) = self.peek() {
            if *tok == Tok::RBrace {
                break;
            }
            self.stmt(&mut members)?;
            self.eat(&Tok::Semi);
        }
        Ok(members)
    }

    fn stmt(&mut self, members: &mut Vec<String>) -> Result<()> {
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end of input"))?;
        if ["graph", "node", "edge"].iter().any(|kw| keyword(&tok, kw))
            && self.peek_at(1) == Some(&Tok::LBracket)
        {
            self.pos += 1;
            return self.attr_lists();
        }
        if matches!(tok, Tok::Id(_)) && self.peek_at(1) == Some(&Tok::Eq) {
            self.pos += 2;
            self.id()?;
            return Ok(());
        }

        let mut left = self.endpoint()?;
        members.extend(left.iter().cloned());
        let mut had_edge = false;
        loop {
            if self.eat(&Tok::Arrow) {
                let right = self.endpoint()?;
                members.extend(right.iter().cloned());
                for from in &left {
                    for to in &right {
                        self.graph.add_edge(from.clone(), to.clone());
                    }
                }
                left = right;
                had_edge = true;
            } else if self.peek() == Some(&Tok::UndirectedEdge) {
                return Err(self.err("`--` edge in a digraph"));
            } else {
                break;
            }
        }
        if !had_edge {
            for node in &left {
                self.graph.add_node(node.clone());
            }
        }
        if self.peek() == Some(&Tok::LBracket) {
            self.attr_lists()?;
        }
        Ok(())
    }

    /// A node id (ports dropped) or a subgraph; yields the node ids it names.
    fn endpoint(&mut self) -> Result<Vec<String>> {
        let is_subgraph = match self.peek() {
            Some(Tok::LBrace) => true,
            Some(t) => keyword(t, "subgraph"),
            None => false,
        };
        if is_subgraph {
            if self.peek().is_some_and(|t| keyword(t, "subgraph")) {
                self.pos += 1;
                if matches!(self.peek(), Some(Tok::Id(_))) {
                    self.pos += 1;
                }
            }
            self.expect(&Tok::LBrace, "`{`")?;
            let members = self.stmt_list()?;
            self.expect(&Tok::RBrace, "`}`")?;
            for m in &members {
                self.graph.add_node(m.clone());
            }
            return Ok(members);
        }
        let id = self.id()?;
        for _ in 0..2 {
            if self.eat(&Tok::Colon) {
                self.id()?;
            }
        }
        Ok(vec![id])
    }

    fn attr_lists(&mut self) -> Result<()> {
        if self.peek() != Some(&Tok::LBracket) {
            return Err(self.err("expected `[`"));
        }
        while self.eat(&Tok::LBracket) {
            while !self.eat(&Tok::RBracket) {
                self.id()?;
                if self.eat(&Tok::Eq) {
                    self.id()?;
                }
                if !self.eat(&Tok::Comma) {
                    self.eat(&Tok::Semi);
                }
            }
        }
        Ok(())
    }
}

/// Parses a DOT digraph into a file graph. Edge endpoints that were never
/// declared become nodes.
pub fn read_file_dot(text: &str) -> Result<FileGraph> {
    let mut lexer = Lexer::new(text);
    let mut toks = Vec::new();
    while let Some(tok) = lexer.next()? {
        toks.push(tok);
    }
    let last_line = toks.last().map_or(1, |t: &(Tok, usize)| t.1);
    let mut parser = Parser {
        toks,
        pos: 0,
        last_line,
        graph: FileGraph::new(),
    };
    parser.document()?;
    Ok(parser.graph)
}
