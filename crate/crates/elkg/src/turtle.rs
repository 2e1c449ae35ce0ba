//! Turtle serialization and parsing, restricted to the constructs trace
//! graphs emit: prefix declarations, qualified names and full IRIs, the
//! `a` keyword, `;` predicate groups and `,` object lists, plain and
//! typed literals, language tags, numeric and boolean shorthand, blank
//! node labels, and `#` comments. Collections `( )`, anonymous property
//! lists `[ ]`, graph terms, and `@base` are rejected with an error
//! naming the construct.
//!
//! Serialization is deterministic: prefixes sorted by label, triples
//! sorted by subject, predicate, and object; serialize → parse →
//! serialize is byte-identical.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, PrefixMap};
use crate::term::{Term, Triple};
use crate::vocab;

// ---------------------------------------------------------------------
// Serializer
// ---------------------------------------------------------------------

/// Renders a frozen graph as Turtle text.
pub fn serialize_turtle(graph: &Graph) -> String {
    let mut out = String::new();
    for (prefix, namespace) in graph.prefixes().iter() {
        out.push_str(&format!("@prefix {prefix}: <{namespace}> .\n"));
    }

    let mut triples: Vec<&Triple> = graph.triples().iter().collect();
    triples.sort_by(|a, b| {
        (term_sort_key(&a.subject), predicate_iri(a), term_sort_key(&a.object)).cmp(&(
            term_sort_key(&b.subject),
            predicate_iri(b),
            term_sort_key(&b.object),
        ))
    });

    if !triples.is_empty() {
        out.push('\n');
    }
    let prefixes = graph.prefixes();
    let mut current_subject: Option<&Term> = None;
    for (i, triple) in triples.iter().enumerate() {
        let same_subject = current_subject == Some(&triple.subject);
        if same_subject {
            out.push_str(" ;\n    ");
        } else {
            if current_subject.is_some() {
                out.push_str(" .\n");
            }
            out.push_str(&render_term(&triple.subject, prefixes));
            out.push(' ');
            current_subject = Some(&triple.subject);
        }
        out.push_str(&render_predicate(&triple.predicate, prefixes));
        out.push(' ');
        out.push_str(&render_term(&triple.object, prefixes));
        if i == triples.len() - 1 {
            out.push_str(" .\n");
        }
    }
    out
}

fn predicate_iri(triple: &Triple) -> &str {
    triple.predicate.iri().unwrap_or_default()
}

type SortKey<'a> = (u8, &'a str, &'a str, &'a str);

fn term_sort_key(term: &Term) -> SortKey<'_> {
    match term {
        Term::Resource(iri) => (0, iri, "", ""),
        Term::Anonymous(label) => (1, label, "", ""),
        Term::Literal {
            lexical,
            datatype,
            language,
        } => (2, lexical, datatype, language.as_deref().unwrap_or("")),
    }
}

fn render_predicate(term: &Term, prefixes: &PrefixMap) -> String {
    if term.iri() == Some(vocab::RDF_TYPE) {
        "a".to_owned()
    } else {
        render_term(term, prefixes)
    }
}

fn render_term(term: &Term, prefixes: &PrefixMap) -> String {
    match term {
        Term::Resource(iri) => render_iri(iri, prefixes),
        Term::Anonymous(label) => format!("_:{label}"),
        Term::Literal {
            lexical,
            datatype,
            language,
        } => render_literal(lexical, datatype, language.as_deref(), prefixes),
    }
}

fn render_iri(iri: &str, prefixes: &PrefixMap) -> String {
    if let Some((prefix, local)) = prefixes.qualify(iri) {
        if !local.is_empty() && is_valid_local(local) {
            return format!("{prefix}:{local}");
        }
    }
    format!("<{iri}>")
}

fn render_literal(
    lexical: &str,
    datatype: &str,
    language: Option<&str>,
    prefixes: &PrefixMap,
) -> String {
    match datatype {
        vocab::XSD_BOOLEAN if lexical == "true" || lexical == "false" => lexical.to_owned(),
        vocab::XSD_INTEGER if is_integer_lexical(lexical) => lexical.to_owned(),
        vocab::XSD_DECIMAL if is_decimal_lexical(lexical) => lexical.to_owned(),
        vocab::XSD_STRING => format!("\"{}\"", escape_string(lexical)),
        vocab::RDF_LANG_STRING => format!(
            "\"{}\"@{}",
            escape_string(lexical),
            language.unwrap_or("und")
        ),
        other => format!(
            "\"{}\"^^{}",
            escape_string(lexical),
            render_iri(other, prefixes)
        ),
    }
}

fn is_integer_lexical(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn is_decimal_lexical(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    match body.split_once('.') {
        Some((whole, frac)) => {
            !frac.is_empty()
                && whole.bytes().all(|b| b.is_ascii_digit())
                && frac.bytes().all(|b| b.is_ascii_digit())
        }
        None => false,
    }
}

fn is_valid_local(s: &str) -> bool {
    let mut bytes = s.bytes();
    match bytes.next() {
        Some(b) if b.is_ascii_alphanumeric() || b == b'_' => {}
        _ => return false,
    }
    bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-')
}

fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

// ---------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------

/// Parses a Turtle document in the supported subset into a frozen graph.
pub fn parse_turtle(text: &str) -> Result<Graph> {
    Parser::new(text).parse()
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    PrefixKeyword,
    /// Prefixed name; the local part may be empty (`tr:`).
    Pname(String, String),
    IriRef(String),
    BlankNode(String),
    StringLit(String),
    LangTag(String),
    DatatypeMarker,
    Integer(String),
    Decimal(String),
    Boolean(bool),
    KeywordA,
    Dot,
    Semicolon,
    Comma,
    Eof,
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    lookahead: Option<(Token, usize, usize)>,
    prefixes: HashMap<String, String>,
}

impl Parser {
    fn new(text: &str) -> Parser {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            lookahead: None,
            prefixes: HashMap::new(),
        }
    }

    fn syntax<T>(&self, line: usize, column: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::TurtleSyntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn unsupported<T>(&self, line: usize, column: usize, construct: &str) -> Result<T> {
        Err(Error::TurtleUnsupported {
            line,
            column,
            construct: construct.to_owned(),
        })
    }

    fn parse(mut self) -> Result<Graph> {
        let mut builder = GraphBuilder::new();
        loop {
            let (token, line, column) = self.peek()?;
            match token {
                Token::Eof => break,
                Token::PrefixKeyword => {
                    self.advance()?;
                    self.parse_prefix_decl(&mut builder)?;
                }
                _ => {
                    let _ = (line, column);
                    self.parse_triples(&mut builder)?;
                }
            }
        }
        Ok(builder.freeze())
    }

    fn parse_prefix_decl(&mut self, builder: &mut GraphBuilder) -> Result<()> {
        let (token, line, column) = self.advance()?;
        let prefix = match token {
            Token::Pname(prefix, local) if local.is_empty() => prefix,
            other => return self.syntax(line, column, format!("expected prefix label, got {other:?}")),
        };
        let (token, line, column) = self.advance()?;
        let namespace = match token {
            Token::IriRef(iri) => iri,
            other => return self.syntax(line, column, format!("expected IRI, got {other:?}")),
        };
        self.expect_dot()?;
        self.prefixes.insert(prefix.clone(), namespace.clone());
        builder.declare_prefix(prefix, namespace);
        Ok(())
    }

    fn parse_triples(&mut self, builder: &mut GraphBuilder) -> Result<()> {
        let (token, line, column) = self.advance()?;
        let subject = match token {
            Token::Pname(prefix, local) => self.resolve(&prefix, &local, line, column)?,
            Token::IriRef(iri) => self.check_iri(iri, line, column)?,
            Token::BlankNode(label) => Term::anonymous(label),
            other => return self.syntax(line, column, format!("expected subject, got {other:?}")),
        };
        loop {
            let predicate = self.parse_verb()?;
            loop {
                let object = self.parse_object()?;
                builder.insert(
                    Triple::new(subject.clone(), predicate.clone(), object)
                        .map_err(|e| self.at_current(e))?,
                );
                match self.peek()?.0 {
                    Token::Comma => {
                        self.advance()?;
                    }
                    _ => break,
                }
            }
            let (token, line, column) = self.advance()?;
            match token {
                Token::Dot => return Ok(()),
                Token::Semicolon => {
                    // trailing semicolon before the dot is allowed
                    if self.peek()?.0 == Token::Dot {
                        self.advance()?;
                        return Ok(());
                    }
                }
                other => {
                    return self.syntax(line, column, format!("expected '.' or ';', got {other:?}"))
                }
            }
        }
    }

    fn parse_verb(&mut self) -> Result<Term> {
        let (token, line, column) = self.advance()?;
        match token {
            Token::KeywordA => Ok(Term::Resource(vocab::RDF_TYPE.to_owned())),
            Token::Pname(prefix, local) => self.resolve(&prefix, &local, line, column),
            Token::IriRef(iri) => self.check_iri(iri, line, column),
            other => self.syntax(line, column, format!("expected predicate, got {other:?}")),
        }
    }

    fn parse_object(&mut self) -> Result<Term> {
        let (token, line, column) = self.advance()?;
        match token {
            Token::Pname(prefix, local) => self.resolve(&prefix, &local, line, column),
            Token::IriRef(iri) => self.check_iri(iri, line, column),
            Token::BlankNode(label) => Ok(Term::anonymous(label)),
            Token::Integer(lexical) => Ok(Term::typed_literal(lexical, vocab::XSD_INTEGER)),
            Token::Decimal(lexical) => Ok(Term::typed_literal(lexical, vocab::XSD_DECIMAL)),
            Token::Boolean(value) => Ok(Term::boolean(value)),
            Token::StringLit(value) => match self.peek()?.0 {
                Token::DatatypeMarker => {
                    self.advance()?;
                    let (token, line, column) = self.advance()?;
                    let datatype = match token {
                        Token::Pname(prefix, local) => {
                            self.resolve(&prefix, &local, line, column)?
                        }
                        Token::IriRef(iri) => self.check_iri(iri, line, column)?,
                        other => {
                            return self.syntax(
                                line,
                                column,
                                format!("expected datatype IRI, got {other:?}"),
                            )
                        }
                    };
                    let iri = datatype.iri().expect("datatype is a resource").to_owned();
                    Ok(Term::typed_literal(value, iri))
                }
                Token::LangTag(_) => {
                    let (token, _, _) = self.advance()?;
                    match token {
                        Token::LangTag(lang) => Ok(Term::lang_string(value, lang)),
                        _ => unreachable!("peeked"),
                    }
                }
                _ => Ok(Term::string(value)),
            },
            other => self.syntax(line, column, format!("expected object term, got {other:?}")),
        }
    }

    fn expect_dot(&mut self) -> Result<()> {
        let (token, line, column) = self.advance()?;
        if token == Token::Dot {
            Ok(())
        } else {
            self.syntax(line, column, format!("expected '.', got {token:?}"))
        }
    }

    fn resolve(&self, prefix: &str, local: &str, line: usize, column: usize) -> Result<Term> {
        match self.prefixes.get(prefix) {
            Some(namespace) => Ok(Term::Resource(format!("{namespace}{local}"))),
            None => self.syntax(line, column, format!("undeclared prefix {prefix:?}")),
        }
    }

    fn check_iri(&self, iri: String, line: usize, column: usize) -> Result<Term> {
        if !iri.contains(':') || iri.chars().any(|c| c.is_whitespace()) {
            return self.syntax(line, column, format!("malformed IRI <{iri}>"));
        }
        Ok(Term::Resource(iri))
    }

    fn at_current(&self, error: Error) -> Error {
        match error {
            Error::Constraint(message) => Error::TurtleSyntax {
                line: self.line,
                column: self.column,
                message,
            },
            other => other,
        }
    }

    // -- lexing --------------------------------------------------------

    fn peek(&mut self) -> Result<(Token, usize, usize)> {
        if self.lookahead.is_none() {
            self.lookahead = Some(self.lex()?);
        }
        Ok(self.lookahead.clone().expect("just filled"))
    }

    fn advance(&mut self) -> Result<(Token, usize, usize)> {
        match self.lookahead.take() {
            Some(entry) => Ok(entry),
            None => self.lex(),
        }
    }

    fn current_char(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.current_char()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.current_char() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.current_char() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn lex(&mut self) -> Result<(Token, usize, usize)> {
        self.skip_trivia();
        let (line, column) = (self.line, self.column);
        let c = match self.current_char() {
            Some(c) => c,
            None => return Ok((Token::Eof, line, column)),
        };
        let token = match c {
            '.' => {
                self.bump();
                Token::Dot
            }
            ';' => {
                self.bump();
                Token::Semicolon
            }
            ',' => {
                self.bump();
                Token::Comma
            }
            '<' => self.lex_iriref(line, column)?,
            '"' => self.lex_string(line, column)?,
            '_' if self.chars.get(self.pos + 1) == Some(&':') => self.lex_blank(line, column)?,
            '^' => {
                self.bump();
                if self.current_char() == Some('^') {
                    self.bump();
                    Token::DatatypeMarker
                } else {
                    return self.syntax(line, column, "expected '^^'");
                }
            }
            '@' => {
                self.bump();
                let word = self.lex_word();
                match word.as_str() {
                    "prefix" => Token::PrefixKeyword,
                    "base" => return self.unsupported(line, column, "@base"),
                    lang if !lang.is_empty() => Token::LangTag(lang.to_owned()),
                    _ => return self.syntax(line, column, "expected directive or language tag"),
                }
            }
            '(' | ')' => return self.unsupported(line, column, "collection syntax ( )"),
            '[' | ']' => return self.unsupported(line, column, "anonymous node syntax [ ]"),
            '{' | '}' => return self.unsupported(line, column, "graph term syntax { }"),
            c if c == '-' || c.is_ascii_digit() => self.lex_number(line, column)?,
            c if c.is_ascii_alphabetic() || c == '_' => self.lex_name(line, column)?,
            other => return self.syntax(line, column, format!("unexpected character {other:?}")),
        };
        Ok((token, line, column))
    }

    fn lex_word(&mut self) -> String {
        let mut word = String::new();
        while let Some(c) = self.current_char() {
            if c.is_ascii_alphanumeric() || c == '-' {
                word.push(c);
                self.bump();
            } else {
                break;
            }
        }
        word
    }

    fn lex_iriref(&mut self, line: usize, column: usize) -> Result<Token> {
        self.bump(); // '<'
        let mut iri = String::new();
        loop {
            match self.current_char() {
                Some('>') => {
                    self.bump();
                    return Ok(Token::IriRef(iri));
                }
                Some('\n') | None => {
                    return self.syntax(line, column, "unterminated IRI reference")
                }
                Some(c) => {
                    iri.push(c);
                    self.bump();
                }
            }
        }
    }

    fn lex_string(&mut self, line: usize, column: usize) -> Result<Token> {
        self.bump(); // '"'
        if self.current_char() == Some('"') && self.chars.get(self.pos + 1) == Some(&'"') {
            return self.unsupported(line, column, "triple-quoted string");
        }
        let mut value = String::new();
        loop {
            match self.current_char() {
                Some('"') => {
                    self.bump();
                    return Ok(Token::StringLit(value));
                }
                Some('\\') => {
                    self.bump();
                    let escaped = match self.bump() {
                        Some('\\') => '\\',
                        Some('"') => '"',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('t') => '\t',
                        Some('u') => self.lex_unicode_escape(4, line, column)?,
                        Some('U') => self.lex_unicode_escape(8, line, column)?,
                        other => {
                            return self.syntax(
                                line,
                                column,
                                format!("unsupported string escape {other:?}"),
                            )
                        }
                    };
                    value.push(escaped);
                }
                Some('\n') | None => {
                    return self.syntax(line, column, "unterminated string literal")
                }
                Some(c) => {
                    value.push(c);
                    self.bump();
                }
            }
        }
    }

    fn lex_unicode_escape(&mut self, digits: usize, line: usize, column: usize) -> Result<char> {
        let mut code = 0u32;
        for _ in 0..digits {
            let c = self
                .bump()
                .and_then(|c| c.to_digit(16))
                .ok_or(Error::TurtleSyntax {
                    line,
                    column,
                    message: "invalid unicode escape".to_owned(),
                })?;
            code = code * 16 + c;
        }
        char::from_u32(code).ok_or(Error::TurtleSyntax {
            line,
            column,
            message: "invalid unicode code point".to_owned(),
        })
    }

    fn lex_blank(&mut self, line: usize, column: usize) -> Result<Token> {
        self.bump(); // '_'
        self.bump(); // ':'
        let mut label = String::new();
        while let Some(c) = self.current_char() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if label.is_empty() {
            return self.syntax(line, column, "blank node label may not be empty");
        }
        Ok(Token::BlankNode(label))
    }

    fn lex_number(&mut self, line: usize, column: usize) -> Result<Token> {
        let mut lexical = String::new();
        if self.current_char() == Some('-') {
            lexical.push('-');
            self.bump();
        }
        let mut digits = 0;
        while let Some(c) = self.current_char() {
            if c.is_ascii_digit() {
                lexical.push(c);
                digits += 1;
                self.bump();
            } else {
                break;
            }
        }
        if digits == 0 {
            return self.syntax(line, column, "expected digits");
        }
        if matches!(self.current_char(), Some('e') | Some('E')) {
            return self.unsupported(line, column, "double literal with exponent");
        }
        // decimal point only when followed by a digit; otherwise the dot
        // terminates the statement
        if self.current_char() == Some('.')
            && self
                .chars
                .get(self.pos + 1)
                .is_some_and(|c| c.is_ascii_digit())
        {
            lexical.push('.');
            self.bump();
            while let Some(c) = self.current_char() {
                if c.is_ascii_digit() {
                    lexical.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            if matches!(self.current_char(), Some('e') | Some('E')) {
                return self.unsupported(line, column, "double literal with exponent");
            }
            Ok(Token::Decimal(lexical))
        } else {
            Ok(Token::Integer(lexical))
        }
    }

    fn lex_name(&mut self, _line: usize, _column: usize) -> Result<Token> {
        let mut word = String::new();
        while let Some(c) = self.current_char() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                word.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if self.current_char() == Some(':') {
            self.bump();
            let mut local = String::new();
            while let Some(c) = self.current_char() {
                if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                    local.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            return Ok(Token::Pname(word, local));
        }
        Ok(match word.as_str() {
            "a" => Token::KeywordA,
            "true" => Token::Boolean(true),
            "false" => Token::Boolean(false),
            _ => Token::Pname(word, String::new()), // bare word: let the parser complain
        })
    }
}
