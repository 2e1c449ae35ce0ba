//! Query text parsing and validation.
//!
//! Grammar (one query per file, `#` comments allowed):
//!
//! ```text
//! MATCH TRACE ?t
//! WHERE <clause> (AND <clause>)*
//! RETURN ?t (, ?eventVar)*
//! ```
//!
//! Clauses:
//!
//! ```text
//! activityOccurs(?t, "LacticAcid") AS ?la
//! activitiesDirectlyFollow(?t, "Admission NC", "Admission IC") AS ?x, ?y
//! allActivitiesOccur(?t, {"a", "b"})
//! activityOccursAtLeastNTimes(?t, "a", 2)
//! attr(?reg, "Age") >= 65
//! timeBetween(?e1, ?e2) > duration("P7D")
//! ```
//!
//! Validation happens at parse time: constraint names and arities are
//! checked against the registry, every event variable must be bound by
//! an earlier constraint clause before use, and witness variables that
//! are bound but never used are reported as warnings.

use std::collections::HashSet;

use crate::constraints::{registry_entry, ArgShape, Constraint};
use crate::error::{Error, Result};
use crate::query::{
    AttributeClause, Clause, Comparator, ConstraintClause, DurationClause, QueryAst, QueryLiteral,
};

pub fn parse_query(text: &str) -> Result<QueryAst> {
    let tokens = lex(text)?;
    let mut parser = QueryParser { tokens, pos: 0 };
    parser.parse()
}

// ---------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Str(String),
    Int(i64),
    Dec(f64),
    Cmp(Comparator),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Eof,
}

type Spanned = (Tok, usize, usize);

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let syntax = |line: usize, col: usize, message: String| Error::QuerySyntax {
        line,
        column: col,
        message,
    };

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    bump!();
                }
            }
            '(' => {
                tokens.push((Tok::LParen, tline, tcol));
                bump!();
            }
            ')' => {
                tokens.push((Tok::RParen, tline, tcol));
                bump!();
            }
            '{' => {
                tokens.push((Tok::LBrace, tline, tcol));
                bump!();
            }
            '}' => {
                tokens.push((Tok::RBrace, tline, tcol));
                bump!();
            }
            ',' => {
                tokens.push((Tok::Comma, tline, tcol));
                bump!();
            }
            '=' => {
                tokens.push((Tok::Cmp(Comparator::Eq), tline, tcol));
                bump!();
            }
            '!' => {
                bump!();
                if i < chars.len() && chars[i] == '=' {
                    bump!();
                    tokens.push((Tok::Cmp(Comparator::Ne), tline, tcol));
                } else {
                    return Err(syntax(tline, tcol, "expected '!='".to_owned()));
                }
            }
            '<' | '>' => {
                bump!();
                let cmp = if i < chars.len() && chars[i] == '=' {
                    bump!();
                    if c == '<' { Comparator::Le } else { Comparator::Ge }
                } else if c == '<' {
                    Comparator::Lt
                } else {
                    Comparator::Gt
                };
                tokens.push((Tok::Cmp(cmp), tline, tcol));
            }
            '?' => {
                bump!();
                let mut name = String::new();
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    name.push(chars[i]);
                    bump!();
                }
                if name.is_empty() {
                    return Err(syntax(tline, tcol, "expected variable name after '?'".to_owned()));
                }
                tokens.push((Tok::Var(name), tline, tcol));
            }
            '"' => {
                bump!();
                let mut value = String::new();
                loop {
                    if i >= chars.len() || chars[i] == '\n' {
                        return Err(syntax(tline, tcol, "unterminated string".to_owned()));
                    }
                    match chars[i] {
                        '"' => {
                            bump!();
                            break;
                        }
                        '\\' => {
                            bump!();
                            if i >= chars.len() {
                                return Err(syntax(tline, tcol, "unterminated escape".to_owned()));
                            }
                            let escaped = match chars[i] {
                                '"' => '"',
                                '\\' => '\\',
                                'n' => '\n',
                                't' => '\t',
                                other => {
                                    return Err(syntax(
                                        tline,
                                        tcol,
                                        format!("unsupported escape '\\{other}'"),
                                    ))
                                }
                            };
                            value.push(escaped);
                            bump!();
                        }
                        other => {
                            value.push(other);
                            bump!();
                        }
                    }
                }
                tokens.push((Tok::Str(value), tline, tcol));
            }
            c if c == '-' || c.is_ascii_digit() => {
                let mut lexical = String::new();
                if c == '-' {
                    lexical.push('-');
                    bump!();
                }
                let mut saw_digit = false;
                let mut saw_dot = false;
                while i < chars.len() {
                    if chars[i].is_ascii_digit() {
                        saw_digit = true;
                        lexical.push(chars[i]);
                        bump!();
                    } else if chars[i] == '.' && !saw_dot {
                        saw_dot = true;
                        lexical.push('.');
                        bump!();
                    } else {
                        break;
                    }
                }
                if !saw_digit {
                    return Err(syntax(tline, tcol, "expected a number".to_owned()));
                }
                let token = if saw_dot {
                    Tok::Dec(lexical.parse().map_err(|_| {
                        syntax(tline, tcol, format!("invalid number {lexical:?}"))
                    })?)
                } else {
                    Tok::Int(lexical.parse().map_err(|_| {
                        syntax(tline, tcol, format!("invalid number {lexical:?}"))
                    })?)
                };
                tokens.push((token, tline, tcol));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    word.push(chars[i]);
                    bump!();
                }
                tokens.push((Tok::Ident(word), tline, tcol));
            }
            other => {
                return Err(syntax(tline, tcol, format!("unexpected character {other:?}")))
            }
        }
    }
    tokens.push((Tok::Eof, line, col));
    Ok(tokens)
}

// ---------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------

struct QueryParser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl QueryParser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn advance(&mut self) -> Spanned {
        let token = self.tokens[self.pos.min(self.tokens.len() - 1)].clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        token
    }

    fn syntax<T>(&self, at: &Spanned, message: impl Into<String>) -> Result<T> {
        Err(Error::QuerySyntax {
            line: at.1,
            column: at.2,
            message: message.into(),
        })
    }

    fn expect_keyword(&mut self, keyword: &str) -> Result<()> {
        let token = self.advance();
        match &token.0 {
            Tok::Ident(word) if word.eq_ignore_ascii_case(keyword) => Ok(()),
            other => self.syntax(&token, format!("expected {keyword}, got {other:?}")),
        }
    }

    fn expect_var(&mut self) -> Result<String> {
        let token = self.advance();
        match token.0 {
            Tok::Var(name) => Ok(name),
            ref other => self.syntax(&token, format!("expected a ?variable, got {other:?}")),
        }
    }

    fn expect(&mut self, expected: Tok) -> Result<()> {
        let token = self.advance();
        if token.0 == expected {
            Ok(())
        } else {
            self.syntax(&token, format!("expected {expected:?}, got {:?}", token.0))
        }
    }

    fn at_keyword(&self, keyword: &str) -> bool {
        matches!(&self.peek().0, Tok::Ident(word) if word.eq_ignore_ascii_case(keyword))
    }

    fn parse(&mut self) -> Result<QueryAst> {
        self.expect_keyword("MATCH")?;
        self.expect_keyword("TRACE")?;
        let trace_variable = self.expect_var()?;
        self.expect_keyword("WHERE")?;

        let mut clauses = Vec::new();
        loop {
            clauses.push(self.parse_clause(&trace_variable, clauses.len() + 1)?);
            if self.at_keyword("AND") {
                self.advance();
            } else {
                break;
            }
        }

        self.expect_keyword("RETURN")?;
        let mut returns = vec![self.expect_var()?];
        while self.peek().0 == Tok::Comma {
            self.advance();
            returns.push(self.expect_var()?);
        }
        let end = self.advance();
        if end.0 != Tok::Eof {
            return self.syntax(&end, format!("unexpected trailing {:?}", end.0));
        }

        let warnings = validate(&trace_variable, &clauses, &returns)?;
        Ok(QueryAst {
            trace_variable,
            clauses,
            returns,
            warnings,
        })
    }

    fn parse_clause(&mut self, trace_var: &str, clause_index: usize) -> Result<Clause> {
        let token = self.advance();
        let name = match &token.0 {
            Tok::Ident(name) => name.clone(),
            other => return self.syntax(&token, format!("expected a clause, got {other:?}")),
        };
        match name.as_str() {
            "attr" => self.parse_attribute_clause(),
            "timeBetween" => self.parse_duration_clause(),
            _ => self.parse_constraint_clause(&name, trace_var, clause_index),
        }
    }

    fn parse_attribute_clause(&mut self) -> Result<Clause> {
        self.expect(Tok::LParen)?;
        let event_var = self.expect_var()?;
        self.expect(Tok::Comma)?;
        let token = self.advance();
        let attribute = match token.0 {
            Tok::Str(name) => name,
            ref other => {
                return self.syntax(&token, format!("expected attribute name string, got {other:?}"))
            }
        };
        self.expect(Tok::RParen)?;
        let comparator = self.expect_comparator()?;
        let token = self.advance();
        let literal = match &token.0 {
            Tok::Str(s) => QueryLiteral::String(s.clone()),
            Tok::Int(i) => QueryLiteral::Integer(*i),
            Tok::Dec(d) => QueryLiteral::Decimal(*d),
            Tok::Ident(word) if word == "true" => QueryLiteral::Boolean(true),
            Tok::Ident(word) if word == "false" => QueryLiteral::Boolean(false),
            other => return self.syntax(&token, format!("expected a literal, got {other:?}")),
        };
        Ok(Clause::Attribute(AttributeClause {
            event_var,
            attribute,
            comparator,
            literal,
        }))
    }

    fn parse_duration_clause(&mut self) -> Result<Clause> {
        self.expect(Tok::LParen)?;
        let from_var = self.expect_var()?;
        self.expect(Tok::Comma)?;
        let to_var = self.expect_var()?;
        self.expect(Tok::RParen)?;
        let comparator = self.expect_comparator()?;
        self.expect_keyword("duration")?;
        self.expect(Tok::LParen)?;
        let token = self.advance();
        let duration_millis = match token.0 {
            Tok::Str(ref spec) => parse_iso_duration(spec)
                .map_err(|message| Error::QuerySyntax {
                    line: token.1,
                    column: token.2,
                    message,
                })?,
            ref other => {
                return self.syntax(&token, format!("expected a duration string, got {other:?}"))
            }
        };
        self.expect(Tok::RParen)?;
        Ok(Clause::Duration(DurationClause {
            from_var,
            to_var,
            comparator,
            duration_millis,
        }))
    }

    fn expect_comparator(&mut self) -> Result<Comparator> {
        let token = self.advance();
        match token.0 {
            Tok::Cmp(cmp) => Ok(cmp),
            ref other => self.syntax(&token, format!("expected a comparator, got {other:?}")),
        }
    }

    fn parse_constraint_clause(
        &mut self,
        name: &str,
        trace_var: &str,
        clause_index: usize,
    ) -> Result<Clause> {
        let entry = registry_entry(name).ok_or(Error::QueryValidation {
            clause: clause_index,
            message: format!("unknown constraint {name:?}"),
        })?;

        self.expect(Tok::LParen)?;
        let first = self.expect_var()?;
        if first != trace_var {
            return Err(Error::QueryValidation {
                clause: clause_index,
                message: format!(
                    "constraint must apply to the matched trace ?{trace_var}, got ?{first}"
                ),
            });
        }
        let mut args = Vec::new();
        while self.peek().0 == Tok::Comma {
            self.advance();
            args.push(self.parse_arg()?);
        }
        self.expect(Tok::RParen)?;

        let constraint =
            build_constraint(entry.args, name, args, clause_index).map_err(|e| match e {
                Error::Constraint(message) => Error::QueryValidation {
                    clause: clause_index,
                    message,
                },
                other => other,
            })?;

        let mut binds = Vec::new();
        if self.at_keyword("AS") {
            self.advance();
            binds.push(self.expect_var()?);
            while self.peek().0 == Tok::Comma {
                // a comma after AS-vars may belong to RETURN; only consume
                // when a variable follows
                if let (Tok::Var(_), _, _) = self.tokens[(self.pos + 1).min(self.tokens.len() - 1)]
                {
                    self.advance();
                    binds.push(self.expect_var()?);
                } else {
                    break;
                }
            }
        }
        if binds.len() > entry.max_witness_vars {
            return Err(Error::QueryValidation {
                clause: clause_index,
                message: format!(
                    "{name} binds at most {} witness variable(s), got {}",
                    entry.max_witness_vars,
                    binds.len()
                ),
            });
        }
        Ok(Clause::Constraint(ConstraintClause { constraint, binds }))
    }

    fn parse_arg(&mut self) -> Result<Arg> {
        let token = self.advance();
        match &token.0 {
            Tok::Str(s) => Ok(Arg::Activity(s.clone())),
            Tok::Int(i) => Ok(Arg::Count(*i)),
            Tok::LBrace => {
                let mut set = Vec::new();
                loop {
                    let token = self.advance();
                    match token.0 {
                        Tok::Str(s) => set.push(s),
                        ref other => {
                            return self.syntax(
                                &token,
                                format!("expected activity string in set, got {other:?}"),
                            )
                        }
                    }
                    let token = self.advance();
                    match token.0 {
                        Tok::Comma => continue,
                        Tok::RBrace => break,
                        ref other => {
                            return self
                                .syntax(&token, format!("expected ',' or '}}', got {other:?}"))
                        }
                    }
                }
                Ok(Arg::Set(set))
            }
            other => self.syntax(&token, format!("expected an argument, got {other:?}")),
        }
    }
}

enum Arg {
    Activity(String),
    Set(Vec<String>),
    Count(i64),
}

fn arg_error(clause: usize, name: &str, expected: &str) -> Error {
    Error::QueryValidation {
        clause,
        message: format!("{name} expects {expected}"),
    }
}

fn build_constraint(shape: ArgShape, name: &str, args: Vec<Arg>, clause: usize) -> Result<Constraint> {
    match shape {
        ArgShape::Activity => match <[Arg; 1]>::try_from(args) {
            Ok([Arg::Activity(a)]) => Ok(match name {
                "activityOccurs" => Constraint::activity_occurs(a),
                "activityDoesNotOccur" => Constraint::does_not_occur(a),
                "activityOccursAsStart" => Constraint::occurs_as_start(a),
                _ => Constraint::occurs_as_end(a),
            }),
            _ => Err(arg_error(clause, name, "one activity string")),
        },
        ArgShape::ActivitySet => match <[Arg; 1]>::try_from(args) {
            Ok([Arg::Set(set)]) => match name {
                "allActivitiesOccur" => Constraint::all_activities_occur(set),
                "anyActivityOccurs" => Ok(Constraint::any_activity_occurs(set)),
                "activitiesCoOccurOrNoneOccurs" => Constraint::co_occur_or_none(set),
                _ => Constraint::do_not_co_occur(set),
            },
            _ => Err(arg_error(clause, name, "one activity set {\"a\", ...}")),
        },
        ArgShape::ActivityCount => match <[Arg; 2]>::try_from(args) {
            Ok([Arg::Activity(a), Arg::Count(k)]) => {
                let k = usize::try_from(k).map_err(|_| {
                    arg_error(clause, name, "a non-negative count")
                })?;
                match name {
                    "activityOccursAtLeastNTimes" => Constraint::at_least(a, k),
                    _ => Ok(Constraint::at_most(a, k)),
                }
            }
            _ => Err(arg_error(clause, name, "an activity string and a count")),
        },
        ArgShape::ActivityPair => match <[Arg; 2]>::try_from(args) {
            Ok([Arg::Activity(a), Arg::Activity(b)]) => Ok(match name {
                "activitiesDirectlyFollow" => Constraint::directly_follow(a, b),
                _ => Constraint::eventually_follow(a, b),
            }),
            _ => Err(arg_error(clause, name, "two activity strings")),
        },
        ArgShape::ActivitySetPair => match <[Arg; 2]>::try_from(args) {
            Ok([Arg::Set(first), Arg::Set(second)]) => Constraint::always_precede(first, second),
            _ => Err(arg_error(clause, name, "two activity sets")),
        },
    }
}

/// Post-parse validation: event variables bound before use, no
/// rebinding, returns restricted to the trace variable and bound event
/// variables. Returns warnings for witness variables never used.
fn validate(trace_var: &str, clauses: &[Clause], returns: &[String]) -> Result<Vec<String>> {
    let mut bound: HashSet<&str> = HashSet::new();
    let mut used: HashSet<&str> = HashSet::new();

    for (i, clause) in clauses.iter().enumerate() {
        let clause_index = i + 1;
        let require_bound = |var: &str, bound: &HashSet<&str>| -> Result<()> {
            if var == trace_var {
                return Err(Error::QueryValidation {
                    clause: clause_index,
                    message: format!("?{var} is the trace variable, not an event variable"),
                });
            }
            if !bound.contains(var) {
                return Err(Error::QueryValidation {
                    clause: clause_index,
                    message: format!("event variable ?{var} is not bound by an earlier constraint"),
                });
            }
            Ok(())
        };
        match clause {
            Clause::Constraint(cc) => {
                for var in &cc.binds {
                    if var == trace_var || !bound.insert(var) {
                        return Err(Error::QueryValidation {
                            clause: clause_index,
                            message: format!("variable ?{var} is already bound"),
                        });
                    }
                }
            }
            Clause::Attribute(ac) => {
                require_bound(&ac.event_var, &bound)?;
                used.insert(&ac.event_var);
            }
            Clause::Duration(dc) => {
                require_bound(&dc.from_var, &bound)?;
                require_bound(&dc.to_var, &bound)?;
                used.insert(&dc.from_var);
                used.insert(&dc.to_var);
            }
        }
    }

    if returns.first().map(String::as_str) != Some(trace_var) {
        return Err(Error::QueryValidation {
            clause: 0,
            message: format!("RETURN must start with the trace variable ?{trace_var}"),
        });
    }
    for var in &returns[1..] {
        if !bound.contains(var.as_str()) {
            return Err(Error::QueryValidation {
                clause: 0,
                message: format!("returned variable ?{var} is not bound"),
            });
        }
        used.insert(var);
    }

    let mut warnings = Vec::new();
    let mut unused: Vec<&&str> = bound.iter().filter(|v| !used.contains(**v)).collect();
    unused.sort();
    for var in unused {
        warnings.push(format!("witness variable ?{var} is bound but never used"));
    }
    Ok(warnings)
}

/// ISO-8601 duration, restricted to exact spans: weeks, days, hours,
/// minutes, and (fractional) seconds. Calendar components (years,
/// months) are rejected.
fn parse_iso_duration(spec: &str) -> std::result::Result<i64, String> {
    let body = spec
        .strip_prefix('P')
        .ok_or_else(|| format!("duration {spec:?} must start with 'P'"))?;
    if body.is_empty() {
        return Err(format!("duration {spec:?} is empty"));
    }
    let (date_part, time_part) = match body.split_once('T') {
        Some((d, t)) => (d, Some(t)),
        None => (body, None),
    };
    if time_part == Some("") {
        return Err(format!("duration {spec:?} has an empty time part"));
    }

    let mut millis = 0i64;
    let mut number = String::new();
    for c in date_part.chars() {
        if c.is_ascii_digit() {
            number.push(c);
        } else {
            let value: i64 = number
                .parse()
                .map_err(|_| format!("invalid duration component in {spec:?}"))?;
            number.clear();
            millis += match c {
                'W' => value * 7 * 86_400_000,
                'D' => value * 86_400_000,
                'Y' | 'M' => {
                    return Err(format!(
                        "calendar component '{c}' in {spec:?} has no fixed length"
                    ))
                }
                other => return Err(format!("unknown duration component '{other}' in {spec:?}")),
            };
        }
    }
    if !number.is_empty() {
        return Err(format!("trailing number without unit in {spec:?}"));
    }

    if let Some(time_part) = time_part {
        for c in time_part.chars() {
            if c.is_ascii_digit() || c == '.' {
                number.push(c);
            } else {
                let value: f64 = number
                    .parse()
                    .map_err(|_| format!("invalid duration component in {spec:?}"))?;
                number.clear();
                let unit_millis = match c {
                    'H' => 3_600_000.0,
                    'M' => 60_000.0,
                    'S' => 1_000.0,
                    other => {
                        return Err(format!("unknown duration component '{other}' in {spec:?}"))
                    }
                };
                millis += (value * unit_millis).round() as i64;
            }
        }
        if !number.is_empty() {
            return Err(format!("trailing number without unit in {spec:?}"));
        }
    }
    Ok(millis)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MAVERICK: &str = r#"
        MATCH TRACE ?t
        WHERE activityOccurs(?t, "Create Purchase Requisition") AS ?e
        AND activityDoesNotOccur(?t, "Approve Purchase Requisition")
        RETURN ?t
    "#;

    const SEPSIS: &str = r#"
        # traces with both lab tests, an NC-to-IC transfer, and an
        # elderly patient with suspected infection
        MATCH TRACE ?t
        WHERE activityOccurs(?t, "LacticAcid") AS ?la
        AND activityOccurs(?t, "CRP") AS ?crp
        AND activitiesDirectlyFollow(?t, "Admission NC", "Admission IC") AS ?r
        AND activityOccurs(?t, "ER Registration") AS ?reg
        AND attr(?reg, "Age") >= 65
        AND attr(?reg, "InfectionSuspected") = true
        RETURN ?t
    "#;

    #[test]
    fn maverick_query_has_two_constraint_clauses() {
        let ast = parse_query(MAVERICK).unwrap();
        assert_eq!(ast.clauses.len(), 2);
        assert!(ast
            .clauses
            .iter()
            .all(|c| matches!(c, Clause::Constraint(_))));
        // ?e is bound but unused: a warning, not an error
        assert_eq!(ast.warnings.len(), 1);
    }

    #[test]
    fn sepsis_query_shape() {
        let ast = parse_query(SEPSIS).unwrap();
        let constraints = ast
            .clauses
            .iter()
            .filter(|c| matches!(c, Clause::Constraint(_)))
            .count();
        let attributes = ast
            .clauses
            .iter()
            .filter(|c| matches!(c, Clause::Attribute(_)))
            .count();
        assert_eq!(constraints, 4);
        assert_eq!(attributes, 2);
        // the unused directly-follow witness ?r is permitted with a warning
        assert!(ast.warnings.iter().any(|w| w.contains("?r")), "{:?}", ast.warnings);
    }

    #[test]
    fn undefined_event_variable_is_rejected() {
        let text = r#"
            MATCH TRACE ?t
            WHERE attr(?ghost, "Age") >= 65
            RETURN ?t
        "#;
        let err = parse_query(text).unwrap_err();
        match err {
            Error::QueryValidation { clause, message } => {
                assert_eq!(clause, 1);
                assert!(message.contains("?ghost"), "{message}");
            }
            other => panic!("expected validation error, got {other}"),
        }
    }

    #[test]
    fn unknown_constraint_is_rejected() {
        let text = "MATCH TRACE ?t WHERE fancyConstraint(?t, \"a\") RETURN ?t";
        let err = parse_query(text).unwrap_err().to_string();
        assert!(err.contains("fancyConstraint"), "{err}");
    }

    #[test]
    fn sets_counts_and_durations_parse() {
        let text = r#"
            MATCH TRACE ?t
            WHERE allActivitiesOccur(?t, {"a", "b"})
            AND activityOccursAtLeastNTimes(?t, "a", 2)
            AND activityOccurs(?t, "a") AS ?x
            AND activityOccurs(?t, "b") AS ?y
            AND timeBetween(?x, ?y) > duration("P7D")
            RETURN ?t, ?x, ?y
        "#;
        let ast = parse_query(text).unwrap();
        assert_eq!(ast.clauses.len(), 5);
        match &ast.clauses[4] {
            Clause::Duration(dc) => assert_eq!(dc.duration_millis, 7 * 86_400_000),
            other => panic!("expected duration clause, got {other:?}"),
        }
        assert!(ast.warnings.is_empty());
    }

    #[test]
    fn empty_activity_set_is_a_validation_error() {
        let text = "MATCH TRACE ?t WHERE allActivitiesOccur(?t, {\"\"}) RETURN ?t";
        // a set with one empty string is fine; a truly empty set is not
        assert!(parse_query(text).is_ok());
        let text = "MATCH TRACE ?t WHERE anyActivityOccurs(?t, {}) RETURN ?t";
        assert!(parse_query(text).is_err());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_query("MATCH TRACE ?t WHERE @@ RETURN ?t").unwrap_err();
        assert!(matches!(err, Error::QuerySyntax { .. }), "{err}");
    }

    #[test]
    fn duration_parsing() {
        assert_eq!(parse_iso_duration("P7D").unwrap(), 604_800_000);
        assert_eq!(parse_iso_duration("PT1H30M").unwrap(), 5_400_000);
        assert_eq!(parse_iso_duration("P1DT2H").unwrap(), 93_600_000);
        assert_eq!(parse_iso_duration("PT0.5S").unwrap(), 500);
        assert_eq!(parse_iso_duration("P2W").unwrap(), 1_209_600_000);
        assert!(parse_iso_duration("P1M").is_err());
        assert!(parse_iso_duration("P").is_err());
        assert!(parse_iso_duration("7D").is_err());
    }

    #[test]
    fn rebinding_a_variable_is_rejected() {
        let text = r#"
            MATCH TRACE ?t
            WHERE activityOccurs(?t, "a") AS ?e
            AND activityOccurs(?t, "b") AS ?e
            RETURN ?t
        "#;
        let err = parse_query(text).unwrap_err().to_string();
        assert!(err.contains("already bound"), "{err}");
    }

    #[test]
    fn constraint_on_foreign_variable_is_rejected() {
        let text = "MATCH TRACE ?t WHERE activityOccurs(?x, \"a\") RETURN ?t";
        assert!(parse_query(text).is_err());
    }
}
