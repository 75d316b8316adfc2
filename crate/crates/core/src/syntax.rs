//! Object language: formulas, parser, printer.
//!
//! Grammar (loosest binding first):
//!
//! ```text
//! or    := and ('|' and)*
//! and   := unary ('&' unary)*
//! unary := '~' unary | '<>' unary | 'K' ('{' n '}')? unary | atom | '(' or ')'
//! atom  := [a-z][a-z0-9_]*
//! ```
//!
//! `¬ ◇ ∧ ∨` are accepted as aliases of `~ <> & |`. Disjunction is sugar:
//! `a | b` parses to `~(~a & ~b)`, and the printer folds that shape back.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Knowledge-operator index. Always at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Agent(u32);

impl Agent {
    pub const ONE: Agent = Agent(1);

    pub fn new(index: u32) -> Option<Agent> {
        (index >= 1).then_some(Agent(index))
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Might(Box<Formula>),
    Know(Agent, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    /// `a ∨ b`, stored as `¬(¬a ∧ ¬b)`.
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::neg(Formula::and(Formula::neg(a), Formula::neg(b)))
    }

    pub fn might(f: Formula) -> Formula {
        Formula::Might(Box::new(f))
    }

    pub fn know(agent: Agent, f: Formula) -> Formula {
        Formula::Know(agent, Box::new(f))
    }

    /// Left-associated conjunction; `None` for an empty sequence.
    pub fn conjoin<I: IntoIterator<Item = Formula>>(parts: I) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    /// If this is the desugared shape `¬(¬a ∧ ¬b)`, the disjuncts.
    pub fn as_or(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Neg(inner) => match inner.as_ref() {
                Formula::And(l, r) => match (l.as_ref(), r.as_ref()) {
                    (Formula::Neg(a), Formula::Neg(b)) => Some((a, b)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Neg(f) | Formula::Might(f) | Formula::Know(_, f) => 1 + f.size(),
            Formula::And(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Neg(f) | Formula::Might(f) | Formula::Know(_, f) => f.collect_atoms(out),
            Formula::And(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn agents(&self) -> BTreeSet<Agent> {
        let mut out = BTreeSet::new();
        self.collect_agents(&mut out);
        out
    }

    fn collect_agents(&self, out: &mut BTreeSet<Agent>) {
        match self {
            Formula::Atom(_) => {}
            Formula::Neg(f) | Formula::Might(f) => f.collect_agents(out),
            Formula::Know(a, f) => {
                out.insert(*a);
                f.collect_agents(out);
            }
            Formula::And(a, b) => {
                a.collect_agents(out);
                b.collect_agents(out);
            }
        }
    }

    /// True iff every `◇` occurs beneath some `K`.
    pub fn is_diamond_restricted(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Know(..) => true,
            Formula::Might(_) => false,
            Formula::Neg(f) => f.is_diamond_restricted(),
            Formula::And(a, b) => a.is_diamond_restricted() && b.is_diamond_restricted(),
        }
    }

    pub fn is_diamond_free(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Might(_) => false,
            Formula::Neg(f) | Formula::Know(_, f) => f.is_diamond_free(),
            Formula::And(a, b) => a.is_diamond_free() && b.is_diamond_free(),
        }
    }

    pub fn is_knowledge_free(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Know(..) => false,
            Formula::Neg(f) | Formula::Might(f) => f.is_knowledge_free(),
            Formula::And(a, b) => a.is_knowledge_free() && b.is_knowledge_free(),
        }
    }

    pub fn display(&self, style: Style) -> Printed<'_> {
        Printed { formula: self, style }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Style {
    #[default]
    Ascii,
    Unicode,
}

impl Style {
    fn neg(self) -> &'static str {
        match self {
            Style::Ascii => "~",
            Style::Unicode => "¬",
        }
    }

    fn might(self) -> &'static str {
        match self {
            Style::Ascii => "<>",
            Style::Unicode => "◇",
        }
    }

    fn and(self) -> &'static str {
        match self {
            Style::Ascii => " & ",
            Style::Unicode => " ∧ ",
        }
    }

    fn or(self) -> &'static str {
        match self {
            Style::Ascii => " | ",
            Style::Unicode => " ∨ ",
        }
    }
}

pub struct Printed<'a> {
    formula: &'a Formula,
    style: Style,
}

const PREC_OR: u8 = 0;
const PREC_AND: u8 = 1;
const PREC_PREFIX: u8 = 2;

impl Printed<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, node: &Formula, min_prec: u8) -> fmt::Result {
        let s = self.style;
        if let Some((a, b)) = node.as_or() {
            let paren = min_prec > PREC_OR;
            if paren {
                write!(f, "(")?;
            }
            self.write(f, a, PREC_OR)?;
            write!(f, "{}", s.or())?;
            self.write(f, b, PREC_AND)?;
            if paren {
                write!(f, ")")?;
            }
            return Ok(());
        }
        match node {
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::Neg(x) => {
                write!(f, "{}", s.neg())?;
                self.write(f, x, PREC_PREFIX)
            }
            Formula::Might(x) => {
                write!(f, "{}", s.might())?;
                self.write(f, x, PREC_PREFIX)
            }
            Formula::Know(a, x) => {
                if *a == Agent::ONE {
                    write!(f, "K")?;
                } else {
                    write!(f, "K{{{a}}}")?;
                }
                self.write(f, x, PREC_PREFIX)
            }
            Formula::And(a, b) => {
                let paren = min_prec > PREC_AND;
                if paren {
                    write!(f, "(")?;
                }
                self.write(f, a, PREC_AND)?;
                write!(f, "{}", s.and())?;
                self.write(f, b, PREC_PREFIX)?;
                if paren {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Printed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula, PREC_OR)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display(Style::Ascii).fmt(f)
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Formula, ParseError> {
        parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: found {found}, expected one of: {}", expected.join(", "))]
    Unexpected {
        offset: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("agent index 0 at byte {offset}; agents are numbered from 1")]
    AgentZero { offset: usize },
    #[error("agent index at byte {offset} does not fit in 32 bits")]
    AgentOverflow { offset: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Atom(String),
    Neg,
    Might,
    Know(Agent),
    And,
    Or,
    LParen,
    RParen,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Atom(p) => format!("atom `{p}`"),
            Token::Neg => "`~`".into(),
            Token::Might => "`<>`".into(),
            Token::Know(_) => "`K`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::End => "end of input".into(),
        }
    }
}

const EXPECT_OPERAND: &[&str] = &["atom", "`~`", "`<>`", "`K`", "`(`"];

fn lex(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < text.len() {
        let rest = &text[pos..];
        let c = rest.chars().next().expect("non-empty remainder");
        if c.is_whitespace() {
            pos += c.len_utf8();
            continue;
        }
        let start = pos;
        let tok = match c {
            '~' | '¬' => {
                pos += c.len_utf8();
                Token::Neg
            }
            '◇' => {
                pos += c.len_utf8();
                Token::Might
            }
            '&' | '∧' => {
                pos += c.len_utf8();
                Token::And
            }
            '|' | '∨' => {
                pos += c.len_utf8();
                Token::Or
            }
            '(' => {
                pos += 1;
                Token::LParen
            }
            ')' => {
                pos += 1;
                Token::RParen
            }
            '<' if rest.starts_with("<>") => {
                pos += 2;
                Token::Might
            }
            'K' => {
                pos += 1;
                if bytes.get(pos) == Some(&b'{') {
                    let digits_start = pos + 1;
                    let mut end = digits_start;
                    while end < bytes.len() && bytes[end].is_ascii_digit() {
                        end += 1;
                    }
                    if end == digits_start || bytes.get(end) != Some(&b'}') {
                        let found = text[end..].chars().next().map_or("end of input".to_string(), |c| format!("`{c}`"));
                        return Err(ParseError::Unexpected {
                            offset: end,
                            found,
                            expected: if end == digits_start { vec!["agent index"] } else { vec!["digit", "`}`"] },
                        });
                    }
                    let n: u32 = text[digits_start..end]
                        .parse()
                        .map_err(|_| ParseError::AgentOverflow { offset: digits_start })?;
                    let agent = Agent::new(n).ok_or(ParseError::AgentZero { offset: digits_start })?;
                    pos = end + 1;
                    Token::Know(agent)
                } else {
                    Token::Know(Agent::ONE)
                }
            }
            'a'..='z' => {
                let mut end = pos + 1;
                while end < bytes.len() && (bytes[end].is_ascii_lowercase() || bytes[end].is_ascii_digit() || bytes[end] == b'_') {
                    end += 1;
                }
                let name = text[pos..end].to_string();
                pos = end;
                Token::Atom(name)
            }
            other => {
                return Err(ParseError::Unexpected {
                    offset: start,
                    found: format!("`{other}`"),
                    expected: EXPECT_OPERAND.iter().copied().chain(["`&`", "`|`", "`)`"]).collect(),
                })
            }
        };
        out.push((start, tok));
    }
    out.push((text.len(), Token::End));
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn bump(&mut self) -> (usize, Token) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        let (offset, tok) = &self.tokens[self.pos];
        ParseError::Unexpected { offset: *offset, found: tok.describe(), expected: expected.to_vec() }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conjunction()?;
        while *self.peek() == Token::Or {
            self.bump();
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while *self.peek() == Token::And {
            self.bump();
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Token::Neg => {
                self.bump();
                Ok(Formula::neg(self.unary()?))
            }
            Token::Might => {
                self.bump();
                Ok(Formula::might(self.unary()?))
            }
            Token::Know(a) => {
                self.bump();
                Ok(Formula::know(a, self.unary()?))
            }
            Token::Atom(p) => {
                self.bump();
                Ok(Formula::Atom(p))
            }
            Token::LParen => {
                self.bump();
                let inner = self.disjunction()?;
                if *self.peek() != Token::RParen {
                    return Err(self.error(&["`&`", "`|`", "`)`"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(EXPECT_OPERAND)),
        }
    }
}

/// Parse a formula.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let f = p.disjunction()?;
    if *p.peek() != Token::End {
        return Err(p.error(&["`&`", "`|`", "end of input"]));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn atom(s: &str) -> Formula {
        Formula::atom(s)
    }

    #[test]
    fn parses_grammar_examples() {
        assert_eq!(p("K ~<>p"), Formula::know(Agent::ONE, Formula::neg(Formula::might(atom("p")))));
        assert_eq!(p("p | q"), Formula::neg(Formula::and(Formula::neg(atom("p")), Formula::neg(atom("q")))));
        assert_eq!(
            p("K{2} (p & <>q)"),
            Formula::know(Agent::new(2).unwrap(), Formula::and(atom("p"), Formula::might(atom("q"))))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("~p & q"), Formula::and(Formula::neg(atom("p")), atom("q")));
        assert_eq!(p("p & q & r"), Formula::and(Formula::and(atom("p"), atom("q")), atom("r")));
        assert_eq!(p("p | q & r"), Formula::or(atom("p"), Formula::and(atom("q"), atom("r"))));
        assert_eq!(p("p | q | r"), Formula::or(Formula::or(atom("p"), atom("q")), atom("r")));
        assert_eq!(p("Kp"), Formula::know(Agent::ONE, atom("p")));
        assert_eq!(p("K{1}p"), p("K p"));
        assert_eq!(p("rain_2"), atom("rain_2"));
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(p("K¬◇p"), p("K~<>p"));
        assert_eq!(p("p ∧ ◇¬p"), p("p & <>~p"));
        assert_eq!(p("p ∨ q"), p("p | q"));
    }

    #[test]
    fn rejects_agent_zero() {
        assert_eq!(parse("K{0}p"), Err(ParseError::AgentZero { offset: 2 }));
        assert!(matches!(parse("K{99999999999}p"), Err(ParseError::AgentOverflow { .. })));
    }

    #[test]
    fn syntax_errors_carry_offset_and_expectations() {
        match parse("p & ") {
            Err(ParseError::Unexpected { offset, expected, .. }) => {
                assert_eq!(offset, 4);
                assert!(expected.contains(&"atom"));
            }
            other => panic!("{other:?}"),
        }
        match parse("(p & q") {
            Err(ParseError::Unexpected { offset, expected, .. }) => {
                assert_eq!(offset, 6);
                assert!(expected.contains(&"`)`"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("p q"), Err(ParseError::Unexpected { offset: 2, .. })));
        assert!(matches!(parse("P"), Err(ParseError::Unexpected { offset: 0, .. })));
        assert!(matches!(parse("K{x}p"), Err(ParseError::Unexpected { offset: 2, .. })));
        assert!(parse("").is_err());
    }

    #[test]
    fn canonical_printing() {
        for s in ["K~<>p", "p | q", "K{2}(p & <>q)", "~(p & q)", "p & (q & r)", "(p | q) & r", "p | (q | r)", "~~p", "<>(p | ~p)"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("((p))").to_string(), "p");
        assert_eq!(p("~(~p & ~q)").to_string(), "p | q");
        assert_eq!(p("K{1} p").to_string(), "Kp");
        assert_eq!(p("K~<>p & q").display(Style::Unicode).to_string(), "K¬◇p ∧ q");
    }

    #[test]
    fn diamond_restriction_examples() {
        assert!(p("~(p & q)").is_diamond_restricted());
        assert!(p("K<>p").is_diamond_restricted());
        assert!(!p("<>p").is_diamond_restricted());
        assert!(!p("~<>(p | q)").is_diamond_restricted());
        assert!(!p("<>Kp").is_diamond_free());
    }

    #[test]
    fn size_atoms_agents() {
        let f = p("K{2}(p & <>q) & r");
        assert_eq!(f.size(), 7);
        assert_eq!(f.atoms().into_iter().collect::<Vec<_>>(), vec!["p", "q", "r"]);
        assert_eq!(f.agents().into_iter().map(Agent::index).collect::<Vec<_>>(), vec![2]);
    }
}
