//! Pure-difference binomials, linear forms, ideal presentations and the text
//! parser for them.
//!
//! A `Binomial` is `lead - trail` with both sides monomials (`trail` absent
//! for monomial generators). Coefficients other than 1 and -1 never occur, so
//! every computation downstream is independent of the coefficient field.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::monomial::{Monomial, OrderSpec};

/// A difference of two monomials, or a single monomial when `trail` is `None`.
/// Kept up to global sign; `normalize` swaps the sides so that `lead` is the
/// initial term under a chosen order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Binomial {
    pub lead: Monomial,
    pub trail: Option<Monomial>,
}

impl Binomial {
    pub fn monomial(lead: Monomial) -> Self {
        Binomial { lead, trail: None }
    }

    /// a - b as a binomial, `None` when the difference is zero.
    pub fn difference(a: Monomial, b: Monomial) -> Option<Self> {
        if a == b {
            None
        } else {
            Some(Binomial { lead: a, trail: Some(b) })
        }
    }

    pub fn ambient(&self) -> usize {
        self.lead.ambient()
    }

    pub fn is_monomial(&self) -> bool {
        self.trail.is_none()
    }

    /// Both sides have the same degree.
    pub fn is_homogeneous(&self) -> bool {
        match &self.trail {
            Some(t) => t.degree() == self.lead.degree(),
            None => true,
        }
    }

    pub fn degree(&self) -> u32 {
        match &self.trail {
            Some(t) => self.lead.degree().max(t.degree()),
            None => self.lead.degree(),
        }
    }

    /// Reorder the sides so that `lead` is the larger term under `order`.
    pub fn normalize(&self, order: &OrderSpec) -> Binomial {
        match &self.trail {
            Some(t) if order.compare(t, &self.lead) == Ordering::Greater => Binomial {
                lead: t.clone(),
                trail: Some(self.lead.clone()),
            },
            _ => self.clone(),
        }
    }

    /// The initial term under `order`.
    pub fn initial(&self, order: &OrderSpec) -> Monomial {
        self.normalize(order).lead
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.trail {
            Some(t) => write!(f, "{} - {}", self.lead, t),
            None => write!(f, "{}", self.lead),
        }
    }
}

/// A variable or a difference of two variables; the building blocks of the
/// parameter sequences attached to a coprime-initials certificate.
/// `Diff(i, j)` always has `i < j` and means x_j - x_i (larger index minus
/// smaller, the shape the attached sequences produce); the induced
/// substitution sends x_j to x_i, and `Var(i)` sends x_i to 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LinearForm {
    Var(usize),
    Diff(usize, usize),
}

impl LinearForm {
    pub fn diff(a: usize, b: usize) -> Self {
        if a < b {
            LinearForm::Diff(a, b)
        } else {
            LinearForm::Diff(b, a)
        }
    }

    pub fn to_binomial(self, n: usize) -> Binomial {
        match self {
            LinearForm::Var(i) => Binomial::monomial(Monomial::variable(i, n)),
            LinearForm::Diff(i, j) => Binomial {
                lead: Monomial::variable(j, n),
                trail: Some(Monomial::variable(i, n)),
            },
        }
    }

    pub fn display_with(&self, names: &[String]) -> String {
        match self {
            LinearForm::Var(i) => names[*i].clone(),
            LinearForm::Diff(i, j) => format!("{} - {}", names[*j], names[*i]),
        }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinearForm::Var(i) => write!(f, "x{}", i + 1),
            LinearForm::Diff(i, j) => write!(f, "x{} - x{}", j + 1, i + 1),
        }
    }
}

/// A finite generating set for an ideal in a polynomial ring with `n`
/// variables. Generator minimality is trusted; `verified_minimal` reports the
/// cheap certificate (pairwise distinct leads, none dividing another).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealPresentation {
    pub n: usize,
    pub generators: Vec<Binomial>,
    pub names: Option<Vec<String>>,
}

impl IdealPresentation {
    pub fn new(n: usize, generators: Vec<Binomial>) -> Result<Self, Error> {
        let p = IdealPresentation { n, generators, names: None };
        p.validate()?;
        Ok(p)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, Error> {
        if names.len() != self.n {
            return Err(Error::precondition("variable name list does not match ambient size"));
        }
        self.names = Some(names);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), Error> {
        for g in &self.generators {
            if g.ambient() != self.n
                || g.trail.as_ref().is_some_and(|t| t.ambient() != self.n)
            {
                return Err(Error::precondition("generator ambient size mismatch"));
            }
            if g.trail.as_ref() == Some(&g.lead) {
                return Err(Error::precondition("zero generator (equal sides)"));
            }
        }
        if let Some(names) = &self.names {
            if names.len() != self.n {
                return Err(Error::precondition("variable name list does not match ambient size"));
            }
        }
        Ok(())
    }

    pub fn variable_names(&self) -> Vec<String> {
        match &self.names {
            Some(names) => names.clone(),
            None => (1..=self.n).map(|i| format!("x{}", i)).collect(),
        }
    }

    pub fn is_monomial_ideal(&self) -> bool {
        self.generators.iter().all(Binomial::is_monomial)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.generators.iter().all(Binomial::is_homogeneous)
    }

    /// The common generator degree, if every generator is homogeneous of one
    /// and the same degree.
    pub fn single_generation_degree(&self) -> Option<u32> {
        if !self.is_homogeneous() || self.generators.is_empty() {
            return None;
        }
        let d = self.generators[0].degree();
        self.generators.iter().all(|g| g.degree() == d).then_some(d)
    }

    /// Every generator normalized so its lead is the initial term.
    pub fn normalized(&self, order: &OrderSpec) -> IdealPresentation {
        IdealPresentation {
            n: self.n,
            generators: self.generators.iter().map(|g| g.normalize(order)).collect(),
            names: self.names.clone(),
        }
    }

    pub fn initials(&self, order: &OrderSpec) -> Vec<Monomial> {
        self.generators.iter().map(|g| g.initial(order)).collect()
    }

    /// Cheap minimality certificate: initial terms pairwise distinct and none
    /// divides another (checked on the leads as stored).
    pub fn verified_minimal(&self) -> bool {
        let leads: Vec<&Monomial> = self.generators.iter().map(|g| &g.lead).collect();
        for i in 0..leads.len() {
            for j in 0..leads.len() {
                if i != j && leads[i].divides(leads[j]) {
                    return false;
                }
            }
        }
        true
    }

    fn render_monomial(&self, m: &Monomial, names: &[String]) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in m.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if e == 1 {
                parts.push(names[i].clone());
            } else {
                parts.push(format!("{}^{}", names[i], e));
            }
        }
        parts.join("*")
    }

    pub fn render_generator(&self, g: &Binomial) -> String {
        let names = self.variable_names();
        match &g.trail {
            Some(t) => format!(
                "{} - {}",
                self.render_monomial(&g.lead, &names),
                self.render_monomial(t, &names)
            ),
            None => self.render_monomial(&g.lead, &names),
        }
    }
}

impl fmt::Display for IdealPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars: {}", self.variable_names().join(" "))?;
        for g in &self.generators {
            writeln!(f, "{}", self.render_generator(g))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct Tokenizer<'a> {
    text: &'a str,
    pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Name(String),
    Integer(u32),
    Star,
    Caret,
    Plus,
    Minus,
}

impl<'a> Tokenizer<'a> {
    fn new(text: &'a str) -> Self {
        Tokenizer { text, pos: 0 }
    }

    fn skip_space(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_space();
        self.text[self.pos..].chars().next()
    }

    fn next_token(&mut self) -> Result<Option<(usize, Token)>, Error> {
        self.skip_space();
        let start = self.pos;
        let Some(c) = self.text[self.pos..].chars().next() else {
            return Ok(None);
        };
        let token = match c {
            '*' => {
                self.pos += 1;
                Token::Star
            }
            '^' => {
                self.pos += 1;
                Token::Caret
            }
            '+' => {
                self.pos += 1;
                Token::Plus
            }
            '-' => {
                self.pos += 1;
                Token::Minus
            }
            c if c.is_ascii_digit() => {
                let rest = &self.text[self.pos..];
                let len = rest.chars().take_while(|c| c.is_ascii_digit()).count();
                let digits = &rest[..len];
                self.pos += len;
                let value = digits
                    .parse()
                    .map_err(|_| Error::parse(start, format!("integer '{}' out of range", digits)))?;
                Token::Integer(value)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let rest = &self.text[self.pos..];
                let len = rest
                    .chars()
                    .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
                    .count();
                let name = rest[..len].to_string();
                self.pos += len;
                Token::Name(name)
            }
            c => return Err(Error::parse(start, format!("unexpected character '{}'", c))),
        };
        Ok(Some((start, token)))
    }
}

#[derive(Default)]
struct VariableTable {
    names: Vec<String>,
    fixed: bool,
}

impl VariableTable {
    fn resolve(&mut self, name: &str, pos: usize) -> Result<usize, Error> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Ok(i);
        }
        if self.fixed {
            return Err(Error::parse(pos, format!("unknown variable '{}'", name)));
        }
        // Without a vars: header only x1, x2, ... are accepted, and the
        // ambient size is the largest index mentioned.
        let index = name
            .strip_prefix('x')
            .and_then(|digits| digits.parse::<usize>().ok())
            .filter(|&k| k >= 1);
        match index {
            Some(k) => {
                while self.names.len() < k {
                    self.names.push(format!("x{}", self.names.len() + 1));
                }
                Ok(k - 1)
            }
            None => Err(Error::parse(
                pos,
                format!("variable '{}' requires a 'vars:' header (or use x1, x2, ...)", name),
            )),
        }
    }
}

/// One monomial with a byte position, exponents indexed by the variable table.
fn parse_term(
    tok: &mut Tokenizer,
    table: &mut VariableTable,
    exponents: &mut Vec<(usize, u32)>,
) -> Result<(), Error> {
    loop {
        let Some((pos, token)) = tok.next_token()? else {
            return Err(Error::parse(tok.pos, "expected a variable"));
        };
        match token {
            Token::Name(name) => {
                let var = table.resolve(&name, pos)?;
                let mut exp = 1;
                if tok.peek() == Some('^') {
                    tok.next_token()?;
                    match tok.next_token()? {
                        Some((_, Token::Integer(e))) => exp = e,
                        other => {
                            let at = other.map(|(p, _)| p).unwrap_or(tok.pos);
                            return Err(Error::parse(at, "expected an integer exponent after '^'"));
                        }
                    }
                }
                exponents.push((var, exp));
            }
            Token::Integer(_) => {
                return Err(Error::parse(pos, "coefficients are restricted to 1 and -1"));
            }
            _ => return Err(Error::parse(pos, "expected a variable")),
        }
        match tok.peek() {
            Some('*') => {
                tok.next_token()?;
            }
            _ => return Ok(()),
        }
    }
}

fn build_monomial(pairs: &[(usize, u32)], n: usize) -> Monomial {
    let mut exponents = vec![0u32; n];
    for &(i, e) in pairs {
        exponents[i] += e;
    }
    Monomial::from_exponents(exponents)
}

/// Exponent lists of a parsed generator: the lead and the optional trail.
type ParsedTerms = (Vec<(usize, u32)>, Option<Vec<(usize, u32)>>);

/// Parse one generator expression: a monomial or a difference of two
/// monomials, with an optional leading sign.
fn parse_generator(
    text: &str,
    offset: usize,
    table: &mut VariableTable,
) -> Result<ParsedTerms, Error> {
    let mut tok = Tokenizer::new(text);
    let shift = |e: Error| match e {
        Error::Parse { position, message } => Error::Parse { position: position + offset, message },
        other => other,
    };

    let mut leading_minus = false;
    if tok.peek() == Some('-') {
        tok.next_token().map_err(shift)?;
        leading_minus = true;
    } else if tok.peek() == Some('+') {
        tok.next_token().map_err(shift)?;
    }
    let mut first = Vec::new();
    parse_term(&mut tok, table, &mut first).map_err(shift)?;

    let second = match tok.peek() {
        None => None,
        Some('-') | Some('+') => {
            let (pos, sign) = tok.next_token().map_err(shift)?.unwrap();
            let second_negated = sign == Token::Minus;
            if leading_minus == second_negated {
                return Err(Error::parse(
                    pos + offset,
                    "generators must be pure differences (signs +1 and -1)",
                ));
            }
            let mut second = Vec::new();
            parse_term(&mut tok, table, &mut second).map_err(shift)?;
            if let Some((pos, _)) = tok.next_token().map_err(shift)? {
                return Err(Error::parse(pos + offset, "at most two terms per generator"));
            }
            Some(second)
        }
        Some(c) => {
            return Err(Error::parse(tok.pos + offset, format!("unexpected character '{}'", c)))
        }
    };
    // A lone negated monomial generates the same ideal as the monomial.
    Ok(if leading_minus && second.is_none() {
        (first, None)
    } else {
        (first, second)
    })
}

/// Parse an ideal from text: an optional `vars:` header line, then one or
/// more generator expressions separated by commas or newlines. `#` starts a
/// comment. Without a header, variables must be named x1, x2, ...
pub fn parse_ideal(text: &str) -> Result<IdealPresentation, Error> {
    let mut table = VariableTable::default();
    let mut pieces: Vec<(usize, String)> = Vec::new();
    let mut offset = 0usize;
    let mut had_header = false;

    for (line_no, line) in text.split('\n').enumerate() {
        let content = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let trimmed = content.trim();
        if line_no == 0 && trimmed.starts_with("vars:") {
            let names: Vec<String> =
                trimmed["vars:".len()..].split_whitespace().map(str::to_string).collect();
            if names.is_empty() {
                return Err(Error::parse(offset, "empty vars: header"));
            }
            for (k, name) in names.iter().enumerate() {
                if names[..k].contains(name) {
                    return Err(Error::parse(offset, format!("duplicate variable '{}'", name)));
                }
            }
            table.names = names;
            table.fixed = true;
            had_header = true;
        } else {
            let mut piece_offset = offset;
            for piece in content.split(',') {
                pieces.push((piece_offset, piece.to_string()));
                piece_offset += piece.len() + 1;
            }
        }
        offset += line.len() + 1;
    }

    let mut raw = Vec::new();
    for (piece_offset, piece) in &pieces {
        if piece.trim().is_empty() {
            continue;
        }
        raw.push(parse_generator(piece, *piece_offset, &mut table)?);
    }
    if raw.is_empty() {
        return Err(Error::parse(0, "no generators found"));
    }

    let n = table.names.len();
    let mut generators = Vec::new();
    for (first, second) in raw {
        let lead = build_monomial(&first, n);
        match second {
            None => generators.push(Binomial::monomial(lead)),
            Some(second) => {
                let trail = build_monomial(&second, n);
                match Binomial::difference(lead, trail) {
                    Some(b) => generators.push(b),
                    None => return Err(Error::parse(0, "zero generator (equal sides)")),
                }
            }
        }
    }

    let presentation = IdealPresentation::new(n, generators)?;
    if had_header {
        presentation.with_names(table.names)
    } else {
        Ok(presentation)
    }
}
