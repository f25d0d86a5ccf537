//! Parser for the native reaction-network text format.
//!
//! The format is line oriented. `#` starts a comment. Declarations:
//!
//! ```text
//! species: S, E, C, P
//! const k_on > 0
//! const k = 0.1
//! r_on: S + E => C @ k_on*S*E
//! ```
//!
//! Reactant and product pools are `+`-separated entries `coef*Name` with
//! an elidable coefficient of 1; either pool may be empty. Kinetic
//! expressions use `+ - * /` with the usual precedence, parentheses,
//! decimal literals, and a leading `-` for negation. Species and constant
//! declarations may appear anywhere in the file; reactions are resolved
//! after all declarations have been read.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::network::{RateConstant, Reaction, ReactionNetwork};
use crate::term::{AnnotatedVar, Term};
use crate::sign::Op;

/// Character cursor over one logical line, tracking 1-based columns.
pub(crate) struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    pub(crate) fn new(text: &str, line: usize) -> Cursor {
        Cursor { chars: text.chars().collect(), pos: 0, line }
    }

    pub(crate) fn col(&self) -> usize {
        self.pos + 1
    }

    pub(crate) fn err(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.col(), message)
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    pub(crate) fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn starts_with(&self, s: &str) -> bool {
        let remaining = &self.chars[self.pos.min(self.chars.len())..];
        let pat: Vec<char> = s.chars().collect();
        remaining.len() >= pat.len() && remaining[..pat.len()] == pat[..]
    }

    pub(crate) fn eat_str(&mut self, s: &str) -> bool {
        if self.starts_with(s) {
            self.pos += s.chars().count();
            true
        } else {
            false
        }
    }

    fn expect_char(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    /// An identifier: `[A-Za-z_][A-Za-z0-9_]*`.
    pub(crate) fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return Err(self.err("expected identifier")),
        }
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    /// An unsigned numeric literal. Decimal notation is always accepted;
    /// `allow_fraction` additionally permits `n/d`, which is unambiguous
    /// only outside kinetic expressions (where `/` is division).
    fn number(&mut self, allow_fraction: bool) -> Result<BigRational> {
        let mut int_digits = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            int_digits.push(self.bump().unwrap());
        }
        if int_digits.is_empty() {
            return Err(self.err("expected number"));
        }
        let int: BigInt = int_digits.parse().expect("digits parse as integer");
        if self.peek() == Some('.') {
            self.pos += 1;
            let mut frac_digits = String::new();
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                frac_digits.push(self.bump().unwrap());
            }
            if frac_digits.is_empty() {
                return Err(self.err("expected digits after decimal point"));
            }
            let frac: BigInt = frac_digits.parse().expect("digits parse as integer");
            let scale = num_traits::pow(BigInt::from(10), frac_digits.len());
            return Ok(BigRational::new(int * &scale + frac, scale));
        }
        if allow_fraction && self.peek() == Some('/') {
            self.pos += 1;
            let mut den_digits = String::new();
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                den_digits.push(self.bump().unwrap());
            }
            if den_digits.is_empty() {
                return Err(self.err("expected denominator digits"));
            }
            let den: BigInt = den_digits.parse().expect("digits parse as integer");
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            return Ok(BigRational::new(int, den));
        }
        Ok(BigRational::from_integer(int))
    }
}

/// Maps an identifier (plus any `'`/`.` suffix) to a term, or rejects it.
pub(crate) type SymbolResolver<'a> = dyn FnMut(&str, &str, &Cursor) -> Result<Term> + 'a;

/// `expr := ['-'] mul (('+'|'-') mul)*`
pub(crate) fn parse_expr(cur: &mut Cursor, resolve: &mut SymbolResolver) -> Result<Term> {
    cur.skip_ws();
    let mut acc = if cur.peek() == Some('-') {
        cur.pos += 1;
        cur.skip_ws();
        if matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
            let n = cur.number(false)?;
            parse_mul_rest(cur, Term::Const(crate::term::Constant::Num(-n)), resolve)?
        } else {
            Term::neg(parse_mul(cur, resolve)?)
        }
    } else {
        parse_mul(cur, resolve)?
    };
    loop {
        cur.skip_ws();
        let op = match cur.peek() {
            Some('+') => Op::Add,
            Some('-') => Op::Sub,
            _ => break,
        };
        cur.pos += 1;
        let rhs = parse_mul(cur, resolve)?;
        acc = Term::binary(op, acc, rhs);
    }
    Ok(acc)
}

/// `mul := atom (('*'|'/') atom)*`
fn parse_mul(cur: &mut Cursor, resolve: &mut SymbolResolver) -> Result<Term> {
    let first = parse_atom(cur, resolve)?;
    parse_mul_rest(cur, first, resolve)
}

fn parse_mul_rest(cur: &mut Cursor, first: Term, resolve: &mut SymbolResolver) -> Result<Term> {
    let mut acc = first;
    loop {
        cur.skip_ws();
        let op = match cur.peek() {
            Some('*') => Op::Mul,
            Some('/') => Op::Div,
            _ => break,
        };
        cur.pos += 1;
        let rhs = parse_atom(cur, resolve)?;
        acc = Term::binary(op, acc, rhs);
    }
    Ok(acc)
}

/// `atom := number | '-' number | ident suffix? | '(' expr ')'`
fn parse_atom(cur: &mut Cursor, resolve: &mut SymbolResolver) -> Result<Term> {
    cur.skip_ws();
    match cur.peek() {
        Some('(') => {
            cur.pos += 1;
            let inner = parse_expr(cur, resolve)?;
            cur.skip_ws();
            cur.expect_char(')')?;
            Ok(inner)
        }
        Some('-') => {
            cur.pos += 1;
            cur.skip_ws();
            let n = cur.number(false)?;
            Ok(Term::Const(crate::term::Constant::Num(-n)))
        }
        Some(c) if c.is_ascii_digit() => {
            let n = cur.number(false)?;
            Ok(Term::Const(crate::term::Constant::Num(n)))
        }
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {
            let name = cur.ident()?;
            let mut suffix = String::new();
            while matches!(cur.peek(), Some('\'') | Some('.')) {
                suffix.push(cur.bump().unwrap());
            }
            resolve(&name, &suffix, cur)
        }
        _ => Err(cur.err("expected term")),
    }
}

/// Parse a standalone number (decimal or `n/d`, optionally signed), as
/// used by attribute values in the XML format.
pub(crate) fn parse_attribute_number(text: &str) -> Result<BigRational> {
    let mut cur = Cursor::new(text, 1);
    cur.skip_ws();
    let negative = cur.peek() == Some('-');
    if negative {
        cur.pos += 1;
    }
    let n = cur.number(true)?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.err("trailing characters after number"));
    }
    Ok(if negative { -n } else { n })
}

/// Parse a standalone kinetic expression over the given symbols.
pub(crate) fn parse_kinetics_text(
    text: &str,
    species: &[String],
    constants: &[RateConstant],
) -> Result<Term> {
    let mut cur = Cursor::new(text, 1);
    let mut resolver = kinetics_resolver(species, constants);
    let term = parse_expr(&mut cur, &mut resolver)?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.err("trailing characters in kinetic expression"));
    }
    Ok(term)
}

/// Resolver for kinetic expressions: plain identifiers only, naming a
/// declared species (current value) or a declared constant.
pub(crate) fn kinetics_resolver<'a>(
    species: &'a [String],
    constants: &'a [RateConstant],
) -> impl FnMut(&str, &str, &Cursor) -> Result<Term> + 'a {
    move |name: &str, suffix: &str, cur: &Cursor| {
        if !suffix.is_empty() {
            return Err(cur.err(format!(
                "primed or dotted variable '{name}{suffix}' cannot appear in kinetics"
            )));
        }
        if species.iter().any(|s| s == name) {
            return Ok(Term::var(AnnotatedVar::current(name)));
        }
        if let Some(c) = constants.iter().find(|c| c.name == name) {
            return Ok(Term::constant(c.as_constant()));
        }
        Err(cur.err(format!("undeclared symbol '{name}' in kinetics")))
    }
}

fn parse_species_line(cur: &mut Cursor, rn: &mut ReactionNetwork) -> Result<()> {
    cur.skip_ws();
    cur.expect_char(':')?;
    if cur.at_end() {
        return Ok(());
    }
    loop {
        cur.skip_ws();
        let col = cur.col();
        let name = cur.ident()?;
        if rn.has_species(&name) {
            return Err(Error::parse(cur.line, col, format!("duplicate species '{name}'")));
        }
        if rn.constant(&name).is_some() {
            return Err(Error::parse(
                cur.line,
                col,
                format!("'{name}' already declared as a constant"),
            ));
        }
        rn.species.push(name);
        cur.skip_ws();
        if cur.peek() == Some(',') {
            cur.pos += 1;
        } else {
            break;
        }
    }
    if !cur.at_end() {
        return Err(cur.err("unexpected trailing input"));
    }
    Ok(())
}

fn parse_const_line(cur: &mut Cursor, rn: &mut ReactionNetwork) -> Result<()> {
    cur.skip_ws();
    let col = cur.col();
    let name = cur.ident()?;
    if rn.constant(&name).is_some() {
        return Err(Error::parse(cur.line, col, format!("duplicate constant '{name}'")));
    }
    if rn.has_species(&name) {
        return Err(Error::parse(
            cur.line,
            col,
            format!("'{name}' already declared as a species"),
        ));
    }
    cur.skip_ws();
    let constant = match cur.peek() {
        Some('>') => {
            cur.pos += 1;
            cur.skip_ws();
            cur.expect_char('0')?;
            RateConstant::positive(name)
        }
        Some('=') => {
            cur.pos += 1;
            cur.skip_ws();
            let negative = cur.peek() == Some('-');
            if negative {
                cur.pos += 1;
                cur.skip_ws();
            }
            let mut value = cur.number(true)?;
            if negative {
                value = -value;
            }
            RateConstant::numeric(name, value)
        }
        _ => return Err(cur.err("expected '> 0' or '= <number>'")),
    };
    if !cur.at_end() {
        return Err(cur.err("unexpected trailing input"));
    }
    rn.constants.push(constant);
    Ok(())
}

fn parse_pool(cur: &mut Cursor, rn: &ReactionNetwork) -> Result<BTreeMap<String, BigRational>> {
    let mut pool = BTreeMap::new();
    loop {
        cur.skip_ws();
        match cur.peek() {
            None | Some('@') => break,
            Some('=') if cur.starts_with("=>") => break,
            _ => {}
        }
        let coef = if matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
            let n = cur.number(true)?;
            cur.skip_ws();
            cur.expect_char('*')?;
            cur.skip_ws();
            n
        } else {
            BigRational::from_integer(1.into())
        };
        let col = cur.col();
        let name = cur.ident()?;
        if !rn.has_species(&name) {
            return Err(Error::parse(
                cur.line,
                col,
                format!("undeclared species '{name}' in reaction"),
            ));
        }
        *pool.entry(name).or_insert_with(BigRational::zero) += coef;
        cur.skip_ws();
        if cur.peek() == Some('+') {
            cur.pos += 1;
        } else {
            break;
        }
    }
    Ok(pool)
}

fn parse_reaction_line(cur: &mut Cursor, rn: &ReactionNetwork) -> Result<Reaction> {
    cur.skip_ws();
    let id = cur.ident()?;
    cur.skip_ws();
    cur.expect_char(':')?;
    let reactants = parse_pool(cur, rn)?;
    cur.skip_ws();
    if !cur.eat_str("=>") {
        return Err(cur.err("expected '=>'"));
    }
    let products = parse_pool(cur, rn)?;
    cur.skip_ws();
    cur.expect_char('@')?;
    let mut resolver = kinetics_resolver(&rn.species, &rn.constants);
    let kinetics = parse_expr(cur, &mut resolver)?;
    if !cur.at_end() {
        return Err(cur.err("unexpected trailing input"));
    }
    if reactants.is_empty() && products.is_empty() {
        return Err(cur.err(format!("reaction '{id}' has neither reactants nor products")));
    }
    Ok(Reaction { id, reactants, products, kinetics })
}

/// Parse a reaction network from the native text format.
pub fn parse_native(input: &str) -> Result<ReactionNetwork> {
    let mut rn = ReactionNetwork::default();
    let mut reaction_lines: Vec<(usize, String)> = Vec::new();

    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(line, line_no);
        cur.skip_ws();
        let head = cur.ident()?;
        match head.as_str() {
            "species" => parse_species_line(&mut cur, &mut rn)?,
            "const" => parse_const_line(&mut cur, &mut rn)?,
            // Reaction bodies reference species and constants, which may
            // be declared further down; resolve them in a second pass.
            _ => reaction_lines.push((line_no, line.to_string())),
        }
    }

    for (line_no, line) in reaction_lines {
        let mut cur = Cursor::new(&line, line_no);
        let reaction = parse_reaction_line(&mut cur, &rn)?;
        if rn.reactions.iter().any(|r| r.id == reaction.id) {
            return Err(Error::parse(
                line_no,
                1,
                format!("duplicate reaction id '{}'", reaction.id),
            ));
        }
        rn.reactions.push(reaction);
    }
    Ok(rn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::RENZ;
    use crate::network::render_native;

    #[test]
    fn parses_the_enzyme_network() {
        let rn = parse_native(RENZ).unwrap();
        assert_eq!(rn.species, vec!["S", "E", "C", "P"]);
        assert_eq!(rn.constants.len(), 3);
        assert_eq!(rn.reactions.len(), 3);
        let r_cat = &rn.reactions[2];
        assert_eq!(r_cat.consumed("C"), BigRational::from_integer(1.into()));
        assert_eq!(r_cat.produced("P"), BigRational::from_integer(2.into()));
        assert_eq!(r_cat.produced("E"), BigRational::from_integer(1.into()));
        assert_eq!(r_cat.kinetics.to_string(), "k_cat * C");
        assert!(rn.validate().is_empty());
    }

    #[test]
    fn render_round_trips() {
        let rn = parse_native(RENZ).unwrap();
        let rendered = render_native(&rn);
        let reparsed = parse_native(&rendered).unwrap();
        assert_eq!(rn, reparsed);
    }

    #[test]
    fn empty_input_is_the_empty_network() {
        let rn = parse_native("").unwrap();
        assert!(rn.species.is_empty() && rn.reactions.is_empty());
        let rn = parse_native("# only a comment\n\n").unwrap();
        assert_eq!(rn, ReactionNetwork::default());
    }

    #[test]
    fn declarations_may_follow_reactions() {
        let rn = parse_native("r: A => B @ k*A\nspecies: A, B\nconst k > 0\n").unwrap();
        assert_eq!(rn.reactions.len(), 1);
    }

    #[test]
    fn numeric_constants_and_fractions() {
        let rn = parse_native(
            "species: A\nconst k = 0.25\nconst j = -2\nconst h = 1/3\nr: A => @ k*A\n",
        )
        .unwrap();
        assert_eq!(rn.constant("k").unwrap().value, Some(BigRational::new(1.into(), 4.into())));
        assert_eq!(rn.constant("j").unwrap().value, Some(BigRational::from_integer((-2).into())));
        assert_eq!(rn.constant("h").unwrap().value, Some(BigRational::new(1.into(), 3.into())));
        assert_eq!(rn.constant("k").unwrap().sign(), crate::sign::Sign::Pos);
        assert_eq!(rn.constant("j").unwrap().sign(), crate::sign::Sign::Neg);
    }

    #[test]
    fn empty_pools() {
        let rn = parse_native("species: A\nconst k > 0\ninflow: => A @ k\noutflow: A => @ k*A\n")
            .unwrap();
        assert!(rn.reactions[0].reactants.is_empty());
        assert!(rn.reactions[1].products.is_empty());
    }

    #[test]
    fn repeated_pool_entries_accumulate() {
        let rn = parse_native("species: A, D\nconst k > 0\ndim: A + A => D @ k*A*A\n").unwrap();
        assert_eq!(rn.reactions[0].consumed("A"), BigRational::from_integer(2.into()));
    }

    #[test]
    fn kinetic_expression_shapes() {
        let rn = parse_native(
            "species: A, B\nconst k > 0\nconst km = 2\nr: A => B @ k*A/(km + A)\nq: B => A @ -k*B + 0.5\n",
        )
        .unwrap();
        assert_eq!(rn.reactions[0].kinetics.to_string(), "k * A / (km + A)");
        assert_eq!(rn.reactions[1].kinetics.to_string(), "-k * B + 0.5");
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_native("species: A\nr: A => B @ k\n").unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("undeclared species 'B'"), "{message}");
            }
            other => panic!("unexpected error {other:?}"),
        }

        let err = parse_native("species: A\nconst k > 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");

        let err = parse_native("species: A, A\n").unwrap_err();
        assert!(err.to_string().contains("duplicate species"), "{err}");

        let err = parse_native("species: A\nconst k > 0\nr: A => @ k*A\nr: A => @ k\n").unwrap_err();
        assert!(err.to_string().contains("duplicate reaction id"), "{err}");

        let err = parse_native("species: A\nconst k > 0\nr: A => @ k*A'\n").unwrap_err();
        assert!(err.to_string().contains("cannot appear in kinetics"), "{err}");
    }

    #[test]
    fn rejects_trailing_garbage() {
        let err = parse_native("species: A ,\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = parse_native("species: A\nconst k > 0\nr: A => @ k*A extra\n").unwrap_err();
        assert!(err.to_string().contains("trailing"), "{err}");
    }
}
