//! Parser for ring elements.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' INT)?
//! atom   := INT | 'L' | 'a' INT | 'b' INT | 'w' INT | 'd{' INT (',' INT)* '}' | '(' expr ')'
//! ```
//!
//! Integers are read mod 2. An expression uses either the cohomology
//! generators (`L`, `a`, `b`, `d`) or the Stiefel-Whitney variables `w`,
//! never both.

use std::sync::Arc;

use crate::cohomring::{CohomElem, CohomologyModel, Generator};
use crate::deriv::SubsetIndex;
use crate::error::{Error, Result};
use crate::ring2::{GradedRing, Poly2, RingHandle};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    /// A cohomology class together with the polynomial that was typed.
    Class { formula: Poly2, element: CohomElem },
    /// A polynomial in `k[w_1, ..., w_2n]`.
    Poly(Poly2),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(Ident),
    Plus,
    Star,
    Caret,
    Open,
    Close,
    End,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Ident {
    Lambda,
    A(u64),
    B(u64),
    W(u64),
    D(Vec<u64>),
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let read_int = |i: &mut usize| -> Result<u64> {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        if start == *i {
            return Err(parse_err(start, "expected an integer"));
        }
        text[start..*i]
            .parse()
            .map_err(|_| parse_err(start, "integer too large"))
    };
    while i < bytes.len() {
        let start = i;
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::Open,
            b')' => Tok::Close,
            b'0'..=b'9' => {
                out.push((start, Tok::Int(read_int(&mut i)?)));
                continue;
            }
            b'L' => Tok::Ident(Ident::Lambda),
            b'a' | b'b' | b'w' => {
                i += 1;
                let k = read_int(&mut i)?;
                let id = match c {
                    b'a' => Ident::A(k),
                    b'b' => Ident::B(k),
                    _ => Ident::W(k),
                };
                out.push((start, Tok::Ident(id)));
                continue;
            }
            b'd' => {
                i += 1;
                if bytes.get(i) != Some(&b'{') {
                    return Err(parse_err(i, "expected `{` after `d`"));
                }
                i += 1;
                let mut members = vec![read_int(&mut i)?];
                while bytes.get(i) == Some(&b',') {
                    i += 1;
                    members.push(read_int(&mut i)?);
                }
                if bytes.get(i) != Some(&b'}') {
                    return Err(parse_err(i, "expected `}`"));
                }
                i += 1;
                out.push((start, Tok::Ident(Ident::D(members))));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(parse_err(start, format!("unexpected character `{ch}`")));
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    ring: Arc<GradedRing>,
    model: &'a CohomologyModel,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Poly2> {
        let mut acc = self.term()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            acc += &self.term()?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly2> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly2> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            (off, Tok::Int(e)) => {
                let e = u32::try_from(e).map_err(|_| parse_err(off, "exponent too large"))?;
                Ok(base.pow(e))
            }
            (off, _) => Err(parse_err(off, "expected an exponent")),
        }
    }

    fn atom(&mut self) -> Result<Poly2> {
        match self.bump() {
            (_, Tok::Int(k)) => Ok(if k % 2 == 1 { self.ring.one() } else { self.ring.zero() }),
            (off, Tok::Ident(id)) => self.ident(off, &id),
            (_, Tok::Open) => {
                let inner = self.expr()?;
                match self.bump() {
                    (_, Tok::Close) => Ok(inner),
                    (off, _) => Err(parse_err(off, "expected `)`")),
                }
            }
            (off, Tok::End) => Err(parse_err(off, "unexpected end of input")),
            (off, _) => Err(parse_err(off, "expected a term")),
        }
    }

    fn ident(&self, off: usize, id: &Ident) -> Result<Poly2> {
        let n = self.model.n();
        let name = match id {
            Ident::Lambda => "L".to_string(),
            Ident::A(k) => {
                let k = *k as usize;
                if k.is_multiple_of(2) || k > 2 * n - 1 {
                    return Err(parse_err(off, format!("a{k} is out of range for n = {n}")));
                }
                format!("a{k}")
            }
            Ident::B(k) => {
                let k = *k as usize;
                if !k.is_multiple_of(4) || k == 0 || k > 4 * n {
                    return Err(parse_err(off, format!("b{k} is out of range for n = {n}")));
                }
                format!("b{k}")
            }
            Ident::W(k) => {
                let k = *k as usize;
                if k == 0 || k > 2 * n {
                    return Err(parse_err(off, format!("w{k} is out of range for n = {n}")));
                }
                format!("w{k}")
            }
            Ident::D(members) => {
                let members: Vec<usize> = members.iter().map(|&m| m as usize).collect();
                let t = SubsetIndex::new(n, &members).map_err(|e| parse_err(off, e.to_string()))?;
                self.model
                    .generator(&Generator::D(t))
                    .map_err(|e| parse_err(off, e.to_string()))?;
                format!("d{}", t.label())
            }
        };
        self.ring.var_named(&name)
    }
}

/// Parses `text` for the model of `BGO(2n)`.
pub fn parse_expr(text: &str, n: usize) -> Result<Parsed> {
    parse_expr_in(text, &CohomologyModel::new(n)?)
}

pub fn parse_expr_in(text: &str, model: &CohomologyModel) -> Result<Parsed> {
    let toks = lex(text)?;
    let mut first_w = None;
    let mut first_class = None;
    for (off, t) in &toks {
        if let Tok::Ident(id) = t {
            let slot = if matches!(id, Ident::W(_)) { &mut first_w } else { &mut first_class };
            slot.get_or_insert(*off);
        }
    }
    if let (Some(w), Some(c)) = (first_w, first_class) {
        return Err(parse_err(w.max(c), "cannot mix w variables with cohomology generators"));
    }
    let ring = if first_w.is_some() {
        Arc::clone(model.c())
    } else {
        Arc::clone(model.presentation_ring())
    };
    let mut parser = Parser { toks, pos: 0, ring, model };
    let value = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(parse_err(parser.offset(), "unexpected trailing input"));
    }
    if first_w.is_some() {
        Ok(Parsed::Poly(value))
    } else {
        Ok(Parsed::Class {
            element: model.evaluate(&value)?,
            formula: value,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(text: &str, n: usize) -> CohomElem {
        match parse_expr(text, n).unwrap() {
            Parsed::Class { element, .. } => element,
            Parsed::Poly(p) => panic!("expected a class, got {p}"),
        }
    }

    #[test]
    fn relations_parse_to_zero() {
        assert!(class("L*a1", 2).is_zero());
        assert!(class("d{1,2}^2 + a1^2*b8 + a3^2*b4", 2).is_zero());
        assert!(!class("(L + a1)^2", 2).is_zero());
        assert!(class("3*L + L", 1).is_zero());
    }

    #[test]
    fn w_polynomials() {
        match parse_expr("w1*w4 + w2*w3", 2).unwrap() {
            Parsed::Poly(p) => assert_eq!(p.to_string(), "w1*w4 + w2*w3"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_carry_offsets() {
        let offset = |text: &str, n| match parse_expr(text, n) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("{other:?}"),
        };
        assert_eq!(offset("a1 + a2", 2), 5);
        assert_eq!(offset("L + x", 1), 4);
        assert_eq!(offset("a1 + w1", 1), 5);
        assert_eq!(offset("d{1,3}", 2), 0);
        assert_eq!(offset("d{1}", 2), 0);
        assert_eq!(offset("(a1", 1), 3);
        assert_eq!(offset("a1 a1", 1), 3);
        assert_eq!(offset("b4^", 1), 3);
        assert_eq!(offset("d[1]", 2), 1);
    }

    #[test]
    fn labels_round_trip() {
        let model = CohomologyModel::new(2).unwrap();
        for d in 0..=8 {
            for b in model.basis(d).unwrap() {
                match parse_expr_in(&b.label, &model).unwrap() {
                    Parsed::Class { formula, element } => {
                        assert_eq!(formula, b.monomial);
                        assert_eq!(element, b.element);
                    }
                    other => panic!("{other:?}"),
                }
            }
        }
    }
}
