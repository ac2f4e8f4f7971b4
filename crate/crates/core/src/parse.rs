//! Line-oriented text format for algebra tables.
//!
//! ```text
//! # one-sided table; omitted products are zero
//! algebra witt5
//! dim 5
//! field Q
//! lie
//! complete skew
//! [e1,e2] = e3
//! [e1,e3] = 2*e4
//! [e1,e4] = 3*e5
//! [e2,e3] = e5
//! ```
//!
//! Header lines come first: `algebra <name>` (optional), `dim <n>`
//! (required), `field Q|F<p>` (default Q), `lie` or `general` (default
//! general), `complete skew|symmetric|none` (default skew under `lie`,
//! none otherwise). Product lines use `[ei,ej] = ...` or `ei*ej = ...`
//! with right-hand sides like `2*e4 - 1/3*e5` or `0`. `#` starts a
//! comment. Every error carries its line and column.

use std::collections::BTreeMap;

use crate::algebra::{AlgebraTable, Completion, TableBuilder};
use crate::error::{Error, ParseError, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Lie,
    General,
}

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
    line_no: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: &'a str, line_no: usize) -> Self {
        Cursor {
            text: line.as_bytes(),
            pos: 0,
            line_no,
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line_no, self.pos + 1, message)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && (self.text[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text.get(self.pos).map(|&b| b as char)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> std::result::Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected {c:?}")))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    /// `e<digits>`, returned 1-based.
    fn basis_index(&mut self) -> std::result::Result<usize, ParseError> {
        if !self.eat('e') {
            return Err(self.err("expected a basis symbol like e3"));
        }
        let start = self.pos;
        while self.pos < self.text.len() && (self.text[self.pos] as char).is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits after 'e'"));
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .expect("digits are ascii")
            .parse()
            .map_err(|_| self.err("basis index does not fit"))
    }

    /// Unsigned number: digits with an optional /digits part.
    fn number(&mut self) -> std::result::Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && (self.text[self.pos] as char).is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        if self.pos < self.text.len() && self.text[self.pos] == b'/' {
            self.pos += 1;
            let frac_start = self.pos;
            while self.pos < self.text.len() && (self.text[self.pos] as char).is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == frac_start {
                return Err(self.err("expected digits after '/'"));
            }
        }
        Ok(std::str::from_utf8(&self.text[start..self.pos])
            .expect("ascii")
            .to_string())
    }
}

struct Header {
    name: Option<String>,
    dim: Option<(usize, usize)>, // value, line
    field: Option<FieldSpec>,
    kind: Option<Kind>,
    completion: Option<Completion>,
}

/// Parses the text format into a completed table.
pub fn parse_text(src: &str) -> Result<AlgebraTable> {
    let mut header = Header {
        name: None,
        dim: None,
        field: None,
        kind: None,
        completion: None,
    };
    // (line_no, i, j, rhs accumulated by target index)
    let mut products: Vec<(usize, usize, usize, BTreeMap<usize, Scalar>)> = Vec::new();
    let mut in_body = false;

    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(cut) => &raw[..cut],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let is_product = {
            let t = line.trim_start();
            t.starts_with('[') || (t.starts_with('e') && line.contains('*'))
        };
        if !is_product {
            if in_body {
                return Err(ParseError::new(
                    line_no,
                    1,
                    "header lines must precede all product lines",
                )
                .into());
            }
            parse_header_line(line, line_no, &mut header)?;
            continue;
        }
        in_body = true;
        let dim = header
            .dim
            .ok_or_else(|| ParseError::new(line_no, 1, "dim must be declared before products"))?
            .0;
        let field = header.field.unwrap_or(FieldSpec::Rationals);
        let kind = header.kind.unwrap_or(Kind::General);
        let (i, j, rhs) = parse_product_line(line, line_no, dim, field)?;
        if kind == Kind::Lie && i == j && rhs.values().any(|c| !c.is_zero()) {
            return Err(ParseError::new(
                line_no,
                1,
                format!("[e{i},e{i}] must be zero in a lie table"),
            )
            .into());
        }
        products.push((line_no, i, j, rhs));
    }

    let dim = header
        .dim
        .ok_or_else(|| ParseError::new(1, 1, "missing 'dim <n>' declaration"))?
        .0;
    let field = header.field.unwrap_or(FieldSpec::Rationals);
    let kind = header.kind.unwrap_or(Kind::General);
    let completion = header.completion.unwrap_or(match kind {
        Kind::Lie => Completion::Skew,
        Kind::General => Completion::None,
    });
    let name = header.name.unwrap_or_else(|| "unnamed".to_string());

    let mut builder = TableBuilder::new(name, dim, field);
    for (line_no, i, j, rhs) in products {
        let rhs_vec: Vec<(usize, Scalar)> = rhs.into_iter().map(|(k, c)| (k - 1, c)).collect();
        builder
            .product(i - 1, j - 1, rhs_vec)
            .map_err(|e| locate(e, line_no))?;
    }
    builder.complete(completion).map_err(|e| locate(e, 1))?;
    builder.build()
}

fn locate(e: Error, line_no: usize) -> Error {
    match e {
        Error::Parse(p) => Error::Parse(p),
        other => ParseError::new(line_no, 1, other.to_string()).into(),
    }
}

fn parse_header_line(line: &str, line_no: usize, header: &mut Header) -> Result<()> {
    let mut words = line.split_whitespace();
    let key = words.next().expect("line is nonempty");
    let dup = |taken: bool| -> Result<()> {
        if taken {
            Err(ParseError::new(line_no, 1, format!("duplicate {key:?} line")).into())
        } else {
            Ok(())
        }
    };
    match key {
        "algebra" => {
            dup(header.name.is_some())?;
            let name = words.next().ok_or_else(|| {
                ParseError::new(line_no, 1, "expected a name after 'algebra'")
            })?;
            header.name = Some(name.to_string());
        }
        "dim" => {
            dup(header.dim.is_some())?;
            let value = words
                .next()
                .and_then(|w| w.parse::<usize>().ok())
                .filter(|&n| n > 0)
                .ok_or_else(|| {
                    ParseError::new(line_no, 1, "expected a positive integer after 'dim'")
                })?;
            header.dim = Some((value, line_no));
        }
        "field" => {
            dup(header.field.is_some())?;
            let word = words
                .next()
                .ok_or_else(|| ParseError::new(line_no, 1, "expected Q or F<p> after 'field'"))?;
            let spec = FieldSpec::parse(word)
                .map_err(|e| ParseError::new(line_no, 1, e.to_string()))?;
            header.field = Some(spec);
        }
        "lie" => {
            dup(header.kind.is_some())?;
            header.kind = Some(Kind::Lie);
        }
        "general" => {
            dup(header.kind.is_some())?;
            header.kind = Some(Kind::General);
        }
        "complete" => {
            dup(header.completion.is_some())?;
            let word = words.next().ok_or_else(|| {
                ParseError::new(line_no, 1, "expected skew, symmetric or none after 'complete'")
            })?;
            let completion = Completion::parse(word).ok_or_else(|| {
                ParseError::new(line_no, 1, format!("unknown completion {word:?}"))
            })?;
            header.completion = Some(completion);
        }
        other => {
            return Err(
                ParseError::new(line_no, 1, format!("unknown header keyword {other:?}")).into(),
            )
        }
    }
    if let Some(extra) = words.next() {
        return Err(
            ParseError::new(line_no, 1, format!("unexpected trailing token {extra:?}")).into(),
        );
    }
    Ok(())
}

fn check_index(
    cur: &Cursor<'_>,
    idx: usize,
    dim: usize,
) -> std::result::Result<(), ParseError> {
    if idx == 0 || idx > dim {
        Err(cur.err(format!("basis index e{idx} out of range for dim {dim}")))
    } else {
        Ok(())
    }
}

fn parse_product_line(
    line: &str,
    line_no: usize,
    dim: usize,
    field: FieldSpec,
) -> Result<(usize, usize, BTreeMap<usize, Scalar>)> {
    let mut cur = Cursor::new(line, line_no);
    let (i, j) = if cur.eat('[') {
        let i = cur.basis_index()?;
        cur.expect(',')?;
        let j = cur.basis_index()?;
        cur.expect(']')?;
        (i, j)
    } else {
        let i = cur.basis_index()?;
        cur.expect('*')?;
        let j = cur.basis_index()?;
        (i, j)
    };
    check_index(&cur, i, dim)?;
    check_index(&cur, j, dim)?;
    cur.expect('=')?;

    let mut rhs: BTreeMap<usize, Scalar> = BTreeMap::new();
    let mut first = true;
    loop {
        let negative = if first {
            first = false;
            cur.eat('-')
        } else if cur.at_end() {
            break;
        } else if cur.eat('+') {
            false
        } else if cur.eat('-') {
            true
        } else {
            return Err(cur.err("expected '+', '-' or end of line").into());
        };
        // term: 0 | coeff '*' eK | eK | coeff eK (the '*' form is canonical)
        let term = match cur.peek() {
            Some('e') => {
                let k = cur.basis_index()?;
                check_index(&cur, k, dim)?;
                (k, Scalar::one(field))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = cur.number()?;
                if num == "0" && cur.at_end() && rhs.is_empty() {
                    // explicit zero right-hand side
                    break;
                }
                let col = cur.pos + 1;
                let coeff = Scalar::parse(&num, field).map_err(|e| {
                    ParseError::new(line_no, col, e.to_string())
                })?;
                if !cur.eat('*') && cur.peek() != Some('e') {
                    return Err(cur.err("expected '*e<k>' after the coefficient").into());
                }
                let k = cur.basis_index()?;
                check_index(&cur, k, dim)?;
                (k, coeff)
            }
            _ => return Err(cur.err("expected a term like 2*e4 or e4").into()),
        };
        let (k, mut coeff) = term;
        if negative {
            coeff = -&coeff;
        }
        let entry = rhs.entry(k).or_insert_with(|| Scalar::zero(field));
        *entry = &*entry + &coeff;
    }
    rhs.retain(|_, c| !c.is_zero());
    Ok((i, j, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::matrix::basis_vector;

    #[test]
    fn parses_the_twelve_dimensional_f2_table() {
        let src = "\
algebra s12
dim 12
field F2
lie
complete skew
[e2,e1] = e8
[e1,e6] = e8
[e1,e3] = e9
[e1,e5] = e9
[e5,e6] = e9
[e1,e4] = e10
[e2,e3] = e10
[e1,e7] = e10
[e5,e7] = e10
[e4,e3] = e11
[e7,e6] = e11
[e2,e7] = e12
[e3,e6] = e12
";
        let parsed = parse_text(src).unwrap();
        assert!(parsed.same_structure(&catalog::z2_algebra()));
    }

    #[test]
    fn parses_coefficients_and_signs() {
        let src = "\
algebra t
dim 5
field Q
general
complete none
e1*e2 = 2*e4 - 1/3*e5
e2*e2 = e3 + e3   # doubled term folds
";
        let t = parse_text(src).unwrap();
        let q = FieldSpec::Rationals;
        let mut expected = crate::matrix::zero_vector(5, q);
        expected[3] = Scalar::from_int(2, q);
        expected[4] = Scalar::from_fraction(-1, 3, q).unwrap();
        assert_eq!(t.bracket_basis(0, 1), expected);
        assert_eq!(
            t.bracket_basis(1, 1),
            crate::matrix::vec_scale(&Scalar::from_int(2, q), &basis_vector(5, 2, q))
        );
    }

    #[test]
    fn rejects_alternating_violation_under_lie() {
        let src = "dim 3\nlie\n[e1,e1] = e2\n";
        let err = parse_text(src).unwrap_err();
        assert!(err.to_string().contains("must be zero"), "{err}");
    }

    #[test]
    fn empty_body_gives_an_abelian_table() {
        let t = parse_text("algebra a3\ndim 3\nfield Q\n").unwrap();
        assert_eq!(t.dim(), 3);
        assert!(t.products().is_empty());
    }

    #[test]
    fn errors_carry_locations() {
        let err = parse_text("dim 3\n[e1,e9] = e2\n").unwrap_err();
        let text = err.to_string();
        assert!(text.starts_with("line 2"), "{text}");

        let err = parse_text("dim 3\n[e1,e2] = e3\n[e1,e2] = e3\n").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");

        let err = parse_text("dim 3\nfield F2\n[e1,e2] = 1/2*e3\n").unwrap_err();
        assert!(err.to_string().contains("denominator"), "{err}");

        let err = parse_text("dim 3\n[e1,e2] = e3\ndim 4\n").unwrap_err();
        assert!(err.to_string().contains("precede"), "{err}");
    }

    #[test]
    fn zero_right_hand_side_is_allowed() {
        let t = parse_text("dim 3\n[e1,e2] = 0\n").unwrap();
        assert!(t.products().is_empty());
    }

    #[test]
    fn arbitrary_junk_is_an_error_not_a_panic() {
        for junk in ["??", "dim", "dim -3", "[e1", "dim 2\n[e1,e2] = +", "field X9"] {
            assert!(parse_text(junk).is_err(), "{junk:?}");
        }
    }
}
