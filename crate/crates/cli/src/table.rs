//! Text format for multiplication tables.
//!
//! ```text
//! # comment
//! dim 3
//! field Q            # or F<p> for an odd prime p
//! basis x y z        # optional, default e1..en
//! anticommutative    # optional: unlisted mirrors become e_j e_i = -(e_i e_j)
//! x y = z
//! x z = 1/2*x - 3*y
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use malcev_core::{Algebra, Element, FieldSpec};
use num_bigint::BigInt;
use num_rational::BigRational;

/// A parse error with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct TableError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    Slash,
    Star,
    Plus,
    Minus,
    Equals,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> TableError {
    TableError { line, column, message: message.into() }
}

fn lex(text: &str, line: usize) -> Result<Vec<Token>, TableError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '/' => Some(Tok::Slash),
            '*' => Some(Tok::Star),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '=' => Some(Tok::Equals),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, column });
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Token { tok: Tok::Number(chars[start..i].iter().collect()), column });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), column });
        } else {
            return Err(err(line, column, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// Parses a field token: `Q` or `F<p>` with `p` an odd prime.
pub fn parse_field(token: &str) -> Result<FieldSpec, String> {
    if token == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    let digits = token.strip_prefix('F').ok_or_else(|| format!("unknown field `{token}`, expected Q or F<p>"))?;
    let p: u64 = digits.parse().map_err(|_| format!("unknown field `{token}`, expected Q or F<p>"))?;
    FieldSpec::prime(p).map_err(|e| format!("field `{token}`: {e}"))
}

/// Linear combination of labels over `field`, e.g. `e1 - 2*e3`, `1/2*x`, `0`.
fn parse_combination_tokens(
    toks: &[Token],
    labels: &[String],
    field: FieldSpec,
    line: usize,
    end_column: usize,
) -> Result<Element, TableError> {
    let n = labels.len();
    let mut coords = vec![field.zero(); n];
    let mut i = 0;
    let at = |i: usize| toks.get(i).map_or(end_column, |t| t.column);
    if toks.is_empty() {
        return Err(err(line, end_column, "expected a linear combination"));
    }
    let mut first = true;
    while i < toks.len() {
        let mut negative = false;
        match &toks[i].tok {
            Tok::Plus | Tok::Minus => {
                negative = toks[i].tok == Tok::Minus;
                i += 1;
            }
            _ if !first => return Err(err(line, at(i), "expected `+` or `-`")),
            _ => {}
        }
        first = false;
        let mut coeff = BigRational::from_integer(BigInt::from(1));
        let mut has_coeff = false;
        if let Some(Token { tok: Tok::Number(num), column }) = toks.get(i) {
            let numer: BigInt = num.parse().map_err(|_| err(line, *column, "bad integer"))?;
            i += 1;
            let mut q = BigRational::from_integer(numer);
            if matches!(toks.get(i), Some(Token { tok: Tok::Slash, .. })) {
                i += 1;
                let Some(Token { tok: Tok::Number(den), column }) = toks.get(i) else {
                    return Err(err(line, at(i), "expected denominator"));
                };
                let den: BigInt = den.parse().map_err(|_| err(line, *column, "bad integer"))?;
                if den == BigInt::from(0) {
                    return Err(err(line, *column, "zero denominator"));
                }
                q /= BigRational::from_integer(den);
                i += 1;
            }
            coeff = q;
            has_coeff = true;
            match toks.get(i) {
                Some(Token { tok: Tok::Star, .. }) => i += 1,
                _ => {
                    if coeff == BigRational::from_integer(BigInt::from(0)) {
                        continue;
                    }
                    return Err(err(line, at(i), "expected `*` after coefficient"));
                }
            }
        }
        let Some(Token { tok: Tok::Ident(label), column }) = toks.get(i) else {
            let what = if has_coeff { "expected a basis label after `*`" } else { "expected a coefficient or basis label" };
            return Err(err(line, at(i), what));
        };
        let k = labels.iter().position(|l| l == label).ok_or_else(|| err(line, *column, format!("unknown label `{label}`")))?;
        i += 1;
        if negative {
            coeff = -coeff;
        }
        let c = field.from_rational(&coeff).map_err(|e| err(line, toks[i - 1].column, e.to_string()))?;
        coords[k] = &coords[k] + &c;
    }
    Ok(Element::new(coords))
}

/// Parses a single combination such as `e1+e3` against `labels`.
pub fn parse_combination(text: &str, labels: &[String], field: FieldSpec) -> Result<Element, TableError> {
    let toks = lex(text, 1)?;
    parse_combination_tokens(&toks, labels, field, 1, text.chars().count() + 1)
}

/// Parses a table file into an algebra.
pub fn parse_table(text: &str) -> Result<Algebra, TableError> {
    let mut dim: Option<usize> = None;
    let mut field: Option<FieldSpec> = None;
    let mut labels: Option<Vec<String>> = None;
    let mut anticommutative = false;
    let mut products: BTreeMap<(usize, usize), Element> = BTreeMap::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let toks = lex(raw, line)?;
        let Some(head) = toks.first() else { continue };
        let end_column = raw.find('#').unwrap_or(raw.len()) + 1;
        let is_product = toks.get(2).is_some_and(|t| t.tok == Tok::Equals);
        if !is_product {
            let Tok::Ident(word) = &head.tok else {
                return Err(err(line, head.column, "expected a header keyword or a product line"));
            };
            if !products.is_empty() {
                return Err(err(line, head.column, "header lines must precede product lines"));
            }
            match word.as_str() {
                "dim" => {
                    if dim.is_some() {
                        return Err(err(line, head.column, "duplicate `dim`"));
                    }
                    let Some(Token { tok: Tok::Number(n), column }) = toks.get(1) else {
                        return Err(err(line, toks.get(1).map_or(end_column, |t| t.column), "expected dimension"));
                    };
                    let n: usize = n.parse().map_err(|_| err(line, *column, "bad dimension"))?;
                    if n == 0 {
                        return Err(err(line, *column, "dimension must be at least 1"));
                    }
                    if toks.len() > 2 {
                        return Err(err(line, toks[2].column, "unexpected token"));
                    }
                    dim = Some(n);
                }
                "field" => {
                    if field.is_some() {
                        return Err(err(line, head.column, "duplicate `field`"));
                    }
                    let Some(Token { tok: Tok::Ident(f), column }) = toks.get(1) else {
                        return Err(err(line, toks.get(1).map_or(end_column, |t| t.column), "expected Q or F<p>"));
                    };
                    if toks.len() > 2 {
                        return Err(err(line, toks[2].column, "unexpected token"));
                    }
                    field = Some(parse_field(f).map_err(|m| err(line, *column, m))?);
                }
                "basis" => {
                    if labels.is_some() {
                        return Err(err(line, head.column, "duplicate `basis`"));
                    }
                    let mut ls = Vec::new();
                    for t in &toks[1..] {
                        let Tok::Ident(l) = &t.tok else {
                            return Err(err(line, t.column, "expected a basis label"));
                        };
                        if ls.contains(l) {
                            return Err(err(line, t.column, format!("duplicate label `{l}`")));
                        }
                        ls.push(l.clone());
                    }
                    labels = Some(ls);
                }
                "anticommutative" => {
                    if toks.len() > 1 {
                        return Err(err(line, toks[1].column, "unexpected token"));
                    }
                    anticommutative = true;
                }
                other => return Err(err(line, head.column, format!("unknown keyword `{other}`"))),
            }
            continue;
        }

        let n = dim.ok_or_else(|| err(line, head.column, "`dim` must come before products"))?;
        let f = field.ok_or_else(|| err(line, head.column, "`field` must come before products"))?;
        let ls = labels.get_or_insert_with(|| Algebra::default_labels(n));
        if ls.len() != n {
            return Err(err(line, head.column, format!("`basis` lists {} labels for dimension {n}", ls.len())));
        }
        let index = |t: &Token| -> Result<usize, TableError> {
            match &t.tok {
                Tok::Ident(l) => ls.iter().position(|x| x == l).ok_or_else(|| err(line, t.column, format!("unknown label `{l}`"))),
                _ => Err(err(line, t.column, "expected a basis label")),
            }
        };
        let i = index(&toks[0])?;
        let j = index(&toks[1])?;
        let value = parse_combination_tokens(&toks[3..], ls, f, line, end_column)?;
        if products.insert((i, j), value).is_some() {
            return Err(err(line, head.column, format!("duplicate product `{} {}`", ls[i], ls[j])));
        }
    }

    let n = dim.ok_or_else(|| err(last_line.max(1), 1, "missing `dim`"))?;
    let f = field.ok_or_else(|| err(last_line.max(1), 1, "missing `field`"))?;
    let labels = labels.unwrap_or_else(|| Algebra::default_labels(n));
    if labels.len() != n {
        return Err(err(last_line.max(1), 1, format!("`basis` lists {} labels for dimension {n}", labels.len())));
    }
    if anticommutative {
        let listed: Vec<((usize, usize), Element)> = products.iter().map(|(k, v)| (*k, v.clone())).collect();
        for ((i, j), v) in listed {
            products.entry((j, i)).or_insert_with(|| v.neg());
        }
    }
    Algebra::from_products(f, labels, products.into_iter().map(|((i, j), v)| (i, j, v)))
        .map_err(|e| err(last_line.max(1), 1, e.to_string()))
}

/// Writes `a` in the table format with every nonzero product listed explicitly.
pub fn print_table(a: &Algebra) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dim {}", a.dim());
    let _ = writeln!(out, "field {}", a.field());
    let _ = writeln!(out, "basis {}", a.labels().join(" "));
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let v = a.basis_product(i, j);
            if !v.is_zero() {
                let _ = writeln!(out, "{} {} = {}", a.labels()[i], a.labels()[j], v.display_with(a.labels()));
            }
        }
    }
    out
}
