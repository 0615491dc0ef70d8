//! Set text format shared by the CLI and file inputs.
//!
//! ```text
//! N:5 {0,1,3}            subset of Z/5Z
//! Z {0,1,3}              integer set
//! Zd 2 {(0,1),(2,3)}     subset of Z^2
//! Za {1+2a^1}            subset of Z[a]
//! ```

use super::poly::{PolyInt, PolySet};
use super::vecset::VecSet;
use super::{IntSet, ZnError, ZnSet};

#[derive(Clone, Debug, PartialEq)]
pub enum SetLiteral {
    Mod(ZnSet),
    Int(IntSet),
    Vecs(VecSet),
    Poly(PolySet),
}

impl SetLiteral {
    pub fn emit(&self) -> String {
        match self {
            SetLiteral::Mod(s) => format!(
                "N:{} {{{}}}",
                s.modulus(),
                join(s.iter().map(|x| x.to_string()))
            ),
            SetLiteral::Int(s) => format!("Z {{{}}}", join(s.iter().map(|x| x.to_string()))),
            SetLiteral::Vecs(s) => format!(
                "Zd {} {{{}}}",
                s.dim(),
                join(s.iter().map(|v| format!(
                    "({})",
                    join(v.iter().map(|x| x.to_string()))
                )))
            ),
            SetLiteral::Poly(s) => {
                format!("Za {{{}}}", join(s.iter().map(|p| p.to_string())))
            }
        }
    }
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(",")
}

fn parse_err(msg: impl Into<String>) -> ZnError {
    ZnError::Parse(msg.into())
}

fn brace_body(s: &str) -> Result<&str, ZnError> {
    let open = s.find('{').ok_or_else(|| parse_err("missing '{'"))?;
    let close = s.rfind('}').ok_or_else(|| parse_err("missing '}'"))?;
    if close < open {
        return Err(parse_err("mismatched braces"));
    }
    Ok(&s[open + 1..close])
}

/// Split a brace body on commas that are not inside parentheses.
fn split_items(body: &str) -> Vec<String> {
    let mut items = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in body.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if depth == 0 => {
                items.push(cur.trim().to_string());
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        items.push(cur.trim().to_string());
    }
    items
}

pub fn parse_poly(s: &str) -> Result<PolyInt, ZnError> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(parse_err("empty polynomial"));
    }
    // Split into signed terms.
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push(cur.clone());
            cur.clear();
        }
        if ch != '+' {
            cur.push(ch);
        }
    }
    terms.push(cur);
    let mut coeffs: Vec<i64> = Vec::new();
    for t in terms {
        if t.is_empty() {
            return Err(parse_err("empty term"));
        }
        let (coeff_str, exp) = match t.find('a') {
            None => (t.as_str(), 0usize),
            Some(pos) => {
                let exp = match t[pos + 1..].strip_prefix('^') {
                    Some(e) => e
                        .parse::<usize>()
                        .map_err(|_| parse_err(format!("bad exponent in '{t}'")))?,
                    None if t[pos + 1..].is_empty() => 1,
                    None => return Err(parse_err(format!("bad term '{t}'"))),
                };
                (&t[..pos], exp)
            }
        };
        let c: i64 = match coeff_str {
            "" => 1,
            "-" => -1,
            other => other
                .parse()
                .map_err(|_| parse_err(format!("bad coefficient '{other}'")))?,
        };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, 0);
        }
        coeffs[exp] += c;
    }
    Ok(PolyInt::from_coeffs(coeffs))
}

pub fn parse(s: &str) -> Result<SetLiteral, ZnError> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("N:") {
        let head = rest
            .split_whitespace()
            .next()
            .ok_or_else(|| parse_err("missing modulus"))?;
        let n: u64 = head
            .parse()
            .map_err(|_| parse_err(format!("bad modulus '{head}'")))?;
        if n == 0 {
            return Err(parse_err("modulus must be positive"));
        }
        let body = brace_body(rest)?;
        let mut elems = Vec::new();
        for item in split_items(body) {
            let v: i64 = item
                .parse()
                .map_err(|_| parse_err(format!("bad residue '{item}'")))?;
            elems.push(v);
        }
        return Ok(SetLiteral::Mod(ZnSet::from_ints(n, elems)));
    }
    if let Some(rest) = s.strip_prefix("Zd") {
        let head = rest
            .split_whitespace()
            .next()
            .ok_or_else(|| parse_err("missing dimension"))?;
        let d: usize = head
            .parse()
            .map_err(|_| parse_err(format!("bad dimension '{head}'")))?;
        let body = brace_body(rest)?;
        let mut elems = Vec::new();
        for item in split_items(body) {
            let inner = item
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| parse_err(format!("bad vector '{item}'")))?;
            let coords: Result<Vec<i64>, _> =
                inner.split(',').map(|c| c.trim().parse::<i64>()).collect();
            elems.push(coords.map_err(|_| parse_err(format!("bad vector '{item}'")))?);
        }
        return Ok(SetLiteral::Vecs(VecSet::new(d, elems)?));
    }
    if let Some(rest) = s.strip_prefix("Za") {
        let body = brace_body(rest)?;
        let mut elems = Vec::new();
        for item in split_items(body) {
            elems.push(parse_poly(&item)?);
        }
        return Ok(SetLiteral::Poly(PolySet::new(elems)));
    }
    if let Some(rest) = s.strip_prefix('Z') {
        let body = brace_body(rest)?;
        let mut elems = Vec::new();
        for item in split_items(body) {
            let v: i64 = item
                .parse()
                .map_err(|_| parse_err(format!("bad integer '{item}'")))?;
            elems.push(v);
        }
        return Ok(SetLiteral::Int(IntSet::new(elems)));
    }
    Err(parse_err(format!("unrecognized set literal '{s}'")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_four_kinds() {
        match parse("N:5 {0,1,3}").unwrap() {
            SetLiteral::Mod(s) => {
                assert_eq!(s.modulus(), 5);
                assert_eq!(s.elems(), vec![0, 1, 3]);
            }
            _ => panic!("wrong kind"),
        }
        match parse("Z {0,1,3}").unwrap() {
            SetLiteral::Int(s) => assert_eq!(s.as_slice(), &[0, 1, 3]),
            _ => panic!("wrong kind"),
        }
        match parse("Zd 2 {(0,1),(2,3)}").unwrap() {
            SetLiteral::Vecs(s) => {
                assert_eq!(s.dim(), 2);
                assert!(s.contains(&[2, 3]));
            }
            _ => panic!("wrong kind"),
        }
        match parse("Za {1+2a^1}").unwrap() {
            SetLiteral::Poly(s) => {
                assert!(s.contains(&PolyInt::from_coeffs(vec![1, 2])));
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn emit_round_trips() {
        for text in [
            "N:12 {0,1,3,9,11}",
            "Z {-3,0,7}",
            "Zd 2 {(0,1),(2,3)}",
            "Za {0,-a^2,1+2a^1}",
        ] {
            let lit = parse(text).unwrap();
            assert_eq!(lit.emit(), text);
        }
    }

    #[test]
    fn poly_terms_accumulate() {
        let p = parse_poly("1+a+a^1-2").unwrap();
        assert_eq!(p.coeffs(), &[-1, 2]);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse("N:0 {1}").is_err());
        assert!(parse("Q {1}").is_err());
        assert!(parse("N:5 1,2").is_err());
        assert!(parse("Zd 2 {(1)}").is_err());
    }
}
