//! Grammar for field specs and element expressions.
//!
//! Field spec: `F2^k(v1,...,vn)[sep:expr][insep:expr]...` with further
//! `(vars)` groups allowed after extensions (towers produced by function
//! field constructions print that way). Elements are `+ * / ( ) ^`
//! expressions over variables and the constants `0`, `1`, `g`.

use super::{El, FieldError, Tower};
use crate::gf::Gf;

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer { s: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        self.skip_ws();
        let c = self.s.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expect(&mut self, c: u8) -> Result<(), FieldError> {
        match self.bump() {
            Some(x) if x == c => Ok(()),
            _ => Err(self.err(format!("expected '{}'", c as char))),
        }
    }

    fn err(&self, msg: String) -> FieldError {
        FieldError::Parse { pos: self.pos, msg }
    }

    fn ident(&mut self) -> Result<String, FieldError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len()
            && (self.s[self.pos].is_ascii_lowercase()
                || self.s[self.pos].is_ascii_digit() && self.pos > start
                || self.s[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected identifier".to_string()));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).to_string())
    }

    fn integer(&mut self) -> Result<i64, FieldError> {
        self.skip_ws();
        let mut neg = false;
        if self.peek() == Some(b'-') {
            neg = true;
            self.bump();
        }
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected integer".to_string()));
        }
        let v: i64 = std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer overflow".to_string()))?;
        Ok(if neg { -v } else { v })
    }

    fn done(&mut self) -> bool {
        self.peek().is_none()
    }
}

pub fn parse_tower(input: &str) -> Result<Tower, FieldError> {
    let mut lx = Lexer::new(input);
    lx.skip_ws();
    if !input.trim_start().starts_with("F2") {
        return Err(lx.err("field spec must start with F2".to_string()));
    }
    lx.pos += input.len() - input.trim_start().len() + 2;
    let k = if lx.peek() == Some(b'^') {
        lx.bump();
        let k = lx.integer()?;
        if !(1..=16).contains(&k) {
            return Err(lx.err(format!("unsupported base degree {k}")));
        }
        k as u8
    } else {
        1
    };
    let mut tower = Tower::base(k)?;
    loop {
        match lx.peek() {
            Some(b'(') => {
                lx.bump();
                loop {
                    let name = lx.ident()?;
                    tower = tower.with_rational(&name)?;
                    match lx.bump() {
                        Some(b',') => continue,
                        Some(b')') => break,
                        _ => return Err(lx.err("expected ',' or ')'".to_string())),
                    }
                }
            }
            Some(b'[') => {
                lx.bump();
                let kind = lx.ident()?;
                lx.expect(b':')?;
                // the extension expression runs to the matching ']'
                let start = lx.pos;
                let mut depth = 0;
                while lx.pos < lx.s.len() {
                    match lx.s[lx.pos] {
                        b'(' => depth += 1,
                        b')' => depth -= 1,
                        b']' if depth == 0 => break,
                        _ => {}
                    }
                    lx.pos += 1;
                }
                let expr = std::str::from_utf8(&lx.s[start..lx.pos]).unwrap().to_string();
                lx.expect(b']')?;
                let c = parse_element(&tower, &expr)?;
                tower = match kind.as_str() {
                    "sep" => tower.with_sep(&c)?,
                    "insep" => tower.with_insep(&c)?,
                    other => return Err(lx.err(format!("unknown extension kind {other:?}"))),
                };
            }
            None => break,
            Some(c) => return Err(lx.err(format!("unexpected character '{}'", c as char))),
        }
    }
    Ok(tower)
}

pub fn parse_element(tower: &Tower, input: &str) -> Result<El, FieldError> {
    let mut lx = Lexer::new(input);
    let e = expr(&mut lx, tower)?;
    if !lx.done() {
        return Err(lx.err("trailing input after expression".to_string()));
    }
    Ok(e)
}

fn expr(lx: &mut Lexer, tower: &Tower) -> Result<El, FieldError> {
    let mut acc = term(lx, tower)?;
    while lx.peek() == Some(b'+') {
        lx.bump();
        let t = term(lx, tower)?;
        acc = acc.add_checked(&t)?;
    }
    Ok(acc)
}

fn term(lx: &mut Lexer, tower: &Tower) -> Result<El, FieldError> {
    let mut acc = factor(lx, tower)?;
    loop {
        match lx.peek() {
            Some(b'*') => {
                lx.bump();
                let f = factor(lx, tower)?;
                acc = acc.mul_checked(&f)?;
            }
            Some(b'/') => {
                lx.bump();
                let f = factor(lx, tower)?;
                acc = acc.div_checked(&f)?;
            }
            _ => return Ok(acc),
        }
    }
}

fn factor(lx: &mut Lexer, tower: &Tower) -> Result<El, FieldError> {
    let base = atom(lx, tower)?;
    if lx.peek() == Some(b'^') {
        lx.bump();
        let e = lx.integer()?;
        return base.pow(e);
    }
    Ok(base)
}

fn atom(lx: &mut Lexer, tower: &Tower) -> Result<El, FieldError> {
    match lx.peek() {
        Some(b'(') => {
            lx.bump();
            let e = expr(lx, tower)?;
            lx.expect(b')')?;
            Ok(e)
        }
        Some(c) if c.is_ascii_digit() => {
            let n = lx.integer()?;
            if n < 0 {
                return Err(lx.err("negative constant".to_string()));
            }
            Ok(tower.int(n as u64))
        }
        Some(c) if c.is_ascii_lowercase() => {
            let name = lx.ident()?;
            if name == "g" {
                return Ok(tower.constant(Gf::generator(tower.k())));
            }
            tower
                .var_named(&name)
                .ok_or_else(|| lx.err(format!("unknown variable {name:?}")))
        }
        _ => Err(lx.err("expected atom".to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tower_roundtrip() {
        for s in ["F2(t)", "F2(t,u,v)", "F2^4(x)", "F2(t)[insep:t]", "F2(t,u)[insep:t*u]"] {
            let t = parse_tower(s).unwrap();
            assert_eq!(t.to_string(), *s);
            let t2 = parse_tower(&t.to_string()).unwrap();
            assert_eq!(t, t2);
        }
    }

    #[test]
    fn spec_anchored_towers() {
        // F2(t): smallest imperfect field
        assert!(parse_tower("F2(t)").is_ok());
        // F2(t)[insep:t] accepted since t is a non-square
        assert!(parse_tower("F2(t)[insep:t]").is_ok());
        // [insep:t^2] rejected: square
        assert!(matches!(
            parse_tower("F2(t)[insep:t^2]"),
            Err(FieldError::IllegalLayer(_))
        ));
        // Base(1)+SepQuad(1): accepted since ℘(F2)={0} and 1 ∉ ℘(F2)
        assert!(parse_tower("F2[sep:1]").is_ok());
        // sep:0 rejected: 0 ∈ ℘
        assert!(matches!(parse_tower("F2[sep:0]"), Err(FieldError::IllegalLayer(_))));
        // duplicate variable
        assert!(matches!(
            parse_tower("F2(t,t)"),
            Err(FieldError::DuplicateVariable(_))
        ));
    }

    #[test]
    fn element_roundtrip() {
        let t = parse_tower("F2(t,u)").unwrap();
        for s in ["t", "t+u", "(t+u)/(t*u+1)", "t^3+u*t", "1", "0"] {
            let e = parse_element(&t, s).unwrap();
            let e2 = parse_element(&t, &e.to_string()).unwrap();
            assert_eq!(e, e2, "roundtrip failed for {s}");
        }
    }

    #[test]
    fn element_arithmetic_examples() {
        let t = parse_tower("F2(t)").unwrap();
        // (t+1)+(t+1) = 0 in characteristic 2
        let e = parse_element(&t, "(t+1)+(t+1)").unwrap();
        assert!(e.is_zero());
        // t / t = 1
        let e = parse_element(&t, "t/t").unwrap();
        assert!(e.is_one());
    }
}
