//! Form expression grammar: `a*[x,y]` for scaled binary blocks,
//! `<c1,c2,...>` for diagonals, `+` for orthogonal sum,
//! e.g. `t*[1,x] + <1,u,v>`.

use super::{FormError, QuadForm};
use crate::field::{parse_element, Tower};

pub fn parse_form(tower: &Tower, input: &str) -> Result<QuadForm, FormError> {
    let mut blocks = Vec::new();
    let mut diag = Vec::new();
    for summand in split_top_level(input) {
        let summand = summand.trim();
        if summand.is_empty() {
            return Err(FormError::Parse { pos: 0, msg: "empty summand".to_string() });
        }
        let (scale_str, body) = split_scale(summand)?;
        let scale = match scale_str {
            None => tower.one(),
            Some(s) => parse_element(tower, s)?,
        };
        if body.starts_with('[') {
            let inner = body
                .strip_prefix('[')
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| FormError::Parse { pos: 0, msg: "unclosed block".to_string() })?;
            let parts = split_commas(inner);
            if parts.len() != 2 {
                return Err(FormError::Parse {
                    pos: 0,
                    msg: "binary block needs two entries".to_string(),
                });
            }
            let a = parse_element(tower, parts[0])?;
            let b = parse_element(tower, parts[1])?;
            // s·[a,b] ≅ [s·a, b/s]
            if scale.is_zero() {
                return Err(FormError::Parse { pos: 0, msg: "zero block scale".to_string() });
            }
            blocks.push((&a * &scale, b.div_checked(&scale)?));
        } else if body.starts_with('<') {
            let inner = body
                .strip_prefix('<')
                .and_then(|b| b.strip_suffix('>'))
                .ok_or_else(|| FormError::Parse { pos: 0, msg: "unclosed diagonal".to_string() })?;
            if !inner.trim().is_empty() {
                for part in split_commas(inner) {
                    let c = parse_element(tower, part)?;
                    diag.push(&c * &scale);
                }
            }
        } else {
            return Err(FormError::Parse {
                pos: 0,
                msg: format!("expected block or diagonal in {summand:?}"),
            });
        }
    }
    Ok(QuadForm::new(tower, blocks, diag))
}

/// Split on '+' at bracket depth 0.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '<' => depth += 1,
            ')' | ']' | '>' => depth -= 1,
            '+' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn split_commas(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '<' => depth += 1,
            ')' | ']' | '>' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Split `scale*[...]` / `scale*<...>` into the scale prefix and the body.
fn split_scale(s: &str) -> Result<(Option<&str>, &str), FormError> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '[' | '<' if depth == 0 => {
                if i == 0 {
                    return Ok((None, s));
                }
                let prefix = s[..i].trim_end();
                let prefix = prefix.strip_suffix('*').ok_or_else(|| FormError::Parse {
                    pos: i,
                    msg: "scale must be joined with '*'".to_string(),
                })?;
                return Ok((Some(prefix), s[i..].trim_start()));
            }
            _ => {}
        }
    }
    Err(FormError::Parse { pos: 0, msg: format!("no block or diagonal in {s:?}") })
}

pub fn format_form(q: &QuadForm) -> String {
    let f = q.fold_scale();
    let mut parts = Vec::new();
    for (a, b) in &f.blocks {
        parts.push(format!("[{a},{b}]"));
    }
    if !f.diag.is_empty() {
        let cs: Vec<String> = f.diag.iter().map(|c| c.to_string()).collect();
        parts.push(format!("<{}>", cs.join(",")));
    }
    if parts.is_empty() {
        "<>".to_string()
    } else {
        parts.join(" + ")
    }
}
