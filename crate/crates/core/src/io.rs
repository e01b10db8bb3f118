//! Text formats for S-rings, permutation groups, matrices and reports.

use std::fmt::Write as _;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::gfp::{AutMatrix, GroupContext};
use crate::perm::{PermGroup, Permutation};
use crate::sring::SRing;

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Non-blank lines that are not `#` comments, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn header_field<'a>(line: usize, token: Option<&'a str>, key: &str) -> Result<&'a str> {
    let token = token.ok_or_else(|| perr(line, format!("missing `{key}=`")))?;
    token
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| perr(line, format!("expected `{key}=<value>`, found `{token}`")))
}

fn number<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token.parse().map_err(|_| perr(line, format!("{what} `{token}` is not a number")))
}

pub fn serialize_sring(a: &SRing) -> String {
    let mut out = format!("p={} n={}\n", a.ctx().p(), a.ctx().n());
    for c in a.classes() {
        let line: Vec<String> = c.iter().map(|x| x.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Header and classes, without checking the axioms.
pub fn parse_partition(text: &str) -> Result<(GroupContext, Vec<Vec<usize>>)> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    let mut tokens = header.split_whitespace();
    let p: u32 = number(hl, header_field(hl, tokens.next(), "p")?, "p")?;
    let n: usize = number(hl, header_field(hl, tokens.next(), "n")?, "n")?;
    if let Some(extra) = tokens.next() {
        return Err(perr(hl, format!("unexpected `{extra}` in header")));
    }
    let ctx = GroupContext::new(p, n).map_err(|e| perr(hl, e.to_string()))?;
    let mut classes = Vec::new();
    for (ln, line) in lines {
        let mut class = Vec::new();
        for tok in line.split_whitespace() {
            let x: usize = number(ln, tok, "element")?;
            if x >= ctx.order() {
                return Err(perr(ln, format!("element {x} is outside [0, {})", ctx.order())));
            }
            class.push(x);
        }
        classes.push(class);
    }
    Ok((ctx, classes))
}

pub fn parse_sring(text: &str) -> Result<SRing> {
    let (ctx, classes) = parse_partition(text)?;
    SRing::new(&ctx, classes)
}

pub fn serialize_perm_group(g: &PermGroup) -> String {
    let mut out = format!("deg={}\n", g.degree());
    for s in g.generators() {
        let _ = writeln!(out, "{s}");
    }
    out
}

pub fn parse_perm_group(text: &str) -> Result<PermGroup> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    let degree: usize = number(hl, header_field(hl, Some(header), "deg")?, "degree")?;
    let mut gens = Vec::new();
    for (ln, line) in lines {
        let images: Vec<usize> = line.split_whitespace().map(|t| number(ln, t, "image")).collect::<Result<_>>()?;
        if images.len() != degree {
            return Err(perr(ln, format!("expected {degree} images, found {}", images.len())));
        }
        gens.push(Permutation::from_images(images).map_err(|e| perr(ln, e.to_string()))?);
    }
    PermGroup::new(degree, gens)
}

/// Matrices of size `n`, rows on separate lines, matrices separated by blank lines.
pub fn parse_matrices(ctx: &GroupContext, text: &str) -> Result<Vec<AutMatrix>> {
    let n = ctx.n();
    let mut out = Vec::new();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut start = 1;
    let flush = |rows: &mut Vec<Vec<u32>>, start: usize, out: &mut Vec<AutMatrix>| -> Result<()> {
        if rows.is_empty() {
            return Ok(());
        }
        if rows.len() != n {
            return Err(perr(start, format!("matrix has {} rows, expected {n}", rows.len())));
        }
        out.push(AutMatrix::new(ctx, std::mem::take(rows)).map_err(|e| perr(start, e.to_string()))?);
        Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            flush(&mut rows, start, &mut out)?;
            continue;
        }
        if rows.is_empty() {
            start = ln;
        }
        let row: Vec<u32> = line.split_whitespace().map(|t| number(ln, t, "entry")).collect::<Result<_>>()?;
        if row.len() != n {
            return Err(perr(ln, format!("row has {} entries, expected {n}", row.len())));
        }
        if let Some(&bad) = row.iter().find(|&&c| c >= ctx.p()) {
            return Err(perr(ln, format!("entry {bad} is not reduced mod {}", ctx.p())));
        }
        rows.push(row);
    }
    flush(&mut rows, start, &mut out)?;
    if out.is_empty() {
        return Err(perr(1, "no matrices"));
    }
    Ok(out)
}

/// Comma-separated indices, with `;` separating several sets.
pub fn parse_sets(ctx: &GroupContext, text: &str) -> Result<Vec<Vec<usize>>> {
    text.split(';')
        .map(|part| {
            part.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| {
                    let x: usize = number(1, t, "element")?;
                    if x >= ctx.order() {
                        return Err(perr(1, format!("element {x} is outside [0, {})", ctx.order())));
                    }
                    Ok(x)
                })
                .collect()
        })
        .collect()
}

/// An ordered list of `key: value` pairs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Block {
    pub fields: Vec<(String, Value)>,
}

impl Block {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.push((key.to_string(), value.into()));
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(text_value).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

/// Blocks separated by blank lines.
pub fn render_text(blocks: &[Block]) -> String {
    let mut out = String::new();
    for (i, b) in blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for (k, v) in &b.fields {
            let v = text_value(v);
            if v.contains('\n') {
                let _ = writeln!(out, "{k}: |");
                for l in v.lines() {
                    let _ = writeln!(out, "  {l}");
                }
            } else {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
    }
    out
}

pub fn render_json(blocks: &[Block]) -> String {
    let arr: Vec<Value> =
        blocks.iter().map(|b| Value::Object(b.fields.iter().cloned().collect::<Map<String, Value>>())).collect();
    serde_json::to_string_pretty(&Value::Array(arr)).expect("json values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXC3: &str = include_str!("../tests/fixtures/exceptional_p3.txt");

    #[test]
    fn roundtrip() {
        let a = parse_sring(EXC3).unwrap();
        assert_eq!(serialize_sring(&a), EXC3);
        assert_eq!(a.rank(), 11);
    }

    #[test]
    fn rejects_missing_zero_singleton() {
        let err = parse_sring("p=3 n=1\n0 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Axiom(_)), "{err}");
    }

    #[test]
    fn diagnostics() {
        assert_eq!(parse_sring("p=3\n0\n").unwrap_err(), perr(1, "missing `n=`"));
        let e = parse_sring("p=3 n=1\n0\n1 x\n").unwrap_err();
        assert_eq!(e, perr(3, "element `x` is not a number"));
        let e = parse_sring("p=3 n=1\n0\n1 5\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = parse_perm_group("deg=3\n1 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_perm_group("deg=3\n1 1 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn perm_group_roundtrip() {
        let g = parse_perm_group("deg=4\n1 2 3 0\n1 0 2 3\n").unwrap();
        assert_eq!(g.order(), 24u32.into());
        let text = serialize_perm_group(&g);
        assert!(parse_perm_group(&text).unwrap().same_group(&g));
    }

    #[test]
    fn matrices_and_sets() {
        let ctx = GroupContext::new(3, 2).unwrap();
        let ms = parse_matrices(&ctx, "1 1\n0 1\n\n# second\n2 0\n0 1\n").unwrap();
        assert_eq!(ms.len(), 2);
        assert!(matches!(parse_matrices(&ctx, "1 1\n0 3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_matrices(&ctx, "1 1\n2 2\n"), Err(Error::Parse { line: 1, .. })));
        assert_eq!(parse_sets(&ctx, "1,2;3").unwrap(), vec![vec![1, 2], vec![3]]);
        assert!(parse_sets(&ctx, "9").is_err());
    }

    #[test]
    fn report_text() {
        let b = Block::new().field("name", "x").field("cases", 3).field("sizes", vec![1, 2]);
        assert_eq!(
            render_text(&[b.clone(), b.clone()]),
            "name: x\ncases: 3\nsizes: 1 2\n\nname: x\ncases: 3\nsizes: 1 2\n"
        );
        assert!(render_json(&[b]).contains("\"cases\": 3"));
    }
}
