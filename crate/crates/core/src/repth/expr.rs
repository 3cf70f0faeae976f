use crate::cartan::Weight;
use crate::error::{Error, Result};

use super::rep::{fundamental_rep, sl2_irrep, tensor_rep, Rep};
use super::submodule::highest_weight_submodule;

/// Module expression: `fund(n)`, `sl2(m)`, `tensor(a, b)` or
/// `hw(a, c_1, ..., c_n)` for the highest weight submodule of weight
/// `(c_1, ..., c_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepExpr {
    Fund(usize),
    Sl2(usize),
    Tensor(Box<RepExpr>, Box<RepExpr>),
    Hw(Box<RepExpr>, Vec<i64>),
}

impl RepExpr {
    pub fn build(&self) -> Result<Rep> {
        match self {
            RepExpr::Fund(n) => Ok(fundamental_rep(*n)),
            RepExpr::Sl2(m) => Ok(sl2_irrep(*m)),
            RepExpr::Tensor(a, b) => {
                let (a, b) = (a.build()?, b.build()?);
                if a.rank != b.rank {
                    return Err(Error::Invalid("tensor factors have different rank".into()));
                }
                Ok(tensor_rep(&a, &b))
            }
            RepExpr::Hw(a, w) => {
                let a = a.build()?;
                if w.len() != a.rank {
                    return Err(Error::Invalid(format!("weight has {} coordinates, rank is {}", w.len(), a.rank)));
                }
                Ok(highest_weight_submodule(&a, &Weight::new(w.clone()))?.rep)
            }
        }
    }
}

pub fn parse_rep(s: &str) -> Result<RepExpr> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let (e, rest) = parse_expr(&compact)?;
    if !rest.is_empty() {
        return Err(Error::Parse(format!("trailing input {rest:?}")));
    }
    Ok(e)
}

fn parse_expr(s: &str) -> Result<(RepExpr, &str)> {
    let open = s.find('(').ok_or_else(|| Error::Parse(format!("expected '(' in {s:?}")))?;
    let head = &s[..open];
    let body = &s[open + 1..];
    match head {
        "fund" | "sl2" => {
            let (k, rest) = parse_int(body)?;
            let rest = expect(rest, ')')?;
            if k < 1 && head == "fund" {
                return Err(Error::Parse("rank must be positive".into()));
            }
            let k = usize::try_from(k).map_err(|_| Error::Parse("negative argument".into()))?;
            Ok((if head == "fund" { RepExpr::Fund(k) } else { RepExpr::Sl2(k) }, rest))
        }
        "tensor" => {
            let (a, rest) = parse_expr(body)?;
            let rest = expect(rest, ',')?;
            let (b, rest) = parse_expr(rest)?;
            let rest = expect(rest, ')')?;
            Ok((RepExpr::Tensor(Box::new(a), Box::new(b)), rest))
        }
        "hw" => {
            let (a, mut rest) = parse_expr(body)?;
            let mut w = Vec::new();
            while let Some(r) = rest.strip_prefix(',') {
                let (k, r) = parse_int(r)?;
                w.push(k);
                rest = r;
            }
            let rest = expect(rest, ')')?;
            Ok((RepExpr::Hw(Box::new(a), w), rest))
        }
        _ => Err(Error::Parse(format!("unknown module constructor {head:?}"))),
    }
}

fn parse_int(s: &str) -> Result<(i64, &str)> {
    let end = s
        .char_indices()
        .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-')))
        .map_or(s.len(), |(i, _)| i);
    let k = s[..end].parse().map_err(|_| Error::Parse(format!("expected integer at {s:?}")))?;
    Ok((k, &s[end..]))
}

fn expect(s: &str, c: char) -> Result<&str> {
    s.strip_prefix(c).ok_or_else(|| Error::Parse(format!("expected {c:?} at {s:?}")))
}
