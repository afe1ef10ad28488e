//! Parser for the expression text format (round-trip partner of `print`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::atom::Atom;
use crate::coeff::Coeff;
use crate::expr::Expr;
use crate::session::Session;
use crate::trace::{TraceExpr, TraceKind};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("unexpected token `{0}`")]
    Unexpected(String),
    #[error("malformed number `{0}`")]
    BadNumber(String),
    #[error("unknown group generator `{0}`")]
    UnknownGroup(String),
    #[error("unbalanced braces")]
    Braces,
}

fn split_tokens(input: &str) -> Vec<String> {
    let padded = input
        .replace('{', " { ")
        .replace('}', " } ");
    padded.split_whitespace().map(|s| s.to_string()).collect()
}

fn parse_int(s: &str) -> Result<i64, ParseError> {
    s.parse::<i64>()
        .map_err(|_| ParseError::BadNumber(s.to_string()))
}

fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let body = s.trim_start_matches('(').trim_end_matches(')');
    if let Some((n, d)) = body.split_once('/') {
        let nn = n
            .parse::<BigInt>()
            .map_err(|_| ParseError::BadNumber(s.into()))?;
        let dd = d
            .parse::<BigInt>()
            .map_err(|_| ParseError::BadNumber(s.into()))?;
        if dd.is_zero() {
            return Err(ParseError::BadNumber(s.into()));
        }
        Ok(BigRational::new(nn, dd))
    } else {
        let nn = body
            .parse::<BigInt>()
            .map_err(|_| ParseError::BadNumber(s.into()))?;
        Ok(BigRational::from_integer(nn))
    }
}

fn is_scalar_factor(tok: &str) -> bool {
    let body = tok.trim_start_matches('(');
    body.starts_with(|c: char| c.is_ascii_digit())
        || tok == "i"
        || tok == "pi"
        || tok.starts_with("pi^")
        || tok == "sqrtpi"
        || tok == "sqrt2i"
        || tok.starts_with("mu")
}

/// True when a whole whitespace token is a scalar cluster (factors joined
/// by `*`), e.g. `3/2*sqrtpi*muU^-2`.
fn is_scalar_cluster(tok: &str) -> bool {
    tok.split('*').all(is_scalar_factor) && !tok.is_empty() && tok != "i" || tok == "i"
}

fn parse_scalar_cluster(tok: &str, session: &Session) -> Result<Coeff, ParseError> {
    let mut acc = Coeff::one();
    for f in tok.split('*') {
        let c = if f == "i" {
            Coeff::i()
        } else if f == "sqrtpi" {
            Coeff::sqrt_pi()
        } else if f == "sqrt2i" {
            Coeff::sqrt_2i()
        } else if f == "pi" {
            Coeff::pi()
        } else if let Some(p) = f.strip_prefix("pi^") {
            let k = parse_int(p)?;
            if k < 0 {
                return Err(ParseError::BadNumber(f.into()));
            }
            let mut c = Coeff::one();
            for _ in 0..k {
                c = c.mul(&Coeff::pi());
            }
            c
        } else if let Some(rest) = f.strip_prefix("mu") {
            let (name, pow) = match rest.split_once('^') {
                Some((n, p)) => (n, parse_int(p)?),
                None => (rest, 1),
            };
            let gid = session
                .group_id(name)
                .ok_or_else(|| ParseError::UnknownGroup(name.to_string()))?;
            session.char_pow(gid, pow)
        } else {
            Coeff::from_rational(parse_rational(f)?)
        };
        acc = acc.mul(&c);
    }
    Ok(acc)
}

fn parse_atom(tok: &str, session: &mut Session) -> Result<Atom, ParseError> {
    if tok == "g" {
        return Ok(Atom::Grading);
    }
    if tok == "D" {
        return Ok(Atom::d(1));
    }
    if let Some(p) = tok.strip_prefix("D^") {
        return Ok(Atom::d(parse_int(p)?));
    }
    if tok == "|D|" {
        return Ok(Atom::abs_d(1));
    }
    if let Some(p) = tok.strip_prefix("|D|^") {
        return Ok(Atom::abs_d(parse_int(p)?));
    }
    if let Some(rest) = tok.strip_prefix("s^") {
        // s^<k>(<name>[*])
        let open = rest
            .find('(')
            .ok_or_else(|| ParseError::Unexpected(tok.into()))?;
        if !rest.ends_with(')') {
            return Err(ParseError::Unexpected(tok.into()));
        }
        let k = parse_int(&rest[..open])?;
        let inner = &rest[open + 1..rest.len() - 1];
        let (name, adj) = match inner.strip_suffix('*') {
            Some(n) => (n, true),
            None => (inner, false),
        };
        let id = session.declare_letter(name);
        return Ok(Atom::Alg {
            id,
            sigma: k,
            adj,
        });
    }
    // Group letter with power, or a bare name (group or algebra letter).
    if let Some((name, pow)) = tok.split_once('^') {
        if let Some(gid) = session.group_id(name) {
            return Ok(Atom::group(gid, parse_int(pow)?));
        }
        return Err(ParseError::Unexpected(tok.into()));
    }
    let (name, adj) = match tok.strip_suffix('*') {
        Some(n) => (n, true),
        None => (tok, false),
    };
    if let Some(gid) = session.group_id(name) {
        if adj {
            return Ok(Atom::group(gid, -1));
        }
        return Ok(Atom::group(gid, 1));
    }
    let id = session.declare_letter(name);
    Ok(if adj { Atom::alg_star(id) } else { Atom::alg(id) })
}

/// Parses one `+`/`-`-separated term: optional scalar clusters followed by
/// atoms.
fn parse_term(tokens: &[String], session: &mut Session) -> Result<Expr, ParseError> {
    let mut coeff = Coeff::one();
    let mut atoms: Vec<Atom> = Vec::new();
    for tok in tokens {
        if atoms.is_empty() && tok != "1" && is_scalar_cluster(tok) && !is_atom_like(tok, session)
        {
            coeff = coeff.mul(&parse_scalar_cluster(tok, session)?);
        } else if tok == "1" {
            // the empty word
        } else {
            atoms.push(parse_atom(tok, session)?);
        }
    }
    Ok(Expr::from_atoms(&atoms, session).scale(&coeff))
}

/// Guards against scalar-looking tokens that are declared letters (e.g. a
/// letter literally named `pi`): declared names win.
fn is_atom_like(tok: &str, session: &Session) -> bool {
    session.letter_id(tok).is_some() || session.group_id(tok).is_some()
}

pub fn parse_expr(input: &str, session: &mut Session) -> Result<Expr, ParseError> {
    let tokens = split_tokens(input);
    if tokens.is_empty() || (tokens.len() == 1 && tokens[0] == "0") {
        return Ok(Expr::zero());
    }
    let mut acc = Expr::zero();
    let mut current: Vec<String> = Vec::new();
    let mut sign = 1i64;
    let flush = |current: &mut Vec<String>,
                     sign: i64,
                     session: &mut Session,
                     acc: &mut Expr|
     -> Result<(), ParseError> {
        if !current.is_empty() {
            let term = parse_term(current, session)?;
            *acc = acc.add(&term.scale(&Coeff::from_int(sign)));
            current.clear();
        }
        Ok(())
    };
    for tok in tokens {
        match tok.as_str() {
            "+" => {
                flush(&mut current, sign, session, &mut acc)?;
                sign = 1;
            }
            "-" => {
                flush(&mut current, sign, session, &mut acc)?;
                sign = -1;
            }
            _ => current.push(tok),
        }
    }
    flush(&mut current, sign, session, &mut acc)?;
    Ok(acc.normalize(session))
}

pub fn parse_trace_expr(input: &str, session: &mut Session) -> Result<TraceExpr, ParseError> {
    let tokens = split_tokens(input);
    if tokens.is_empty() || (tokens.len() == 1 && tokens[0] == "0") {
        return Ok(TraceExpr::zero());
    }
    let mut out = TraceExpr::zero();
    let mut i = 0;
    let mut sign = 1i64;
    let mut scalar_tokens: Vec<String> = Vec::new();
    while i < tokens.len() {
        let tok = &tokens[i];
        if tok == "+" {
            sign = 1;
            i += 1;
            continue;
        }
        if tok == "-" {
            sign = -1;
            i += 1;
            continue;
        }
        let kind = if tok == "RES" {
            Some(TraceKind::Res)
        } else if let Some(rest) = tok.strip_prefix("DIX[") {
            let p = parse_int(rest.trim_end_matches(']'))?;
            Some(TraceKind::Dix(p))
        } else {
            None
        };
        if let Some(kind) = kind {
            if i + 1 >= tokens.len() || tokens[i + 1] != "{" {
                return Err(ParseError::Braces);
            }
            let mut depth = 1;
            let mut j = i + 2;
            let mut inner: Vec<String> = Vec::new();
            while j < tokens.len() {
                match tokens[j].as_str() {
                    "{" => {
                        depth += 1;
                        inner.push(tokens[j].clone());
                    }
                    "}" => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                        inner.push(tokens[j].clone());
                    }
                    _ => inner.push(tokens[j].clone()),
                }
                j += 1;
            }
            if depth != 0 {
                return Err(ParseError::Braces);
            }
            let arg = parse_expr(&inner.join(" "), session)?;
            let mut scalar = Coeff::from_int(sign);
            for s in &scalar_tokens {
                scalar = scalar.mul(&parse_scalar_cluster(s, session)?);
            }
            out = out.add(&TraceExpr::scaled(kind, arg, scalar));
            scalar_tokens.clear();
            sign = 1;
            i = j + 1;
        } else {
            scalar_tokens.push(tok.clone());
            i += 1;
        }
    }
    Ok(out)
}
