//! Text rendering of expressions and trace expressions.
//!
//! Format: words as whitespace-separated atoms (`s^2(a) |D|^3 D U1 g`),
//! coefficients as `*`-joined scalar factors (`3/2*sqrtpi*muU1^-2`), terms
//! joined by ` + ` / ` - `, traces as `RES{ .. }` and `DIX[p]{ .. }`.

use num_traits::{Signed, Zero};

use crate::atom::{Atom, Word};
use crate::coeff::{format_term, Coeff};
use crate::expr::Expr;
use crate::session::Session;
use crate::trace::{TraceExpr, TraceKind};

pub fn atom_string(a: &Atom, session: &Session) -> String {
    match a {
        Atom::Grading => "g".into(),
        Atom::D { k } => {
            if *k == 1 {
                "D".into()
            } else {
                format!("D^{}", k)
            }
        }
        Atom::AbsD { k } => {
            if *k == 1 {
                "|D|".into()
            } else {
                format!("|D|^{}", k)
            }
        }
        Atom::Alg { id, sigma, adj } => {
            let name = &session.letter(*id).name;
            let star = if *adj { "*" } else { "" };
            if *sigma == 0 {
                format!("{}{}", name, star)
            } else {
                format!("s^{}({}{})", sigma, name, star)
            }
        }
        Atom::Group { id, pow } => {
            let name = session.group_name(*id);
            if *pow == 1 {
                name.to_string()
            } else {
                format!("{}^{}", name, pow)
            }
        }
    }
}

pub fn word_string(w: &Word, session: &Session) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.0.iter()
        .map(|a| atom_string(a, session))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Signed scalar pieces of a coefficient: (is_negative, factor string).
fn coeff_pieces(c: &Coeff, session: &Session) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    for (m, g) in c.terms() {
        // Pull an overall sign out for printing when the gaussian part is
        // purely real or purely imaginary.
        let (neg, gnorm) = if g.im.is_zero() && g.re.is_negative() {
            (true, crate::coeff::GaussRat {
                re: -g.re.clone(),
                im: g.im.clone(),
            })
        } else if g.re.is_zero() && g.im.is_negative() {
            (true, crate::coeff::GaussRat {
                re: g.re.clone(),
                im: -g.im.clone(),
            })
        } else {
            (false, g.clone())
        };
        let s = format_term(m, &gnorm, &|gid| session.group_name(gid).to_string());
        out.push((neg, s));
    }
    out
}

pub fn expr_string(e: &Expr, session: &Session) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut parts: Vec<(bool, String)> = Vec::new();
    for (w, c) in &e.terms {
        let ws = word_string(w, session);
        for (neg, cs) in coeff_pieces(c, session) {
            let body = if cs == "1" {
                ws.clone()
            } else if ws == "1" {
                cs
            } else {
                format!("{} {}", cs, ws)
            };
            parts.push((neg, body));
        }
    }
    join_signed(parts)
}

fn join_signed(parts: Vec<(bool, String)>) -> String {
    let mut out = String::new();
    for (i, (neg, body)) in parts.iter().enumerate() {
        if i == 0 {
            if *neg {
                out.push_str("- ");
            }
        } else {
            out.push_str(if *neg { " - " } else { " + " });
        }
        out.push_str(body);
    }
    out
}

pub fn trace_string(t: &TraceExpr, session: &Session) -> String {
    if t.summands.is_empty() {
        return "0".into();
    }
    let mut parts: Vec<(bool, String)> = Vec::new();
    for (kind, arg, scalar) in &t.summands {
        let head = match kind {
            TraceKind::Res => "RES{".to_string(),
            TraceKind::Dix(p) => format!("DIX[{}]{{", p),
        };
        let body = format!("{} {} }}", head, expr_string(arg, session));
        if *scalar == Coeff::one() {
            parts.push((false, body));
        } else {
            for (neg, cs) in coeff_pieces(scalar, session) {
                parts.push((neg, format!("{} {}", cs, body)));
            }
        }
    }
    join_signed(parts)
}
