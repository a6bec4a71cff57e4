use crate::domain::Coalition;
use crate::logic::{Formula, Node};

/// Derived connectives recognized when printing, so that `print` undoes
/// the expansion done by the builders.
enum View<'a> {
    Top,
    Bottom,
    Atom(String),
    Not(&'a Formula),
    Or(&'a Formula, &'a Formula),
    And(&'a Formula, &'a Formula),
    Implies(&'a Formula, &'a Formula),
    Iff(&'a Formula, &'a Formula),
    Diamond(Coalition, &'a Formula),
    Box(Coalition, &'a Formula),
    Pref(usize, &'a Formula),
    PrefBox(usize, &'a Formula),
}

fn negated(phi: &Formula) -> Option<&Formula> {
    match phi.node() {
        Node::Not(a) => Some(a),
        _ => None,
    }
}

/// Views `¬inner` as a derived connective where the shape allows it.
fn view_not(inner: &Formula) -> View<'_> {
    match inner.node() {
        Node::Top => View::Bottom,
        Node::Or(l, r) => match (negated(l), negated(r)) {
            (Some(a), Some(b)) => {
                if let (Node::Or(al, ar), Node::Or(bl, br)) = (a.node(), b.node()) {
                    if let (Some(p), Some(q)) = (negated(al), negated(bl)) {
                        if p == br && q == ar {
                            return View::Iff(p, ar);
                        }
                    }
                }
                View::And(a, b)
            }
            _ => View::Not(inner),
        },
        Node::Diamond(c, a) => match negated(a) {
            Some(b) => View::Box(*c, b),
            None => View::Not(inner),
        },
        Node::PrefDiamond(i, a) => match negated(a) {
            Some(b) => View::PrefBox(i.number(), b),
            None => View::Not(inner),
        },
        _ => View::Not(inner),
    }
}

fn view(phi: &Formula) -> View<'_> {
    match phi.node() {
        Node::Top => View::Top,
        Node::Rep(atom) => View::Atom(atom.to_string()),
        Node::Out(x) => View::Atom(x.to_string()),
        Node::Not(a) => view_not(a),
        Node::Or(l, r) => match l.node() {
            Node::Not(a) if matches!(view_not(a), View::Not(_)) => View::Implies(a, r),
            _ => View::Or(l, r),
        },
        Node::Diamond(c, a) => View::Diamond(*c, a),
        Node::PrefDiamond(i, a) => View::Pref(i.number(), a),
    }
}

const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;
const ATOM: u8 = 6;

fn level(v: &View<'_>) -> u8 {
    match v {
        View::Iff(..) => IFF,
        View::Implies(..) => IMP,
        View::Or(..) => OR,
        View::And(..) => AND,
        View::Not(_) | View::Diamond(..) | View::Box(..) | View::Pref(..) | View::PrefBox(..) => UNARY,
        View::Top | View::Bottom | View::Atom(_) => ATOM,
    }
}

fn coalition(c: Coalition) -> String {
    c.to_string()
}

fn write(phi: &Formula, min: u8, out: &mut String) {
    let v = view(phi);
    let paren = level(&v) < min;
    if paren {
        out.push('(');
    }
    match v {
        View::Top => out.push_str("true"),
        View::Bottom => out.push_str("false"),
        View::Atom(s) => out.push_str(&s),
        View::Not(a) => {
            out.push('~');
            write(a, UNARY, out);
        }
        View::Or(a, b) => binary(a, " | ", b, OR, AND, out),
        View::And(a, b) => binary(a, " & ", b, AND, UNARY, out),
        View::Implies(a, b) => binary(a, " -> ", b, OR, IMP, out),
        View::Iff(a, b) => binary(a, " <-> ", b, IMP, IFF, out),
        View::Diamond(c, a) => {
            out.push('<');
            out.push_str(&coalition(c));
            out.push_str("> ");
            write(a, UNARY, out);
        }
        View::Box(c, a) => {
            out.push('[');
            out.push_str(&coalition(c));
            out.push_str("] ");
            write(a, UNARY, out);
        }
        View::Pref(i, a) => {
            out.push_str(&format!("pref({i}) "));
            write(a, UNARY, out);
        }
        View::PrefBox(i, a) => {
            out.push_str(&format!("Pref({i}) "));
            write(a, UNARY, out);
        }
    }
    if paren {
        out.push(')');
    }
}

fn binary(a: &Formula, op: &str, b: &Formula, left: u8, right: u8, out: &mut String) {
    write(a, left, out);
    out.push_str(op);
    write(b, right, out);
}

/// Canonical text of `phi` with minimal parentheses.
pub fn print(phi: &Formula) -> String {
    let mut out = String::new();
    write(phi, IFF, &mut out);
    out
}
