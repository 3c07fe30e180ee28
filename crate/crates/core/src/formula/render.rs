use super::ast::{Formula, Relation, Var};

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Quant { .. } => 0,
        Formula::Iff { .. } => 1,
        Formula::Implies { .. } => 2,
        Formula::Or { .. } => 3,
        Formula::And { .. } => 4,
        Formula::Not { .. } => 5,
        Formula::Atom { .. } => 6,
    }
}

/// Renders with the minimal parentheses needed for `parse` to rebuild the
/// same tree.
pub fn render(f: &Formula) -> String {
    render_with(f, &mut |_, rel, l, r| format!("{l} {} {r}", rel.symbol()))
}

/// Like [`render`], but atoms are produced by `atom(position, rel, left, right)`,
/// where `position` is the atom's rank in left-to-right order.
pub fn render_with(f: &Formula, atom: &mut impl FnMut(usize, Relation, &Var, &Var) -> String) -> String {
    let mut out = String::new();
    let mut next_atom = 0;
    write(f, 0, &mut out, &mut next_atom, atom);
    out
}

fn write(
    f: &Formula,
    min_prec: u8,
    out: &mut String,
    next_atom: &mut usize,
    atom: &mut impl FnMut(usize, Relation, &Var, &Var) -> String,
) {
    let paren = precedence(f) < min_prec;
    if paren {
        out.push('(');
    }
    match f {
        Formula::Atom { rel, left, right } => {
            out.push_str(&atom(*next_atom, *rel, left, right));
            *next_atom += 1;
        }
        Formula::Not { arg } => {
            out.push('~');
            write(arg, 5, out, next_atom, atom);
        }
        Formula::And { left, right } => binary(left, right, " & ", (4, 5), out, next_atom, atom),
        Formula::Or { left, right } => binary(left, right, " | ", (3, 4), out, next_atom, atom),
        Formula::Implies { left, right } => binary(left, right, " -> ", (3, 2), out, next_atom, atom),
        Formula::Iff { left, right } => binary(left, right, " <-> ", (1, 2), out, next_atom, atom),
        Formula::Quant {
            kind,
            var,
            bounded,
            body,
        } => {
            out.push_str(kind.keyword());
            out.push(' ');
            out.push_str(var.as_str());
            if *bounded {
                out.push_str(":V");
            }
            out.push_str(". ");
            write(body, 0, out, next_atom, atom);
        }
    }
    if paren {
        out.push(')');
    }
}

fn binary(
    left: &Formula,
    right: &Formula,
    op: &str,
    (lp, rp): (u8, u8),
    out: &mut String,
    next_atom: &mut usize,
    atom: &mut impl FnMut(usize, Relation, &Var, &Var) -> String,
) {
    write(left, lp, out, next_atom, atom);
    out.push_str(op);
    write(right, rp, out, next_atom, atom);
}
