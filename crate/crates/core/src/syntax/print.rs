use super::Formula;

const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;
const ATOMIC: u8 = 6;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Atom(_) | Formula::Bottom | Formula::Top => ATOMIC,
        Formula::Not(_) | Formula::Box(_) | Formula::Diamond(_) => UNARY,
        Formula::And(..) => AND,
        Formula::Or(..) => OR,
        Formula::Implies(..) => IMPLIES,
        Formula::Iff(..) => IFF,
    }
}

/// Print with the fewest parentheses the grammar allows.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write(f, &mut out);
    out
}

fn write_operand(f: &Formula, min: u8, out: &mut String) {
    if precedence(f) < min {
        out.push('(');
        write(f, out);
        out.push(')');
    } else {
        write(f, out);
    }
}

fn write(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom(a) => out.push_str(a),
        Formula::Bottom => out.push_str("false"),
        Formula::Top => out.push_str("true"),
        Formula::Not(g) => {
            out.push('~');
            write_operand(g, UNARY, out);
        }
        Formula::Box(g) => {
            out.push_str("[]");
            write_operand(g, UNARY, out);
        }
        Formula::Diamond(g) => {
            out.push_str("<>");
            write_operand(g, UNARY, out);
        }
        // left-associative: the right operand must bind strictly tighter
        Formula::And(a, b) => {
            write_operand(a, AND, out);
            out.push_str(" & ");
            write_operand(b, AND + 1, out);
        }
        Formula::Or(a, b) => {
            write_operand(a, OR, out);
            out.push_str(" | ");
            write_operand(b, OR + 1, out);
        }
        // right-associative
        Formula::Implies(a, b) => {
            write_operand(a, IMPLIES + 1, out);
            out.push_str(" -> ");
            write_operand(b, IMPLIES, out);
        }
        Formula::Iff(a, b) => {
            write_operand(a, IFF + 1, out);
            out.push_str(" <-> ");
            write_operand(b, IFF, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn basic_shapes() {
        assert_eq!(print(&Formula::boxed(Formula::atom("p"))), "[]p");
        assert_eq!(print(&Formula::Bottom), "false");
        let f = Formula::implies(
            Formula::atom("p"),
            Formula::or(Formula::atom("q"), Formula::atom("r")),
        );
        assert_eq!(print(&f), "p -> q | r");
    }

    #[test]
    fn parentheses_only_where_needed() {
        for s in [
            "(p -> q) -> r",
            "p -> q -> r",
            "p & (q & r)",
            "p & q & r",
            "[](p & q)",
            "~~p",
            "(p <-> q) <-> r",
            "~(p | q) & <>[]r",
        ] {
            assert_eq!(print(&parse(s).unwrap()), s);
        }
    }
}
