use num_traits::{One, Signed};

use super::{EPoly, GMonomial, Vars};
use crate::base::{BExp, Rational};

/// Canonical text of `p`: every (base monomial, generalized monomial) pair is
/// printed as its own term, leading term first. The output parses back to
/// `p` under the same variable table.
pub fn format_epoly(p: &EPoly, vars: &Vars) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for (m, c) in p.terms().rev() {
        for (e, r) in c.terms().rev() {
            let neg = r.is_negative();
            if first {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            first = false;
            out.push_str(&format_term(&r.abs(), e, m, vars));
        }
    }
    out
}

fn format_term(a: &Rational, e: &BExp, m: &GMonomial, vars: &Vars) -> String {
    let mut factors: Vec<String> = Vec::new();
    if !a.numer().is_one() || (e.is_one() && m.is_one()) {
        factors.push(a.numer().to_string());
    }
    for (j, &k) in e.exponents().iter().enumerate() {
        push_power(&mut factors, format!("b{j}"), k);
    }
    for (i, &k) in m.xexp().iter().enumerate() {
        let name = if i < vars.len() {
            vars.name(i).to_string()
        } else {
            format!("x{}", i + 1)
        };
        push_power(&mut factors, name, k);
    }
    if !m.exparg().is_zero() {
        factors.push(format!("E({})", format_epoly(m.exparg(), vars)));
    }
    let mut s = factors.join("*");
    if !a.denom().is_one() {
        s.push('/');
        s.push_str(&a.denom().to_string());
    }
    s
}

fn push_power(factors: &mut Vec<String>, name: String, k: u32) {
    match k {
        0 => {}
        1 => factors.push(name),
        _ => factors.push(format!("{name}^{k}")),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_epoly;
    use super::*;

    fn round(s: &str, n: usize) -> String {
        let v = Vars::standard(n);
        let p = parse_epoly(s, &v).unwrap();
        let f = format_epoly(&p, &v);
        assert_eq!(parse_epoly(&f, &v).unwrap(), p, "round trip of {s} via {f}");
        f
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(round("E(x/2) - 1", 1), "E(x/2) - 1");
        assert_eq!(round("-1 + E(x/2)", 1), "E(x/2) - 1");
        assert_eq!(round("x*(E(y) - 1)", 2), "x*E(y) - x");
        assert_eq!(round("0", 2), "0");
        assert_eq!(round("-3/4", 0), "-3/4");
        assert_eq!(round("(b0 + b1)*x*3/5", 1), "3*b0*x/5 + 3*b1*x/5");
        assert_eq!(round("E(-x)", 1), "E(-x)");
    }

    #[test]
    fn chain_element_round_trips() {
        let f = round("E(b0*x) + E(b1*x) + E(b2*x)", 1);
        assert!(f.contains("E(b0*x)"));
        round("E(x*E(x)) - x^2*E(E(y)/3) + b2^2", 2);
    }
}
