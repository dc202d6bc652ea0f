use proptest::prelude::*;

use expoly::base::rat;
use expoly::eideal::{parse_membership_certificate, prove_membership, EIdealPresentation, SaturationPolicy};
use expoly::laurent::extract_lattice;
use expoly::{format_epoly, parse_epoly, EPoly, Vars};

#[derive(Clone, Debug)]
struct Term {
    num: i64,
    den: i64,
    xe: u32,
    ye: u32,
    exp: Option<Vec<Term>>,
}

fn term(depth: u32) -> BoxedStrategy<Term> {
    let leaf = (-4i64..=4, 1i64..=3, 0u32..=2, 0u32..=2).prop_map(|(num, den, xe, ye)| Term {
        num,
        den,
        xe,
        ye,
        exp: None,
    });
    if depth == 0 {
        return leaf.boxed();
    }
    (leaf, prop::option::of(prop::collection::vec(term(depth - 1), 1..3)))
        .prop_map(|(mut t, exp)| {
            t.exp = exp;
            t
        })
        .boxed()
}

fn build(terms: &[Term]) -> EPoly {
    let x = EPoly::var(2, 0);
    let y = EPoly::var(2, 1);
    let mut p = EPoly::zero(2);
    for t in terms {
        let mut m = EPoly::constant(2, rat(t.num, t.den));
        m = &m * &(&x.pow(t.xe) * &y.pow(t.ye));
        if let Some(inner) = &t.exp {
            m = &m * &build(inner).exp_apply();
        }
        p = &p + &m;
    }
    p
}

fn epoly() -> impl Strategy<Value = EPoly> {
    prop::collection::vec(term(2), 0..4).prop_map(|ts| build(&ts))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_laws(p in epoly(), q in epoly(), r in epoly()) {
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert!((&p * &q).validate().is_ok());
    }

    #[test]
    fn exp_is_a_homomorphism(p in epoly(), q in epoly()) {
        prop_assert_eq!((&p + &q).exp_apply(), &p.exp_apply() * &q.exp_apply());
        prop_assert!(EPoly::zero(2).exp_apply().is_one());
    }

    #[test]
    fn text_round_trip(p in epoly()) {
        let vars = Vars::standard(2);
        let text = format_epoly(&p, &vars);
        prop_assert_eq!(parse_epoly(&text, &vars).unwrap(), p);
    }

    #[test]
    fn lattice_round_trip(p in epoly(), q in epoly()) {
        let lattice = extract_lattice(2, &[p.clone(), q.clone()]);
        let a = lattice.encode(&p).unwrap();
        let b = lattice.encode(&q).unwrap();
        prop_assert_eq!(lattice.decode(&a), p);
        prop_assert_eq!(lattice.decode(&a.add(&b)), lattice.decode(&a) + lattice.decode(&b));
    }

    /// A combination of `E(g) - 1` with random multipliers is proved at
    /// depth 1, and its certificate survives the text format.
    #[test]
    fn combinations_are_certified(m1 in epoly(), m2 in epoly()) {
        let vars = Vars::standard(2);
        let g = parse_epoly("x*y - 1", &vars).unwrap();
        let pres = EIdealPresentation::new(2, vec![g.clone()]).unwrap();
        let target = &(&m1 * &g) + &(&m2 * &g.exp_minus_one());
        let v = prove_membership(&target, &pres, &SaturationPolicy::with_depth(1)).unwrap();
        let cert = v.certificate().expect("proved");
        prop_assert!(cert.verify(&pres, &target).is_ok());
        let (back, _) = parse_membership_certificate(&cert.to_text(&vars)).unwrap();
        prop_assert!(back.verify(&pres, &target).is_ok());
    }
}
