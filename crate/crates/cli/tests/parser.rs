use germforge::{GaussRat as Q, Jet2};
use germforge_cli::dsl::{normalize, parse_expression, parse_vector_field, Expr, ParseError};
use proptest::prelude::*;

fn number() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u32..20).prop_map(|n| Expr::Num(n.to_string())),
        (1u32..9, 2u32..9).prop_map(|(p, q)| Expr::Num(format!("{p}/{q}"))),
        (0u32..4, 1u32..100).prop_map(|(a, b)| Expr::Num(format!("{a}.{b:02}"))),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![number(), Just(Expr::Imag), Just(Expr::Var('x')), Just(Expr::Var('y'))];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), 0u32..4).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
            inner.prop_map(|a| Expr::Neg(Box::new(a))),
        ]
    })
}

fn top() -> impl Strategy<Value = Expr> {
    prop_oneof![
        3 => expr(),
        1 => (expr(), expr()).prop_map(|(a, b)| Expr::Quot(Box::new(a), Box::new(b))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn printing_round_trips(e in top()) {
        let text = e.to_string();
        let back = parse_expression(&text).unwrap();
        prop_assert_eq!(&back, &e, "printed as {}", text);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn printed_polynomials_evaluate_alike(e in expr()) {
        let direct: Jet2<Q> = e.to_jet2(6).unwrap();
        let reparsed: Jet2<Q> = parse_expression(&e.to_string()).unwrap().to_jet2(6).unwrap();
        prop_assert_eq!(direct, reparsed);
    }
}

const CORPUS: [&str; 50] = [
    "x",
    "y",
    "z",
    "i",
    "0",
    "42",
    "3/2",
    "0.25",
    "-x",
    "--x",
    "x+y",
    "x-y",
    "x - (y - 1)",
    "(x - y) - 1",
    "x*y",
    "x*(x-2*y)",
    "y*(y-2*x)",
    "x*y*(x-y)",
    "x*y*(x-y)^2",
    "x*y^2*(x-y)^3",
    "x^3+y^2",
    "y*(y-x^2)",
    "y*(y-x^2)^2",
    "x^2*y/(x-y)",
    "y^2/(y-x^2)",
    "(x+1)/2",
    "x/2",
    "2*3/4",
    "(2*3)/4",
    "(3/2)^2",
    "3/2*x",
    "x*(3/2)",
    "-(x+y)^2",
    "(-x)^2",
    "-x^2",
    "x^0",
    "((x))",
    "(x*y)*z",
    "x*(y*z)",
    "1+2*i",
    "(1+i)*x - i*y",
    "0.5*x^2 - 1.25*y",
    "z^2 + (3/2)*z^3",
    "1+z+z^2",
    "1+2*z^3",
    "-(1+x)*x*y^2",
    "x^(2)",
    "x^2^3",
    "(x-y)^3/(x+y)^2",
    "  x  *  y  ",
];

#[test]
fn corpus_normal_forms_are_fixed_points() {
    let mut parsed = 0;
    for text in CORPUS {
        let n = match normalize(text) {
            Ok(n) => n,
            Err(e) => {
                assert!(text.contains("^(") || text.contains("^2^"), "{text}: {e}");
                continue;
            }
        };
        assert_eq!(normalize(&n).unwrap(), n, "{text}");
        assert_eq!(parse_expression(&n).unwrap(), parse_expression(text).unwrap(), "{text}");
        parsed += 1;
    }
    assert_eq!(parsed, 48);
}

#[test]
fn selected_normal_forms() {
    for (text, want) in [
        ("(x+1)/2", "(x + 1)/2"),
        ("2*3/4", "2*(3/4)"),
        ("(2*3)/4", "(2*3)/4"),
        ("x^2*y/(x-y)", "x^2*y/(x - y)"),
        ("--x", "--x"),
        ("(-x)^2", "(-x)^2"),
        ("  x  *  y  ", "x*y"),
    ] {
        assert_eq!(normalize(text).unwrap(), want, "{text}");
    }
}

#[test]
fn errors_carry_positions() {
    assert_eq!(
        parse_expression("x*(x-2y)"),
        Err(ParseError::Syntax { pos: 6, msg: "implicit multiplication; write '*'".into() })
    );
    assert!(matches!(parse_expression("x + w"), Err(ParseError::UnknownVariable { pos: 4, .. })));
    assert!(matches!(parse_expression("x^-1"), Err(ParseError::Syntax { pos: 2, .. })));
    assert!(matches!(parse_expression("(x"), Err(ParseError::Syntax { pos: 2, .. })));
    assert!(matches!(parse_vector_field::<Q>("[x, y*(x-2y)]", 4), Err(ParseError::Syntax { pos: 10, .. })));
}

#[test]
fn spec_vector_fields() {
    let nilpotent = parse_vector_field::<Q>("[y - 2*x^2, -2*x*y]", 6).unwrap();
    assert_eq!(nilpotent.a(), &Jet2::from_int_terms(6, &[(0, 1, 1), (2, 0, -2)]));
    assert_eq!(nilpotent.b(), &Jet2::from_int_terms(6, &[(1, 1, -2)]));
    let elliptic = parse_vector_field::<Q>("[x*(x-2*y), y*(y-2*x)]", 6).unwrap();
    assert_eq!(elliptic.a(), &Jet2::from_int_terms(6, &[(2, 0, 1), (1, 1, -2)]));
    let from_table = parse_vector_field::<Q>("table:4[a=0]", 6).unwrap();
    assert_eq!(from_table, elliptic);
}
