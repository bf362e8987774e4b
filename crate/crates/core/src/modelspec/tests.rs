use std::collections::BTreeMap;

use num_complex::Complex;
use proptest::prelude::*;

use super::*;
use crate::operators::Operator;
use crate::tolerances::Tolerances;
use crate::Error;

fn eval_str(src: &str, symbols: &BTreeMap<String, String>, dim: usize) -> crate::Result<Value> {
    let ast = parse_expression(src)?;
    evaluate(&ast, &Env { symbols, dim })
}

fn op(src: &str) -> Operator<f64> {
    match eval_str(src, &BTreeMap::new(), 1).unwrap() {
        Value::Op(o) => o,
        Value::Scalar(_) => panic!("expected operator"),
    }
}

#[test]
fn parses_nested_call() {
    let e = parse_expression("kron(destroy(5), eye(2))").unwrap();
    let want = Expr::Call {
        name: "kron".into(),
        args: vec![
            Expr::Call {
                name: "destroy".into(),
                args: vec![Expr::Num(Complex::new(5.0, 0.0))],
            },
            Expr::Call {
                name: "eye".into(),
                args: vec![Expr::Num(Complex::new(2.0, 0.0))],
            },
        ],
    };
    assert_eq!(e, want);
}

#[test]
fn precedence_and_dagger() {
    let e = parse_expression("0.5*(a + a')").unwrap();
    let want = Expr::bin(
        BinOp::Mul,
        Expr::Num(Complex::new(0.5, 0.0)),
        Expr::bin(
            BinOp::Add,
            Expr::Sym("a".into()),
            Expr::Dagger(Box::new(Expr::Sym("a".into()))),
        ),
    );
    assert_eq!(e, want);
    // left associativity
    let e = parse_expression("a - b - c").unwrap();
    assert_eq!(e.to_string(), "a - b - c");
    let e = parse_expression("a - (b - c)").unwrap();
    assert_eq!(e.to_string(), "a - (b - c)");
    // unary minus binds looser than dagger
    let e = parse_expression("-a'").unwrap();
    assert_eq!(
        e,
        Expr::Neg(Box::new(Expr::Dagger(Box::new(Expr::Sym("a".into())))))
    );
}

#[test]
fn imaginary_literals() {
    assert_eq!(
        parse_expression("2.5i").unwrap(),
        Expr::Num(Complex::new(0.0, 2.5))
    );
    assert_eq!(
        parse_expression("1e-3").unwrap(),
        Expr::Num(Complex::new(1e-3, 0.0))
    );
    let e = parse_expression("(2+3i)*id").unwrap();
    assert_eq!(e.to_string(), "(2.0 + 3.0i)*id");
    // "2id" is not a literal followed by an operator
    assert!(parse_expression("2id").is_err());
}

#[test]
fn syntax_errors_carry_position_and_expectations() {
    let err = parse_expression("kron(destroy(5)").unwrap_err();
    assert!(err.message.contains("expected ')'"), "{}", err.message);
    assert_eq!((err.line, err.col), (1, 16));
    assert!(err.expected.contains(&"')'".to_string()));

    let err = parse_expression("a +\n  * b").unwrap_err();
    assert_eq!((err.line, err.col), (2, 3));

    let err = parse_expression("frobnicate(2)").unwrap_err();
    assert!(err.message.contains("unknown builtin"));
    let err = parse_expression("destroy(2, 3)").unwrap_err();
    assert!(err.message.contains("takes 1 argument"));
    assert!(parse_expression("kron(eye(2))").is_err());
    assert!(parse_expression("").is_err());
    assert!(parse_expression("a $ b").is_err());
}

#[test]
fn builtin_values() {
    let a = op("destroy(3)");
    assert_eq!(a.get(0, 1), Complex::new(1.0, 0.0));
    assert!((a.get(1, 2).re - 2f64.sqrt()).abs() < 1e-15);
    assert_eq!(a.get(1, 0), Complex::new(0.0, 0.0));
    let p = op("sigmap*sigmam");
    assert!(p.max_abs_diff(&Operator::unit(2, 1, 1)) < 1e-15);
    let n = op("num(4) - create(4)*destroy(4)");
    assert!(n.max_abs() < 1e-14);
    let z = op("sigmaz");
    assert_eq!(z.get(0, 0).re, 1.0);
    let y = op("sigmay() - 1i*sigmax*sigmaz");
    assert!(y.max_abs() < 1e-15);
    let b = op("basis(3, 2, 0)");
    assert_eq!(b.get(2, 0).re, 1.0);
    assert!(eval_str("basis(3, 3, 0)", &BTreeMap::new(), 1).is_err());
    assert!(eval_str("destroy(2.5)", &BTreeMap::new(), 1).is_err());
}

#[test]
fn displacement_gives_coherent_amplitudes() {
    let d = op("displace(20, 0.2)*basis(20, 0, 0)");
    let alpha: f64 = 0.2;
    let mut fact = 1.0;
    for n in 0..=5 {
        if n > 0 {
            fact *= n as f64;
        }
        let want = (-alpha * alpha / 2.0).exp() * alpha.powi(n as i32) / fact.sqrt();
        assert!((d.get(n, 0).re - want).abs() < 1e-8);
        assert!(d.get(n, 0).im.abs() < 1e-12);
    }
}

#[test]
fn kron_ordering_and_dimension_errors() {
    let k = op("kron(destroy(3), eye(2))");
    // index = i_A * 2 + i_B
    assert_eq!(k.get(0, 2).re, 1.0);
    assert_eq!(k.get(1, 3).re, 1.0);
    assert!(matches!(
        eval_str("eye(2) + eye(3)", &BTreeMap::new(), 1),
        Err(Error::DimensionMismatch { .. })
    ));
    assert!(eval_str("kron(eye(2), 3)", &BTreeMap::new(), 1).is_err());
}

#[test]
fn symbols_and_cycles() {
    let mut s = BTreeMap::new();
    s.insert("a".to_string(), "kron(destroy(2), eye(2))".to_string());
    s.insert("n".to_string(), "a'*a".to_string());
    match eval_str("n + 2", &s, 4).unwrap() {
        Value::Op(o) => assert_eq!(o.get(3, 3).re, 3.0),
        _ => panic!(),
    }
    s.insert("x".to_string(), "y + id".to_string());
    s.insert("y".to_string(), "2*x".to_string());
    let err = eval_str("x", &s, 4).unwrap_err();
    assert!(err.to_string().contains("cyclic"), "{err}");
    assert!(eval_str("undefined_thing", &s, 4).is_err());
}

fn file_json(slow_h: &str, eps: f64) -> String {
    format!(
        r#"{{
  "factors": [{{"name": "A", "dim": 4}}, {{"name": "B", "dim": 2}}],
  "symbols": {{"a": "kron(destroy(4), eye(2))", "b": "kron(eye(4), sigmam)"}},
  "fast": {{"hamiltonian": "0", "jumps": ["3.1622776601683795*(a - 0.2*id)"]}},
  "slow": {{"hamiltonian": "{slow_h}", "jumps": []}},
  "epsilon": {eps},
  "options": {{"rel_tol_pinv": 1e-11, "metadata": {{"n_trunc": 4}}}}
}}"#
    )
}

#[test]
fn model_file_builds_and_validates() {
    let f = ModelFile::from_json(&file_json("a'*b + a*b'", 0.01)).unwrap();
    let m = f.build::<f64>(&Tolerances::default()).unwrap();
    assert_eq!(m.fast.dim(), 8);
    assert_eq!(m.fast.jumps().len(), 1);
    assert_eq!(m.tolerances.rel_tol_pinv, 1e-11);
    assert_eq!(m.metadata["n_trunc"], 4);
    assert!(m.fast.hamiltonian().max_abs() == 0.0);

    let dir = tempfile::tempdir().unwrap();
    let bad_h = dir.path().join("bad_h.json");
    std::fs::write(
        &bad_h,
        file_json("destroy(2)", 0.01).replace("destroy(2)", "a"),
    )
    .unwrap();
    let err = load_model::<f64>(&bad_h, &Tolerances::default()).unwrap_err();
    assert!(matches!(err, Error::NotHermitian { .. }), "{err}");

    let zero_eps = dir.path().join("zero.json");
    std::fs::write(&zero_eps, file_json("a'*b + a*b'", 0.0)).unwrap();
    assert!(matches!(
        load_model::<f64>(&zero_eps, &Tolerances::default()),
        Err(Error::Schema(_))
    ));

    let unknown = file_json("0", 0.1).replace("\"epsilon\"", "\"bogus\": 1, \"epsilon\"");
    assert!(matches!(
        ModelFile::from_json(&unknown),
        Err(Error::Schema(_))
    ));

    let bad_opt = file_json("0", 0.1).replace("rel_tol_pinv", "no_such_tolerance");
    let f = ModelFile::from_json(&bad_opt).unwrap();
    assert!(f.build::<f64>(&Tolerances::default()).is_err());

    assert!(matches!(
        load_model::<f64>(dir.path().join("missing.json"), &Tolerances::default()),
        Err(Error::Io { .. })
    ));
}

#[test]
fn non_hermitian_qubit_hamiltonian_is_reported_with_deviation() {
    let json = r#"{"factors": [{"name": "Q", "dim": 2}], "fast": {"jumps": ["sigmam"]},
                   "slow": {"hamiltonian": "destroy(2)"}, "epsilon": 0.1}"#;
    let f = ModelFile::from_json(json).unwrap();
    match f.build::<f64>(&Tolerances::default()) {
        Err(Error::NotHermitian { deviation, .. }) => assert!((deviation - 1.0).abs() < 1e-15),
        other => panic!("{other:?}"),
    }
}

#[test]
fn symbols_may_not_shadow_builtins() {
    let json = r#"{"factors": [{"name": "Q", "dim": 2}], "symbols": {"eye": "sigmax"},
                   "fast": {"jumps": ["sigmam"]}, "epsilon": 0.1}"#;
    let f = ModelFile::from_json(json).unwrap();
    assert!(matches!(
        f.build::<f64>(&Tolerances::default()),
        Err(Error::Schema(_))
    ));
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..1000, any::<bool>()).prop_map(|(n, imag)| {
            let x = n as f64 / 8.0;
            Expr::Num(if imag {
                Complex::new(0.0, x)
            } else {
                Complex::new(x, 0.0)
            })
        }),
        prop_oneof![Just("a"), Just("b"), Just("id")].prop_map(|s| Expr::Sym(s.into())),
        Just(Expr::Call {
            name: "sigmax".into(),
            args: vec![]
        }),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            inner.clone().prop_map(|e| Expr::Dagger(Box::new(e))),
            (
                inner.clone(),
                inner.clone(),
                prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul)]
            )
                .prop_map(|(l, r, op)| Expr::bin(op, l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Expr::Call {
                name: "kron".into(),
                args: vec![l, r]
            }),
        ]
    })
}

fn qubit_symbols() -> BTreeMap<String, String> {
    let mut s = BTreeMap::new();
    s.insert("a".into(), "sigmam + 0.25i*sigmaz".into());
    s.insert("b".into(), "basis(2, 1, 0) - 0.5*sigmay".into());
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn prop_print_parse_round_trip(e in arb_expr()) {
        let printed = e.to_string();
        let back = parse_expression(&printed).unwrap();
        prop_assert_eq!(back, e, "printed as {}", printed);
    }

    #[test]
    fn prop_evaluation_is_additive(x in 0usize..3, y in 0usize..3) {
        let pool = ["a", "b' * a", "sigmaz - 2*b"];
        let s = qubit_symbols();
        let get = |src: &str| eval_str(src, &s, 2).unwrap().into_operator(2).unwrap();
        let sum = get(&format!("({}) + ({})", pool[x], pool[y]));
        let parts = &get(pool[x]) + &get(pool[y]);
        prop_assert!(sum.max_abs_diff(&parts) == 0.0);
    }

    #[test]
    fn prop_truncated_commutator(n in 2usize..12) {
        let c = op(&format!("destroy({n})*create({n}) - create({n})*destroy({n})"));
        for i in 0..n - 1 {
            prop_assert!((c.get(i, i) - Complex::new(1.0, 0.0)).norm() < 1e-12);
        }
        prop_assert!((c.get(n - 1, n - 1).re + (n as f64 - 1.0)).abs() < 1e-12);
    }
}
