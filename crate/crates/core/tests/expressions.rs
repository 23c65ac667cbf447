use std::f64::consts::TAU;

use proptest::prelude::*;
use rotor::curve::{ellipse_curve, expr_plane_curve};
use rotor::expr::{parse, Expr};
use rotor::vec::Vec2;

const CORPUS: &str = include_str!("data/expressions.txt");

fn corpus() -> Vec<&'static str> {
    CORPUS.lines().filter(|l| !l.trim().is_empty()).collect()
}

#[test]
fn corpus_prints_and_reparses_identically() {
    let lines = corpus();
    assert_eq!(lines.len(), 100);
    for s in lines {
        let e = parse(s).unwrap_or_else(|err| panic!("{s}: {err}"));
        let printed = e.to_string();
        assert_eq!(parse(&printed).unwrap(), e, "{s} printed as {printed}");
    }
}

#[test]
fn corpus_derivatives_match_central_differences() {
    let h = 1e-5;
    for s in corpus() {
        let e = parse(s).unwrap();
        let d = e.derivative();
        for t in [0.3, 0.77, 1.4] {
            let (Ok(lo), Ok(hi), Ok(exact)) = (e.eval(t - h), e.eval(t + h), d.eval(t)) else { continue };
            let fd = (hi - lo) / (2.0 * h);
            assert!((exact - fd).abs() <= 1e-6 * fd.abs().max(1.0), "{s} at {t}: {exact} vs {fd}");
        }
    }
}

#[test]
fn pythagorean_identity() {
    let e = parse("sin(t)^2 + cos(t)^2").unwrap();
    for i in 0..1000 {
        let t = -50.0 + 0.1 * i as f64 + 0.0123;
        assert!((e.eval(t).unwrap() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn second_derivative_of_t_exp_t() {
    let e = parse("t*exp(t)").unwrap();
    let exact = e.derivative().derivative().eval(1.0).unwrap();
    let h = 1e-3;
    let f = |t: f64| e.eval(t).unwrap();
    let fd = (-f(1.0 - 2.0 * h) + 16.0 * f(1.0 - h) - 30.0 * f(1.0) + 16.0 * f(1.0 + h) - f(1.0 + 2.0 * h)) / (12.0 * h * h);
    assert!((exact - fd).abs() <= 1e-6 * fd.abs());
    assert!((exact - 3.0 * 1f64.exp()).abs() <= 1e-12);
}

#[test]
fn expression_ellipse_matches_catalog_to_third_order() {
    let from_expr = expr_plane_curve("2*cos(t)", "sin(t)", (0.0, TAU)).unwrap();
    let catalog = ellipse_curve(2.0, 1.0, Vec2::zero()).unwrap();
    for i in 0..64 {
        let t = TAU * i as f64 / 64.0;
        for order in 0..=3u8 {
            let (a, b) = if order == 0 {
                (from_expr.position(t).unwrap(), catalog.position(t).unwrap())
            } else {
                (from_expr.derivative(t, order).unwrap(), catalog.derivative(t, order).unwrap())
            };
            assert!((a - b).norm() <= 1e-12, "order {order} at {t}");
        }
    }
}

fn eval_sum(f: &Expr, g: &Expr, t: f64) -> Option<f64> {
    Some(f.eval(t).ok()? + g.eval(t).ok()?)
}

proptest! {
    #[test]
    fn differentiation_is_linear(i in 0usize..100, j in 0usize..100, t in 0.1f64..3.0) {
        let lines = corpus();
        let (f, g) = (parse(lines[i]).unwrap(), parse(lines[j]).unwrap());
        let sum = parse(&format!("({}) + ({})", lines[i], lines[j])).unwrap();
        let (df, dg) = (f.derivative(), g.derivative());
        if let (Some(separate), Ok(joint)) = (eval_sum(&df, &dg, t), sum.derivative().eval(t)) {
            prop_assert!((separate - joint).abs() <= 1e-12 * separate.abs().max(1.0));
        }
    }

    #[test]
    fn printing_is_stable(i in 0usize..100) {
        let e = parse(corpus()[i]).unwrap();
        let once = e.to_string();
        prop_assert_eq!(parse(&once).unwrap().to_string(), once);
    }
}
