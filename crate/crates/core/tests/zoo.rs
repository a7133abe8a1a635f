use std::collections::BTreeMap;

use spbw::zoo::{build_preset, PRESETS};
use spbw::Error;

fn params(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

#[test]
fn signatures_reproduce_under_other_parameters() {
    let settings: [(&str, &[(&str, &str)]); 7] = [
        ("quantum-plane", &[("q", "5"), ("base", "7")]),
        ("Dqh", &[("q", "3"), ("h", "1/2")]),
        ("An", &[("n", "2"), ("q1", "2"), ("q2", "5")]),
        ("diffusion", &[("n", "3"), ("c12", "5"), ("c21", "5"), ("c13", "5"), ("c31", "5"), ("c23", "5"), ("c32", "5")]),
        ("so5", &[("base", "7")]),
        ("Uq'so3", &[("s", "3")]),
        ("AW3", &[("w", "3"), ("B", "2"), ("D1", "0")]),
    ];
    for (name, ps) in settings {
        let preset = build_preset(name, &params(ps)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(!preset.signatures.is_empty());
        for s in &preset.signatures {
            let got = preset.ext.parse(&s.product).unwrap();
            assert_eq!(preset.ext.format(&got), s.normal_form, "{name}");
        }
    }
    assert_eq!(PRESETS.len(), 7);
}

#[test]
fn named_relations_in_normal_form() {
    let cases = [
        ("Dqh", "x*y", "2*y*x + 1"),
        ("An", "x1*t1", "3*t1*x1 + 1"),
        ("quantum-plane", "x*y", "2*y*x"),
        ("Uq'so3", "I2*I1", "4*I1*I2 - 2*I3"),
        ("Uq'so3", "I3*I1", "1/4*I1*I3 + 1/2*I2"),
        ("Uq'so3", "I3*I2", "4*I2*I3 - 2*I1"),
    ];
    for (name, expr, expected) in cases {
        let preset = build_preset(name, &BTreeMap::new()).unwrap();
        let got = preset.ext.parse(expr).unwrap();
        assert_eq!(got, preset.ext.parse(expected).unwrap(), "{name}: {expr} = {}", preset.ext.format(&got));
    }
}

/// so(5) as antisymmetric 5×5 matrices, J_ab = E_ab − E_ba.
fn matrix(a: usize, b: usize) -> [[i64; 5]; 5] {
    let mut m = [[0; 5]; 5];
    m[a - 1][b - 1] = 1;
    m[b - 1][a - 1] = -1;
    m
}

fn commutator(x: &[[i64; 5]; 5], y: &[[i64; 5]; 5]) -> [[i64; 5]; 5] {
    let mut out = [[0; 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            out[i][j] = (0..5).map(|k| x[i][k] * y[k][j] - y[i][k] * x[k][j]).sum();
        }
    }
    out
}

#[test]
fn so5_commutators_match_the_matrix_realization() {
    let preset = build_preset("so5", &BTreeMap::new()).unwrap();
    let ext = &preset.ext;
    let pairs: Vec<(usize, usize)> = (1..=5).flat_map(|a| (a + 1..=5).map(move |b| (a, b))).collect();
    for &(a, b) in &pairs {
        for &(m, n) in &pairs {
            let c = commutator(&matrix(a, b), &matrix(m, n));
            let expected: Vec<String> =
                pairs.iter().filter(|&&(u, v)| c[u - 1][v - 1] != 0).map(|&(u, v)| format!("{}*J{u}{v}", c[u - 1][v - 1])).collect();
            let expected = if expected.is_empty() { "0".to_string() } else { expected.join(" + ") };
            let got = ext.parse(&format!("J{a}{b}*J{m}{n} - J{m}{n}*J{a}{b}")).unwrap();
            assert_eq!(got, ext.parse(&expected).unwrap(), "[J{a}{b}, J{m}{n}] = {}", ext.format(&got));
        }
    }
}

#[test]
fn diffusion_algebra_is_a_derivation_type_extension() {
    let uniform = [("n", "3"), ("c12", "2"), ("c21", "2"), ("c13", "2"), ("c31", "2"), ("c23", "2"), ("c32", "2")];
    let preset = build_preset("diffusion", &params(&uniform)).unwrap();
    let c = preset.ext.classify();
    assert!(c.bijective && c.derivation_type && !c.quasi_commutative);
    assert_eq!(preset.ext.nvars(), 3);
}

#[test]
fn inconsistent_diffusion_constants_are_rejected_at_build() {
    let err = build_preset("diffusion", &params(&[("n", "3")])).err().expect("overlap D3 D2 D1 does not resolve");
    assert!(matches!(err, Error::AssociativityFailure(..)), "{err}");
}
