use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use spbw::fixtures::{fix1, fix2, fix3, fix4};
use spbw::pbw::{ExtensionBuilder, Monomial, SkewPBWExtension, SkewPoly};
use spbw::ring::{BaseField, FiniteRing, Poly, PolyRing, Ring};

/// One-variable oracle: left multiplication by x is
/// x·Σ rᵢxⁱ = Σ σ(rᵢ)x^{i+1} + δ(rᵢ)xⁱ; products are built from it alone.
fn ore_oracle_mul<R: Ring>(a: &SkewPBWExtension<R>, f: &SkewPoly<R::Elem>, g: &SkewPoly<R::Elem>) -> SkewPoly<R::Elem> {
    let ring = a.ring();
    let times_x = |h: &BTreeMap<u32, R::Elem>| {
        let mut out: BTreeMap<u32, R::Elem> = BTreeMap::new();
        for (&i, c) in h {
            for (k, v) in [(i + 1, a.sigma(0).apply(ring, c)), (i, a.delta(0).apply(ring, c))] {
                let s = out.get(&k).map_or(v.clone(), |old| ring.add(old, &v));
                out.insert(k, s);
            }
        }
        out
    };
    let mut g_dense: BTreeMap<u32, R::Elem> =
        g.terms().iter().map(|(m, c)| (m.exps()[0], c.clone())).collect();
    let max = f.degree().unwrap_or(0);
    let mut acc: BTreeMap<u32, R::Elem> = BTreeMap::new();
    for i in 0..=max {
        if let Some(fi) = f.coefficient(&Monomial::new(vec![i])) {
            for (&k, c) in &g_dense {
                let v = ring.mul(fi, c);
                let s = acc.get(&k).map_or(v.clone(), |old| ring.add(old, &v));
                acc.insert(k, s);
            }
        }
        g_dense = times_x(&g_dense);
    }
    a.from_terms(acc.into_iter().map(|(k, c)| (Monomial::new(vec![k]), c)))
}

fn finite_fixtures() -> Vec<(&'static str, SkewPBWExtension<FiniteRing>)> {
    vec![("FIX1", fix1().unwrap()), ("FIX2", fix2().unwrap()), ("FIX4", fix4().unwrap())]
}

fn finite_poly(a: &SkewPBWExtension<FiniteRing>, coeffs: &[usize]) -> SkewPoly<usize> {
    let size = a.ring().size();
    a.from_terms(coeffs.iter().enumerate().map(|(i, &c)| (Monomial::new(vec![i as u32]), c % size)))
}

/// Every term r·x^a with r ≠ 0 and a ≤ 2.
fn small_terms(a: &SkewPBWExtension<FiniteRing>) -> Vec<SkewPoly<usize>> {
    let mut out = Vec::new();
    for r in a.ring().nonzero_ids() {
        for e in 0..=2 {
            out.push(a.term(r, Monomial::new(vec![e])));
        }
    }
    out
}

#[test]
fn products_of_degree_two_terms_associate_in_finite_fixtures() {
    for (name, a) in finite_fixtures() {
        let terms = small_terms(&a);
        for f in &terms {
            for g in &terms {
                let fg = a.mul(f, g).unwrap();
                for h in &terms {
                    let left = a.mul(&fg, h).unwrap();
                    let right = a.mul(f, &a.mul(g, h).unwrap()).unwrap();
                    assert_eq!(left, right, "{name}: {} {} {}", a.format(f), a.format(g), a.format(h));
                }
            }
        }
    }
}

#[test]
fn scalar_expansion_matches_sigma_powers_on_finite_fixtures() {
    for (name, a) in finite_fixtures() {
        for r in a.ring().nonzero_ids() {
            for k in 0..=3u32 {
                let alpha = Monomial::new(vec![k]);
                let prod = a.mul(&a.term(a.ring().one_id(), alpha.clone()), &a.constant(r)).unwrap();
                let (head, rest) = a.expand_pow_scalar(&alpha, &r).unwrap();
                let mut expected = r;
                for _ in 0..k {
                    expected = a.sigma(0).table()[expected];
                }
                assert_eq!(head, expected, "{name}");
                assert!(rest.degree().is_none_or(|d| d < k), "{name}");
                assert_eq!(a.add(&a.term(head, alpha), &rest), prod, "{name}");
                if a.classify().quasi_commutative {
                    assert!(rest.is_zero());
                }
            }
        }
    }
}

#[test]
fn fix3_powers_match_the_ore_oracle() {
    let a = fix3().unwrap();
    let y = a.parse("y").unwrap();
    for k in 0..=5u32 {
        let xk = a.term(a.ring().one(), Monomial::new(vec![k]));
        assert_eq!(a.mul(&xk, &y).unwrap(), ore_oracle_mul(&a, &xk, &y));
    }
    let f = a.parse("x^3*y^2 + y*x - 3").unwrap();
    let g = a.parse("y^3*x^2 - 1/2*x + y").unwrap();
    assert_eq!(a.mul(&f, &g).unwrap(), ore_oracle_mul(&a, &f, &g));
}

#[test]
fn quantum_plane_matches_closed_form() {
    // (y^a x^b)(y^c x^d) = q^{bc} y^{a+c} x^{b+d}
    let k = PolyRing::new(BaseField::Rational, vec![]).unwrap();
    let q = k.int(3);
    let a = ExtensionBuilder::new(Arc::new(k.clone()), &["y", "x"])
        .relation(0, 1, q.clone(), k.zero(), vec![])
        .build()
        .unwrap();
    for (ya, xb, yc, xd) in [(0, 1, 1, 0), (1, 2, 2, 1), (0, 3, 3, 0), (2, 2, 0, 1)] {
        let f = a.term(k.one(), Monomial::new(vec![ya, xb]));
        let g = a.term(k.one(), Monomial::new(vec![yc, xd]));
        let mut coeff = k.one();
        for _ in 0..xb * yc {
            coeff = k.mul(&coeff, &q);
        }
        let expected = a.term(coeff, Monomial::new(vec![ya + yc, xb + xd]));
        assert_eq!(a.mul(&f, &g).unwrap(), expected);
    }
}

fn fixture_index() -> impl Strategy<Value = usize> {
    0usize..3
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn finite_products_match_the_ore_oracle(
        idx in fixture_index(),
        f in prop::collection::vec(0usize..4, 0..4),
        g in prop::collection::vec(0usize..4, 0..4),
    ) {
        let (_, a) = finite_fixtures().swap_remove(idx);
        let (f, g) = (finite_poly(&a, &f), finite_poly(&a, &g));
        prop_assert_eq!(a.mul(&f, &g).unwrap(), ore_oracle_mul(&a, &f, &g));
    }

    #[test]
    fn degree_and_leading_coefficient_of_products(
        idx in fixture_index(),
        f in prop::collection::vec(0usize..4, 1..4),
        g in prop::collection::vec(0usize..4, 1..4),
    ) {
        let (_, a) = finite_fixtures().swap_remove(idx);
        let (f, g) = (finite_poly(&a, &f), finite_poly(&a, &g));
        let fg = a.mul(&f, &g).unwrap();
        if let (Some(df), Some(dg), Some(d)) = (f.degree(), g.degree(), fg.degree()) {
            prop_assert!(d <= df + dg);
        }
        if let (Some((mf, cf)), Some((mg, cg))) = (a.leading(&f), a.leading(&g)) {
            let expected = a.ring().mul(&cf, &a.sigma_pow(&mf, &cg));
            if expected != a.ring().zero_id() {
                prop_assert_eq!(a.leading(&fg), Some((mf.mul(&mg), expected)));
            }
        }
    }

    #[test]
    fn fix3_products_match_the_ore_oracle(
        f in prop::collection::vec((-3i64..4, 0u32..3, 0u32..3), 0..4),
        g in prop::collection::vec((-3i64..4, 0u32..3, 0u32..3), 0..4),
    ) {
        let a = fix3().unwrap();
        let build = |spec: &[(i64, u32, u32)]| {
            let ring = a.ring();
            a.from_terms(spec.iter().map(|&(c, ey, ex)| {
                let mut coeff: Poly = ring.int(c);
                for _ in 0..ey {
                    coeff = ring.mul(&coeff, &ring.var(0));
                }
                (Monomial::new(vec![ex]), coeff)
            }))
        };
        let (f, g) = (build(&f), build(&g));
        prop_assert_eq!(a.mul(&f, &g).unwrap(), ore_oracle_mul(&a, &f, &g));
    }

    #[test]
    fn format_then_parse_round_trips(
        idx in fixture_index(),
        f in prop::collection::vec(0usize..4, 0..4),
    ) {
        let (_, a) = finite_fixtures().swap_remove(idx);
        let f = finite_poly(&a, &f);
        let text = a.format(&f);
        let bracketed = bracket_coefficients(&a, &f);
        prop_assert_eq!(a.parse(&bracketed).unwrap(), f, "{}", text);
    }
}

/// Rewrites a polynomial with every coefficient in `[label]` form.
fn bracket_coefficients(a: &SkewPBWExtension<FiniteRing>, f: &SkewPoly<usize>) -> String {
    if f.is_zero() {
        return "0".into();
    }
    a.terms_desc(f)
        .into_iter()
        .map(|(m, &c)| format!("[{}]*{}", a.ring().label(c), a.format_monomial(m)))
        .collect::<Vec<_>>()
        .join(" + ")
}
