mod common;

use proptest::prelude::*;
use spbw::dimension::is_essential_right_ideal;
use spbw::good::{good_equivalences, good_lift, is_good, make_good, singular_submodule};
use spbw::module::{BoundedIdeal, FiniteModule, Induced};
use spbw::pbw::Monomial;
use spbw::Error;

#[test]
fn seven_conditions_agree_on_the_primary_sweep() {
    for (name, ext) in common::primary() {
        let module = FiniteModule::regular(ext.ring_arc().clone());
        let ind = Induced::new(&ext, &module).unwrap();
        for m in ind.small_elements(2, 2) {
            let cert = good_equivalences(&ind, &m, 2).unwrap();
            assert_eq!(cert.verdict, is_good(&ind, &m).unwrap().good, "{name}: {}", ind.format(&m));
            assert!(cert.conditions.iter().all(|c| c.holds == cert.verdict), "{name}: {:?}", cert);
        }
    }
}

#[test]
fn seven_conditions_agree_on_other_modules_and_derivations() {
    for (name, ext) in common::extended() {
        if !ext.classify().bijective {
            continue;
        }
        for module in common::modules(&ext) {
            let ind = Induced::new(&ext, &module).unwrap();
            for m in ind.small_elements(2, 1) {
                let cert = good_equivalences(&ind, &m, 1).unwrap();
                assert!(cert.conditions.iter().all(|c| c.holds == cert.verdict), "{name}: {:?}", cert);
            }
        }
    }
}

#[test]
fn good_elements_have_annihilator_generated_in_degree_zero() {
    for (name, ext) in common::primary() {
        let module = FiniteModule::regular(ext.ring_arc().clone());
        let ind = Induced::new(&ext, &module).unwrap();
        for m in ind.small_elements(2, 2) {
            if !is_good(&ind, &m).unwrap().good {
                continue;
            }
            let bounded = ind.bounded_ann(&m, 2).unwrap();
            let expected = BoundedIdeal::with_coefficients_in(1, 2, &ind.ann_r(&m).unwrap());
            assert_eq!(bounded, expected, "{name}: {}", ind.format(&m));
        }
    }
}

#[test]
fn make_good_always_returns_a_good_multiple() {
    for (name, ext) in common::extended() {
        if !ext.classify().bijective {
            continue;
        }
        for module in common::modules(&ext) {
            let ind = Induced::new(&ext, &module).unwrap();
            for m in ind.small_elements(2, 2) {
                let (r, out) = make_good(&ind, &m).unwrap();
                assert_eq!(ind.act_scalar(&m, r).unwrap(), out);
                assert!(is_good(&ind, &out).unwrap().good, "{name}: {}", ind.format(&m));
            }
        }
    }
}

#[test]
fn singular_submodule_is_a_submodule() {
    for (_, ext) in common::extended() {
        for module in common::modules(&ext) {
            assert!(singular_submodule(&module).is_closed(&module));
        }
    }
}

#[test]
fn nonsingularity_is_detected_by_good_elements() {
    for (name, ext) in common::extended() {
        if !ext.classify().bijective {
            continue;
        }
        for module in common::modules(&ext) {
            let ind = Induced::new(&ext, &module).unwrap();
            let nonsingular = singular_submodule(&module).is_zero();
            let essential_good = ind.small_elements(2, 2).into_iter().any(|m| {
                is_good(&ind, &m).unwrap().good && is_essential_right_ideal(ext.ring(), &ind.ann_r(&m).unwrap())
            });
            assert_eq!(nonsingular, !essential_good, "{name}");
        }
    }
}

proptest! {
    #[test]
    fn lifts_are_good_with_the_requested_leading_monomial(
        k in 0usize..5,
        pick in 0usize..10_000,
        extra in 0u32..3,
    ) {
        let bijective: Vec<_> = common::extended().into_iter().filter(|(_, e)| e.classify().bijective).collect();
        let (_, ext) = &bijective[k % bijective.len()];
        let module = FiniteModule::regular(ext.ring_arc().clone());
        let ind = Induced::new(ext, &module).unwrap();
        let elems: Vec<_> = ind.small_elements(2, 2).into_iter().filter(|m| is_good(&ind, m).unwrap().good).collect();
        let m = &elems[pick % elems.len()];
        let (alpha, _) = ind.leading(m).unwrap();
        let beta = Monomial::new(vec![alpha.exps()[0] + extra]);
        match good_lift(&ind, m, &beta) {
            Ok(f) => {
                prop_assert!(is_good(&ind, &f).unwrap().good);
                prop_assert_eq!(ind.leading(&f).unwrap().0, beta);
            }
            Err(e) => prop_assert!(matches!(e, Error::NoLiftFound { .. }), "{e}"),
        }
    }
}
