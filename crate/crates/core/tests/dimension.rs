mod common;

use spbw::dimension::{
    essential_induced_bounded, is_essential, is_independent, is_uniform, udim, udim_induced, uniform_induced_bounded,
    verify_udim,
};
use spbw::fixtures::{fix1, fix2};
use spbw::module::FiniteModule;
use spbw::Error;

#[test]
fn essential_submodules_are_closed_under_intersection() {
    for (name, ext) in common::extended() {
        for module in common::modules(&ext) {
            let essential: Vec<_> = module.submodules().unwrap().into_iter().filter(|n| is_essential(&module, n)).collect();
            for a in &essential {
                for b in &essential {
                    assert!(is_essential(&module, &a.intersection(b)), "{name}");
                }
            }
        }
    }
}

#[test]
fn udim_witnesses_re_verify() {
    for (name, ext) in common::extended() {
        for module in common::modules(&ext) {
            let r = udim(&module).unwrap();
            verify_udim(&module, &r).unwrap();
            assert_eq!(r.family.len(), r.value);
            assert!(is_independent(&module, &r.family), "{name}");
            for u in &r.family {
                assert!(is_uniform(&module, u).unwrap(), "{name}");
            }
        }
    }
}

#[test]
fn udim_is_unchanged_by_passing_to_an_essential_submodule() {
    for (name, ext) in common::extended() {
        for module in common::modules(&ext) {
            let value = udim(&module).unwrap().value;
            for n in common::nonzero_submodules(&module) {
                if is_essential(&module, &n) {
                    assert_eq!(udim(&module.restrict(&n)).unwrap().value, value, "{name}");
                }
            }
        }
    }
}

#[test]
fn uniform_dimension_of_the_named_examples() {
    let z4 = fix2().unwrap();
    let m = FiniteModule::regular(z4.ring_arc().clone());
    assert_eq!(udim(&m).unwrap().value, 1);
    let t = udim_induced(&z4, &m, 2).unwrap();
    assert_eq!((t.value, t.counterexample.is_none()), (1, true));

    let f1 = fix1().unwrap();
    let m = FiniteModule::regular(f1.ring_arc().clone());
    assert_eq!(udim(&m).unwrap().value, 2);
    let t = udim_induced(&f1, &m, 2).unwrap();
    assert_eq!((t.value, t.counterexample.is_none()), (2, true));
    assert!(t.provenance.starts_with("by-theorem"));
}

#[test]
fn bounded_transfers_agree_with_the_base_module() {
    for (name, ext) in common::extended() {
        if !ext.classify().bijective {
            continue;
        }
        for module in common::modules(&ext) {
            for n in common::nonzero_submodules(&module) {
                match essential_induced_bounded(&ext, &module, &n, 2) {
                    Ok(r) => assert!(r.agrees, "{name}: {r:?}"),
                    Err(e) => assert!(matches!(e, Error::HypothesisNotCertified(_)), "{e}"),
                }
                match uniform_induced_bounded(&ext, &module, &n, 2) {
                    Ok(r) => assert!(r.agrees, "{name}: {r:?}"),
                    Err(e) => assert!(matches!(e, Error::HypothesisNotCertified(_)), "{e}"),
                }
            }
        }
    }
}
