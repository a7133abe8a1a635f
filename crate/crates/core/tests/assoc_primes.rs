mod common;

use proptest::prelude::*;
use spbw::good::is_good;
use spbw::module::Induced;
use spbw::primes::{ass, ass_induced, find_good_prime, is_prime_module, is_prime_submodule, prime_annihilator_with, CaseInputs};
use spbw::Error;

#[test]
fn prime_modules_have_prime_annihilators() {
    for (name, ext) in common::extended() {
        for module in common::modules(&ext) {
            for n in common::nonzero_submodules(&module) {
                if let Some(w) = is_prime_submodule(&module, &n).unwrap() {
                    assert!(w.ideal.is_prime(ext.ring()), "{name}");
                    assert!(w.ideal.same_members(&module.ann_of(n.members())), "{name}");
                }
            }
            if let Some(w) = is_prime_module(&module).unwrap() {
                assert!(w.ideal.is_prime(ext.ring()), "{name}");
            }
        }
    }
}

#[test]
fn associated_primes_come_with_prime_witnesses() {
    for (name, ext) in common::extended() {
        for module in common::modules(&ext) {
            let primes = ass(&module).unwrap();
            assert!(!primes.is_empty(), "{name}");
            for w in &primes {
                assert!(w.ideal.is_prime(ext.ring()), "{name}");
                let again = is_prime_submodule(&module, &w.submodule).unwrap().expect("witness is prime");
                assert!(again.ideal.same_members(&w.ideal), "{name}");
            }
        }
    }
}

#[test]
fn annihilator_closed_forms_match_the_oracle_on_all_fixtures() {
    for (name, ext) in common::extended() {
        if !ext.classify().bijective {
            continue;
        }
        for module in common::modules(&ext) {
            let ind = Induced::new(&ext, &module).unwrap();
            let inputs = CaseInputs::for_module(&ind).unwrap();
            for m in ind.small_elements(2, 1) {
                if !is_good(&ind, &m).unwrap().good {
                    continue;
                }
                let (_, lc) = ind.leading(&m).unwrap();
                if is_prime_submodule(&module, &module.cyclic(lc)).unwrap().is_none() {
                    continue;
                }
                let r = prime_annihilator_with(&ind, &m, 2, &inputs).unwrap();
                assert_ne!(r.oracle.agrees, Some(false), "{name}: {}", r.element);
                let first = r.cases.first().map(|c| &c.generator);
                assert!(r.cases.iter().all(|c| Some(&c.generator) == first), "{name}");
            }
            let report = ass_induced(&ext, &module, 2).unwrap();
            for e in &report.entries {
                assert_ne!(e.oracle.agrees, Some(false), "{name}");
            }
            if let Some(p) = report.primality {
                assert_eq!(p.mixed_part_sigma_stable, p.bounded_prime, "{name}");
            }
        }
    }
}

proptest! {
    #[test]
    fn good_primes_satisfy_their_postconditions(k in 0usize..5, picks in prop::collection::vec(0usize..10_000, 1..3)) {
        let bijective: Vec<_> = common::extended().into_iter().filter(|(_, e)| e.classify().bijective).collect();
        let (_, ext) = &bijective[k % bijective.len()];
        let modules = common::modules(ext);
        let module = &modules[picks[0] % modules.len()];
        let ind = Induced::new(ext, module).unwrap();
        let elems = ind.small_elements(2, 1);
        let gens: Vec<_> = picks.iter().map(|&p| elems[p % elems.len()].clone()).collect();
        match find_good_prime(&ind, &gens, 1) {
            Ok(f) => {
                prop_assert!(is_good(&ind, &f).unwrap().good);
                let (_, lc) = ind.leading(&f).unwrap();
                prop_assert!(is_prime_submodule(module, &module.cyclic(lc)).unwrap().is_some());
            }
            Err(e) => prop_assert!(matches!(e, Error::NotFoundAtBound(_)), "{e}"),
        }
    }
}
