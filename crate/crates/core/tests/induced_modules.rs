mod common;

use proptest::prelude::*;
use spbw::good::{is_good, sigma_power_table, sigma_preimage};
use spbw::module::{FiniteModule, Induced};
use spbw::pbw::{Monomial, SkewPoly};
use spbw::ring::Side;

/// Every polynomial in one variable of degree ≤ 2.
fn all_quadratics(ext: &common::Ext) -> Vec<SkewPoly<usize>> {
    let ids: Vec<usize> = ext.ring().ids().collect();
    let mut out = Vec::new();
    for &a in &ids {
        for &b in &ids {
            for &c in &ids {
                out.push(ext.from_terms([
                    (Monomial::new(vec![0]), a),
                    (Monomial::new(vec![1]), b),
                    (Monomial::new(vec![2]), c),
                ]));
            }
        }
    }
    out
}

#[test]
fn action_is_associative_on_small_elements() {
    for (name, ext) in common::primary() {
        let module = FiniteModule::regular(ext.ring_arc().clone());
        let ind = Induced::new(&ext, &module).unwrap();
        let polys = all_quadratics(&ext);
        for m in ind.small_elements(2, 2) {
            for f in &polys {
                let mf = ind.act(&m, f).unwrap();
                for g in &polys {
                    let left = ind.act(&mf, g).unwrap();
                    let right = ind.act(&m, &ext.mul(f, g).unwrap()).unwrap();
                    assert_eq!(left, right, "{name}: {}", ind.format(&m));
                }
            }
        }
    }
}

#[test]
fn annihilators_are_right_ideals_and_good_ones_have_the_pulled_back_form() {
    for (name, ext) in common::extended() {
        if !ext.classify().bijective {
            continue;
        }
        for module in common::modules(&ext) {
            let ind = Induced::new(&ext, &module).unwrap();
            for m in ind.small_elements(2, 1) {
                let ann = ind.ann_r(&m).unwrap();
                assert_eq!(ann.side(), Side::Right);
                assert!(ann.is_closed(ext.ring()), "{name}");
                if is_good(&ind, &m).unwrap().good {
                    let (alpha, lc) = ind.leading(&m).unwrap();
                    let expected = sigma_preimage(&ext, &alpha, &module.ann(lc));
                    assert!(ann.same_members(&expected), "{name}: {}", ind.format(&m));
                }
            }
        }
    }
}

#[test]
fn submodule_lattices_are_closed_under_meet_and_join() {
    for (name, ext) in common::extended() {
        for module in common::modules(&ext) {
            let subs = module.submodules().unwrap();
            for a in &subs {
                for b in &subs {
                    assert!(subs.contains(&a.intersection(b)), "{name}");
                    assert!(subs.contains(&a.sum(&module, b)), "{name}");
                }
            }
        }
    }
}

#[test]
fn twisted_modules_satisfy_the_module_axioms() {
    for (name, ext) in common::extended() {
        let ring = ext.ring();
        for module in common::modules(&ext) {
            for k in 0..=3 {
                let table = sigma_power_table(&ext, &Monomial::new(vec![k]));
                let tw = module.twisted(&table);
                for m in tw.ids() {
                    for r in ring.ids() {
                        for s in ring.ids() {
                            assert_eq!(tw.act(m, ring.prod(r, s)), tw.act(tw.act(m, r), s), "{name}");
                            assert_eq!(tw.act(m, ring.sum(r, s)), tw.sum(tw.act(m, r), tw.act(m, s)), "{name}");
                        }
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn action_distributes_over_sums(k in 0usize..6, picks in prop::collection::vec(0usize..1000, 4)) {
        let (_, ext) = common::extended().swap_remove(k);
        let modules = common::modules(&ext);
        let module = &modules[picks[0] % modules.len()];
        let ind = Induced::new(&ext, module).unwrap();
        let elems = ind.small_elements(2, 2);
        let polys = all_quadratics(&ext);
        let (a, b) = (&elems[picks[1] % elems.len()], &elems[picks[2] % elems.len()]);
        let f = &polys[picks[3] % polys.len()];
        let lhs = ind.act(&ind.add(a, b), f).unwrap();
        let rhs = ind.add(&ind.act(a, f).unwrap(), &ind.act(b, f).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
