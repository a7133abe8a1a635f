#![allow(dead_code)]

use std::sync::Arc;

use spbw::fixtures::{fix1, fix2, fix4};
use spbw::module::{FiniteModule, SubmoduleSet};
use spbw::pbw::{ExtensionBuilder, SkewPBWExtension};
use spbw::ring::{FiniteRing, Ring, RingMap, SigmaDerivation};

pub type Ext = SkewPBWExtension<FiniteRing>;

/// The inner σ-derivation a ↦ c·(a − σ(a)) of a commutative ring.
fn with_inner_derivation(ext: &Ext, c: usize) -> Ext {
    let ring = ext.ring();
    let sigma = ext.sigma(0).clone();
    let table: Vec<usize> = ring.ids().map(|a| ring.prod(c, ring.sum(a, ring.negative(sigma.table()[a])))).collect();
    let delta = SigmaDerivation::validate(ring, &sigma, table).unwrap();
    ExtensionBuilder::new(ext.ring_arc().clone(), ext.names()).derivation(0, delta).build().unwrap()
}

/// F₂[t]/(t²) with σ = id and δ = d/dt; elements a + bt have id a + 2b.
pub fn dual_numbers() -> Ext {
    let ring = FiniteRing::from_tables(
        &[vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]],
        &[vec![0, 0, 0, 0], vec![0, 1, 2, 3], vec![0, 2, 0, 2], vec![0, 3, 2, 1]],
    )
    .unwrap();
    let sigma = RingMap::identity(&ring);
    let delta = SigmaDerivation::validate(&ring, &sigma, vec![0, 0, 1, 1]).unwrap();
    ExtensionBuilder::new(Arc::new(ring), &["x"]).derivation(0, delta).build().unwrap()
}

/// The three primary finite fixtures.
pub fn primary() -> Vec<(&'static str, Ext)> {
    vec![("FIX1", fix1().unwrap()), ("FIX2", fix2().unwrap()), ("FIX4", fix4().unwrap())]
}

/// The primary fixtures plus extensions with nonzero derivations.
pub fn extended() -> Vec<(&'static str, Ext)> {
    let mut out = primary();
    let f1 = fix1().unwrap();
    let e10 = f1.ring().parse_element("(1,0)").unwrap();
    out.push(("FIX1+inner", with_inner_derivation(&f1, e10)));
    let f4 = fix4().unwrap();
    let one = f4.ring().one_id();
    out.push(("FIX4+inner", with_inner_derivation(&f4, one)));
    out.push(("dual", dual_numbers()));
    out
}

/// R, its proper nonzero right ideals as modules, and R ⊕ R when small.
pub fn modules(ext: &Ext) -> Vec<FiniteModule> {
    let ring = ext.ring_arc().clone();
    let regular = FiniteModule::regular(ring.clone());
    let mut out = vec![regular.clone()];
    for sub in regular.submodules().unwrap() {
        if !sub.is_zero() && sub.len() < regular.size() {
            out.push(regular.restrict(&sub));
        }
    }
    out.push(regular.direct_sum(&regular).unwrap());
    out
}

pub fn nonzero_submodules(module: &FiniteModule) -> Vec<SubmoduleSet> {
    module.submodules().unwrap().into_iter().filter(|s| !s.is_zero()).collect()
}
