//! Invariant parts of ideals under the maps of an extension, stability,
//! quantized extensions, and the annihilator closed forms that depend on
//! them.
//!
//! For a finite ring the condition "σ^α(a) ∈ I for every α" is the same as
//! membership in the largest subset of I closed under each σᵢ, so every
//! invariant part is computed as a fixpoint over the generator maps.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::good::{is_good, sigma_preimage};
use crate::module::{BoundedIdeal, FiniteModule, Induced, InducedElement, SubmoduleSet};
use crate::pbw::SkewPBWExtension;
use crate::ring::{FiniteRing, IdealSet, Ring, Side};

/// Largest subset of `ideal` closed under every table in `maps`.
pub fn closure_part(ideal: &IdealSet, maps: &[&[usize]]) -> IdealSet {
    let mut set: BTreeSet<usize> = ideal.members().iter().copied().collect();
    loop {
        let keep: BTreeSet<usize> =
            set.iter().copied().filter(|&a| maps.iter().all(|t| set.contains(&t[a]))).collect();
        if keep.len() == set.len() {
            return IdealSet::from_members(keep.into_iter().collect(), ideal.side());
        }
        set = keep;
    }
}

fn sigma_tables(ext: &SkewPBWExtension<FiniteRing>) -> Vec<&[usize]> {
    ext.sigmas().iter().map(|s| s.table()).collect()
}

fn delta_tables(ext: &SkewPBWExtension<FiniteRing>) -> Vec<&[usize]> {
    ext.deltas().iter().map(|d| d.data().as_slice()).collect()
}

pub fn sigma_part(ext: &SkewPBWExtension<FiniteRing>, ideal: &IdealSet) -> IdealSet {
    closure_part(ideal, &sigma_tables(ext))
}

pub fn delta_part(ext: &SkewPBWExtension<FiniteRing>, ideal: &IdealSet) -> IdealSet {
    closure_part(ideal, &delta_tables(ext))
}

pub fn mixed_part(ext: &SkewPBWExtension<FiniteRing>, ideal: &IdealSet) -> IdealSet {
    let mut maps = sigma_tables(ext);
    maps.extend(delta_tables(ext));
    closure_part(ideal, &maps)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub ideal: IdealSet,
    pub sigma_part: IdealSet,
    pub delta_part: IdealSet,
    pub mixed_part: IdealSet,
    pub sigma_invariant: bool,
    pub delta_invariant: bool,
    /// None when some σᵢ is not bijective.
    pub stable: Option<bool>,
}

/// I_Σ, I_Δ and I_{Σ,Δ} with the invariance flags. The inclusion
/// I_{Σ,Δ} ⊆ I_Σ ∩ I_Δ ⊆ I is asserted.
pub fn invariant_parts(ext: &SkewPBWExtension<FiniteRing>, ideal: &IdealSet) -> Result<InvariantReport> {
    let report = InvariantReport {
        sigma_part: sigma_part(ext, ideal),
        delta_part: delta_part(ext, ideal),
        mixed_part: mixed_part(ext, ideal),
        sigma_invariant: sigma_part(ext, ideal).same_members(ideal),
        delta_invariant: delta_part(ext, ideal).same_members(ideal),
        stable: stability_check(ext, ideal).ok(),
        ideal: ideal.clone(),
    };
    let meet = report.sigma_part.intersection(&report.delta_part);
    if !report.mixed_part.is_subset(&meet) || !meet.is_subset(ideal) {
        return Err(Error::AssertionFailed(format!(
            "I_ΣΔ ⊆ I_Σ ∩ I_Δ ⊆ I fails for I = {:?}",
            ideal.members()
        )));
    }
    Ok(report)
}

/// σᵢ(I) = I as sets and δᵢ(I) ⊆ I for every i.
pub fn stability_check(ext: &SkewPBWExtension<FiniteRing>, ideal: &IdealSet) -> Result<bool> {
    if !ext.sigmas().iter().all(|s| s.is_bijective()) {
        return Err(Error::NotBijective);
    }
    let members: BTreeSet<usize> = ideal.members().iter().copied().collect();
    let sigma_ok = sigma_tables(ext).iter().all(|t| ideal.image(t).into_iter().collect::<BTreeSet<_>>() == members);
    let delta_ok = delta_tables(ext).iter().all(|t| ideal.members().iter().all(|&a| members.contains(&t[a])));
    Ok(sigma_ok && delta_ok)
}

/// Elements on which the quantized identities are tested: everything for an
/// enumerable ring, otherwise the generators and their pairwise products.
fn test_elements<R: Ring>(ring: &R) -> Vec<R::Elem> {
    if let Some(all) = ring.elements() {
        return all;
    }
    let gens: Vec<R::Elem> = ring.generator_names().into_iter().map(|(_, g)| g).collect();
    let mut out = vec![ring.one()];
    for (k, a) in gens.iter().enumerate() {
        out.push(a.clone());
        for b in &gens[k..] {
            out.push(ring.mul(a, b));
        }
    }
    out
}

/// qⱼ is a central unit fixed by every σᵢ, killed by every δᵢ, and
/// δⱼσⱼ(a) = qⱼσⱼδⱼ(a) on the test elements.
fn quantizes<R: Ring>(ext: &SkewPBWExtension<R>, j: usize, q: &R::Elem, tests: &[R::Elem]) -> bool {
    let ring = ext.ring();
    if ring.unit_inverse(q).is_none() || !ring.is_central(q) {
        return false;
    }
    let fixed = (0..ext.nvars())
        .all(|i| ext.sigma(i).apply(ring, q) == *q && ring.is_zero(&ext.delta(i).apply(ring, q)));
    fixed
        && tests.iter().all(|a| {
            let ds = ext.delta(j).apply(ring, &ext.sigma(j).apply(ring, a));
            let sd = ext.sigma(j).apply(ring, &ext.delta(j).apply(ring, a));
            ds == ring.mul(q, &sd)
        })
}

/// Checks a proposed vector (q₁,…,qₙ).
pub fn verify_quantized<R: Ring>(ext: &SkewPBWExtension<R>, q: &[R::Elem]) -> bool {
    let tests = test_elements(ext.ring());
    q.len() == ext.nvars() && q.iter().enumerate().all(|(j, qj)| quantizes(ext, j, qj, &tests))
}

/// A witness (q₁,…,qₙ), searched per coordinate. Enumerable rings try every
/// element, 1 first; otherwise the candidates are 1 and the quotients
/// δⱼσⱼ(a)·(σⱼδⱼ(a))⁻¹ over the test elements.
pub fn is_quantized<R: Ring>(ext: &SkewPBWExtension<R>) -> Option<Vec<R::Elem>> {
    let ring = ext.ring();
    let tests = test_elements(ring);
    let mut witness = Vec::with_capacity(ext.nvars());
    for j in 0..ext.nvars() {
        let mut candidates = vec![ring.one()];
        match ring.elements() {
            Some(all) => candidates.extend(all.into_iter().filter(|a| !ring.is_one(a))),
            None => {
                for a in &tests {
                    let ds = ext.delta(j).apply(ring, &ext.sigma(j).apply(ring, a));
                    let sd = ext.sigma(j).apply(ring, &ext.delta(j).apply(ring, a));
                    if let Some(inv) = ring.unit_inverse(&sd) {
                        let q = ring.mul(&ds, &inv);
                        if !candidates.contains(&q) {
                            candidates.push(q);
                        }
                    }
                }
            }
        }
        witness.push(candidates.into_iter().find(|q| quantizes(ext, j, q, &tests))?);
    }
    Some(witness)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub ideal: IdealSet,
    pub inclusion: bool,
    /// I_Σ is closed under every δᵢ.
    pub sigma_part_delta_invariant: bool,
    /// I_Δ is closed under every σᵢ.
    pub delta_part_sigma_invariant: bool,
    /// I_{Σ,Δ} = I_Σ.
    pub mixed_equals_sigma_part: bool,
    /// I_{Σ,Δ} = I_Δ.
    pub mixed_equals_delta_part: bool,
}

/// Checks I_{Σ,Δ} ⊆ I_Σ ∩ I_Δ, that I_Σ Δ-invariant forces I_{Σ,Δ} = I_Σ,
/// and that I_Δ Σ-invariant forces I_{Σ,Δ} = I_Δ. When only I_Δ is
/// Σ-invariant, I_{Σ,Δ} = I_Σ is reported but not required: in F₂[t]/(t²)
/// with d/dt and I = (t), I_Δ = 0 is Σ-invariant while I_Σ = I.
pub fn invariant_identities(ext: &SkewPBWExtension<FiniteRing>, ideal: &IdealSet) -> Result<IdentityReport> {
    let parts = invariant_parts(ext, ideal)?;
    let report = IdentityReport {
        ideal: ideal.clone(),
        inclusion: true,
        sigma_part_delta_invariant: delta_part(ext, &parts.sigma_part).same_members(&parts.sigma_part),
        delta_part_sigma_invariant: sigma_part(ext, &parts.delta_part).same_members(&parts.delta_part),
        mixed_equals_sigma_part: parts.mixed_part.same_members(&parts.sigma_part),
        mixed_equals_delta_part: parts.mixed_part.same_members(&parts.delta_part),
    };
    if report.sigma_part_delta_invariant && !report.mixed_equals_sigma_part {
        return Err(Error::AssertionFailed(format!("I_Σ is Δ-invariant but I_ΣΔ ≠ I_Σ for {:?}", ideal.members())));
    }
    if report.delta_part_sigma_invariant && !report.mixed_equals_delta_part {
        return Err(Error::AssertionFailed(format!("I_Δ is Σ-invariant but I_ΣΔ ≠ I_Δ for {:?}", ideal.members())));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicAnnReport {
    pub element: String,
    pub degree: u32,
    /// I = σ^{-α}(ann_R(m_k R)) for lm(m) = x^α and lc(m) = m_k.
    pub ideal: IdealSet,
    pub ann_r_of_mr: IdealSet,
    pub parts: InvariantReport,
    /// {r : (m·g)·r = 0 for all deg g ≤ D}.
    pub bounded_ann_r_of_ma: IdealSet,
    /// The R-level bound equals I_{Σ,Δ} (it always contains it).
    pub r_level_equal: bool,
    /// Bounded ann_A(mA) has the form J·A for J its constant part.
    pub of_coefficient_form: bool,
    pub sigma_part_closed_form_checked: bool,
}

/// For a good m over a bijective extension: ann_R(mR) = I, ann_A(mR) = I·A,
/// ann_R(mA) = I_{Σ,Δ}, and ann_A(mA) = I_Σ·A when I_Σ is Δ-invariant.
/// Each closed form is compared with a degree-D exhaustive oracle.
pub fn cyclic_annihilators(ind: &Induced, m: &InducedElement, degree: u32) -> Result<CyclicAnnReport> {
    if !ind.ext.classify().bijective {
        return Err(Error::HypothesisNotCertified("extension is not bijective".into()));
    }
    if !is_good(ind, m)?.good {
        return Err(Error::BadParameter(format!("{} is not good", ind.format(m))));
    }
    let ring = ind.ext.ring();
    let module = ind.module;
    let (alpha, lc) = ind.leading(m).ok_or(Error::ZeroModule)?;
    let ann_lc = module.ann_of(module.cyclic(lc).members());
    let ideal = sigma_preimage(ind.ext, &alpha, &ann_lc);
    let n = ind.nvars();

    let mr: Vec<InducedElement> =
        ring.ids().map(|s| ind.act_scalar(m, s)).collect::<Result<BTreeSet<_>>>()?.into_iter().collect();
    let mut ann_r_members = Vec::new();
    for r in ring.ids() {
        let mut kills = true;
        for u in &mr {
            if !ind.act_scalar(u, r)?.is_zero() {
                kills = false;
                break;
            }
        }
        if kills {
            ann_r_members.push(r);
        }
    }
    let ann_r_of_mr = IdealSet::from_members(ann_r_members, Side::TwoSided);
    if !ann_r_of_mr.same_members(&ideal) {
        return Err(Error::OracleMismatch(format!(
            "ann_R(mR) = {:?} but σ^-α(ann(m_k R)) = {:?}",
            ann_r_of_mr.members(),
            ideal.members()
        )));
    }
    let mut ann_a_of_mr: Option<BoundedIdeal> = None;
    for u in mr.iter().filter(|u| !u.is_zero()) {
        let b = ind.bounded_ann(u, degree)?;
        ann_a_of_mr = Some(match ann_a_of_mr {
            None => b,
            Some(a) => a.intersection(&b),
        });
    }
    let closed = BoundedIdeal::with_coefficients_in(n, degree, &ideal);
    if ann_a_of_mr.as_ref().is_some_and(|a| *a != closed) {
        return Err(Error::OracleMismatch(format!("bounded ann_A(mR) ≠ I·A at degree {degree}")));
    }

    let parts = invariant_parts(ind.ext, &ideal)?;
    let ann_ma = ind.bounded_ann_of_cyclic(m, degree)?;
    let one = ann_ma.monomials.iter().position(|g| g.is_one()).unwrap_or(0);
    let constants: Vec<usize> = ann_ma
        .members
        .iter()
        .filter(|t| t.iter().enumerate().all(|(k, &c)| k == one || c == ring.zero_id()))
        .map(|t| t[one])
        .collect();
    let bounded_r = IdealSet::from_members(constants, Side::TwoSided);
    if !parts.mixed_part.is_subset(&bounded_r) {
        return Err(Error::OracleMismatch(format!(
            "I_ΣΔ = {:?} does not annihilate mA to degree {degree}",
            parts.mixed_part.members()
        )));
    }
    let of_coefficient_form = ann_ma == BoundedIdeal::with_coefficients_in(n, degree, &bounded_r);
    let r_level_equal = bounded_r.same_members(&parts.mixed_part);
    if of_coefficient_form && !r_level_equal {
        return Err(Error::OracleMismatch(format!(
            "bounded ann_A(mA) = J·A with J = {:?} ≠ I_ΣΔ = {:?}",
            bounded_r.members(),
            parts.mixed_part.members()
        )));
    }
    let sigma_delta_invariant = delta_part(ind.ext, &parts.sigma_part).same_members(&parts.sigma_part);
    if sigma_delta_invariant && ann_ma != BoundedIdeal::with_coefficients_in(n, degree, &parts.sigma_part) {
        return Err(Error::OracleMismatch(format!("bounded ann_A(mA) ≠ I_Σ·A at degree {degree}")));
    }
    Ok(CyclicAnnReport {
        element: ind.format(m),
        degree,
        ideal,
        ann_r_of_mr,
        parts,
        bounded_ann_r_of_ma: bounded_r,
        r_level_equal,
        of_coefficient_form,
        sigma_part_closed_form_checked: sigma_delta_invariant,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubmoduleWitness {
    pub submodule: SubmoduleSet,
    /// A nonzero element whose annihilator is stable.
    pub witness: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeakCompatibility {
    pub compatible: bool,
    pub submodules: Vec<SubmoduleWitness>,
}

/// Every nonzero submodule contains a nonzero a with ann_R(a)
/// (Σ,Σ⁻¹,Δ)-stable.
pub fn weak_compatibility_check(
    ext: &SkewPBWExtension<FiniteRing>,
    module: &FiniteModule,
) -> Result<WeakCompatibility> {
    if !ext.sigmas().iter().all(|s| s.is_bijective()) {
        return Err(Error::NotBijective);
    }
    let mut stable_elements = BTreeSet::new();
    for a in module.nonzero_ids() {
        if stability_check(ext, &module.ann(a))? {
            stable_elements.insert(a);
        }
    }
    let submodules: Vec<SubmoduleWitness> = module
        .submodules()?
        .into_iter()
        .filter(|s| !s.is_zero())
        .map(|s| {
            let witness = s.nonzero(module).find(|a| stable_elements.contains(a));
            SubmoduleWitness { submodule: s, witness }
        })
        .collect();
    Ok(WeakCompatibility { compatible: submodules.iter().all(|s| s.witness.is_some()), submodules })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fix1, fix2, fix3, fix4};
    use crate::pbw::{ExtensionBuilder, Monomial};
    use crate::ring::{RingMap, SigmaDerivation};
    use std::sync::Arc;

    fn ideal(members: &[usize]) -> IdealSet {
        IdealSet::from_members(members.to_vec(), Side::TwoSided)
    }

    #[test]
    fn sigma_part_of_a_line_under_swap() {
        let a = fix1().unwrap();
        let r = invariant_parts(&a, &ideal(&[0, 1])).unwrap();
        assert_eq!(r.sigma_part.members(), &[0]);
        assert_eq!(r.delta_part.members(), &[0, 1]);
        assert_eq!(r.mixed_part.members(), &[0]);
        assert_eq!(r.stable, Some(false));
        assert!(stability_check(&a, &ideal(&[0])).unwrap());
        let whole = invariant_parts(&a, &IdealSet::whole(a.ring())).unwrap();
        assert!(whole.sigma_invariant && whole.delta_invariant && whole.stable == Some(true));
    }

    #[test]
    fn z4_ideal_is_stable() {
        let a = fix2().unwrap();
        assert!(stability_check(&a, &ideal(&[0, 2])).unwrap());
    }

    /// F₂[t]/(t²) with σ = id and δ = d/dt.
    fn dual_numbers_with_derivative() -> SkewPBWExtension<FiniteRing> {
        let ring = FiniteRing::from_tables(
            &[vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]],
            &[vec![0, 0, 0, 0], vec![0, 1, 2, 3], vec![0, 2, 0, 2], vec![0, 3, 2, 1]],
        )
        .unwrap();
        let sigma = RingMap::identity(&ring);
        let delta = SigmaDerivation::validate(&ring, &sigma, vec![0, 0, 1, 1]).unwrap();
        ExtensionBuilder::new(Arc::new(ring), &["x"]).sigma(0, sigma).derivation(0, delta).build().unwrap()
    }

    #[test]
    fn delta_part_invariance_does_not_force_mixed_equal_sigma_part() {
        let a = dual_numbers_with_derivative();
        let t = ideal(&[0, 2]);
        let r = invariant_identities(&a, &t).unwrap();
        assert!(r.delta_part_sigma_invariant && r.mixed_equals_delta_part);
        assert!(!r.mixed_equals_sigma_part);
        assert!(!r.sigma_part_delta_invariant);
    }

    #[test]
    fn quantized_witnesses() {
        assert_eq!(is_quantized(&fix1().unwrap()), Some(vec![3]));
        assert_eq!(is_quantized(&fix4().unwrap()).map(|q| q.len()), Some(1));
        let d = fix3().unwrap();
        let q = is_quantized(&d).unwrap();
        assert_eq!(q, vec![d.ring().int(2)]);
        assert!(!verify_quantized(&d, &[d.ring().one()]));
        assert_eq!(is_quantized(&dual_numbers_with_derivative()), Some(vec![1]));
    }

    #[test]
    fn annihilators_of_cyclic_submodules() {
        let a = fix1().unwrap();
        let m = FiniteModule::regular(Arc::new(a.ring().clone()));
        let ind = Induced::new(&a, &m).unwrap();
        let r = cyclic_annihilators(&ind, &ind.constant(1), 2).unwrap();
        assert_eq!(r.ideal.members(), &[0, 2]);
        assert_eq!(r.parts.sigma_part.members(), &[0]);
        assert!(r.r_level_equal && r.sigma_part_closed_form_checked);

        let b = fix2().unwrap();
        let m = FiniteModule::regular(Arc::new(b.ring().clone()));
        let ind = Induced::new(&b, &m).unwrap();
        let r = cyclic_annihilators(&ind, &ind.constant(2), 2).unwrap();
        assert_eq!(r.parts.sigma_part.members(), &[0, 2]);
        assert!(r.of_coefficient_form);
        let u = cyclic_annihilators(&ind, &ind.term(1, Monomial::new(vec![1])), 2).unwrap();
        assert!(u.parts.mixed_part.is_zero());
    }

    #[test]
    fn weak_compatibility_examples() {
        let b = fix2().unwrap();
        let z4 = FiniteModule::regular(Arc::new(b.ring().clone()));
        let w = weak_compatibility_check(&b, &z4).unwrap();
        assert!(w.compatible);
        assert_eq!(w.submodules.len(), 2);

        let a = fix1().unwrap();
        let r = FiniteModule::regular(Arc::new(a.ring().clone()));
        let w = weak_compatibility_check(&a, &r).unwrap();
        assert!(!w.compatible);
        assert!(w.submodules.iter().any(|s| s.submodule.members() == [0, 1] && s.witness.is_none()));

        let zero = FiniteModule::zero_module(Arc::new(a.ring().clone()));
        assert!(weak_compatibility_check(&a, &zero).unwrap().compatible);
    }
}
