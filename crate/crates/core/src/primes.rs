//! Prime submodules and associated primes of finite modules, and the
//! closed forms for annihilators and associated primes of induced modules.
//!
//! An ideal Q of A is carried as its generating ideal J of R together with
//! the statement Q = J⟨X⟩; it is compared with exhaustive annihilator
//! oracles truncated at degree D.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dimension::span_of;
use crate::error::{Error, Result};
use crate::good::{certify_good_module, is_good, make_good, sigma_power_table, sigma_preimage, FalsifierBounds};
use crate::invariant::{delta_part, is_quantized, mixed_part, stability_check};
use crate::module::{BoundedIdeal, FiniteModule, Induced, InducedElement, SubmoduleSet};
use crate::pbw::SkewPBWExtension;
use crate::ring::{FiniteRing, IdealSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeWitness {
    pub submodule: SubmoduleSet,
    /// P = ann_R(N), a prime ideal.
    pub ideal: IdealSet,
}

/// N is prime when every nonzero submodule of N has annihilator ann_R(N).
/// Cyclic submodules suffice: each nonzero submodule contains one, and
/// annihilators only grow when passing to submodules.
pub fn is_prime_submodule(module: &FiniteModule, n: &SubmoduleSet) -> Result<Option<PrimeWitness>> {
    if n.is_zero() {
        return Err(Error::ZeroModule);
    }
    let p = module.ann_of(n.members());
    if !n.nonzero(module).all(|m| module.ann_of(module.cyclic(m).members()).same_members(&p)) {
        return Ok(None);
    }
    if !p.is_prime(module.ring()) {
        return Err(Error::AssertionFailed(format!(
            "annihilator {:?} of a prime submodule is not prime",
            p.members()
        )));
    }
    Ok(Some(PrimeWitness { submodule: n.clone(), ideal: p }))
}

pub fn is_prime_module(module: &FiniteModule) -> Result<Option<PrimeWitness>> {
    is_prime_submodule(module, &module.whole())
}

fn check_cap(module: &FiniteModule) -> Result<()> {
    if module.size() > crate::module::SUBMODULE_CAP {
        return Err(Error::ModuleTooLarge { size: module.size(), cap: crate::module::SUBMODULE_CAP });
    }
    Ok(())
}

/// Ass(M_R): annihilators of prime submodules, one witness each, sorted by
/// ideal. A prime submodule contains a cyclic one with the same
/// annihilator, so cyclic submodules are enough.
pub fn ass(module: &FiniteModule) -> Result<Vec<PrimeWitness>> {
    check_cap(module)?;
    let mut found: BTreeMap<Vec<usize>, PrimeWitness> = BTreeMap::new();
    for c in module.cyclic_submodules() {
        if c.is_zero() {
            continue;
        }
        if let Some(w) = is_prime_submodule(module, &c)? {
            found.entry(w.ideal.members().to_vec()).or_insert(w);
        }
    }
    Ok(found.into_values().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnoughPrimes {
    pub holds: bool,
    pub checked: usize,
    /// Nonzero submodules without a prime submodule.
    pub gaps: Vec<SubmoduleSet>,
}

/// Every nonzero submodule contains a prime submodule. Minimal nonzero
/// submodules of a finite module are simple, hence prime, so a gap is a
/// defect.
pub fn enough_primes(module: &FiniteModule) -> Result<EnoughPrimes> {
    check_cap(module)?;
    let subs: Vec<SubmoduleSet> = module.submodules()?.into_iter().filter(|s| !s.is_zero()).collect();
    let mut gaps = Vec::new();
    for s in &subs {
        let mut has_prime = false;
        for m in s.nonzero(module) {
            if is_prime_submodule(module, &module.cyclic(m))?.is_some() {
                has_prime = true;
                break;
            }
        }
        if !has_prime {
            gaps.push(s.clone());
        }
    }
    if !gaps.is_empty() {
        return Err(Error::AssertionFailed(format!("{} nonzero submodule(s) contain no prime submodule", gaps.len())));
    }
    Ok(EnoughPrimes { holds: true, checked: subs.len(), gaps })
}

/// A good element of the A-submodule generated by `gens` whose leading
/// coefficient generates a prime submodule. The submodule is swept to
/// multiplier degree D; the element of least leading monomial is made good
/// and then multiplied by σ^{-α}(s), where m_k·s generates a prime
/// submodule inside m_k R.
pub fn find_good_prime(ind: &Induced, gens: &[InducedElement], degree: u32) -> Result<InducedElement> {
    let order = ind.ext.order();
    let span = span_of(ind, gens, degree)?;
    let start = span
        .iter()
        .filter_map(|f| ind.leading(f).map(|(l, _)| (l, f)))
        .min_by(|(la, fa), (lb, fb)| order.cmp(la, lb).then_with(|| fa.cmp(fb)))
        .map(|(_, f)| f.clone())
        .ok_or(Error::NotFoundAtBound(degree as usize))?;
    let (_, good) = make_good(ind, &start)?;
    let (alpha, lc) = ind.leading(&good).expect("good elements are nonzero");
    let module = ind.module;
    let table = sigma_power_table(ind.ext, &alpha);
    for s in module.ring().ids() {
        let v = module.act(lc, s);
        if v == module.zero_id() || is_prime_submodule(module, &module.cyclic(v))?.is_none() {
            continue;
        }
        let Some(r) = module.ring().ids().find(|&r| table[r] == s) else { continue };
        let out = ind.act_scalar(&good, r)?;
        let prime_lc = ind.leading(&out).is_some_and(|(_, c)| is_prime_submodule(module, &module.cyclic(c)).ok().flatten().is_some());
        if !is_good(ind, &out)?.good || !prime_lc {
            return Err(Error::AssertionFailed(format!("{} fails the good-prime postconditions", ind.format(&out))));
        }
        return Ok(out);
    }
    Err(Error::NotFoundAtBound(degree as usize))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub tag: &'static str,
    pub generator: IdealSet,
}

/// {f : deg f ≤ D, coefficients in J} compared with a bounded oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub degree: u32,
    pub size: usize,
    /// The oracle set is J·A truncated, for J its constant part.
    pub coefficient_form: Option<IdealSet>,
    pub agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnnCaseReport {
    pub element: String,
    pub prime: IdealSet,
    pub cases: Vec<CaseResult>,
    /// The strongest applicable case, or "inapplicable".
    pub tag: &'static str,
    pub generator: Option<IdealSet>,
    pub oracle: OracleVerdict,
}

/// The extension- and module-level hypotheses the closed forms depend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaseInputs {
    pub bijective: bool,
    pub quantized: bool,
    pub good_module: bool,
}

impl CaseInputs {
    pub fn for_module(ind: &Induced) -> Result<Self> {
        let bijective = ind.ext.classify().bijective;
        Ok(CaseInputs {
            bijective,
            quantized: is_quantized(ind.ext).is_some(),
            good_module: bijective && certify_good_module(ind.ext, ind.module, FalsifierBounds::default())?.certified(),
        })
    }
}

/// Applicable closed forms, strongest hypothesis first: P stable gives P;
/// quantized with σᵢ(P) = P gives P_Δ; quantized over a good module gives
/// σ^{-α}(P_{Σ,Δ}). Every applicable form must agree.
fn closed_forms(
    ext: &SkewPBWExtension<FiniteRing>,
    p: &IdealSet,
    alpha: &crate::pbw::Monomial,
    inputs: &CaseInputs,
) -> Result<Vec<CaseResult>> {
    let mut cases = Vec::new();
    if !inputs.bijective {
        return Ok(cases);
    }
    if stability_check(ext, p)? {
        cases.push(CaseResult { tag: "stable", generator: p.clone() });
    }
    if inputs.quantized && sigma_images_equal(ext, p) {
        cases.push(CaseResult { tag: "quantized-sigma-stable", generator: delta_part(ext, p) });
    }
    if inputs.quantized && inputs.good_module {
        cases.push(CaseResult { tag: "quantized-good", generator: sigma_preimage(ext, alpha, &mixed_part(ext, p)) });
    }
    if let Some(first) = cases.first() {
        if let Some(other) = cases.iter().find(|c| !c.generator.same_members(&first.generator)) {
            return Err(Error::AssertionFailed(format!(
                "cases {} and {} give {:?} and {:?}",
                first.tag,
                other.tag,
                first.generator.members(),
                other.generator.members()
            )));
        }
    }
    Ok(cases)
}

fn sigma_images_equal(ext: &SkewPBWExtension<FiniteRing>, p: &IdealSet) -> bool {
    let members: std::collections::BTreeSet<usize> = p.members().iter().copied().collect();
    ext.sigmas().iter().all(|s| p.image(s.table()).into_iter().collect::<std::collections::BTreeSet<_>>() == members)
}

fn oracle_verdict(ind: &Induced, oracle: &BoundedIdeal, generator: Option<&IdealSet>) -> OracleVerdict {
    let ring = ind.ext.ring();
    let one = oracle.monomials.iter().position(|g| g.is_one()).unwrap_or(0);
    let constants: Vec<usize> = oracle
        .members
        .iter()
        .filter(|t| t.iter().enumerate().all(|(k, &c)| k == one || c == ring.zero_id()))
        .map(|t| t[one])
        .collect();
    let j = IdealSet::from_members(constants, crate::ring::Side::TwoSided);
    let n = ind.nvars();
    let form = (*oracle == BoundedIdeal::with_coefficients_in(n, oracle.degree, &j)).then_some(j);
    OracleVerdict {
        degree: oracle.degree,
        size: oracle.len(),
        coefficient_form: form,
        agrees: generator.map(|g| *oracle == BoundedIdeal::with_coefficients_in(n, oracle.degree, g)),
    }
}

/// ann_A(mA) for a good m whose leading coefficient generates a prime
/// submodule with annihilator P, by the strongest applicable closed form,
/// checked against the degree-D oracle.
pub fn prime_annihilator(ind: &Induced, m: &InducedElement, degree: u32) -> Result<AnnCaseReport> {
    prime_annihilator_with(ind, m, degree, &CaseInputs::for_module(ind)?)
}

/// [`prime_annihilator`] with precomputed hypotheses, for sweeps.
pub fn prime_annihilator_with(
    ind: &Induced,
    m: &InducedElement,
    degree: u32,
    inputs: &CaseInputs,
) -> Result<AnnCaseReport> {
    if !is_good(ind, m)?.good {
        return Err(Error::BadParameter(format!("{} is not good", ind.format(m))));
    }
    let module = ind.module;
    let (alpha, lc) = ind.leading(m).expect("good elements are nonzero");
    let witness = is_prime_submodule(module, &module.cyclic(lc))?
        .ok_or_else(|| Error::BadParameter(format!("m_k R is not prime for {}", ind.format(m))))?;
    let cases = closed_forms(ind.ext, &witness.ideal, &alpha, inputs)?;
    let generator = cases.first().map(|c| c.generator.clone());
    let oracle = oracle_verdict(ind, &ind.bounded_ann_of_cyclic(m, degree)?, generator.as_ref());
    if oracle.agrees == Some(false) {
        return Err(Error::OracleMismatch(format!(
            "ann_A(mA) for {} differs from {:?}⟨X⟩ at degree {degree}",
            ind.format(m),
            generator.as_ref().map(|g| g.members().to_vec())
        )));
    }
    Ok(AnnCaseReport {
        element: ind.format(m),
        prime: witness.ideal,
        tag: cases.first().map_or("inapplicable", |c| c.tag),
        cases,
        generator,
        oracle,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssEntry {
    pub prime: IdealSet,
    pub witness: SubmoduleSet,
    pub good_module: bool,
    pub cases: Vec<CaseResult>,
    pub tag: &'static str,
    /// J with Q = J⟨X⟩.
    pub generator: Option<IdealSet>,
    /// ann_A(N⟨X⟩) for the witness N, truncated at degree D.
    pub oracle: OracleVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimalityCheck {
    pub mixed_part_sigma_stable: bool,
    /// All elements with at most two terms of degree ≤ D have the same
    /// bounded annihilator of their cyclic submodule.
    pub bounded_prime: bool,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedAssReport {
    pub degree: u32,
    pub quantized: Option<Vec<String>>,
    pub enough_primes: bool,
    pub entries: Vec<AssEntry>,
    /// Present when M is prime, quantized and M⟨X⟩ is certified good.
    pub primality: Option<PrimalityCheck>,
}

/// Candidate associated primes of M⟨X⟩_A, one per P ∈ Ass(M_R), with the
/// case that licenses each and a bounded oracle for ann_A(N⟨X⟩).
pub fn ass_induced(ext: &SkewPBWExtension<FiniteRing>, module: &FiniteModule, degree: u32) -> Result<InducedAssReport> {
    if !ext.classify().bijective {
        return Err(Error::HypothesisNotCertified("extension is not bijective".into()));
    }
    let enough = enough_primes(module)?;
    let quantized = is_quantized(ext);
    let mut entries = Vec::new();
    for w in ass(module)? {
        let sub = module.restrict(&w.submodule);
        let good_module = certify_good_module(ext, &sub, FalsifierBounds::default())?.certified();
        let inputs = CaseInputs { bijective: true, quantized: quantized.is_some(), good_module };
        let one = crate::pbw::Monomial::one(ext.nvars());
        let cases = closed_forms(ext, &w.ideal, &one, &inputs)?;
        let generator = cases.first().map(|c| c.generator.clone());
        let ind = Induced::new(ext, module)?;
        let mut acc: Option<BoundedIdeal> = None;
        for n in w.submodule.nonzero(module) {
            let b = ind.bounded_ann_of_cyclic(&ind.constant(n), degree)?;
            acc = Some(match acc {
                None => b,
                Some(a) => a.intersection(&b),
            });
        }
        let oracle = oracle_verdict(&ind, &acc.expect("prime submodules are nonzero"), generator.as_ref());
        if oracle.agrees == Some(false) {
            return Err(Error::OracleMismatch(format!(
                "ann_A(N⟨X⟩) for P = {:?} differs from the closed form at degree {degree}",
                w.ideal.members()
            )));
        }
        entries.push(AssEntry {
            prime: w.ideal,
            witness: w.submodule,
            good_module,
            tag: cases.first().map_or("inapplicable", |c| c.tag),
            cases,
            generator,
            oracle,
        });
    }
    let primality = match (&quantized, is_prime_module(module)) {
        (Some(_), Ok(Some(w))) if certify_good_module(ext, module, FalsifierBounds::default())?.certified() => {
            let stable = stability_check(ext, &mixed_part(ext, &w.ideal))?;
            let bounded = bounded_prime(&Induced::new(ext, module)?, degree)?;
            if stable != bounded {
                return Err(Error::OracleMismatch(format!(
                    "M⟨X⟩ bounded primality {bounded} but σ-stability of P_ΣΔ is {stable}"
                )));
            }
            Some(PrimalityCheck { mixed_part_sigma_stable: stable, bounded_prime: bounded, agrees: true })
        }
        _ => None,
    };
    Ok(InducedAssReport {
        degree,
        quantized: quantized.map(|q| q.iter().map(|&c| ext.ring().label(c).to_string()).collect()),
        enough_primes: enough.holds,
        entries,
        primality,
    })
}

/// The prime-module condition over cyclic A-submodules generated by
/// elements with at most two terms of degree ≤ D.
pub fn bounded_prime(ind: &Induced, degree: u32) -> Result<bool> {
    let mut first: Option<BoundedIdeal> = None;
    for m in ind.small_elements(2, degree) {
        let ann = ind.bounded_ann_of_cyclic(&m, degree)?;
        match &first {
            None => first = Some(ann),
            Some(f) if *f != ann => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fix1, fix2};
    use crate::pbw::Monomial;
    use std::sync::Arc;

    fn regular(ext: &SkewPBWExtension<FiniteRing>) -> FiniteModule {
        FiniteModule::regular(Arc::new(ext.ring().clone()))
    }

    #[test]
    fn prime_submodules_of_z4() {
        let z4 = regular(&fix2().unwrap());
        assert!(is_prime_module(&z4).unwrap().is_none());
        let w = is_prime_submodule(&z4, &SubmoduleSet::from_members(vec![0, 2])).unwrap().unwrap();
        assert_eq!(w.ideal.members(), &[0, 2]);
        let a = ass(&z4).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].ideal.members(), &[0, 2]);
        assert!(enough_primes(&z4).unwrap().holds);
        assert_eq!(is_prime_submodule(&z4, &z4.zero_submodule()), Err(Error::ZeroModule));
    }

    #[test]
    fn ass_of_the_product_ring() {
        let r = regular(&fix1().unwrap());
        let a = ass(&r).unwrap();
        let ideals: Vec<&[usize]> = a.iter().map(|w| w.ideal.members()).collect();
        assert_eq!(ideals, vec![&[0, 1][..], &[0, 2][..]]);
        let zero = FiniteModule::zero_module(r.ring_arc().clone());
        assert!(ass(&zero).unwrap().is_empty());
        assert!(enough_primes(&zero).unwrap().holds);
    }

    #[test]
    fn good_primes() {
        let b = fix2().unwrap();
        let m = regular(&b);
        let ind = Induced::new(&b, &m).unwrap();
        let g = find_good_prime(&ind, &[ind.constant(1)], 1).unwrap();
        assert_eq!(ind.leading(&g), Some((Monomial::new(vec![0]), 2)));

        let a = fix1().unwrap();
        let m = regular(&a);
        let ind = Induced::new(&a, &m).unwrap();
        let g = find_good_prime(&ind, &[ind.term(3, Monomial::new(vec![1]))], 1).unwrap();
        let (lm, lc) = ind.leading(&g).unwrap();
        assert_eq!(lm, Monomial::new(vec![1]));
        assert!(lc == 1 || lc == 2);
    }

    #[test]
    fn annihilator_cases() {
        let b = fix2().unwrap();
        let m = regular(&b);
        let ind = Induced::new(&b, &m).unwrap();
        let r = prime_annihilator(&ind, &ind.constant(2), 2).unwrap();
        assert_eq!(r.tag, "stable");
        assert_eq!(r.generator.unwrap().members(), &[0, 2]);

        let a = fix1().unwrap();
        let m = regular(&a);
        let ind = Induced::new(&a, &m).unwrap();
        let r = prime_annihilator(&ind, &ind.constant(1), 2).unwrap();
        assert_eq!(r.tag, "quantized-good");
        assert!(r.generator.unwrap().is_zero());
        assert_eq!(r.oracle.agrees, Some(true));
    }

    #[test]
    fn induced_associated_primes() {
        let b = fix2().unwrap();
        let r = ass_induced(&b, &regular(&b), 2).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].tag, "stable");

        let a = fix1().unwrap();
        let line = regular(&a).restrict(&SubmoduleSet::from_members(vec![0, 1]));
        let r = ass_induced(&a, &line, 2).unwrap();
        assert_eq!(r.entries[0].tag, "quantized-good");
        assert!(r.entries[0].generator.as_ref().unwrap().is_zero());
        let p = r.primality.unwrap();
        assert!(p.mixed_part_sigma_stable && p.bounded_prime);
    }
}
