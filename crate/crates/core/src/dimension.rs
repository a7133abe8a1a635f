//! Essential and uniform submodules, uniform dimension of finite modules,
//! and bounded checks of their transfer to induced modules.
//!
//! Statements about M⟨X⟩ are checked on A-submodules generated by elements
//! of degree ≤ D and multipliers of degree ≤ D. Those checks can refute a
//! claim but never prove one; reports keep the two kinds of evidence apart.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::good::{certify_good_module, FalsifierBounds, GoodModuleCertificate};
use crate::module::{FiniteModule, Induced, InducedElement, SubmoduleSet, SUBMODULE_CAP};
use crate::pbw::{Monomial, SkewPBWExtension};
use crate::ring::{FiniteRing, IdealSet};

/// N is essential in M when every nonzero cyclic mR meets N.
pub fn is_essential(module: &FiniteModule, n: &SubmoduleSet) -> bool {
    module.nonzero_ids().all(|m| !module.cyclic(m).intersection(n).is_zero())
}

/// Essentiality of a right ideal in R_R.
pub fn is_essential_right_ideal(ring: &FiniteRing, ideal: &IdealSet) -> bool {
    ring.nonzero_ids().all(|a| ring.ids().any(|r| {
        let v = ring.prod(a, r);
        v != ring.zero_id() && ideal.contains(v)
    }))
}

fn nonzero_cyclics(module: &FiniteModule, n: &SubmoduleSet) -> Vec<SubmoduleSet> {
    let set: BTreeSet<SubmoduleSet> = n.nonzero(module).map(|m| module.cyclic(m)).collect();
    set.into_iter().collect()
}

/// Any two nonzero submodules of N intersect nontrivially. Cyclic
/// submodules suffice since every nonzero submodule contains one.
pub fn is_uniform(module: &FiniteModule, n: &SubmoduleSet) -> Result<bool> {
    if n.is_zero() {
        return Err(Error::ZeroModule);
    }
    let cyclics = nonzero_cyclics(module, n);
    Ok(cyclics
        .iter()
        .enumerate()
        .all(|(i, a)| cyclics[i + 1..].iter().all(|b| !a.intersection(b).is_zero())))
}

/// A submodule with no nonzero proper submodule.
pub fn is_simple(module: &FiniteModule, n: &SubmoduleSet) -> bool {
    !n.is_zero() && n.nonzero(module).all(|m| module.cyclic(m) == *n)
}

/// The family is independent: its sum is direct.
pub fn is_independent(module: &FiniteModule, family: &[SubmoduleSet]) -> bool {
    let mut sum = module.zero_submodule();
    for u in family {
        if !sum.intersection(u).is_zero() {
            return false;
        }
        sum = sum.sum(module, u);
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UdimResult {
    pub value: usize,
    /// Simple, hence uniform, submodules whose direct sum is essential.
    pub family: Vec<SubmoduleSet>,
    pub provenance: &'static str,
}

/// Uniform dimension by exhaustion. Every nonzero submodule of a finite
/// module contains a simple one, so a maximal independent family of simple
/// submodules realizes the maximum; its sum is the socle, which is
/// essential. Simple submodules are added greedily.
pub fn udim(module: &FiniteModule) -> Result<UdimResult> {
    if module.size() > SUBMODULE_CAP {
        return Err(Error::ModuleTooLarge { size: module.size(), cap: SUBMODULE_CAP });
    }
    let simples: Vec<SubmoduleSet> =
        module.cyclic_submodules().into_iter().filter(|c| is_simple(module, c)).collect();
    let mut family = Vec::new();
    let mut sum = module.zero_submodule();
    for u in simples {
        if sum.intersection(&u).is_zero() {
            sum = sum.sum(module, &u);
            family.push(u);
        }
    }
    let result = UdimResult { value: family.len(), family, provenance: "by-exhaustion" };
    verify_udim(module, &result)?;
    Ok(result)
}

/// Re-checks a witness: independence, uniform members, essential sum.
pub fn verify_udim(module: &FiniteModule, result: &UdimResult) -> Result<()> {
    if result.family.len() != result.value || !is_independent(module, &result.family) {
        return Err(Error::AssertionFailed("udim witness is not an independent family".into()));
    }
    for u in &result.family {
        if !is_uniform(module, u)? {
            return Err(Error::AssertionFailed(format!("udim witness member {:?} is not uniform", u.members())));
        }
    }
    let sum = result.family.iter().fold(module.zero_submodule(), |acc, u| acc.sum(module, u));
    if !is_essential(module, &sum) {
        return Err(Error::AssertionFailed("udim witness sum is not essential".into()));
    }
    Ok(())
}

fn certify_submodule(
    ext: &SkewPBWExtension<FiniteRing>,
    module: &FiniteModule,
    n: &SubmoduleSet,
) -> Result<GoodModuleCertificate> {
    let cert = certify_good_module(ext, &module.restrict(n), FalsifierBounds::default())?;
    if !cert.certified() {
        return Err(Error::HypothesisNotCertified(format!(
            "N⟨X⟩ is not certified good ({:?})",
            cert.verdict
        )));
    }
    Ok(cert)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EssentialTransfer {
    pub degree: u32,
    pub hypothesis: &'static str,
    pub base_essential: bool,
    pub checked: usize,
    /// An element m with no nonzero member of N⟨X⟩ in m·A to degree D.
    pub gap: Option<String>,
    /// The bounded search agrees with the base-level answer.
    pub agrees: bool,
}

/// Compares "N essential in M" with a bounded search in M⟨X⟩: for every
/// nonzero element with at most two terms of degree ≤ D, look for a nonzero
/// member of N⟨X⟩ in m·g, deg g ≤ D.
pub fn essential_induced_bounded(
    ext: &SkewPBWExtension<FiniteRing>,
    module: &FiniteModule,
    n: &SubmoduleSet,
    degree: u32,
) -> Result<EssentialTransfer> {
    let cert = certify_submodule(ext, module, n)?;
    let ind = Induced::new(ext, module)?;
    let base_essential = is_essential(module, n);
    let mut checked = 0;
    let mut gap = None;
    for m in ind.small_elements(2, degree) {
        checked += 1;
        let span = ind.bounded_cyclic(&m, degree)?;
        if !span.iter().any(|f| !f.is_zero() && ind.in_submodule(f, n)) {
            gap = Some(ind.format(&m));
            break;
        }
    }
    Ok(EssentialTransfer {
        degree,
        hypothesis: cert.fired.unwrap_or("none"),
        base_essential,
        checked,
        agrees: base_essential == gap.is_none(),
        gap,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniformTransfer {
    pub degree: u32,
    pub hypothesis: &'static str,
    pub base_uniform: bool,
    /// Two elements of N⟨X⟩ whose bounded cyclic submodules meet only in 0.
    pub independent_pair: Option<(String, String)>,
    pub agrees: bool,
}

/// Compares "N uniform" with a bounded search for two elements of N⟨X⟩
/// (at most two terms, degree ≤ D) whose cyclic spans meet in 0, screened
/// at multiplier degree D and confirmed at 2D.
pub fn uniform_induced_bounded(
    ext: &SkewPBWExtension<FiniteRing>,
    module: &FiniteModule,
    n: &SubmoduleSet,
    degree: u32,
) -> Result<UniformTransfer> {
    let cert = certify_submodule(ext, module, n)?;
    let base_uniform = is_uniform(module, n)?;
    let sub = module.restrict(n);
    let ind = Induced::new(ext, &sub)?;
    let spans = distinct_spans(&ind, degree)?;
    let mut pair = None;
    'outer: for (i, (a, sa)) in spans.iter().enumerate() {
        for (b, sb) in &spans[i + 1..] {
            if meet_is_zero(sa, sb) && confirm_independent(&ind, &[a.clone(), b.clone()], degree)? {
                pair = Some((ind.format(a), ind.format(b)));
                break 'outer;
            }
        }
    }
    Ok(UniformTransfer {
        degree,
        hypothesis: cert.fired.unwrap_or("none"),
        base_uniform,
        agrees: base_uniform == pair.is_none(),
        independent_pair: pair,
    })
}

type Span = HashSet<InducedElement>;

/// Bounded cyclic spans of the small elements, one per distinct span.
fn distinct_spans(ind: &Induced, degree: u32) -> Result<Vec<(InducedElement, Span)>> {
    let mut seen: BTreeSet<Vec<InducedElement>> = BTreeSet::new();
    let mut out = Vec::new();
    for m in ind.small_elements(2, degree) {
        let span = ind.bounded_cyclic(&m, degree)?;
        let mut key: Vec<InducedElement> = span.iter().cloned().collect();
        key.sort();
        if seen.insert(key) {
            out.push((m, span));
        }
    }
    Ok(out)
}

fn meet_is_zero(a: &Span, b: &Span) -> bool {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small.iter().all(|f| f.is_zero() || !large.contains(f))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UdimTransfer {
    pub value: usize,
    pub base: UdimResult,
    pub provenance: String,
    pub degree: u32,
    /// Generators of value + 1 independent bounded cyclic A-submodules.
    pub counterexample: Option<Vec<String>>,
}

/// Reports udim(M⟨X⟩_A) = udim(M_R), which holds when M⟨X⟩ is a good
/// module over a bijective extension, after certifying that hypothesis.
/// Then searches for udim(M) + 1 elements of degree ≤ D whose cyclic spans
/// form a direct sum, screened at multiplier degree D and confirmed at 2D.
pub fn udim_induced(ext: &SkewPBWExtension<FiniteRing>, module: &FiniteModule, degree: u32) -> Result<UdimTransfer> {
    let cert = certify_good_module(ext, module, FalsifierBounds::default())?;
    let Some(clause) = cert.fired.filter(|_| cert.certified()) else {
        return Err(Error::HypothesisNotCertified(format!("M⟨X⟩ is not certified good ({:?})", cert.verdict)));
    };
    let base = udim(module)?;
    let ind = Induced::new(ext, module)?;
    let spans = distinct_spans(&ind, degree)?;
    let mut chosen = Vec::new();
    let found = independent_family(&ind, &spans, base.value + 1, 0, &HashSet::from([ind.zero()]), degree, &mut chosen)?;
    Ok(UdimTransfer {
        value: base.value,
        provenance: format!("by-theorem(good module: {clause})"),
        base,
        degree,
        counterexample: found.then(|| chosen.iter().map(|&k| ind.format(&spans[k].0)).collect()),
    })
}

fn independent_family(
    ind: &Induced,
    spans: &[(InducedElement, Span)],
    want: usize,
    start: usize,
    sum: &Span,
    degree: u32,
    chosen: &mut Vec<usize>,
) -> Result<bool> {
    if chosen.len() == want {
        let gens: Vec<InducedElement> = chosen.iter().map(|&k| spans[k].0.clone()).collect();
        return confirm_independent(ind, &gens, degree);
    }
    for k in start..spans.len() {
        let span = &spans[k].1;
        if chosen.iter().any(|&c| !meet_is_zero(&spans[c].1, span)) || !meet_is_zero(sum, span) {
            continue;
        }
        let next: Span = if chosen.len() + 1 == want {
            Span::new()
        } else {
            sum.iter().flat_map(|a| span.iter().map(move |b| ind.add(a, b))).collect()
        };
        chosen.push(k);
        if independent_family(ind, spans, want, k + 1, &next, degree, chosen)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

/// {Σ gᵢ·fᵢ : deg fᵢ ≤ D}, built as an additive subgroup so its size is
/// bounded by the number of elements of the ambient degree.
pub(crate) fn span_of(ind: &Induced, gens: &[InducedElement], degree: u32) -> Result<Span> {
    let monomials = Monomial::up_to_degree(ind.nvars(), degree);
    let mut set: Span = HashSet::from([ind.zero()]);
    for g in gens {
        for mono in &monomials {
            for c in ind.ext.ring().nonzero_ids() {
                let v = ind.act(g, &ind.ext.term(c, mono.clone()))?;
                if v.is_zero() || set.contains(&v) {
                    continue;
                }
                let mut grown = set.clone();
                let mut frontier: Vec<InducedElement> = set.iter().cloned().collect();
                while let Some(a) = frontier.pop() {
                    let b = ind.add(&a, &v);
                    if grown.insert(b.clone()) {
                        frontier.push(b);
                    }
                }
                set = grown;
            }
        }
    }
    Ok(set)
}

/// Screening at multiplier degree D can miss intersections that need
/// larger multipliers. A family is confirmed when each member's degree-D
/// span still meets the degree-2D span of the others only in 0.
fn confirm_independent(ind: &Induced, gens: &[InducedElement], degree: u32) -> Result<bool> {
    for k in 0..gens.len() {
        let own = ind.bounded_cyclic(&gens[k], degree)?;
        let others: Vec<InducedElement> =
            gens.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, g)| g.clone()).collect();
        if !meet_is_zero(&own, &span_of(ind, &others, 2 * degree)?) {
            return Ok(false);
        }
    }
    Ok(true)
}
