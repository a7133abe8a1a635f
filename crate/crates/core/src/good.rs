//! Good elements of induced modules: elements m whose leading monomial
//! survives every nonzero right scalar multiple m·r.
//!
//! Everything here works over finite coefficient rings, where "for every
//! r ∈ R" is a finite loop. Statements that quantify over all of A are
//! evaluated up to an explicit degree bound and say so in their reports.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::dimension::is_essential_right_ideal;
use crate::error::{Error, Result};
use crate::invariant::weak_compatibility_check;
use crate::module::{BoundedIdeal, FiniteModule, Induced, InducedElement, SubmoduleSet};
use crate::pbw::{Monomial, SkewPBWExtension, SkewPoly};
use crate::ring::{FiniteRing, IdealSet};

/// Largest |R|^k enumerated when comparing mA with its twisted image.
pub const TWIST_SEARCH_CAP: u128 = 1 << 20;

/// Table of σ^α = σ₁^{a₁}∘⋯∘σₙ^{aₙ} on a finite ring.
pub fn sigma_power_table(ext: &SkewPBWExtension<FiniteRing>, alpha: &Monomial) -> Vec<usize> {
    ext.ring().ids().map(|r| ext.sigma_pow(alpha, &r)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GoodVerdict {
    pub good: bool,
    /// A scalar r with m·r ≠ 0 and lm(m·r) ≺ lm(m).
    pub witness: Option<usize>,
}

fn leading_or_err(ind: &Induced, m: &InducedElement) -> Result<(Monomial, usize)> {
    ind.leading(m).ok_or_else(|| Error::BadParameter("the zero element has no leading term".into()))
}

fn require_bijective(ext: &SkewPBWExtension<FiniteRing>) -> Result<()> {
    if !ext.classify().bijective {
        return Err(Error::HypothesisNotCertified("the extension is not bijective".into()));
    }
    Ok(())
}

/// Decides goodness by trying every scalar.
pub fn is_good(ind: &Induced, m: &InducedElement) -> Result<GoodVerdict> {
    let (lm, _) = leading_or_err(ind, m)?;
    for r in ind.module.ring().ids() {
        let mr = ind.act_scalar(m, r)?;
        if let Some((l, _)) = ind.leading(&mr) {
            if l != lm {
                return Ok(GoodVerdict { good: false, witness: Some(r) });
            }
        }
    }
    Ok(GoodVerdict { good: true, witness: None })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub name: &'static str,
    pub holds: bool,
    pub witness: Option<String>,
}

impl Condition {
    fn new(name: &'static str, witness: Option<String>) -> Self {
        Condition { name, holds: witness.is_none(), witness }
    }
}

/// Seven equivalent descriptions of goodness evaluated independently.
#[derive(Debug, Clone, Serialize)]
pub struct GoodCertificate {
    pub element: String,
    pub leading_monomial: Vec<u32>,
    pub leading_value: String,
    /// Conditions quantifying over A are checked on inputs of degree ≤ this.
    pub degree: u32,
    pub conditions: Vec<Condition>,
    pub verdict: bool,
}

/// Evaluates the seven characterizations of goodness and checks that they
/// agree:
///
/// 1. the definition;
/// 2. no nonzero element of mR has a smaller leading monomial;
/// 3. the same over m·g for deg g ≤ D;
/// 4. m_k·σ^α(r) = 0 exactly when m·r = 0;
/// 5. ann_R(m) = σ^{-α}(ann_R(m_k));
/// 6. the degree-≤D part of ann_A(m) is σ^{-α}(ann_R(m_k))·A;
/// 7. m·g ↦ Σ m_k σ^α(b_j) x^{β_j} is a well-defined bijection on deg g ≤ D.
pub fn good_equivalences(ind: &Induced, m: &InducedElement, degree: u32) -> Result<GoodCertificate> {
    require_bijective(ind.ext)?;
    let (alpha, lc) = leading_or_err(ind, m)?;
    let module = ind.module;
    let ring = module.ring();
    let order = ind.ext.order();
    let tab = sigma_power_table(ind.ext, &alpha);
    let label = |r: usize| ring.label(r).to_string();

    let definition = is_good(ind, m)?;
    let c1 = Condition::new("definition", definition.witness.map(label));

    let mut w2 = None;
    for r in ring.ids() {
        let mr = ind.act_scalar(m, r)?;
        if ind.leading(&mr).is_some_and(|(l, _)| order.cmp(&l, &alpha).is_lt()) {
            w2 = Some(label(r));
            break;
        }
    }
    let c2 = Condition::new("min-leading-monomial-over-mR", w2);

    let cyclic = ind.bounded_cyclic(m, degree)?;
    let w3 = cyclic
        .iter()
        .filter(|f| ind.leading(f).is_some_and(|(l, _)| order.cmp(&l, &alpha).is_lt()))
        .min()
        .map(|f| ind.format(f));
    let c3 = Condition::new("min-leading-monomial-over-mA", w3);

    let mut w4 = None;
    for r in ring.ids() {
        let lc_kills = module.act(lc, tab[r]) == module.zero_id();
        if lc_kills != ind.act_scalar(m, r)?.is_zero() {
            w4 = Some(label(r));
            break;
        }
    }
    let c4 = Condition::new("leading-coefficient-biconditional", w4);

    let closed = module.ann(lc).preimage(&tab);
    let ann = ind.ann_r(m)?;
    let w5 = ring
        .ids()
        .find(|&r| ann.contains(r) != closed.contains(r))
        .map(label);
    let c5 = Condition::new("ann-R-closed-form", w5);

    let bounded = ind.bounded_ann(m, degree)?;
    let expected = BoundedIdeal::with_coefficients_in(ind.nvars(), degree, &closed);
    let w6 = bounded
        .members
        .symmetric_difference(&expected.members)
        .next()
        .map(|t| ind.ext.format(&bounded.to_poly(ind.ext, t)));
    let c6 = Condition::new("ann-A-closed-form", w6);

    let w7 = twisted_map_defect(ind, m, lc, &tab, degree)?;
    let c7 = Condition::new("twisted-isomorphism", w7);

    let conditions = vec![c1, c2, c3, c4, c5, c6, c7];
    let verdict = conditions[0].holds;
    if conditions.iter().any(|c| c.holds != verdict) {
        let detail: Vec<String> = conditions.iter().map(|c| format!("{}={}", c.name, c.holds)).collect();
        return Err(Error::EquivalenceBroken(format!("{}: {}", ind.format(m), detail.join(", "))));
    }
    Ok(GoodCertificate {
        element: ind.format(m),
        leading_monomial: alpha.exps().to_vec(),
        leading_value: module.label(lc).to_string(),
        degree,
        conditions,
        verdict,
    })
}

/// Checks that m·g ↦ Σ m_k σ^α(b_j) x^{β_j} is well defined and injective
/// over deg g ≤ D; returns an offending g.
fn twisted_map_defect(
    ind: &Induced,
    m: &InducedElement,
    lc: usize,
    tab: &[usize],
    degree: u32,
) -> Result<Option<String>> {
    let ring = ind.module.ring();
    let monomials = Monomial::up_to_degree(ind.nvars(), degree);
    let size = ring.size();
    let candidates = (size as u128).checked_pow(monomials.len() as u32).unwrap_or(u128::MAX);
    if candidates > TWIST_SEARCH_CAP {
        return Err(Error::SearchSpaceTooLarge { candidates, cap: TWIST_SEARCH_CAP });
    }
    let mut images: Vec<Vec<InducedElement>> = Vec::with_capacity(monomials.len());
    let mut twisted: Vec<Vec<InducedElement>> = Vec::with_capacity(monomials.len());
    for beta in &monomials {
        let mut row = Vec::with_capacity(size);
        let mut trow = Vec::with_capacity(size);
        for b in ring.ids() {
            row.push(ind.act(m, &ind.ext.term(b, beta.clone()))?);
            trow.push(ind.term(ind.module.act(lc, tab[b]), beta.clone()));
        }
        images.push(row);
        twisted.push(trow);
    }
    let mut forward: HashMap<InducedElement, InducedElement> = HashMap::new();
    let mut backward: HashMap<InducedElement, InducedElement> = HashMap::new();
    let mut tuple = vec![0usize; monomials.len()];
    loop {
        let mut mg = ind.zero();
        let mut tw = ind.zero();
        for (k, &b) in tuple.iter().enumerate() {
            mg = ind.add(&mg, &images[k][b]);
            tw = ind.add(&tw, &twisted[k][b]);
        }
        let clash = forward.get(&mg).is_some_and(|t| *t != tw) || backward.get(&tw).is_some_and(|v| *v != mg);
        if clash {
            let g: SkewPoly<usize> = ind.ext.from_terms(monomials.iter().cloned().zip(tuple.iter().copied()));
            return Ok(Some(ind.ext.format(&g)));
        }
        forward.insert(mg.clone(), tw.clone());
        backward.insert(tw, mg);
        if !advance(&mut tuple, size) {
            return Ok(None);
        }
    }
}

fn advance(tuple: &mut [usize], base: usize) -> bool {
    for digit in tuple.iter_mut() {
        *digit += 1;
        if *digit < base {
            return true;
        }
        *digit = 0;
    }
    false
}

/// A scalar r with m·r good: among nonzero m·r the one of least leading
/// monomial, ties broken by the smallest id.
pub fn make_good(ind: &Induced, m: &InducedElement) -> Result<(usize, InducedElement)> {
    leading_or_err(ind, m)?;
    let order = ind.ext.order();
    let mut best: Option<(Monomial, usize, InducedElement)> = None;
    for r in ind.module.ring().ids() {
        let mr = ind.act_scalar(m, r)?;
        let Some((l, _)) = ind.leading(&mr) else { continue };
        if best.as_ref().is_none_or(|(bl, _, _)| order.cmp(&l, bl).is_lt()) {
            best = Some((l, r, mr));
        }
    }
    let (_, r, mr) = best.expect("m·1 = m is nonzero");
    if !is_good(ind, &mr)?.good {
        return Err(Error::AssertionFailed(format!("minimal multiple {} is not good", ind.format(&mr))));
    }
    Ok((r, mr))
}

/// Z(M): the elements whose annihilator is an essential right ideal.
pub fn singular_submodule(module: &FiniteModule) -> SubmoduleSet {
    let ring = module.ring();
    SubmoduleSet::from_members(
        module.ids().filter(|&m| is_essential_right_ideal(ring, &module.ann(m))).collect(),
    )
}

pub fn is_nonsingular(module: &FiniteModule) -> bool {
    singular_submodule(module).is_zero()
}

/// Builds a good element of m·A with leading monomial x^β, raising the
/// exponent of x₁ first, then x₂, and so on. Each step multiplies by xᵢ and
/// then by the smallest nonzero scalar b with σ^γ(b)R ∩ ann_R(c) = 0, where
/// c·x^γ is the leading term after multiplying by xᵢ.
pub fn good_lift(ind: &Induced, m: &InducedElement, beta: &Monomial) -> Result<InducedElement> {
    require_bijective(ind.ext)?;
    let (alpha, _) = leading_or_err(ind, m)?;
    if beta.nvars() != ind.nvars() || !alpha.divides(beta) {
        return Err(Error::BadParameter(format!(
            "target {:?} does not dominate the leading monomial {:?} componentwise",
            beta.exps(),
            alpha.exps()
        )));
    }
    if !is_good(ind, m)?.good {
        return Err(Error::BadParameter(format!("{} is not good", ind.format(m))));
    }
    let ring = ind.module.ring();
    let mut f = m.clone();
    let mut cur = alpha;
    for i in 0..ind.nvars() {
        while cur.exps()[i] < beta.exps()[i] {
            let target = cur.with_exp(i, cur.exps()[i] + 1);
            let h = ind.act(&f, &ind.ext.var(i))?;
            let Some((gamma, c)) = ind.leading(&h) else {
                return Err(Error::NoLiftFound { coordinate: i + 1, reason: "multiplying by the variable gave zero".into() });
            };
            if gamma != target {
                return Err(Error::NoLiftFound { coordinate: i + 1, reason: "leading term collapsed".into() });
            }
            let tab = sigma_power_table(ind.ext, &gamma);
            let ann_c = ind.module.ann(c);
            let b = ring.nonzero_ids().find(|&b| {
                let sb = tab[b];
                ring.ids().all(|r| {
                    let v = ring.prod(sb, r);
                    v == ring.zero_id() || !ann_c.contains(v)
                })
            });
            let Some(b) = b else {
                return Err(Error::NoLiftFound {
                    coordinate: i + 1,
                    reason: format!("no b with σ^γ(b)R ∩ ann({}) = 0", ind.module.label(c)),
                });
            };
            let next = ind.act_scalar(&h, b)?;
            if ind.leading(&next).map(|(l, _)| l) != Some(target.clone()) || !is_good(ind, &next)?.good {
                return Err(Error::AssertionFailed(format!("lift step produced {}", ind.format(&next))));
            }
            f = next;
            cur = target;
        }
    }
    Ok(f)
}

/// Degree bounds of the good-module falsifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FalsifierBounds {
    /// Good elements of degree ≤ d0 (at most two terms) are examined.
    pub d0: u32,
    /// Targets x^β with |β| ≤ d1, searched in m·g for deg g ≤ d1.
    pub d1: u32,
}

impl Default for FalsifierBounds {
    fn default() -> Self {
        FalsifierBounds { d0: 2, d1: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    pub clause: &'static str,
    pub holds: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftGap {
    pub element: String,
    pub target: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FalsifierReport {
    pub bounds: FalsifierBounds,
    pub good_elements: usize,
    pub targets: usize,
    pub gaps: Vec<LiftGap>,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GoodModuleVerdict {
    /// A sufficient condition holds and the falsifier found nothing.
    Good,
    /// No sufficient condition holds and the falsifier found nothing.
    Inconclusive,
    /// The falsifier found a good element without a lift.
    GapFound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoodModuleCertificate {
    pub bijective: bool,
    pub clauses: Vec<ClauseResult>,
    pub fired: Option<&'static str>,
    pub falsifier: FalsifierReport,
    pub verdict: GoodModuleVerdict,
}

impl GoodModuleCertificate {
    pub fn certified(&self) -> bool {
        self.verdict == GoodModuleVerdict::Good
    }
}

/// Checks the sufficient conditions for M⟨X⟩ to be a good module (over a
/// bijective extension): M nonsingular; M = R with good elements of every
/// linear leading monomial in each rA; all δᵢ = 0; weak (Σ,Δ)-compatibility.
/// Then searches for a good element of degree ≤ d0 and a target x^β ⪰ lm
/// in the monomial order with no good element of m·A having that leading
/// monomial.
pub fn certify_good_module(
    ext: &SkewPBWExtension<FiniteRing>,
    module: &FiniteModule,
    bounds: FalsifierBounds,
) -> Result<GoodModuleCertificate> {
    let ind = Induced::new(ext, module)?;
    let bijective = ext.classify().bijective;
    let nonsingular = is_nonsingular(module);
    let mut clauses = vec![ClauseResult {
        clause: "nonsingular",
        holds: nonsingular,
        note: format!("Z(M) has {} element(s)", singular_submodule(module).len()),
    }];
    clauses.push(if module.is_regular() {
        let missing = linear_lift_gap(&ind)?;
        ClauseResult {
            clause: "regular-with-linear-lifts",
            holds: missing.is_none(),
            note: missing.unwrap_or_else(|| "found for every nonzero r and every variable".into()),
        }
    } else {
        ClauseResult { clause: "regular-with-linear-lifts", holds: false, note: "M is not R".into() }
    });
    let endo = ext.classify().endomorphism_type;
    clauses.push(ClauseResult {
        clause: "endomorphism-type",
        holds: endo,
        note: if endo { "all δᵢ = 0".into() } else { "some δᵢ ≠ 0".into() },
    });
    clauses.push(match weak_compatibility_check(ext, module) {
        Ok(w) => ClauseResult {
            clause: "weak-compatibility",
            holds: w.compatible,
            note: format!("{} nonzero submodule(s) examined", w.submodules.len()),
        },
        Err(e) => ClauseResult { clause: "weak-compatibility", holds: false, note: e.to_string() },
    });
    let fired = if bijective { clauses.iter().find(|c| c.holds).map(|c| c.clause) } else { None };
    let falsifier = lift_falsifier(&ind, bounds)?;
    let verdict = if !falsifier.gaps.is_empty() {
        GoodModuleVerdict::GapFound
    } else if fired.is_some() {
        GoodModuleVerdict::Good
    } else {
        GoodModuleVerdict::Inconclusive
    };
    Ok(GoodModuleCertificate { bijective, clauses, fired, falsifier, verdict })
}

/// For M = R: the first (r, i) with no good element of leading monomial xᵢ
/// among r·g, deg g ≤ 1.
fn linear_lift_gap(ind: &Induced) -> Result<Option<String>> {
    let n = ind.nvars();
    for r in ind.module.nonzero_ids() {
        let span = ind.bounded_cyclic(&ind.constant(r), 1)?;
        let mut candidates: Vec<&InducedElement> = span.iter().collect();
        candidates.sort();
        for i in 0..n {
            let xi = Monomial::var(n, i);
            let mut found = false;
            for f in candidates.iter().filter(|f| ind.leading(f).is_some_and(|(l, _)| l == xi)) {
                if is_good(ind, f)?.good {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(Some(format!("none for r = {} and {}", ind.module.label(r), ind.ext.names()[i])));
            }
        }
    }
    Ok(None)
}

fn lift_falsifier(ind: &Induced, bounds: FalsifierBounds) -> Result<FalsifierReport> {
    let order = ind.ext.order();
    let targets_all = Monomial::up_to_degree(ind.nvars(), bounds.d1);
    let mut report =
        FalsifierReport { bounds, good_elements: 0, targets: 0, gaps: Vec::new(), skipped: None };
    for m in ind.small_elements(2, bounds.d0) {
        if !is_good(ind, &m)?.good {
            continue;
        }
        let (alpha, _) = leading_or_err(ind, &m)?;
        let span = match ind.bounded_cyclic(&m, bounds.d1) {
            Ok(s) => s,
            Err(Error::SearchSpaceTooLarge { candidates, cap }) => {
                report.skipped = Some(format!("m·A to degree {}: {candidates} candidates exceed {cap}", bounds.d1));
                return Ok(report);
            }
            Err(e) => return Err(e),
        };
        report.good_elements += 1;
        let mut by_lm: BTreeMap<Monomial, Vec<&InducedElement>> = BTreeMap::new();
        for f in &span {
            if let Some((l, _)) = ind.leading(f) {
                by_lm.entry(l).or_default().push(f);
            }
        }
        for beta in targets_all.iter().filter(|b| order.cmp(b, &alpha).is_ge()) {
            report.targets += 1;
            let mut found = false;
            if let Some(fs) = by_lm.get_mut(beta) {
                fs.sort();
                for f in fs.iter() {
                    if is_good(ind, f)?.good {
                        found = true;
                        break;
                    }
                }
            }
            if !found {
                report.gaps.push(LiftGap { element: ind.format(&m), target: beta.exps().to_vec() });
            }
        }
    }
    Ok(report)
}

/// σ^{-α}(J) for a finite ring.
pub fn sigma_preimage(ext: &SkewPBWExtension<FiniteRing>, alpha: &Monomial, j: &IdealSet) -> IdealSet {
    j.preimage(&sigma_power_table(ext, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fix1, fix2, fix4};
    use std::sync::Arc;

    fn regular(ext: &SkewPBWExtension<FiniteRing>) -> FiniteModule {
        FiniteModule::regular(Arc::new(ext.ring().clone()))
    }

    fn x(n: u32) -> Monomial {
        Monomial::new(vec![n])
    }

    #[test]
    fn one_plus_two_x_over_z4_is_not_good() {
        let a = fix2().unwrap();
        let m = regular(&a);
        let ind = Induced::new(&a, &m).unwrap();
        let f = ind.from_terms([(x(0), 1), (x(1), 2)]);
        let v = is_good(&ind, &f).unwrap();
        assert!(!v.good);
        assert_eq!(v.witness, Some(2));
        let cert = good_equivalences(&ind, &f, 2).unwrap();
        assert!(cert.conditions.iter().all(|c| !c.holds));
        let (r, fr) = make_good(&ind, &f).unwrap();
        assert_eq!(r, 2);
        assert_eq!(fr, ind.constant(2));
    }

    #[test]
    fn unit_times_x_over_product_ring_is_good() {
        let a = fix1().unwrap();
        let m = regular(&a);
        let ind = Induced::new(&a, &m).unwrap();
        let one = a.ring().one_id();
        let f = ind.term(one, x(1));
        assert!(is_good(&ind, &f).unwrap().good);
        let cert = good_equivalences(&ind, &f, 2).unwrap();
        assert!(cert.verdict && cert.conditions.iter().all(|c| c.holds));
        assert!(is_good(&ind, &ind.constant(1)).unwrap().good);
    }

    #[test]
    fn make_good_on_a_mixed_element() {
        let a = fix1().unwrap();
        let m = regular(&a);
        let ind = Induced::new(&a, &m).unwrap();
        let f = ind.from_terms([(x(0), 1), (x(1), a.ring().one_id())]);
        let (_, fr) = make_good(&ind, &f).unwrap();
        assert!(is_good(&ind, &fr).unwrap().good);
    }

    #[test]
    fn singular_submodules() {
        let z4 = fix2().unwrap();
        let m = regular(&z4);
        assert_eq!(singular_submodule(&m).members(), &[0, 2]);
        let p = fix1().unwrap();
        assert!(is_nonsingular(&regular(&p)));
        assert!(is_nonsingular(&FiniteModule::zero_module(Arc::new(p.ring().clone()))));
    }

    #[test]
    fn lifts() {
        let a = fix1().unwrap();
        let m = regular(&a);
        let ind = Induced::new(&a, &m).unwrap();
        let one = ind.constant(a.ring().one_id());
        assert_eq!(good_lift(&ind, &one, &x(0)).unwrap(), one);
        let f = good_lift(&ind, &one, &x(2)).unwrap();
        assert_eq!(ind.leading(&f).unwrap().0, x(2));
        assert!(is_good(&ind, &f).unwrap().good);

        let z4 = fix2().unwrap();
        let m = regular(&z4);
        let ind = Induced::new(&z4, &m).unwrap();
        match good_lift(&ind, &ind.constant(2), &x(1)) {
            Ok(f) => {
                assert!(is_good(&ind, &f).unwrap().good);
                assert_eq!(ind.leading(&f).unwrap().0, x(1));
            }
            Err(e) => assert!(matches!(e, Error::NoLiftFound { coordinate: 1, .. })),
        }
    }

    #[test]
    fn good_module_certificates() {
        for a in [fix1().unwrap(), fix2().unwrap(), fix4().unwrap()] {
            let m = regular(&a);
            let cert = certify_good_module(&a, &m, FalsifierBounds::default()).unwrap();
            assert!(cert.certified(), "{cert:?}");
            assert!(cert.clauses.iter().any(|c| c.clause == "endomorphism-type" && c.holds));
        }
        let p = fix1().unwrap();
        let cert = certify_good_module(&p, &regular(&p), FalsifierBounds::default()).unwrap();
        assert_eq!(cert.fired, Some("nonsingular"));
    }
}
