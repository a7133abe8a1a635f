use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use super::{FiniteModule, SubmoduleSet};
use crate::error::{Error, Result};
use crate::pbw::{Monomial, SkewPBWExtension, SkewPoly};
use crate::ring::{FiniteRing, IdealSet};

/// Default cap on |R|^{#monomials} for bounded annihilator searches.
pub const ANN_SEARCH_CAP: u128 = 10_000_000;

/// An element Σ mᵢ x^{αᵢ} of M⟨X⟩ with nonzero mᵢ ∈ M.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InducedElement {
    terms: BTreeMap<Monomial, usize>,
}

impl InducedElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, usize> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<usize> {
        self.terms.get(m).copied()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A set of polynomials of degree ≤ D, stored as coefficient tuples over
/// `monomials` (all monomials of degree ≤ D).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundedIdeal {
    pub degree: u32,
    pub monomials: Vec<Monomial>,
    pub members: BTreeSet<Vec<usize>>,
}

impl BoundedIdeal {
    /// {f : deg f ≤ D, every coefficient in J}, the degree-≤D part of J·A.
    pub fn with_coefficients_in(n: usize, degree: u32, j: &IdealSet) -> Self {
        let monomials = Monomial::up_to_degree(n, degree);
        let mut members = BTreeSet::new();
        let mut cur = vec![0; monomials.len()];
        fill_tuples(j.members(), 0, &mut cur, &mut members);
        BoundedIdeal { degree, monomials, members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn intersection(&self, other: &BoundedIdeal) -> BoundedIdeal {
        BoundedIdeal {
            degree: self.degree,
            monomials: self.monomials.clone(),
            members: self.members.intersection(&other.members).cloned().collect(),
        }
    }

    /// Only the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.members.len() == 1 && self.members.iter().next().is_some_and(|t| t.iter().all(|&c| c == 0))
    }

    pub fn to_poly(&self, ext: &SkewPBWExtension<FiniteRing>, tuple: &[usize]) -> SkewPoly<usize> {
        ext.from_terms(self.monomials.iter().cloned().zip(tuple.iter().copied()))
    }

    /// The set of coefficients that occur at some position, as ids.
    pub fn coefficient_set(&self) -> BTreeSet<usize> {
        self.members.iter().flat_map(|t| t.iter().copied()).collect()
    }
}

fn fill_tuples(choices: &[usize], k: usize, cur: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
    if k == cur.len() {
        out.insert(cur.clone());
        return;
    }
    for &c in choices {
        cur[k] = c;
        fill_tuples(choices, k + 1, cur, out);
    }
}

/// The induced module M⟨X⟩ of a finite module over an extension of its ring.
#[derive(Debug, Clone, Copy)]
pub struct Induced<'a> {
    pub ext: &'a SkewPBWExtension<FiniteRing>,
    pub module: &'a FiniteModule,
}

impl<'a> Induced<'a> {
    pub fn new(ext: &'a SkewPBWExtension<FiniteRing>, module: &'a FiniteModule) -> Result<Self> {
        if ext.ring() != module.ring() {
            return Err(Error::InvalidInput("module and extension have different coefficient rings".into()));
        }
        Ok(Induced { ext, module })
    }

    fn ring(&self) -> &FiniteRing {
        self.module.ring()
    }

    pub fn nvars(&self) -> usize {
        self.ext.nvars()
    }

    pub fn zero(&self) -> InducedElement {
        InducedElement::default()
    }

    pub fn term(&self, m: usize, alpha: Monomial) -> InducedElement {
        self.from_terms([(alpha, m)])
    }

    pub fn constant(&self, m: usize) -> InducedElement {
        self.term(m, Monomial::one(self.nvars()))
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, usize)>) -> InducedElement {
        let mut out = BTreeMap::new();
        for (a, m) in terms {
            self.add_into(&mut out, a, m);
        }
        InducedElement { terms: out }
    }

    fn add_into(&self, map: &mut BTreeMap<Monomial, usize>, key: Monomial, m: usize) {
        let z = self.module.zero_id();
        if m == z {
            return;
        }
        let v = map.get(&key).map_or(m, |&old| self.module.sum(old, m));
        if v == z {
            map.remove(&key);
        } else {
            map.insert(key, v);
        }
    }

    pub fn add(&self, a: &InducedElement, b: &InducedElement) -> InducedElement {
        let mut terms = a.terms.clone();
        for (k, &m) in &b.terms {
            self.add_into(&mut terms, k.clone(), m);
        }
        InducedElement { terms }
    }

    pub fn neg(&self, a: &InducedElement) -> InducedElement {
        InducedElement { terms: a.terms.iter().map(|(k, &m)| (k.clone(), self.module.negative(m))).collect() }
    }

    pub fn sub(&self, a: &InducedElement, b: &InducedElement) -> InducedElement {
        self.add(a, &self.neg(b))
    }

    /// The right action m·f = Σᵢ mᵢ·(x^{αᵢ} f).
    pub fn act(&self, m: &InducedElement, f: &SkewPoly<usize>) -> Result<InducedElement> {
        let one = self.ring().one_id();
        let mut out = BTreeMap::new();
        for (alpha, &mi) in &m.terms {
            let xf = self.ext.mul(&self.ext.term(one, alpha.clone()), f)?;
            for (gamma, &c) in xf.terms() {
                self.add_into(&mut out, gamma.clone(), self.module.act(mi, c));
            }
        }
        Ok(InducedElement { terms: out })
    }

    pub fn act_scalar(&self, m: &InducedElement, r: usize) -> Result<InducedElement> {
        self.act(m, &self.ext.constant(r))
    }

    /// Leading monomial and coefficient under the extension's order.
    pub fn leading(&self, m: &InducedElement) -> Option<(Monomial, usize)> {
        let order = self.ext.order();
        m.terms
            .iter()
            .reduce(|best, cur| if order.cmp(cur.0, best.0).is_gt() { cur } else { best })
            .map(|(a, &v)| (a.clone(), v))
    }

    pub fn terms_desc<'b>(&self, m: &'b InducedElement) -> Vec<(&'b Monomial, usize)> {
        let order = self.ext.order();
        let mut v: Vec<_> = m.terms.iter().map(|(a, &x)| (a, x)).collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn format(&self, m: &InducedElement) -> String {
        if m.is_zero() {
            return "0".into();
        }
        let one = self.module.is_regular().then(|| self.ring().one_id());
        let parts: Vec<String> = self
            .terms_desc(m)
            .into_iter()
            .map(|(a, v)| {
                let label = self.module.label(v);
                let label = if label.contains('+') || label.contains(' ') {
                    format!("({label})")
                } else {
                    label.to_string()
                };
                if a.is_one() {
                    label
                } else if Some(v) == one {
                    self.ext.format_monomial(a)
                } else {
                    format!("{label}*{}", self.ext.format_monomial(a))
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Parses Σ mᵢ·g_i with mᵢ a bracketed module element (`[(1,0)]`) and
    /// g_i an expression in the extension. Over M = R any expression in the
    /// extension is accepted, read as 1·f.
    pub fn parse(&self, text: &str) -> Result<InducedElement> {
        if self.module.is_regular() {
            let f = self.ext.parse(text)?;
            return Ok(self.from_terms(f.terms().iter().map(|(a, &r)| (a.clone(), r))));
        }
        match crate::expr::evaluate(&crate::expr::parse(text)?, &InducedEval { ind: self })? {
            Parsed::Module(m) => Ok(m),
            Parsed::Scalar(_) => Err(Error::Parse(format!("`{text}` has no module element factor"))),
            Parsed::Mixed => Err(Error::Parse(format!("`{text}` adds a module element to an algebra element"))),
        }
    }

    /// Membership in N⟨X⟩: every coefficient lies in N.
    pub fn in_submodule(&self, m: &InducedElement, n: &SubmoduleSet) -> bool {
        m.terms.values().all(|&v| n.contains(v))
    }

    /// ann_R(m) = {r : m·r = 0}.
    pub fn ann_r(&self, m: &InducedElement) -> Result<IdealSet> {
        let mut members = Vec::new();
        for r in self.ring().ids() {
            if self.act_scalar(m, r)?.is_zero() {
                members.push(r);
            }
        }
        Ok(IdealSet::from_members(members, crate::ring::Side::Right))
    }

    fn images(&self, m: &InducedElement, monomials: &[Monomial]) -> Result<Vec<Vec<InducedElement>>> {
        monomials
            .iter()
            .map(|g| self.ring().ids().map(|c| self.act(m, &self.ext.term(c, g.clone()))).collect())
            .collect()
    }

    fn check_cap(&self, positions: usize, cap: u128) -> Result<()> {
        let candidates = (self.ring().size() as u128).checked_pow(positions as u32).unwrap_or(u128::MAX);
        if candidates > cap {
            return Err(Error::SearchSpaceTooLarge { candidates, cap });
        }
        Ok(())
    }

    /// {f : deg f ≤ D, m·f = 0} by exhaustion over coefficient tuples.
    pub fn bounded_ann(&self, m: &InducedElement, degree: u32) -> Result<BoundedIdeal> {
        self.bounded_ann_capped(m, degree, ANN_SEARCH_CAP)
    }

    pub fn bounded_ann_capped(&self, m: &InducedElement, degree: u32, cap: u128) -> Result<BoundedIdeal> {
        let monomials = Monomial::up_to_degree(self.nvars(), degree);
        self.check_cap(monomials.len(), cap)?;
        let images = self.images(m, &monomials)?;
        let members = self.kernel(&images);
        Ok(BoundedIdeal { degree, monomials, members })
    }

    /// Tuples c with Σₖ images[k][cₖ] = 0. The depth-first search only
    /// extends prefixes whose negated partial sum is reachable by the
    /// remaining positions.
    fn kernel(&self, images: &[Vec<InducedElement>]) -> BTreeSet<Vec<usize>> {
        let k = images.len();
        let mut reach: Vec<HashSet<InducedElement>> = vec![HashSet::new(); k + 1];
        reach[k].insert(self.zero());
        for pos in (0..k).rev() {
            let distinct: HashSet<&InducedElement> = images[pos].iter().collect();
            let mut next = HashSet::new();
            for a in distinct {
                for b in &reach[pos + 1] {
                    next.insert(self.add(a, b));
                }
            }
            reach[pos] = next;
        }
        let mut out = BTreeSet::new();
        let mut tuple = vec![0; k];
        self.kernel_dfs(images, &reach, 0, &self.zero(), &mut tuple, &mut out);
        out
    }

    fn kernel_dfs(
        &self,
        images: &[Vec<InducedElement>],
        reach: &[HashSet<InducedElement>],
        pos: usize,
        partial: &InducedElement,
        tuple: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        if pos == images.len() {
            if partial.is_zero() {
                out.insert(tuple.clone());
            }
            return;
        }
        for (c, img) in images[pos].iter().enumerate() {
            let s = self.add(partial, img);
            if reach[pos + 1].contains(&self.neg(&s)) {
                tuple[pos] = c;
                self.kernel_dfs(images, reach, pos + 1, &s, tuple, out);
            }
        }
    }

    /// {m·f : deg f ≤ D}.
    pub fn bounded_cyclic(&self, m: &InducedElement, degree: u32) -> Result<HashSet<InducedElement>> {
        let monomials = Monomial::up_to_degree(self.nvars(), degree);
        self.check_cap(monomials.len(), ANN_SEARCH_CAP)?;
        let images = self.images(m, &monomials)?;
        let mut set: HashSet<InducedElement> = HashSet::from([self.zero()]);
        for row in &images {
            let distinct: HashSet<&InducedElement> = row.iter().collect();
            let mut next = HashSet::new();
            for a in distinct {
                for b in &set {
                    next.insert(self.add(a, b));
                }
            }
            set = next;
        }
        Ok(set)
    }

    /// {f : deg f ≤ D, (m·g)·f = 0 for every g with deg g ≤ D}, the bounded
    /// stand-in for ann_A(mA).
    pub fn bounded_ann_of_cyclic(&self, m: &InducedElement, degree: u32) -> Result<BoundedIdeal> {
        let monomials = Monomial::up_to_degree(self.nvars(), degree);
        self.check_cap(monomials.len(), ANN_SEARCH_CAP)?;
        let mut generators: BTreeSet<InducedElement> = BTreeSet::new();
        for g in &monomials {
            for c in self.ring().ids() {
                let u = self.act(m, &self.ext.term(c, g.clone()))?;
                if !u.is_zero() {
                    generators.insert(u);
                }
            }
        }
        let mut acc: Option<BoundedIdeal> = None;
        for u in &generators {
            let ann = self.bounded_ann(u, degree)?;
            acc = Some(match acc {
                None => ann,
                Some(a) => a.intersection(&ann),
            });
        }
        Ok(acc.unwrap_or_else(|| {
            let whole = IdealSet::whole(self.ring());
            BoundedIdeal::with_coefficients_in(self.nvars(), degree, &whole)
        }))
    }

    /// Nonzero elements with at most `max_terms` terms of degree ≤ D.
    pub fn small_elements(&self, max_terms: usize, degree: u32) -> Vec<InducedElement> {
        let monomials = Monomial::up_to_degree(self.nvars(), degree);
        let values: Vec<usize> = self.module.nonzero_ids().collect();
        let mut out = Vec::new();
        let mut chosen: Vec<(Monomial, usize)> = Vec::new();
        self.small_rec(&monomials, &values, 0, max_terms, &mut chosen, &mut out);
        out
    }

    fn small_rec(
        &self,
        monomials: &[Monomial],
        values: &[usize],
        start: usize,
        left: usize,
        chosen: &mut Vec<(Monomial, usize)>,
        out: &mut Vec<InducedElement>,
    ) {
        if !chosen.is_empty() {
            out.push(self.from_terms(chosen.iter().cloned()));
        }
        if left == 0 {
            return;
        }
        for k in start..monomials.len() {
            for &v in values {
                chosen.push((monomials[k].clone(), v));
                self.small_rec(monomials, values, k + 1, left - 1, chosen, out);
                chosen.pop();
            }
        }
    }

    /// JSON form: terms sorted descending.
    pub fn to_json(&self, m: &InducedElement) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms_desc(m)
                .into_iter()
                .map(|(a, v)| serde_json::json!({ "monomial": a.exps(), "value": self.module.label(v) }))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use crate::ring::Ring;
    use super::*;
    use crate::fixtures::{fix1, fix2};
    use std::sync::Arc;

    #[test]
    fn action_examples() {
        let a = fix1().unwrap();
        let m = FiniteModule::regular(Arc::new(a.ring().clone()));
        let ind = Induced::new(&a, &m).unwrap();
        let r = a.ring();
        let (e10, e01, e11) =
            (r.parse_element("(1,0)").unwrap(), r.parse_element("(0,1)").unwrap(), r.one_id());
        let x = Monomial::new(vec![1]);
        let el = ind.term(e11, x.clone());
        assert_eq!(ind.act_scalar(&el, e10).unwrap(), ind.term(e01, x));
        assert_eq!(ind.act(&el, &a.one()).unwrap(), el);

        let b = fix2().unwrap();
        let m = FiniteModule::regular(Arc::new(b.ring().clone()));
        let ind = Induced::new(&b, &m).unwrap();
        let el = ind.from_terms([(Monomial::new(vec![0]), 1), (Monomial::new(vec![1]), 2)]);
        assert_eq!(ind.format(&el), "2*x + 1");
        assert_eq!(ind.act_scalar(&el, 2).unwrap(), ind.constant(2));
    }

    #[test]
    fn parsing_elements() {
        let b = fix2().unwrap();
        let m = FiniteModule::regular(Arc::new(b.ring().clone()));
        let ind = Induced::new(&b, &m).unwrap();
        assert_eq!(ind.format(&ind.parse("1 + 2*x").unwrap()), "2*x + 1");

        let a = fix1().unwrap();
        let m = FiniteModule::regular(Arc::new(a.ring().clone())).restrict(&SubmoduleSet::from_members(vec![0, 1]));
        let ind = Induced::new(&a, &m).unwrap();
        let el = ind.parse("[(1,0)]*x + [(1,0)]").unwrap();
        assert_eq!(ind.format(&el), "(1,0)*x + (1,0)");
        assert_eq!(ind.format(&ind.parse("[(1,0)]*x*x").unwrap()), "(1,0)*x^2");
        assert!(ind.parse("x + [(1,0)]").is_err());
        assert!(ind.parse("x").is_err());
    }

    #[test]
    fn annihilators_of_induced_elements() {
        let b = fix2().unwrap();
        let m = FiniteModule::regular(Arc::new(b.ring().clone()));
        let ind = Induced::new(&b, &m).unwrap();
        assert_eq!(ind.ann_r(&ind.constant(2)).unwrap().members(), &[0, 2]);

        let a = fix1().unwrap();
        let m = FiniteModule::regular(Arc::new(a.ring().clone()));
        let ind = Induced::new(&a, &m).unwrap();
        let e10 = a.ring().parse_element("(1,0)").unwrap();
        let el = ind.constant(e10);
        let ann = ind.ann_r(&el).unwrap();
        assert_eq!(ann.labels(a.ring()), vec!["(0,0)", "(0,1)"]);
        let bounded = ind.bounded_ann(&el, 1).unwrap();
        assert_eq!(bounded, BoundedIdeal::with_coefficients_in(1, 1, &ann));
    }

    #[test]
    fn submodule_membership() {
        let a = fix1().unwrap();
        let m = FiniteModule::regular(Arc::new(a.ring().clone()));
        let ind = Induced::new(&a, &m).unwrap();
        let e10 = a.ring().parse_element("(1,0)").unwrap();
        let n = m.cyclic(e10);
        let x = Monomial::new(vec![1]);
        assert!(ind.in_submodule(&ind.term(e10, x.clone()), &n));
        assert!(!ind.in_submodule(&ind.term(a.ring().one_id(), x), &n));
        assert!(ind.in_submodule(&ind.zero(), &m.zero_submodule()));
    }

    #[test]
    fn small_element_count() {
        let b = fix2().unwrap();
        let m = FiniteModule::regular(Arc::new(b.ring().clone()));
        let ind = Induced::new(&b, &m).unwrap();
        // 3 monomials, 3 nonzero values: 9 one-term plus 27 two-term elements.
        assert_eq!(ind.small_elements(2, 2).len(), 36);
    }

    #[test]
    fn search_cap_is_enforced() {
        let b = fix2().unwrap();
        let m = FiniteModule::regular(Arc::new(b.ring().clone()));
        let ind = Induced::new(&b, &m).unwrap();
        let err = ind.bounded_ann_capped(&ind.constant(1), 3, 100).unwrap_err();
        assert!(matches!(err, Error::SearchSpaceTooLarge { candidates: 256, cap: 100 }));
    }
}

#[derive(Clone)]
enum Parsed {
    Module(InducedElement),
    Scalar(SkewPoly<usize>),
    /// A sum of a module element and an algebra element.
    Mixed,
}

struct InducedEval<'a, 'b> {
    ind: &'b Induced<'a>,
}

impl crate::expr::Evaluator for InducedEval<'_, '_> {
    type Value = Parsed;
    fn number(&self, value: &num_rational::BigRational) -> Result<Parsed> {
        use crate::ring::Ring;
        Ok(Parsed::Scalar(self.ind.ext.constant(self.ind.ring().from_rational(value)?)))
    }
    fn identifier(&self, name: &str) -> Result<Parsed> {
        Ok(Parsed::Scalar(self.ind.ext.parse(name)?))
    }
    fn bracket(&self, text: &str) -> Result<Parsed> {
        Ok(Parsed::Module(self.ind.constant(self.ind.module.parse_element(text)?)))
    }
    fn add(&self, a: Parsed, b: Parsed) -> Parsed {
        match (a, b) {
            (Parsed::Module(a), Parsed::Module(b)) => Parsed::Module(self.ind.add(&a, &b)),
            (Parsed::Scalar(a), Parsed::Scalar(b)) => Parsed::Scalar(self.ind.ext.add(&a, &b)),
            _ => Parsed::Mixed,
        }
    }
    fn neg(&self, a: Parsed) -> Parsed {
        match a {
            Parsed::Module(a) => Parsed::Module(self.ind.neg(&a)),
            Parsed::Scalar(a) => Parsed::Scalar(self.ind.ext.neg(&a)),
            Parsed::Mixed => Parsed::Mixed,
        }
    }
    fn mul(&self, a: Parsed, b: Parsed) -> Result<Parsed> {
        match (a, b) {
            (Parsed::Module(m), Parsed::Scalar(f)) => Ok(Parsed::Module(self.ind.act(&m, &f)?)),
            (Parsed::Scalar(f), Parsed::Scalar(g)) => Ok(Parsed::Scalar(self.ind.ext.mul(&f, &g)?)),
            (Parsed::Mixed, _) | (_, Parsed::Mixed) => Ok(Parsed::Mixed),
            _ => Err(Error::Parse("module elements act on the right only".into())),
        }
    }
    fn one(&self) -> Parsed {
        Parsed::Scalar(self.ind.ext.one())
    }
}
