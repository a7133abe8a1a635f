//! Skew PBW extensions σ(R)⟨x₁,…,xₙ⟩: construction, classification and
//! exact normal-form arithmetic.
//!
//! Elements are kept in the left R-basis of standard monomials
//! `r·x₁^{a₁}⋯xₙ^{aₙ}`. Products are normalized by rewriting words in the
//! variables: the leftmost descent `x_j x_i` (j > i) is replaced using
//! `x_j x_i = d_{ij} x_i x_j + r₀ + Σ r_k x_k`, and any scalar that lands to
//! the right of a variable is moved left with `x_t s = σ_t(s) x_t + δ_t(s)`.

mod assoc;
mod monomial;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{self, Evaluator};
use crate::ring::{Ring, RingMap, SigmaDerivation};

pub use assoc::{AssocMode, AssocReport, EXHAUSTIVE_ASSOC_CAP, POST_BUILD_SAMPLES};
pub use monomial::{Monomial, MonomialOrder, OrderKind};

/// Default rewrite budget per multiplication.
pub const DEFAULT_FUEL: u64 = 1_000_000;

const CACHE_CAP: usize = 200_000;

/// Constants of `x_j x_i = d·x_i x_j + r0 + Σ_k r[k]·x_k` for a pair i < j.
#[derive(Debug, Clone, PartialEq)]
pub struct PairRelation<E> {
    pub d: E,
    pub r0: E,
    pub r: Vec<E>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub quasi_commutative: bool,
    pub bijective: bool,
    pub endomorphism_type: bool,
    pub derivation_type: bool,
}

/// An element of the extension: monomial → nonzero left coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SkewPoly<E> {
    terms: BTreeMap<Monomial, E>,
}

impl<E> SkewPoly<E> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms keyed by exponent vector (not in the extension's order).
    pub fn terms(&self) -> &BTreeMap<Monomial, E> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&E> {
        self.terms.get(m)
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }
}

struct Fuel {
    left: u64,
    budget: u64,
}

impl Fuel {
    fn new(budget: u64) -> Self {
        Fuel { left: budget, budget }
    }

    fn spend(&mut self) -> Result<()> {
        if self.left == 0 {
            return Err(Error::RewriteFuelExhausted(self.budget));
        }
        self.left -= 1;
        Ok(())
    }
}

type Word = Vec<u16>;

/// Collects the defining data of an extension. Unset maps default to
/// σᵢ = id and δᵢ = 0, unset relations to `x_j x_i = x_i x_j`.
pub struct ExtensionBuilder<R: Ring> {
    ring: Arc<R>,
    names: Vec<String>,
    sigma: Vec<RingMap<R>>,
    delta: Vec<Option<SigmaDerivation<R>>>,
    relations: BTreeMap<(usize, usize), PairRelation<R::Elem>>,
    order: MonomialOrder,
    fuel: u64,
}

impl<R: Ring> ExtensionBuilder<R> {
    pub fn new<S: AsRef<str>>(ring: Arc<R>, names: &[S]) -> Self {
        let n = names.len();
        let sigma = (0..n).map(|_| RingMap::identity(&*ring)).collect();
        ExtensionBuilder {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
            sigma,
            delta: vec![None; n],
            relations: BTreeMap::new(),
            order: MonomialOrder::deglex(n),
            fuel: DEFAULT_FUEL,
            ring,
        }
    }

    /// Sets σᵢ (0-based) and clears δᵢ.
    pub fn sigma(mut self, i: usize, map: RingMap<R>) -> Self {
        self.sigma[i] = map;
        self.delta[i] = None;
        self
    }

    /// Sets δᵢ together with its twist σᵢ.
    pub fn derivation(mut self, i: usize, delta: SigmaDerivation<R>) -> Self {
        self.sigma[i] = delta.sigma().clone();
        self.delta[i] = Some(delta);
        self
    }

    /// Sets the relation for the pair i < j (0-based). `r` may be shorter
    /// than n; missing entries are zero.
    pub fn relation(mut self, i: usize, j: usize, d: R::Elem, r0: R::Elem, r: Vec<R::Elem>) -> Self {
        let mut r = r;
        r.resize(self.names.len(), self.ring.zero());
        self.relations.insert((i, j), PairRelation { d, r0, r });
        self
    }

    pub fn order(mut self, order: MonomialOrder) -> Self {
        self.order = order;
        self
    }

    pub fn fuel(mut self, fuel: u64) -> Self {
        self.fuel = fuel;
        self
    }

    /// Validates the data, classifies, and runs the post-build
    /// associativity check.
    pub fn build(self) -> Result<SkewPBWExtension<R>> {
        let ext = self.assemble()?;
        ext.validate()?;
        ext.post_build_check()?;
        Ok(ext)
    }

    /// Skips every validation. For exercising the checkers on broken data.
    #[doc(hidden)]
    pub fn build_unchecked(self) -> Result<SkewPBWExtension<R>> {
        self.assemble()
    }

    fn assemble(self) -> Result<SkewPBWExtension<R>> {
        let n = self.names.len();
        let ring = self.ring;
        if self.order.significance().len() != n {
            return Err(Error::InvalidInput("monomial order has the wrong number of variables".into()));
        }
        let mut rel = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let r = match self.relations.get(&(i, j)) {
                    Some(r) if i < j => r.clone(),
                    _ => PairRelation { d: ring.one(), r0: ring.zero(), r: vec![ring.zero(); n] },
                };
                rel.push(r);
            }
        }
        if let Some(&(i, j)) = self.relations.keys().find(|&&(i, j)| i >= j || j >= n) {
            return Err(Error::InvalidInput(format!("relation index ({}, {}) is not a pair i < j ≤ n", i + 1, j + 1)));
        }
        let delta: Vec<SigmaDerivation<R>> = self
            .delta
            .into_iter()
            .zip(&self.sigma)
            .map(|(d, s)| d.unwrap_or_else(|| SigmaDerivation::zero(&*ring, s)))
            .collect();
        let enumerable = ring.elements().is_some();
        let mut ext = SkewPBWExtension {
            n,
            names: self.names,
            sigma: self.sigma,
            delta,
            rel,
            order: self.order,
            flags: Classification {
                quasi_commutative: false,
                bijective: false,
                endomorphism_type: false,
                derivation_type: false,
            },
            fuel: self.fuel,
            enumerable,
            cache: RwLock::new(HashMap::new()),
            ring,
        };
        ext.flags = ext.compute_flags();
        Ok(ext)
    }
}

/// A skew PBW extension together with its normal-form engine.
pub struct SkewPBWExtension<R: Ring> {
    ring: Arc<R>,
    n: usize,
    names: Vec<String>,
    sigma: Vec<RingMap<R>>,
    delta: Vec<SigmaDerivation<R>>,
    /// Row-major n×n; only entries with i < j are meaningful.
    rel: Vec<PairRelation<R::Elem>>,
    order: MonomialOrder,
    flags: Classification,
    fuel: u64,
    enumerable: bool,
    #[allow(clippy::type_complexity)]
    cache: RwLock<HashMap<(Monomial, Monomial), Arc<BTreeMap<Monomial, R::Elem>>>>,
}

impl<R: Ring> std::fmt::Debug for SkewPBWExtension<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SkewPBWExtension")
            .field("ring", &self.ring)
            .field("names", &self.names)
            .field("flags", &self.flags)
            .finish_non_exhaustive()
    }
}

impl<R: Ring> SkewPBWExtension<R> {
    /// Builds from raw map data, the way user files arrive. The product is
    /// checked for associativity before the maps are validated individually,
    /// so a σ table that is not multiplicative is reported as the concrete
    /// failing triple x·r·s.
    pub fn from_raw<S: AsRef<str>>(
        ring: Arc<R>,
        names: &[S],
        sigma: Vec<R::MapData>,
        delta: Vec<R::MapData>,
        relations: BTreeMap<(usize, usize), PairRelation<R::Elem>>,
        order: MonomialOrder,
    ) -> Result<Self> {
        let n = names.len();
        if sigma.len() != n || delta.len() != n {
            return Err(Error::InvalidInput(format!("expected {n} sigma and {n} delta entries")));
        }
        let raw_builder = |checked: bool| -> Result<ExtensionBuilder<R>> {
            let mut b = ExtensionBuilder::new(ring.clone(), names).order(order.clone());
            for (i, (s, d)) in sigma.iter().zip(&delta).enumerate() {
                let s = if checked {
                    RingMap::validate(&*ring, s.clone())?
                } else {
                    RingMap::unchecked(&*ring, s.clone())
                };
                let d = if checked {
                    SigmaDerivation::validate(&*ring, &s, d.clone())?
                } else {
                    SigmaDerivation::unchecked(&*ring, &s, d.clone())
                };
                b = b.derivation(i, d);
            }
            for (&(i, j), r) in &relations {
                b = b.relation(i, j, r.d.clone(), r.r0.clone(), r.r.clone());
            }
            Ok(b)
        };
        let raw = raw_builder(false)?.build_unchecked()?;
        raw.check_structure()?;
        if raw.enumerable {
            raw.check_associativity(AssocMode::Exhaustive).or_else(|e| match e {
                Error::SearchSpaceTooLarge { .. } => Ok(AssocReport::skipped()),
                e => Err(e),
            })?;
        }
        raw_builder(true)?.build()
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn ring_arc(&self) -> &Arc<R> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn sigma(&self, i: usize) -> &RingMap<R> {
        &self.sigma[i]
    }

    pub fn delta(&self, i: usize) -> &SigmaDerivation<R> {
        &self.delta[i]
    }

    pub fn sigmas(&self) -> &[RingMap<R>] {
        &self.sigma
    }

    pub fn deltas(&self) -> &[SigmaDerivation<R>] {
        &self.delta
    }

    /// Relation constants for i < j (0-based).
    pub fn relation(&self, i: usize, j: usize) -> &PairRelation<R::Elem> {
        &self.rel[i * self.n + j]
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn classify(&self) -> Classification {
        self.flags
    }

    pub fn is_enumerable(&self) -> bool {
        self.enumerable
    }

    pub fn fuel(&self) -> u64 {
        self.fuel
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j)))
    }

    fn compute_flags(&self) -> Classification {
        let ring = &*self.ring;
        let endomorphism_type = self.delta.iter().all(SigmaDerivation::is_zero);
        let derivation_type = self.sigma.iter().all(RingMap::is_identity);
        let rel_zero = self.pairs().all(|(i, j)| {
            let r = self.relation(i, j);
            ring.is_zero(&r.r0) && r.r.iter().all(|c| ring.is_zero(c))
        });
        let bijective = self.sigma.iter().all(RingMap::is_bijective)
            && self.pairs().all(|(i, j)| ring.unit_inverse(&self.relation(i, j).d).is_some());
        Classification {
            quasi_commutative: endomorphism_type && rel_zero,
            bijective,
            endomorphism_type,
            derivation_type,
        }
    }

    /// Checks that need no arithmetic: names, twists, d ≠ 0.
    fn check_structure(&self) -> Result<()> {
        let ring_names: Vec<String> =
            self.ring.generator_names().into_iter().map(|(s, _)| s).collect();
        for (k, name) in self.names.iter().enumerate() {
            if self.names[..k].contains(name) || ring_names.contains(name) {
                return Err(Error::DuplicateVariable(name.clone()));
            }
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                || name.starts_with(|c: char| c.is_ascii_digit())
            {
                return Err(Error::InvalidInput(format!("`{name}` is not a valid variable name")));
            }
        }
        for (i, j) in self.pairs() {
            let r = self.relation(i, j);
            if self.ring.is_zero(&r.d) {
                return Err(Error::ZeroDij(i + 1, j + 1));
            }
            if r.r.len() != self.n {
                return Err(Error::InvalidInput(format!(
                    "relation ({}, {}) needs {} linear constants",
                    i + 1,
                    j + 1,
                    self.n
                )));
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        self.check_structure()?;
        let ring = &*self.ring;
        for (i, (s, d)) in self.sigma.iter().zip(&self.delta).enumerate() {
            if d.sigma() != s {
                return Err(Error::InvalidInput(format!("delta_{} is twisted by a different map", i + 1)));
            }
            if !s.is_injective() {
                return Err(Error::NonInjectiveSigma(i + 1));
            }
            // σᵢ(r) ≠ 0 for nonzero r; checkable only on generators for
            // polynomial rings.
            for (_, g) in ring.generator_names() {
                if !ring.is_zero(&g) && ring.is_zero(&s.apply(ring, &g)) {
                    return Err(Error::NonInjectiveSigma(i + 1));
                }
            }
        }
        Ok(())
    }

    fn post_build_check(&self) -> Result<AssocReport> {
        if self.enumerable {
            match self.check_associativity(AssocMode::Exhaustive) {
                Err(Error::SearchSpaceTooLarge { .. }) => {}
                other => return other,
            }
        }
        self.check_associativity(AssocMode::Sample { triples: POST_BUILD_SAMPLES, seed: 0 })
    }

    // ---- element constructors ----

    pub fn zero(&self) -> SkewPoly<R::Elem> {
        SkewPoly { terms: BTreeMap::new() }
    }

    pub fn one(&self) -> SkewPoly<R::Elem> {
        self.constant(self.ring.one())
    }

    pub fn constant(&self, r: R::Elem) -> SkewPoly<R::Elem> {
        self.term(r, Monomial::one(self.n))
    }

    /// The variable xᵢ (0-based).
    pub fn var(&self, i: usize) -> SkewPoly<R::Elem> {
        self.term(self.ring.one(), Monomial::var(self.n, i))
    }

    /// The term r·x^α.
    pub fn term(&self, r: R::Elem, alpha: Monomial) -> SkewPoly<R::Elem> {
        let mut terms = BTreeMap::new();
        if !self.ring.is_zero(&r) {
            terms.insert(alpha, r);
        }
        SkewPoly { terms }
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, R::Elem)>) -> SkewPoly<R::Elem> {
        let mut out = BTreeMap::new();
        for (m, c) in terms {
            add_into(&*self.ring, &mut out, m, c);
        }
        SkewPoly { terms: out }
    }

    // ---- additive structure ----

    pub fn add(&self, f: &SkewPoly<R::Elem>, g: &SkewPoly<R::Elem>) -> SkewPoly<R::Elem> {
        let mut terms = f.terms.clone();
        for (m, c) in &g.terms {
            add_into(&*self.ring, &mut terms, m.clone(), c.clone());
        }
        SkewPoly { terms }
    }

    pub fn neg(&self, f: &SkewPoly<R::Elem>) -> SkewPoly<R::Elem> {
        SkewPoly { terms: f.terms.iter().map(|(m, c)| (m.clone(), self.ring.neg(c))).collect() }
    }

    pub fn sub(&self, f: &SkewPoly<R::Elem>, g: &SkewPoly<R::Elem>) -> SkewPoly<R::Elem> {
        self.add(f, &self.neg(g))
    }

    /// c·f, multiplying every coefficient on the left.
    pub fn scale_left(&self, c: &R::Elem, f: &SkewPoly<R::Elem>) -> SkewPoly<R::Elem> {
        self.from_terms(f.terms.iter().map(|(m, a)| (m.clone(), self.ring.mul(c, a))))
    }

    // ---- order data ----

    /// Leading monomial and coefficient; `None` for the zero polynomial.
    pub fn leading(&self, f: &SkewPoly<R::Elem>) -> Option<(Monomial, R::Elem)> {
        let mut it = f.terms.iter();
        let first = it.next()?;
        let (m, c) = it.fold(first, |best, cur| if self.order.cmp(cur.0, best.0).is_gt() { cur } else { best });
        Some((m.clone(), c.clone()))
    }

    /// Terms in descending order.
    pub fn terms_desc<'a>(&self, f: &'a SkewPoly<R::Elem>) -> Vec<(&'a Monomial, &'a R::Elem)> {
        let mut v: Vec<_> = f.terms.iter().collect();
        v.sort_by(|a, b| self.order.cmp(b.0, a.0));
        v
    }

    /// σ^α(r) = σ₁^{α₁}∘⋯∘σₙ^{αₙ}(r).
    pub fn sigma_pow(&self, alpha: &Monomial, r: &R::Elem) -> R::Elem {
        let mut acc = r.clone();
        for i in (0..self.n).rev() {
            for _ in 0..alpha.exps()[i] {
                acc = self.sigma[i].apply(&self.ring, &acc);
            }
        }
        acc
    }

    // ---- multiplication ----

    pub fn mul(&self, f: &SkewPoly<R::Elem>, g: &SkewPoly<R::Elem>) -> Result<SkewPoly<R::Elem>> {
        let ring = &*self.ring;
        let mut fuel = Fuel::new(self.fuel);
        let mut out = BTreeMap::new();
        for (alpha, a) in &f.terms {
            let word = alpha.word();
            for (beta, b) in &g.terms {
                for (u, e) in self.move_left(&word, b.clone(), &mut fuel)? {
                    let coef = ring.mul(a, &e);
                    if ring.is_zero(&coef) {
                        continue;
                    }
                    let um = Monomial::from_sorted_word(self.n, &u);
                    self.accumulate_mono_mul(&um, beta, &coef, &mut out, &mut fuel)?;
                }
            }
        }
        Ok(SkewPoly { terms: out })
    }

    /// x^α·x^β in normal form.
    pub fn mono_mul(&self, alpha: &Monomial, beta: &Monomial) -> Result<SkewPoly<R::Elem>> {
        let mut out = BTreeMap::new();
        let mut fuel = Fuel::new(self.fuel);
        self.accumulate_mono_mul(alpha, beta, &self.ring.one(), &mut out, &mut fuel)?;
        Ok(SkewPoly { terms: out })
    }

    /// Adds c·x^α·x^β into `out`.
    fn accumulate_mono_mul(
        &self,
        alpha: &Monomial,
        beta: &Monomial,
        c: &R::Elem,
        out: &mut BTreeMap<Monomial, R::Elem>,
        fuel: &mut Fuel,
    ) -> Result<()> {
        let ring = &*self.ring;
        let last = alpha.exps().iter().rposition(|&e| e > 0);
        let first = beta.exps().iter().position(|&e| e > 0);
        let sorted = match (last, first) {
            (Some(l), Some(f)) => l <= f,
            _ => true,
        };
        if sorted {
            add_into(ring, out, alpha.mul(beta), c.clone());
            return Ok(());
        }
        let key = (alpha.clone(), beta.clone());
        let cached = self.cache.read().expect("cache lock").get(&key).cloned();
        let prod = match cached {
            Some(p) => p,
            None => {
                let mut word = alpha.word();
                word.extend(beta.word());
                let p = Arc::new(self.normalize_word(word, fuel)?);
                let mut cache = self.cache.write().expect("cache lock");
                if cache.len() >= CACHE_CAP {
                    cache.clear();
                }
                cache.insert(key, p.clone());
                p
            }
        };
        for (m, e) in prod.iter() {
            add_into(ring, out, m.clone(), ring.mul(c, e));
        }
        Ok(())
    }

    /// Writes `word · s` as Σ e·tail with e ∈ R on the left; tails are
    /// subwords of `word`.
    fn move_left(&self, word: &[u16], s: R::Elem, fuel: &mut Fuel) -> Result<BTreeMap<Word, R::Elem>> {
        let ring = &*self.ring;
        let mut cur: BTreeMap<Word, R::Elem> = BTreeMap::new();
        if ring.is_zero(&s) {
            return Ok(cur);
        }
        cur.insert(Vec::new(), s);
        for &t in word.iter().rev() {
            let t = t as usize;
            let mut next = BTreeMap::new();
            for (tail, e) in cur {
                fuel.spend()?;
                if !self.delta[t].is_zero() {
                    add_into(ring, &mut next, tail.clone(), self.delta[t].apply(ring, &e));
                }
                let mut longer = Vec::with_capacity(tail.len() + 1);
                longer.push(t as u16);
                longer.extend_from_slice(&tail);
                add_into(ring, &mut next, longer, self.sigma[t].apply(ring, &e));
            }
            cur = next;
        }
        Ok(cur)
    }

    /// Normal form of a single word in the variables.
    fn normalize_word(&self, word: Word, fuel: &mut Fuel) -> Result<BTreeMap<Monomial, R::Elem>> {
        let ring = &*self.ring;
        let mut pending: BTreeMap<(usize, Word), R::Elem> = BTreeMap::new();
        pending.insert((word.len(), word), ring.one());
        let mut out = BTreeMap::new();
        while let Some(((_, w), c)) = pending.pop_last() {
            fuel.spend()?;
            let Some(p) = w.windows(2).position(|pair| pair[0] > pair[1]) else {
                add_into(ring, &mut out, Monomial::from_sorted_word(self.n, &w), c);
                continue;
            };
            let (j, i) = (w[p] as usize, w[p + 1] as usize);
            let rel = self.relation(i, j);
            let (u, v) = (&w[..p], &w[p + 2..]);
            let mut emit = |scalar: &R::Elem, middle: &[u16], fuel: &mut Fuel| -> Result<()> {
                for (u2, e) in self.move_left(u, scalar.clone(), fuel)? {
                    let coef = ring.mul(&c, &e);
                    let mut nw = u2;
                    nw.extend_from_slice(middle);
                    nw.extend_from_slice(v);
                    add_into(ring, &mut pending, (nw.len(), nw), coef);
                }
                Ok(())
            };
            emit(&rel.d, &[i as u16, j as u16], fuel)?;
            emit(&rel.r0, &[], fuel)?;
            for (k, rk) in rel.r.iter().enumerate() {
                emit(rk, &[k as u16], fuel)?;
            }
        }
        Ok(out)
    }

    /// x^α·r = σ^α(r)x^α + p with p = 0 or deg p < |α|.
    pub fn expand_pow_scalar(&self, alpha: &Monomial, r: &R::Elem) -> Result<(R::Elem, SkewPoly<R::Elem>)> {
        let prod = self.mul(&self.term(self.ring.one(), alpha.clone()), &self.constant(r.clone()))?;
        let head = self.sigma_pow(alpha, r);
        let rest = self.sub(&prod, &self.term(head.clone(), alpha.clone()));
        Ok((head, rest))
    }

    /// x^α·x^β = d x^{α+β} + p with p = 0 or deg p < |α+β|.
    pub fn expand_pow_pow(&self, alpha: &Monomial, beta: &Monomial) -> Result<(R::Elem, SkewPoly<R::Elem>)> {
        let prod = self.mono_mul(alpha, beta)?;
        let top = alpha.mul(beta);
        let d = prod.coefficient(&top).cloned().unwrap_or_else(|| self.ring.zero());
        let rest = self.sub(&prod, &self.term(d.clone(), top));
        Ok((d, rest))
    }

    // ---- text ----

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .exps()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { self.names[i].clone() } else { format!("{}^{e}", self.names[i]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Canonical text: terms descending, `coeff*x1^a1*…`, factor 1 omitted.
    pub fn format(&self, f: &SkewPoly<R::Elem>) -> String {
        let ring = &*self.ring;
        let terms = self.terms_desc(f);
        if terms.is_empty() {
            return "0".into();
        }
        let single = terms.len() == 1;
        let minus_one = ring.neg(&ring.one());
        let mut out = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let text = if m.is_one() {
                if single {
                    ring.format(c)
                } else {
                    ring.format_factor(c)
                }
            } else if ring.is_one(c) {
                self.format_monomial(m)
            } else if *c == minus_one && ring.format(c).starts_with('-') {
                format!("-{}", self.format_monomial(m))
            } else {
                format!("{}*{}", ring.format_factor(c), self.format_monomial(m))
            };
            if k == 0 {
                out.push_str(&text);
            } else if let Some(rest) = text.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&text);
            }
        }
        out
    }

    /// Parses an infix expression over the extension variables, the ring's
    /// generators, numeric literals and bracketed ring elements.
    pub fn parse(&self, text: &str) -> Result<SkewPoly<R::Elem>> {
        let e = expr::parse(text)?;
        expr::evaluate(&e, &ExtEval { ext: self, ring_names: self.ring.generator_names() })
    }
}

struct ExtEval<'a, R: Ring> {
    ext: &'a SkewPBWExtension<R>,
    ring_names: Vec<(String, R::Elem)>,
}

impl<R: Ring> Evaluator for ExtEval<'_, R> {
    type Value = SkewPoly<R::Elem>;
    fn number(&self, value: &num_rational::BigRational) -> Result<Self::Value> {
        Ok(self.ext.constant(self.ext.ring.from_rational(value)?))
    }
    fn identifier(&self, name: &str) -> Result<Self::Value> {
        if let Some(i) = self.ext.names.iter().position(|v| v == name) {
            return Ok(self.ext.var(i));
        }
        match self.ring_names.iter().find(|(s, _)| s == name) {
            Some((_, r)) => Ok(self.ext.constant(r.clone())),
            None => Err(Error::Parse(format!("unknown name `{name}`"))),
        }
    }
    fn bracket(&self, text: &str) -> Result<Self::Value> {
        Ok(self.ext.constant(self.ext.ring.parse_element(text)?))
    }
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value {
        self.ext.add(&a, &b)
    }
    fn neg(&self, a: Self::Value) -> Self::Value {
        self.ext.neg(&a)
    }
    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value> {
        self.ext.mul(&a, &b)
    }
    fn one(&self) -> Self::Value {
        self.ext.one()
    }
}

fn add_into<K: Ord, R: Ring>(ring: &R, map: &mut BTreeMap<K, R::Elem>, key: K, c: R::Elem) {
    if ring.is_zero(&c) {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let s = ring.add(o.get(), &c);
            if ring.is_zero(&s) {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}
