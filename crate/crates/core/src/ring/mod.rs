//! Coefficient rings, ring endomorphisms and twisted derivations.
//!
//! Two backends implement [`Ring`]: [`FiniteRing`] (table-driven, fully
//! enumerable) and [`PolyRing`] (exact commutative polynomials over ℚ or
//! GF(p), arithmetic only).

mod finite;
mod ideal;
mod poly;
mod spec;

use std::fmt::Debug;
use std::hash::Hash;

use num_rational::BigRational;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use finite::FiniteRing;
pub use ideal::{IdealSet, Side};
pub use poly::{BaseField, Poly, PolyRing};
pub use spec::{FieldSpec, RingSpec};

/// Number of random triples used when a finite ring is too large to check
/// exhaustively.
pub const AXIOM_SAMPLES: usize = 10_000;

/// Largest finite ring whose axioms are checked over all triples.
pub const EXHAUSTIVE_AXIOM_CAP: usize = 64;

pub trait Ring: Debug + Send + Sync + Sized {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;
    /// Finite backend: a total image table. Polynomial backend: images of
    /// the generators.
    type MapData: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_int(&self, n: i64) -> Self::Elem;
    /// Image of a rational literal; fails when it has no meaning in the ring.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Canonical notation.
    fn format(&self, a: &Self::Elem) -> String;

    /// Notation safe to place in front of `*`.
    fn format_factor(&self, a: &Self::Elem) -> String {
        let s = self.format(a);
        if s.contains('+') || s.get(1..).is_some_and(|t| t.contains('-')) {
            format!("({s})")
        } else {
            s
        }
    }

    /// Two-sided inverse, if `a` is a unit.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_central(&self, a: &Self::Elem) -> bool;
    /// All elements, when the ring is enumerable.
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    fn random_element(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
    /// Parses an element written in canonical notation.
    fn parse_element(&self, text: &str) -> Result<Self::Elem>;
    /// Named generators usable in expressions (ring variables, `t` for GF(p^k)).
    fn generator_names(&self) -> Vec<(String, Self::Elem)>;

    fn apply_map(&self, map: &Self::MapData, a: &Self::Elem) -> Self::Elem;
    fn apply_derivation(
        &self,
        sigma: &Self::MapData,
        delta: &Self::MapData,
        a: &Self::Elem,
    ) -> Self::Elem;
    fn identity_map(&self) -> Self::MapData;
    fn zero_derivation(&self) -> Self::MapData;
    /// Checks the ring-map laws and decides injectivity and bijectivity.
    fn check_map(&self, data: &Self::MapData) -> Result<MapFlags>;
    /// Checks additivity and the twisted Leibniz rule.
    fn check_derivation(&self, sigma: &Self::MapData, delta: &Self::MapData) -> Result<()>;
    fn map_is_identity(&self, data: &Self::MapData) -> bool;
    fn derivation_is_zero(&self, data: &Self::MapData) -> bool;
    fn spec(&self) -> RingSpec;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapFlags {
    pub injective: bool,
    pub bijective: bool,
}

/// A validated ring endomorphism. Flags are always recomputed from the data.
#[derive(Debug)]
pub struct RingMap<R: Ring> {
    data: R::MapData,
    injective: bool,
    bijective: bool,
    identity: bool,
}

impl<R: Ring> Clone for RingMap<R> {
    fn clone(&self) -> Self {
        RingMap { data: self.data.clone(), ..*self }
    }
}

impl<R: Ring> PartialEq for RingMap<R> {
    fn eq(&self, other: &Self) -> bool {
        self.data == other.data
    }
}

impl<R: Ring> RingMap<R> {
    pub fn validate(ring: &R, data: R::MapData) -> Result<Self> {
        let flags = ring.check_map(&data)?;
        let identity = ring.map_is_identity(&data);
        Ok(RingMap { data, injective: flags.injective, bijective: flags.bijective, identity })
    }

    pub fn identity(ring: &R) -> Self {
        RingMap { data: ring.identity_map(), injective: true, bijective: true, identity: true }
    }

    /// Skips every check. Only for building deliberately broken data in tests
    /// of the downstream validators.
    #[doc(hidden)]
    pub fn unchecked(ring: &R, data: R::MapData) -> Self {
        let identity = ring.map_is_identity(&data);
        RingMap { data, injective: true, bijective: true, identity }
    }

    pub fn apply(&self, ring: &R, a: &R::Elem) -> R::Elem {
        if self.identity {
            a.clone()
        } else {
            ring.apply_map(&self.data, a)
        }
    }

    pub fn data(&self) -> &R::MapData {
        &self.data
    }
    pub fn is_injective(&self) -> bool {
        self.injective
    }
    pub fn is_bijective(&self) -> bool {
        self.bijective
    }
    pub fn is_identity(&self) -> bool {
        self.identity
    }
}

impl RingMap<FiniteRing> {
    pub fn table(&self) -> &[usize] {
        &self.data
    }

    pub fn invert(&self, ring: &FiniteRing) -> Result<Self> {
        if !self.bijective {
            return Err(Error::NotBijective);
        }
        let mut inv = vec![0; ring.size()];
        for (a, &b) in self.data.iter().enumerate() {
            inv[b] = a;
        }
        RingMap::validate(ring, inv)
    }
}

/// A σ-derivation: additive with δ(ab) = σ(a)δ(b) + δ(a)b.
#[derive(Debug)]
pub struct SigmaDerivation<R: Ring> {
    sigma: RingMap<R>,
    data: R::MapData,
    zero: bool,
}

impl<R: Ring> Clone for SigmaDerivation<R> {
    fn clone(&self) -> Self {
        SigmaDerivation { sigma: self.sigma.clone(), data: self.data.clone(), zero: self.zero }
    }
}

impl<R: Ring> PartialEq for SigmaDerivation<R> {
    fn eq(&self, other: &Self) -> bool {
        self.sigma == other.sigma && self.data == other.data
    }
}

impl<R: Ring> SigmaDerivation<R> {
    pub fn validate(ring: &R, sigma: &RingMap<R>, data: R::MapData) -> Result<Self> {
        ring.check_derivation(&sigma.data, &data)?;
        let zero = ring.derivation_is_zero(&data);
        Ok(SigmaDerivation { sigma: sigma.clone(), data, zero })
    }

    pub fn zero(ring: &R, sigma: &RingMap<R>) -> Self {
        SigmaDerivation { sigma: sigma.clone(), data: ring.zero_derivation(), zero: true }
    }

    #[doc(hidden)]
    pub fn unchecked(ring: &R, sigma: &RingMap<R>, data: R::MapData) -> Self {
        let zero = ring.derivation_is_zero(&data);
        SigmaDerivation { sigma: sigma.clone(), data, zero }
    }

    pub fn apply(&self, ring: &R, a: &R::Elem) -> R::Elem {
        if self.zero {
            ring.zero()
        } else {
            ring.apply_derivation(&self.sigma.data, &self.data, a)
        }
    }

    pub fn sigma(&self) -> &RingMap<R> {
        &self.sigma
    }
    pub fn data(&self) -> &R::MapData {
        &self.data
    }
    pub fn is_zero(&self) -> bool {
        self.zero
    }
}

/// Builds a finite ring from its JSON-level description.
pub fn build_finite_ring(spec: &RingSpec) -> Result<FiniteRing> {
    FiniteRing::from_spec(spec)
}

/// Builds ℚ[vars] or GF(p)[vars]. An empty variable list gives the base field.
pub fn build_poly_ring(base: BaseField, vars: &[&str]) -> Result<PolyRing> {
    PolyRing::new(base, vars.iter().map(|v| v.to_string()).collect())
}
