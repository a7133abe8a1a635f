//! The four reference extensions used throughout the test suites and by
//! `spbw verify`.

use std::sync::Arc;

use crate::error::Result;
use crate::pbw::{ExtensionBuilder, SkewPBWExtension};
use crate::ring::{BaseField, FiniteRing, PolyRing, Ring, RingMap, SigmaDerivation};

/// F₂×F₂ with σ the coordinate swap, δ = 0.
pub fn fix1() -> Result<SkewPBWExtension<FiniteRing>> {
    let f2 = FiniteRing::zmod(2)?;
    let r = FiniteRing::product(&[f2.clone(), f2])?;
    let swap: Vec<usize> = r.ids().map(|a| (a % 2) * 2 + a / 2).collect();
    let sigma = RingMap::validate(&r, swap)?;
    ExtensionBuilder::new(Arc::new(r), &["x"]).sigma(0, sigma).build()
}

/// ℤ/4 with σ = id, δ = 0: the commutative ring ℤ/4[x].
pub fn fix2() -> Result<SkewPBWExtension<FiniteRing>> {
    ExtensionBuilder::new(Arc::new(FiniteRing::zmod(4)?), &["x"]).build()
}

/// ℚ[y] with σ(y) = 2y and δ(y) = 1, so that xy = 2yx + 1.
pub fn fix3() -> Result<SkewPBWExtension<PolyRing>> {
    let r = PolyRing::new(BaseField::Rational, vec!["y".into()])?;
    let y = r.var(0);
    let sigma = RingMap::validate(&r, vec![r.mul(&r.int(2), &y)])?;
    let delta = SigmaDerivation::validate(&r, &sigma, vec![r.one()])?;
    ExtensionBuilder::new(Arc::new(r), &["x"]).derivation(0, delta).build()
}

/// GF(4) with σ the Frobenius a ↦ a², δ = 0.
pub fn fix4() -> Result<SkewPBWExtension<FiniteRing>> {
    let r = FiniteRing::galois(2, 2, None)?;
    let sigma = RingMap::validate(&r, r.frobenius_table())?;
    ExtensionBuilder::new(Arc::new(r), &["x"]).sigma(0, sigma).build()
}

/// The finite fixtures by name.
pub fn finite_fixture(name: &str) -> Option<Result<SkewPBWExtension<FiniteRing>>> {
    match name.to_ascii_uppercase().as_str() {
        "FIX1" => Some(fix1()),
        "FIX2" => Some(fix2()),
        "FIX4" => Some(fix4()),
        _ => None,
    }
}

pub const FIXTURE_NAMES: [&str; 4] = ["FIX1", "FIX2", "FIX3", "FIX4"];
