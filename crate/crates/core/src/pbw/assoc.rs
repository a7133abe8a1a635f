use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{Monomial, SkewPBWExtension, SkewPoly};
use crate::error::{Error, Result};
use crate::ring::Ring;

/// Largest number of term triples checked in exhaustive mode.
pub const EXHAUSTIVE_ASSOC_CAP: usize = 1_000_000;

/// Sample size of the check run by every `build`.
pub const POST_BUILD_SAMPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssocMode {
    /// Every triple of terms r·xᵢ (i = 0 meaning the constant term).
    Exhaustive,
    /// Random triples of elements with at most two terms of degree ≤ 2.
    Sample { triples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssocReport {
    pub mode: String,
    pub triples: usize,
}

impl AssocReport {
    pub(super) fn skipped() -> Self {
        AssocReport { mode: "skipped".into(), triples: 0 }
    }
}

impl<R: Ring> SkewPBWExtension<R> {
    /// Verifies (fg)h = f(gh) over the requested triples.
    pub fn check_associativity(&self, mode: AssocMode) -> Result<AssocReport> {
        let (label, triples) = match mode {
            AssocMode::Exhaustive => ("exhaustive".to_string(), self.exhaustive_triples()?),
            AssocMode::Sample { triples, seed } => {
                (format!("sample(k={triples}, seed={seed})"), self.sample_triples(triples, seed))
            }
        };
        let count = triples.len();
        let failure = triples
            .par_iter()
            .map(|(f, g, h)| -> Result<bool> {
                let left = self.mul(&self.mul(f, g)?, h)?;
                let right = self.mul(f, &self.mul(g, h)?)?;
                Ok(left == right)
            })
            .enumerate()
            .find_first(|(_, r)| !matches!(r, Ok(true)));
        if let Some((k, r)) = failure {
            r?;
            let (f, g, h) = &triples[k];
            return Err(Error::AssociativityFailure(self.format(f), self.format(g), self.format(h)));
        }
        Ok(AssocReport { mode: label, triples: count })
    }

    fn exhaustive_triples(&self) -> Result<Vec<(SkewPoly<R::Elem>, SkewPoly<R::Elem>, SkewPoly<R::Elem>)>> {
        let ring = self.ring();
        let elems = ring
            .elements()
            .ok_or(Error::PolynomialBackendUnsupported("exhaustive associativity check"))?;
        let nonzero: Vec<R::Elem> = elems.into_iter().filter(|a| !ring.is_zero(a)).collect();
        let n = self.nvars();
        let count = nonzero.len() * (n + 1);
        let total = (count as u128).pow(3);
        if total > EXHAUSTIVE_ASSOC_CAP as u128 {
            return Err(Error::SearchSpaceTooLarge { candidates: total, cap: EXHAUSTIVE_ASSOC_CAP as u128 });
        }
        let mut terms = Vec::with_capacity(count);
        for r in &nonzero {
            terms.push(self.constant(r.clone()));
            for i in 0..n {
                terms.push(self.term(r.clone(), Monomial::var(n, i)));
            }
        }
        let mut out = Vec::with_capacity(total as usize);
        for f in &terms {
            for g in &terms {
                for h in &terms {
                    out.push((f.clone(), g.clone(), h.clone()));
                }
            }
        }
        Ok(out)
    }

    fn sample_triples(&self, k: usize, seed: u64) -> Vec<(SkewPoly<R::Elem>, SkewPoly<R::Elem>, SkewPoly<R::Elem>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..k)
            .map(|_| (self.random_small(&mut rng), self.random_small(&mut rng), self.random_small(&mut rng)))
            .collect()
    }

    /// One or two random terms of degree ≤ 2 with nonzero coefficients.
    pub fn random_small(&self, rng: &mut ChaCha8Rng) -> SkewPoly<R::Elem> {
        let n = self.nvars();
        let nterms = rng.gen_range(1..=2);
        let mut f = self.zero();
        for _ in 0..nterms {
            let mut exps = vec![0u32; n];
            if n > 0 {
                for _ in 0..rng.gen_range(0..=2) {
                    exps[rng.gen_range(0..n)] += 1;
                }
            }
            let c = self.random_nonzero(rng);
            f = self.add(&f, &self.term(c, Monomial::new(exps)));
        }
        if f.is_zero() {
            self.one()
        } else {
            f
        }
    }

    fn random_nonzero(&self, rng: &mut ChaCha8Rng) -> R::Elem {
        let ring = self.ring();
        for _ in 0..64 {
            let c = ring.random_element(rng);
            if !ring.is_zero(&c) {
                return c;
            }
        }
        ring.one()
    }
}
