use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{MapFlags, Ring, RingSpec, AXIOM_SAMPLES, EXHAUSTIVE_AXIOM_CAP};
use crate::error::{Error, Result};

/// Largest finite ring accepted at all (tables are |R|² entries).
pub const FINITE_RING_CAP: usize = 1024;
/// Largest GF(p^k) accepted.
pub const GALOIS_FIELD_CAP: usize = 64;

/// A finite ring given by addition and multiplication tables over the ids
/// `0..size`.
#[derive(Debug, Clone)]
pub struct FiniteRing {
    size: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
    zero: usize,
    one: usize,
    labels: Vec<String>,
    label_index: HashMap<String, usize>,
    generator: Option<usize>,
    spec: RingSpec,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.add == other.add && self.mul == other.mul
    }
}
impl Eq for FiniteRing {}

impl FiniteRing {
    pub fn from_spec(spec: &RingSpec) -> Result<Self> {
        match spec {
            RingSpec::Zmod { n } => Self::zmod(*n),
            RingSpec::Gf { p, k, poly } => Self::galois(*p, *k, poly.as_deref()),
            RingSpec::Product { factors } => {
                let rings = factors.iter().map(Self::from_spec).collect::<Result<Vec<_>>>()?;
                Self::product(&rings)
            }
            RingSpec::Table { add, mul } => Self::from_tables(add, mul),
            RingSpec::Poly { .. } => {
                Err(Error::InvalidInput("a polynomial ring spec is not a finite ring".into()))
            }
        }
    }

    pub fn zmod(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("Z/{n} needs n >= 2")));
        }
        check_cap("Z/n", n, FINITE_RING_CAP)?;
        let add = table(n, |a, b| (a + b) % n);
        let mul = table(n, |a, b| (a * b) % n);
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::assemble(n, add, mul, labels, None, RingSpec::Zmod { n })
    }

    /// GF(p^k) with elements encoded as base-p digit vectors (constant term
    /// first). Without an explicit modulus the smallest irreducible one is used.
    pub fn galois(p: u64, k: u32, modulus: Option<&[u64]>) -> Result<Self> {
        if p < 2 || !is_prime(p) {
            return Err(Error::InvalidInput(format!("GF needs a prime characteristic, got {p}")));
        }
        if k == 0 {
            return Err(Error::InvalidInput("GF needs k >= 1".into()));
        }
        let size = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if size > GALOIS_FIELD_CAP as u128 {
            return Err(Error::UnsupportedSize {
                what: format!("GF({p}^{k})"),
                size: size.min(usize::MAX as u128) as usize,
                cap: GALOIS_FIELD_CAP,
            });
        }
        let (p, k, size) = (p as usize, k as usize, size as usize);
        let modulus: Vec<usize> = match modulus {
            Some(m) => {
                let m: Vec<usize> = m.iter().map(|&c| c as usize % p).collect();
                if m.len() != k + 1 || m[k] != 1 {
                    return Err(Error::InvalidInput(format!(
                        "GF modulus must be monic of degree {k}, constant term first"
                    )));
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::InvalidInput("GF modulus is reducible".into()));
                }
                m
            }
            None => smallest_irreducible(p, k),
        };
        let digits = |mut a: usize| -> Vec<usize> {
            let mut d = vec![0; k];
            for slot in d.iter_mut() {
                *slot = a % p;
                a /= p;
            }
            d
        };
        let encode = |d: &[usize]| d.iter().rev().fold(0, |acc, &c| acc * p + c);
        let add = table(size, |a, b| {
            let (x, y) = (digits(a), digits(b));
            let s: Vec<usize> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
            encode(&s)
        });
        let mul = table(size, |a, b| {
            let (x, y) = (digits(a), digits(b));
            let mut prod = vec![0; 2 * k];
            for (i, u) in x.iter().enumerate() {
                for (j, v) in y.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + u * v) % p;
                }
            }
            for deg in (k..2 * k).rev() {
                let c = prod[deg];
                if c != 0 {
                    for (i, m) in modulus.iter().enumerate().take(k) {
                        let at = deg - k + i;
                        prod[at] = (prod[at] + (p - c) * m) % p;
                    }
                    prod[deg] = 0;
                }
            }
            encode(&prod[..k])
        });
        let labels = (0..size).map(|a| gf_label(&digits(a))).collect();
        let generator = (k > 1).then_some(p);
        let spec = RingSpec::Gf {
            p: p as u64,
            k: k as u32,
            poly: Some(modulus.iter().map(|&c| c as u64).collect()),
        };
        Self::assemble(size, add, mul, labels, generator, spec)
    }

    /// Direct product; ids are mixed-radix with the first factor least
    /// significant.
    pub fn product(factors: &[FiniteRing]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("a product needs at least one factor".into()));
        }
        let size = factors.iter().try_fold(1usize, |acc, f| acc.checked_mul(f.size));
        let size = size.unwrap_or(usize::MAX);
        check_cap("product ring", size, FINITE_RING_CAP)?;
        let split = |mut a: usize| -> Vec<usize> {
            factors
                .iter()
                .map(|f| {
                    let c = a % f.size;
                    a /= f.size;
                    c
                })
                .collect()
        };
        let join = |cs: &[usize]| {
            cs.iter().zip(factors).rev().fold(0, |acc, (&c, f)| acc * f.size + c)
        };
        let add = table(size, |a, b| {
            let (x, y) = (split(a), split(b));
            let s: Vec<usize> =
                factors.iter().enumerate().map(|(i, f)| f.sum(x[i], y[i])).collect();
            join(&s)
        });
        let mul = table(size, |a, b| {
            let (x, y) = (split(a), split(b));
            let s: Vec<usize> =
                factors.iter().enumerate().map(|(i, f)| f.prod(x[i], y[i])).collect();
            join(&s)
        });
        let labels = (0..size)
            .map(|a| {
                let parts: Vec<&str> =
                    split(a).iter().zip(factors).map(|(&c, f)| f.labels[c].as_str()).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let spec = RingSpec::Product { factors: factors.iter().map(|f| f.spec.clone()).collect() };
        Self::assemble(size, add, mul, labels, None, spec)
    }

    pub fn from_tables(add: &[Vec<usize>], mul: &[Vec<usize>]) -> Result<Self> {
        let size = add.len();
        if size == 0 {
            return Err(Error::InvalidInput("empty ring tables".into()));
        }
        check_cap("table ring", size, FINITE_RING_CAP)?;
        for rows in [add, mul] {
            if rows.len() != size || rows.iter().any(|r| r.len() != size || r.iter().any(|&v| v >= size))
            {
                return Err(Error::TableNotARing { axiom: "square tables over 0..n", witness: vec![] });
            }
        }
        let flat = |rows: &[Vec<usize>]| rows.iter().flatten().copied().collect::<Vec<_>>();
        let labels = (0..size).map(|i| format!("e{i}")).collect();
        let spec = RingSpec::Table { add: add.to_vec(), mul: mul.to_vec() };
        Self::assemble(size, flat(add), flat(mul), labels, None, spec)
    }

    fn assemble(
        size: usize,
        add: Vec<usize>,
        mul: Vec<usize>,
        labels: Vec<String>,
        generator: Option<usize>,
        spec: RingSpec,
    ) -> Result<Self> {
        let (zero, one, neg) = check_ring_axioms(size, &add, &mul)?;
        let label_index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        Ok(FiniteRing { size, add, mul, neg, zero, one, labels, label_index, generator, spec })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn sum(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b]
    }

    #[inline]
    pub fn prod(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b]
    }

    #[inline]
    pub fn negative(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn zero_id(&self) -> usize {
        self.zero
    }

    pub fn one_id(&self) -> usize {
        self.one
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn ids(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    /// Nonzero ids in increasing order.
    pub fn nonzero_ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&a| a != self.zero)
    }

    /// The characteristic: additive order of 1.
    pub fn additive_order_of_one(&self) -> usize {
        let mut p = 1;
        let mut acc = self.one;
        while acc != self.zero {
            acc = self.sum(acc, self.one);
            p += 1;
        }
        p
    }

    /// The Frobenius map a ↦ a^p where p is the additive order of 1.
    pub fn frobenius_table(&self) -> Vec<usize> {
        let p = self.additive_order_of_one();
        (0..self.size)
            .map(|a| (1..p).fold(a, |acc, _| self.prod(acc, a)))
            .collect()
    }
}

fn check_cap(what: &str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::UnsupportedSize { what: what.into(), size, cap })
    } else {
        Ok(())
    }
}

fn table(n: usize, f: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut t = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            t.push(f(a, b));
        }
    }
    t
}

/// Returns (zero, one, negation table) or the first failing axiom.
fn check_ring_axioms(n: usize, add: &[usize], mul: &[usize]) -> Result<(usize, usize, Vec<usize>)> {
    let ad = |a: usize, b: usize| add[a * n + b];
    let mu = |a: usize, b: usize| mul[a * n + b];
    let fail = |axiom: &'static str, witness: Vec<usize>| Error::TableNotARing { axiom, witness };

    let zero = (0..n).find(|&z| (0..n).all(|a| ad(z, a) == a && ad(a, z) == a));
    let Some(zero) = zero else { return Err(fail("additive identity", vec![])) };
    let one = (0..n).find(|&e| (0..n).all(|a| mu(e, a) == a && mu(a, e) == a));
    let Some(one) = one else { return Err(fail("multiplicative identity", vec![])) };
    let mut neg = vec![0; n];
    for a in 0..n {
        match (0..n).find(|&b| ad(a, b) == zero) {
            Some(b) => neg[a] = b,
            None => return Err(fail("additive inverse", vec![a])),
        }
        for b in 0..n {
            if ad(a, b) != ad(b, a) {
                return Err(fail("additive commutativity", vec![a, b]));
            }
        }
    }
    let check = |a: usize, b: usize, c: usize| -> Result<()> {
        if ad(ad(a, b), c) != ad(a, ad(b, c)) {
            return Err(fail("additive associativity", vec![a, b, c]));
        }
        if mu(mu(a, b), c) != mu(a, mu(b, c)) {
            return Err(fail("multiplicative associativity", vec![a, b, c]));
        }
        if mu(a, ad(b, c)) != ad(mu(a, b), mu(a, c)) {
            return Err(fail("left distributivity", vec![a, b, c]));
        }
        if mu(ad(a, b), c) != ad(mu(a, c), mu(b, c)) {
            return Err(fail("right distributivity", vec![a, b, c]));
        }
        Ok(())
    };
    if n <= EXHAUSTIVE_AXIOM_CAP {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    check(a, b, c)?;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..AXIOM_SAMPLES {
            check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
        }
    }
    Ok((zero, one, neg))
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn gf_label(digits: &[usize]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in digits.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let var = match i {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        terms.push(match (c, var.is_empty()) {
            (_, true) => c.to_string(),
            (1, false) => var,
            (_, false) => format!("{c}*{var}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// Remainder of `a` modulo the monic `m` over GF(p); coefficients constant first.
fn poly_rem(a: &[usize], m: &[usize], p: usize) -> Vec<usize> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * mi) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(m: &[usize], p: usize) -> bool {
    let k = m.len() - 1;
    for d in 1..=k / 2 {
        // every monic polynomial of degree d
        for low in 0..p.pow(d as u32) {
            let mut f = Vec::with_capacity(d + 1);
            let mut x = low;
            for _ in 0..d {
                f.push(x % p);
                x /= p;
            }
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: usize, k: usize) -> Vec<usize> {
    (0..p.pow(k as u32))
        .map(|low| {
            let mut f = Vec::with_capacity(k + 1);
            let mut x = low;
            for _ in 0..k {
                f.push(x % p);
                x /= p;
            }
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

impl Ring for FiniteRing {
    type Elem = usize;
    type MapData = Vec<usize>;

    fn zero(&self) -> usize {
        self.zero
    }
    fn one(&self) -> usize {
        self.one
    }
    fn add(&self, a: &usize, b: &usize) -> usize {
        self.sum(*a, *b)
    }
    fn neg(&self, a: &usize) -> usize {
        self.neg[*a]
    }
    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.prod(*a, *b)
    }
    fn is_zero(&self, a: &usize) -> bool {
        *a == self.zero
    }

    fn from_int(&self, n: i64) -> usize {
        let mut acc = self.zero;
        let mut base = self.one;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.sum(acc, base);
            }
            base = self.sum(base, base);
            k >>= 1;
        }
        if n < 0 {
            self.neg[acc]
        } else {
            acc
        }
    }

    fn format(&self, a: &usize) -> String {
        self.labels[*a].clone()
    }

    fn unit_inverse(&self, a: &usize) -> Option<usize> {
        (0..self.size).find(|&b| self.prod(*a, b) == self.one && self.prod(b, *a) == self.one)
    }

    fn is_central(&self, a: &usize) -> bool {
        (0..self.size).all(|b| self.prod(*a, b) == self.prod(b, *a))
    }

    fn elements(&self) -> Option<Vec<usize>> {
        Some((0..self.size).collect())
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> usize {
        rng.gen_range(0..self.size)
    }

    fn parse_element(&self, text: &str) -> Result<usize> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(&id) = self.label_index.get(&t) {
            return Ok(id);
        }
        if let Ok(n) = t.parse::<i64>() {
            return Ok(self.from_int(n));
        }
        Err(Error::Parse(format!("`{text}` is not an element of this ring")))
    }

    fn generator_names(&self) -> Vec<(String, usize)> {
        self.generator.map(|g| vec![("t".to_string(), g)]).unwrap_or_default()
    }

    fn apply_map(&self, map: &Vec<usize>, a: &usize) -> usize {
        map[*a]
    }

    fn apply_derivation(&self, _sigma: &Vec<usize>, delta: &Vec<usize>, a: &usize) -> usize {
        delta[*a]
    }

    fn identity_map(&self) -> Vec<usize> {
        (0..self.size).collect()
    }

    fn zero_derivation(&self) -> Vec<usize> {
        vec![self.zero; self.size]
    }

    fn check_map(&self, data: &Vec<usize>) -> Result<MapFlags> {
        self.check_total(data)?;
        if data[self.one] != self.one {
            return Err(Error::NotUnital);
        }
        for a in 0..self.size {
            for b in 0..self.size {
                if data[self.sum(a, b)] != self.sum(data[a], data[b]) {
                    return Err(Error::NotAdditive(self.format(&a), self.format(&b)));
                }
                if data[self.prod(a, b)] != self.prod(data[a], data[b]) {
                    return Err(Error::NotMultiplicative(self.format(&a), self.format(&b)));
                }
            }
        }
        let mut seen = vec![false; self.size];
        let injective = data.iter().all(|&v| !std::mem::replace(&mut seen[v], true));
        Ok(MapFlags { injective, bijective: injective })
    }

    fn check_derivation(&self, sigma: &Vec<usize>, delta: &Vec<usize>) -> Result<()> {
        self.check_total(delta)?;
        for a in 0..self.size {
            for b in 0..self.size {
                if delta[self.sum(a, b)] != self.sum(delta[a], delta[b]) {
                    return Err(Error::NotAdditive(self.format(&a), self.format(&b)));
                }
                let rhs = self.sum(self.prod(sigma[a], delta[b]), self.prod(delta[a], b));
                if delta[self.prod(a, b)] != rhs {
                    return Err(Error::LeibnizViolation(self.format(&a), self.format(&b)));
                }
            }
        }
        Ok(())
    }

    fn map_is_identity(&self, data: &Vec<usize>) -> bool {
        data.iter().enumerate().all(|(i, &v)| i == v)
    }

    fn derivation_is_zero(&self, data: &Vec<usize>) -> bool {
        data.iter().all(|&v| v == self.zero)
    }

    fn from_rational(&self, q: &BigRational) -> Result<usize> {
        let n = q
            .is_integer()
            .then(|| q.to_integer() % BigInt::from(self.additive_order_of_one()))
            .and_then(|k| k.to_i64())
            .ok_or_else(|| Error::Parse(format!("{q} is not an element of this ring")))?;
        Ok(self.from_int(n))
    }

    fn spec(&self) -> RingSpec {
        self.spec.clone()
    }
}

impl FiniteRing {
    fn check_total(&self, data: &[usize]) -> Result<()> {
        if data.len() != self.size || data.iter().any(|&v| v >= self.size) {
            return Err(Error::InvalidInput(format!(
                "map table must list {} ids below {}",
                self.size, self.size
            )));
        }
        Ok(())
    }
}
