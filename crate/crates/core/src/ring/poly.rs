use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{FieldSpec, MapFlags, Ring, RingSpec};
use crate::error::{Error, Result};
use crate::expr::{self, Evaluator};

/// The field of constants of a polynomial ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseField {
    Rational,
    Prime(u64),
}

impl BaseField {
    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        match spec {
            FieldSpec::Q => Ok(BaseField::Rational),
            FieldSpec::Gf { p } => {
                if *p < 2 || !(2..).take_while(|d| d * d <= *p).all(|d| p % d != 0) {
                    return Err(Error::InvalidInput(format!("GF({p}) needs a prime")));
                }
                Ok(BaseField::Prime(*p))
            }
        }
    }

    pub fn spec(&self) -> FieldSpec {
        match self {
            BaseField::Rational => FieldSpec::Q,
            BaseField::Prime(p) => FieldSpec::Gf { p: *p },
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            BaseField::Rational => 0,
            BaseField::Prime(p) => *p,
        }
    }

    /// Canonical representative; `None` when a denominator vanishes mod p.
    pub fn normalize(&self, c: BigRational) -> Option<BigRational> {
        match self {
            BaseField::Rational => Some(c),
            BaseField::Prime(p) => {
                let p = BigInt::from(*p);
                let num = ((c.numer() % &p) + &p) % &p;
                let den = ((c.denom() % &p) + &p) % &p;
                if den.is_zero() {
                    return None;
                }
                let inv = den.modpow(&(&p - 2), &p);
                Some(BigRational::from_integer((num * inv) % &p))
            }
        }
    }

    fn norm(&self, c: BigRational) -> BigRational {
        self.normalize(c).expect("arithmetic never introduces denominators divisible by p")
    }

    pub fn inverse(&self, c: &BigRational) -> Option<BigRational> {
        if c.is_zero() {
            None
        } else {
            Some(self.norm(c.recip()))
        }
    }
}

/// A polynomial with exact coefficients: exponent vector → nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Poly {
    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// The value of a constant polynomial.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }
}

/// ℚ[y₁..yₙ] or GF(p)[y₁..yₙ]; with no variables, the base field itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    field: BaseField,
    vars: Vec<String>,
}

impl PolyRing {
    pub fn new(field: BaseField, vars: Vec<String>) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::DuplicateVariable(v.clone()));
            }
            if !v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(Error::InvalidInput(format!("`{v}` is not a valid variable name")));
            }
        }
        Ok(PolyRing { field, vars })
    }

    pub fn from_spec(spec: &RingSpec) -> Result<Self> {
        match spec {
            RingSpec::Poly { base, vars } => Self::new(BaseField::from_spec(base)?, vars.clone()),
            _ => Err(Error::InvalidInput("expected a polynomial ring spec".into())),
        }
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn constant(&self, c: BigRational) -> Poly {
        let c = self.field.norm(c);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; self.nvars()], c);
        }
        Poly { terms }
    }

    pub fn int(&self, n: i64) -> Poly {
        self.constant(BigRational::from_integer(n.into()))
    }

    pub fn rational(&self, num: i64, den: i64) -> Poly {
        self.constant(BigRational::new(num.into(), den.into()))
    }

    pub fn var(&self, i: usize) -> Poly {
        let mut e = vec![0; self.nvars()];
        e[i] = 1;
        Poly { terms: BTreeMap::from([(e, BigRational::one())]) }
    }

    pub fn scale(&self, c: &BigRational, a: &Poly) -> Poly {
        let mut out = Poly::default();
        for (e, x) in &a.terms {
            let v = self.field.norm(x * c);
            if !v.is_zero() {
                out.terms.insert(e.clone(), v);
            }
        }
        out
    }

    fn add_into(&self, acc: &mut Poly, e: &[u32], c: &BigRational) {
        let slot = acc.terms.entry(e.to_vec()).or_insert_with(BigRational::zero);
        *slot = self.field.norm(&*slot + c);
        if slot.is_zero() {
            acc.terms.remove(e);
        }
    }

    fn pow(&self, a: &Poly, k: u32) -> Poly {
        (0..k).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    fn monomial_image(&self, images: &[Poly], e: &[u32]) -> Poly {
        e.iter().enumerate().fold(self.one(), |acc, (i, &k)| {
            if k == 0 {
                acc
            } else {
                self.mul(&acc, &self.pow(&images[i], k))
            }
        })
    }

    fn derivation_on_monomial(
        &self,
        sigma: &[Poly],
        delta: &[Poly],
        e: &[u32],
        memo: &mut HashMap<Vec<u32>, Poly>,
    ) -> Poly {
        if let Some(v) = memo.get(e) {
            return v.clone();
        }
        let Some(i) = e.iter().position(|&k| k > 0) else {
            return Poly::default();
        };
        // δ(yᵢ·m') = σ(yᵢ)δ(m') + δ(yᵢ)m'
        let mut rest = e.to_vec();
        rest[i] -= 1;
        let d_rest = self.derivation_on_monomial(sigma, delta, &rest, memo);
        let rest_poly = Poly { terms: BTreeMap::from([(rest, BigRational::one())]) };
        let v = self.add(&self.mul(&sigma[i], &d_rest), &self.mul(&delta[i], &rest_poly));
        memo.insert(e.to_vec(), v.clone());
        v
    }

    fn format_coeff(&self, c: &BigRational) -> String {
        if c.is_integer() {
            c.numer().to_string()
        } else {
            format!("{}/{}", c.numer(), c.denom())
        }
    }

    fn check_len(&self, data: &[Poly], what: &str) -> Result<()> {
        if data.len() != self.nvars() {
            return Err(Error::InvalidInput(format!(
                "{what} must give one polynomial per ring variable ({} expected)",
                self.nvars()
            )));
        }
        Ok(())
    }

    /// Formal partial derivative with respect to variable `i`.
    fn partial(&self, a: &Poly, i: usize) -> Poly {
        let mut out = Poly::default();
        for (e, c) in &a.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                let k = BigRational::from_integer(e[i].into());
                self.add_into(&mut out, &f, &(c * k));
            }
        }
        out
    }

    fn determinant(&self, m: &[Vec<Poly>]) -> Poly {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = Poly::default();
        for col in 0..n {
            let minor: Vec<Vec<Poly>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, p)| p.clone()).collect())
                .collect();
            let term = self.mul(&m[0][col], &self.determinant(&minor));
            acc = if col % 2 == 0 { self.add(&acc, &term) } else { self.sub(&acc, &term) };
        }
        acc
    }

    /// Rank test of the linear part of affine images.
    fn linear_part_invertible(&self, images: &[Poly]) -> bool {
        let n = self.nvars();
        let mut m: Vec<Vec<BigRational>> = images
            .iter()
            .map(|p| {
                (0..n)
                    .map(|j| {
                        let mut e = vec![0; n];
                        e[j] = 1;
                        p.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else { return false };
            m.swap(col, piv);
            let inv = self.field.inverse(&m[col][col]).unwrap();
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = self.field.norm(&m[r][col] * &inv);
                    for c in col..n {
                        let v = self.field.norm(&m[r][c] - &f * &m[col][c]);
                        m[r][c] = v;
                    }
                }
            }
        }
        true
    }
}

struct PolyEval<'a>(&'a PolyRing);

impl Evaluator for PolyEval<'_> {
    type Value = Poly;
    fn number(&self, value: &BigRational) -> Result<Poly> {
        let c = self.0.field.normalize(value.clone()).ok_or_else(|| {
            Error::Parse(format!("{value} has a denominator divisible by the characteristic"))
        })?;
        Ok(self.0.constant(c))
    }
    fn identifier(&self, name: &str) -> Result<Poly> {
        match self.0.vars.iter().position(|v| v == name) {
            Some(i) => Ok(self.0.var(i)),
            None => Err(Error::Parse(format!("unknown variable `{name}`"))),
        }
    }
    fn bracket(&self, text: &str) -> Result<Poly> {
        self.0.parse_element(text)
    }
    fn add(&self, a: Poly, b: Poly) -> Poly {
        Ring::add(self.0, &a, &b)
    }
    fn neg(&self, a: Poly) -> Poly {
        Ring::neg(self.0, &a)
    }
    fn mul(&self, a: Poly, b: Poly) -> Result<Poly> {
        Ok(Ring::mul(self.0, &a, &b))
    }
    fn one(&self) -> Poly {
        Ring::one(self.0)
    }
}

impl Ring for PolyRing {
    type Elem = Poly;
    type MapData = Vec<Poly>;

    fn zero(&self) -> Poly {
        Poly::default()
    }

    fn one(&self) -> Poly {
        self.int(1)
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = a.clone();
        for (e, c) in &b.terms {
            self.add_into(&mut out, e, c);
        }
        out
    }

    fn neg(&self, a: &Poly) -> Poly {
        self.scale(&-BigRational::one(), a)
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                self.add_into(&mut out, &e, &(ca * cb));
            }
        }
        out
    }

    fn is_zero(&self, a: &Poly) -> bool {
        a.terms.is_empty()
    }

    fn from_int(&self, n: i64) -> Poly {
        self.int(n)
    }

    fn format(&self, a: &Poly) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&Vec<u32>> = a.terms.keys().collect();
        keys.sort_by(|x, y| {
            let (dx, dy): (u32, u32) = (x.iter().sum(), y.iter().sum());
            dy.cmp(&dx).then_with(|| y.cmp(x))
        });
        let mut out = String::new();
        for (k, e) in keys.into_iter().enumerate() {
            let c = &a.terms[e];
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { self.vars[i].clone() } else { format!("{}^{x}", self.vars[i]) })
                .collect();
            let mono = mono.join("*");
            let term = if mono.is_empty() {
                self.format_coeff(c)
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else {
                format!("{}*{mono}", self.format_coeff(c))
            };
            match (k, term.strip_prefix('-')) {
                (0, _) => out.push_str(&term),
                (_, Some(rest)) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                (_, None) => {
                    out.push_str(" + ");
                    out.push_str(&term);
                }
            }
        }
        out
    }

    fn format_factor(&self, a: &Poly) -> String {
        let s = self.format(a);
        if a.terms.len() > 1 {
            format!("({s})")
        } else {
            s
        }
    }

    fn unit_inverse(&self, a: &Poly) -> Option<Poly> {
        let c = a.as_constant()?;
        self.field.inverse(&c).map(|i| self.constant(i))
    }

    fn is_central(&self, _a: &Poly) -> bool {
        true
    }

    fn elements(&self) -> Option<Vec<Poly>> {
        None
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> Poly {
        let mut out = Poly::default();
        for _ in 0..rng.gen_range(1..=2) {
            let mut c = 0i64;
            while c == 0 {
                c = rng.gen_range(-3..=3);
            }
            let e: Vec<u32> = (0..self.nvars()).map(|_| rng.gen_range(0..=1)).collect();
            self.add_into(&mut out, &e, &BigRational::from_integer(c.into()));
        }
        if out.is_zero() {
            self.one()
        } else {
            out
        }
    }

    fn parse_element(&self, text: &str) -> Result<Poly> {
        expr::evaluate(&expr::parse(text)?, &PolyEval(self))
    }

    fn generator_names(&self) -> Vec<(String, Poly)> {
        self.vars.iter().enumerate().map(|(i, v)| (v.clone(), self.var(i))).collect()
    }

    fn apply_map(&self, images: &Vec<Poly>, a: &Poly) -> Poly {
        let mut out = Poly::default();
        for (e, c) in &a.terms {
            out = self.add(&out, &self.scale(c, &self.monomial_image(images, e)));
        }
        out
    }

    fn apply_derivation(&self, sigma: &Vec<Poly>, delta: &Vec<Poly>, a: &Poly) -> Poly {
        let mut memo = HashMap::new();
        let mut out = Poly::default();
        for (e, c) in &a.terms {
            let d = self.derivation_on_monomial(sigma, delta, e, &mut memo);
            out = self.add(&out, &self.scale(c, &d));
        }
        out
    }

    fn identity_map(&self) -> Vec<Poly> {
        (0..self.nvars()).map(|i| self.var(i)).collect()
    }

    fn zero_derivation(&self) -> Vec<Poly> {
        vec![Poly::default(); self.nvars()]
    }

    fn check_map(&self, images: &Vec<Poly>) -> Result<MapFlags> {
        self.check_len(images, "a ring map")?;
        let n = self.nvars();
        if n == 0 {
            return Ok(MapFlags { injective: true, bijective: true });
        }
        if images.iter().all(|p| p.degree() <= 1) {
            let inv = self.linear_part_invertible(images);
            return Ok(MapFlags { injective: inv, bijective: inv });
        }
        if n == 1 {
            return Ok(MapFlags { injective: images[0].degree() > 0, bijective: false });
        }
        let jac: Vec<Vec<Poly>> =
            images.iter().map(|p| (0..n).map(|j| self.partial(p, j)).collect()).collect();
        if !self.determinant(&jac).is_zero() {
            Ok(MapFlags { injective: true, bijective: false })
        } else if self.field.characteristic() == 0 {
            Ok(MapFlags { injective: false, bijective: false })
        } else {
            Err(Error::PolynomialBackendUnsupported(
                "injectivity of a nonlinear map with vanishing Jacobian in positive characteristic",
            ))
        }
    }

    fn check_derivation(&self, sigma: &Vec<Poly>, delta: &Vec<Poly>) -> Result<()> {
        self.check_len(delta, "a derivation")?;
        // δ is additive by construction; the Leibniz extension from the
        // generators is well defined iff it respects yᵢyⱼ = yⱼyᵢ.
        for i in 0..self.nvars() {
            for j in i + 1..self.nvars() {
                let (yi, yj) = (self.var(i), self.var(j));
                let lhs = self.add(&self.mul(&sigma[i], &delta[j]), &self.mul(&delta[i], &yj));
                let rhs = self.add(&self.mul(&sigma[j], &delta[i]), &self.mul(&delta[j], &yi));
                if lhs != rhs {
                    return Err(Error::LeibnizViolation(self.vars[i].clone(), self.vars[j].clone()));
                }
            }
        }
        Ok(())
    }

    fn map_is_identity(&self, images: &Vec<Poly>) -> bool {
        images.iter().enumerate().all(|(i, p)| *p == self.var(i))
    }

    fn derivation_is_zero(&self, data: &Vec<Poly>) -> bool {
        data.iter().all(Poly::is_zero)
    }

    fn from_rational(&self, q: &BigRational) -> Result<Poly> {
        PolyEval(self).number(q)
    }

    fn spec(&self) -> RingSpec {
        RingSpec::Poly { base: self.field.spec(), vars: self.vars.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qy() -> PolyRing {
        PolyRing::new(BaseField::Rational, vec!["y".into()]).unwrap()
    }

    #[test]
    fn square_of_y_plus_one() {
        let r = qy();
        let f = r.parse_element("y + 1").unwrap();
        assert_eq!(r.format(&r.mul(&f, &f)), "y^2 + 2*y + 1");
    }

    #[test]
    fn characteristic_three_cancels() {
        let r = PolyRing::new(BaseField::Prime(3), vec!["y".into()]).unwrap();
        let f = r.parse_element("2*y + y").unwrap();
        assert!(r.is_zero(&f));
    }

    #[test]
    fn variables_commute() {
        let r = PolyRing::new(BaseField::Rational, vec!["t1".into(), "t2".into()]).unwrap();
        let a = r.parse_element("t1*t2").unwrap();
        let b = r.parse_element("t2*t1").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn duplicate_variables_are_rejected() {
        let e = PolyRing::new(BaseField::Rational, vec!["y".into(), "y".into()]);
        assert_eq!(e, Err(Error::DuplicateVariable("y".into())));
    }

    #[test]
    fn twisted_derivation_on_y_squared() {
        let r = qy();
        let sigma = vec![r.parse_element("2*y").unwrap()];
        let delta = vec![r.one()];
        r.check_derivation(&sigma, &delta).unwrap();
        let y2 = r.parse_element("y^2").unwrap();
        assert_eq!(r.format(&r.apply_derivation(&sigma, &delta, &y2)), "3*y");
    }

    #[test]
    fn inconsistent_generator_values_violate_leibniz() {
        let r = PolyRing::new(BaseField::Rational, vec!["a".into(), "b".into()]).unwrap();
        let sigma = vec![r.parse_element("2*a").unwrap(), r.var(1)];
        let delta = vec![r.zero(), r.one()];
        // (σ(a) − a)δ(b) = a ≠ 0 = (σ(b) − b)δ(a)
        assert!(matches!(r.check_derivation(&sigma, &delta), Err(Error::LeibnizViolation(..))));
    }

    #[test]
    fn map_flags_for_affine_and_nonlinear_images() {
        let r = qy();
        let scale = r.check_map(&vec![r.parse_element("2*y").unwrap()]).unwrap();
        assert!(scale.bijective);
        let square = r.check_map(&vec![r.parse_element("y^2").unwrap()]).unwrap();
        assert!(square.injective && !square.bijective);
        let constant = r.check_map(&vec![r.int(3)]).unwrap();
        assert!(!constant.injective);
        let r2 = PolyRing::new(BaseField::Rational, vec!["a".into(), "b".into()]).unwrap();
        let collapse = r2.check_map(&vec![r2.var(0), r2.var(0)]).unwrap();
        assert!(!collapse.injective);
        let jac = r2.check_map(&vec![r2.parse_element("a + b^2").unwrap(), r2.var(1)]).unwrap();
        assert!(jac.injective);
    }

    #[test]
    fn rationals_print_as_fractions() {
        let r = qy();
        let f = r.parse_element("1/2*y - 3").unwrap();
        assert_eq!(r.format(&f), "1/2*y - 3");
    }
}
