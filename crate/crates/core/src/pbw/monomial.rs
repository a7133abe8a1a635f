use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exponent vector α ∈ ℕⁿ; the zero vector is the monomial 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise ≤.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut v = self.0.clone();
        v[i] = e;
        Monomial(v)
    }

    /// The variable word x₁^{α₁}⋯xₙ^{αₙ} as a list of indices.
    pub fn word(&self) -> Vec<u16> {
        let mut w = Vec::with_capacity(self.degree() as usize);
        for (i, &e) in self.0.iter().enumerate() {
            w.extend(std::iter::repeat_n(i as u16, e as usize));
        }
        w
    }

    /// Inverse of [`Monomial::word`] for sorted words.
    pub fn from_sorted_word(n: usize, word: &[u16]) -> Monomial {
        let mut e = vec![0; n];
        for &v in word {
            e[v as usize] += 1;
        }
        Monomial(e)
    }

    /// All monomials in `n` variables of total degree at most `d`, in
    /// increasing degree, lexicographic within a degree.
    pub fn up_to_degree(n: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for deg in 0..=d {
            let mut cur = vec![0; n];
            compositions(n, deg, 0, &mut cur, &mut out);
        }
        out
    }
}

fn compositions(n: usize, left: u32, at: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if n == 0 {
        if left == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    if at == n - 1 {
        cur[at] = left;
        out.push(Monomial(cur.clone()));
        cur[at] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[at] = e;
        compositions(n, left - e, at + 1, cur, out);
    }
    cur[at] = 0;
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Deglex,
    Degrevlex,
    Lex,
}

/// A monomial order: a kind plus the variables listed from most to least
/// significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    kind: OrderKind,
    significance: Vec<usize>,
}

impl MonomialOrder {
    /// The natural order x₁ < x₂ < … < xₙ.
    pub fn new(kind: OrderKind, n: usize) -> Self {
        MonomialOrder { kind, significance: (0..n).rev().collect() }
    }

    pub fn deglex(n: usize) -> Self {
        Self::new(OrderKind::Deglex, n)
    }

    /// `significance[0]` is the largest variable.
    pub fn with_significance(kind: OrderKind, significance: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; significance.len()];
        for &v in &significance {
            if v >= seen.len() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidInput("variable order must be a permutation".into()));
            }
        }
        Ok(MonomialOrder { kind, significance })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn significance(&self) -> &[usize] {
        &self.significance
    }

    pub fn is_natural(&self) -> bool {
        self.significance.iter().rev().enumerate().all(|(i, &v)| i == v)
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let lex = || {
            for &v in &self.significance {
                match a.0[v].cmp(&b.0[v]) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        };
        match self.kind {
            OrderKind::Lex => lex(),
            OrderKind::Deglex => a.degree().cmp(&b.degree()).then_with(lex),
            OrderKind::Degrevlex => a.degree().cmp(&b.degree()).then_with(|| {
                for &v in self.significance.iter().rev() {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }

    pub fn max<'a>(&self, a: &'a Monomial, b: &'a Monomial) -> &'a Monomial {
        if self.cmp(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(v: &[u32]) -> Monomial {
        Monomial::new(v.to_vec())
    }

    #[test]
    fn deglex_prefers_degree_then_last_variable() {
        let o = MonomialOrder::deglex(2);
        assert_eq!(o.cmp(&m(&[0, 1]), &m(&[1, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[2, 0]), &m(&[0, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 0]), &m(&[1, 0])), Ordering::Less);
    }

    #[test]
    fn degrevlex_differs_from_deglex_in_three_variables() {
        let a = m(&[1, 0, 1]);
        let b = m(&[0, 2, 0]);
        let deglex = MonomialOrder::new(OrderKind::Deglex, 3);
        let degrevlex = MonomialOrder::new(OrderKind::Degrevlex, 3);
        assert_eq!(deglex.cmp(&a, &b), Ordering::Greater);
        assert_eq!(degrevlex.cmp(&a, &b), Ordering::Less);
    }

    #[test]
    fn monomials_up_to_degree_are_counted_correctly() {
        assert_eq!(Monomial::up_to_degree(1, 2).len(), 3);
        assert_eq!(Monomial::up_to_degree(2, 2).len(), 6);
        assert_eq!(Monomial::up_to_degree(3, 3).len(), 20);
        assert_eq!(Monomial::up_to_degree(0, 3), vec![m(&[])]);
    }

    #[test]
    fn word_round_trips() {
        let a = m(&[2, 0, 1]);
        assert_eq!(a.word(), vec![0, 0, 2]);
        assert_eq!(Monomial::from_sorted_word(3, &a.word()), a);
    }

    #[test]
    fn bad_permutation_is_rejected() {
        assert!(MonomialOrder::with_significance(OrderKind::Lex, vec![0, 0]).is_err());
    }

    fn order_strategy() -> impl Strategy<Value = MonomialOrder> {
        (
            prop_oneof![Just(OrderKind::Deglex), Just(OrderKind::Degrevlex), Just(OrderKind::Lex)],
            Just((0..3usize).collect::<Vec<_>>()).prop_shuffle(),
        )
            .prop_map(|(k, p)| MonomialOrder::with_significance(k, p).unwrap())
    }

    proptest! {
        #[test]
        fn orders_are_compatible_with_multiplication(
            o in order_strategy(),
            a in prop::collection::vec(0u32..4, 3),
            b in prop::collection::vec(0u32..4, 3),
            c in prop::collection::vec(0u32..4, 3),
        ) {
            let (a, b, c) = (m(&a), m(&b), m(&c));
            if o.cmp(&a, &b) != Ordering::Greater {
                prop_assert_ne!(o.cmp(&a.mul(&c), &b.mul(&c)), Ordering::Greater);
            }
        }

        #[test]
        fn orders_are_total_and_antisymmetric(
            o in order_strategy(),
            a in prop::collection::vec(0u32..4, 3),
            b in prop::collection::vec(0u32..4, 3),
        ) {
            let (a, b) = (m(&a), m(&b));
            prop_assert_eq!(o.cmp(&a, &b), o.cmp(&b, &a).reverse());
            prop_assert_eq!(o.cmp(&a, &b) == Ordering::Equal, a == b);
        }

        #[test]
        fn one_is_minimal_for_degree_orders(a in prop::collection::vec(0u32..4, 3)) {
            for kind in [OrderKind::Deglex, OrderKind::Degrevlex] {
                let o = MonomialOrder::new(kind, 3);
                prop_assert_ne!(o.cmp(&Monomial::one(3), &m(&a)), Ordering::Greater);
            }
        }
    }
}
