//! Finite right R-modules over finite rings, their submodules, and the
//! induced A-modules M⟨X⟩.

mod induced;

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ring::{FiniteRing, IdealSet, Side};

pub use induced::{BoundedIdeal, Induced, InducedElement, ANN_SEARCH_CAP};

/// Largest module whose submodule lattice is enumerated.
pub const SUBMODULE_CAP: usize = 256;

/// Largest |M|·|R| whose module axioms are checked exhaustively.
pub const EXHAUSTIVE_MODULE_CAP: usize = 1 << 16;

/// A finite right module given by an addition table and an action table.
#[derive(Debug, Clone)]
pub struct FiniteModule {
    ring: Arc<FiniteRing>,
    size: usize,
    add: Vec<usize>,
    act: Vec<usize>,
    neg: Vec<usize>,
    zero: usize,
    labels: Vec<String>,
    regular: bool,
}

impl PartialEq for FiniteModule {
    fn eq(&self, other: &Self) -> bool {
        self.add == other.add && self.act == other.act && *self.ring == *other.ring
    }
}

impl FiniteModule {
    /// Validates tables `add[m][n]` and `act[m][r]`.
    pub fn from_tables(ring: Arc<FiniteRing>, add: &[Vec<usize>], act: &[Vec<usize>]) -> Result<Self> {
        let labels = (0..add.len()).map(|i| format!("m{i}")).collect();
        Self::from_tables_labeled(ring, add, act, labels)
    }

    pub fn from_tables_labeled(
        ring: Arc<FiniteRing>,
        add: &[Vec<usize>],
        act: &[Vec<usize>],
        labels: Vec<String>,
    ) -> Result<Self> {
        let size = add.len();
        let rs = ring.size();
        if size == 0 {
            return Err(Error::InvalidInput("a module needs at least the zero element".into()));
        }
        if act.len() != size
            || add.iter().any(|row| row.len() != size || row.iter().any(|&v| v >= size))
            || act.iter().any(|row| row.len() != rs || row.iter().any(|&v| v >= size))
        {
            return Err(Error::InvalidInput("module tables have the wrong shape".into()));
        }
        let add: Vec<usize> = add.concat();
        let act: Vec<usize> = act.concat();
        let (zero, neg) = check_module_axioms(&ring, size, &add, &act)?;
        Ok(FiniteModule { ring, size, add, act, neg, zero, labels, regular: false })
    }

    /// R as a right module over itself.
    pub fn regular(ring: Arc<FiniteRing>) -> Self {
        let n = ring.size();
        let add: Vec<usize> = (0..n * n).map(|k| ring.sum(k / n, k % n)).collect();
        let act: Vec<usize> = (0..n * n).map(|k| ring.prod(k / n, k % n)).collect();
        let neg = (0..n).map(|a| ring.negative(a)).collect();
        let labels = (0..n).map(|a| ring.label(a).to_string()).collect();
        FiniteModule { zero: ring.zero_id(), ring, size: n, add, act, neg, labels, regular: true }
    }

    pub fn zero_module(ring: Arc<FiniteRing>) -> Self {
        let rs = ring.size();
        FiniteModule {
            ring,
            size: 1,
            add: vec![0],
            act: vec![0; rs],
            neg: vec![0],
            zero: 0,
            labels: vec!["0".into()],
            regular: false,
        }
    }

    /// A submodule as a module in its own right, keeping the labels.
    pub fn restrict(&self, sub: &SubmoduleSet) -> FiniteModule {
        let ids = sub.members();
        let index = |m: usize| ids.binary_search(&m).expect("submodule is closed");
        let k = ids.len();
        let rs = self.ring.size();
        let mut add = Vec::with_capacity(k * k);
        for &a in ids {
            for &b in ids {
                add.push(index(self.sum(a, b)));
            }
        }
        let mut act = Vec::with_capacity(k * rs);
        for &a in ids {
            for r in self.ring.ids() {
                act.push(index(self.act(a, r)));
            }
        }
        let neg = ids.iter().map(|&a| index(self.negative(a))).collect();
        FiniteModule {
            ring: self.ring.clone(),
            size: k,
            add,
            act,
            neg,
            zero: index(self.zero),
            labels: ids.iter().map(|&a| self.labels[a].clone()).collect(),
            regular: self.regular && k == self.size,
        }
    }

    /// The right ideal generated by `gens`, as a module.
    pub fn right_ideal(ring: Arc<FiniteRing>, gens: &[usize]) -> FiniteModule {
        let reg = FiniteModule::regular(ring);
        let sub = SubmoduleSet::generate(&reg, gens);
        reg.restrict(&sub)
    }

    /// M ⊕ N with id (m, n) = m + |M|·n.
    pub fn direct_sum(&self, other: &FiniteModule) -> Result<FiniteModule> {
        if *self.ring != *other.ring {
            return Err(Error::InvalidInput("direct summands live over different rings".into()));
        }
        let (a, b) = (self.size, other.size);
        let size = a * b;
        if size > SUBMODULE_CAP * SUBMODULE_CAP {
            return Err(Error::ModuleTooLarge { size, cap: SUBMODULE_CAP * SUBMODULE_CAP });
        }
        let split = |k: usize| (k % a, k / a);
        let rs = self.ring.size();
        let mut add = Vec::with_capacity(size * size);
        for x in 0..size {
            for y in 0..size {
                let ((x1, x2), (y1, y2)) = (split(x), split(y));
                add.push(self.sum(x1, y1) + a * other.sum(x2, y2));
            }
        }
        let mut act = Vec::with_capacity(size * rs);
        for x in 0..size {
            let (x1, x2) = split(x);
            for r in 0..rs {
                act.push(self.act(x1, r) + a * other.act(x2, r));
            }
        }
        let neg = (0..size).map(|x| self.negative(x % a) + a * other.negative(x / a)).collect();
        let labels =
            (0..size).map(|x| format!("({},{})", self.labels[x % a], other.labels[x / a])).collect();
        Ok(FiniteModule {
            ring: self.ring.clone(),
            size,
            add,
            act,
            neg,
            zero: self.zero + a * other.zero,
            labels,
            regular: false,
        })
    }

    /// The twisted module with action m·r := m·φ(r) for a ring map table φ.
    pub fn twisted(&self, table: &[usize]) -> FiniteModule {
        let rs = self.ring.size();
        let act = (0..self.size * rs).map(|k| self.act(k / rs, table[k % rs])).collect();
        FiniteModule { act, regular: false, ..self.clone() }
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn ring_arc(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    #[inline]
    pub fn sum(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b]
    }

    #[inline]
    pub fn act(&self, m: usize, r: usize) -> usize {
        self.act[m * self.ring.size() + r]
    }

    pub fn negative(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn zero_id(&self) -> usize {
        self.zero
    }

    pub fn label(&self, m: usize) -> &str {
        &self.labels[m]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn parse_element(&self, text: &str) -> Result<usize> {
        let t = text.trim();
        self.labels
            .iter()
            .position(|l| l == t)
            .or_else(|| t.parse::<usize>().ok().filter(|&k| k < self.size))
            .ok_or_else(|| Error::Parse(format!("`{t}` is not a module element")))
    }

    pub fn ids(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn nonzero_ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&m| m != self.zero)
    }

    pub fn is_zero_module(&self) -> bool {
        self.size == 1
    }

    /// ann_R(m) = {r : m·r = 0}, a right ideal.
    pub fn ann(&self, m: usize) -> IdealSet {
        let members = self.ring.ids().filter(|&r| self.act(m, r) == self.zero).collect();
        IdealSet::from_members(members, Side::Right)
    }

    /// ann_R(N) for a set of elements; two-sided when N is a submodule.
    pub fn ann_of(&self, elems: &[usize]) -> IdealSet {
        let members =
            self.ring.ids().filter(|&r| elems.iter().all(|&m| self.act(m, r) == self.zero)).collect();
        IdealSet::from_members(members, Side::TwoSided)
    }

    /// The cyclic submodule mR.
    pub fn cyclic(&self, m: usize) -> SubmoduleSet {
        SubmoduleSet::from_members(self.ring.ids().map(|r| self.act(m, r)).collect())
    }

    pub fn whole(&self) -> SubmoduleSet {
        SubmoduleSet::from_members(self.ids().collect())
    }

    pub fn zero_submodule(&self) -> SubmoduleSet {
        SubmoduleSet::from_members(vec![self.zero])
    }

    /// Every submodule, sorted by (size, members); includes 0 and M.
    pub fn submodules(&self) -> Result<Vec<SubmoduleSet>> {
        if self.size > SUBMODULE_CAP {
            return Err(Error::ModuleTooLarge { size: self.size, cap: SUBMODULE_CAP });
        }
        let cyclics: Vec<SubmoduleSet> = {
            let set: BTreeSet<SubmoduleSet> = self.ids().map(|m| self.cyclic(m)).collect();
            set.into_iter().collect()
        };
        let mut found: BTreeSet<SubmoduleSet> = cyclics.iter().cloned().collect();
        let mut frontier: Vec<SubmoduleSet> = cyclics.clone();
        while let Some(cur) = frontier.pop() {
            for c in &cyclics {
                if c.is_subset(&cur) {
                    continue;
                }
                let s = cur.sum(self, c);
                if !found.contains(&s) {
                    found.insert(s.clone());
                    frontier.push(s);
                }
            }
        }
        let mut all: Vec<SubmoduleSet> = found.into_iter().collect();
        all.sort_by(|a, b| (a.len(), &a.members).cmp(&(b.len(), &b.members)));
        Ok(all)
    }

    /// Distinct cyclic submodules, sorted by (size, members).
    pub fn cyclic_submodules(&self) -> Vec<SubmoduleSet> {
        let set: BTreeSet<SubmoduleSet> = self.ids().map(|m| self.cyclic(m)).collect();
        let mut v: Vec<SubmoduleSet> = set.into_iter().collect();
        v.sort_by(|a, b| (a.len(), &a.members).cmp(&(b.len(), &b.members)));
        v
    }
}

fn check_module_axioms(ring: &FiniteRing, n: usize, add: &[usize], act: &[usize]) -> Result<(usize, Vec<usize>)> {
    let rs = ring.size();
    let ad = |a: usize, b: usize| add[a * n + b];
    let ac = |m: usize, r: usize| act[m * rs + r];
    let fail = |axiom: &'static str, witness: Vec<usize>| Error::ModuleAxiomFailure { axiom, witness };
    let Some(zero) = (0..n).find(|&z| (0..n).all(|a| ad(z, a) == a && ad(a, z) == a)) else {
        return Err(fail("additive identity", vec![]));
    };
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
        if ac(a, ring.one_id()) != a {
            return Err(fail("m·1 = m", vec![a]));
        }
    }
    let check_group = |a: usize, b: usize, c: usize| -> Result<()> {
        if ad(ad(a, b), c) != ad(a, ad(b, c)) {
            return Err(fail("additive associativity", vec![a, b, c]));
        }
        Ok(())
    };
    let check_action = |m: usize, r: usize, s: usize| -> Result<()> {
        if ac(ac(m, r), s) != ac(m, ring.prod(r, s)) {
            return Err(fail("(m·r)·s = m·(rs)", vec![m, r, s]));
        }
        if ac(m, ring.sum(r, s)) != ad(ac(m, r), ac(m, s)) {
            return Err(fail("m·(r+s) = m·r + m·s", vec![m, r, s]));
        }
        Ok(())
    };
    let check_additive = |m: usize, k: usize, r: usize| -> Result<()> {
        if ac(ad(m, k), r) != ad(ac(m, r), ac(k, r)) {
            return Err(fail("(m+k)·r = m·r + k·r", vec![m, k, r]));
        }
        Ok(())
    };
    if n * rs <= EXHAUSTIVE_MODULE_CAP {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    check_group(a, b, c)?;
                }
                for r in 0..rs {
                    check_additive(a, b, r)?;
                }
            }
            for r in 0..rs {
                for s in 0..rs {
                    check_action(a, r, s)?;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..crate::ring::AXIOM_SAMPLES {
            let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            let (r, s) = (rng.gen_range(0..rs), rng.gen_range(0..rs));
            check_group(a, b, c)?;
            check_additive(a, b, r)?;
            check_action(a, r, s)?;
        }
    }
    Ok((zero, neg))
}

/// A submodule of a finite module: sorted element ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct SubmoduleSet {
    members: Vec<usize>,
}

impl SubmoduleSet {
    pub fn from_members(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        SubmoduleSet { members }
    }

    /// Smallest submodule containing `gens`.
    pub fn generate(module: &FiniteModule, gens: &[usize]) -> Self {
        gens.iter().fold(module.zero_submodule(), |acc, &g| acc.sum(module, &module.cyclic(g)))
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.members.len() <= 1
    }

    pub fn contains(&self, m: usize) -> bool {
        self.members.binary_search(&m).is_ok()
    }

    pub fn is_subset(&self, other: &SubmoduleSet) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn intersection(&self, other: &SubmoduleSet) -> SubmoduleSet {
        SubmoduleSet { members: self.members.iter().copied().filter(|&m| other.contains(m)).collect() }
    }

    pub fn sum(&self, module: &FiniteModule, other: &SubmoduleSet) -> SubmoduleSet {
        let mut s = BTreeSet::new();
        for &a in &self.members {
            for &b in &other.members {
                s.insert(module.sum(a, b));
            }
        }
        SubmoduleSet { members: s.into_iter().collect() }
    }

    /// Contains zero, closed under addition and the action.
    pub fn is_closed(&self, module: &FiniteModule) -> bool {
        self.contains(module.zero_id())
            && self.members.iter().all(|&a| {
                self.members.iter().all(|&b| self.contains(module.sum(a, b)))
                    && module.ring().ids().all(|r| self.contains(module.act(a, r)))
            })
    }

    pub fn nonzero(&self, module: &FiniteModule) -> impl Iterator<Item = usize> + '_ {
        let z = module.zero_id();
        self.members.iter().copied().filter(move |&m| m != z)
    }

    pub fn labels(&self, module: &FiniteModule) -> Vec<String> {
        self.members.iter().map(|&m| module.label(m).to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use crate::ring::Ring;
    use super::*;

    fn f2xf2() -> Arc<FiniteRing> {
        let f2 = FiniteRing::zmod(2).unwrap();
        Arc::new(FiniteRing::product(&[f2.clone(), f2]).unwrap())
    }

    #[test]
    fn regular_modules_validate_through_the_table_path() {
        for ring in [Arc::new(FiniteRing::zmod(4).unwrap()), f2xf2()] {
            let reg = FiniteModule::regular(ring.clone());
            let n = ring.size();
            let add: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| reg.sum(a, b)).collect()).collect();
            let act: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| reg.act(a, b)).collect()).collect();
            let m = FiniteModule::from_tables(ring, &add, &act).unwrap();
            assert_eq!(m, reg);
        }
    }

    #[test]
    fn coordinate_line_is_a_module() {
        let r = f2xf2();
        let e = r.parse_element("(1,0)").unwrap();
        let line = FiniteModule::right_ideal(r, &[e]);
        assert_eq!(line.size(), 2);
        assert_eq!(line.labels(), &["(0,0)", "(1,0)"]);
    }

    #[test]
    fn broken_action_is_rejected() {
        let r = Arc::new(FiniteRing::zmod(2).unwrap());
        let add = vec![vec![0, 1], vec![1, 0]];
        let act = vec![vec![0, 0], vec![0, 0]];
        assert!(matches!(
            FiniteModule::from_tables(r, &add, &act),
            Err(Error::ModuleAxiomFailure { .. })
        ));
    }

    #[test]
    fn zero_module_is_valid() {
        let r = Arc::new(FiniteRing::zmod(4).unwrap());
        let z = FiniteModule::zero_module(r.clone());
        let again = FiniteModule::from_tables(r, &[vec![0]], &[vec![0; 4]]).unwrap();
        assert_eq!(z, again);
        assert_eq!(z.submodules().unwrap().len(), 1);
    }

    #[test]
    fn submodule_lattices_of_small_modules() {
        let z4 = FiniteModule::regular(Arc::new(FiniteRing::zmod(4).unwrap()));
        let subs = z4.submodules().unwrap();
        let sets: Vec<&[usize]> = subs.iter().map(|s| s.members()).collect();
        assert_eq!(sets, vec![&[0][..], &[0, 2], &[0, 1, 2, 3]]);

        let m = FiniteModule::regular(f2xf2());
        let subs = m.submodules().unwrap();
        let labels: Vec<Vec<String>> = subs.iter().map(|s| s.labels(&m)).collect();
        assert_eq!(labels.len(), 4);
        assert!(labels.contains(&vec!["(0,0)".to_string(), "(1,0)".to_string()]));
        assert!(labels.contains(&vec!["(0,0)".to_string(), "(0,1)".to_string()]));
    }

    #[test]
    fn submodule_lattice_is_closed_under_meet_and_join() {
        let r = f2xf2();
        let m = FiniteModule::regular(r.clone()).direct_sum(&FiniteModule::regular(r)).unwrap();
        let subs = m.submodules().unwrap();
        for a in &subs {
            assert!(a.is_closed(&m));
            for b in &subs {
                assert!(subs.contains(&a.intersection(b)));
                assert!(subs.contains(&a.sum(&m, b)));
            }
        }
    }

    #[test]
    fn annihilators_in_small_modules() {
        let z4 = FiniteModule::regular(Arc::new(FiniteRing::zmod(4).unwrap()));
        assert_eq!(z4.ann(2).members(), &[0, 2]);
        let r = f2xf2();
        let m = FiniteModule::regular(r.clone());
        let e = r.parse_element("(1,0)").unwrap();
        assert_eq!(m.ann(e).labels(&r), vec!["(0,0)", "(0,1)"]);
    }

    #[test]
    fn twisted_action_is_associative() {
        let r = f2xf2();
        let swap: Vec<usize> = r.ids().map(|a| (a % 2) * 2 + a / 2).collect();
        let m = FiniteModule::regular(r.clone()).twisted(&swap);
        for a in m.ids() {
            for s in r.ids() {
                for t in r.ids() {
                    assert_eq!(m.act(a, r.prod(s, t)), m.act(m.act(a, s), t));
                }
            }
        }
    }
}
