use std::collections::BTreeSet;

use serde::Serialize;

use super::FiniteRing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Right,
    TwoSided,
}

/// An explicit ideal of a finite ring: sorted ids, always containing zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IdealSet {
    members: Vec<usize>,
    side: Side,
}

impl IdealSet {
    /// Smallest ideal of the given side containing `gens`, by closure to a
    /// fixpoint.
    pub fn generate(ring: &FiniteRing, gens: &[usize], side: Side) -> IdealSet {
        let mut set: BTreeSet<usize> = BTreeSet::new();
        let mut queue = vec![ring.zero_id()];
        queue.extend_from_slice(gens);
        while let Some(a) = queue.pop() {
            if !set.insert(a) {
                continue;
            }
            for r in ring.ids() {
                queue.push(ring.prod(a, r));
                if side == Side::TwoSided {
                    queue.push(ring.prod(r, a));
                }
            }
            for &b in &set {
                queue.push(ring.sum(a, b));
            }
        }
        IdealSet { members: set.into_iter().collect(), side }
    }

    /// Wraps a set already known to be closed. The set is sorted and
    /// deduplicated here.
    pub fn from_members(mut members: Vec<usize>, side: Side) -> IdealSet {
        members.sort_unstable();
        members.dedup();
        IdealSet { members, side }
    }

    pub fn zero(ring: &FiniteRing) -> IdealSet {
        IdealSet { members: vec![ring.zero_id()], side: Side::TwoSided }
    }

    pub fn whole(ring: &FiniteRing) -> IdealSet {
        IdealSet { members: ring.ids().collect(), side: Side::TwoSided }
    }

    /// Every ideal of the given side, sorted by (size, members).
    pub fn all(ring: &FiniteRing, side: Side) -> Vec<IdealSet> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let principal: Vec<IdealSet> =
            ring.ids().map(|a| IdealSet::generate(ring, &[a], side)).collect();
        let mut frontier: Vec<Vec<usize>> = Vec::new();
        for p in &principal {
            if found.insert(p.members.clone()) {
                frontier.push(p.members.clone());
            }
        }
        while let Some(cur) = frontier.pop() {
            for p in &principal {
                let sum = sum_sets(ring, &cur, &p.members);
                if found.insert(sum.clone()) {
                    frontier.push(sum);
                }
            }
        }
        let mut all: Vec<IdealSet> =
            found.into_iter().map(|members| IdealSet { members, side }).collect();
        all.sort_by(|a, b| (a.len(), &a.members).cmp(&(b.len(), &b.members)));
        all
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }
    pub fn side(&self) -> Side {
        self.side
    }
    pub fn len(&self) -> usize {
        self.members.len()
    }
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }
    pub fn is_zero(&self) -> bool {
        self.members.len() == 1
    }
    pub fn is_subset(&self, other: &IdealSet) -> bool {
        self.members.iter().all(|&a| other.contains(a))
    }
    pub fn same_members(&self, other: &IdealSet) -> bool {
        self.members == other.members
    }

    pub fn intersection(&self, other: &IdealSet) -> IdealSet {
        let members = self.members.iter().copied().filter(|&a| other.contains(a)).collect();
        let side = if self.side == Side::TwoSided && other.side == Side::TwoSided {
            Side::TwoSided
        } else {
            Side::Right
        };
        IdealSet { members, side }
    }

    /// Image of the set under a map table.
    pub fn image(&self, table: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = self.members.iter().map(|&a| table[a]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// {r : table[r] ∈ self}; equals the image under the inverse map when
    /// the table is bijective.
    pub fn preimage(&self, table: &[usize]) -> IdealSet {
        let members = (0..table.len()).filter(|&r| self.contains(table[r])).collect();
        IdealSet { members, side: self.side }
    }

    /// Checks closure under the declared multiplications and addition.
    pub fn is_closed(&self, ring: &FiniteRing) -> bool {
        self.contains(ring.zero_id())
            && self.members.iter().all(|&a| {
                self.members.iter().all(|&b| self.contains(ring.sum(a, b)))
                    && ring.ids().all(|r| {
                        self.contains(ring.prod(a, r))
                            && (self.side == Side::Right || self.contains(ring.prod(r, a)))
                    })
            })
    }

    /// Prime two-sided ideal: proper, and aRb ⊆ P forces a ∈ P or b ∈ P.
    pub fn is_prime(&self, ring: &FiniteRing) -> bool {
        if self.len() == ring.size() {
            return false;
        }
        let outside: Vec<usize> = ring.ids().filter(|&a| !self.contains(a)).collect();
        outside.iter().all(|&a| {
            outside
                .iter()
                .all(|&b| ring.ids().any(|r| !self.contains(ring.prod(ring.prod(a, r), b))))
        })
    }

    pub fn labels(&self, ring: &FiniteRing) -> Vec<String> {
        self.members.iter().map(|&a| ring.label(a).to_string()).collect()
    }
}

fn sum_sets(ring: &FiniteRing, a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut s: BTreeSet<usize> = BTreeSet::new();
    for &x in a {
        for &y in b {
            s.insert(ring.sum(x, y));
        }
    }
    s.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    #[test]
    fn ideal_of_two_in_z4() {
        let r = FiniteRing::zmod(4).unwrap();
        assert_eq!(IdealSet::generate(&r, &[2], Side::Right).members(), &[0, 2]);
    }

    #[test]
    fn empty_generators_give_zero_ideal() {
        let r = FiniteRing::zmod(4).unwrap();
        assert_eq!(IdealSet::generate(&r, &[], Side::TwoSided).members(), &[0]);
    }

    #[test]
    fn coordinate_ideal_in_f2_squared() {
        let f2 = FiniteRing::zmod(2).unwrap();
        let r = FiniteRing::product(&[f2.clone(), f2]).unwrap();
        let e = r.parse_element("(1,0)").unwrap();
        let i = IdealSet::generate(&r, &[e], Side::Right);
        assert_eq!(i.labels(&r), vec!["(0,0)", "(1,0)"]);
    }

    #[test]
    fn z4_ideals_form_a_chain() {
        let r = FiniteRing::zmod(4).unwrap();
        let all = IdealSet::all(&r, Side::TwoSided);
        let sizes: Vec<usize> = all.iter().map(|i| i.len()).collect();
        assert_eq!(sizes, vec![1, 2, 4]);
        assert!(all[1].is_prime(&r));
        assert!(!all[0].is_prime(&r));
    }

    #[test]
    fn generation_is_idempotent_on_every_ideal() {
        let f2 = FiniteRing::zmod(2).unwrap();
        let rings = [
            FiniteRing::zmod(4).unwrap(),
            FiniteRing::zmod(6).unwrap(),
            FiniteRing::product(&[f2.clone(), f2]).unwrap(),
            FiniteRing::galois(2, 2, None).unwrap(),
        ];
        for r in &rings {
            for side in [Side::Right, Side::TwoSided] {
                for i in IdealSet::all(r, side) {
                    assert!(i.is_closed(r));
                    let again = IdealSet::generate(r, i.members(), side);
                    assert_eq!(again, i);
                }
            }
        }
    }
}
