//! Finite groups as Cayley tables, with exhaustive homomorphism, automorphism
//! and subgroup search.
//!
//! Homomorphisms are found by backtracking over images of a generating set
//! chosen greedily by element order. A partial assignment is extended along
//! the Cayley graph of the generators seen so far; any conflict prunes the
//! branch. Every returned map is re-checked against the full table.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::perm::Permutation;
use crate::table::{check_group, CayleyTable};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    table: CayleyTable,
    identity: usize,
    inverse: Vec<usize>,
    orders: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(table: CayleyTable) -> Result<Self> {
        let report = check_group(&table);
        match report.failure {
            Some(f) => Err(Error::NotAGroup(f)),
            None => Ok(Self::assemble(table, report.identity.unwrap(), report.inverses.unwrap())),
        }
    }

    pub fn from_fn(n: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self> {
        FiniteGroup::from_table(CayleyTable::from_fn(n, op)?)
    }

    fn assemble(table: CayleyTable, identity: usize, inverse: Vec<usize>) -> Self {
        let n = table.n();
        let orders = (0..n)
            .map(|x| {
                let (mut y, mut k) = (x, 1);
                while y != identity {
                    y = table.get(y, x);
                    k += 1;
                }
                k
            })
            .collect();
        FiniteGroup { table, identity, inverse, orders }
    }

    /// Swap labels so the identity sits at index 0. Returns the relabeling used.
    pub fn normalized(&self) -> (FiniteGroup, Permutation) {
        let n = self.n();
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(0, self.identity);
        let perm = Permutation::from_vec_unchecked(images);
        (self.relabel(&perm), perm)
    }

    pub fn relabel(&self, perm: &Permutation) -> FiniteGroup {
        let table = self.table.relabel(perm);
        let mut inverse = vec![0; self.n()];
        for x in 0..self.n() {
            inverse[perm.apply(x)] = perm.apply(self.inverse[x]);
        }
        let mut orders = vec![0; self.n()];
        for x in 0..self.n() {
            orders[perm.apply(x)] = self.orders[x];
        }
        FiniteGroup { table, identity: perm.apply(self.identity), inverse, orders }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.table.n()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table.get(a, b)
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &CayleyTable {
        &self.table
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverse
    }

    pub fn order_of(&self, a: usize) -> usize {
        self.orders[a]
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n()).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.orders.iter().any(|&o| o == self.n())
    }

    pub fn exponent(&self) -> usize {
        self.orders.iter().fold(1, |acc, &o| crate::perm::lcm(acc, o))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n()).filter(|&z| (0..self.n()).all(|x| self.mul(z, x) == self.mul(x, z))).collect()
    }

    /// Closure of `gens` under multiplication, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.n()).filter(|&x| seen[x]).collect()
    }

    /// Greedy generating set: repeatedly take the smallest element of maximal
    /// order outside the subgroup generated so far.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.n()];
        inside[self.identity] = true;
        while let Some(next) = (0..self.n())
            .filter(|&x| !inside[x])
            .max_by(|&a, &b| self.orders[a].cmp(&self.orders[b]).then(b.cmp(&a)))
        {
            gens.push(next);
            for x in self.generated(&gens) {
                inside[x] = true;
            }
        }
        gens
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.n()];
        set.iter().for_each(|&x| member[x] = true);
        member[self.identity]
            && set.iter().all(|&a| member[self.inv(a)] && set.iter().all(|&b| member[self.mul(a, b)]))
    }

    pub fn is_normal(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.n()];
        set.iter().for_each(|&x| member[x] = true);
        self.is_subgroup(set) && (0..self.n()).all(|g| set.iter().all(|&h| member[self.conj(g, h)]))
    }

    /// Sorted multiset of `(element order, centralizer size)`; an isomorphism invariant.
    pub fn signature(&self) -> GroupSignature {
        let n = self.n();
        let mut profile: Vec<(usize, usize)> = (0..n)
            .map(|x| {
                let cent = (0..n).filter(|&y| self.mul(x, y) == self.mul(y, x)).count();
                (self.orders[x], cent)
            })
            .collect();
        profile.sort_unstable();
        GroupSignature { order: n, profile }
    }

    /// Subgroup on `elements` (must contain the identity), relabeled to `0..k`
    /// in the order given.
    pub fn induced(&self, elements: &[usize]) -> Result<FiniteGroup> {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &x) in elements.iter().enumerate() {
            local[x] = i;
        }
        let k = elements.len();
        let mut data = Vec::with_capacity(k * k);
        for &a in elements {
            for &b in elements {
                let c = local[self.mul(a, b)];
                if c == usize::MAX {
                    return Err(Error::Invariant(format!("{elements:?} is not closed under the group law")));
                }
                data.push(c);
            }
        }
        FiniteGroup::from_table(CayleyTable::new(k, data)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupSignature {
    pub order: usize,
    pub profile: Vec<(usize, usize)>,
}

/// A homomorphism between two groups, given by the image of every source element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupHom {
    pub images: Vec<usize>,
}

impl GroupHom {
    pub fn is_hom(&self, src: &FiniteGroup, tgt: &FiniteGroup) -> bool {
        self.images.len() == src.n()
            && self.images.iter().all(|&y| y < tgt.n())
            && (0..src.n()).all(|x| {
                (0..src.n()).all(|y| self.images[src.mul(x, y)] == tgt.mul(self.images[x], self.images[y]))
            })
    }

    pub fn is_trivial(&self, tgt: &FiniteGroup) -> bool {
        self.images.iter().all(|&y| y == tgt.identity())
    }

    pub fn is_injective(&self) -> bool {
        let set: BTreeSet<_> = self.images.iter().collect();
        set.len() == self.images.len()
    }

    pub fn kernel(&self, tgt: &FiniteGroup) -> Vec<usize> {
        (0..self.images.len()).filter(|&x| self.images[x] == tgt.identity()).collect()
    }
}

/// Extend images of `gens` to the subgroup they generate by walking the
/// Cayley graph. Returns `None` on an inconsistency.
pub(crate) fn extend_along_generators<T, M>(
    src: &FiniteGroup,
    gens: &[usize],
    images: &[T],
    identity: T,
    mul: M,
) -> Option<Vec<Option<T>>>
where
    T: Clone + PartialEq,
    M: Fn(&T, &T) -> T,
{
    let mut map: Vec<Option<T>> = vec![None; src.n()];
    map[src.identity()] = Some(identity);
    let mut queue = VecDeque::from([src.identity()]);
    while let Some(x) = queue.pop_front() {
        let fx = map[x].clone().unwrap();
        for (&g, img) in gens.iter().zip(images) {
            let y = src.mul(x, g);
            let v = mul(&fx, img);
            match &map[y] {
                None => {
                    map[y] = Some(v);
                    queue.push_back(y);
                }
                Some(w) if *w != v => return None,
                Some(_) => {}
            }
        }
    }
    Some(map)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SearchKind {
    All,
    Bijective,
}

fn search_homs(src: &FiniteGroup, tgt: &FiniteGroup, kind: SearchKind, first_only: bool, exec: Exec) -> Vec<GroupHom> {
    if kind == SearchKind::Bijective && (src.n() != tgt.n() || src.signature() != tgt.signature()) {
        return Vec::new();
    }
    let gens = src.generators();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let o = src.order_of(g);
            (0..tgt.n())
                .filter(|&y| match kind {
                    SearchKind::All => o.is_multiple_of(tgt.order_of(y)),
                    SearchKind::Bijective => tgt.order_of(y) == o,
                })
                .collect()
        })
        .collect();
    let mul = |a: &usize, b: &usize| tgt.mul(*a, *b);

    let finish = |chosen: &[usize]| -> Option<GroupHom> {
        let map = extend_along_generators(src, &gens, chosen, tgt.identity(), mul)?;
        let hom = GroupHom { images: map.into_iter().map(Option::unwrap).collect() };
        if kind == SearchKind::Bijective && !hom.is_injective() {
            return None;
        }
        debug_assert!(hom.is_hom(src, tgt));
        Some(hom)
    };

    if gens.is_empty() {
        return vec![GroupHom { images: vec![tgt.identity(); src.n()] }];
    }

    fn rec<F: Fn(&[usize]) -> Option<GroupHom>>(
        src: &FiniteGroup,
        tgt: &FiniteGroup,
        gens: &[usize],
        candidates: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        finish: &F,
        first_only: bool,
        out: &mut Vec<GroupHom>,
    ) {
        if first_only && !out.is_empty() {
            return;
        }
        let depth = chosen.len();
        if depth == gens.len() {
            if let Some(h) = finish(chosen) {
                out.push(h);
            }
            return;
        }
        for &y in &candidates[depth] {
            chosen.push(y);
            let ok = depth + 1 == gens.len()
                || extend_along_generators(src, &gens[..=depth], chosen, tgt.identity(), |a, b| tgt.mul(*a, *b))
                    .is_some();
            if ok {
                rec(src, tgt, gens, candidates, chosen, finish, first_only, out);
            }
            chosen.pop();
        }
    }

    let branch = |&y0: &usize| -> Vec<GroupHom> {
        let mut out = Vec::new();
        let mut chosen = vec![y0];
        if gens.len() == 1
            || extend_along_generators(src, &gens[..1], &chosen, tgt.identity(), mul).is_some()
        {
            rec(src, tgt, &gens, &candidates, &mut chosen, &finish, first_only, &mut out);
        }
        out
    };

    let mut out = if first_only {
        let first = &candidates[0];
        exec.find_first(first.len(), |i| branch(&first[i]).into_iter().next()).into_iter().collect()
    } else {
        exec.flat_map(&candidates[0], branch)
    };
    for h in &out {
        assert!(h.is_hom(src, tgt), "homomorphism search produced a non-homomorphism");
    }
    out.sort();
    out
}

/// All homomorphisms `src → tgt`, lexicographically ordered by image array.
pub fn homomorphisms(src: &FiniteGroup, tgt: &FiniteGroup) -> Vec<GroupHom> {
    homomorphisms_with(src, tgt, Exec::default())
}

pub fn homomorphisms_with(src: &FiniteGroup, tgt: &FiniteGroup, exec: Exec) -> Vec<GroupHom> {
    search_homs(src, tgt, SearchKind::All, false, exec)
}

/// All automorphisms of `g` as permutations, lexicographically ordered.
pub fn automorphisms(g: &FiniteGroup) -> Vec<Permutation> {
    automorphisms_with(g, Exec::default())
}

pub fn automorphisms_with(g: &FiniteGroup, exec: Exec) -> Vec<Permutation> {
    search_homs(g, g, SearchKind::Bijective, false, exec)
        .into_iter()
        .map(|h| Permutation::from_vec_unchecked(h.images))
        .collect()
}

/// Some isomorphism `a → b`, if one exists.
pub fn isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<Permutation> {
    search_homs(a, b, SearchKind::Bijective, true, Exec::Sequential)
        .into_iter()
        .next()
        .map(|h| Permutation::from_vec_unchecked(h.images))
}

pub fn are_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    isomorphism(a, b).is_some()
}

/// The automorphism group as a [`FiniteGroup`] whose element `i` is `auts[i]`;
/// multiplication is composition.
pub fn automorphism_group(g: &FiniteGroup) -> (FiniteGroup, Vec<Permutation>) {
    let auts = automorphisms(g);
    group_of_permutations(auts).expect("automorphisms form a group")
}

/// Build the group table of a list of permutations closed under composition.
/// The identity is moved to index 0 if it is not already there; the returned
/// list is reordered to match.
pub fn group_of_permutations(mut perms: Vec<Permutation>) -> Result<(FiniteGroup, Vec<Permutation>)> {
    let Some(id) = perms.iter().position(Permutation::is_identity) else {
        return Err(Error::Invariant("permutation set lacks the identity".into()));
    };
    perms.swap(0, id);
    let index: std::collections::HashMap<&Permutation, usize> =
        perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let k = perms.len();
    let mut data = Vec::with_capacity(k * k);
    for a in &perms {
        for b in &perms {
            let c = a.compose(b);
            match index.get(&c) {
                Some(&i) => data.push(i),
                None => return Err(Error::Invariant("permutation set not closed under composition".into())),
            }
        }
    }
    let group = FiniteGroup::from_table(CayleyTable::new(k, data)?)?;
    Ok((group, perms))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subgroup {
    pub elements: Vec<usize>,
    pub normal: bool,
}

/// Every subgroup, ordered by size and then lexicographically.
pub fn subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let n = g.n();
    let mut found: BTreeSet<Vec<usize>> = (0..n).map(|x| g.generated(&[x])).collect();
    let mut frontier: Vec<Vec<usize>> = found.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for h in &frontier {
            let mut member = vec![false; n];
            h.iter().for_each(|&x| member[x] = true);
            for x in (0..n).filter(|&x| !member[x]) {
                let mut gens = h.clone();
                gens.push(x);
                let k = g.generated(&gens);
                if found.insert(k.clone()) {
                    next.push(k);
                }
            }
        }
        frontier = next;
    }
    let mut subs: Vec<Subgroup> =
        found.into_iter().map(|elements| Subgroup { normal: g.is_normal(&elements), elements }).collect();
    subs.sort_by(|a, b| a.elements.len().cmp(&b.elements.len()).then_with(|| a.elements.cmp(&b.elements)));
    subs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic, direct_product, symmetric};

    #[test]
    fn trivial_group_has_identity_automorphism_only() {
        let g = cyclic(1);
        assert_eq!(automorphisms(&g), vec![Permutation::identity(1)]);
        assert_eq!(subgroups(&g).len(), 1);
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&cyclic(4)).len(), 2);
        assert_eq!(automorphisms(&direct_product(&cyclic(3), &cyclic(3))).len(), 48);
        assert_eq!(automorphisms(&symmetric(3)).len(), 6);
    }

    #[test]
    fn automorphisms_sorted_and_closed() {
        let g = direct_product(&cyclic(2), &cyclic(4));
        let auts = automorphisms(&g);
        assert!(auts.windows(2).all(|w| w[0] < w[1]));
        let set: BTreeSet<_> = auts.iter().cloned().collect();
        for a in &auts {
            assert!(set.contains(&a.inverse()));
            for b in &auts {
                assert!(set.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn homomorphism_counts() {
        assert_eq!(homomorphisms(&cyclic(2), &symmetric(3)).len(), 4);
        assert_eq!(homomorphisms(&cyclic(3), &cyclic(2)).len(), 1);
        assert_eq!(homomorphisms(&cyclic(2), &cyclic(2)).len(), 2);
    }

    #[test]
    fn subgroup_lattices() {
        let z4 = subgroups(&cyclic(4));
        assert_eq!(z4.iter().map(|s| s.elements.len()).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert!(z4.iter().all(|s| s.normal));

        let s3 = subgroups(&symmetric(3));
        assert_eq!(s3.len(), 6);
        let order2: Vec<_> = s3.iter().filter(|s| s.elements.len() == 2).collect();
        assert_eq!(order2.len(), 3);
        assert!(order2.iter().all(|s| !s.normal));
    }

    #[test]
    fn generators_generate() {
        for g in [symmetric(3), direct_product(&cyclic(2), &cyclic(6)), cyclic(9)] {
            assert_eq!(g.generated(&g.generators()).len(), g.n());
        }
        assert_eq!(cyclic(9).generators(), vec![1]);
    }

    #[test]
    fn normalization_moves_identity() {
        // Z/3 with identity labeled 2
        let g = FiniteGroup::from_fn(3, |a, b| (a + b + 1) % 3).unwrap();
        assert_eq!(g.identity(), 2);
        let (h, _) = g.normalized();
        assert_eq!(h.identity(), 0);
        assert!(are_isomorphic(&h, &cyclic(3)));
    }
}
