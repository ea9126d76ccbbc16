//! Enumeration of semi-braces of a given order up to isomorphism.
//!
//! The generic enumerator runs over every group `(B, ∘)` of order `n` and every
//! homomorphism `λ : (B, ∘) → Sym(B)`, recovering `a + b = a ∘ λ_{a⁻}(b)`.
//! The pruned search builds `λ` one orbit at a time as a labeled coset action.
//! The orbit of 0 is forced: it is `E`, its stabilizer is `G`, and
//! `λ_e(0) = e` for `e ∈ E`. Partial tables are checked for associativity
//! and left distributivity after every orbit. The unpruned oracle assigns
//! generator images in `Sym(n)` directly.
//!
//! The structural enumerator applies to orders `pq` with `|E| > 1` and `2p²`
//! with `E` a Sylow subgroup. In those shapes every semi-brace is trivial,
//! `G ⋊ E`, or `E ⋊ G`, so it enumerates those products.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::brace::SemiBrace;
use crate::catalog::small_groups;
use crate::construct::{brace_p2, is_prime, semidirect, trivial_semibrace, trivial_skewbrace, BraceP2};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::group::{automorphism_group, automorphisms, extend_along_generators, group_of_permutations, homomorphisms_with, subgroups, FiniteGroup};
use crate::iso::{brace_automorphisms, isomorphic, Fingerprint};
use crate::perm::{permutations_with_order_dividing, Permutation};
use crate::table::CayleyTable;

/// Largest order accepted by the generic enumerator unless overridden.
pub const GENERIC_BOUND: usize = 10;

/// Largest order accepted by the unpruned oracle.
pub const UNPRUNED_BOUND: usize = 7;

/// Constraint on `|E|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EFilter {
    Any,
    AtLeast(usize),
    Exactly(usize),
    /// `E` is a Sylow subgroup: `|E| > 1` is a prime power coprime to `n/|E|`.
    Sylow,
}

impl EFilter {
    pub fn allows(self, n: usize, e: usize) -> bool {
        match self {
            EFilter::Any => true,
            EFilter::AtLeast(k) => e >= k,
            EFilter::Exactly(k) => e == k,
            EFilter::Sylow => e > 1 && is_prime_power(e) && gcd(e, n / e) == 1,
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn is_prime_power(k: usize) -> bool {
    (2..=k).find(|d| k.is_multiple_of(*d)).is_some_and(|p| {
        let mut m = k;
        while m.is_multiple_of(p) {
            m /= p;
        }
        m == 1
    })
}

impl fmt::Display for EFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EFilter::Any => f.write_str("any"),
            EFilter::AtLeast(k) => write!(f, "emin-{k}"),
            EFilter::Exactly(k) => write!(f, "e-{k}"),
            EFilter::Sylow => f.write_str("esylow"),
        }
    }
}

impl FromStr for EFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| t.parse::<usize>().map_err(|_| Error::Parameter(format!("bad E filter {s:?}")));
        match s {
            "any" => Ok(EFilter::Any),
            "esylow" => Ok(EFilter::Sylow),
            _ if s.starts_with("emin-") => Ok(EFilter::AtLeast(num(&s[5..])?)),
            _ if s.starts_with("e-") => Ok(EFilter::Exactly(num(&s[2..])?)),
            _ => Err(Error::Parameter(format!("bad E filter {s:?}"))),
        }
    }
}

impl Serialize for EFilter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EFilter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Enumerator {
    Generic,
    GenericUnpruned,
    Structural,
}

impl fmt::Display for Enumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Enumerator::Generic => "generic",
            Enumerator::GenericUnpruned => "generic-unpruned",
            Enumerator::Structural => "structural",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub semibrace: SemiBrace,
    pub fingerprint: Fingerprint,
    pub provenance: String,
}

/// Pairwise non-isomorphic representatives, sorted by fingerprint and then by
/// their tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub n: usize,
    pub filter: EFilter,
    pub enumerator: Enumerator,
    pub entries: Vec<CensusEntry>,
}

impl Census {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn braces(&self) -> impl Iterator<Item = &SemiBrace> {
        self.entries.iter().map(|e| &e.semibrace)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.entries).expect("census serializes")
    }
}

/// Sort key preferring the lexicographically least `(circ, add)` tables.
fn table_key(b: &SemiBrace) -> (Vec<usize>, Vec<usize>) {
    (b.circ_group().table().as_slice().to_vec(), b.add_table().as_slice().to_vec())
}

/// Merge candidates into isomorphism classes, keeping the least tables of each
/// class. Order of `candidates` does not affect the result.
pub fn dedup_by_isomorphism(candidates: Vec<(SemiBrace, String)>, exec: Exec) -> Vec<CensusEntry> {
    let prints = exec.map(&candidates, |(b, _)| Fingerprint::of(b));
    let mut buckets: BTreeMap<Fingerprint, Vec<(SemiBrace, String)>> = BTreeMap::new();
    for ((b, prov), fp) in candidates.into_iter().zip(prints) {
        buckets.entry(fp).or_default().push((b, prov));
    }
    let buckets: Vec<(Fingerprint, Vec<(SemiBrace, String)>)> = buckets.into_iter().collect();
    let merged = exec.map(&buckets, |(fp, members)| {
        let mut members = members.clone();
        members.sort_by_key(|(b, _)| table_key(b));
        let mut reps: Vec<(SemiBrace, String)> = Vec::new();
        for (b, prov) in members {
            if !reps.iter().any(|(r, _)| isomorphic(&b, r).is_some()) {
                reps.push((b, prov));
            }
        }
        reps.into_iter()
            .map(|(semibrace, provenance)| CensusEntry { semibrace, fingerprint: fp.clone(), provenance })
            .collect::<Vec<_>>()
    });
    merged.into_iter().flatten().collect()
}

fn check_bound(n: usize, bound: usize) -> Result<()> {
    if n == 0 || n > bound {
        return Err(Error::Parameter(format!("order {n} outside the enumeration bound 1..={bound}")));
    }
    Ok(())
}

/// Every semi-brace of order `n ≤ GENERIC_BOUND` whose `|E|` passes `filter`.
pub fn enumerate_generic(n: usize, filter: EFilter) -> Result<Census> {
    enumerate_generic_with(n, filter, GENERIC_BOUND, Exec::default())
}

pub fn enumerate_generic_with(n: usize, filter: EFilter, bound: usize, exec: Exec) -> Result<Census> {
    check_bound(n, bound)?;
    let groups: Vec<FiniteGroup> = small_groups(n)?.into_iter().map(|g| g.normalized().0).collect();
    let mut tasks = Vec::new();
    for (gi, c) in groups.iter().enumerate() {
        let subs = subgroups(c);
        for g in &subs {
            for e in &subs {
                if g.elements.len() * e.elements.len() == n
                    && filter.allows(n, e.elements.len())
                    && intersects_trivially(&g.elements, &e.elements)
                {
                    tasks.push((gi, g.elements.clone(), e.elements.clone()));
                }
            }
        }
    }
    let searches: Vec<CosetSearch> = groups.iter().map(CosetSearch::new).collect();
    let found = exec.flat_map(&tasks, |(gi, g, e)| {
        searches[*gi].run(g, e).into_iter().map(|add| (*gi, add)).collect()
    });
    census_from_tables(n, filter, Enumerator::Generic, &groups, found, exec)
}

/// The same census by direct generator-image search in `Sym(n)`.
pub fn enumerate_generic_unpruned(n: usize, filter: EFilter, exec: Exec) -> Result<Census> {
    check_bound(n, UNPRUNED_BOUND)?;
    let groups: Vec<FiniteGroup> = small_groups(n)?.into_iter().map(|g| g.normalized().0).collect();
    let mut found = Vec::new();
    for (gi, c) in groups.iter().enumerate() {
        let gens = c.generators();
        let cands: Vec<Vec<Permutation>> =
            gens.iter().map(|&g| permutations_with_order_dividing(n, c.order_of(g))).collect();
        let tables = if gens.is_empty() {
            vec![vec![0]]
        } else {
            exec.flat_map(&cands[0], |first| {
                let mut out = Vec::new();
                let mut chosen = vec![first.clone()];
                product_search(c, &gens, &cands, &mut chosen, filter, &mut out);
                out
            })
        };
        found.extend(tables.into_iter().map(|t| (gi, t)));
    }
    census_from_tables(n, filter, Enumerator::GenericUnpruned, &groups, found, exec)
}

fn product_search(
    c: &FiniteGroup,
    gens: &[usize],
    cands: &[Vec<Permutation>],
    chosen: &mut Vec<Permutation>,
    filter: EFilter,
    out: &mut Vec<Vec<usize>>,
) {
    let n = c.n();
    if chosen.len() < gens.len() {
        for p in &cands[chosen.len()] {
            chosen.push(p.clone());
            product_search(c, gens, cands, chosen, filter, out);
            chosen.pop();
        }
        return;
    }
    let Some(map) = extend_along_generators(c, gens, chosen, Permutation::identity(n), |a, b| a.compose(b)) else {
        return;
    };
    let lam: Vec<Permutation> = map.into_iter().map(Option::unwrap).collect();
    let add: Vec<usize> = (0..n * n).map(|i| c.mul(i / n, lam[c.inv(i / n)].apply(i % n))).collect();
    let Ok(t) = CayleyTable::new(n, add.clone()) else { return };
    if let Ok(b) = SemiBrace::verify(t, c.table().clone()) {
        if filter.allows(n, b.anatomy().e().len()) {
            out.push(add);
        }
    }
}

fn intersects_trivially(a: &[usize], b: &[usize]) -> bool {
    a.iter().filter(|x| b.binary_search(x).is_ok()).count() == 1
}

/// Canonicalize each addition table under `Aut(B, ∘)` (which fixes the
/// `∘`-table), deduplicate, and package as a census. Distinct catalog groups
/// are non-isomorphic, so classes never merge across groups.
fn census_from_tables(
    n: usize,
    filter: EFilter,
    enumerator: Enumerator,
    groups: &[FiniteGroup],
    found: Vec<(usize, Vec<usize>)>,
    exec: Exec,
) -> Result<Census> {
    let auts: Vec<Vec<Permutation>> = groups.iter().map(automorphisms).collect();
    let canon = exec.map(&found, |(gi, add)| (*gi, canonical_add(add, &auts[*gi], n)));
    let unique: BTreeSet<(usize, Vec<usize>)> = canon.into_iter().collect();
    let unique: Vec<(usize, Vec<usize>)> = unique.into_iter().collect();
    let mut entries = exec.map(&unique, |(gi, add)| -> Result<CensusEntry> {
        let b = SemiBrace::verify(CayleyTable::new(n, add.clone())?, groups[*gi].table().clone())?;
        Ok(CensusEntry { fingerprint: Fingerprint::of(&b), semibrace: b, provenance: enumerator.to_string() })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| (&a.fingerprint, table_key(&a.semibrace)).cmp(&(&b.fingerprint, table_key(&b.semibrace))));
    Ok(Census { n, filter, enumerator, entries })
}

fn canonical_add(add: &[usize], auts: &[Permutation], n: usize) -> Vec<usize> {
    auts.iter()
        .map(|f| {
            let mut t = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[f.apply(a) * n + f.apply(b)] = f.apply(add[a * n + b]);
                }
            }
            t
        })
        .min()
        .unwrap_or_else(|| add.to_vec())
}

/// Transitive actions of a fixed group, one per subgroup `H`, as the action on
/// left cosets `aH` with coset 0 equal to `H`.
struct CosetAction {
    index: usize,
    /// `act[a * index + c]`: the coset `a ∘ c`.
    act: Vec<usize>,
    cosets: Vec<Vec<usize>>,
}

struct CosetSearch<'a> {
    c: &'a FiniteGroup,
    actions: Vec<CosetAction>,
}

const UNSET: usize = usize::MAX;

impl<'a> CosetSearch<'a> {
    fn new(c: &'a FiniteGroup) -> Self {
        let actions = subgroups(c).into_iter().map(|h| coset_action(c, &h.elements)).collect();
        CosetSearch { c, actions }
    }

    /// All valid addition tables with stabilizer `G` of 0 and `λ`-orbit `E` of 0.
    fn run(&self, g: &[usize], e: &[usize]) -> Vec<Vec<usize>> {
        let n = self.c.n();
        let first = coset_action(self.c, g);
        let mut lam = vec![UNSET; n * n];
        let label: Vec<usize> = first
            .cosets
            .iter()
            .map(|coset| *e.iter().find(|x| coset.binary_search(x).is_ok()).expect("E is a transversal"))
            .collect();
        self.assign(&mut lam, &first, &label);
        let mut out = Vec::new();
        if self.consistent(&lam) {
            self.extend(&mut lam, &mut out);
        }
        out
    }

    fn assign(&self, lam: &mut [usize], action: &CosetAction, label: &[usize]) {
        let n = self.c.n();
        for a in 0..n {
            for (ci, &x) in label.iter().enumerate() {
                lam[a * n + x] = label[action.act[a * action.index + ci]];
            }
        }
    }

    fn unassign(&self, lam: &mut [usize], label: &[usize]) {
        let n = self.c.n();
        for a in 0..n {
            label.iter().for_each(|&x| lam[a * n + x] = UNSET);
        }
    }

    fn extend(&self, lam: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = self.c.n();
        let free: Vec<usize> = (0..n).filter(|&x| lam[x] == UNSET).collect();
        let Some(&x) = free.first() else {
            out.push((0..n * n).map(|i| self.add(lam, i / n, i % n)).collect());
            return;
        };
        for action in self.actions.iter().filter(|a| a.index <= free.len()) {
            let mut label = vec![x];
            self.label_cosets(lam, action, &free[1..], &mut label, out);
        }
    }

    fn label_cosets(
        &self,
        lam: &mut Vec<usize>,
        action: &CosetAction,
        pool: &[usize],
        label: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if label.len() == action.index {
            self.assign(lam, action, label);
            if self.consistent(lam) {
                self.extend(lam, out);
            }
            self.unassign(lam, label);
            return;
        }
        for &y in pool {
            if !label.contains(&y) {
                label.push(y);
                self.label_cosets(lam, action, pool, label, out);
                label.pop();
            }
        }
    }

    /// `a + b = a ∘ λ_{a⁻}(b)`, defined once `b` is assigned.
    #[inline]
    fn add(&self, lam: &[usize], a: usize, b: usize) -> usize {
        self.c.mul(a, lam[self.c.inv(a) * self.c.n() + b])
    }

    /// Associativity and left distributivity on every instance whose entries
    /// are already determined.
    fn consistent(&self, lam: &[usize]) -> bool {
        let n = self.c.n();
        let known = |x: usize| lam[x] != UNSET;
        for c in (0..n).filter(|&c| known(c)) {
            for b in 0..n {
                let bc = self.add(lam, b, c);
                for a in 0..n {
                    // a ∘ (b + c) = a ∘ b + λ_a(c)
                    if self.c.mul(a, bc) != self.add(lam, self.c.mul(a, b), lam[a * n + c]) {
                        return false;
                    }
                }
                if known(b) && known(bc) {
                    for a in 0..n {
                        if self.add(lam, self.add(lam, a, b), c) != self.add(lam, a, bc) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

fn coset_action(c: &FiniteGroup, h: &[usize]) -> CosetAction {
    let n = c.n();
    let mut coset_of = vec![UNSET; n];
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if coset_of[a] == UNSET {
            let mut coset: Vec<usize> = h.iter().map(|&x| c.mul(a, x)).collect();
            coset.sort_unstable();
            coset.iter().for_each(|&y| coset_of[y] = cosets.len());
            cosets.push(coset);
        }
    }
    let index = cosets.len();
    let act = (0..n * index).map(|i| coset_of[c.mul(i / index, cosets[i % index][0])]).collect();
    CosetAction { index, act, cosets }
}

/// Skew braces of order `m`, up to isomorphism.
pub fn skew_braces(m: usize, exec: Exec) -> Result<Vec<SemiBrace>> {
    if m <= GENERIC_BOUND {
        return Ok(enumerate_generic_with(m, EFilter::Exactly(1), GENERIC_BOUND, exec)?
            .entries
            .into_iter()
            .map(|e| e.semibrace)
            .collect());
    }
    if is_prime(m) {
        return Ok(vec![trivial_skewbrace(&crate::catalog::cyclic(m))]);
    }
    if let Some(p) = (3..m).find(|&p| p * p == m && is_prime(p)) {
        return [BraceP2::G1, BraceP2::G2, BraceP2::G3, BraceP2::G4].into_iter().map(|w| brace_p2(w, p)).collect();
    }
    Err(Error::Unsupported(format!("no skew brace catalog for order {m}")))
}

fn structural_shape(n: usize, filter: EFilter) -> Result<()> {
    let p = (2..=n).find(|d| n.is_multiple_of(*d)).unwrap_or(1);
    let pq = n > 1 && is_prime(n / p);
    let two_p2 = n.is_multiple_of(2) && {
        let m = n / 2;
        (3..m).any(|p| p * p == m && is_prime(p))
    };
    match filter {
        EFilter::AtLeast(k) if k >= 2 && pq => Ok(()),
        EFilter::Sylow if two_p2 => Ok(()),
        _ => Err(Error::Unsupported(format!(
            "structural enumeration covers order pq with |E| > 1 and order 2p² with E Sylow, not n = {n} with {filter}"
        ))),
    }
}

/// Every semi-brace of order `pq` (`|E| > 1`) or `2p²` (`E` Sylow) as a
/// trivial semi-brace, `G ⋊ E`, or `E ⋊ G`.
pub fn enumerate_structural(n: usize, filter: EFilter) -> Result<Census> {
    enumerate_structural_with(n, filter, Exec::default())
}

pub fn enumerate_structural_with(n: usize, filter: EFilter, exec: Exec) -> Result<Census> {
    structural_shape(n, filter)?;
    let mut candidates: Vec<(SemiBrace, String)> = Vec::new();
    for k in (2..=n).filter(|k| n.is_multiple_of(*k) && filter.allows(n, *k)) {
        let egroups = small_groups(k)?;
        if k == n {
            candidates.extend(egroups.iter().map(|g| (trivial_semibrace(g), "structural/trivial".to_string())));
            continue;
        }
        let skews = skew_braces(n / k, exec)?;
        let pairs: Vec<(&SemiBrace, &FiniteGroup)> =
            skews.iter().flat_map(|g| egroups.iter().map(move |e| (g, e))).collect();
        let built = exec.map(&pairs, |(g, e)| semidirect_both_ways(g, e));
        for b in built {
            candidates.extend(b?);
        }
    }
    candidates.retain(|(b, _)| filter.allows(n, b.anatomy().e().len()));
    let mut entries = dedup_by_isomorphism(candidates, exec);
    entries.sort_by(|a, b| (&a.fingerprint, table_key(&a.semibrace)).cmp(&(&b.fingerprint, table_key(&b.semibrace))));
    Ok(Census { n, filter, enumerator: Enumerator::Structural, entries })
}

fn semidirect_both_ways(g: &SemiBrace, e: &FiniteGroup) -> Result<Vec<(SemiBrace, String)>> {
    let t = trivial_semibrace(e);
    let mut out = Vec::new();
    let (aut_g, perms_g) = group_of_permutations(brace_automorphisms(g))?;
    for h in homomorphisms_with(t.circ_group(), &aut_g, Exec::Sequential) {
        let alpha: Vec<Permutation> = h.images.iter().map(|&i| perms_g[i].clone()).collect();
        out.push((semidirect(g, &t, &alpha)?, "structural/skew-by-trivial".to_string()));
    }
    let (aut_e, perms_e) = automorphism_group(t.circ_group());
    for h in homomorphisms_with(g.circ_group(), &aut_e, Exec::Sequential) {
        let alpha: Vec<Permutation> = h.images.iter().map(|&i| perms_e[i].clone()).collect();
        out.push((semidirect(&t, g, &alpha)?, "structural/trivial-by-skew".to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filters() {
        assert!(EFilter::Sylow.allows(18, 2));
        assert!(EFilter::Sylow.allows(18, 9));
        assert!(!EFilter::Sylow.allows(18, 3));
        assert!(!EFilter::Sylow.allows(18, 18));
        assert_eq!("emin-2".parse::<EFilter>().unwrap(), EFilter::AtLeast(2));
        assert_eq!(EFilter::Exactly(3).to_string(), "e-3");
    }

    #[test]
    fn order_one() {
        assert_eq!(enumerate_generic(1, EFilter::Any).unwrap().len(), 1);
    }

    #[test]
    fn order_two_and_three() {
        // the trivial semi-brace and the trivial brace
        assert_eq!(enumerate_generic(2, EFilter::Any).unwrap().len(), 2);
        assert_eq!(enumerate_generic(3, EFilter::Any).unwrap().len(), 2);
    }

    #[test]
    fn order_four_with_nontrivial_e() {
        assert_eq!(enumerate_generic(4, EFilter::AtLeast(2)).unwrap().len(), 3);
    }

    #[test]
    fn skew_braces_of_small_orders() {
        assert_eq!(skew_braces(5, Exec::Sequential).unwrap().len(), 1);
        assert_eq!(skew_braces(4, Exec::Sequential).unwrap().len(), 4);
        assert_eq!(skew_braces(6, Exec::Sequential).unwrap().len(), 6);
    }

    #[test]
    fn pruned_matches_unpruned_small() {
        for n in 1..=4 {
            let a = enumerate_generic(n, EFilter::Any).unwrap();
            let b = enumerate_generic_unpruned(n, EFilter::Any, Exec::default()).unwrap();
            assert_eq!(a.entries.iter().map(|e| &e.semibrace).collect::<Vec<_>>(), b.entries.iter().map(|e| &e.semibrace).collect::<Vec<_>>());
        }
    }

    #[test]
    fn bound_and_shape_errors() {
        assert!(enumerate_generic(11, EFilter::Any).is_err());
        assert!(enumerate_structural(12, EFilter::AtLeast(2)).is_err());
        assert!(enumerate_structural(18, EFilter::AtLeast(2)).is_err());
    }

    #[test]
    fn structural_order_six() {
        assert_eq!(enumerate_structural(6, EFilter::AtLeast(2)).unwrap().len(), 6);
    }
}
