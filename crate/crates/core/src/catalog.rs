//! Concrete groups and a small-order catalog.
//!
//! Product groups index the pair `(x, y)` as `x * |second| + y`, so the
//! identity of every constructed group is index 0.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{are_isomorphic, automorphism_group, homomorphisms_with, FiniteGroup};
use crate::exec::Exec;
use crate::perm::Permutation;

pub fn cyclic(n: usize) -> FiniteGroup {
    FiniteGroup::from_fn(n, |a, b| (a + b) % n).expect("cyclic group")
}

pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let m = b.n();
    FiniteGroup::from_fn(a.n() * m, |x, y| a.mul(x / m, y / m) * m + b.mul(x % m, y % m))
        .expect("direct product of groups")
}

/// `N ⋊ H` with `(n₁, h₁)(n₂, h₂) = (n₁ · action[h₁](n₂), h₁h₂)`.
///
/// `action[h]` must be an automorphism of `N` and `h ↦ action[h]` a homomorphism.
pub fn semidirect_product(normal: &FiniteGroup, acting: &FiniteGroup, action: &[Permutation]) -> Result<FiniteGroup> {
    let m = acting.n();
    if action.len() != m || action.iter().any(|p| p.len() != normal.n()) {
        return Err(Error::Parameter("action must give one permutation of N per element of H".into()));
    }
    let g = FiniteGroup::from_fn(normal.n() * m, |x, y| {
        let (n1, h1) = (x / m, x % m);
        let (n2, h2) = (y / m, y % m);
        normal.mul(n1, action[h1].apply(n2)) * m + acting.mul(h1, h2)
    })?;
    Ok(g)
}

/// The symmetric group on `k` points; elements in lexicographic order of image arrays.
pub fn symmetric(k: usize) -> FiniteGroup {
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for m in 0..k {
        perms = perms
            .into_iter()
            .flat_map(|p| {
                (0..=m).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, m);
                    q
                })
            })
            .collect();
    }
    perms.sort();
    let index: HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    FiniteGroup::from_fn(perms.len(), |a, b| {
        let c: Vec<usize> = perms[b].iter().map(|&x| perms[a][x]).collect();
        index[&c]
    })
    .expect("symmetric group")
}

/// Dicyclic group of order `4m`: `⟨a, x | a^{2m}, x² = a^m, x a x⁻¹ = a⁻¹⟩`.
/// Element `a^k x^j` has index `2k + j`.
pub fn dicyclic(m: usize) -> FiniteGroup {
    let r = 2 * m;
    FiniteGroup::from_fn(4 * m, |u, v| {
        let (k, j) = (u / 2, u % 2);
        let (l, i) = (v / 2, v % 2);
        let (e, s) = match (j, i) {
            (0, _) => ((k + l) % r, i),
            (_, 0) => ((k + r - l) % r, 1),
            _ => ((k + r - l + m) % r, 0),
        };
        2 * e + s
    })
    .expect("dicyclic group")
}

/// Number of isomorphism classes of groups of each supported order.
pub fn group_count(n: usize) -> Option<usize> {
    Some(match n {
        1 | 2 | 3 | 5 | 7 | 11 | 13 | 15 | 17 | 19 => 1,
        4 | 6 | 9 | 10 | 14 | 25 => 2,
        8 | 12 | 18 | 20 | 27 | 50 => 5,
        16 => 14,
        _ => return None,
    })
}

pub const SUPPORTED_ORDERS: &[usize] =
    &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 25, 27, 50];

/// Every group of order `n` up to isomorphism, built from cyclic groups,
/// semidirect products (direct products included) and dicyclic groups,
/// deduplicated by isomorphism. The cyclic group always comes first.
pub fn small_groups(n: usize) -> Result<Vec<FiniteGroup>> {
    let mut memo = HashMap::new();
    build(n, &mut memo)
}

fn build(n: usize, memo: &mut HashMap<usize, Vec<FiniteGroup>>) -> Result<Vec<FiniteGroup>> {
    if let Some(v) = memo.get(&n) {
        return Ok(v.clone());
    }
    let expected = group_count(n).ok_or_else(|| Error::Unsupported(format!("no group catalog for order {n}")))?;
    let mut candidates = vec![cyclic(n)];
    for a in (2..n).filter(|a| n.is_multiple_of(*a)) {
        let b = n / a;
        for normal in build(a, memo)? {
            let (aut, auts) = automorphism_group(&normal);
            for acting in build(b, memo)? {
                for hom in homomorphisms_with(&acting, &aut, Exec::Sequential) {
                    let action: Vec<Permutation> = hom.images.iter().map(|&i| auts[i].clone()).collect();
                    candidates.push(semidirect_product(&normal, &acting, &action)?);
                }
            }
        }
    }
    if n.is_multiple_of(4) && n >= 8 {
        candidates.push(dicyclic(n / 4));
    }

    let mut reps: Vec<(crate::group::GroupSignature, FiniteGroup)> = Vec::new();
    for g in candidates {
        let sig = g.signature();
        if !reps.iter().any(|(s, h)| *s == sig && are_isomorphic(&g, h)) {
            reps.push((sig, g));
        }
    }
    if reps.len() != expected {
        return Err(Error::Invariant(format!(
            "catalog for order {n} produced {} classes, expected {expected}",
            reps.len()
        )));
    }
    let groups: Vec<FiniteGroup> = reps.into_iter().map(|(_, g)| g).collect();
    memo.insert(n, groups.clone());
    Ok(groups)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_six() {
        let gs = small_groups(6).unwrap();
        assert_eq!(gs.len(), 2);
        assert!(gs[0].is_cyclic());
        assert!(are_isomorphic(&gs[1], &symmetric(3)));
    }

    #[test]
    fn order_eighteen_and_one() {
        assert_eq!(small_groups(18).unwrap().len(), 5);
        assert_eq!(small_groups(1).unwrap().len(), 1);
    }

    #[test]
    fn quaternion_is_not_dihedral() {
        let q8 = dicyclic(2);
        assert_eq!(q8.n(), 8);
        assert_eq!((0..8).filter(|&x| q8.order_of(x) == 2).count(), 1);
    }

    #[test]
    fn unsupported_order() {
        assert!(matches!(small_groups(24), Err(Error::Unsupported(_))));
    }
}
