//! Semi-brace isomorphism: invariant fingerprints and a backtracking search
//! over images of a generating set of `(B, ∘)`.

use serde::{Deserialize, Serialize};

use crate::brace::{kernel_lambda_on_e, SemiBrace};
use crate::exec::Exec;
use crate::group::{extend_along_generators, FiniteGroup, GroupSignature};
use crate::nilpotency::{nil_orders, SeriesKind};
use crate::perm::Permutation;

/// Isomorphism invariants; unequal fingerprints rule out an isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub n: usize,
    pub e_size: usize,
    pub circ: GroupSignature,
    pub g_circ: GroupSignature,
    pub g_add: GroupSignature,
    /// Sorted right nil orders, `None` for elements that never reach 0.
    pub nil_orders: Vec<Option<usize>>,
    pub e_ideal: bool,
    pub kernel_is_g: bool,
}

impl Fingerprint {
    pub fn of(b: &SemiBrace) -> Fingerprint {
        let a = b.anatomy();
        let g = a.g();
        let sub = |op: &dyn Fn(usize, usize) -> usize| {
            FiniteGroup::from_fn(g.len(), |x, y| g.binary_search(&op(g[x], g[y])).expect("G is closed"))
                .expect("G is a group under both operations")
                .signature()
        };
        let mut orders = nil_orders(b, SeriesKind::Right, Exec::Sequential);
        orders.sort();
        Fingerprint {
            n: b.n(),
            e_size: a.e().len(),
            circ: b.circ_group().signature(),
            g_circ: sub(&|x, y| b.circ(x, y)),
            g_add: sub(&|x, y| b.add(x, y)),
            nil_orders: orders,
            e_ideal: b.circ_group().is_normal(a.e()),
            kernel_is_g: kernel_lambda_on_e(b).map(|k| k == g).unwrap_or(false),
        }
    }
}

/// Per-element invariants preserved by every isomorphism.
fn element_profile(b: &SemiBrace) -> Vec<(usize, bool, bool, usize, Option<usize>)> {
    let a = b.anatomy();
    let nil = nil_orders(b, SeriesKind::Right, Exec::Sequential);
    (0..b.n())
        .map(|x| {
            let g = b.add(x, 0);
            let mut add_order = 1;
            let mut cur = g;
            while cur != 0 {
                cur = b.add(cur, g);
                add_order += 1;
            }
            (b.circ_group().order_of(x), a.in_e(x), a.in_g(x), add_order, nil[x])
        })
        .collect()
}

fn search(b1: &SemiBrace, b2: &SemiBrace, first_only: bool, exec: Exec) -> Vec<Permutation> {
    let n = b1.n();
    if n != b2.n() {
        return Vec::new();
    }
    let (p1, p2) = (element_profile(b1), element_profile(b2));
    let (mut s1, mut s2) = (p1.clone(), p2.clone());
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return Vec::new();
    }
    let gens = b1.circ_group().generators();
    if gens.is_empty() {
        return vec![Permutation::identity(n)];
    }
    let cands: Vec<Vec<usize>> = gens.iter().map(|&g| (0..n).filter(|&y| p2[y] == p1[g]).collect()).collect();

    let partial = |chosen: &[usize]| -> Option<Vec<Option<usize>>> {
        let k = chosen.len();
        let map = extend_along_generators(b1.circ_group(), &gens[..k], chosen, 0, |x, y| b2.circ(*x, *y))?;
        let mut hit = vec![false; n];
        for (x, fx) in map.iter().enumerate() {
            if let Some(fx) = *fx {
                if hit[fx] || p1[x] != p2[fx] {
                    return None;
                }
                hit[fx] = true;
            }
        }
        for x in 0..n {
            let Some(fx) = map[x] else { continue };
            for y in 0..n {
                let Some(fy) = map[y] else { continue };
                if let Some(fxy) = map[b1.add(x, y)] {
                    if fxy != b2.add(fx, fy) {
                        return None;
                    }
                }
            }
        }
        Some(map)
    };

    fn rec(
        depth: usize,
        chosen: &mut Vec<usize>,
        cands: &[Vec<usize>],
        partial: &dyn Fn(&[usize]) -> Option<Vec<Option<usize>>>,
        first_only: bool,
        out: &mut Vec<Permutation>,
    ) {
        if depth == cands.len() {
            if let Some(map) = partial(chosen) {
                out.push(Permutation::new(map.into_iter().map(Option::unwrap).collect()).expect("bijective"));
            }
            return;
        }
        for &y in &cands[depth] {
            if first_only && !out.is_empty() {
                return;
            }
            chosen.push(y);
            if depth + 1 == cands.len() || partial(chosen).is_some() {
                rec(depth + 1, chosen, cands, partial, first_only, out);
            }
            chosen.pop();
        }
    }

    let branch = |i: usize| -> Vec<Permutation> {
        let mut chosen = vec![cands[0][i]];
        let mut out = Vec::new();
        if cands.len() == 1 || partial(&chosen).is_some() {
            rec(1, &mut chosen, &cands, &partial, first_only, &mut out);
        }
        out
    };
    let mut out: Vec<Permutation> = if first_only {
        exec.find_first(cands[0].len(), |i| branch(i).into_iter().next()).into_iter().collect()
    } else {
        exec.map_range(cands[0].len(), branch).into_iter().flatten().collect()
    };
    for f in &out {
        assert!(preserves(b1, b2, f), "isomorphism search returned a non-isomorphism");
    }
    out.sort();
    out
}

fn preserves(b1: &SemiBrace, b2: &SemiBrace, f: &Permutation) -> bool {
    let n = b1.n();
    (0..n).all(|x| {
        (0..n).all(|y| {
            f.apply(b1.add(x, y)) == b2.add(f.apply(x), f.apply(y))
                && f.apply(b1.circ(x, y)) == b2.circ(f.apply(x), f.apply(y))
        })
    })
}

/// A bijection preserving `+` and `∘`, if one exists.
pub fn isomorphic(b1: &SemiBrace, b2: &SemiBrace) -> Option<Permutation> {
    isomorphic_with(b1, b2, Exec::Sequential)
}

pub fn isomorphic_with(b1: &SemiBrace, b2: &SemiBrace, exec: Exec) -> Option<Permutation> {
    search(b1, b2, true, exec).into_iter().next()
}

/// `Aut(B, +, ∘)`, sorted.
pub fn brace_automorphisms(b: &SemiBrace) -> Vec<Permutation> {
    search(b, b, false, Exec::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic, symmetric};
    use crate::construct::{brace_p2, family, trivial_semibrace, trivial_skewbrace, BraceP2, FamilyId, Theorem};

    #[test]
    fn self_isomorphism_is_found() {
        let b = family(&FamilyId::new(Theorem::PqCongruent, 3, 3, Some(2))).unwrap();
        let f = isomorphic(&b, &b).unwrap();
        assert!(preserves(&b, &b, &f));
    }

    #[test]
    fn relabeled_copy_is_isomorphic() {
        let b = family(&FamilyId::new(Theorem::TwoP2E2Noncyclic, 5, 3, None)).unwrap();
        let perm = Permutation::new((0..18).map(|x| if x == 0 { 0 } else { (x * 5) % 17 + 1 }).collect()).unwrap();
        let c = b.relabel(&perm).unwrap();
        let f = isomorphic(&b, &c).unwrap();
        assert!(preserves(&b, &c, &f));
        let g = isomorphic(&c, &b).unwrap();
        assert!(preserves(&c, &b, &g));
        assert_eq!(Fingerprint::of(&b), Fingerprint::of(&c));
    }

    #[test]
    fn distinct_families_are_not_isomorphic() {
        let id = |t, i, p, q| family(&FamilyId::new(t, i, p, q)).unwrap();
        assert!(isomorphic(&id(Theorem::PqCongruent, 1, 3, Some(2)), &id(Theorem::PqCongruent, 2, 3, Some(2))).is_none());
        assert!(isomorphic(&id(Theorem::TwoP2E2Cyclic, 2, 3, None), &id(Theorem::TwoP2E2Cyclic, 3, 3, None)).is_none());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(brace_automorphisms(&trivial_skewbrace(&cyclic(9))).len(), 6);
        assert_eq!(brace_automorphisms(&trivial_semibrace(&symmetric(3))).len(), 6);
        // (G2, +, ∘): multiplication by units u ≡ 1 (mod 3)
        assert_eq!(brace_automorphisms(&brace_p2(BraceP2::G2, 3).unwrap()).len(), 3);
    }
}
