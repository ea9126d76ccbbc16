//! The dot product `a·b = λ_a(a⁻) + a∘b + λ_b(b⁻)`, the right and left series
//! `B^(k+1) = B^(k)·B + E`, `B^{k+1} = B·B^k + E`, nil orders, and the socle.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::brace::{decompose, skew_part, SemiBrace};
use crate::error::{Error, Result};
use crate::exec::Exec;

/// `a·b`, which always lies in `G`.
pub fn dot(b: &SemiBrace, x: usize, y: usize) -> usize {
    let r = b.add(b.add(b.lambda(x, b.inv(x)), b.circ(x, y)), b.lambda(y, b.inv(y)));
    assert_eq!(b.add(r, 0), r, "{x}·{y} = {r} lies outside G");
    r
}

/// `{g + e : g ∈ ⟨X·Y⟩, e ∈ E}` where `⟨X·Y⟩` is the additive subgroup of `G`
/// generated by all `x·y`.
pub fn set_dot_plus_e(b: &SemiBrace, xs: &[usize], ys: &[usize]) -> Vec<usize> {
    let dots: BTreeSet<usize> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).map(|(x, y)| dot(b, x, y)).collect();
    let gens: Vec<usize> = dots.into_iter().filter(|&d| d != 0).collect();
    let mut inside = vec![false; b.n()];
    inside[0] = true;
    let mut frontier = vec![0];
    while let Some(x) = frontier.pop() {
        for &g in &gens {
            let y = b.add(x, g);
            if !inside[y] {
                inside[y] = true;
                frontier.push(y);
            }
        }
    }
    let es: Vec<usize> = (0..b.n()).filter(|&e| b.is_idempotent(e)).collect();
    let mut out = vec![false; b.n()];
    for x in (0..b.n()).filter(|&x| inside[x]) {
        es.iter().for_each(|&e| out[b.add(x, e)] = true);
    }
    (0..b.n()).filter(|&x| out[x]).collect()
}

/// `{m·g + e : g ∈ G, e ∈ E}` with `m·g` the `m`-fold additive sum in `G`.
pub fn scaled_g_plus_e(b: &SemiBrace, m: usize) -> Vec<usize> {
    let a = b.anatomy();
    let mut out = vec![false; b.n()];
    for &g in a.g() {
        let mg = (0..m).fold(0, |acc, _| b.add(acc, g));
        a.e().iter().for_each(|&e| out[b.add(mg, e)] = true);
    }
    (0..b.n()).filter(|&x| out[x]).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Right,
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The chain member with this 1-based index equals `E`.
    NilpotentAt(usize),
    Cycles,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NilpotentAt(k) => write!(f, "nilpotent at {k}"),
            Verdict::Cycles => f.write_str("cycles without reaching E"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `chain[0] = B`; the chain stops before the first repeated member.
/// `nil_orders[b]` is the least `k` with `b^(k) = 0` (right) or the left
/// analogue, or `None` if never.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    pub chain: Vec<Vec<usize>>,
    pub verdict: Verdict,
    pub nil_orders: Vec<Option<usize>>,
}

impl SeriesReport {
    pub fn is_nilpotent(&self) -> bool {
        matches!(self.verdict, Verdict::NilpotentAt(_))
    }

    pub fn is_nil(&self) -> bool {
        self.nil_orders.iter().all(Option::is_some)
    }
}

fn series(b: &SemiBrace, kind: SeriesKind) -> SeriesReport {
    let all: Vec<usize> = (0..b.n()).collect();
    let e: Vec<usize> = (0..b.n()).filter(|&x| b.is_idempotent(x)).collect();
    let mut chain = vec![all.clone()];
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([all.clone()]);
    loop {
        let last = chain.last().unwrap();
        let next = match kind {
            SeriesKind::Right => set_dot_plus_e(b, last, &all),
            SeriesKind::Left => set_dot_plus_e(b, &all, last),
        };
        if !seen.insert(next.clone()) {
            break;
        }
        chain.push(next);
    }
    let verdict = chain.iter().position(|c| *c == e).map_or(Verdict::Cycles, |i| Verdict::NilpotentAt(i + 1));
    SeriesReport { kind, chain, verdict, nil_orders: nil_orders(b, kind, Exec::default()) }
}

pub fn right_series(b: &SemiBrace) -> SeriesReport {
    series(b, SeriesKind::Right)
}

pub fn left_series(b: &SemiBrace) -> SeriesReport {
    series(b, SeriesKind::Left)
}

/// Least `k ≥ 1` with `x_k = 0` where `x_1 = b` and `x_{k+1} = x_k·b` (right)
/// or `b·x_k` (left); `None` once the orbit cycles or `|B| + 1` steps pass.
pub fn nil_orders(b: &SemiBrace, kind: SeriesKind, exec: Exec) -> Vec<Option<usize>> {
    let n = b.n();
    exec.map_range(n, |x| {
        let mut seen = vec![false; n];
        let mut cur = x;
        for k in 1..=n + 1 {
            if cur == 0 {
                return Some(k);
            }
            if seen[cur] {
                return None;
            }
            seen[cur] = true;
            cur = match kind {
                SeriesKind::Right => dot(b, cur, x),
                SeriesKind::Left => dot(b, x, cur),
            };
        }
        None
    })
}

pub fn is_right_nil(b: &SemiBrace) -> (bool, Vec<Option<usize>>) {
    let orders = nil_orders(b, SeriesKind::Right, Exec::default());
    (orders.iter().all(Option::is_some), orders)
}

pub fn is_left_nil(b: &SemiBrace) -> (bool, Vec<Option<usize>>) {
    let orders = nil_orders(b, SeriesKind::Left, Exec::default());
    (orders.iter().all(Option::is_some), orders)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Socle {
    pub elements: Vec<usize>,
    /// `|G / Soc(G)|`.
    pub index: usize,
}

/// `{a : λ_a = id and a + x = x + a for all x}` of a skew brace.
pub fn socle(g: &SemiBrace) -> Result<Socle> {
    if !g.is_skew_brace() {
        return Err(Error::NotApplicable("the socle needs a skew brace".into()));
    }
    let n = g.n();
    let elements: Vec<usize> = (0..n)
        .filter(|&a| (0..n).all(|x| g.lambda(a, x) == x && g.add(a, x) == g.add(x, a)))
        .collect();
    Ok(Socle { index: n / elements.len(), elements })
}

/// The two sides of: `B` is right nilpotent iff every `α_e` is trivial and
/// `G` is right nilpotent, for `B = G ⋊_α E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rnilp1Report {
    pub right_nilpotent: bool,
    pub alpha_trivial: bool,
    pub g_right_nilpotent: bool,
    pub agree: bool,
}

pub fn check_rnilp1(b: &SemiBrace) -> Result<Rnilp1Report> {
    let d = decompose(b)?.ok_or_else(|| Error::NotApplicable("Ker(λ|E) differs from G".into()))?;
    let right_nilpotent = right_series(b).is_nilpotent();
    let alpha_trivial = d.alpha_is_trivial();
    let g_right_nilpotent = right_series(&skew_part(b)?.brace).is_nilpotent();
    Ok(Rnilp1Report {
        right_nilpotent,
        alpha_trivial,
        g_right_nilpotent,
        agree: right_nilpotent == (alpha_trivial && g_right_nilpotent),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic, symmetric};
    use crate::construct::{brace_p2, family, left_nilpotent_example, rump_brace, trivial_semibrace, trivial_skewbrace, BraceP2, FamilyId, Theorem};

    fn fam(t: Theorem, item: usize, p: usize, q: Option<usize>) -> SemiBrace {
        family(&FamilyId::new(t, item, p, q)).unwrap()
    }

    #[test]
    fn dots_vanish_on_trivial_structures() {
        for b in [trivial_skewbrace(&symmetric(3)), trivial_semibrace(&symmetric(3)), trivial_skewbrace(&cyclic(4))] {
            for x in 0..b.n() {
                for y in 0..b.n() {
                    assert_eq!(dot(&b, x, y), 0);
                }
            }
        }
    }

    #[test]
    fn dot_in_semidirect_matches_formula() {
        // (g₁, e₁)·(g₂, e₂) = (−g₁ + g₁ ∘ α_{e₁}(g₂) − g₂, 0) on Z/3 ⋊ Z/2, index 2g + e
        let b = fam(Theorem::PqCongruent, 3, 3, Some(2));
        for x in 0..6 {
            for y in 0..6 {
                let (g1, e1, g2) = (x / 2, x % 2, y / 2);
                let act = if e1 == 1 { (3 - g2) % 3 } else { g2 };
                let g = (3 - g1 + g1 + act + 3 - g2) % 3;
                assert_eq!(dot(&b, x, y), 2 * g);
            }
        }
    }

    #[test]
    fn set_dot_examples() {
        let b = fam(Theorem::PqCongruent, 3, 3, Some(2));
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(set_dot_plus_e(&b, &[0], &[0]), vec![0, 1]);
        assert_eq!(set_dot_plus_e(&b, &all, &all), all);
        let t = trivial_semibrace(&cyclic(5));
        let all: Vec<usize> = (0..5).collect();
        assert_eq!(set_dot_plus_e(&t, &all, &all), all);
    }

    #[test]
    fn trivial_semibrace_series() {
        let t = trivial_semibrace(&cyclic(3));
        let r = right_series(&t);
        assert_eq!(r.chain, vec![vec![0, 1, 2]]);
        assert_eq!(r.verdict, Verdict::NilpotentAt(1));
        assert!(r.is_nil());
    }

    #[test]
    fn family_3_is_right_nil_but_not_right_nilpotent() {
        let b = fam(Theorem::PqCongruent, 3, 3, Some(2));
        let r = right_series(&b);
        assert_eq!(r.verdict, Verdict::Cycles);
        assert_eq!(r.chain, vec![(0..6).collect::<Vec<_>>()]);
        assert!(is_right_nil(&b).0);
        let l = left_series(&b);
        assert_eq!(l.chain.len(), 1);
        assert!(!l.is_nilpotent());
    }

    #[test]
    fn trivial_g_semidirect_nil_in_three_steps() {
        let b = fam(Theorem::TwoP2E2Noncyclic, 2, 3, None);
        let (nil, orders) = is_right_nil(&b);
        assert!(nil);
        assert!(orders.iter().all(|o| o.unwrap() <= 3));
    }

    #[test]
    fn socle_examples() {
        let s = socle(&trivial_skewbrace(&cyclic(6))).unwrap();
        assert_eq!((s.elements.len(), s.index), (6, 1));
        let s = socle(&rump_brace(9, 3).unwrap()).unwrap();
        assert_eq!(s.elements, vec![0, 3, 6]);
        assert_eq!(s.index, 3);
        let g4 = brace_p2(BraceP2::G4, 3).unwrap();
        let brute: Vec<usize> = (0..9)
            .filter(|&a| (0..9).all(|x| g4.circ(a, g4.add(g4.inv(a), x)) == x && g4.add(a, x) == g4.add(x, a)))
            .collect();
        assert_eq!(socle(&g4).unwrap().elements, brute);
        assert!(socle(&trivial_semibrace(&cyclic(2))).is_err());
    }

    #[test]
    fn rnilp1_examples() {
        let direct = fam(Theorem::PqCongruent, 5, 3, Some(2));
        let r = check_rnilp1(&direct).unwrap();
        assert!(r.agree && r.right_nilpotent);
        let r = check_rnilp1(&fam(Theorem::PqCongruent, 3, 3, Some(2))).unwrap();
        assert!(r.agree && !r.right_nilpotent);
        let r = check_rnilp1(&left_nilpotent_example(3).unwrap()).unwrap();
        assert!(r.agree && !r.right_nilpotent && !r.alpha_trivial);
        assert!(check_rnilp1(&fam(Theorem::PqCongruent, 4, 3, Some(2))).is_err());
    }

    #[test]
    fn left_nilpotent_example_bound() {
        let b = left_nilpotent_example(3).unwrap();
        let l = left_series(&b);
        assert!(l.is_nilpotent());
        for (k, member) in l.chain.iter().enumerate() {
            let bound = scaled_g_plus_e(&b, 3usize.pow(k as u32));
            assert!(member.iter().all(|x| bound.contains(x)), "step {}", k + 1);
        }
    }

    #[test]
    fn series_json() {
        let b = fam(Theorem::PqCongruent, 3, 3, Some(2));
        let v = serde_json::to_value(right_series(&b)).unwrap();
        assert_eq!(v["kind"], "right");
        assert_eq!(v["verdict"], "cycles without reaching E");
        assert_eq!(v["nil_orders"].as_array().unwrap().len(), 6);
    }
}
