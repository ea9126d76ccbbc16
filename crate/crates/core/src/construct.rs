//! Explicit semi-braces: trivial structures, semidirect products, Rump cyclic
//! braces, the four skew braces of order `p²`, and the classification families.
//!
//! Every constructor builds raw tables and passes them through
//! [`SemiBrace::verify`]; nothing is trusted by construction.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::brace::{idempotents, skew_part, SemiBrace};
use crate::catalog::cyclic;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Permutation;
use crate::table::{check_group, CayleyTable};

/// `a + b := b` on `g`.
pub fn trivial_semibrace(g: &FiniteGroup) -> SemiBrace {
    let (g, _) = g.normalized();
    let add = CayleyTable::from_fn(g.n(), |_, b| b).expect("right-zero table");
    SemiBrace::verify(add, g.table().clone()).expect("trivial semi-brace")
}

/// `a + b := a ∘ b` on `g`.
pub fn trivial_skewbrace(g: &FiniteGroup) -> SemiBrace {
    let (g, _) = g.normalized();
    SemiBrace::verify(g.table().clone(), g.table().clone()).expect("trivial skew brace")
}

/// `B₁ ⋊_α B₂` with `(b₁, c₁) + (b₂, c₂) = (b₁ + b₂, c₁ + c₂)` and
/// `(b₁, c₁) ∘ (b₂, c₂) = (b₁ ∘ α_{c₁}(b₂), c₁ ∘ c₂)`; the pair is index `b·|B₂| + c`.
///
/// `alpha[c]` must preserve both operations of `B₁`, and `c ↦ alpha[c]` must be
/// a homomorphism out of `(B₂, ∘)`.
pub fn semidirect(b1: &SemiBrace, b2: &SemiBrace, alpha: &[Permutation]) -> Result<SemiBrace> {
    let (n1, n2) = (b1.n(), b2.n());
    if alpha.len() != n2 || alpha.iter().any(|a| a.len() != n1) {
        return Err(Error::Parameter(format!("α needs {n2} permutations of {n1} points")));
    }
    for (c, a) in alpha.iter().enumerate() {
        for x in 0..n1 {
            for y in 0..n1 {
                if a.apply(b1.add(x, y)) != b1.add(a.apply(x), a.apply(y)) {
                    return Err(Error::Parameter(format!("α_{c} does not preserve + at ({x}, {y})")));
                }
                if a.apply(b1.circ(x, y)) != b1.circ(a.apply(x), a.apply(y)) {
                    return Err(Error::Parameter(format!("α_{c} does not preserve ∘ at ({x}, {y})")));
                }
            }
        }
    }
    for c in 0..n2 {
        for d in 0..n2 {
            if alpha[b2.circ(c, d)] != alpha[c].compose(&alpha[d]) {
                return Err(Error::Parameter(format!("α is not a homomorphism at ({c}, {d})")));
            }
        }
    }
    let n = n1 * n2;
    let add = CayleyTable::from_fn(n, |x, y| b1.add(x / n2, y / n2) * n2 + b2.add(x % n2, y % n2))?;
    let circ = CayleyTable::from_fn(n, |x, y| {
        let (u, c) = (x / n2, x % n2);
        let (v, d) = (y / n2, y % n2);
        b1.circ(u, alpha[c].apply(v)) * n2 + b2.circ(c, d)
    })?;
    Ok(SemiBrace::verify(add, circ)?)
}

/// Direct product, i.e. [`semidirect`] with the trivial action.
pub fn direct(b1: &SemiBrace, b2: &SemiBrace) -> SemiBrace {
    let alpha = vec![Permutation::identity(b1.n()); b2.n()];
    semidirect(b1, b2, &alpha).expect("trivial action")
}

/// The brace on `Z/m` with `a ∘ b = a + b + d·a·b`. Fails with
/// [`Error::NotAGroup`] when this `∘` is not a group.
pub fn rump_brace(m: usize, d: usize) -> Result<SemiBrace> {
    if m == 0 {
        return Err(Error::Parameter("m must be positive".into()));
    }
    let d = d % m;
    let add = CayleyTable::from_fn(m, |a, b| (a + b) % m)?;
    let circ = CayleyTable::from_fn(m, |a, b| (a + b + d * a % m * b) % m)?;
    if let Some(f) = check_group(&circ).failure {
        return Err(Error::NotAGroup(f));
    }
    Ok(SemiBrace::verify(add, circ)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BraceP2 {
    /// Trivial skew brace on `Z/p²`.
    G1,
    /// `Z/p²` with `a ∘ b = a + b + p·a·b`.
    G2,
    /// Trivial skew brace on `Z/p × Z/p`.
    G3,
    /// `Z/p × Z/p` with `(g₁, h₁) ∘ (g₂, h₂) = (g₁ + g₂ + h₁h₂, h₁ + h₂)`.
    G4,
}

pub fn brace_p2(which: BraceP2, p: usize) -> Result<SemiBrace> {
    if !is_prime(p) {
        return Err(Error::Parameter(format!("{p} is not prime")));
    }
    if matches!(which, BraceP2::G2 | BraceP2::G4) && p == 2 {
        return Err(Error::Parameter(format!("{which:?} needs an odd prime")));
    }
    match which {
        BraceP2::G1 => Ok(trivial_skewbrace(&cyclic(p * p))),
        BraceP2::G2 => rump_brace(p * p, p),
        BraceP2::G3 => Ok(trivial_skewbrace(&crate::catalog::direct_product(&cyclic(p), &cyclic(p)))),
        BraceP2::G4 => from_coords(
            &[p, p],
            |x, y| vec![x[0] + y[0], x[1] + y[1]],
            |x, y| vec![x[0] + y[0] + x[1] * y[1], x[1] + y[1]],
        ),
    }
}

/// The automorphism `A_b(g, h) = (g + b·h, −h)` of `G3` and `G4` in the
/// `(g, h) ↦ g·p + h` encoding.
pub fn matrix_a(b: usize, p: usize) -> Permutation {
    Permutation::new((0..p * p).map(|x| ((x / p + b * (x % p)) % p) * p + (p - x % p) % p).collect())
        .expect("A_b is invertible")
}

/// `G` coordinate `(g, h) ↦ (g, −h)` and `(g, h) ↦ (−g, −h)` on `G3`.
pub fn diag_involutions(p: usize) -> [Permutation; 2] {
    let neg = |x: usize| (p - x % p) % p;
    [
        Permutation::new((0..p * p).map(|x| (x / p) * p + neg(x % p)).collect()).expect("diag(1, -1)"),
        Permutation::new((0..p * p).map(|x| neg(x / p) * p + neg(x % p)).collect()).expect("-I"),
    ]
}

/// Mixed-radix build: element `x` has coordinates with the first most
/// significant; coordinate results are reduced modulo `dims`.
fn from_coords(
    dims: &[usize],
    add: impl Fn(&[usize], &[usize]) -> Vec<usize>,
    circ: impl Fn(&[usize], &[usize]) -> Vec<usize>,
) -> Result<SemiBrace> {
    let n: usize = dims.iter().product();
    let decode = |mut x: usize| {
        let mut c = vec![0; dims.len()];
        for i in (0..dims.len()).rev() {
            c[i] = x % dims[i];
            x /= dims[i];
        }
        c
    };
    let encode = |c: Vec<usize>| c.iter().zip(dims).fold(0, |acc, (&v, &d)| acc * d + v % d);
    let coords: Vec<Vec<usize>> = (0..n).map(decode).collect();
    let add = CayleyTable::from_fn(n, |x, y| encode(add(&coords[x], &coords[y])))?;
    let circ = CayleyTable::from_fn(n, |x, y| encode(circ(&coords[x], &coords[y])))?;
    Ok(SemiBrace::verify(add, circ)?)
}

pub(crate) fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Smallest `u` of multiplicative order `q` modulo `p`.
fn unit_of_order(p: usize, q: usize) -> Option<usize> {
    (2..p).find(|&u| {
        let mut x = 1;
        for k in 1..=q {
            x = x * u % p;
            if x == 1 {
                return k == q;
            }
        }
        false
    })
}

fn pow_mod(u: usize, e: usize, m: usize) -> usize {
    (0..e).fold(1 % m, |acc, _| acc * u % m)
}

/// `x` multiplied by `(−1)^s` modulo `m`.
fn signed(x: usize, s: usize, m: usize) -> usize {
    if s.is_multiple_of(2) {
        x % m
    } else {
        (m - x % m) % m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    /// Order `pq` with `p ≢ 1 (mod q)`, `q ≤ p` and `|E| > 1`.
    #[serde(rename = "pq-noncongruent")]
    PqNoncongruent,
    /// Order `pq` with `p ≡ 1 (mod q)` and `|E| > 1`.
    #[serde(rename = "pq-congruent")]
    PqCongruent,
    /// Order `2p²`, `|E| = 2`, cyclic Sylow `p`-subgroup.
    #[serde(rename = "2p2-E2-cyclic")]
    TwoP2E2Cyclic,
    /// Order `2p²`, `|E| = 2`, elementary abelian Sylow `p`-subgroup.
    #[serde(rename = "2p2-E2-noncyclic")]
    TwoP2E2Noncyclic,
    /// Order `2p²`, `|E| = p²`.
    #[serde(rename = "2p2-Ep2")]
    TwoP2Ep2,
}

impl Theorem {
    pub const ALL: [Theorem; 5] =
        [Theorem::PqNoncongruent, Theorem::PqCongruent, Theorem::TwoP2E2Cyclic, Theorem::TwoP2E2Noncyclic, Theorem::TwoP2Ep2];

    pub const TWO_P2: [Theorem; 3] = [Theorem::TwoP2E2Cyclic, Theorem::TwoP2E2Noncyclic, Theorem::TwoP2Ep2];

    pub fn tag(self) -> &'static str {
        match self {
            Theorem::PqNoncongruent => "pq-noncongruent",
            Theorem::PqCongruent => "pq-congruent",
            Theorem::TwoP2E2Cyclic => "2p2-E2-cyclic",
            Theorem::TwoP2E2Noncyclic => "2p2-E2-noncyclic",
            Theorem::TwoP2Ep2 => "2p2-Ep2",
        }
    }

    pub fn items(self) -> usize {
        match self {
            Theorem::PqNoncongruent | Theorem::PqCongruent => 6,
            Theorem::TwoP2E2Cyclic => 3,
            Theorem::TwoP2E2Noncyclic | Theorem::TwoP2Ep2 => 5,
        }
    }

    pub fn is_pq(self) -> bool {
        matches!(self, Theorem::PqNoncongruent | Theorem::PqCongruent)
    }

    /// Order of the semi-braces classified, after checking the parameters.
    pub fn order(self, p: usize, q: Option<usize>) -> Result<usize> {
        check_parameters(self, p, q)?;
        Ok(if self.is_pq() { p * q.unwrap() } else { 2 * p * p })
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.tag() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown theorem tag {s:?}")))
    }
}

fn check_parameters(theorem: Theorem, p: usize, q: Option<usize>) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Parameter(format!("p = {p} is not prime")));
    }
    if theorem.is_pq() {
        let q = q.ok_or_else(|| Error::Parameter(format!("{theorem} needs q")))?;
        if !is_prime(q) {
            return Err(Error::Parameter(format!("q = {q} is not prime")));
        }
        if q > p {
            return Err(Error::Parameter(format!("q ≤ p violated: q = {q}, p = {p}")));
        }
        let congruent = p % q == 1;
        if theorem == Theorem::PqCongruent && !congruent {
            return Err(Error::Parameter(format!("p ≡ 1 (mod q) violated: {p} mod {q} = {}", p % q)));
        }
        if theorem == Theorem::PqNoncongruent && congruent {
            return Err(Error::Parameter(format!("p ≢ 1 (mod q) violated: {p} ≡ 1 (mod {q})")));
        }
    } else {
        if p == 2 {
            return Err(Error::Parameter("p > 2 violated: p = 2".into()));
        }
        if q.is_some() {
            return Err(Error::Parameter(format!("{theorem} takes no q")));
        }
    }
    Ok(())
}

/// One item of one classification list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyId {
    pub theorem: Theorem,
    pub item: usize,
    pub p: usize,
    pub q: Option<usize>,
}

impl FamilyId {
    pub fn new(theorem: Theorem, item: usize, p: usize, q: Option<usize>) -> Self {
        FamilyId { theorem, item, p, q }
    }

    pub fn validate(&self) -> Result<()> {
        check_parameters(self.theorem, self.p, self.q)?;
        if self.item == 0 || self.item > self.theorem.items() {
            return Err(Error::Parameter(format!(
                "{} has items 1..={}, got {}",
                self.theorem,
                self.theorem.items(),
                self.item
            )));
        }
        if self.theorem == Theorem::PqNoncongruent {
            let equal = Some(self.p) == self.q;
            match (self.item, equal) {
                (1 | 2 | 6, false) => {
                    return Err(Error::Parameter(format!("item {} needs p = q", self.item)));
                }
                (3..=5, true) => {
                    return Err(Error::Parameter(format!("item {} needs p ≠ q", self.item)));
                }
                _ => {}
            }
        }
        Ok(())
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.q {
            Some(q) => write!(f, "{} item {} (p={}, q={q})", self.theorem, self.item, self.p),
            None => write!(f, "{} item {} (p={})", self.theorem, self.item, self.p),
        }
    }
}

/// Every applicable item of `theorem` at the given parameters.
pub fn family_ids(theorem: Theorem, p: usize, q: Option<usize>) -> Result<Vec<FamilyId>> {
    check_parameters(theorem, p, q)?;
    Ok((1..=theorem.items())
        .map(|item| FamilyId::new(theorem, item, p, q))
        .filter(|id| id.validate().is_ok())
        .collect())
}

/// A family member with the `E` and `G` its item states.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub id: FamilyId,
    pub brace: SemiBrace,
    pub expected_e: Vec<usize>,
    pub expected_g: Vec<usize>,
}

impl FamilyInstance {
    /// Whether the computed `E` and `G` equal the stated ones.
    pub fn matches_statement(&self) -> Result<bool> {
        Ok(idempotents(&self.brace)?.elements == self.expected_e && skew_part(&self.brace)?.elements == self.expected_g)
    }
}

pub fn family(id: &FamilyId) -> Result<SemiBrace> {
    Ok(family_instance(id)?.brace)
}

/// Coordinates, which of them carry `E`, and the two operations.
type CoordFn = Box<dyn Fn(&[usize], &[usize]) -> Vec<usize>>;

struct Recipe {
    dims: Vec<usize>,
    e_coords: Vec<bool>,
    add: CoordFn,
    circ: CoordFn,
}

fn recipe(id: &FamilyId) -> Recipe {
    let p = id.p;
    let q = id.q.unwrap_or(0);
    let trivial_add: CoordFn = Box::new(|_, y| y.to_vec());
    // G coordinates add, E coordinates take the right operand
    let mixed_add = |e_coords: Vec<bool>| -> CoordFn {
        Box::new(move |x, y| (0..x.len()).map(|i| if e_coords[i] { y[i] } else { x[i] + y[i] }).collect())
    };
    let componentwise: CoordFn = Box::new(|x, y| x.iter().zip(y).map(|(a, b)| a + b).collect());
    let r = |dims: Vec<usize>, e_coords: Vec<bool>, add: CoordFn, circ: CoordFn| Recipe { dims, e_coords, add, circ };
    match (id.theorem, id.item) {
        (Theorem::PqNoncongruent, 1) => r(vec![p * p], vec![true], trivial_add, componentwise),
        (Theorem::PqNoncongruent, 2) => r(vec![p, p], vec![true, true], trivial_add, componentwise),
        (Theorem::PqNoncongruent, 3) => r(vec![p, q], vec![true, true], trivial_add, componentwise),
        (Theorem::PqNoncongruent, 4) => r(vec![p, q], vec![false, true], mixed_add(vec![false, true]), componentwise),
        (Theorem::PqNoncongruent, 5) => r(vec![q, p], vec![false, true], mixed_add(vec![false, true]), componentwise),
        (Theorem::PqNoncongruent, _) => r(vec![p, p], vec![false, true], mixed_add(vec![false, true]), componentwise),

        (Theorem::PqCongruent, item) => {
            let u = unit_of_order(p, q).expect("p ≡ 1 (mod q)");
            let act = move |e: usize, x: usize| x * pow_mod(u, e, p) % p;
            match item {
                1 => r(vec![p, q], vec![true, true], trivial_add, Box::new(move |x, y| vec![x[0] + act(x[1], y[0]), x[1] + y[1]])),
                2 => r(vec![p, q], vec![true, true], trivial_add, componentwise),
                3 => r(
                    vec![p, q],
                    vec![false, true],
                    mixed_add(vec![false, true]),
                    Box::new(move |x, y| vec![x[0] + act(x[1], y[0]), x[1] + y[1]]),
                ),
                // coordinates (e, g): E = Z/p acted on by G = Z/q
                4 => r(
                    vec![p, q],
                    vec![true, false],
                    mixed_add(vec![true, false]),
                    Box::new(move |x, y| vec![x[0] + act(x[1], y[0]), x[1] + y[1]]),
                ),
                5 => r(vec![p, q], vec![false, true], mixed_add(vec![false, true]), componentwise),
                _ => r(vec![q, p], vec![false, true], mixed_add(vec![false, true]), componentwise),
            }
        }

        (Theorem::TwoP2E2Cyclic, item) => {
            let m = p * p;
            let circ: CoordFn = match item {
                1 => Box::new(move |x, y| vec![x[0] + signed(y[0], x[1], m), x[1] + y[1]]),
                2 => componentwise,
                _ => Box::new(move |x, y| vec![x[0] + y[0] + p * x[0] % m * y[0], x[1] + y[1]]),
            };
            r(vec![m, 2], vec![false, true], mixed_add(vec![false, true]), circ)
        }

        (Theorem::TwoP2E2Noncyclic, item) => {
            let circ: CoordFn = match item {
                1 => componentwise,
                2 => Box::new(move |x, y| vec![x[0] + signed(y[0], x[2], p), x[1] + signed(y[1], x[2], p), x[2] + y[2]]),
                3 => Box::new(move |x, y| vec![x[0] + y[0], x[1] + signed(y[1], x[2], p), x[2] + y[2]]),
                4 => Box::new(|x, y| vec![x[0] + y[0] + x[1] * y[1], x[1] + y[1], x[2] + y[2]]),
                _ => Box::new(move |x, y| {
                    vec![x[0] + y[0] + signed(x[1] * y[1], x[2], p), x[1] + signed(y[1], x[2], p), x[2] + y[2]]
                }),
            };
            r(vec![p, p, 2], vec![false, false, true], mixed_add(vec![false, false, true]), circ)
        }

        (Theorem::TwoP2Ep2, item) => {
            let m = p * p;
            match item {
                1 => r(vec![p, p, 2], vec![true, true, false], mixed_add(vec![true, true, false]), componentwise),
                2 => r(vec![m, 2], vec![true, false], mixed_add(vec![true, false]), componentwise),
                3 => r(
                    vec![p, p, 2],
                    vec![true, true, false],
                    mixed_add(vec![true, true, false]),
                    Box::new(move |x, y| vec![x[0] + signed(y[0], x[2], p), x[1] + signed(y[1], x[2], p), x[2] + y[2]]),
                ),
                4 => r(
                    vec![p, p, 2],
                    vec![true, true, false],
                    mixed_add(vec![true, true, false]),
                    Box::new(move |x, y| vec![x[0] + signed(y[0], x[2], p), x[1] + y[1], x[2] + y[2]]),
                ),
                _ => r(
                    vec![m, 2],
                    vec![true, false],
                    mixed_add(vec![true, false]),
                    Box::new(move |x, y| vec![x[0] + signed(y[0], x[1], m), x[1] + y[1]]),
                ),
            }
        }
    }
}

pub fn family_instance(id: &FamilyId) -> Result<FamilyInstance> {
    id.validate()?;
    let rec = recipe(id);
    let brace = from_coords(&rec.dims, rec.add, rec.circ)?;
    let n = brace.n();
    let mut expected_e = Vec::new();
    let mut expected_g = Vec::new();
    for x in 0..n {
        let mut rest = x;
        let (mut e_zero, mut g_zero) = (true, true);
        for i in (0..rec.dims.len()).rev() {
            let c = rest % rec.dims[i];
            rest /= rec.dims[i];
            if c != 0 {
                if rec.e_coords[i] {
                    e_zero = false;
                } else {
                    g_zero = false;
                }
            }
        }
        if g_zero {
            expected_e.push(x);
        }
        if e_zero {
            expected_g.push(x);
        }
    }
    Ok(FamilyInstance { id: *id, brace, expected_e, expected_g })
}

/// `rump_brace(p², p) ⋊ Z/p` with the trivial semi-brace on `Z/p` acting by
/// `α_e(g) = (1 + p·e)·g`. `E` is neither central nor normal.
pub fn left_nilpotent_example(p: usize) -> Result<SemiBrace> {
    if !is_prime(p) || p == 2 {
        return Err(Error::Parameter(format!("p = {p} must be an odd prime")));
    }
    let m = p * p;
    let g = rump_brace(m, p)?;
    let e = trivial_semibrace(&cyclic(p));
    let alpha: Vec<Permutation> = (0..p)
        .map(|k| Permutation::new((0..m).map(|x| (1 + p * k) * x % m).collect()))
        .collect::<Result<_>>()?;
    let b = semidirect(&g, &e, &alpha)?;
    let a = b.anatomy();
    let circ = b.circ_group();
    if circ.is_normal(a.e()) {
        return Err(Error::Invariant("E is normal".into()));
    }
    let center = circ.center();
    if a.e().iter().all(|x| center.contains(x)) {
        return Err(Error::Invariant("E is central".into()));
    }
    Ok(b)
}
