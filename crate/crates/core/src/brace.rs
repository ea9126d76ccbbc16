//! The semi-brace type, axiom verification, and the canonical substructures.
//!
//! For a valid semi-brace `B` the additive idempotents `E` and the skew brace
//! part `G = B + 0` are both subgroups of `(B, ∘)`, `(B, +)` is the direct sum
//! `G + E`, and `B = G ∘ E`. The map `λ_a(b) = a ∘ (a⁻ + b)` is a homomorphism
//! from `(B, ∘)` into the additive automorphisms and permutes `E`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::construct::{semidirect, trivial_semibrace};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Permutation;
use crate::table::{check_group, check_left_cancellative_semigroup, CancellativeFailure, CayleyTable};

/// A validated finite left cancellative left semi-brace with `∘`-identity 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemiBrace {
    add: CayleyTable,
    circ: FiniteGroup,
}

/// Wire form: `{"n": int, "add": [[int]], "circ": [[int]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiBraceJson {
    pub n: usize,
    pub add: Vec<Vec<usize>>,
    pub circ: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    MalformedTable,
    SizeMismatch,
    CircNotGroup,
    AddNotAssociative,
    AddNotLeftCancellative,
    /// `a ∘ (b + c) = a ∘ b + a ∘ (a⁻ + c)`
    LeftDistributivity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::MalformedTable => "malformed table",
            Axiom::SizeMismatch => "tables have different sizes",
            Axiom::CircNotGroup => "(B, ∘) is not a group",
            Axiom::AddNotAssociative => "(B, +) is not associative",
            Axiom::AddNotLeftCancellative => "(B, +) is not left cancellative",
            Axiom::LeftDistributivity => "a∘(b+c) = a∘b + a∘(a⁻+c) fails",
        })
    }
}

/// Which axiom failed, with a witness tuple of element indices.
///
/// Indices refer to the input labels after the `∘`-identity has been swapped
/// to position 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (witness {:?})", self.axiom, self.witness)
    }
}

impl std::error::Error for Diagnostic {}

impl SemiBrace {
    /// Check every axiom and return the semi-brace, or a diagnostic naming the
    /// first failure. If the `∘`-identity is not at index 0 the labels 0 and
    /// the identity are swapped in both tables first.
    pub fn verify(add: CayleyTable, circ: CayleyTable) -> Result<SemiBrace, Diagnostic> {
        if add.n() != circ.n() {
            return Err(Diagnostic { axiom: Axiom::SizeMismatch, witness: vec![add.n(), circ.n()] });
        }
        let report = check_group(&circ);
        if let Some(f) = report.failure {
            return Err(Diagnostic { axiom: Axiom::CircNotGroup, witness: f.witness() });
        }
        let (add, circ) = match report.identity {
            Some(0) => (add, circ),
            Some(e) => {
                let mut images: Vec<usize> = (0..circ.n()).collect();
                images.swap(0, e);
                let swap = Permutation::from_vec_unchecked(images);
                (add.relabel(&swap), circ.relabel(&swap))
            }
            None => unreachable!(),
        };
        let circ = FiniteGroup::from_table(circ).expect("checked above");

        if let Some(f) = check_left_cancellative_semigroup(&add).failure {
            let axiom = match f {
                CancellativeFailure::NotAssociative { .. } => Axiom::AddNotAssociative,
                CancellativeFailure::NotLeftCancellative { .. } => Axiom::AddNotLeftCancellative,
            };
            return Err(Diagnostic { axiom, witness: f.witness() });
        }
        if let Some((a, b, c)) = distributivity_witness(&add, &circ) {
            return Err(Diagnostic { axiom: Axiom::LeftDistributivity, witness: vec![a, b, c] });
        }
        Ok(SemiBrace { add, circ })
    }

    pub fn from_fns(
        n: usize,
        add: impl Fn(usize, usize) -> usize,
        circ: impl Fn(usize, usize) -> usize,
    ) -> Result<SemiBrace> {
        let add = CayleyTable::from_fn(n, add)?;
        let circ = CayleyTable::from_fn(n, circ)?;
        Ok(SemiBrace::verify(add, circ)?)
    }

    pub fn from_json_value(j: SemiBraceJson) -> Result<SemiBrace> {
        let add = CayleyTable::from_rows(j.add)?;
        let circ = CayleyTable::from_rows(j.circ)?;
        if add.n() != j.n || circ.n() != j.n {
            return Err(Error::Axiom(Diagnostic { axiom: Axiom::SizeMismatch, witness: vec![j.n, add.n(), circ.n()] }));
        }
        Ok(SemiBrace::verify(add, circ)?)
    }

    pub fn from_json(s: &str) -> Result<SemiBrace> {
        SemiBrace::from_json_value(serde_json::from_str(s)?)
    }

    pub fn to_json_value(&self) -> SemiBraceJson {
        SemiBraceJson { n: self.n(), add: self.add.rows(), circ: self.circ.table().rows() }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.add.n()
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add.get(a, b)
    }

    #[inline]
    pub fn circ(&self, a: usize, b: usize) -> usize {
        self.circ.mul(a, b)
    }

    /// The `∘`-inverse `a⁻`.
    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.circ.inv(a)
    }

    /// `λ_a(b) = a ∘ (a⁻ + b)`.
    #[inline]
    pub fn lambda(&self, a: usize, b: usize) -> usize {
        self.circ(a, self.add(self.inv(a), b))
    }

    /// `ρ_b(a) = (a⁻ + b)⁻ ∘ b`.
    #[inline]
    pub fn rho(&self, b: usize, a: usize) -> usize {
        self.circ(self.inv(self.add(self.inv(a), b)), b)
    }

    pub fn add_table(&self) -> &CayleyTable {
        &self.add
    }

    pub fn circ_group(&self) -> &FiniteGroup {
        &self.circ
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.add(e, e) == e
    }

    /// `(B, +)` is a group, i.e. `E = {0}`.
    pub fn is_skew_brace(&self) -> bool {
        (1..self.n()).all(|x| !self.is_idempotent(x))
    }

    pub fn is_trivial_semibrace(&self) -> bool {
        (0..self.n()).all(|a| (0..self.n()).all(|b| self.add(a, b) == b))
    }

    /// Transport both operations along `perm`, which must fix 0.
    pub fn relabel(&self, perm: &Permutation) -> Result<SemiBrace> {
        if perm.len() != self.n() || perm.apply(0) != 0 {
            return Err(Error::Parameter("relabeling must be a permutation fixing 0".into()));
        }
        Ok(SemiBrace { add: self.add.relabel(perm), circ: self.circ.relabel(perm) })
    }

    /// `E`, `G`, the full `λ` table and additive inverses in `G`.
    pub fn anatomy(&self) -> Anatomy {
        Anatomy::of(self)
    }
}

fn distributivity_witness(add: &CayleyTable, circ: &FiniteGroup) -> Option<(usize, usize, usize)> {
    let n = add.n();
    for a in 0..n {
        let ainv = circ.inv(a);
        let lam: Vec<usize> = (0..n).map(|c| circ.mul(a, add.get(ainv, c))).collect();
        for b in 0..n {
            let ab = circ.mul(a, b);
            for c in 0..n {
                if circ.mul(a, add.get(b, c)) != add.get(ab, lam[c]) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

impl Serialize for SemiBrace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SemiBrace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SemiBraceJson::deserialize(d)?;
        SemiBrace::from_json_value(j).map_err(serde::de::Error::custom)
    }
}

/// Precomputed structure of a semi-brace used by most derived operations.
#[derive(Clone, Debug)]
pub struct Anatomy {
    e: Vec<usize>,
    g: Vec<usize>,
    in_e: Vec<bool>,
    in_g: Vec<bool>,
    lambda: Vec<usize>,
    neg: Vec<usize>,
    n: usize,
}

impl Anatomy {
    fn of(b: &SemiBrace) -> Anatomy {
        let n = b.n();
        let e: Vec<usize> = (0..n).filter(|&x| b.is_idempotent(x)).collect();
        let mut in_g = vec![false; n];
        (0..n).for_each(|x| in_g[b.add(x, 0)] = true);
        let g: Vec<usize> = (0..n).filter(|&x| in_g[x]).collect();
        let mut in_e = vec![false; n];
        e.iter().for_each(|&x| in_e[x] = true);
        let lambda = (0..n * n).map(|i| b.lambda(i / n, i % n)).collect();
        let mut neg = vec![usize::MAX; n];
        for &x in &g {
            if let Some(&y) = g.iter().find(|&&y| b.add(y, x) == 0) {
                neg[x] = y;
            }
        }
        Anatomy { e, g, in_e, in_g, lambda, neg, n }
    }

    /// Sorted additive idempotents.
    pub fn e(&self) -> &[usize] {
        &self.e
    }

    /// Sorted skew brace part `B + 0`.
    pub fn g(&self) -> &[usize] {
        &self.g
    }

    pub fn in_e(&self, x: usize) -> bool {
        self.in_e[x]
    }

    pub fn in_g(&self, x: usize) -> bool {
        self.in_g[x]
    }

    #[inline]
    pub fn lambda(&self, a: usize, b: usize) -> usize {
        self.lambda[a * self.n + b]
    }

    /// Additive inverse of `x ∈ G` inside `(G, +)`.
    pub fn neg(&self, x: usize) -> Option<usize> {
        (self.neg[x] != usize::MAX).then_some(self.neg[x])
    }
}

/// A substructure, relabeled to `0..k` in the order of `elements` (which is
/// sorted, so 0 stays at local index 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubBrace {
    pub elements: Vec<usize>,
    pub brace: SemiBrace,
}

impl SubBrace {
    pub fn local(&self, global: usize) -> Option<usize> {
        self.elements.binary_search(&global).ok()
    }

    pub fn global(&self, local: usize) -> usize {
        self.elements[local]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn induced(b: &SemiBrace, elements: &[usize], what: &str) -> Result<SubBrace> {
    let k = elements.len();
    let mut local = vec![usize::MAX; b.n()];
    elements.iter().enumerate().for_each(|(i, &x)| local[x] = i);
    let closed = |x: usize| -> Result<usize> {
        match local[x] {
            usize::MAX => Err(Error::Invariant(format!("{what} is not closed under both operations"))),
            i => Ok(i),
        }
    };
    let mut add = Vec::with_capacity(k * k);
    let mut circ = Vec::with_capacity(k * k);
    for &x in elements {
        for &y in elements {
            add.push(closed(b.add(x, y))?);
            circ.push(closed(b.circ(x, y))?);
        }
    }
    let brace = SemiBrace::verify(CayleyTable::new(k, add)?, CayleyTable::new(k, circ)?)
        .map_err(|d| Error::Invariant(format!("{what} fails re-verification: {d}")))?;
    Ok(SubBrace { elements: elements.to_vec(), brace })
}

/// `E = {e : e + e = e}` as a trivial sub-semi-brace.
pub fn idempotents(b: &SemiBrace) -> Result<SubBrace> {
    let e: Vec<usize> = (0..b.n()).filter(|&x| b.is_idempotent(x)).collect();
    if e.first() != Some(&0) {
        return Err(Error::Invariant("0 is not an additive idempotent".into()));
    }
    let sub = induced(b, &e, "E")?;
    if !sub.brace.is_trivial_semibrace() {
        return Err(Error::Invariant("(E, +) is not right-zero".into()));
    }
    Ok(sub)
}

/// `G = B + 0` as a skew sub-brace.
pub fn skew_part(b: &SemiBrace) -> Result<SubBrace> {
    let a = b.anatomy();
    let sub = induced(b, a.g(), "G")?;
    if !check_group(sub.brace.add_table()).is_group {
        return Err(Error::Invariant("(G, +) is not a group".into()));
    }
    if a.g().len() * a.e().len() != b.n() {
        return Err(Error::Invariant(format!(
            "|G|·|E| = {}·{} differs from |B| = {}",
            a.g().len(),
            a.e().len(),
            b.n()
        )));
    }
    Ok(sub)
}

/// `λ_a` for every `a`, checked against the structural invariants of `λ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaMap {
    pub perms: Vec<Permutation>,
}

impl LambdaMap {
    pub fn get(&self, a: usize) -> &Permutation {
        &self.perms[a]
    }

    /// The induced action on a `λ`-stable subset, in local indices.
    pub fn restricted_to(&self, subset: &[usize]) -> Result<Vec<Permutation>> {
        self.perms
            .iter()
            .map(|p| {
                let images = subset
                    .iter()
                    .map(|&x| {
                        subset
                            .binary_search(&p.apply(x))
                            .map_err(|_| Error::Invariant("subset is not λ-stable".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Permutation::new(images)
            })
            .collect()
    }
}

pub fn lambda(b: &SemiBrace) -> Result<LambdaMap> {
    let n = b.n();
    let a = b.anatomy();
    let mut perms = Vec::with_capacity(n);
    for x in 0..n {
        let images: Vec<usize> = (0..n).map(|y| a.lambda(x, y)).collect();
        perms.push(
            Permutation::new(images).map_err(|_| Error::Invariant(format!("λ_{x} is not a bijection")))?,
        );
    }
    for x in 0..n {
        for y in 0..n {
            if perms[b.circ(x, y)] != perms[x].compose(&perms[y]) {
                return Err(Error::Invariant(format!("λ_(x∘y) ≠ λ_x λ_y at x={x}, y={y}")));
            }
        }
    }
    for (x, p) in perms.iter().enumerate() {
        for u in 0..n {
            for v in 0..n {
                if p.apply(b.add(u, v)) != b.add(p.apply(u), p.apply(v)) {
                    return Err(Error::Invariant(format!("λ_{x} is not additive at ({u}, {v})")));
                }
            }
        }
        if a.e().iter().any(|&e| !a.in_e(p.apply(e))) {
            return Err(Error::Invariant(format!("λ_{x} does not preserve E")));
        }
        if (p.apply(0) == 0) != a.in_g(x) {
            return Err(Error::Invariant(format!("λ_{x}(0) = 0 disagrees with membership of {x} in G")));
        }
    }
    Ok(LambdaMap { perms })
}

/// `ρ_b(a) = (a⁻ + b)⁻ ∘ b`.
pub fn rho(b: &SemiBrace, elem_b: usize, elem_a: usize) -> usize {
    b.rho(elem_b, elem_a)
}

/// The unique `(g, e) ∈ G × E` with `g ∘ e = x`, obtained from the additive
/// decomposition `x = g + e'` and `e = λ_{g⁻}(e')`.
pub fn factorize(b: &SemiBrace, x: usize) -> Result<(usize, usize)> {
    factorize_with(b, &b.anatomy(), x)
}

pub(crate) fn factorize_with(b: &SemiBrace, a: &Anatomy, x: usize) -> Result<(usize, usize)> {
    let g = b.add(x, 0);
    let neg = a.neg(g).ok_or_else(|| Error::Invariant(format!("{g} = {x} + 0 has no additive inverse in G")))?;
    let e_add = b.add(neg, x);
    let e = a.lambda(b.inv(g), e_add);
    if !a.in_e(e_add) || !a.in_e(e) || b.circ(g, e) != x {
        return Err(Error::Invariant(format!("factorization of {x} failed")));
    }
    Ok((g, e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealCondition {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

impl IdealCondition {
    fn from(w: Option<Vec<usize>>) -> Self {
        IdealCondition { holds: w.is_none(), witness: w }
    }
}

/// The four ideal conditions, evaluated literally.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealReport {
    pub subset: Vec<usize>,
    /// `I` is a normal subgroup of `(B, ∘)`.
    pub normal_subgroup: IdealCondition,
    /// `I ∩ G` is a normal subgroup of `(G, +)`.
    pub additive_normal_in_g: IdealCondition,
    /// `(n⁻ + b)⁻ ∘ b ∈ I` for all `b ∈ B`, `n ∈ I ∩ G`.
    pub rho_closed: IdealCondition,
    /// `λ_g(e) ∈ I` for all `g ∈ G`, `e ∈ I ∩ E`.
    pub lambda_stable: IdealCondition,
    pub is_ideal: bool,
}

pub fn is_ideal(b: &SemiBrace, subset: &[usize]) -> IdealReport {
    let n = b.n();
    let a = b.anatomy();
    let mut member = vec![false; n];
    subset.iter().for_each(|&x| member[x] = true);
    let mut subset: Vec<usize> = (0..n).filter(|&x| member[x]).collect();
    subset.dedup();
    let circ = b.circ_group();

    let cond1 = (|| {
        if !member[0] {
            return Some(vec![0]);
        }
        for &x in &subset {
            if !member[circ.inv(x)] {
                return Some(vec![x]);
            }
            for &y in &subset {
                if !member[circ.mul(x, y)] {
                    return Some(vec![x, y]);
                }
            }
        }
        for g in 0..n {
            for &h in &subset {
                if !member[circ.conj(g, h)] {
                    return Some(vec![g, h]);
                }
            }
        }
        None
    })();

    let ig: Vec<usize> = subset.iter().copied().filter(|&x| a.in_g(x)).collect();
    let cond2 = (|| {
        if !member[0] {
            return Some(vec![0]);
        }
        for &x in &ig {
            let nx = a.neg(x).unwrap_or(usize::MAX);
            if nx == usize::MAX || !member[nx] {
                return Some(vec![x]);
            }
            for &y in &ig {
                if !member[b.add(x, y)] {
                    return Some(vec![x, y]);
                }
            }
        }
        for &g in a.g() {
            let ng = a.neg(g).unwrap();
            for &h in &ig {
                if !member[b.add(b.add(g, h), ng)] {
                    return Some(vec![g, h]);
                }
            }
        }
        None
    })();

    let cond3 = (|| {
        for &m in &ig {
            for x in 0..n {
                if !member[b.circ(b.inv(b.add(b.inv(m), x)), x)] {
                    return Some(vec![m, x]);
                }
            }
        }
        None
    })();

    let cond4 = (|| {
        for &g in a.g() {
            for &e in subset.iter().filter(|&&e| a.in_e(e)) {
                if !member[a.lambda(g, e)] {
                    return Some(vec![g, e]);
                }
            }
        }
        None
    })();

    let (c1, c2, c3, c4) =
        (IdealCondition::from(cond1), IdealCondition::from(cond2), IdealCondition::from(cond3), IdealCondition::from(cond4));
    let is_ideal = c1.holds && c2.holds && c3.holds && c4.holds;
    IdealReport { subset, normal_subgroup: c1, additive_normal_in_g: c2, rho_closed: c3, lambda_stable: c4, is_ideal }
}

/// Whether `E` is an ideal; equivalent to `E` being normal in `(B, ∘)`.
pub fn e_is_ideal(b: &SemiBrace) -> bool {
    is_ideal(b, b.anatomy().e()).is_ideal
}

/// Whether `G` is an ideal; equivalent to `G` being normal in `(B, ∘)`.
pub fn g_is_ideal(b: &SemiBrace) -> bool {
    is_ideal(b, b.anatomy().g()).is_ideal
}

/// `{x : λ_x(e) = e for all e ∈ E}`, which always lies inside `G`.
pub fn kernel_lambda_on_e(b: &SemiBrace) -> Result<Vec<usize>> {
    kernel_with(b, &b.anatomy())
}

pub(crate) fn kernel_with(_b: &SemiBrace, a: &Anatomy) -> Result<Vec<usize>> {
    let n = a.n;
    let ker: Vec<usize> = (0..n).filter(|&x| a.e().iter().all(|&e| a.lambda(x, e) == e)).collect();
    if let Some(&x) = ker.iter().find(|&&x| !a.in_g(x)) {
        return Err(Error::Invariant(format!("{x} lies in Ker(λ|E) but not in G")));
    }
    Ok(ker)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecompositionKind {
    /// `G ⋊_α E`: skew brace by trivial semi-brace, `α : E → Aut(G, +, ∘)`.
    SkewByTrivial,
    /// `E ⋊_α G`: trivial semi-brace by skew brace, `α : G → Aut(E, ∘)`.
    TrivialBySkew,
}

/// A semidirect product reconstruction together with the isomorphism onto it.
#[derive(Clone, Debug)]
pub struct SemidirectData {
    pub kind: DecompositionKind,
    pub g: SubBrace,
    pub e: SubBrace,
    /// Indexed by local indices of the acting factor; each permutation acts on
    /// local indices of the other factor.
    pub alpha: Vec<Permutation>,
    pub product: SemiBrace,
    /// Original label to product label.
    pub witness: Permutation,
}

impl SemidirectData {
    pub fn e_group(&self) -> &FiniteGroup {
        self.e.brace.circ_group()
    }

    pub fn alpha_is_trivial(&self) -> bool {
        self.alpha.iter().all(Permutation::is_identity)
    }
}

fn witness_is_isomorphism(b: &SemiBrace, p: &SemiBrace, f: &Permutation) -> bool {
    (0..b.n()).all(|x| {
        (0..b.n()).all(|y| {
            f.apply(b.add(x, y)) == p.add(f.apply(x), f.apply(y))
                && f.apply(b.circ(x, y)) == p.circ(f.apply(x), f.apply(y))
        })
    })
}

/// If `G = Ker(λ|E)`, rebuild `B` as `G ⋊_α E` with `α_e(g) = e ∘ g ∘ e⁻` and
/// return the isomorphism `g + e ↦ (g, e)`. Otherwise `None`.
pub fn decompose(b: &SemiBrace) -> Result<Option<SemidirectData>> {
    let a = b.anatomy();
    if kernel_with(b, &a)? != a.g() {
        return Ok(None);
    }
    let g = skew_part(b)?;
    let e = idempotents(b)?;
    let circ = b.circ_group();
    let mut alpha = Vec::with_capacity(e.len());
    for &x in &e.elements {
        let images = g
            .elements
            .iter()
            .map(|&y| g.local(circ.conj(x, y)).ok_or_else(|| Error::Invariant("G is not normal".into())))
            .collect::<Result<Vec<_>>>()?;
        alpha.push(Permutation::new(images)?);
    }
    let product = semidirect(&g.brace, &trivial_semibrace(e.brace.circ_group()), &alpha)
        .map_err(|err| Error::Invariant(format!("conjugation by E is not an automorphism of G: {err}")))?;
    let ne = e.len();
    let images = (0..b.n())
        .map(|x| {
            let gx = b.add(x, 0);
            let ex = b.add(a.neg(gx).unwrap(), x);
            g.local(gx).unwrap() * ne + e.local(ex).unwrap()
        })
        .collect();
    let witness = Permutation::new(images)?;
    if !witness_is_isomorphism(b, &product, &witness) {
        return Err(Error::Invariant("g + e ↦ (g, e) is not an isomorphism onto G ⋊ E".into()));
    }
    Ok(Some(SemidirectData { kind: DecompositionKind::SkewByTrivial, g, e, alpha, product, witness }))
}

/// If `E` is an ideal, rebuild `B` as `E ⋊_α G` (trivial semi-brace by skew
/// brace) with `α_g(e) = g ∘ e ∘ g⁻` and the isomorphism `g + e ↦ (e, g)`.
pub fn decompose_e_ideal(b: &SemiBrace) -> Result<Option<SemidirectData>> {
    let a = b.anatomy();
    if !b.circ_group().is_normal(a.e()) {
        return Ok(None);
    }
    let g = skew_part(b)?;
    let e = idempotents(b)?;
    let circ = b.circ_group();
    let alpha = g
        .elements
        .iter()
        .map(|&x| Permutation::new(e.elements.iter().map(|&y| e.local(circ.conj(x, y)).unwrap()).collect()))
        .collect::<Result<Vec<_>>>()?;
    let product = semidirect(&trivial_semibrace(e.brace.circ_group()), &g.brace, &alpha)
        .map_err(|err| Error::Invariant(format!("conjugation by G is not an automorphism of E: {err}")))?;
    let ng = g.len();
    let images = (0..b.n())
        .map(|x| {
            let gx = b.add(x, 0);
            let ex = b.add(a.neg(gx).unwrap(), x);
            e.local(ex).unwrap() * ng + g.local(gx).unwrap()
        })
        .collect();
    let witness = Permutation::new(images)?;
    if !witness_is_isomorphism(b, &product, &witness) {
        return Err(Error::Invariant("g + e ↦ (e, g) is not an isomorphism onto E ⋊ G".into()));
    }
    Ok(Some(SemidirectData { kind: DecompositionKind::TrivialBySkew, g, e, alpha, product, witness }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic, direct_product, symmetric};
    use crate::construct::{family, left_nilpotent_example, trivial_skewbrace, FamilyId, Theorem};

    fn pq3() -> SemiBrace {
        family(&FamilyId::new(Theorem::PqCongruent, 3, 3, Some(2))).unwrap()
    }

    #[test]
    fn trivial_semibrace_on_z2_verifies() {
        let b = SemiBrace::from_fns(2, |_, y| y, |x, y| (x + y) % 2).unwrap();
        assert!(b.is_trivial_semibrace());
    }

    #[test]
    fn broken_z2_addition_is_not_left_cancellative() {
        let add = CayleyTable::from_rows(vec![vec![0, 1], vec![1, 1]]).unwrap();
        let circ = CayleyTable::from_fn(2, |x, y| (x + y) % 2).unwrap();
        let d = SemiBrace::verify(add, circ).unwrap_err();
        assert_eq!(d.axiom, Axiom::AddNotLeftCancellative);
        assert_eq!(d.witness, vec![1, 0, 1]);
    }

    #[test]
    fn distinct_diagnostics() {
        let z2 = CayleyTable::from_fn(2, |x, y| (x + y) % 2).unwrap();
        let right_zero = CayleyTable::from_fn(2, |_, y| y).unwrap();
        assert_eq!(SemiBrace::verify(z2.clone(), right_zero.clone()).unwrap_err().axiom, Axiom::CircNotGroup);
        // a + b = a is associative but not left cancellative
        let left_zero = CayleyTable::from_fn(2, |x, _| x).unwrap();
        assert_eq!(SemiBrace::verify(left_zero, z2.clone()).unwrap_err().axiom, Axiom::AddNotLeftCancellative);
        let three = CayleyTable::from_fn(3, |_, y| y).unwrap();
        assert_eq!(SemiBrace::verify(three, z2).unwrap_err().axiom, Axiom::SizeMismatch);
    }

    #[test]
    fn distributivity_failure_detected() {
        // (Z/6, +) against S3 in the catalog labeling
        let s3 = symmetric(3);
        let add = CayleyTable::from_fn(6, |x, y| (x + y) % 6).unwrap();
        let d = SemiBrace::verify(add, s3.table().clone()).unwrap_err();
        assert_eq!(d.witness, vec![1, 0, 1]);
        assert_eq!(d.axiom, Axiom::LeftDistributivity);
    }

    #[test]
    fn identity_relabeled_to_zero() {
        // Z/2 circ with identity at label 1
        let circ = CayleyTable::from_rows(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let add = CayleyTable::from_fn(2, |_, y| y).unwrap();
        let b = SemiBrace::verify(add, circ).unwrap();
        assert_eq!(b.circ(0, 1), 1);
        assert_eq!(b.circ(1, 1), 0);
    }

    #[test]
    fn e_and_g_of_extreme_cases() {
        let sk = trivial_skewbrace(&symmetric(3));
        assert_eq!(idempotents(&sk).unwrap().elements, vec![0]);
        assert_eq!(skew_part(&sk).unwrap().len(), 6);
        let tr = trivial_semibrace(&cyclic(4));
        assert_eq!(idempotents(&tr).unwrap().len(), 4);
        assert_eq!(skew_part(&tr).unwrap().elements, vec![0]);
    }

    #[test]
    fn pq_noncongruent_item4_e_size() {
        let b = family(&FamilyId::new(Theorem::PqNoncongruent, 4, 5, Some(3))).unwrap();
        assert_eq!(idempotents(&b).unwrap().elements, vec![0, 1, 2]);
    }

    #[test]
    fn pq_congruent_item3_sizes() {
        let b = pq3();
        let (g, e) = (skew_part(&b).unwrap(), idempotents(&b).unwrap());
        assert_eq!((g.len(), e.len()), (3, 2));
    }

    #[test]
    fn lambda_examples() {
        let tr = trivial_semibrace(&symmetric(3));
        let l = lambda(&tr).unwrap();
        assert!(l.get(0).is_identity());
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(l.get(x).apply(y), tr.circ(x, y));
            }
        }
        let sk = trivial_skewbrace(&symmetric(3));
        assert!(lambda(&sk).unwrap().perms.iter().all(Permutation::is_identity));
    }

    #[test]
    fn factorize_examples() {
        let b = pq3();
        assert_eq!(factorize(&b, 0).unwrap(), (0, 0));
        for &g in b.anatomy().g() {
            assert_eq!(factorize(&b, g).unwrap(), (g, 0));
        }
        // (2, 1) -> g = (2, 0), e = (0, 1) with index (g, e) ↦ 2g + e
        assert_eq!(factorize(&b, 5).unwrap(), (4, 1));
    }

    #[test]
    fn ideal_examples() {
        let b = pq3();
        let all: Vec<usize> = (0..6).collect();
        assert!(is_ideal(&b, &all).is_ideal);
        assert!(is_ideal(&b, &[0]).is_ideal);
        let r = is_ideal(&b, b.anatomy().e());
        assert!(!r.is_ideal);
        assert!(!r.normal_subgroup.holds);
        assert!(!e_is_ideal(&b));
        assert!(g_is_ideal(&b));
    }

    #[test]
    fn ideal_shortcuts_match_normality() {
        let z6 = cyclic(6);
        for b in [pq3(), trivial_semibrace(&symmetric(3)), left_nilpotent_example(3).unwrap(), trivial_semibrace(&z6)] {
            let a = b.anatomy();
            assert_eq!(e_is_ideal(&b), b.circ_group().is_normal(a.e()));
            assert_eq!(g_is_ideal(&b), b.circ_group().is_normal(a.g()));
        }
    }

    #[test]
    fn kernel_examples() {
        let sk = trivial_skewbrace(&cyclic(5));
        assert_eq!(kernel_lambda_on_e(&sk).unwrap().len(), 5);
        let tr = trivial_semibrace(&cyclic(5));
        assert_eq!(kernel_lambda_on_e(&tr).unwrap(), vec![0]);
        let b = pq3();
        assert_eq!(kernel_lambda_on_e(&b).unwrap(), b.anatomy().g().to_vec());
    }

    #[test]
    fn decompose_examples() {
        let sk = trivial_skewbrace(&symmetric(3));
        let d = decompose(&sk).unwrap().unwrap();
        assert_eq!(d.e.len(), 1);

        let b = pq3();
        let d = decompose(&b).unwrap().unwrap();
        assert_eq!(d.kind, DecompositionKind::SkewByTrivial);
        // the non-identity idempotent acts as inversion on Z/3
        assert!(d.alpha[0].is_identity());
        assert_eq!(d.alpha[1].images(), &[0, 2, 1]);

        let direct = family(&FamilyId::new(Theorem::PqNoncongruent, 5, 5, Some(3))).unwrap();
        let d = decompose(&direct).unwrap().unwrap();
        assert!(d.alpha_is_trivial());
    }

    #[test]
    fn decompose_e_ideal_examples() {
        let tr = trivial_semibrace(&direct_product(&cyclic(2), &cyclic(3)));
        let d = decompose_e_ideal(&tr).unwrap().unwrap();
        assert_eq!(d.g.len(), 1);
        let b = family(&FamilyId::new(Theorem::TwoP2Ep2, 5, 3, None)).unwrap();
        assert!(decompose_e_ideal(&b).unwrap().is_some());
        assert!(decompose_e_ideal(&pq3()).unwrap().is_none());
    }

    #[test]
    fn json_roundtrip_and_rejection() {
        let b = pq3();
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(SemiBrace::from_json(&s).unwrap(), b);
        let bad = r#"{"n":2,"add":[[0,1],[1,1]],"circ":[[0,1],[1,0]]}"#;
        match SemiBrace::from_json(bad) {
            Err(Error::Axiom(d)) => {
                let v = serde_json::to_value(&d).unwrap();
                assert_eq!(v["axiom"], "add-not-left-cancellative");
                assert_eq!(v["witness"], serde_json::json!([1, 0, 1]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
