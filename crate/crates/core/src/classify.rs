//! Check a classification list against independent enumerations: every family
//! member is valid and has the stated `E` and `G`, members are pairwise
//! non-isomorphic, and they match a census one-to-one.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::brace::{skew_part, SemiBrace};
use crate::construct::{family_ids, family_instance, FamilyId, Theorem};
use crate::enumerate::{enumerate_generic_with, enumerate_structural_with, Census, EFilter, Enumerator, GENERIC_BOUND};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::iso::isomorphic;

/// A single classification list, or all three order-`2p²` lists together.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Theorem(Theorem),
    All2p2,
}

impl Target {
    pub fn theorems(self) -> Vec<Theorem> {
        match self {
            Target::Theorem(t) => vec![t],
            Target::All2p2 => Theorem::TWO_P2.to_vec(),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Theorem(t) => write!(f, "{t}"),
            Target::All2p2 => f.write_str("2p2"),
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "2p2" {
            Ok(Target::All2p2)
        } else {
            s.parse().map(Target::Theorem)
        }
    }
}

impl Serialize for Target {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyCheck {
    pub id: FamilyId,
    pub valid: bool,
    pub statement_matches: bool,
    pub e_size: usize,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusComparison {
    pub enumerator: Enumerator,
    pub filter: EFilter,
    pub census_size: usize,
    pub matched: bool,
    /// Families with no isomorphic census entry.
    pub unmatched_families: Vec<FamilyId>,
    /// Indices of census entries with no isomorphic family.
    pub unmatched_census: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub target: Target,
    pub p: usize,
    pub q: Option<usize>,
    pub n: usize,
    pub families: Vec<FamilyCheck>,
    pub pairwise_non_isomorphic: bool,
    pub isomorphic_pair: Option<(FamilyId, FamilyId)>,
    pub structural: Option<CensusComparison>,
    pub generic: Option<CensusComparison>,
    pub ok: bool,
}

impl ClassificationReport {
    pub fn summary(&self) -> String {
        let k = self.families.len();
        if self.ok {
            return format!("{k} classes, census match");
        }
        let mut problems = Vec::new();
        if let Some(bad) = self.families.iter().find(|f| !f.valid || !f.statement_matches) {
            problems.push(format!("{} fails its statement", bad.id));
        }
        if let Some((a, b)) = &self.isomorphic_pair {
            problems.push(format!("{a} ≅ {b}"));
        }
        for c in [&self.structural, &self.generic].into_iter().flatten() {
            if !c.matched {
                problems.push(format!("{} census of size {} does not match", c.enumerator, c.census_size));
            }
        }
        format!("{k} classes, FAILED: {}", problems.join("; "))
    }
}

/// One-to-one matching by isomorphism. Census entries are pairwise
/// non-isomorphic, so greedy matching is exact.
pub fn match_census(families: &[(FamilyId, SemiBrace)], census: &Census, keep: impl Fn(&SemiBrace) -> bool) -> CensusComparison {
    let entries: Vec<(usize, &SemiBrace)> = census.braces().enumerate().filter(|(_, b)| keep(b)).collect();
    let mut used = vec![false; entries.len()];
    let mut unmatched_families = Vec::new();
    for (id, b) in families {
        match (0..entries.len()).find(|&i| !used[i] && isomorphic(b, entries[i].1).is_some()) {
            Some(i) => used[i] = true,
            None => unmatched_families.push(*id),
        }
    }
    let unmatched_census: Vec<usize> = (0..entries.len()).filter(|&i| !used[i]).map(|i| entries[i].0).collect();
    CensusComparison {
        enumerator: census.enumerator,
        filter: census.filter,
        census_size: entries.len(),
        matched: unmatched_families.is_empty() && unmatched_census.is_empty(),
        unmatched_families,
        unmatched_census,
    }
}

pub fn verify_classification(target: Target, p: usize, q: Option<usize>) -> Result<ClassificationReport> {
    verify_classification_with(target, p, q, Exec::default())
}

pub fn verify_classification_with(target: Target, p: usize, q: Option<usize>, exec: Exec) -> Result<ClassificationReport> {
    verify_classification_using(target, p, q, exec, &|n, filter, enumerator| match enumerator {
        Enumerator::Structural => enumerate_structural_with(n, filter, exec),
        _ => enumerate_generic_with(n, filter, GENERIC_BOUND, exec),
    })
}

/// As [`verify_classification_with`], obtaining censuses from `census`
/// (for instance through a cache).
pub fn verify_classification_using(
    target: Target,
    p: usize,
    q: Option<usize>,
    exec: Exec,
    census: &dyn Fn(usize, EFilter, Enumerator) -> Result<Census>,
) -> Result<ClassificationReport> {
    let theorems = target.theorems();
    let n = theorems[0].order(p, q)?;
    let ids: Vec<FamilyId> = theorems.iter().map(|&t| family_ids(t, p, q)).collect::<Result<Vec<_>>>()?.concat();

    let mut checks = Vec::new();
    let mut built: Vec<(FamilyId, SemiBrace)> = Vec::new();
    for id in &ids {
        match family_instance(id) {
            Ok(inst) => {
                let statement_matches = inst.matches_statement().unwrap_or(false);
                checks.push(FamilyCheck {
                    id: *id,
                    valid: true,
                    statement_matches,
                    e_size: inst.expected_e.len(),
                    error: None,
                });
                built.push((*id, inst.brace));
            }
            Err(e) => checks.push(FamilyCheck {
                id: *id,
                valid: false,
                statement_matches: false,
                e_size: 0,
                error: Some(e.to_string()),
            }),
        }
    }

    let pairs: Vec<(usize, usize)> =
        (0..built.len()).flat_map(|i| (i + 1..built.len()).map(move |j| (i, j))).collect();
    let isomorphic_pair = exec
        .find_first(pairs.len(), |k| {
            let (i, j) = pairs[k];
            isomorphic(&built[i].1, &built[j].1).map(|_| (built[i].0, built[j].0))
        });

    let (filter, keep): (EFilter, Box<dyn Fn(&SemiBrace) -> bool>) = match target {
        Target::Theorem(t) if t.is_pq() => (EFilter::AtLeast(2), Box::new(|_| true)),
        Target::All2p2 => (EFilter::Sylow, Box::new(|_| true)),
        Target::Theorem(Theorem::TwoP2Ep2) => (EFilter::Sylow, Box::new(move |b| b.anatomy().e().len() == p * p)),
        Target::Theorem(t) => {
            let cyclic = t == Theorem::TwoP2E2Cyclic;
            (
                EFilter::Sylow,
                Box::new(move |b| {
                    b.anatomy().e().len() == 2
                        && skew_part(b).is_ok_and(|g| g.brace.circ_group().is_cyclic() == cyclic)
                }),
            )
        }
    };
    let structural = match_census(&built, &census(n, filter, Enumerator::Structural)?, &keep);
    let generic = if n <= GENERIC_BOUND {
        Some(match_census(&built, &census(n, filter, Enumerator::Generic)?, &keep))
    } else {
        None
    };

    let ok = checks.iter().all(|c| c.valid && c.statement_matches)
        && isomorphic_pair.is_none()
        && structural.matched
        && generic.as_ref().is_none_or(|g| g.matched);
    Ok(ClassificationReport {
        target,
        p,
        q,
        n,
        families: checks,
        pairwise_non_isomorphic: isomorphic_pair.is_none(),
        isomorphic_pair,
        structural: Some(structural),
        generic,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pq_congruent_at_3_2() {
        let r = verify_classification(Target::Theorem(Theorem::PqCongruent), 3, Some(2)).unwrap();
        assert!(r.ok, "{}", r.summary());
        assert_eq!(r.families.len(), 6);
        assert!(r.generic.as_ref().unwrap().matched);
        assert_eq!(r.summary(), "6 classes, census match");
    }

    #[test]
    fn pq_noncongruent_at_5_3() {
        let r = verify_classification(Target::Theorem(Theorem::PqNoncongruent), 5, Some(3)).unwrap();
        assert!(r.ok, "{}", r.summary());
        assert_eq!(r.families.len(), 3);
        assert!(r.generic.is_none());
    }

    #[test]
    fn target_parsing() {
        assert_eq!("2p2".parse::<Target>().unwrap(), Target::All2p2);
        assert_eq!("pq-congruent".parse::<Target>().unwrap(), Target::Theorem(Theorem::PqCongruent));
        assert!("pq".parse::<Target>().is_err());
    }

    #[test]
    fn wrong_parameters_are_rejected() {
        assert!(verify_classification(Target::Theorem(Theorem::PqCongruent), 5, Some(3)).is_err());
        assert!(verify_classification(Target::All2p2, 2, None).is_err());
    }
}
