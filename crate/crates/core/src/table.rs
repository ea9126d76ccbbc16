//! Cayley tables and the basic magma checks everything else is built on.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// An `n × n` operation table over `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "TableJson", into = "TableJson")]
pub struct CayleyTable {
    n: usize,
    data: Vec<usize>,
}

/// Wire form: `{"n": int, "table": [[int]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableJson {
    pub n: usize,
    pub table: Vec<Vec<usize>>,
}

impl CayleyTable {
    pub fn new(n: usize, data: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::MalformedTable("empty carrier".into()));
        }
        if data.len() != n * n {
            return Err(Error::MalformedTable(format!(
                "expected {} entries for n={n}, got {}",
                n * n,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|&x| x >= n) {
            return Err(Error::MalformedTable(format!(
                "entry ({}, {}) = {} is out of range 0..{n}",
                pos / n,
                pos % n,
                data[pos]
            )));
        }
        Ok(CayleyTable { n, data })
    }

    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::MalformedTable(format!(
                "row {i} has length {} in a table with {n} rows",
                r.len()
            )));
        }
        CayleyTable::new(n, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let data = (0..n * n).map(|i| f(i / n, i % n)).collect();
        CayleyTable::new(n, data)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> usize {
        self.data[a * self.n + b]
    }

    pub fn row(&self, a: usize) -> &[usize] {
        &self.data[a * self.n..(a + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.data.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    /// Transport the operation along `perm`: the result satisfies
    /// `new(perm(a), perm(b)) = perm(old(a, b))`.
    pub fn relabel(&self, perm: &Permutation) -> CayleyTable {
        assert_eq!(perm.len(), self.n);
        let mut data = vec![0; self.n * self.n];
        for a in 0..self.n {
            for b in 0..self.n {
                data[perm.apply(a) * self.n + perm.apply(b)] = perm.apply(self.get(a, b));
            }
        }
        CayleyTable { n: self.n, data }
    }

    /// First `(a, b, c)` in lexicographic order with `(ab)c ≠ a(bc)`.
    pub fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                let ab = self.get(a, b);
                for c in 0..n {
                    if self.get(ab, c) != self.get(a, self.get(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }
}

impl TryFrom<TableJson> for CayleyTable {
    type Error = Error;
    fn try_from(j: TableJson) -> Result<Self> {
        let t = CayleyTable::from_rows(j.table)?;
        if t.n != j.n {
            return Err(Error::MalformedTable(format!("declared n={} but table has {} rows", j.n, t.n)));
        }
        Ok(t)
    }
}

impl From<CayleyTable> for TableJson {
    fn from(t: CayleyTable) -> Self {
        TableJson { n: t.n, table: t.rows() }
    }
}

/// Why a table failed to be a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "failure", rename_all = "kebab-case")]
pub enum GroupFailure {
    NotAssociative { a: usize, b: usize, c: usize },
    NoIdentity,
    NoInverse { a: usize },
}

impl GroupFailure {
    pub fn witness(&self) -> Vec<usize> {
        match *self {
            GroupFailure::NotAssociative { a, b, c } => vec![a, b, c],
            GroupFailure::NoIdentity => vec![],
            GroupFailure::NoInverse { a } => vec![a],
        }
    }
}

impl fmt::Display for GroupFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupFailure::NotAssociative { a, b, c } => {
                write!(f, "associativity fails at ({a}, {b}, {c})")
            }
            GroupFailure::NoIdentity => write!(f, "no two-sided identity"),
            GroupFailure::NoInverse { a } => write!(f, "element {a} has no two-sided inverse"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub is_group: bool,
    pub identity: Option<usize>,
    pub inverses: Option<Vec<usize>>,
    pub failure: Option<GroupFailure>,
}

pub fn check_group(t: &CayleyTable) -> GroupReport {
    let fail = |failure, identity| GroupReport { is_group: false, identity, inverses: None, failure: Some(failure) };
    let n = t.n();
    let identity = (0..n).find(|&e| (0..n).all(|x| t.get(e, x) == x && t.get(x, e) == x));
    let Some(e) = identity else {
        return fail(GroupFailure::NoIdentity, None);
    };
    let mut inverses = Vec::with_capacity(n);
    for a in 0..n {
        match (0..n).find(|&b| t.get(a, b) == e && t.get(b, a) == e) {
            Some(b) => inverses.push(b),
            None => return fail(GroupFailure::NoInverse { a }, Some(e)),
        }
    }
    if let Some((a, b, c)) = t.associativity_witness() {
        return fail(GroupFailure::NotAssociative { a, b, c }, Some(e));
    }
    GroupReport { is_group: true, identity: Some(e), inverses: Some(inverses), failure: None }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "failure", rename_all = "kebab-case")]
pub enum CancellativeFailure {
    NotAssociative { a: usize, b: usize, c: usize },
    /// `a + b = a + c` with `b ≠ c`.
    NotLeftCancellative { a: usize, b: usize, c: usize },
}

impl CancellativeFailure {
    pub fn witness(&self) -> Vec<usize> {
        match *self {
            CancellativeFailure::NotAssociative { a, b, c }
            | CancellativeFailure::NotLeftCancellative { a, b, c } => vec![a, b, c],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CancellativeReport {
    pub holds: bool,
    pub failure: Option<CancellativeFailure>,
}

pub fn check_left_cancellative_semigroup(t: &CayleyTable) -> CancellativeReport {
    let n = t.n();
    if let Some((a, b, c)) = t.associativity_witness() {
        return CancellativeReport { holds: false, failure: Some(CancellativeFailure::NotAssociative { a, b, c }) };
    }
    for a in 0..n {
        let mut first = vec![usize::MAX; n];
        for b in 0..n {
            let s = t.get(a, b);
            if first[s] != usize::MAX {
                return CancellativeReport {
                    holds: false,
                    failure: Some(CancellativeFailure::NotLeftCancellative { a, b: first[s], c: b }),
                };
            }
            first[s] = b;
        }
    }
    CancellativeReport { holds: true, failure: None }
}
