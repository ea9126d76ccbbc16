//! The set-theoretic solution `r(x, y) = (λ_x(y), ρ_y(x))` of a semi-brace and
//! exhaustive checks of the braid relation and the usual properties.

use serde::{Deserialize, Serialize};

use crate::brace::SemiBrace;
use crate::error::{Error, Result};
use crate::exec::Exec;

/// A map `X × X → X × X` stored as an explicit pair table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionMap {
    n: usize,
    r: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct SolutionJson {
    n: usize,
    r: Vec<Vec<[usize; 2]>>,
}

impl SolutionMap {
    pub fn new(n: usize, r: Vec<(usize, usize)>) -> Result<Self> {
        if r.len() != n * n || r.iter().any(|&(a, b)| a >= n || b >= n) {
            return Err(Error::MalformedTable(format!("solution table must hold {n}² pairs below {n}")));
        }
        Ok(SolutionMap { n, r })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> (usize, usize)) -> Result<Self> {
        SolutionMap::new(n, (0..n * n).map(|i| f(i / n, i % n)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn apply(&self, x: usize, y: usize) -> (usize, usize) {
        self.r[x * self.n + y]
    }

    pub fn set(&mut self, x: usize, y: usize, v: (usize, usize)) {
        assert!(v.0 < self.n && v.1 < self.n);
        self.r[x * self.n + y] = v;
    }
}

impl Serialize for SolutionMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = (0..self.n).map(|x| (0..self.n).map(|y| <[usize; 2]>::from(self.apply(x, y))).collect()).collect();
        SolutionJson { n: self.n, r }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SolutionMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SolutionJson::deserialize(d)?;
        if j.r.len() != j.n || j.r.iter().any(|row| row.len() != j.n) {
            return Err(serde::de::Error::custom("r must be an n × n array of pairs"));
        }
        SolutionMap::new(j.n, j.r.into_iter().flatten().map(|[a, b]| (a, b)).collect()).map_err(serde::de::Error::custom)
    }
}

pub fn solution_from(b: &SemiBrace) -> SolutionMap {
    SolutionMap::from_fn(b.n(), |x, y| (b.lambda(x, y), b.rho(y, x))).expect("tables are total")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BraidReport {
    pub holds: bool,
    pub witness: Option<[usize; 3]>,
}

/// `(r × id)(id × r)(r × id) = (id × r)(r × id)(id × r)` on all triples.
pub fn check_braid(r: &SolutionMap) -> BraidReport {
    check_braid_with(r, Exec::default())
}

pub fn check_braid_with(r: &SolutionMap, exec: Exec) -> BraidReport {
    let n = r.n();
    let fails = |x: usize, y: usize, z: usize| {
        let (a, b) = r.apply(x, y);
        let (c, d) = r.apply(b, z);
        let (e, f) = r.apply(a, c);
        let lhs = (e, f, d);
        let (u, v) = r.apply(y, z);
        let (w, s) = r.apply(x, u);
        let (t, k) = r.apply(s, v);
        lhs != (w, t, k)
    };
    let witness = exec.find_first(n, |x| {
        (0..n).find_map(|y| (0..n).find(|&z| fails(x, y, z)).map(|z| [x, y, z]))
    });
    BraidReport { holds: witness.is_none(), witness }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Properties {
    pub left_nondegenerate: bool,
    pub nondegenerate: bool,
    pub bijective: bool,
    pub involutive: bool,
}

pub fn check_properties(r: &SolutionMap) -> Properties {
    let n = r.n();
    let is_perm = |f: &dyn Fn(usize) -> usize| {
        let mut seen = vec![false; n];
        (0..n).all(|i| !std::mem::replace(&mut seen[f(i)], true))
    };
    let left = (0..n).all(|x| is_perm(&|y| r.apply(x, y).0));
    let right = (0..n).all(|y| is_perm(&|x| r.apply(x, y).1));
    let mut seen = vec![false; n * n];
    let bijective = (0..n * n).all(|i| {
        let (a, b) = r.apply(i / n, i % n);
        !std::mem::replace(&mut seen[a * n + b], true)
    });
    let involutive = (0..n * n).all(|i| {
        let (a, b) = r.apply(i / n, i % n);
        r.apply(a, b) == (i / n, i % n)
    });
    Properties { left_nondegenerate: left, nondegenerate: left && right, bijective, involutive }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic, symmetric};
    use crate::construct::{trivial_semibrace, trivial_skewbrace};

    #[test]
    fn flip_from_abelian_trivial_brace() {
        let r = solution_from(&trivial_skewbrace(&cyclic(5)));
        for x in 0..5 {
            for y in 0..5 {
                assert_eq!(r.apply(x, y), (y, x));
            }
        }
        let p = check_properties(&r);
        assert!(p.involutive && p.bijective && p.nondegenerate);
    }

    #[test]
    fn trivial_semibrace_solution() {
        let b = trivial_semibrace(&symmetric(3));
        let r = solution_from(&b);
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(r.apply(x, y), (b.circ(x, y), 0));
            }
        }
        assert!(check_braid(&r).holds);
        let p = check_properties(&r);
        assert!(p.left_nondegenerate && !p.bijective && !p.involutive);
    }

    #[test]
    fn conjugation_solution() {
        let g = symmetric(3);
        let r = solution_from(&trivial_skewbrace(&g));
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(r.apply(x, y), (y, g.mul(g.mul(g.inv(y), x), y)));
            }
        }
        assert!(check_braid(&r).holds);
        assert!(!check_properties(&r).involutive);
    }

    #[test]
    fn perturbed_flip_fails_braid() {
        let mut r = SolutionMap::from_fn(3, |x, y| (y, x)).unwrap();
        assert!(check_braid(&r).holds);
        r.set(0, 1, (2, 2));
        let rep = check_braid(&r);
        assert!(!rep.holds);
        assert!(rep.witness.is_some());
        assert_eq!(check_braid_with(&r, Exec::Sequential), rep);
    }

    #[test]
    fn json_shape() {
        let r = SolutionMap::from_fn(2, |x, y| (y, x)).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v, serde_json::json!({"n": 2, "r": [[[0, 0], [1, 0]], [[0, 1], [1, 1]]]}));
        let back: SolutionMap = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
