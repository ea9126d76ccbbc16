use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection on `0..n`, stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::MalformedTable(format!(
                    "image array {images:?} is not a bijection on 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_vec_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(images.clone()).is_ok());
        Permutation { images }
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn into_images(self) -> Vec<usize> {
        self.images
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Order as the lcm of the cycle lengths.
    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut ord = 1;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            ord = lcm(ord, len);
        }
        ord
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Every permutation of `0..n` whose cycle lengths all divide `k`, in a fixed order.
pub(crate) fn permutations_with_order_dividing(n: usize, k: usize) -> Vec<Permutation> {
    fn rec(k: usize, images: &mut Vec<usize>, free: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        let Some(start) = free.iter().position(|&f| f) else {
            out.push(Permutation { images: images.clone() });
            return;
        };
        let remaining = free.iter().filter(|&&f| f).count();
        free[start] = false;
        for len in (1..=remaining).filter(|l| k.is_multiple_of(*l)) {
            let mut cycle = vec![start];
            extend_cycle(k, len, &mut cycle, images, free, out);
        }
        free[start] = true;
    }

    fn extend_cycle(
        k: usize,
        len: usize,
        cycle: &mut Vec<usize>,
        images: &mut Vec<usize>,
        free: &mut Vec<bool>,
        out: &mut Vec<Permutation>,
    ) {
        if cycle.len() == len {
            for w in 0..len {
                images[cycle[w]] = cycle[(w + 1) % len];
            }
            rec(k, images, free, out);
            return;
        }
        for x in 0..free.len() {
            if free[x] {
                free[x] = false;
                cycle.push(x);
                extend_cycle(k, len, cycle, images, free, out);
                cycle.pop();
                free[x] = true;
            }
        }
    }

    let mut out = Vec::new();
    let mut images = vec![0; n];
    let mut free = vec![true; n];
    rec(k, &mut images, &mut free, &mut out);
    out
}
