//! Permutations of `0..k` stored as image arrays.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CubeError;

/// A bijection of `0..len`, stored as its image array: point `i` is sent to
/// `images[i]`.
///
/// Composition is written left to right to match how move sequences are
/// read: `p.then(&q)` first applies `p`, then `q`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Self {
            images: (0..len).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, CubeError> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(CubeError::NotAPermutation);
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    /// Builds the permutation from disjoint cycles; points not mentioned are fixed.
    pub fn from_cycles(len: usize, cycles: &[&[usize]]) -> Result<Self, CubeError> {
        let mut images: Vec<usize> = (0..len).collect();
        let mut touched = vec![false; len];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= len || touched[a] {
                    return Err(CubeError::NotAPermutation);
                }
                touched[a] = true;
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    /// The transposition of `a` and `b` on `0..len`.
    pub fn transposition(len: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..len).collect();
        images.swap(a, b);
        Self { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "degree mismatch");
        Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, exp: u32) -> Permutation {
        let mut out = Permutation::identity(self.len());
        for _ in 0..exp {
            out = out.then(self);
        }
        out
    }

    /// Nontrivial cycles, each starting at its smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Sorted lengths of the nontrivial cycles.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lens.sort_unstable();
        lens
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(&self) -> i8 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Number of points moved.
    pub fn support_len(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i != x)
            .count()
    }

    /// Order as the lcm of cycle lengths.
    pub fn order(&self) -> u128 {
        self.cycles().iter().fold(1u128, |acc, c| {
            let l = c.len() as u128;
            acc / gcd(acc, l) * l
        })
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = CubeError;

    fn try_from(images: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Parity of a permutation, exposed under the name used by the solvability rules.
pub fn permutation_sign(p: &Permutation) -> i8 {
    p.sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_of_small_cycles() {
        assert_eq!(Permutation::identity(5).sign(), 1);
        let four = Permutation::from_cycles(8, &[&[0, 1, 2, 3]]).unwrap();
        assert_eq!(four.sign(), -1);
        let two_fours = Permutation::from_cycles(8, &[&[0, 1, 2, 3], &[4, 5, 6, 7]]).unwrap();
        assert_eq!(two_fours.sign(), 1);
        assert_eq!(Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap().sign(), 1);
    }

    #[test]
    fn compose_and_invert() {
        let p = Permutation::from_cycles(4, &[&[0, 1, 2]]).unwrap();
        let q = Permutation::transposition(4, 2, 3);
        let pq = p.then(&q);
        assert_eq!(pq.apply(1), 3);
        assert!(pq.then(&pq.inverse()).is_identity());
        assert_eq!(p.order(), 3);
        assert!(p.pow(3).is_identity());
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
        assert!(Permutation::from_cycles(4, &[&[0, 1], &[1, 2]]).is_err());
    }

    #[test]
    fn serde_uses_image_array() {
        let p = Permutation::from_cycles(3, &[&[0, 2]]).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), "[2,1,0]");
        let back: Permutation = serde_json::from_str("[2,1,0]").unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<Permutation>("[1,1]").is_err());
    }
}
