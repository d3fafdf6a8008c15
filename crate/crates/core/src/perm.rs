use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `0..n`, stored as its image: `i` maps to `image[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from its image vector, rejecting non-bijections.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation { n });
            }
            seen[v] = true;
        }
        Ok(Self { image })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// Destination of `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![0; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v] = i;
        }
        Self { image }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        assert!(Permutation::new(vec![1, 0, 2]).is_ok());
    }

    #[test]
    fn inverse_round_trips() {
        let p = Permutation::new(vec![2, 0, 1, 3]).unwrap();
        let q = p.inverse();
        for i in 0..4 {
            assert_eq!(q.apply(p.apply(i)), i);
            assert_eq!(p.apply(q.apply(i)), i);
        }
    }

    #[test]
    fn identity_is_fixed() {
        let p = Permutation::identity(3);
        assert_eq!(p.image(), &[0, 1, 2]);
        assert_eq!(p.inverse(), p);
    }
}
