//! Permutations on `{1, …, degree}`, the concrete realization of group elements.

use std::fmt;

use thiserror::Error;

/// A permutation stored as the list of images of `1, …, degree` (1-based).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u16>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("image {image} out of range for degree {degree}")]
    OutOfRange { image: usize, degree: usize },
    #[error("images do not form a bijection (value {0} repeated)")]
    NotBijective(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
}

impl Permutation {
    /// Builds a permutation from 1-based images, checking bijectivity.
    pub fn from_images(images: Vec<u16>) -> Result<Self, PermError> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &img in &images {
            let img = img as usize;
            if img < 1 || img > degree {
                return Err(PermError::OutOfRange { image: img, degree });
            }
            if seen[img - 1] {
                return Err(PermError::NotBijective(img));
            }
            seen[img - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (1..=degree as u16).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    /// Image of a 1-based point.
    pub fn apply(&self, point: u16) -> u16 {
        self.images[(point - 1) as usize]
    }

    /// `self * other` acts as "apply `other` first, then `self`".
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        let images = (1..=other.degree() as u16)
            .map(|p| self.apply(other.apply(p)))
            .collect();
        Ok(Permutation { images })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u16; self.degree()];
        for (i, &img) in self.images.iter().enumerate() {
            images[(img - 1) as usize] = (i + 1) as u16;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| img as usize == i + 1)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::from_images(vec![1, 1, 3]).is_err());
        assert!(Permutation::from_images(vec![1, 4]).is_err());
    }

    #[test]
    fn compose_and_inverse() {
        let a = Permutation::from_images(vec![2, 3, 1]).unwrap(); // (1 2 3)
        let b = a.inverse();
        assert!(a.compose(&b).unwrap().is_identity());
        let sq = a.compose(&a).unwrap();
        assert_eq!(sq, b); // 3-cycle squared is its inverse
    }
}
