//! Braid words, the Artin action on free groups, and free-group words.
//!
//! The action of `s_i` is
//! `g_i -> g_{i+1}`, `g_{i+1} -> g_{i+1} g_i g_{i+1}^-1`, other generators fixed;
//! `S_i` acts by the inverse automorphism. A word acts letter by letter from
//! left to right, so in `compose(a, b)` the braid `a` is performed first.

mod free;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use free::FreeWord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("letter index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: i32, bound: usize },
    #[error("cannot parse `{0}`")]
    Parse(String),
}

/// Word in the Artin generators of `B_n`. Letter `i` is `s_i`, `-i` is `s_i^-1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        let bound = strands.saturating_sub(1);
        if let Some(&bad) = letters.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > bound) {
            return Err(BraidError::IndexOutOfRange { index: bad, bound });
        }
        Ok(BraidWord { strands: strands.max(1), letters })
    }

    pub fn identity(strands: usize) -> Self {
        BraidWord { strands: strands.max(1), letters: Vec::new() }
    }

    /// `s_1 s_2 ... s_{n-1}`.
    pub fn full_cycle(strands: usize) -> Self {
        BraidWord::new(strands, (1..strands as i32).collect()).unwrap()
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.signum() as i64).sum()
    }

    /// Parse `s1 s3 S2` (upper case for inverse letters); empty text or `1`
    /// is the identity.
    pub fn parse(strands: usize, text: &str) -> Result<Self, BraidError> {
        let t = text.trim();
        if t.is_empty() || t == "1" {
            return Ok(BraidWord::identity(strands));
        }
        let mut letters = Vec::new();
        for tok in t.split_whitespace() {
            let (sign, rest) = if let Some(r) = tok.strip_prefix('s') {
                (1, r)
            } else if let Some(r) = tok.strip_prefix('S') {
                (-1, r)
            } else {
                return Err(BraidError::Parse(tok.to_string()));
            };
            let i: i32 = rest.parse().map_err(|_| BraidError::Parse(tok.to_string()))?;
            letters.push(sign * i);
        }
        BraidWord::new(strands, letters)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.letters.iter().map(|&l| if l > 0 { format!("s{}", l) } else { format!("S{}", -l) }).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BraidWord[{}]({})", self.strands, self)
    }
}

/// `a` followed by `b`.
pub fn braid_compose(a: &BraidWord, b: &BraidWord) -> Result<BraidWord, BraidError> {
    if a.strands != b.strands {
        return Err(BraidError::RankMismatch { left: a.strands, right: b.strands });
    }
    let mut letters = a.letters.clone();
    letters.extend_from_slice(&b.letters);
    Ok(BraidWord { strands: a.strands, letters })
}

pub fn braid_invert(b: &BraidWord) -> BraidWord {
    BraidWord { strands: b.strands, letters: b.letters.iter().rev().map(|l| -l).collect() }
}

/// Image of one letter's automorphism on every generator.
fn letter_images(n: usize, letter: i32) -> Vec<FreeWord> {
    let i = letter.unsigned_abs() as i32;
    let j = i + 1;
    (1..=n as i32)
        .map(|k| {
            let letters = if letter > 0 {
                if k == i {
                    vec![j]
                } else if k == j {
                    vec![j, i, -j]
                } else {
                    vec![k]
                }
            } else if k == j {
                vec![i]
            } else if k == i {
                vec![-i, j, i]
            } else {
                vec![k]
            };
            FreeWord::from_letters_unchecked(n, letters)
        })
        .collect()
}

/// Images of `g_1..g_n` under the automorphism induced by `b`.
pub fn artin_images(b: &BraidWord) -> Vec<FreeWord> {
    let n = b.strands;
    let mut imgs: Vec<FreeWord> = (1..=n).map(|k| FreeWord::generator(n, k)).collect();
    for &l in &b.letters {
        let step = letter_images(n, l);
        imgs = imgs.iter().map(|w| w.substitute(&step)).collect();
    }
    imgs
}

/// Apply the Artin action of `b` to `w`.
pub fn artin_act(b: &BraidWord, w: &FreeWord) -> Result<FreeWord, BraidError> {
    if b.strands != w.rank() {
        return Err(BraidError::RankMismatch { left: b.strands, right: w.rank() });
    }
    Ok(w.substitute(&artin_images(b)))
}

/// Whether two braids induce the same automorphism (equivalently, are equal
/// in `B_n`, the action being faithful).
pub fn artin_equal(a: &BraidWord, b: &BraidWord) -> bool {
    a.strands == b.strands && artin_images(a) == artin_images(b)
}

/// Image in the symmetric group: `perm[p]` is the final position (0-based)
/// of the strand starting at position `p`.
pub fn braid_permutation(b: &BraidWord) -> Vec<usize> {
    let n = b.strands;
    // occupant[q] = strand currently at position q
    let mut occupant: Vec<usize> = (0..n).collect();
    for &l in &b.letters {
        let i = l.unsigned_abs() as usize - 1;
        occupant.swap(i, i + 1);
    }
    let mut perm = vec![0; n];
    for (q, &s) in occupant.iter().enumerate() {
        perm[s] = q;
    }
    perm
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, k: usize) -> FreeWord {
        FreeWord::generator(n, k)
    }

    #[test]
    fn single_letter_images() {
        let s1 = BraidWord::parse(2, "s1").unwrap();
        assert_eq!(artin_act(&s1, &g(2, 1)).unwrap(), g(2, 2));
        assert_eq!(artin_act(&s1, &g(2, 2)).unwrap().to_string(), "g2*g1*g2^-1");
        let s1 = BraidWord::parse(4, "s1").unwrap();
        assert_eq!(artin_act(&s1, &g(4, 3)).unwrap(), g(4, 3));
    }

    #[test]
    fn four_letter_word_images() {
        // letter-by-letter evaluation of the verbatim rule
        let b = BraidWord::parse(4, "s1 s3 s2 s1").unwrap();
        let imgs: Vec<String> = artin_images(&b).iter().map(|w| w.to_string()).collect();
        assert_eq!(imgs, ["g3", "g3*g2*g3^-1", "g4", "g4*g3*g2*g1*g2^-1*g3^-1*g4^-1"]);
    }

    #[test]
    fn inverse_cancels() {
        let b = BraidWord::parse(2, "s1 S1").unwrap();
        assert!(artin_equal(&b, &BraidWord::identity(2)));
        let w = BraidWord::parse(4, "s1 s3 s2 s1").unwrap();
        assert_eq!(braid_invert(&w).to_string(), "S1 S2 S3 S1");
    }

    #[test]
    fn braid_relation() {
        let a = BraidWord::parse(3, "s1 s2 s1").unwrap();
        let b = BraidWord::parse(3, "s2 s1 s2").unwrap();
        assert!(artin_equal(&a, &b));
        assert!(!artin_equal(&a, &BraidWord::parse(3, "s1 s1 s2").unwrap()));
    }

    #[test]
    fn permutations() {
        assert_eq!(braid_permutation(&BraidWord::parse(2, "s1").unwrap()), vec![1, 0]);
        assert_eq!(braid_permutation(&BraidWord::identity(3)), vec![0, 1, 2]);
        // strands 1 -> 3 -> 4 -> 1, strand 2 fixed
        assert_eq!(braid_permutation(&BraidWord::parse(4, "s1 s3 s2 s1").unwrap()), vec![2, 1, 3, 0]);
    }

    #[test]
    fn mismatch_and_parse_errors() {
        assert!(artin_act(&BraidWord::identity(3), &g(2, 1)).is_err());
        assert!(BraidWord::parse(3, "s3").is_err());
        assert!(BraidWord::parse(3, "t1").is_err());
        assert!(braid_compose(&BraidWord::identity(2), &BraidWord::identity(3)).is_err());
    }
}
