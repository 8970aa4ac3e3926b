use std::fmt;

use serde::{Deserialize, Serialize};

use super::BraidError;

/// Freely reduced word in the free group on `g1..g_rank`. Letters are
/// signed generator indices: `k` is `g_k`, `-k` is `g_k^-1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<i32>,
}

pub(crate) fn reduce_into(out: &mut Vec<i32>, letters: impl IntoIterator<Item = i32>) {
    for l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
}

impl FreeWord {
    pub fn new(rank: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        if let Some(&bad) = letters.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > rank) {
            return Err(BraidError::IndexOutOfRange { index: bad, bound: rank });
        }
        Ok(FreeWord::from_letters_unchecked(rank, letters))
    }

    pub(crate) fn from_letters_unchecked(rank: usize, letters: Vec<i32>) -> Self {
        let mut out = Vec::with_capacity(letters.len());
        reduce_into(&mut out, letters);
        FreeWord { rank, letters: out }
    }

    pub fn identity(rank: usize) -> Self {
        FreeWord { rank, letters: Vec::new() }
    }

    /// The generator `g_k`, 1-based.
    pub fn generator(rank: usize, k: usize) -> Self {
        assert!(k >= 1 && k <= rank, "generator index out of range");
        FreeWord { rank, letters: vec![k as i32] }
    }

    pub fn rank(&self) -> usize {
        self.rank
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

    pub fn inverse(&self) -> FreeWord {
        FreeWord { rank: self.rank, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.letters.clone();
        reduce_into(&mut out, other.letters.iter().copied());
        FreeWord { rank: self.rank.max(other.rank), letters: out }
    }

    /// Cyclically reduced conjugate.
    pub fn cyclic_reduce(&self) -> FreeWord {
        let l = &self.letters;
        let mut a = 0;
        let mut b = l.len();
        while b - a >= 2 && l[a] == -l[b - 1] {
            a += 1;
            b -= 1;
        }
        FreeWord { rank: self.rank, letters: l[a..b].to_vec() }
    }

    /// Substitute every generator `g_k` by `images[k-1]`.
    pub fn substitute(&self, images: &[FreeWord]) -> FreeWord {
        let rank = images.first().map(|w| w.rank).unwrap_or(self.rank);
        let mut out = Vec::new();
        for &l in &self.letters {
            let img = &images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                reduce_into(&mut out, img.letters.iter().copied());
            } else {
                reduce_into(&mut out, img.letters.iter().rev().map(|x| -x));
            }
        }
        FreeWord { rank, letters: out }
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for &l in &self.letters {
            v[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        v
    }

    pub fn with_rank(mut self, rank: usize) -> FreeWord {
        self.rank = rank;
        self
    }

    /// Parse `g1*g2^-1*g3` (or `1` for the identity).
    pub fn parse(rank: usize, text: &str) -> Result<Self, BraidError> {
        let t = text.trim();
        if t.is_empty() || t == "1" {
            return Ok(FreeWord::identity(rank));
        }
        let mut letters = Vec::new();
        for tok in t.split('*') {
            let tok = tok.trim();
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b, e.trim().parse::<i32>().map_err(|_| BraidError::Parse(tok.to_string()))?),
                None => (tok, 1),
            };
            let k: i32 = base
                .trim()
                .strip_prefix('g')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| BraidError::Parse(tok.to_string()))?;
            for _ in 0..exp.unsigned_abs() {
                letters.push(k * exp.signum());
            }
        }
        FreeWord::new(rank, letters)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.letters.iter().map(|&l| if l > 0 { format!("g{}", l) } else { format!("g{}^-1", -l) }).collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeWord({})", self)
    }
}
