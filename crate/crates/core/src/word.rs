//! Words over a finite generating set.
//!
//! A [`Word`] stores generator indices; symbol names live on the owning
//! presentation. Letters are ordered by generator index, with the positive
//! letter before its inverse, and words are compared length-first.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// One letter: a generator raised to the power ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(generator: usize) -> Self {
        Letter { generator: generator as u32, inverse: false }
    }

    pub fn neg(generator: usize) -> Self {
        Letter { generator: generator as u32, inverse: true }
    }

    pub fn new(generator: usize, exponent: i8) -> Self {
        debug_assert!(exponent == 1 || exponent == -1);
        Letter { generator: generator as u32, inverse: exponent < 0 }
    }

    #[inline]
    pub fn gen(self) -> usize {
        self.generator as usize
    }

    #[inline]
    pub fn exponent(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    /// Dense index in `0..2 * generator_count`: `2g` for `g`, `2g + 1` for `g⁻¹`.
    #[inline]
    pub fn index(self) -> usize {
        2 * self.generator as usize + self.inverse as usize
    }

    #[inline]
    pub fn from_index(index: usize) -> Self {
        Letter { generator: (index / 2) as u32, inverse: index % 2 == 1 }
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index().cmp(&other.index())
    }
}

/// A finite sequence of letters. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Word(letters.into_iter().collect())
    }

    /// Builds a word from `(generator, exponent)` pairs with exponents ±1.
    pub fn from_pairs(pairs: &[(usize, i8)]) -> Self {
        Word(pairs.iter().map(|&(g, e)| Letter::new(g, e)).collect())
    }

    /// `g^n` for any integer `n`.
    pub fn power(generator: usize, n: i64) -> Self {
        let letter = if n >= 0 { Letter::pos(generator) } else { Letter::neg(generator) };
        Word(vec![letter; n.unsigned_abs() as usize])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    /// Largest generator index used, plus one.
    pub fn generator_bound(&self) -> usize {
        self.0.iter().map(|l| l.gen() + 1).max().unwrap_or(0)
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inv())
    }

    /// Freely reduced and first letter not inverse to the last.
    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(a), Some(b)) if self.len() > 1 => *a != b.inv(),
                _ => true,
            }
    }

    /// Free reduction followed by stripping inverse pairs from both ends.
    pub fn cyclic_reduce(&self) -> Word {
        let reduced = self.free_reduce().0;
        let (mut lo, mut hi) = (0, reduced.len());
        while hi - lo >= 2 && reduced[lo] == reduced[hi - 1].inv() {
            lo += 1;
            hi -= 1;
        }
        Word(reduced[lo..hi].to_vec())
    }

    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = k % self.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Least rotation of the word or of its inverse, after cyclic reduction.
    ///
    /// Two words have the same canonical cyclic form exactly when their
    /// cyclic reductions are cyclic permutations of each other or of each
    /// other's inverses; such words have the same normal closure.
    pub fn cyclic_canonical(&self) -> Word {
        let base = self.cyclic_reduce();
        Self::least_rotation_pair(&base)
    }

    /// Least rotation of `w` or `w⁻¹` without any reduction.
    pub fn least_rotation_pair(w: &Word) -> Word {
        if w.is_empty() {
            return Word::empty();
        }
        let inv = w.inverse();
        let mut best = w.clone();
        for candidate in [w, &inv] {
            for k in 0..candidate.len() {
                let r = candidate.rotate(k);
                if r.0 < best.0 {
                    best = r;
                }
            }
        }
        best
    }

    /// Exponent sum of each generator, for `generator_count` generators.
    pub fn exponent_vector(&self, generator_count: usize) -> Vec<i64> {
        let mut v = vec![0i64; generator_count];
        for l in &self.0 {
            v[l.gen()] += l.exponent() as i64;
        }
        v
    }

    /// Substitutes every letter by a word, inverting images of inverse letters.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for l in &self.0 {
            let image = &images[l.gen()];
            if l.inverse {
                out.extend(image.0.iter().rev().map(|x| x.inv()));
            } else {
                out.extend_from_slice(&image.0);
            }
        }
        Word(out)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex order: shorter words first, then lexicographic by letter.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "g{}", l.generator)?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// All freely reduced words of exactly `len` letters over `generator_count`
/// generators, in shortlex order.
pub fn reduced_words(generator_count: usize, len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fn rec(n: usize, len: usize, current: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if current.len() == len {
            out.push(Word(current.clone()));
            return;
        }
        for i in 0..2 * n {
            let l = Letter::from_index(i);
            if current.last() == Some(&l.inv()) {
                continue;
            }
            current.push(l);
            rec(n, len, current, out);
            current.pop();
        }
    }
    rec(generator_count, len, &mut current, &mut out);
    out
}
