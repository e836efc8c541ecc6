//! Integer alphabets, finite words and their (length, sum) vectors.

use std::fmt;
use std::ops::{Add, AddAssign, Deref, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Letter = i64;

/// A nonempty, strictly increasing set of integer letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Letter>", into = "Vec<Letter>")]
pub struct Alphabet(Vec<Letter>);

impl Alphabet {
    /// Builds an alphabet from letters given in strictly increasing order.
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        if letters.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidAlphabet(format!(
                "letters must be strictly increasing: {letters:?}"
            )));
        }
        Ok(Alphabet(letters))
    }

    /// Sorts and deduplicates arbitrary letters.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Result<Self> {
        let mut v: Vec<Letter> = letters.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Alphabet::new(v)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: Letter) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    /// Position of `c` in alphabet order.
    pub fn index_of(&self, c: Letter) -> Option<usize> {
        self.0.binary_search(&c).ok()
    }

    pub fn is_compact(&self) -> bool {
        self.0.iter().all(|c| (0..=9).contains(c))
    }
}

impl TryFrom<Vec<Letter>> for Alphabet {
    type Error = Error;
    fn try_from(v: Vec<Letter>) -> Result<Self> {
        Alphabet::new(v)
    }
}

impl From<Alphabet> for Vec<Letter> {
    fn from(a: Alphabet) -> Self {
        a.0
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    /// Accepts `0,1,2`, `[0,1,2]` or a compact digit string `012`.
    fn from_str(s: &str) -> Result<Self> {
        let w: Word = s.parse()?;
        Alphabet::new(w.0)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A finite word over the integers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, c: Letter) {
        self.0.push(c);
    }

    pub fn extend_from_slice(&mut self, s: &[Letter]) {
        self.0.extend_from_slice(s);
    }

    pub fn psi(&self) -> PsiVector {
        psi(&self.0)
    }

    pub fn reversal(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn is_palindrome(&self) -> bool {
        is_palindrome(&self.0)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Smallest alphabet containing every letter of the word, if nonempty.
    pub fn alphabet(&self) -> Option<Alphabet> {
        if self.0.is_empty() {
            None
        } else {
            Alphabet::from_letters(self.0.iter().copied()).ok()
        }
    }

    pub fn is_over(&self, alphabet: &Alphabet) -> bool {
        self.0.iter().all(|&c| alphabet.contains(c))
    }
}

impl Deref for Word {
    type Target = [Letter];
    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses either a compact digit string (`00101`) or a bracketed,
    /// comma-separated integer list (`[0,3,3,1]`). Bare comma lists are
    /// accepted as well.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = match (t.strip_prefix('['), t.ends_with(']')) {
            (Some(rest), true) => Some(&rest[..rest.len() - 1]),
            (Some(_), false) => return Err(Error::Parse(format!("unterminated word literal {t:?}"))),
            (None, _) if t.contains(',') => Some(t),
            _ => None,
        };
        match inner {
            Some(list) => {
                let list = list.trim();
                if list.is_empty() {
                    return Ok(Word::empty());
                }
                list.split(',')
                    .map(|p| {
                        p.trim()
                            .parse::<Letter>()
                            .map_err(|e| Error::Parse(format!("bad letter {p:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(Word)
            }
            None => t
                .chars()
                .map(|ch| {
                    ch.to_digit(10)
                        .map(Letter::from)
                        .ok_or_else(|| Error::Parse(format!("bad letter {ch:?} in {t:?}")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Word),
        }
    }
}

impl fmt::Display for Word {
    /// Compact digits when every letter is in 0..=9, bracketed list otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|c| (0..=9).contains(c)) {
            for c in &self.0 {
                write!(f, "{c}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The pair (|w|, Σw).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PsiVector {
    pub length: i64,
    pub sum: i64,
}

impl PsiVector {
    pub const ZERO: PsiVector = PsiVector { length: 0, sum: 0 };

    pub fn new(length: i64, sum: i64) -> Self {
        PsiVector { length, sum }
    }

    pub fn as_array(self) -> [i64; 2] {
        [self.length, self.sum]
    }
}

impl From<[i64; 2]> for PsiVector {
    fn from(v: [i64; 2]) -> Self {
        PsiVector::new(v[0], v[1])
    }
}

impl Add for PsiVector {
    type Output = PsiVector;
    fn add(self, o: PsiVector) -> PsiVector {
        PsiVector::new(self.length + o.length, self.sum + o.sum)
    }
}

impl AddAssign for PsiVector {
    fn add_assign(&mut self, o: PsiVector) {
        self.length += o.length;
        self.sum += o.sum;
    }
}

impl Sub for PsiVector {
    type Output = PsiVector;
    fn sub(self, o: PsiVector) -> PsiVector {
        PsiVector::new(self.length - o.length, self.sum - o.sum)
    }
}

impl Neg for PsiVector {
    type Output = PsiVector;
    fn neg(self) -> PsiVector {
        PsiVector::new(-self.length, -self.sum)
    }
}

impl fmt::Display for PsiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.length, self.sum)
    }
}

pub fn psi(w: &[Letter]) -> PsiVector {
    PsiVector::new(w.len() as i64, w.iter().sum())
}

pub fn reversal(w: &[Letter]) -> Word {
    w.iter().rev().copied().collect()
}

pub fn is_palindrome(w: &[Letter]) -> bool {
    w.iter().eq(w.iter().rev())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(&[]), PsiVector::ZERO);
        assert_eq!(w("00001").psi(), PsiVector::new(5, 1));
        assert_eq!(w("10001").psi(), PsiVector::new(5, 2));
    }

    #[test]
    fn palindromes() {
        assert!(Word::empty().is_palindrome());
        assert!(w("10001").is_palindrome());
        assert!(!w("0011").is_palindrome());
        assert_eq!(w("0011").reversal(), w("1100"));
    }

    #[test]
    fn word_formats() {
        assert_eq!(w("0133").letters(), &[0, 1, 3, 3]);
        assert_eq!(w("[0,3,3,1]").letters(), &[0, 3, 3, 1]);
        assert_eq!(w("[5, 7, 10]").to_string(), "[5,7,10]");
        assert_eq!(w("[-1,2]").letters(), &[-1, 2]);
        assert_eq!(w("0101").to_string(), "0101");
        assert_eq!(w("").len(), 0);
        assert_eq!(w("[]").len(), 0);
        assert!("01a".parse::<Word>().is_err());
        assert!("[0,1".parse::<Word>().is_err());
    }

    #[test]
    fn alphabet_invariants() {
        assert!(Alphabet::new(vec![]).is_err());
        assert!(Alphabet::new(vec![1, 0]).is_err());
        assert!(Alphabet::new(vec![0, 0]).is_err());
        let a: Alphabet = "0,1,3,4".parse().unwrap();
        assert_eq!(a.letters(), &[0, 1, 3, 4]);
        assert_eq!(a.index_of(3), Some(2));
        assert_eq!("012".parse::<Alphabet>().unwrap().len(), 3);
    }

    proptest::proptest! {
        #[test]
        fn psi_is_additive(u in proptest::collection::vec(-5i64..6, 0..20),
                           v in proptest::collection::vec(-5i64..6, 0..20)) {
            let uv = Word::from(u.clone()).concat(&Word::from(v.clone()));
            proptest::prop_assert_eq!(uv.psi(), psi(&u) + psi(&v));
        }

        #[test]
        fn reversal_is_involution(u in proptest::collection::vec(0i64..4, 0..30)) {
            let w = Word::from(u);
            proptest::prop_assert_eq!(w.reversal().reversal(), w);
        }

        #[test]
        fn display_parse_roundtrip(u in proptest::collection::vec(-20i64..20, 0..12)) {
            let w = Word::from(u);
            proptest::prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        }
    }
}
