//! Definition-level detection of ordinary, abelian and additive k-powers.
//!
//! Block comparisons go through [`PrefixTables`], which keep cumulative
//! per-letter counts and cumulative sums so an abelian comparison costs
//! O(|alphabet|) and an additive one O(1).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed_point::FixedPointStream;
use crate::morphism::Morphism;
use crate::word::{Alphabet, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PowerKind {
    /// `w_i = w_1`
    Ordinary,
    /// `w_i` is an anagram of `w_1`
    Abelian,
    /// `w_i` has the length and sum of `w_1`
    Additive,
}

impl FromStr for PowerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ordinary" => Ok(PowerKind::Ordinary),
            "abelian" => Ok(PowerKind::Abelian),
            "additive" => Ok(PowerKind::Additive),
            other => Err(Error::Parse(format!("unknown power kind {other:?}"))),
        }
    }
}

impl fmt::Display for PowerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PowerKind::Ordinary => "ordinary",
            PowerKind::Abelian => "abelian",
            PowerKind::Additive => "additive",
        })
    }
}

/// A k-power `w_1 ⋯ w_k` with `|w_i| = period` starting at `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PowerOccurrence {
    pub start: usize,
    pub period: usize,
    pub exponent: usize,
    pub kind: PowerKind,
}

impl PowerOccurrence {
    pub fn len(&self) -> usize {
        self.period * self.exponent
    }

    pub fn is_empty(&self) -> bool {
        self.period == 0
    }

    pub fn factor<'a>(&self, w: &'a [Letter]) -> &'a [Letter] {
        &w[self.start..self.start + self.len()]
    }

    /// Re-checks the occurrence against the definitions.
    pub fn validate(&self, w: &[Letter]) -> bool {
        self.start + self.len() <= w.len()
            && is_kpower(self.factor(w), self.exponent, self.kind).unwrap_or(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub scanned_length: usize,
    pub max_period: usize,
    pub kind: PowerKind,
    pub k: usize,
    pub occurrences: Vec<PowerOccurrence>,
    pub exhaustive: bool,
}

impl ScanReport {
    pub fn is_free(&self) -> bool {
        self.occurrences.is_empty()
    }
}

fn check_exponent(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("exponent k must be at least 2, got {k}")));
    }
    Ok(())
}

/// Definitional test: `|w| > 0`, `k` divides `|w|`, and every block relates
/// to the first block as the kind requires.
pub fn is_kpower(w: &[Letter], k: usize, kind: PowerKind) -> Result<bool> {
    check_exponent(k)?;
    if w.is_empty() || !w.len().is_multiple_of(k) {
        return Ok(false);
    }
    let m = w.len() / k;
    let first = &w[..m];
    let mut sorted_first = first.to_vec();
    sorted_first.sort_unstable();
    let sum_first: Letter = first.iter().sum();
    Ok(w.chunks(m).skip(1).all(|block| match kind {
        PowerKind::Ordinary => block == first,
        PowerKind::Abelian => {
            let mut b = block.to_vec();
            b.sort_unstable();
            b == sorted_first
        }
        PowerKind::Additive => block.iter().sum::<Letter>() == sum_first,
    }))
}

/// Cumulative letter counts and sums of a word, extendable at the end.
///
/// For small alphabets the cumulative Parikh vectors are also kept packed
/// into one `u64` per position (`64 / |alphabet|` bits per letter). Every
/// field of a later position dominates the same field of an earlier one,
/// so packed differences are exactly the packed block vectors and abelian
/// block equality is a single integer comparison.
#[derive(Debug, Clone)]
pub struct PrefixTables {
    alphabet: Alphabet,
    letters: Vec<Letter>,
    // (len + 1) rows of |alphabet| cumulative counts
    counts: Vec<u32>,
    sums: Vec<i64>,
    packed: Vec<u64>,
    field_bits: u32,
    // packing stays exact while the length is below this
    packed_limit: usize,
}

impl PrefixTables {
    pub fn new(alphabet: Alphabet) -> Self {
        let sigma = alphabet.len();
        let field_bits = 64 / sigma as u32;
        let packed_limit = if field_bits >= 16 { (1usize << field_bits.min(40)) - 1 } else { 0 };
        PrefixTables {
            alphabet,
            letters: Vec::new(),
            counts: vec![0; sigma],
            sums: vec![0],
            packed: vec![0],
            field_bits,
            packed_limit,
        }
    }

    fn packs(&self) -> bool {
        self.letters.len() < self.packed_limit
    }

    pub fn from_word(alphabet: Alphabet, w: &[Letter]) -> Result<Self> {
        let mut t = PrefixTables::new(alphabet);
        t.reserve(w.len());
        for &c in w {
            t.push(c)?;
        }
        Ok(t)
    }

    /// Tables over the smallest alphabet containing `w`.
    pub fn for_word(w: &[Letter]) -> Self {
        let alphabet = Alphabet::from_letters(w.iter().copied()).unwrap_or_else(|_| Alphabet::new(vec![0]).unwrap());
        PrefixTables::from_word(alphabet, w).expect("alphabet covers the word")
    }

    pub fn reserve(&mut self, n: usize) {
        self.letters.reserve(n);
        self.counts.reserve(n * self.alphabet.len());
        self.sums.reserve(n);
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn word(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, c: Letter) -> Result<()> {
        let idx = self.alphabet.index_of(c).ok_or(Error::LetterOutsideDomain(c))?;
        self.push_index(idx);
        Ok(())
    }

    /// Appends the letter at position `idx` of the alphabet.
    pub fn push_index(&mut self, idx: usize) {
        let sigma = self.alphabet.len();
        let base = self.counts.len() - sigma;
        for j in 0..sigma {
            let v = self.counts[base + j] + u32::from(j == idx);
            self.counts.push(v);
        }
        let c = self.alphabet.letters()[idx];
        self.letters.push(c);
        self.sums.push(self.sums[self.sums.len() - 1] + c);
        if self.packs() {
            let prev = self.packed[self.packed.len() - 1];
            self.packed.push(prev + (1u64 << (self.field_bits * idx as u32)));
        } else {
            self.packed.clear();
        }
    }

    pub fn pop(&mut self) -> Option<Letter> {
        let c = self.letters.pop()?;
        self.counts.truncate(self.counts.len() - self.alphabet.len());
        self.sums.pop();
        if self.packed.len() > self.letters.len() + 1 {
            self.packed.pop();
        } else if self.packs() && self.packed.len() != self.letters.len() + 1 {
            self.rebuild_packed();
        }
        Some(c)
    }

    pub fn truncate(&mut self, n: usize) {
        while self.letters.len() > n {
            self.pop();
        }
    }

    fn rebuild_packed(&mut self) {
        let s = self.alphabet.len();
        self.packed = (0..=self.letters.len())
            .map(|row| {
                (0..s).map(|c| u64::from(self.counts[row * s + c]) << (self.field_bits * c as u32)).sum()
            })
            .collect();
    }

    /// Per-position keys whose differences identify blocks up to the kind's
    /// equivalence, when such a key exists.
    #[inline]
    fn keys(&self, kind: PowerKind) -> Option<&[u64]> {
        match kind {
            // i64 -> u64 is a bijection compatible with wrapping subtraction
            PowerKind::Additive => Some(bytemuck_i64(&self.sums)),
            PowerKind::Abelian if self.packed.len() == self.letters.len() + 1 => Some(&self.packed),
            _ => None,
        }
    }

    /// Sum of `w[i..j]`.
    #[inline]
    pub fn block_sum(&self, i: usize, j: usize) -> i64 {
        self.sums[j] - self.sums[i]
    }

    /// Count of alphabet letter `c` in `w[i..j]`.
    #[inline]
    pub fn block_count(&self, c: usize, i: usize, j: usize) -> u32 {
        let s = self.alphabet.len();
        self.counts[j * s + c] - self.counts[i * s + c]
    }

    /// Do the equal-length blocks `w[a..a+m]` and `w[b..b+m]` match?
    #[inline]
    pub fn blocks_equivalent(&self, a: usize, b: usize, m: usize, kind: PowerKind) -> bool {
        match kind {
            PowerKind::Additive => self.block_sum(a, a + m) == self.block_sum(b, b + m),
            PowerKind::Abelian => {
                let s = self.alphabet.len();
                // lengths agree, so the last letter's count is implied
                (0..s.saturating_sub(1)).all(|c| {
                    self.counts[(a + m) * s + c] + self.counts[b * s + c]
                        == self.counts[(b + m) * s + c] + self.counts[a * s + c]
                })
            }
            PowerKind::Ordinary => self.letters[a..a + m] == self.letters[b..b + m],
        }
    }

    /// Is `w[start .. start + k*period]` a k-power of the kind?
    #[inline]
    pub fn is_kpower_at(&self, start: usize, period: usize, k: usize, kind: PowerKind) -> bool {
        match self.keys(kind) {
            Some(key) => {
                let first = key[start + period].wrapping_sub(key[start]);
                (2..=k).all(|i| {
                    let b = start + i * period;
                    key[b].wrapping_sub(key[b - period]) == first
                })
            }
            None => (1..k).all(|i| self.blocks_equivalent(start, start + i * period, period, kind)),
        }
    }

    /// Smallest period `m` such that the suffix of length `k*m` is a
    /// k-power of the kind.
    pub fn suffix_kpower(&self, k: usize, kind: PowerKind) -> Option<usize> {
        let n = self.len();
        match self.keys(kind) {
            Some(key) => {
                let end = key[n];
                (1..=n / k).find(|&m| {
                    // compare against the trailing block, walking backwards
                    let last = end.wrapping_sub(key[n - m]);
                    (2..=k).all(|i| key[n - (i - 1) * m].wrapping_sub(key[n - i * m]) == last)
                })
            }
            None => (1..=n / k).find(|&m| {
                let last = n - m;
                (1..k).all(|i| self.blocks_equivalent(last - i * m, last, m, kind))
            }),
        }
    }
}

fn bytemuck_i64(v: &[i64]) -> &[u64] {
    // SAFETY: i64 and u64 have identical size, alignment and validity.
    unsafe { std::slice::from_raw_parts(v.as_ptr().cast::<u64>(), v.len()) }
}

/// Least occurrence in (start, period) order with `period <= max_period`.
pub fn find_kpower(
    w: &[Letter],
    k: usize,
    kind: PowerKind,
    max_period: Option<usize>,
) -> Result<Option<PowerOccurrence>> {
    check_exponent(k)?;
    let t = PrefixTables::for_word(w);
    Ok(find_in_tables(&t, 0..w.len(), k, kind, max_period.unwrap_or(usize::MAX), 1).pop())
}

/// Occurrences starting in `starts`, in (start, period) order, at most `cap`.
fn find_in_tables(
    t: &PrefixTables,
    starts: std::ops::Range<usize>,
    k: usize,
    kind: PowerKind,
    max_period: usize,
    cap: usize,
) -> Vec<PowerOccurrence> {
    let n = t.len();
    let mut out = Vec::new();
    for start in starts {
        let top = ((n - start) / k).min(max_period);
        for period in 1..=top {
            if t.is_kpower_at(start, period, k, kind) {
                out.push(PowerOccurrence { start, period, exponent: k, kind });
                if out.len() >= cap {
                    return out;
                }
            }
        }
    }
    out
}

/// Incremental form of [`find_kpower`]: the smallest `m` such that the
/// suffix of length `k*m` of the tabled word is a k-power.
pub fn suffix_kpower(w: &PrefixTables, k: usize, kind: PowerKind) -> Result<Option<usize>> {
    check_exponent(k)?;
    Ok(w.suffix_kpower(k, kind))
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    /// Largest block length examined; `None` means all, i.e. `n / k`.
    pub max_period: Option<usize>,
    /// Stop after this many occurrences (the report is then not exhaustive).
    pub max_occurrences: usize,
    /// Worker threads; start positions are split into contiguous ranges.
    pub jobs: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { max_period: None, max_occurrences: 64, jobs: 1 }
    }
}

/// Scans a word for k-powers of the given kind.
pub fn scan_word(w: &[Letter], k: usize, kind: PowerKind, opts: ScanOptions) -> Result<ScanReport> {
    check_exponent(k)?;
    let t = PrefixTables::for_word(w);
    Ok(scan_tables(&t, k, kind, opts))
}

fn scan_tables(t: &PrefixTables, k: usize, kind: PowerKind, opts: ScanOptions) -> ScanReport {
    let n = t.len();
    let max_period = opts.max_period.unwrap_or(n / k).min(n / k);
    let cap = opts.max_occurrences.max(1);
    let jobs = opts.jobs.max(1);
    let mut occurrences = if jobs == 1 || n < 4096 {
        find_in_tables(t, 0..n, k, kind, max_period, cap)
    } else {
        // Work per start shrinks linearly, so balance ranges by area.
        let bounds: Vec<usize> = (0..=jobs)
            .map(|i| {
                let frac = 1.0 - ((jobs - i) as f64 / jobs as f64).sqrt();
                ((frac * n as f64) as usize).min(n)
            })
            .collect();
        std::thread::scope(|s| {
            let handles: Vec<_> = bounds
                .windows(2)
                .map(|r| {
                    let range = r[0]..r[1];
                    s.spawn(move || find_in_tables(t, range, k, kind, max_period, cap))
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("scan worker")).collect()
        })
    };
    occurrences.sort();
    let capped = occurrences.len() >= cap;
    occurrences.truncate(cap);
    ScanReport { scanned_length: n, max_period, kind, k, occurrences, exhaustive: !capped }
}

/// Scans the length-`n` prefix of `f^ω(seed)`.
pub fn scan_fixed_point(
    f: &Morphism,
    seed: Letter,
    k: usize,
    kind: PowerKind,
    n: usize,
    opts: ScanOptions,
) -> Result<ScanReport> {
    check_exponent(k)?;
    let mut s = FixedPointStream::new(f.clone(), seed)?;
    let t = PrefixTables::from_word(f.domain().clone(), s.prefix_slice(n))?;
    Ok(scan_tables(&t, k, kind, opts))
}

/// Letterwise substitution.
pub fn relabel(w: &[Letter], mapping: &BTreeMap<Letter, Letter>) -> Result<Word> {
    w.iter()
        .map(|c| mapping.get(c).copied().ok_or(Error::UnmappedLetter(*c)))
        .collect()
}
