//! Palindromic tree (eertree) with an undo journal.
//!
//! One node per distinct nonempty palindromic factor plus two roots, of
//! lengths -1 and 0. Appending a letter creates at most one node and one
//! edge, so the journal records are O(1) and undo restores the previous
//! state exactly. Edges hang off their source node as a singly linked list
//! in a shared arena; because edges are only ever removed in reverse order
//! of creation, the arena is a stack.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed_point::FixedPointStream;
use crate::morphism::Morphism;
use crate::word::{Letter, Word};

const NONE: u32 = u32::MAX;
const IMAGINARY_ROOT: u32 = 0;
const EMPTY_ROOT: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PalNode {
    pub length: i32,
    pub suffix_link: u32,
    /// Word length at the moment the palindrome first appeared.
    pub first_occurrence_end: usize,
    first_edge: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Edge {
    letter: Letter,
    target: u32,
    next: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct UndoRecord {
    prev_last: u32,
    // source node of the edge written for a new palindrome, or NONE
    created_under: u32,
}

#[derive(Debug, Clone)]
pub struct EerTree {
    nodes: Vec<PalNode>,
    edges: Vec<Edge>,
    last: u32,
    word: Vec<Letter>,
    journal: Vec<UndoRecord>,
}

impl Default for EerTree {
    fn default() -> Self {
        Self::new()
    }
}

impl EerTree {
    pub fn new() -> Self {
        let root = |length| PalNode { length, suffix_link: IMAGINARY_ROOT, first_occurrence_end: 0, first_edge: NONE };
        EerTree {
            nodes: vec![root(-1), root(0)],
            edges: Vec::new(),
            last: EMPTY_ROOT,
            word: Vec::new(),
            journal: Vec::new(),
        }
    }

    pub fn with_capacity(n: usize) -> Self {
        let mut t = Self::new();
        t.nodes.reserve(n);
        t.edges.reserve(n);
        t.word.reserve(n);
        t.journal.reserve(n);
        t
    }

    pub fn from_word(w: &[Letter]) -> Self {
        let mut t = Self::with_capacity(w.len());
        for &c in w {
            t.add_letter(c);
        }
        t
    }

    fn edge(&self, node: u32, c: Letter) -> Option<u32> {
        let mut e = self.nodes[node as usize].first_edge;
        while e != NONE {
            let edge = &self.edges[e as usize];
            if edge.letter == c {
                return Some(edge.target);
            }
            e = edge.next;
        }
        None
    }

    /// Longest palindromic suffix `v` (walking links from `from`) such that
    /// `c v c` is a suffix of the current word.
    fn extendable(&self, mut from: u32, c: Letter) -> u32 {
        let pos = self.word.len() - 1;
        loop {
            let len = self.nodes[from as usize].length;
            let mirror = pos as i64 - 1 - len as i64;
            if mirror >= 0 && self.word[mirror as usize] == c {
                return from;
            }
            from = self.nodes[from as usize].suffix_link;
        }
    }

    /// Appends `c`; returns whether a new palindrome appeared, which is the
    /// case iff the new longest palindromic suffix is unioccurrent.
    pub fn add_letter(&mut self, c: Letter) -> bool {
        self.word.push(c);
        let parent = self.extendable(self.last, c);
        if let Some(existing) = self.edge(parent, c) {
            self.journal.push(UndoRecord { prev_last: self.last, created_under: NONE });
            self.last = existing;
            return false;
        }
        let length = self.nodes[parent as usize].length + 2;
        let suffix_link = if length == 1 {
            EMPTY_ROOT
        } else {
            let p = self.extendable(self.nodes[parent as usize].suffix_link, c);
            self.edge(p, c).expect("suffix palindrome already exists")
        };
        let id = self.nodes.len() as u32;
        let eid = self.edges.len() as u32;
        self.edges.push(Edge { letter: c, target: id, next: self.nodes[parent as usize].first_edge });
        self.nodes[parent as usize].first_edge = eid;
        self.nodes.push(PalNode {
            length,
            suffix_link,
            first_occurrence_end: self.word.len(),
            first_edge: NONE,
        });
        self.journal.push(UndoRecord { prev_last: self.last, created_under: parent });
        self.last = id;
        true
    }

    /// Reverts the most recent [`add_letter`](Self::add_letter).
    pub fn undo(&mut self) -> Result<()> {
        let rec = self
            .journal
            .pop()
            .ok_or_else(|| Error::State("undo on an empty journal".into()))?;
        self.word.pop();
        if rec.created_under != NONE {
            let node = self.nodes.pop().expect("created node");
            debug_assert_eq!(node.first_edge, NONE);
            let edge = self.edges.pop().expect("created edge");
            self.nodes[rec.created_under as usize].first_edge = edge.next;
        }
        self.last = rec.prev_last;
        Ok(())
    }

    /// Number of distinct nonempty palindromic factors.
    pub fn palindrome_count(&self) -> usize {
        self.nodes.len() - 2
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn nodes(&self) -> &[PalNode] {
        &self.nodes
    }

    pub fn longest_palindromic_suffix_len(&self) -> usize {
        self.nodes[self.last as usize].length.max(0) as usize
    }

    pub fn longest_palindromic_suffix(&self) -> Result<Word> {
        if self.word.is_empty() {
            return Err(Error::State("empty word has no nonempty palindromic suffix".into()));
        }
        let n = self.word.len();
        Ok(Word::from(&self.word[n - self.longest_palindromic_suffix_len()..]))
    }

    /// All distinct nonempty palindromes, in creation order.
    pub fn palindromes(&self) -> Vec<Word> {
        self.nodes[2..]
            .iter()
            .map(|n| {
                let end = n.first_occurrence_end;
                Word::from(&self.word[end - n.length as usize..end])
            })
            .collect()
    }

    /// Observable state used to compare trees: node lengths, links and
    /// sorted edges, plus `last` and the word.
    pub fn snapshot(&self) -> TreeSnapshot {
        let edges = self
            .nodes
            .iter()
            .map(|n| {
                let mut v = Vec::new();
                let mut e = n.first_edge;
                while e != NONE {
                    let edge = self.edges[e as usize];
                    v.push((edge.letter, edge.target));
                    e = edge.next;
                }
                v.sort_unstable();
                v
            })
            .collect();
        TreeSnapshot {
            lengths: self.nodes.iter().map(|n| n.length).collect(),
            links: self.nodes.iter().map(|n| n.suffix_link).collect(),
            edges,
            last: self.last,
            word: self.word.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSnapshot {
    pub lengths: Vec<i32>,
    pub links: Vec<u32>,
    pub edges: Vec<Vec<(Letter, u32)>>,
    pub last: u32,
    pub word: Vec<Letter>,
}

/// Whether the longest palindromic suffix of `w` occurs only once in `w`.
pub fn has_unioccurrent_palindromic_suffix(w: &[Letter]) -> Result<bool> {
    let (&c, head) = w
        .split_last()
        .ok_or_else(|| Error::State("empty word".into()))?;
    let mut t = EerTree::from_word(head);
    Ok(t.add_letter(c))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RichnessReport {
    pub length: usize,
    pub rich: bool,
    /// Least prefix length whose last letter created no new palindrome.
    pub first_failure: Option<usize>,
    pub palindrome_count: usize,
}

fn richness_of<I: IntoIterator<Item = Letter>>(letters: I, capacity: usize) -> RichnessReport {
    let mut t = EerTree::with_capacity(capacity);
    let mut first_failure = None;
    for c in letters {
        if !t.add_letter(c) && first_failure.is_none() {
            first_failure = Some(t.len());
        }
    }
    RichnessReport {
        length: t.len(),
        rich: first_failure.is_none(),
        first_failure,
        palindrome_count: t.palindrome_count(),
    }
}

pub fn is_rich(w: &[Letter]) -> RichnessReport {
    richness_of(w.iter().copied(), w.len())
}

/// Richness of the length-`n` prefix of `f^ω(seed)`.
pub fn stream_richness(f: &Morphism, seed: Letter, n: usize) -> Result<RichnessReport> {
    let mut s = FixedPointStream::new(f.clone(), seed)?;
    let prefix = s.prefix_slice(n);
    Ok(richness_of(prefix.iter().copied(), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::is_palindrome;
    use std::collections::BTreeSet;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn naive_palindromes(w: &[Letter]) -> BTreeSet<Vec<Letter>> {
        let mut set = BTreeSet::new();
        for i in 0..w.len() {
            for j in i + 1..=w.len() {
                if is_palindrome(&w[i..j]) {
                    set.insert(w[i..j].to_vec());
                }
            }
        }
        set
    }

    fn occurrences(w: &[Letter], u: &[Letter]) -> usize {
        w.windows(u.len()).filter(|x| *x == u).count()
    }

    #[test]
    fn add_letter_examples() {
        let mut t = EerTree::new();
        assert!(t.add_letter(0));
        let mut t = EerTree::new();
        let adds: Vec<bool> = w("011011").iter().map(|&c| t.add_letter(c)).collect();
        assert_eq!(adds, vec![true; 6]);
        let mut got: Vec<String> = t.palindromes().iter().map(|p| p.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["0", "0110", "1", "101", "11", "11011"]);
        let mut t = EerTree::new();
        assert!(w("0101").iter().all(|&c| t.add_letter(c)));
    }

    #[test]
    fn counts_and_suffixes() {
        assert_eq!(EerTree::new().palindrome_count(), 0);
        assert_eq!(EerTree::from_word(&w("011011")).palindrome_count(), 6);
        assert_eq!(EerTree::from_word(&w("0102")).palindrome_count(), 4);
        let lps = |s: &str| EerTree::from_word(&w(s)).longest_palindromic_suffix().unwrap().to_string();
        assert_eq!(lps("011011"), "11011");
        assert_eq!(lps("0"), "0");
        assert_eq!(lps("0102"), "2");
        assert!(EerTree::new().longest_palindromic_suffix().is_err());
    }

    #[test]
    fn unioccurrence() {
        assert!(has_unioccurrent_palindromic_suffix(&w("011011")).unwrap());
        assert!(has_unioccurrent_palindromic_suffix(&w("0")).unwrap());
        assert!(has_unioccurrent_palindromic_suffix(&w("11")).unwrap());
        // 010101: longest palindromic suffix 10101 occurs once
        assert!(has_unioccurrent_palindromic_suffix(&w("010101")).unwrap());
        // 0120: longest palindromic suffix 0 already occurred
        assert!(!has_unioccurrent_palindromic_suffix(&w("0120")).unwrap());
        assert!(has_unioccurrent_palindromic_suffix(&[]).is_err());
    }

    #[test]
    fn unioccurrence_matches_occurrence_count() {
        for n in 1..=10u32 {
            for bits in 0..(1u32 << n) {
                let word: Vec<Letter> = (0..n).map(|i| ((bits >> i) & 1) as Letter).collect();
                let t = EerTree::from_word(&word);
                let s = t.longest_palindromic_suffix().unwrap();
                let unique = occurrences(&word, &s) == 1;
                assert_eq!(has_unioccurrent_palindromic_suffix(&word).unwrap(), unique, "{word:?}");
            }
        }
    }

    #[test]
    fn undo_examples() {
        let mut t = EerTree::new();
        t.add_letter(0);
        t.undo().unwrap();
        assert_eq!(t.snapshot(), EerTree::new().snapshot());
        assert_eq!(t.palindrome_count(), 0);
        assert!(t.undo().is_err());

        let mut t = EerTree::from_word(&w("011"));
        t.undo().unwrap();
        t.add_letter(0);
        assert_eq!(t.snapshot(), EerTree::from_word(&w("010")).snapshot());
    }

    #[test]
    fn richness_examples() {
        for n in 0..=2 {
            for bits in 0..(1u32 << n) {
                let word: Vec<Letter> = (0..n).map(|i| ((bits >> i) & 1) as Letter).collect();
                assert!(is_rich(&word).rich);
            }
        }
        assert!(is_rich(&w("011011")).rich);
        // (0011)^2 has eight palindromes and is rich
        assert!(is_rich(&w("00110011")).rich);
        // shortest non-rich binary words have length 8
        let r = is_rich(&w("00101100"));
        assert!(!r.rich);
        assert_eq!(r.first_failure, Some(8));
        assert_eq!(r.palindrome_count, 7);
    }

    #[test]
    fn counts_match_naive_enumeration() {
        for n in 0..=12u32 {
            for bits in 0..(1u32 << n) {
                let word: Vec<Letter> = (0..n).map(|i| ((bits >> i) & 1) as Letter).collect();
                let t = EerTree::from_word(&word);
                assert_eq!(t.palindrome_count(), naive_palindromes(&word).len());
                assert!(t.palindrome_count() <= word.len());
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn undo_matches_rebuild(ops in proptest::collection::vec((0i64..3, proptest::bool::weighted(0.35)), 0..300)) {
            let mut t = EerTree::new();
            for (c, undo) in ops {
                if undo && !t.is_empty() {
                    t.undo().unwrap();
                } else {
                    t.add_letter(c);
                }
            }
            let fresh = EerTree::from_word(t.word());
            proptest::prop_assert_eq!(t.snapshot(), fresh.snapshot());
        }

        #[test]
        fn arbitrary_integer_letters(word in proptest::collection::vec(-1000i64..1000, 0..40)) {
            let t = EerTree::from_word(&word);
            proptest::prop_assert_eq!(t.palindrome_count(), naive_palindromes(&word).len());
        }
    }
}
