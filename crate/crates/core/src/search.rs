//! Exhaustive depth-first search for the longest (rich) word avoiding
//! k-powers of a given kind.
//!
//! Children are tried in alphabet order, so the first word reaching a new
//! maximal length is the lexicographically least one of that length. The
//! tree is split at a fixed depth into independent tasks; a task owns its
//! eertree and prefix tables and can be suspended as the list of pending
//! branch indices along its current path.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::eertree::{is_rich, EerTree};
use crate::error::{Error, Result};
use crate::power::{find_kpower, PowerKind, PrefixTables};
use crate::word::{Alphabet, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub alphabet: Alphabet,
    pub k: usize,
    pub kind: PowerKind,
    pub require_rich: bool,
    pub symmetry_reduction: bool,
    pub depth_cap: Option<usize>,
    /// Seconds between periodic checkpoint writes.
    pub checkpoint_interval: Option<u64>,
}

impl SearchSpec {
    pub fn new(alphabet: Alphabet, k: usize, kind: PowerKind, require_rich: bool) -> Self {
        SearchSpec {
            alphabet,
            k,
            kind,
            require_rich,
            symmetry_reduction: false,
            depth_cap: None,
            checkpoint_interval: None,
        }
    }

    pub fn with_symmetry_reduction(mut self, on: bool) -> Self {
        self.symmetry_reduction = on;
        self
    }

    pub fn with_depth_cap(mut self, cap: Option<usize>) -> Self {
        self.depth_cap = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidParameter(format!("k must be at least 2, got {}", self.k)));
        }
        // Letter permutations preserve richness, ordinary and abelian
        // powers; additive powers only over two letters, where they
        // coincide with abelian ones.
        if self.symmetry_reduction && self.kind == PowerKind::Additive && self.alphabet.len() != 2 {
            return Err(Error::InvalidParameter(
                "symmetry reduction is unsound for additive powers over more than two letters".into(),
            ));
        }
        Ok(())
    }

    /// Fields that determine the search tree; checkpoint compatibility.
    fn fingerprint(&self) -> String {
        format!(
            "alphabet={} k={} kind={} rich={} symmetry={} cap={}",
            self.alphabet,
            self.k,
            self.kind,
            self.require_rich,
            self.symmetry_reduction,
            self.depth_cap.map_or("none".to_string(), |c| c.to_string())
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub max_length: usize,
    pub witness: Word,
    pub nodes_visited: u64,
    /// The whole (symmetry-reduced) tree was explored.
    pub exhausted: bool,
    pub spec: SearchSpec,
}

/// Re-validates a candidate with the definitional checkers.
pub fn verify_witness(spec: &SearchSpec, w: &[Letter]) -> bool {
    if !w.iter().all(|&c| spec.alphabet.contains(c)) {
        return false;
    }
    if spec.require_rich && !is_rich(w).rich {
        return false;
    }
    matches!(find_kpower(w, spec.k, spec.kind, None), Ok(None))
}

/// Best word found in part of the tree, plus the work done there.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Tally {
    nodes: u64,
    best: Vec<u8>,
    cap_hit: bool,
}

impl Tally {
    fn empty() -> Self {
        Tally { nodes: 0, best: Vec::new(), cap_hit: false }
    }

    fn offer(&mut self, w: &[u8]) {
        if w.len() > self.best.len() {
            self.best = w.to_vec();
        }
    }

    /// Longest wins; ties go to the lexicographically smaller word.
    fn merge(&mut self, other: &Tally) {
        self.nodes += other.nodes;
        self.cap_hit |= other.cap_hit;
        if other.best.len() > self.best.len()
            || (other.best.len() == self.best.len() && other.best < self.best)
        {
            self.best = other.best.clone();
        }
    }
}

/// Incremental validity state over letter indices.
struct Walker<'a> {
    spec: &'a SearchSpec,
    tables: PrefixTables,
    tree: Option<EerTree>,
    // distinct letters used by the prefix of each length
    distinct: Vec<u8>,
    word: Vec<u8>,
}

impl<'a> Walker<'a> {
    fn new(spec: &'a SearchSpec) -> Self {
        Walker {
            spec,
            tables: PrefixTables::new(spec.alphabet.clone()),
            tree: spec.require_rich.then(EerTree::new),
            distinct: vec![0],
            word: Vec::new(),
        }
    }

    fn depth(&self) -> usize {
        self.word.len()
    }

    /// Number of letter indices allowed as the next letter.
    fn branching(&self) -> u8 {
        let sigma = self.spec.alphabet.len() as u8;
        if self.spec.symmetry_reduction {
            (self.distinct[self.word.len()] + 1).min(sigma)
        } else {
            sigma
        }
    }

    fn try_push(&mut self, c: u8) -> bool {
        if let Some(tree) = &mut self.tree {
            // the prefix stays rich iff the new letter creates a palindrome
            if !tree.add_letter(Letter::from(c)) {
                tree.undo().expect("just added");
                return false;
            }
        }
        self.tables.push_index(c as usize);
        if self.tables.suffix_kpower(self.spec.k, self.spec.kind).is_some() {
            self.tables.pop();
            if let Some(tree) = &mut self.tree {
                tree.undo().expect("just added");
            }
            return false;
        }
        let d = self.distinct[self.word.len()];
        self.distinct.push(if c == d { d + 1 } else { d });
        self.word.push(c);
        true
    }

    fn pop(&mut self) {
        self.word.pop();
        self.distinct.pop();
        self.tables.pop();
        if let Some(tree) = &mut self.tree {
            tree.undo().expect("nonempty");
        }
    }

    fn replay(&mut self, path: &[u8]) -> Result<()> {
        for &c in path {
            if c >= self.branching() || !self.try_push(c) {
                return Err(Error::Checkpoint(format!("path is not a valid search node at depth {}", self.depth())));
            }
        }
        Ok(())
    }
}

/// Suspended or finished state of one subtree.
#[derive(Debug, Clone, PartialEq, Eq)]
enum TaskState {
    Pending,
    /// `path` is the current node; `next[d]` is the next branch to try at
    /// depth `d` along it (relative to the task root depth).
    Active { path: Vec<u8>, next: Vec<u8>, tally: Tally },
    Done(Tally),
}

enum RunOutcome {
    Finished(Tally),
    Suspended { path: Vec<u8>, next: Vec<u8>, tally: Tally },
}

struct Shared<'s> {
    stop: AtomicBool,
    nodes: AtomicU64,
    node_budget: Option<u64>,
    states: Mutex<Vec<TaskState>>,
    checkpoint: Option<&'s Path>,
    interval: Option<Duration>,
    last_write: Mutex<Instant>,
    header: &'s CheckpointHeader,
}

const POLL_MASK: u64 = (1 << 16) - 1;

/// Depth-first search below `root` (already pushed on the walker), resuming
/// from `next` when given.
fn run_task(
    walker: &mut Walker,
    root_depth: usize,
    mut next: Vec<u8>,
    mut tally: Tally,
    fresh: bool,
    task: usize,
    shared: Option<&Shared>,
) -> RunOutcome {
    let cap = walker.spec.depth_cap.unwrap_or(usize::MAX);
    let visit = |w: &Walker, tally: &mut Tally| {
        tally.nodes += 1;
        tally.offer(&w.word);
        if w.depth() >= cap {
            tally.cap_hit = true;
        }
    };
    if fresh {
        next = vec![0];
        visit(walker, &mut tally);
    }
    let mut since_poll = 0u64;
    loop {
        let rel = walker.depth() - root_depth;
        let c = next[rel];
        if walker.depth() < cap && c < walker.branching() {
            next[rel] += 1;
            if walker.try_push(c) {
                next.push(0);
                visit(walker, &mut tally);
                since_poll += 1;
                if since_poll & POLL_MASK == 0 {
                    if let Some(sh) = shared {
                        let total = sh.nodes.fetch_add(POLL_MASK + 1, Ordering::Relaxed) + POLL_MASK + 1;
                        if sh.node_budget.is_some_and(|b| total >= b) {
                            sh.stop.store(true, Ordering::Relaxed);
                        }
                        if sh.stop.load(Ordering::Relaxed) {
                            return RunOutcome::Suspended {
                                path: walker.word[root_depth..].to_vec(),
                                next,
                                tally,
                            };
                        }
                        if let Some(iv) = sh.interval {
                            if sh.last_write.lock().expect("lock").elapsed() >= iv {
                                sh.states.lock().expect("lock")[task] = TaskState::Active {
                                    path: walker.word[root_depth..].to_vec(),
                                    next: next.clone(),
                                    tally: tally.clone(),
                                };
                                sh.write_checkpoint();
                            }
                        }
                    }
                }
            }
        } else {
            if rel == 0 {
                return RunOutcome::Finished(tally);
            }
            next.pop();
            walker.pop();
        }
    }
}

impl Shared<'_> {
    fn write_checkpoint(&self) {
        let Some(path) = self.checkpoint else { return };
        let mut last = self.last_write.lock().expect("lock");
        let states = self.states.lock().expect("lock").clone();
        if let Err(e) = write_checkpoint_file(path, self.header, &states) {
            eprintln!("warning: checkpoint write failed: {e}");
        }
        *last = Instant::now();
    }
}

/// Options controlling execution, not the result.
#[derive(Debug, Clone, Default)]
pub struct SearchControl {
    /// Worker threads.
    pub jobs: usize,
    /// Depth at which the tree is split into tasks (default 0: one task).
    pub split_depth: usize,
    /// Checkpoint file written on interruption and periodically.
    pub checkpoint: Option<PathBuf>,
    /// Resume from this checkpoint file.
    pub resume: Option<PathBuf>,
    /// Suspend once roughly this many nodes have been visited in this run.
    pub node_budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CheckpointHeader {
    fingerprint: String,
    split_depth: usize,
}

/// Outcome of a run that may have been suspended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub result: SearchResult,
    /// Set when the run stopped early; resume from the checkpoint.
    pub suspended: bool,
}

fn letters_of(spec: &SearchSpec, w: &[u8]) -> Word {
    w.iter().map(|&i| spec.alphabet.letters()[i as usize]).collect()
}

/// Nodes shallower than `split` (visited) and the task roots at `split`.
fn split_tree(spec: &SearchSpec, split: usize) -> (Tally, Vec<Vec<u8>>) {
    let mut walker = Walker::new(spec);
    let mut tally = Tally::empty();
    let mut roots = Vec::new();
    let cap = spec.depth_cap.unwrap_or(usize::MAX);
    fn rec(w: &mut Walker, split: usize, cap: usize, tally: &mut Tally, roots: &mut Vec<Vec<u8>>) {
        if w.depth() == split {
            roots.push(w.word.clone());
            return;
        }
        tally.nodes += 1;
        tally.offer(&w.word);
        if w.depth() >= cap {
            tally.cap_hit = true;
            return;
        }
        for c in 0..w.branching() {
            if w.try_push(c) {
                rec(w, split, cap, tally, roots);
                w.pop();
            }
        }
    }
    rec(&mut walker, split, cap, &mut tally, &mut roots);
    (tally, roots)
}

pub fn longest_rich_power_free(spec: &SearchSpec) -> Result<SearchResult> {
    Ok(run_search(spec, &SearchControl::default())?.result)
}

pub fn run_search(spec: &SearchSpec, control: &SearchControl) -> Result<SearchOutcome> {
    spec.validate()?;
    let split = match spec.depth_cap {
        Some(cap) => control.split_depth.min(cap),
        None => control.split_depth,
    };
    let header = CheckpointHeader { fingerprint: spec.fingerprint(), split_depth: split };
    let (base, roots) = split_tree(spec, split);
    let mut states = vec![TaskState::Pending; roots.len()];
    if let Some(path) = &control.resume {
        let (h, saved) = read_checkpoint_file(path)?;
        if h.fingerprint != header.fingerprint {
            return Err(Error::Checkpoint(format!(
                "checkpoint was written for `{}`, not `{}`",
                h.fingerprint, header.fingerprint
            )));
        }
        if h.split_depth != split || saved.len() != roots.len() {
            return Err(Error::Checkpoint("checkpoint task layout differs".into()));
        }
        states = saved;
    }

    let shared = Shared {
        stop: AtomicBool::new(false),
        nodes: AtomicU64::new(0),
        node_budget: control.node_budget,
        states: Mutex::new(states),
        checkpoint: control.checkpoint.as_deref(),
        interval: spec.checkpoint_interval.map(Duration::from_secs),
        last_write: Mutex::new(Instant::now()),
        header: &header,
    };
    let cursor = AtomicUsize::new(0);
    let worker = || -> Result<()> {
        loop {
            if shared.stop.load(Ordering::Relaxed) {
                return Ok(());
            }
            let i = cursor.fetch_add(1, Ordering::Relaxed);
            if i >= roots.len() {
                return Ok(());
            }
            let state = shared.states.lock().expect("lock")[i].clone();
            let mut walker = Walker::new(spec);
            walker.replay(&roots[i])?;
            let outcome = match state {
                TaskState::Done(_) => continue,
                TaskState::Pending => run_task(&mut walker, split, Vec::new(), Tally::empty(), true, i, Some(&shared)),
                TaskState::Active { path, next, tally } => {
                    walker.replay(&path)?;
                    if next.len() != path.len() + 1 {
                        return Err(Error::Checkpoint("frame count does not match path".into()));
                    }
                    run_task(&mut walker, split, next, tally, false, i, Some(&shared))
                }
            };
            let new_state = match outcome {
                RunOutcome::Finished(t) => TaskState::Done(t),
                RunOutcome::Suspended { path, next, tally } => TaskState::Active { path, next, tally },
            };
            shared.states.lock().expect("lock")[i] = new_state;
        }
    };
    let jobs = control.jobs.max(1);
    if jobs == 1 {
        worker()?;
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..jobs).map(|_| s.spawn(worker)).collect();
            handles.into_iter().try_for_each(|h| h.join().expect("search worker"))
        })?;
    }

    let states = shared.states.into_inner().expect("lock");
    let mut total = base;
    let mut suspended = false;
    for st in &states {
        match st {
            TaskState::Done(t) => total.merge(t),
            TaskState::Active { tally, .. } => {
                suspended = true;
                total.merge(tally);
            }
            TaskState::Pending => suspended = true,
        }
    }
    if suspended {
        if let Some(path) = &control.checkpoint {
            write_checkpoint_file(path, &header, &states)?;
        }
    }
    Ok(SearchOutcome {
        result: SearchResult {
            max_length: total.best.len(),
            witness: letters_of(spec, &total.best),
            nodes_visited: total.nodes,
            exhausted: !suspended && !total.cap_hit,
            spec: spec.clone(),
        },
        suspended,
    })
}

// Checkpoint text format, one record per line:
//
//   richpow-checkpoint 1
//   spec <fingerprint>
//   split <depth>
//   tasks <count>
//   task <i> pending
//   task <i> done nodes=<n> cap=<0|1> best=<indices>
//   task <i> active nodes=<n> cap=<0|1> best=<indices>
//   frame <letter index> <next branch>      (one per depth below the task root)
//   frame - <next branch>                   (the task root itself)
//
// Words are written as strings of alphabet indices; `-` denotes the empty word.

const MAGIC: &str = "richpow-checkpoint 1";

fn idx_word(w: &[u8]) -> String {
    if w.is_empty() {
        "-".into()
    } else {
        w.iter().map(|&c| char::from_digit(c as u32, 36).expect("small alphabet")).collect()
    }
}

fn parse_idx_word(s: &str) -> Result<Vec<u8>> {
    if s == "-" {
        return Ok(Vec::new());
    }
    s.chars()
        .map(|ch| ch.to_digit(36).map(|d| d as u8).ok_or_else(|| Error::Checkpoint(format!("bad letter index {ch:?}"))))
        .collect()
}

fn tally_fields(t: &Tally) -> String {
    format!("nodes={} cap={} best={}", t.nodes, u8::from(t.cap_hit), idx_word(&t.best))
}

fn write_checkpoint_file(path: &Path, header: &CheckpointHeader, states: &[TaskState]) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "spec {}", header.fingerprint);
    let _ = writeln!(out, "split {}", header.split_depth);
    let _ = writeln!(out, "tasks {}", states.len());
    for (i, st) in states.iter().enumerate() {
        match st {
            TaskState::Pending => {
                let _ = writeln!(out, "task {i} pending");
            }
            TaskState::Done(t) => {
                let _ = writeln!(out, "task {i} done {}", tally_fields(t));
            }
            TaskState::Active { path, next, tally } => {
                let _ = writeln!(out, "task {i} active {}", tally_fields(tally));
                let _ = writeln!(out, "frame - {}", next[0]);
                for (c, n) in path.iter().zip(&next[1..]) {
                    let _ = writeln!(out, "frame {c} {n}");
                }
            }
        }
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, out)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn parse_tally(fields: &[&str]) -> Result<Tally> {
    let mut t = Tally::empty();
    for f in fields {
        let (key, val) = f
            .split_once('=')
            .ok_or_else(|| Error::Checkpoint(format!("bad field {f:?}")))?;
        let bad = |_| Error::Checkpoint(format!("bad value in {f:?}"));
        match key {
            "nodes" => t.nodes = val.parse().map_err(bad)?,
            "cap" => t.cap_hit = val == "1",
            "best" => t.best = parse_idx_word(val)?,
            _ => return Err(Error::Checkpoint(format!("unknown field {key:?}"))),
        }
    }
    Ok(t)
}

fn read_checkpoint_file(path: &Path) -> Result<(CheckpointHeader, Vec<TaskState>)> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    if lines.next() != Some(MAGIC) {
        return Err(Error::Checkpoint("not a checkpoint file".into()));
    }
    let mut field = |name: &str| -> Result<String> {
        lines
            .next()
            .and_then(|l| l.strip_prefix(name))
            .and_then(|l| l.strip_prefix(' '))
            .map(str::to_string)
            .ok_or_else(|| Error::Checkpoint(format!("missing {name} line")))
    };
    let fingerprint = field("spec")?;
    let split_depth = field("split")?.parse().map_err(|_| Error::Checkpoint("bad split".into()))?;
    let count: usize = field("tasks")?.parse().map_err(|_| Error::Checkpoint("bad task count".into()))?;
    let mut states: Vec<TaskState> = Vec::with_capacity(count);
    for line in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            [] => {}
            ["task", i, status, rest @ ..] => {
                if i.parse::<usize>().ok() != Some(states.len()) {
                    return Err(Error::Checkpoint(format!("task index out of order: {line:?}")));
                }
                states.push(match *status {
                    "pending" => TaskState::Pending,
                    "done" => TaskState::Done(parse_tally(rest)?),
                    "active" => TaskState::Active { path: Vec::new(), next: Vec::new(), tally: parse_tally(rest)? },
                    _ => return Err(Error::Checkpoint(format!("bad task status in {line:?}"))),
                });
            }
            ["frame", letter, next_branch] => {
                let Some(TaskState::Active { path, next, .. }) = states.last_mut() else {
                    return Err(Error::Checkpoint("frame outside an active task".into()));
                };
                let n: u8 = next_branch.parse().map_err(|_| Error::Checkpoint(format!("bad frame {line:?}")))?;
                if *letter != "-" {
                    path.push(letter.parse().map_err(|_| Error::Checkpoint(format!("bad frame {line:?}")))?);
                } else if !next.is_empty() {
                    return Err(Error::Checkpoint("duplicate task root frame".into()));
                }
                next.push(n);
            }
            _ => return Err(Error::Checkpoint(format!("unrecognized line {line:?}"))),
        }
    }
    if states.len() != count {
        return Err(Error::Checkpoint(format!("expected {count} tasks, found {}", states.len())));
    }
    Ok((CheckpointHeader { fingerprint, split_depth }, states))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(alpha: &str, k: usize, kind: PowerKind, rich: bool) -> SearchSpec {
        SearchSpec::new(alpha.parse().unwrap(), k, kind, rich)
    }

    /// Level-by-level enumeration of all valid words, independent of the DFS.
    fn naive_max_length(s: &SearchSpec, limit: usize) -> usize {
        let letters = s.alphabet.letters();
        let mut level: Vec<Vec<Letter>> = vec![vec![]];
        let mut best = 0;
        for n in 1..=limit {
            level = level
                .iter()
                .flat_map(|p| letters.iter().map(move |&c| [p.as_slice(), &[c]].concat()))
                .filter(|w| verify_witness(s, w))
                .collect();
            if level.is_empty() {
                break;
            }
            best = n;
        }
        best
    }

    #[test]
    fn binary_square_free() {
        let s = spec("0,1", 2, PowerKind::Ordinary, false);
        let r = longest_rich_power_free(&s).unwrap();
        assert_eq!(r.max_length, 3);
        assert_eq!(r.witness.to_string(), "010");
        assert!(r.exhausted);
    }

    #[test]
    fn witness_checks() {
        let s = spec("0,1", 2, PowerKind::Ordinary, false);
        assert!(!verify_witness(&s, &[0, 0, 1, 1]));
        assert!(verify_witness(&s, &[]));
        assert!(verify_witness(&s, &[0, 1, 0]));
        assert!(!verify_witness(&s, &[0, 2]));
    }

    #[test]
    fn agrees_with_naive_enumeration() {
        for (alpha, k, kind, rich) in [
            ("0,1", 3, PowerKind::Abelian, false),
            ("0,1,2", 2, PowerKind::Ordinary, true),
            ("0,1,2", 2, PowerKind::Abelian, false),
            ("0,1,3", 2, PowerKind::Additive, true),
        ] {
            let s = spec(alpha, k, kind, rich);
            let r = longest_rich_power_free(&s).unwrap();
            assert!(r.exhausted);
            assert_eq!(r.max_length, naive_max_length(&s, 40), "{alpha} {k} {kind} {rich}");
            assert!(verify_witness(&s, &r.witness));
        }
    }

    #[test]
    fn symmetry_reduction_keeps_the_maximum() {
        let plain = spec("0,1,2", 2, PowerKind::Abelian, false);
        let reduced = plain.clone().with_symmetry_reduction(true);
        let a = longest_rich_power_free(&plain).unwrap();
        let b = longest_rich_power_free(&reduced).unwrap();
        assert_eq!(a.max_length, b.max_length);
        assert!(b.nodes_visited < a.nodes_visited);
        assert!(spec("0,1,3", 3, PowerKind::Additive, true).with_symmetry_reduction(true).validate().is_err());
        assert!(spec("0,3", 3, PowerKind::Additive, true).with_symmetry_reduction(true).validate().is_ok());
    }

    #[test]
    fn depth_cap_marks_incomplete() {
        let s = spec("0,1,2", 2, PowerKind::Ordinary, false).with_depth_cap(Some(12));
        let r = longest_rich_power_free(&s).unwrap();
        assert_eq!(r.max_length, 12);
        assert!(!r.exhausted);
    }

    #[test]
    fn split_and_threads_do_not_change_the_result() {
        let s = spec("0,1", 3, PowerKind::Abelian, true).with_symmetry_reduction(true);
        let base = run_search(&s, &SearchControl::default()).unwrap().result;
        for (split, jobs) in [(1, 1), (3, 2), (6, 3)] {
            let r = run_search(&s, &SearchControl { split_depth: split, jobs, ..Default::default() }).unwrap();
            assert_eq!(r.result, base, "split {split} jobs {jobs}");
        }
    }

    #[test]
    fn checkpoint_roundtrip_through_text() {
        let header = CheckpointHeader { fingerprint: "x y".into(), split_depth: 2 };
        let states = vec![
            TaskState::Pending,
            TaskState::Done(Tally { nodes: 7, best: vec![0, 1, 1], cap_hit: false }),
            TaskState::Active {
                path: vec![1, 0],
                next: vec![2, 1, 0],
                tally: Tally { nodes: 3, best: vec![], cap_hit: true },
            },
        ];
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.ckpt");
        write_checkpoint_file(&p, &header, &states).unwrap();
        assert_eq!(read_checkpoint_file(&p).unwrap(), (header, states));
    }
}
