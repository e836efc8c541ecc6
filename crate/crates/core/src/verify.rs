//! The reproduction suite: one check per published result or derived
//! consistency property. Shared by `richpow verify-paper` and the
//! `acceptance` test target.
//!
//! Expected values that are not paper constants come from the definitional
//! oracles in [`naive`], which share no code with the fast paths.

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::eertree::{is_rich, stream_richness, EerTree};
use crate::error::Result;
use crate::fixed_point::fixed_point_prefix;
use crate::matrix::{eigenvalues_outside_unit_circle, mat2_eigenvalues_outside_unit_circle, Mat2};
use crate::morphism::known::{beta, delta, gamma};
use crate::power::{find_kpower, scan_fixed_point, PowerKind, ScanOptions};
use crate::search::{run_search, verify_witness, SearchControl, SearchSpec};
use crate::templates::{
    ancestor_closure, decide_additive_power_free, find_instance, parents, root_template, Template,
    Verdict, DEFAULT_ANCESTOR_CAP,
};
use crate::word::{is_palindrome, psi, Alphabet, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionReport {
    /// `PASS 3 decision runs: ...`
    pub fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        };
        format!("{tag} {:>2} {} ({:.1}s): {}", self.id, self.name, self.seconds, self.detail)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Skip the long binary search.
    pub quick: bool,
    pub jobs: usize,
    /// Run only these criteria.
    pub only: Option<Vec<u8>>,
    /// Node budget after which the binary search is interrupted and then
    /// resumed from its checkpoint.
    pub binary_interrupt_after: u64,
    /// Directory for checkpoint files.
    pub scratch: PathBuf,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            quick: false,
            jobs: 1,
            only: None,
            binary_interrupt_after: 20_000_000,
            scratch: std::env::temp_dir(),
        }
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "binary abelian-4 rich search"),
    (2, "ternary abelian-cube rich search"),
    (3, "decision runs"),
    (4, "scan consistency"),
    (5, "richness streams"),
    (6, "oracle suites"),
    (7, "algebraic identities"),
    (8, "palindrome preservation under gamma"),
    (9, "factor facts of the gamma fixed point"),
    (10, "template soundness"),
];

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub fn run_criterion(id: u8, opts: &VerifyOptions) -> CriterionReport {
    let name = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1).to_string();
    let t = Instant::now();
    let outcome = match id {
        1 if opts.quick => None,
        1 => Some(binary_search(opts)),
        2 => Some(ternary_search(opts)),
        3 => Some(decisions()),
        4 => Some(scan_consistency(opts)),
        5 => Some(richness_streams()),
        6 => Some(oracle_suites()),
        7 => Some(algebraic_identities()),
        8 => Some(palindrome_preservation()),
        9 => Some(gamma_factor_facts()),
        10 => Some(template_soundness()),
        _ => Some(Err(format!("no criterion {id}"))),
    };
    let (status, detail) = match outcome {
        None => (Status::Skipped, "skipped by --quick".to_string()),
        Some(Ok(d)) => (Status::Pass, d),
        Some(Err(d)) => (Status::Fail, d),
    };
    CriterionReport { id, name, status, detail, seconds: t.elapsed().as_secs_f64() }
}

/// Runs the selected criteria in order, reporting each as it finishes.
pub fn verify_paper(opts: &VerifyOptions, mut each: impl FnMut(&CriterionReport)) -> Vec<CriterionReport> {
    CRITERIA
        .iter()
        .filter(|(id, _)| opts.only.as_ref().is_none_or(|o| o.contains(id)))
        .map(|&(id, _)| {
            let r = run_criterion(id, opts);
            each(&r);
            r
        })
        .collect()
}

fn control(opts: &VerifyOptions) -> SearchControl {
    SearchControl {
        jobs: opts.jobs.max(1),
        split_depth: if opts.jobs > 1 { 12 } else { 0 },
        ..Default::default()
    }
}

fn checkpoint_path(opts: &VerifyOptions, tag: &str) -> PathBuf {
    opts.scratch.join(format!("richpow-verify-{}-{tag}.ckpt", std::process::id()))
}

/// Runs with a node budget and a checkpoint, then resumes to completion.
fn interrupted_search(
    spec: &SearchSpec,
    opts: &VerifyOptions,
    budget: u64,
    tag: &str,
) -> std::result::Result<crate::search::SearchResult, String> {
    let path = checkpoint_path(opts, tag);
    let first = SearchControl { checkpoint: Some(path.clone()), node_budget: Some(budget), ..control(opts) };
    let partial = lib(run_search(spec, &first))?;
    ensure(partial.suspended, || format!("search finished within the {budget}-node budget"))?;
    let second = SearchControl { resume: Some(path.clone()), ..control(opts) };
    let done = lib(run_search(spec, &second));
    let _ = std::fs::remove_file(&path);
    let done = done?;
    ensure(!done.suspended, || "resumed search did not finish".into())?;
    Ok(done.result)
}

fn extremal_spec(alphabet: &str, k: usize) -> SearchSpec {
    SearchSpec::new(alphabet.parse().expect("alphabet literal"), k, PowerKind::Abelian, true)
        .with_symmetry_reduction(true)
}

fn binary_search(opts: &VerifyOptions) -> Check {
    let spec = extremal_spec("0,1", 4);
    let r = interrupted_search(&spec, opts, opts.binary_interrupt_after, "binary")?;
    ensure(r.exhausted && r.max_length == 2411, || {
        format!("max_length {} exhausted {}; expected 2411", r.max_length, r.exhausted)
    })?;
    ensure(verify_witness(&spec, &r.witness), || "witness fails re-validation".into())?;
    Ok(format!(
        "max_length 2411 exhausted after {} nodes, interrupted at {} and resumed from checkpoint",
        r.nodes_visited, opts.binary_interrupt_after
    ))
}

fn ternary_search(opts: &VerifyOptions) -> Check {
    let spec = extremal_spec("0,1,2", 3);
    let direct = lib(run_search(&spec, &control(opts)))?.result;
    ensure(direct.exhausted && direct.max_length == 180, || {
        format!("max_length {} exhausted {}; expected 180", direct.max_length, direct.exhausted)
    })?;
    ensure(verify_witness(&spec, &direct.witness), || "witness fails re-validation".into())?;
    let resumed = interrupted_search(&spec, opts, direct.nodes_visited / 2, "ternary")?;
    ensure(resumed == direct, || "checkpoint/resume changed the result".into())?;
    Ok(format!(
        "max_length 180 exhausted after {} nodes; resumed run identical",
        direct.nodes_visited
    ))
}

fn decisions() -> Check {
    let mut parts = Vec::new();
    for (name, f, seed, k) in [("beta", beta(), 0, 5), ("delta", delta(), 1, 4)] {
        let c = lib(decide_additive_power_free(&f, seed, k, Default::default()))?;
        ensure(c.verdict == Verdict::Free, || format!("{name} k={k}: verdict {}", c.verdict))?;
        ensure(c.ancestor_count > 0, || format!("{name}: empty ancestor set"))?;
        let b = c.bounds.used;
        parts.push(format!(
            "{name} k={k} FREE with {} ancestors, initial {}/{} final {}/{}",
            c.ancestor_count,
            b.initial_prefix_length,
            b.initial_max_period,
            b.final_prefix_length,
            b.final_max_instance_length
        ));
    }
    Ok(parts.join("; "))
}

fn scan_consistency(opts: &VerifyOptions) -> Check {
    let all = ScanOptions { max_period: None, max_occurrences: 1, jobs: opts.jobs.max(1) };
    for (name, f, seed, k) in [("B", beta(), 0, 5), ("Gamma", delta(), 1, 4)] {
        let r = lib(scan_fixed_point(&f, seed, k, PowerKind::Additive, 100_000, all))?;
        ensure(r.is_free() && r.exhaustive, || {
            format!("{name}: additive {k}-power {:?} in the length-10^5 prefix", r.occurrences.first())
        })?;
    }
    let mut found = Vec::new();
    for (name, f, seed, k) in [("B", beta(), 0, 4), ("Gamma", delta(), 1, 3)] {
        let r = lib(scan_fixed_point(&f, seed, k, PowerKind::Additive, 10_000, all))?;
        let occ = r.occurrences.first().ok_or_else(|| format!("{name}: no additive {k}-power"))?;
        let w = lib(fixed_point_prefix(&f, seed, occ.start + occ.len()))?;
        ensure(naive::is_kpower(occ.factor(&w), k, PowerKind::Additive), || {
            format!("{name}: witness {occ:?} fails the definitional check")
        })?;
        found.push(format!("{name} k={k} at {}+{}x{}", occ.start, k, occ.period));
    }
    Ok(format!("no powers in either 10^5 prefix; witnesses {}", found.join(", ")))
}

fn richness_streams() -> Check {
    let n = 1_000_000;
    for (name, f, seed) in [("B", beta(), 0), ("Gamma", delta(), 1)] {
        let r = lib(stream_richness(&f, seed, n))?;
        ensure(r.rich && r.palindrome_count == n, || {
            format!("{name}: first failure {:?}, {} palindromes", r.first_failure, r.palindrome_count)
        })?;
    }
    Ok("every prefix of B and Gamma up to 10^6 adds one new palindrome".into())
}

fn oracle_suites() -> Check {
    // palindrome counts, binary words up to length 16
    let mut words = 0usize;
    for w in naive::all_words(&[0, 1], 16) {
        let t = EerTree::from_word(&w);
        ensure(t.palindrome_count() == naive::distinct_palindromes(&w), || {
            format!("palindrome count differs on {}", Word::from(&w[..]))
        })?;
        words += 1;
    }
    // richness vs unioccurrent palindromic suffixes, up to length 12
    for w in naive::all_words(&[0, 1], 12) {
        ensure(is_rich(&w).rich == naive::every_prefix_has_unioccurrent_suffix(&w), || {
            format!("richness characterization fails on {}", Word::from(&w[..]))
        })?;
    }
    // factors of random rich words
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..10_000 {
        let sigma = rng.gen_range(2..=4);
        let len = rng.gen_range(1..60);
        let w = random_rich_word(&mut rng, sigma, len);
        let i = rng.gen_range(0..w.len());
        let j = rng.gen_range(i + 1..=w.len());
        ensure(naive::is_rich(&w[i..j]), || format!("factor of rich {} is not rich", Word::from(&w[..])))?;
    }
    // power detectors vs the definitional scan, ternary up to length 10
    let mut checked = 0usize;
    for w in naive::all_words(&[0, 1, 2], 10) {
        for kind in [PowerKind::Ordinary, PowerKind::Abelian, PowerKind::Additive] {
            for k in 2..=3 {
                let fast = lib(find_kpower(&w, k, kind, None))?.map(|o| (o.start, o.period));
                let slow = naive::least_kpower(&w, k, kind);
                ensure(fast == slow, || {
                    format!("{kind} k={k} on {}: {fast:?} vs {slow:?}", Word::from(&w[..]))
                })?;
                checked += 1;
            }
        }
    }
    // additive = abelian over two letters
    for alphabet in [[0, 1], [0, 3]] {
        for w in naive::all_words(&alphabet, 12) {
            for k in 2..=4 {
                let add = lib(find_kpower(&w, k, PowerKind::Additive, None))?.map(|o| (o.start, o.period));
                let abe = lib(find_kpower(&w, k, PowerKind::Abelian, None))?.map(|o| (o.start, o.period));
                ensure(add == abe, || format!("additive/abelian differ on {}", Word::from(&w[..])))?;
            }
        }
    }
    Ok(format!(
        "{words} binary words for palindrome counts, 10^4 rich factors, {checked} ternary power checks"
    ))
}

/// Extends a random word letter by letter, keeping it rich.
fn random_rich_word(rng: &mut ChaCha8Rng, sigma: i64, len: usize) -> Vec<Letter> {
    let mut t = EerTree::new();
    while t.len() < len {
        let start = rng.gen_range(0..sigma);
        let extended = (0..sigma).any(|d| {
            let c = (start + d) % sigma;
            t.add_letter(c) || {
                t.undo().expect("just added");
                false
            }
        });
        if !extended {
            break;
        }
    }
    t.word().to_vec()
}

fn random_word(rng: &mut ChaCha8Rng, alphabet: &Alphabet, len: usize) -> Vec<Letter> {
    let l = alphabet.letters();
    (0..len).map(|_| l[rng.gen_range(0..l.len())]).collect()
}

fn algebraic_identities() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for f in [beta(), gamma(), delta()] {
        let m = f.affine_profile().ok_or("morphism is not affine")?.matrix();
        for _ in 0..10_000 {
            let len = rng.gen_range(0..40);
            let w = random_word(&mut rng, f.domain(), len);
            let image = lib(f.apply(&w))?;
            ensure(psi(&image) == m.mul_vec(psi(&w)), || format!("psi identity fails for {f} on {w:?}"))?;
        }
    }
    let mg = gamma().affine_profile().ok_or("gamma is not affine")?.matrix();
    let md = delta().affine_profile().ok_or("delta is not affine")?.matrix();
    ensure(md == Mat2::new(5, 2, 2, 4) && mg * mg == md, || format!("M_delta = {md}, M_gamma^2 = {}", mg * mg))?;
    ensure(lib(gamma().compose(&gamma()))? == delta(), || "gamma∘gamma differs from delta".into())?;
    let mb = beta().affine_profile().ok_or("beta is not affine")?.matrix();
    ensure(mb == Mat2::new(5, 0, 1, 2), || format!("M_beta = {mb}"))?;
    ensure(lib(mat2_eigenvalues_outside_unit_circle(&mb))?, || "M_beta predicate false".into())?;
    ensure(lib(eigenvalues_outside_unit_circle(&[vec![5, 2], vec![2, 4]]))?, || "M_delta predicate false".into())?;
    let eig = mb.integer_eigenvalues().map(|(a, b)| (a.min(b), a.max(b)));
    ensure(eig == Some((2, 5)), || format!("M_beta eigenvalues {eig:?}"))?;
    let inc = lib(gamma().incidence_matrix())?;
    ensure(inc.characteristic_at(1) == 0, || "incidence matrix of gamma lacks eigenvalue 1".into())?;
    Ok("psi identities on 3x10^4 words, M_delta = M_gamma^2, eigenvalues {2,5}, det(A_gamma - I) = 0".into())
}

fn palindrome_preservation() -> Check {
    let g = gamma();
    let mut count = 0usize;
    for n in 0..=8 {
        for w in naive::all_words(&[0, 1, 2], n).into_iter().filter(|w| is_palindrome(w)) {
            ensure(is_palindrome(&lib(g.apply(&w))?), || format!("gamma({}) is not a palindrome", Word::from(&w[..])))?;
            count += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..1000 {
        let len = rng.gen_range(5..40);
        let half = random_word(&mut rng, g.domain(), len);
        let mut w = half.clone();
        let skip = rng.gen_bool(0.5) as usize;
        w.extend(half.iter().rev().skip(skip));
        ensure(is_palindrome(&lib(g.apply(&w))?), || format!("gamma({}) is not a palindrome", Word::from(&w[..])))?;
    }
    Ok(format!("{count} palindromes up to length 8 and 1000 longer ones"))
}

fn gamma_factor_facts() -> Check {
    let w = lib(fixed_point_prefix(&delta(), 1, 100_000))?;
    for (i, pair) in w.windows(2).enumerate() {
        ensure(pair != [0, 2] && pair != [2, 0], || format!("{pair:?} at {i}"))?;
    }
    for (i, x) in w.windows(3).enumerate() {
        if x[..2] == [0, 1] {
            ensure(x[2] == 1 || x[2] == 2, || format!("01 followed by {} at {i}", x[2]))?;
        }
        if x[1..] == [1, 1] {
            ensure(x[0] == 0, || format!("11 preceded by {} at {}", x[0], i + 1))?;
        }
    }
    // an occurrence of 11 at the very start has no predecessor
    ensure(w[..2] != [1, 1], || "Gamma starts with 11".into())?;
    ensure(naive::is_rich(&w[..14]), || "length-14 prefix is not rich".into())?;
    let mut first4 = w[..4].to_vec();
    first4.sort_unstable();
    first4.dedup();
    ensure(first4 == [0, 1, 2], || format!("first four letters {:?}", &w[..4]))?;
    Ok("no 02/20, 01 followed by 1 or 2, 11 preceded by 0 in 10^5 letters; prefix 14 rich".into())
}

fn template_soundness() -> Check {
    let mut words = 0usize;
    for w in naive::all_words(&[0, 1, 2], 9) {
        for k in 2..=3 {
            let by_template = find_instance(&w, &lib(root_template(k))?, w.len()).is_some();
            ensure(by_template == naive::least_kpower(&w, k, PowerKind::Additive).is_some(), || {
                format!("root template disagrees on {} k={k}", Word::from(&w[..]))
            })?;
        }
        words += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2411);
    let mut sizes = Vec::new();
    for (name, f, sigma, k) in [("beta", beta(), 2, 5), ("delta", delta(), 3, 4)] {
        let a = lib(ancestor_closure(&f, k, DEFAULT_ANCESTOR_CAP))?;
        let set = a.to_set();
        ensure(set.contains(&lib(root_template(k))?), || format!("{name}: root missing"))?;
        let mut with_parents = Vec::new();
        for t in set.iter() {
            let ps = lib(parents(t, &f))?;
            ensure(ps.iter().all(|p| set.contains(p)), || format!("{name}: not parent-closed at {t}"))?;
            if !ps.is_empty() {
                with_parents.push((t.clone(), ps.members.into_iter().collect::<Vec<_>>()));
            }
        }
        let again = lib(ancestor_closure(&f, k, DEFAULT_ANCESTOR_CAP))?;
        let bytes = |c: &crate::templates::AncestorClosure| serde_json::to_vec(c.templates()).expect("serializable");
        ensure(bytes(&a) == bytes(&again), || format!("{name}: closure is not reproducible"))?;

        let mut planted = 0;
        let mut attempts = 0;
        while planted < 1000 {
            attempts += 1;
            ensure(attempts < 100_000, || format!("{name}: could only plant {planted} instances"))?;
            let (t, ps) = &with_parents[rng.gen_range(0..with_parents.len())];
            let p = &ps[rng.gen_range(0..ps.len())];
            let Some(w) = plant_instance(&mut rng, p, sigma) else { continue };
            let image = lib(f.apply(&w))?;
            ensure(find_instance(&image, t, image.len()).is_some(), || {
                format!("{name}: {p} in {} does not give {t}", Word::from(&w[..]))
            })?;
            planted += 1;
        }
        sizes.push(format!("{name} k={k}: {} ancestors", a.len()));
    }
    Ok(format!(
        "root agrees on {words} ternary words; 2x1000 planted parent instances; closures closed and reproducible ({})",
        sizes.join(", ")
    ))
}

/// A random word over `0..sigma` containing an instance of `t`, or `None`
/// when the drawn block lengths admit no block sums.
fn plant_instance(rng: &mut ChaCha8Rng, t: &Template, sigma: i64) -> Option<Vec<Letter>> {
    let c = t.length_offsets();
    let min_c = *c.iter().min()?;
    let l1 = (1 - min_c).max(1) + rng.gen_range(0..5);
    let mut offsets = vec![0];
    for a in &t.deltas {
        offsets.push(offsets.last()? + a.sum);
    }
    let lo = offsets.iter().map(|&o| -o).max()?.max(0);
    let hi = c.iter().zip(&offsets).map(|(&ci, &o)| (sigma - 1) * (l1 + ci) - o).min()?;
    if lo > hi {
        return None;
    }
    let s1 = rng.gen_range(lo..=hi);
    let mut out: Vec<Letter> = (0..rng.gen_range(0..3)).map(|_| rng.gen_range(0..sigma)).collect();
    for (i, d) in t.boundaries.iter().enumerate() {
        out.extend(d.iter());
        if i < t.k() {
            let len = (l1 + c[i]) as usize;
            let mut rem = s1 + offsets[i];
            for r in (0..len).rev() {
                let x = rng.gen_range((rem - (sigma - 1) * r as i64).max(0)..=rem.min(sigma - 1));
                out.push(x);
                rem -= x;
            }
        }
    }
    out.extend((0..rng.gen_range(0..3)).map(|_| rng.gen_range(0..sigma)));
    Some(out)
}

/// Definitional checkers used as oracles.
pub mod naive {
    use std::collections::BTreeSet;

    use crate::power::PowerKind;
    use crate::word::{is_palindrome, Letter};

    /// All words of length at most `n` over `alphabet`, shortest first.
    pub fn all_words(alphabet: &[Letter], n: usize) -> Vec<Vec<Letter>> {
        let mut out = vec![vec![]];
        let mut level = vec![vec![]];
        for _ in 0..n {
            level = level
                .iter()
                .flat_map(|p: &Vec<Letter>| {
                    alphabet.iter().map(move |&c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
            out.extend(level.iter().cloned());
        }
        out
    }

    pub fn distinct_palindromes(w: &[Letter]) -> usize {
        let mut set = BTreeSet::new();
        for i in 0..w.len() {
            for j in i + 1..=w.len() {
                if is_palindrome(&w[i..j]) {
                    set.insert(&w[i..j]);
                }
            }
        }
        set.len()
    }

    /// A word of length `n` has at most `n` distinct nonempty palindromes
    /// and is rich when it has exactly `n`.
    pub fn is_rich(w: &[Letter]) -> bool {
        distinct_palindromes(w) == w.len()
    }

    fn occurrences(w: &[Letter], u: &[Letter]) -> usize {
        w.windows(u.len()).filter(|x| *x == u).count()
    }

    pub fn every_prefix_has_unioccurrent_suffix(w: &[Letter]) -> bool {
        (1..=w.len()).all(|n| {
            let p = &w[..n];
            (0..n).any(|i| is_palindrome(&p[i..]) && occurrences(p, &p[i..]) == 1)
        })
    }

    fn letter_counts(b: &[Letter]) -> Vec<(Letter, usize)> {
        let mut letters: Vec<Letter> = b.to_vec();
        letters.sort_unstable();
        letters.dedup();
        letters.iter().map(|&c| (c, b.iter().filter(|&&x| x == c).count())).collect()
    }

    fn equivalent(a: &[Letter], b: &[Letter], kind: PowerKind) -> bool {
        match kind {
            PowerKind::Ordinary => a == b,
            PowerKind::Abelian => letter_counts(a) == letter_counts(b),
            PowerKind::Additive => a.iter().sum::<Letter>() == b.iter().sum::<Letter>(),
        }
    }

    pub fn is_kpower(w: &[Letter], k: usize, kind: PowerKind) -> bool {
        if w.is_empty() || !w.len().is_multiple_of(k) {
            return false;
        }
        let m = w.len() / k;
        (1..k).all(|i| equivalent(&w[..m], &w[i * m..(i + 1) * m], kind))
    }

    /// Least `(start, period)` of a k-power factor.
    pub fn least_kpower(w: &[Letter], k: usize, kind: PowerKind) -> Option<(usize, usize)> {
        for start in 0..w.len() {
            for period in 1..=(w.len() - start) / k {
                if is_kpower(&w[start..start + k * period], k, kind) {
                    return Some((start, period));
                }
            }
        }
        None
    }
}
