//! Deciding additive power-freeness of fixed points with templates.
//!
//! A template `(d_0, …, d_k; a_1, …, a_{k-1})` describes the factors
//! `d_0 X_1 d_1 ⋯ X_k d_k` with nonempty blocks `X_i`, boundaries `d_i` of
//! length at most one, and `Ψ(X_{i+1}) − Ψ(X_i) = a_i`. The root template
//! (empty boundaries, zero deltas) matches exactly the additive k-powers.
//!
//! The procedure has three phases: scan a prefix for short powers, close
//! the root under the parent relation, then scan a prefix for short
//! instances of every ancestor. Both prefix lengths are derived here from
//! the morphism and the ancestor set and are certified by a factor
//! closure, so a `FREE` verdict does not depend on a guessed length.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed_point::FixedPointStream;
use crate::matrix::{mat2_eigenvalues_outside_unit_circle, Mat2};
use crate::morphism::Morphism;
use crate::power::{is_kpower, scan_fixed_point, PowerKind, PowerOccurrence, ScanOptions};
use crate::word::{psi, Letter, PsiVector};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Template {
    /// `d_0, …, d_k`; `None` is the empty word.
    pub boundaries: Vec<Option<Letter>>,
    /// `a_1, …, a_{k-1}`.
    pub deltas: Vec<PsiVector>,
}

impl Template {
    pub fn new(boundaries: Vec<Option<Letter>>, deltas: Vec<PsiVector>) -> Result<Self> {
        if boundaries.len() < 3 || deltas.len() + 2 != boundaries.len() {
            return Err(Error::InvalidParameter(format!(
                "a template needs k+1 boundaries and k-1 deltas with k >= 2, got {} and {}",
                boundaries.len(),
                deltas.len()
            )));
        }
        Ok(Template { boundaries, deltas })
    }

    /// Number of blocks.
    pub fn k(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn is_root(&self) -> bool {
        self.boundaries.iter().all(Option::is_none)
            && self.deltas.iter().all(|&a| a == PsiVector::ZERO)
    }

    /// `|X_i| − |X_1|` for each block.
    pub fn length_offsets(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.k());
        let mut c = 0;
        out.push(0);
        for a in &self.deltas {
            c += a.length;
            out.push(c);
        }
        out
    }

    fn nonempty_boundaries(&self) -> usize {
        self.boundaries.iter().filter(|d| d.is_some()).count()
    }

    /// Longest instance whose shortest block has length at most `short`.
    pub fn max_instance_len(&self, short: usize) -> usize {
        let c = self.length_offsets();
        let min = *c.iter().min().expect("k >= 2");
        let blocks: i64 = c.iter().map(|&ci| short as i64 + ci - min).sum();
        blocks as usize + self.nonempty_boundaries()
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.boundaries.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match d {
                Some(c) => write!(f, "{c}")?,
                None => write!(f, "ε")?,
            }
        }
        write!(f, ";")?;
        for a in &self.deltas {
            write!(f, " ({},{})", a.length, a.sum)?;
        }
        write!(f, "]")
    }
}

/// Templates deduplicated by value and iterated in canonical order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateSet {
    pub members: BTreeSet<Template>,
}

impl TemplateSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, t: &Template) -> bool {
        self.members.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Template> {
        self.members.iter()
    }
}

impl FromIterator<Template> for TemplateSet {
    fn from_iter<I: IntoIterator<Item = Template>>(iter: I) -> Self {
        TemplateSet { members: iter.into_iter().collect() }
    }
}

pub fn root_template(k: usize) -> Result<Template> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("exponent k must be at least 2, got {k}")));
    }
    Ok(Template { boundaries: vec![None; k + 1], deltas: vec![PsiVector::ZERO; k - 1] })
}

/// An occurrence `d_0 X_1 d_1 ⋯ X_k d_k` starting at `start`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TemplateInstance {
    pub start: usize,
    pub block_lengths: Vec<usize>,
    pub len: usize,
}

impl TemplateInstance {
    /// Start offsets of the boundaries `d_0, …, d_k`.
    pub fn boundary_positions(&self, t: &Template) -> Vec<usize> {
        let mut pos = self.start;
        let mut out = Vec::with_capacity(t.k() + 1);
        for (i, d) in t.boundaries.iter().enumerate() {
            out.push(pos);
            pos += d.is_some() as usize;
            if i < self.block_lengths.len() {
                pos += self.block_lengths[i];
            }
        }
        out
    }
}

fn prefix_sums(w: &[Letter]) -> Vec<i64> {
    let mut s = Vec::with_capacity(w.len() + 1);
    let mut acc = 0;
    s.push(0);
    for &c in w {
        acc += c;
        s.push(acc);
    }
    s
}

/// Least occurrence (by start, then `|X_1|`) of an instance of `t` of total
/// length at most `max_total`.
pub fn find_instance(w: &[Letter], t: &Template, max_total: usize) -> Option<TemplateInstance> {
    let sums = prefix_sums(w);
    let c = t.length_offsets();
    let min_c = *c.iter().min().expect("k >= 2");
    let fixed = c.iter().sum::<i64>() + t.nonempty_boundaries() as i64;
    let k = t.k() as i64;
    let first = (1 - min_c).max(1);
    let mut lens = vec![0usize; t.k()];
    for s in 0..w.len() {
        let mut l1 = first;
        loop {
            let total = (k * l1 + fixed) as usize;
            if total > max_total || s + total > w.len() {
                break;
            }
            for (l, &ci) in lens.iter_mut().zip(&c) {
                *l = (l1 + ci) as usize;
            }
            if matches_at(w, &sums, t, s, &lens) {
                return Some(TemplateInstance { start: s, block_lengths: lens, len: total });
            }
            l1 += 1;
        }
    }
    None
}

fn matches_at(w: &[Letter], sums: &[i64], t: &Template, start: usize, lens: &[usize]) -> bool {
    let mut pos = start;
    let mut prev_sum = 0;
    for (i, d) in t.boundaries.iter().enumerate() {
        if let Some(x) = d {
            if w[pos] != *x {
                return false;
            }
            pos += 1;
        }
        if i < lens.len() {
            let s = sums[pos + lens[i]] - sums[pos];
            if i > 0 && s - prev_sum != t.deltas[i - 1].sum {
                return false;
            }
            prev_sum = s;
            pos += lens[i];
        }
    }
    true
}

/// One way a parent boundary expands to a child boundary:
/// `f(d') = p d q`.
#[derive(Debug, Clone, Copy)]
struct Cut {
    parent: Option<Letter>,
    p_len: usize,
    p: PsiVector,
    q: PsiVector,
}

/// The boundary expansions of a morphism, indexed by child boundary.
#[derive(Debug, Clone)]
struct ParentRules {
    m: Mat2,
    empty: Vec<Cut>,
    letter: BTreeMap<Letter, Vec<Cut>>,
}

impl ParentRules {
    fn new(f: &Morphism) -> Result<Self> {
        let profile = f.affine_profile().ok_or_else(|| {
            Error::Precondition("morphism is not affine; no matrix acts on Ψ".into())
        })?;
        let m = profile.matrix();
        if m.det() == 0 {
            return Err(Error::SingularMatrix);
        }
        let mut empty = vec![Cut { parent: None, p_len: 0, p: PsiVector::ZERO, q: PsiVector::ZERO }];
        let mut letter: BTreeMap<Letter, Vec<Cut>> = BTreeMap::new();
        for (&c, img) in f.domain().letters().iter().zip(f.images()) {
            for j in 1..img.len() {
                empty.push(Cut {
                    parent: Some(c),
                    p_len: j,
                    p: psi(&img[..j]),
                    q: psi(&img[j..]),
                });
            }
            for (j, &x) in img.iter().enumerate() {
                letter.entry(x).or_default().push(Cut {
                    parent: Some(c),
                    p_len: j,
                    p: psi(&img[..j]),
                    q: psi(&img[j + 1..]),
                });
            }
        }
        Ok(ParentRules { m, empty, letter })
    }

    fn cuts(&self, d: Option<Letter>) -> &[Cut] {
        match d {
            None => &self.empty,
            Some(x) => self.letter.get(&x).map(Vec::as_slice).unwrap_or(&[]),
        }
    }

    /// Every parent of `t` with the cut chosen at each boundary.
    fn parents(&self, t: &Template) -> Vec<(Template, Vec<Cut>)> {
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(t.k() + 1);
        let mut deltas = Vec::with_capacity(t.k() - 1);
        self.expand(t, &mut chosen, &mut deltas, &mut out);
        out
    }

    fn expand(
        &self,
        t: &Template,
        chosen: &mut Vec<Cut>,
        deltas: &mut Vec<PsiVector>,
        out: &mut Vec<(Template, Vec<Cut>)>,
    ) {
        let i = chosen.len();
        if i == t.boundaries.len() {
            let boundaries = chosen.iter().map(|c| c.parent).collect();
            out.push((Template { boundaries, deltas: deltas.clone() }, chosen.clone()));
            return;
        }
        for cut in self.cuts(t.boundaries[i]) {
            chosen.push(*cut);
            // a'_j is fixed once boundaries j-1, j, j+1 are chosen
            let mut pushed = false;
            if i >= 2 {
                let j = i - 1;
                let (before, at, after) = (chosen[j - 1], chosen[j], chosen[j + 1]);
                let rhs = t.deltas[j - 1] - at.q + before.q - after.p + at.p;
                match self.m.solve_integral(rhs).expect("nonsingular") {
                    Some(a) => {
                        deltas.push(a);
                        pushed = true;
                    }
                    None => {
                        chosen.pop();
                        continue;
                    }
                }
            }
            self.expand(t, chosen, deltas, out);
            if pushed {
                deltas.pop();
            }
            chosen.pop();
        }
    }
}

/// Templates `t'` such that an instance of `t'` in `w` yields an instance
/// of `t` in `f(w)`.
pub fn parents(t: &Template, f: &Morphism) -> Result<TemplateSet> {
    let rules = ParentRules::new(f)?;
    Ok(rules.parents(t).into_iter().map(|(p, _)| p).collect())
}

/// The ancestor set with enough bookkeeping to map an ancestor instance
/// back down to an additive power.
#[derive(Debug, Clone)]
pub struct AncestorClosure {
    k: usize,
    templates: Vec<Template>,
    // for each non-root template: the child it was discovered from and the
    // prefix length p_i chosen at each boundary
    origin: Vec<Option<(u32, Box<[u16]>)>>,
    iterations: usize,
}

impl AncestorClosure {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    /// Breadth-first levels until no new template appeared.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Templates in discovery order; the root comes first.
    pub fn templates(&self) -> &[Template] {
        &self.templates
    }

    pub fn to_set(&self) -> TemplateSet {
        self.templates.iter().cloned().collect()
    }
}

/// Checks the hypotheses under which the ancestor set is finite and the
/// procedure is sound. Returns every failed condition.
pub fn hypothesis_failures(f: &Morphism, seed: Option<Letter>) -> Vec<String> {
    let mut failed = Vec::new();
    if !f.is_endomorphism() {
        failed.push("images use letters outside the domain".to_string());
    }
    if !f.is_strictly_growing() {
        failed.push("not strictly growing (some image has length < 2)".to_string());
    }
    if let Some(a) = seed {
        match f.is_prolongable(a) {
            Ok(true) => {}
            Ok(false) => failed.push(format!("not prolongable on {a}")),
            Err(e) => failed.push(e.to_string()),
        }
    }
    match f.affine_profile() {
        None => failed.push("not affine".to_string()),
        Some(p) => {
            let m = p.matrix();
            if m.det() == 0 {
                failed.push(format!("M_f = {m} is singular"));
            } else if !mat2_eigenvalues_outside_unit_circle(&m).unwrap_or(false) {
                failed.push(format!("M_f = {m} has an eigenvalue with |λ| <= 1"));
            }
        }
    }
    failed
}

fn require_hypotheses(f: &Morphism, seed: Option<Letter>) -> Result<()> {
    let failed = hypothesis_failures(f, seed);
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::Precondition(failed.join("; ")))
    }
}

/// Closes `{root_template(k)}` under the parent relation.
pub fn ancestor_closure(f: &Morphism, k: usize, cap: usize) -> Result<AncestorClosure> {
    require_hypotheses(f, None)?;
    let root = root_template(k)?;
    let rules = ParentRules::new(f)?;
    let mut index: HashMap<Template, u32> = HashMap::new();
    let mut templates = vec![root.clone()];
    let mut origin = vec![None];
    index.insert(root, 0);
    let mut frontier: VecDeque<u32> = VecDeque::from([0]);
    let mut iterations = 0;
    while !frontier.is_empty() {
        iterations += 1;
        let mut level: Vec<(Template, u32, Box<[u16]>)> = Vec::new();
        for id in frontier.drain(..) {
            for (p, cuts) in rules.parents(&templates[id as usize]) {
                if !index.contains_key(&p) {
                    let plens = cuts.iter().map(|c| c.p_len as u16).collect();
                    level.push((p, id, plens));
                }
            }
        }
        // canonical order inside a level keeps ids reproducible
        level.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        for (p, child, plens) in level {
            if index.contains_key(&p) {
                continue;
            }
            if templates.len() >= cap {
                return Err(Error::ResourceExceeded(format!(
                    "ancestor closure exceeded the cap of {cap} templates"
                )));
            }
            let id = templates.len() as u32;
            index.insert(p.clone(), id);
            templates.push(p);
            origin.push(Some((child, plens)));
            frontier.push_back(id);
        }
    }
    Ok(AncestorClosure { k, templates, origin, iterations })
}

/// The set of length-`len` factors of `f^ω(seed)`, in domain-index form.
///
/// Every factor of length `len >= 2` lies inside `f(v)` for some factor `v`
/// of the same length that starts strictly earlier (images have length at
/// least two), so closing the length-`len` prefix under "factors of
/// `f(v)`" reaches every factor.
pub fn factor_closure(f: &Morphism, seed: Letter, len: usize) -> Result<HashSet<Vec<u16>>> {
    require_hypotheses(f, Some(seed))?;
    let len = len.max(2);
    let dom = f.domain();
    let images: Vec<Vec<u16>> = f
        .images()
        .iter()
        .map(|w| w.iter().map(|&c| dom.index_of(c).expect("endomorphism") as u16).collect())
        .collect();
    let mut stream = FixedPointStream::new(f.clone(), seed)?;
    let first: Vec<u16> = stream.prefix_indices(len).iter().map(|&i| i as u16).collect();
    let mut seen = HashSet::from([first.clone()]);
    let mut todo = vec![first];
    let mut buf = Vec::new();
    while let Some(v) = todo.pop() {
        buf.clear();
        for &c in &v {
            buf.extend_from_slice(&images[c as usize]);
        }
        for win in buf.windows(len) {
            if !seen.contains(win) {
                seen.insert(win.to_vec());
                todo.push(win.to_vec());
            }
        }
    }
    Ok(seen)
}

/// Length of the shortest prefix of `f^ω(seed)` containing every factor of
/// length `len`.
pub fn covering_prefix_length(f: &Morphism, seed: Letter, len: usize) -> Result<usize> {
    let factors = factor_closure(f, seed, len)?;
    let len = len.max(2);
    let mut missing = factors;
    let mut stream = FixedPointStream::new(f.clone(), seed)?;
    let mut end = len;
    let mut key: Vec<u16> = Vec::with_capacity(len);
    loop {
        let p = stream.prefix_indices(end);
        key.clear();
        key.extend(p[end - len..].iter().map(|&i| i as u16));
        missing.remove(&key);
        if missing.is_empty() {
            return Ok(end);
        }
        end += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionConfig {
    pub initial_prefix_length: usize,
    pub initial_max_period: usize,
    pub final_prefix_length: usize,
    pub final_max_instance_length: usize,
    pub ancestor_cap: usize,
}

/// Caller overrides; unset fields take the certified values.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionOverrides {
    pub initial_prefix_length: Option<usize>,
    pub initial_max_period: Option<usize>,
    pub final_prefix_length: Option<usize>,
    pub final_max_instance_length: Option<usize>,
    pub ancestor_cap: Option<usize>,
}

pub const DEFAULT_ANCESTOR_CAP: usize = 2_000_000;

/// Blocks at least this long always desubstitute: with `L` the longest
/// image, a block of length `>= 2L - 1` contains a full image, so its
/// parent block is nonempty.
pub fn short_block_bound(f: &Morphism) -> usize {
    2 * f.max_image_len() - 2
}

/// Certified parameters of the initial check.
pub fn certified_initial(f: &Morphism, seed: Letter, k: usize) -> Result<(usize, usize)> {
    let period = short_block_bound(f);
    let len = covering_prefix_length(f, seed, k * period)?;
    Ok((len, period))
}

/// Certified parameters of the final check.
pub fn certified_final(
    f: &Morphism,
    seed: Letter,
    closure: &AncestorClosure,
) -> Result<(usize, usize)> {
    let short = short_block_bound(f);
    let longest =
        closure.templates().iter().map(|t| t.max_instance_len(short)).max().unwrap_or(0);
    let len = covering_prefix_length(f, seed, longest)?;
    Ok((len, longest))
}

/// Looks for an additive k-power with period at most `max_period` in the
/// length-`prefix_length` prefix.
pub fn initial_check(
    f: &Morphism,
    seed: Letter,
    k: usize,
    prefix_length: usize,
    max_period: usize,
) -> Result<Option<PowerOccurrence>> {
    let opts = ScanOptions { max_period: Some(max_period), max_occurrences: 1, jobs: 1 };
    let report = scan_fixed_point(f, seed, k, PowerKind::Additive, prefix_length, opts)?;
    Ok(report.occurrences.first().copied())
}

/// An ancestor instance found by the final check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AncestorHit {
    pub template: Template,
    pub instance: TemplateInstance,
}

/// Looks for an instance of length at most `max_total` of any template in
/// `ancestors` inside the length-`prefix_length` prefix; returns the one
/// with the least start.
pub fn final_check(
    f: &Morphism,
    seed: Letter,
    ancestors: &[Template],
    prefix_length: usize,
    max_total: usize,
) -> Result<Option<AncestorHit>> {
    let mut stream = FixedPointStream::new(f.clone(), seed)?;
    let w = stream.prefix_slice(prefix_length).to_vec();
    Ok(final_check_word(&w, ancestors, max_total))
}

/// Templates sharing boundary emptiness and block-length offsets are
/// matched together: a start and `|X_1|` fix every position, and what is
/// read there identifies at most one template.
struct Shape {
    nonempty: Vec<bool>,
    offsets: Vec<i64>,
    keys: HashSet<Vec<i64>>,
}

const EMPTY_KEY: i64 = i64::MIN;

fn template_key(t: &Template) -> Vec<i64> {
    t.boundaries
        .iter()
        .map(|d| d.unwrap_or(EMPTY_KEY))
        .chain(t.deltas.iter().map(|a| a.sum))
        .collect()
}

fn final_check_word(w: &[Letter], ancestors: &[Template], max_total: usize) -> Option<AncestorHit> {
    let mut shapes: BTreeMap<(Vec<bool>, Vec<i64>), Shape> = BTreeMap::new();
    for t in ancestors {
        let nonempty: Vec<bool> = t.boundaries.iter().map(Option::is_some).collect();
        let offsets = t.length_offsets();
        shapes
            .entry((nonempty.clone(), offsets.clone()))
            .or_insert_with(|| Shape { nonempty, offsets, keys: HashSet::new() })
            .keys
            .insert(template_key(t));
    }
    let shapes: Vec<Shape> = shapes.into_values().collect();
    let sums = prefix_sums(w);
    let n = w.len();
    // An instance starting at s lies in w[s..s + max_total]; if that window
    // occurred earlier, so did the instance.
    let mut windows: HashSet<&[Letter]> = HashSet::new();
    let mut key = Vec::new();
    for s in 0..n {
        if s + max_total <= n && !windows.insert(&w[s..s + max_total]) {
            continue;
        }
        for shape in &shapes {
            let k = shape.offsets.len();
            let min_c = *shape.offsets.iter().min().expect("k >= 2");
            let fixed: i64 = shape.offsets.iter().sum::<i64>()
                + shape.nonempty.iter().filter(|&&b| b).count() as i64;
            let mut l1 = (1 - min_c).max(1);
            loop {
                let total = (k as i64 * l1 + fixed) as usize;
                if total > max_total || s + total > n {
                    break;
                }
                key.clear();
                let mut pos = s;
                let mut prev = 0;
                let mut sum_diffs = Vec::with_capacity(k - 1);
                for i in 0..=k {
                    if shape.nonempty[i] {
                        key.push(w[pos]);
                        pos += 1;
                    } else {
                        key.push(EMPTY_KEY);
                    }
                    if i < k {
                        let len = (l1 + shape.offsets[i]) as usize;
                        let bs = sums[pos + len] - sums[pos];
                        if i > 0 {
                            sum_diffs.push(bs - prev);
                        }
                        prev = bs;
                        pos += len;
                    }
                }
                key.extend_from_slice(&sum_diffs);
                if shape.keys.contains(&key) {
                    let block_lengths =
                        shape.offsets.iter().map(|&c| (l1 + c) as usize).collect();
                    let template = ancestors
                        .iter()
                        .find(|t| template_key(t) == key && t.length_offsets() == shape.offsets)
                        .expect("key came from an ancestor")
                        .clone();
                    return Some(AncestorHit {
                        template,
                        instance: TemplateInstance { start: s, block_lengths, len: total },
                    });
                }
                l1 += 1;
            }
        }
    }
    None
}

/// Pushes an ancestor instance down the discovery chain to an additive
/// k-power of the fixed point. Positions grow geometrically, so they are
/// tracked as Ψ-vectors of the preceding prefix in 128-bit arithmetic.
fn descend(
    f: &Morphism,
    seed: Letter,
    closure: &AncestorClosure,
    hit: &AncestorHit,
) -> Result<DescendedPower> {
    let mut stream = FixedPointStream::new(f.clone(), seed)?;
    let positions = hit.instance.boundary_positions(&hit.template);
    let end = hit.instance.start + hit.instance.len;
    let w = stream.prefix_slice(end).to_vec();
    let sums = prefix_sums(&w);
    let mut at: Vec<(i128, i128)> =
        positions.iter().map(|&p| (p as i128, sums[p] as i128)).collect();
    let m = f.affine_profile().expect("checked").matrix().0;
    let mut id = closure
        .templates
        .iter()
        .position(|t| *t == hit.template)
        .ok_or_else(|| Error::State("hit template is not an ancestor".into()))?;
    let mut steps = 0;
    while let Some((child, plens)) = &closure.origin[id] {
        let parent = &closure.templates[id];
        for (i, v) in at.iter_mut().enumerate() {
            let (l, s) = *v;
            let mut nl = m[0][0] as i128 * l + m[0][1] as i128 * s;
            let mut ns = m[1][0] as i128 * l + m[1][1] as i128 * s;
            if let Some(c) = parent.boundaries[i] {
                let p = psi(&f.image(c)?[..plens[i] as usize]);
                nl += p.length as i128;
                ns += p.sum as i128;
            }
            *v = (nl, ns);
        }
        id = *child as usize;
        steps += 1;
    }
    let start = at[0].0;
    let period = at[1].0 - at[0].0;
    Ok(DescendedPower { start, period, steps })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct DescendedPower {
    start: i128,
    period: i128,
    steps: usize,
}

/// Prefixes longer than this are not generated to re-check a witness.
const WITNESS_CHECK_LIMIT: i128 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Free,
    PowerFound,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Free => "FREE",
            Verdict::PowerFound => "POWER_FOUND",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// Found directly by the initial check.
    Power { occurrence: PowerOccurrence, verified: bool },
    /// An ancestor instance and the additive power it descends to.
    /// Start and period are decimal strings since they can exceed 64 bits.
    Ancestor {
        hit: AncestorHit,
        descent_steps: usize,
        start: String,
        period: String,
        /// `None` when the descended prefix is too long to generate.
        verified: Option<bool>,
        /// Least power found by a direct scan of the final-check prefix,
        /// which is often much shorter than the descended one.
        direct: Option<PowerOccurrence>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionBounds {
    pub used: DecisionConfig,
    /// Values derived from the morphism and the ancestor set; `None` for the
    /// final-check entries when the procedure stopped before computing them.
    pub certified_initial_prefix_length: usize,
    pub certified_initial_max_period: usize,
    pub certified_final_prefix_length: Option<usize>,
    pub certified_final_max_instance_length: Option<usize>,
    /// Extra direct scan over twice the initial prefix with every period.
    pub rescan_length: usize,
    pub rescan_found: Option<PowerOccurrence>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionCertificate {
    pub verdict: Verdict,
    pub k: usize,
    pub morphism: Morphism,
    pub seed: Letter,
    pub ancestor_count: usize,
    pub bounds: DecisionBounds,
    pub witness: Option<Witness>,
    pub closure_iterations: usize,
}

/// Runs the three phases. Overrides below the certified values turn a
/// clean run into `INCONCLUSIVE`.
pub fn decide_additive_power_free(
    f: &Morphism,
    seed: Letter,
    k: usize,
    overrides: DecisionOverrides,
) -> Result<DecisionCertificate> {
    root_template(k)?;
    require_hypotheses(f, Some(seed))?;
    let (cert_init_len, cert_period) = certified_initial(f, seed, k)?;
    let mut used = DecisionConfig {
        initial_prefix_length: overrides.initial_prefix_length.unwrap_or(cert_init_len),
        initial_max_period: overrides.initial_max_period.unwrap_or(cert_period),
        final_prefix_length: 0,
        final_max_instance_length: 0,
        ancestor_cap: overrides.ancestor_cap.unwrap_or(DEFAULT_ANCESTOR_CAP),
    };
    let mut bounds = DecisionBounds {
        used,
        certified_initial_prefix_length: cert_init_len,
        certified_initial_max_period: cert_period,
        certified_final_prefix_length: None,
        certified_final_max_instance_length: None,
        rescan_length: 0,
        rescan_found: None,
    };
    let mut cert = DecisionCertificate {
        verdict: Verdict::Inconclusive,
        k,
        morphism: f.clone(),
        seed,
        ancestor_count: 0,
        bounds: bounds.clone(),
        witness: None,
        closure_iterations: 0,
    };

    if let Some(occ) = initial_check(f, seed, k, used.initial_prefix_length, used.initial_max_period)? {
        let w = FixedPointStream::new(f.clone(), seed)?.prefix(occ.start + occ.len());
        cert.verdict = Verdict::PowerFound;
        cert.witness = Some(Witness::Power { occurrence: occ, verified: occ.validate(&w) });
        return Ok(cert);
    }

    let closure = ancestor_closure(f, k, used.ancestor_cap)?;
    cert.ancestor_count = closure.len();
    cert.closure_iterations = closure.iterations();
    let (cert_final_len, cert_final_total) = certified_final(f, seed, &closure)?;
    used.final_prefix_length = overrides.final_prefix_length.unwrap_or(cert_final_len);
    used.final_max_instance_length = overrides.final_max_instance_length.unwrap_or(cert_final_total);
    bounds.used = used;
    bounds.certified_final_prefix_length = Some(cert_final_len);
    bounds.certified_final_max_instance_length = Some(cert_final_total);

    if let Some(hit) = final_check(
        f,
        seed,
        closure.templates(),
        used.final_prefix_length,
        used.final_max_instance_length,
    )? {
        let d = descend(f, seed, &closure, &hit)?;
        let verified = (d.start + k as i128 * d.period <= WITNESS_CHECK_LIMIT).then(|| {
            let (start, period) = (d.start as usize, d.period as usize);
            FixedPointStream::new(f.clone(), seed)
                .map(|mut s| {
                    let w = s.prefix_slice(start + k * period);
                    is_kpower(&w[start..], k, PowerKind::Additive).unwrap_or(false)
                })
                .unwrap_or(false)
        });
        let opts = ScanOptions { max_period: None, max_occurrences: 1, jobs: 1 };
        let direct =
            scan_fixed_point(f, seed, k, PowerKind::Additive, used.final_prefix_length, opts)?
                .occurrences
                .first()
                .copied();
        cert.bounds = bounds;
        cert.verdict = Verdict::PowerFound;
        cert.witness = Some(Witness::Ancestor {
            hit,
            descent_steps: d.steps,
            start: d.start.to_string(),
            period: d.period.to_string(),
            verified,
            direct,
        });
        return Ok(cert);
    }

    bounds.rescan_length = 2 * used.initial_prefix_length;
    let opts = ScanOptions { max_period: None, max_occurrences: 1, jobs: 1 };
    let rescan = scan_fixed_point(f, seed, k, PowerKind::Additive, bounds.rescan_length, opts)?;
    bounds.rescan_found = rescan.occurrences.first().copied();
    if let Some(occ) = bounds.rescan_found {
        // Only reachable when the initial bounds were overridden downward.
        let w = FixedPointStream::new(f.clone(), seed)?.prefix(occ.start + occ.len());
        cert.bounds = bounds;
        cert.verdict = Verdict::PowerFound;
        cert.witness = Some(Witness::Power { occurrence: occ, verified: occ.validate(&w) });
        return Ok(cert);
    }

    let certified = used.initial_prefix_length >= cert_init_len
        && used.initial_max_period >= cert_period
        && used.final_prefix_length >= cert_final_len
        && used.final_max_instance_length >= cert_final_total;
    cert.bounds = bounds;
    cert.verdict = if certified { Verdict::Free } else { Verdict::Inconclusive };
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed_point::fixed_point_prefix;
    use crate::morphism::known::*;
    use crate::power::find_kpower;
    use crate::word::Word;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn all_words(sigma: i64, n: usize) -> Vec<Vec<Letter>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..sigma).map(move |c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn root_shape() {
        let r = root_template(2).unwrap();
        assert_eq!(r.boundaries, vec![None, None, None]);
        assert_eq!(r.deltas, vec![PsiVector::ZERO]);
        assert!(r.is_root());
        assert!(root_template(1).is_err());
        assert!(Template::new(vec![None, None], vec![]).is_err());
    }

    #[test]
    fn instance_examples() {
        let r2 = root_template(2).unwrap();
        let hit = find_instance(&w("0101"), &r2, 4).unwrap();
        assert_eq!((hit.start, hit.block_lengths.clone()), (0, vec![2, 2]));
        // 0101 has the shorter square 00? no; its least is at 0 with |X_1| = 2
        assert!(find_instance(&w("0101"), &r2, 3).is_none());

        let t = Template::new(vec![None, Some(1), None], vec![PsiVector::ZERO]).unwrap();
        let hit = find_instance(&w("00100"), &t, 5).unwrap();
        assert_eq!((hit.start, hit.block_lengths.clone(), hit.len), (0, vec![2, 2], 5));
        assert_eq!(hit.boundary_positions(&t), vec![0, 2, 5]);
    }

    #[test]
    fn beta_prefix_has_no_short_additive_fifth_power() {
        let b = fixed_point_prefix(&beta(), 0, 10_000).unwrap();
        assert!(find_instance(&b, &root_template(5).unwrap(), 200).is_none());
    }

    #[test]
    fn root_matches_exactly_the_additive_powers() {
        for n in 0..=7 {
            for word in all_words(3, n) {
                for k in 2..=3 {
                    let by_template =
                        find_instance(&word, &root_template(k).unwrap(), word.len()).is_some();
                    let direct = find_kpower(&word, k, PowerKind::Additive, None).unwrap().is_some();
                    assert_eq!(by_template, direct, "{word:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn parents_examples() {
        for (f, k) in [(beta(), 3), (delta(), 4)] {
            let r = root_template(k).unwrap();
            assert!(parents(&r, &f).unwrap().contains(&r));
        }
        let rules = ParentRules::new(&beta()).unwrap();
        for c in [0, 1] {
            let interior = rules.cuts(None).iter().filter(|x| x.parent == Some(c)).count();
            assert_eq!(interior, 4);
        }
        // M_β^{-1} (1,0) = (1/5, -1/10)
        assert_eq!(rules.m.solve_integral(PsiVector::new(1, 0)).unwrap(), None);
        let singular: Morphism = "0->01 1->10".parse().unwrap();
        assert_eq!(parents(&root_template(2).unwrap(), &singular), Err(Error::SingularMatrix));
    }

    #[test]
    fn parent_deltas_solve_the_defining_equation() {
        let f = delta();
        let rules = ParentRules::new(&f).unwrap();
        let closure = ancestor_closure(&f, 3, DEFAULT_ANCESTOR_CAP).unwrap();
        for t in closure.templates() {
            for (p, cuts) in rules.parents(t) {
                for j in 1..t.k() {
                    let rhs = t.deltas[j - 1] - cuts[j].q + cuts[j - 1].q - cuts[j + 1].p + cuts[j].p;
                    assert_eq!(rules.m.mul_vec(p.deltas[j - 1]), rhs);
                }
            }
        }
    }

    #[test]
    fn closure_is_a_deterministic_fixpoint() {
        for (f, k, count) in [(beta(), 5, 129), (delta(), 4, 1084)] {
            let a = ancestor_closure(&f, k, DEFAULT_ANCESTOR_CAP).unwrap();
            assert_eq!(a.len(), count);
            assert_eq!(a.templates()[0], root_template(k).unwrap());
            let set = a.to_set();
            for t in set.iter() {
                for p in parents(t, &f).unwrap().iter() {
                    assert!(set.contains(p), "{p} missing");
                }
            }
            let b = ancestor_closure(&f, k, DEFAULT_ANCESTOR_CAP).unwrap();
            assert_eq!(a.templates(), b.templates());
        }
    }

    #[test]
    fn closure_respects_the_cap() {
        assert!(matches!(ancestor_closure(&delta(), 4, 100), Err(Error::ResourceExceeded(_))));
    }

    #[test]
    fn hypotheses_are_reported() {
        let failed = hypothesis_failures(&gamma(), Some(1));
        assert!(failed.iter().any(|m| m.contains("strictly growing")), "{failed:?}");
        let e = decide_additive_power_free(&gamma(), 1, 4, Default::default()).unwrap_err();
        assert!(matches!(e, Error::Precondition(_)));
        let singular: Morphism = "0->01 1->10".parse().unwrap();
        assert!(hypothesis_failures(&singular, Some(0))[0].contains("singular"));
        assert!(hypothesis_failures(&beta(), Some(1))[0].contains("prolongable"));
        assert!(hypothesis_failures(&beta(), Some(0)).is_empty());
        assert!(hypothesis_failures(&delta(), Some(1)).is_empty());
    }

    /// A random word over `0..sigma` with the given length and letter sum.
    fn word_with(rng: &mut ChaCha8Rng, sigma: i64, len: usize, sum: i64) -> Option<Vec<Letter>> {
        if sum < 0 || sum > (sigma - 1) * len as i64 {
            return None;
        }
        let mut rem = sum;
        let mut out = Vec::with_capacity(len);
        for r in (0..len).rev() {
            let lo = (rem - (sigma - 1) * r as i64).max(0);
            let hi = rem.min(sigma - 1);
            let c = rng.gen_range(lo..=hi);
            out.push(c);
            rem -= c;
        }
        Some(out)
    }

    /// Random word containing an instance of `t`, or `None` when no block
    /// sums fit the drawn lengths.
    fn plant(rng: &mut ChaCha8Rng, t: &Template, sigma: i64) -> Option<Vec<Letter>> {
        let c = t.length_offsets();
        let min_c = *c.iter().min().unwrap();
        let l1 = (1 - min_c).max(1) + rng.gen_range(0..5);
        let mut offsets = vec![0];
        for a in &t.deltas {
            offsets.push(offsets.last().unwrap() + a.sum);
        }
        // every block sum s_1 + offsets[i] must lie in [0, (sigma-1)|X_i|]
        let lo = offsets.iter().map(|&o| -o).max().unwrap().max(0);
        let hi = c.iter().zip(&offsets).map(|(&ci, &o)| (sigma - 1) * (l1 + ci) - o).min().unwrap();
        if lo > hi {
            return None;
        }
        let s1 = rng.gen_range(lo..=hi);
        let mut out: Vec<Letter> = (0..rng.gen_range(0..3)).map(|_| rng.gen_range(0..sigma)).collect();
        for (i, d) in t.boundaries.iter().enumerate() {
            out.extend(d.iter());
            if i < t.k() {
                out.extend(word_with(rng, sigma, (l1 + c[i]) as usize, s1 + offsets[i])?);
            }
        }
        out.extend((0..rng.gen_range(0..3)).map(|_| rng.gen_range(0..sigma)));
        Some(out)
    }

    #[test]
    fn parent_instances_map_to_child_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (f, sigma, k) in [(beta(), 2, 5), (delta(), 3, 4), (beta(), 2, 3)] {
            let closure = ancestor_closure(&f, k, DEFAULT_ANCESTOR_CAP).unwrap();
            let pairs: Vec<(&Template, Vec<Template>)> = closure
                .templates()
                .iter()
                .map(|t| (t, parents(t, &f).unwrap().members.into_iter().collect()))
                .filter(|(_, ps): &(_, Vec<_>)| !ps.is_empty())
                .collect();
            let mut planted = 0;
            for _ in 0..20_000 {
                let (t, ps) = &pairs[rng.gen_range(0..pairs.len())];
                let p = &ps[rng.gen_range(0..ps.len())];
                let Some(word) = plant(&mut rng, p, sigma) else { continue };
                assert!(find_instance(&word, p, word.len()).is_some());
                let image = f.apply(&word).unwrap();
                assert!(find_instance(&image, t, image.len()).is_some(), "{p} in {word:?} -> {t}");
                planted += 1;
                if planted == 1000 {
                    break;
                }
            }
            assert!(planted == 1000, "only {planted} instances planted");
        }
    }

    #[test]
    fn factor_closure_matches_a_long_prefix() {
        for (f, seed, len) in [(beta(), 0, 12), (delta(), 1, 9)] {
            let closed = factor_closure(&f, seed, len).unwrap();
            let p = fixed_point_prefix(&f, seed, 200_000).unwrap();
            let dom = f.domain().clone();
            let seen: HashSet<Vec<u16>> = p
                .windows(len)
                .map(|x| x.iter().map(|&c| dom.index_of(c).unwrap() as u16).collect())
                .collect();
            assert_eq!(closed, seen);
            let n = covering_prefix_length(&f, seed, len).unwrap();
            let early: HashSet<&[Letter]> = p[..n].windows(len).collect();
            let short: HashSet<&[Letter]> = p[..n - 1].windows(len).collect();
            assert_eq!(early.len(), closed.len());
            assert!(short.len() < closed.len());
        }
    }

    #[test]
    fn initial_checks() {
        let (n, period) = certified_initial(&beta(), 0, 5).unwrap();
        assert_eq!(period, 8);
        assert!(initial_check(&beta(), 0, 5, n, period).unwrap().is_none());
        let (n, period) = certified_initial(&delta(), 1, 4).unwrap();
        assert_eq!(period, 16);
        assert!(initial_check(&delta(), 1, 4, n, period).unwrap().is_none());
        let (n, period) = certified_initial(&delta(), 1, 2).unwrap();
        let occ = initial_check(&delta(), 1, 2, n, period).unwrap().unwrap();
        let g = fixed_point_prefix(&delta(), 1, n).unwrap();
        assert!(occ.validate(&g));
    }

    #[test]
    fn final_check_with_only_the_root_finds_a_square() {
        let root = [root_template(2).unwrap()];
        let hit = final_check(&beta(), 0, &root, 1000, 20).unwrap().unwrap();
        let b = fixed_point_prefix(&beta(), 0, 1000).unwrap();
        let l = hit.instance.block_lengths[0];
        let s = hit.instance.start;
        assert!(is_kpower(&b[s..s + 2 * l], 2, PowerKind::Additive).unwrap());
    }

    #[test]
    fn decisions() {
        for (f, seed, k, count) in [(beta(), 0, 5, 129), (delta(), 1, 4, 1084)] {
            let c = decide_additive_power_free(&f, seed, k, Default::default()).unwrap();
            assert_eq!(c.verdict, Verdict::Free);
            assert_eq!(c.ancestor_count, count);
            assert!(c.witness.is_none());
            let used = c.bounds.used;
            assert_eq!(Some(used.final_prefix_length), c.bounds.certified_final_prefix_length);
            let scan = scan_fixed_point(
                &f,
                seed,
                k,
                PowerKind::Additive,
                10 * used.final_prefix_length.max(used.initial_prefix_length),
                ScanOptions::default(),
            )
            .unwrap();
            assert!(scan.is_free());
        }
        let c = decide_additive_power_free(&beta(), 0, 4, Default::default()).unwrap();
        assert_eq!(c.verdict, Verdict::PowerFound);
        let Some(Witness::Power { occurrence, verified }) = c.witness else { panic!() };
        assert!(verified);
        let b = fixed_point_prefix(&beta(), 0, occurrence.start + occurrence.len()).unwrap();
        assert!(is_kpower(occurrence.factor(&b), 4, PowerKind::Additive).unwrap());
    }

    #[test]
    fn undercut_bounds_are_inconclusive() {
        let o = DecisionOverrides { final_prefix_length: Some(10), ..Default::default() };
        let c = decide_additive_power_free(&beta(), 0, 5, o).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert_eq!(c.bounds.used.final_prefix_length, 10);
    }

    #[test]
    fn long_powers_are_found_through_ancestors() {
        // the shortest additive 4-power here has period 8 > 2L - 2 = 6
        let f: Morphism = "0->0111 1->0001".parse().unwrap();
        let c = decide_additive_power_free(&f, 0, 4, Default::default()).unwrap();
        assert_eq!(c.verdict, Verdict::PowerFound);
        let Some(Witness::Ancestor { verified, start, period, direct, .. }) = c.witness else {
            panic!("{:?}", c.witness)
        };
        assert_eq!(verified, Some(true));
        let (start, period): (usize, usize) = (start.parse().unwrap(), period.parse().unwrap());
        let p = fixed_point_prefix(&f, 0, start + 4 * period).unwrap();
        assert!(is_kpower(&p[start..], 4, PowerKind::Additive).unwrap());
        assert!(direct.unwrap().validate(&p));
    }

    #[test]
    fn certificate_serializes() {
        let c = decide_additive_power_free(&beta(), 0, 5, Default::default()).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        for key in ["verdict", "k", "morphism", "seed", "ancestor_count", "bounds", "witness", "closure_iterations"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["verdict"], "FREE");
        assert_eq!(v["morphism"], "0->00001 1->01101");
        let back: DecisionCertificate = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }
}
