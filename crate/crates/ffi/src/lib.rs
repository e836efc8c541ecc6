//! C ABI over `richpow`.
//!
//! Conventions:
//! - every fallible function returns an [`RpStatus`]; on failure a message
//!   is kept per thread and read with [`rp_last_error_message`];
//! - objects are opaque handles created by `*_new`/`*_parse` and released
//!   with the matching `*_free`;
//! - strings returned through `char **out` are owned by the caller and
//!   released with [`rp_string_free`];
//! - words are arrays of `int64_t` letters.
//!
//! The header `include/richpow.h` is generated by cbindgen at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use richpow::eertree::{is_rich, stream_richness, EerTree};
use richpow::fixed_point::FixedPointStream;
use richpow::morphism::Morphism;
use richpow::power::{is_kpower, scan_fixed_point, PowerKind, ScanOptions};
use richpow::search::{longest_rich_power_free, SearchSpec};
use richpow::templates::{decide_additive_power_free, Verdict};
use richpow::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Precondition = 5,
    ResourceExceeded = 6,
    BufferTooSmall = 7,
    Io = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RpPowerKind {
    Ordinary = 0,
    Abelian = 1,
    Additive = 2,
}

impl From<RpPowerKind> for PowerKind {
    fn from(k: RpPowerKind) -> Self {
        match k {
            RpPowerKind::Ordinary => PowerKind::Ordinary,
            RpPowerKind::Abelian => PowerKind::Abelian,
            RpPowerKind::Additive => PowerKind::Additive,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RpVerdict {
    Free = 0,
    PowerFound = 1,
    Inconclusive = 2,
}

pub struct RpMorphism(Morphism);

pub struct RpFixedPoint(FixedPointStream);

pub struct RpEerTree(EerTree);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RpStatus {
    match e {
        Error::Parse(_) | Error::InvalidAlphabet(_) | Error::InvalidMorphism(_) => RpStatus::Parse,
        Error::LetterOutsideDomain(_) | Error::UnmappedLetter(_) | Error::AlphabetMismatch(_) => {
            RpStatus::InvalidArgument
        }
        Error::NotProlongable(_) | Error::Precondition(_) | Error::SingularMatrix => RpStatus::Precondition,
        Error::ResourceExceeded(_) => RpStatus::ResourceExceeded,
        Error::Io(_) | Error::Checkpoint(_) => RpStatus::Io,
        Error::State(_) => RpStatus::Internal,
        Error::UnsupportedDimension(_) | Error::InvalidParameter(_) => RpStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (RpStatus, String)>) -> RpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RpStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RpStatus::Internal
        }
    }
}

type Failure = (RpStatus, String);

fn lib<T>(r: richpow::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err((RpStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    non_null(p, what)?;
    CStr::from_ptr(p).to_str().map_err(|_| (RpStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn letters_arg<'a>(p: *const i64, len: usize) -> Result<&'a [i64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(p, "word")?;
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    non_null(out, "out")?;
    let c = CString::new(s).map_err(|_| (RpStatus::Internal, "string contains nul".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

fn to_json<T: serde::Serialize + ?Sized>(v: &T) -> Result<String, Failure> {
    serde_json::to_string(v).map_err(|e| (RpStatus::Internal, e.to_string()))
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn rp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn rp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses rules such as `"0->00001 1->01101"`.
///
/// # Safety
/// `rules` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_morphism_parse(rules: *const c_char, out: *mut *mut RpMorphism) -> RpStatus {
    guard(|| {
        non_null(out, "out")?;
        let f: Morphism = lib(str_arg(rules, "rules")?.parse())?;
        *out = Box::into_raw(Box::new(RpMorphism(f)));
        Ok(())
    })
}

/// # Safety
/// `m` must come from [`rp_morphism_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rp_morphism_free(m: *mut RpMorphism) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Canonical rule text.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_morphism_to_string(m: *const RpMorphism, out: *mut *mut c_char) -> RpStatus {
    guard(|| {
        non_null(m, "morphism")?;
        put_string(out, (*m).0.to_string())
    })
}

/// Writes `f(word)` into `buf` (capacity `cap`) and its length into
/// `out_len`. When `cap` is too small nothing is written to `buf`, the
/// needed length is still reported and `BufferTooSmall` is returned.
///
/// # Safety
/// `word` must hold `len` letters; `buf` must hold `cap` letters.
#[no_mangle]
pub unsafe extern "C" fn rp_morphism_apply(
    m: *const RpMorphism,
    word: *const i64,
    len: usize,
    buf: *mut i64,
    cap: usize,
    out_len: *mut usize,
) -> RpStatus {
    guard(|| {
        non_null(m, "morphism")?;
        non_null(out_len, "out_len")?;
        let image = lib((*m).0.apply(letters_arg(word, len)?))?;
        *out_len = image.len();
        if image.len() > cap {
            return Err((RpStatus::BufferTooSmall, format!("image needs {} letters", image.len())));
        }
        if !image.is_empty() {
            non_null(buf, "buf")?;
            ptr::copy_nonoverlapping(image.as_ptr(), buf, image.len());
        }
        Ok(())
    })
}

/// Stream over the fixed point of `m` starting with `seed`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_fixed_point_new(m: *const RpMorphism, seed: i64, out: *mut *mut RpFixedPoint) -> RpStatus {
    guard(|| {
        non_null(m, "morphism")?;
        non_null(out, "out")?;
        let s = lib(FixedPointStream::new((*m).0.clone(), seed))?;
        *out = Box::into_raw(Box::new(RpFixedPoint(s)));
        Ok(())
    })
}

/// Copies the length-`n` prefix into `buf`, which must hold `n` letters.
///
/// # Safety
/// `fp` must be a live handle; `buf` must hold `n` letters.
#[no_mangle]
pub unsafe extern "C" fn rp_fixed_point_prefix(fp: *mut RpFixedPoint, n: usize, buf: *mut i64) -> RpStatus {
    guard(|| {
        non_null(fp, "fixed point")?;
        if n == 0 {
            return Ok(());
        }
        non_null(buf, "buf")?;
        let p = (*fp).0.prefix_slice(n);
        ptr::copy_nonoverlapping(p.as_ptr(), buf, n);
        Ok(())
    })
}

/// # Safety
/// `fp` must come from [`rp_fixed_point_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rp_fixed_point_free(fp: *mut RpFixedPoint) {
    if !fp.is_null() {
        drop(Box::from_raw(fp));
    }
}

#[no_mangle]
pub extern "C" fn rp_eertree_new() -> *mut RpEerTree {
    Box::into_raw(Box::new(RpEerTree(EerTree::new())))
}

/// Appends a letter; `out_new` tells whether a new palindrome appeared.
///
/// # Safety
/// `t` must be a live handle; `out_new` may be null.
#[no_mangle]
pub unsafe extern "C" fn rp_eertree_add_letter(t: *mut RpEerTree, letter: i64, out_new: *mut bool) -> RpStatus {
    guard(|| {
        non_null(t, "tree")?;
        let created = (*t).0.add_letter(letter);
        if !out_new.is_null() {
            *out_new = created;
        }
        Ok(())
    })
}

/// Reverts the last [`rp_eertree_add_letter`].
///
/// # Safety
/// `t` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rp_eertree_undo(t: *mut RpEerTree) -> RpStatus {
    guard(|| {
        non_null(t, "tree")?;
        lib((*t).0.undo())
    })
}

/// Distinct nonempty palindromes in the current word (0 for null).
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn rp_eertree_palindrome_count(t: *const RpEerTree) -> usize {
    if t.is_null() {
        0
    } else {
        (*t).0.palindrome_count()
    }
}

/// Length of the current word (0 for null).
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn rp_eertree_len(t: *const RpEerTree) -> usize {
    if t.is_null() {
        0
    } else {
        (*t).0.len()
    }
}

/// # Safety
/// `t` must come from [`rp_eertree_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rp_eertree_free(t: *mut RpEerTree) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Is the whole word a k-power of the given kind?
///
/// # Safety
/// `word` must hold `len` letters; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_is_kpower(word: *const i64, len: usize, k: usize, kind: RpPowerKind, out: *mut bool) -> RpStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lib(is_kpower(letters_arg(word, len)?, k, kind.into()))?;
        Ok(())
    })
}

/// # Safety
/// `word` must hold `len` letters; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_is_rich(word: *const i64, len: usize, out: *mut bool) -> RpStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = is_rich(letters_arg(word, len)?).rich;
        Ok(())
    })
}

/// Scan report (JSON) for the length-`n` prefix; `max_period` 0 means all.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_scan_fixed_point_json(
    m: *const RpMorphism,
    seed: i64,
    k: usize,
    kind: RpPowerKind,
    n: usize,
    max_period: usize,
    out: *mut *mut c_char,
) -> RpStatus {
    guard(|| {
        non_null(m, "morphism")?;
        let opts = ScanOptions { max_period: (max_period > 0).then_some(max_period), ..Default::default() };
        let r = lib(scan_fixed_point(&(*m).0, seed, k, kind.into(), n, opts))?;
        put_string(out, to_json(&r)?)
    })
}

/// Richness report (JSON) for the length-`n` prefix of the fixed point.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_stream_richness_json(m: *const RpMorphism, seed: i64, n: usize, out: *mut *mut c_char) -> RpStatus {
    guard(|| {
        non_null(m, "morphism")?;
        put_string(out, to_json(&lib(stream_richness(&(*m).0, seed, n))?)?)
    })
}

/// Decision certificate (JSON) with certified default bounds. `verdict`
/// may be null.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_decide_json(
    m: *const RpMorphism,
    seed: i64,
    k: usize,
    verdict: *mut RpVerdict,
    out: *mut *mut c_char,
) -> RpStatus {
    guard(|| {
        non_null(m, "morphism")?;
        let c = lib(decide_additive_power_free(&(*m).0, seed, k, Default::default()))?;
        if !verdict.is_null() {
            *verdict = match c.verdict {
                Verdict::Free => RpVerdict::Free,
                Verdict::PowerFound => RpVerdict::PowerFound,
                Verdict::Inconclusive => RpVerdict::Inconclusive,
            };
        }
        put_string(out, to_json(&c)?)
    })
}

/// Exhaustive search (JSON result) for the longest word over `alphabet`
/// (e.g. `"0,1,2"`) avoiding k-powers, with symmetry reduction.
///
/// # Safety
/// `alphabet` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rp_search_json(
    alphabet: *const c_char,
    k: usize,
    kind: RpPowerKind,
    rich: bool,
    out: *mut *mut c_char,
) -> RpStatus {
    guard(|| {
        let alphabet: richpow::Alphabet = lib(str_arg(alphabet, "alphabet")?.parse())?;
        let kind: PowerKind = kind.into();
        // additive powers are only permutation-invariant over two letters
        let symmetric = kind != PowerKind::Additive || alphabet.len() == 2;
        let spec = SearchSpec::new(alphabet, k, kind, rich).with_symmetry_reduction(symmetric);
        put_string(out, to_json(&lib(longest_rich_power_free(&spec))?)?)
    })
}
