//! C interface.
//!
//! Every function returns a [`CpStatus`]; on failure a message is available
//! from [`cp_last_error`] on the same thread. Committees are opaque handles
//! created by `cp_committee_new*` and released with [`cp_committee_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use committee_power::equivalence::enumerate_classes;
use committee_power::grid::WeightGrid;
use committee_power::power::pbi;
use committee_power::render::{render_map, sweep, RenderOptions};
use committee_power::scoring::winner;
use committee_power::{Error, Profile, Ranking, Rational, ScoringCommittee, ScoringVector};
use num_bigint::BigInt;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Invalid = 3,
    Shape = 4,
    SizeLimit = 5,
    OutOfRange = 6,
    Contract = 7,
    NotFound = 8,
    Dependency = 9,
    Io = 10,
    Encoding = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

/// Opaque committee handle.
pub struct CpCommittee {
    inner: ScoringCommittee,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CpStatus {
    match e {
        Error::Parse { .. } => CpStatus::Parse,
        Error::Invalid(_) => CpStatus::Invalid,
        Error::Shape(_) => CpStatus::Shape,
        Error::SizeLimit { .. } => CpStatus::SizeLimit,
        Error::OutOfRange { .. } => CpStatus::OutOfRange,
        Error::Contract(_) => CpStatus::Contract,
        Error::NotFound { .. } => CpStatus::NotFound,
        Error::Dependency(_) => CpStatus::Dependency,
        Error::Io { .. } => CpStatus::Io,
        Error::Encoding(_) => CpStatus::Encoding,
    }
}

enum Fail {
    Engine(Error),
    Null(&'static str),
    Buffer { needed: usize },
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Engine(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CpStatus::Ok
        }
        Ok(Err(Fail::Engine(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer passed for {what}"));
            CpStatus::NullPointer
        }
        Ok(Err(Fail::Buffer { needed })) => {
            set_error(format!("output buffer needs {needed} elements"));
            CpStatus::BufferTooSmall
        }
        Err(_) => {
            set_error("internal panic".into());
            CpStatus::Panic
        }
    }
}

fn rational(num: i64, den: i64) -> Result<Rational, Fail> {
    if den == 0 {
        return Err(Error::Invalid("zero denominator".into()).into());
    }
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}

/// # Safety
/// `ptr` must be null or point to `len` readable values.
unsafe fn slice<'a, T>(ptr: *const T, len: usize, what: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn rationals(
    num: *const i64,
    den: *const i64,
    len: usize,
    what: &'static str,
) -> Result<Vec<Rational>, Fail> {
    let n = slice(num, len, what)?;
    let d = slice(den, len, what)?;
    n.iter().zip(d).map(|(&a, &b)| rational(a, b)).collect()
}

fn committee<'a>(c: *const CpCommittee) -> Result<&'a ScoringCommittee, Fail> {
    // SAFETY: non-null handles come from cp_committee_new*.
    unsafe { c.as_ref() }
        .map(|c| &c.inner)
        .ok_or(Fail::Null("committee"))
}

fn emit(out: *mut *mut CpCommittee, c: ScoringCommittee) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    // SAFETY: checked non-null above.
    unsafe { *out = Box::into_raw(Box::new(CpCommittee { inner: c })) };
    Ok(())
}

/// Committee with weights `weight_num[i] / weight_den[i]` under the scoring
/// vector `(1, s_num / s_den, 0)`.
///
/// # Safety
/// The weight arrays hold `n` entries; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_committee_new(
    weight_num: *const i64,
    weight_den: *const i64,
    n: usize,
    s_num: i64,
    s_den: i64,
    out: *mut *mut CpCommittee,
) -> CpStatus {
    guard(|| {
        let w = rationals(weight_num, weight_den, n, "weights")?;
        emit(out, ScoringCommittee::with_s(w, &rational(s_num, s_den)?)?)
    })
}

/// Committee with an arbitrary scoring vector of length `m`.
///
/// # Safety
/// The weight arrays hold `n` entries, the score arrays `m`; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_committee_new_scores(
    weight_num: *const i64,
    weight_den: *const i64,
    n: usize,
    score_num: *const i64,
    score_den: *const i64,
    m: usize,
    out: *mut *mut CpCommittee,
) -> CpStatus {
    guard(|| {
        let w = rationals(weight_num, weight_den, n, "weights")?;
        let s = ScoringVector::new(rationals(score_num, score_den, m, "scores")?)?;
        emit(out, ScoringCommittee::new(w, s)?)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `c` is null or a live handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cp_committee_free(c: *mut CpCommittee) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Number of players, or 0 for a null handle.
///
/// # Safety
/// `c` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_committee_players(c: *const CpCommittee) -> usize {
    c.as_ref().map_or(0, |c| c.inner.n())
}

/// Number of alternatives, or 0 for a null handle.
///
/// # Safety
/// `c` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cp_committee_alternatives(c: *const CpCommittee) -> usize {
    c.as_ref().map_or(0, |c| c.inner.m())
}

/// Winner for a profile given as `n * m` alternative indices, one ranking
/// per player from most to least preferred.
///
/// # Safety
/// `rankings` holds `len` entries; `winner_out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_winner(
    c: *const CpCommittee,
    rankings: *const u32,
    len: usize,
    winner_out: *mut usize,
) -> CpStatus {
    guard(|| {
        let c = committee(c)?;
        let flat = slice(rankings, len, "rankings")?;
        if len != c.n() * c.m() {
            return Err(Error::Shape(format!(
                "expected {} ranking entries, got {len}",
                c.n() * c.m()
            ))
            .into());
        }
        let profile = Profile::new(
            flat.chunks(c.m())
                .map(|r| Ranking::new(r.iter().map(|&a| a as usize).collect()))
                .collect::<Result<_, _>>()?,
        )?;
        let w = winner(c, &profile)?;
        if winner_out.is_null() {
            return Err(Fail::Null("winner_out"));
        }
        *winner_out = w;
        Ok(())
    })
}

/// Swing counts per player and their common denominator. The power of
/// player `i` is `swings_out[i] / *denominator_out`.
///
/// # Safety
/// `swings_out` has room for `capacity` values; `denominator_out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_power(
    c: *const CpCommittee,
    swings_out: *mut u64,
    capacity: usize,
    denominator_out: *mut u64,
) -> CpStatus {
    guard(|| {
        let c = committee(c)?;
        if capacity < c.n() {
            return Err(Fail::Buffer { needed: c.n() });
        }
        if swings_out.is_null() {
            return Err(Fail::Null("swings_out"));
        }
        if denominator_out.is_null() {
            return Err(Fail::Null("denominator_out"));
        }
        let p = pbi(c)?;
        ptr::copy_nonoverlapping(p.swing_counts().as_ptr(), swings_out, c.n());
        *denominator_out = p.denominator();
        Ok(())
    })
}

/// Number of structural classes of three-player weights under `(1, s, 0)`.
///
/// # Safety
/// `count_out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cp_class_count(
    s_num: i64,
    s_den: i64,
    grid_denominator: u32,
    count_out: *mut usize,
) -> CpStatus {
    guard(|| {
        let s = rational(s_num, s_den)?;
        let n = enumerate_classes(&s, &WeightGrid::new(grid_denominator)?)?.len();
        if count_out.is_null() {
            return Err(Fail::Null("count_out"));
        }
        *count_out = n;
        Ok(())
    })
}

/// Renders the simplex map for `(1, s, 0)` to a PNG at `path`. A zero
/// `enlarge_radius` disables widening of thin classes.
///
/// # Safety
/// `path` is a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn cp_render(
    s_num: i64,
    s_den: i64,
    grid_denominator: u32,
    size: u32,
    enlarge_radius: u32,
    path: *const c_char,
) -> CpStatus {
    guard(|| {
        if path.is_null() {
            return Err(Fail::Null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Error::Encoding("path is not UTF-8".into()))?;
        let s = rational(s_num, s_den)?;
        let mut options = RenderOptions::new(size);
        options.enlarge_thin_classes = (enlarge_radius > 0).then_some(enlarge_radius);
        let sw = sweep(&s, grid_denominator)?;
        render_map(&sw, &s, grid_denominator, &options)?.write_png(Path::new(path))?;
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn cp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
