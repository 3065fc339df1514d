//! C ABI over the `wreathwalk` toolkit.
//!
//! Groups and elements are opaque heap handles owned by the caller and
//! released with the matching `_free` function. Every fallible call returns a
//! [`WwStatus`]; on failure a description is kept per thread and can be
//! copied out with [`ww_last_error_message`]. Outputs are written only on
//! success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wreathwalk::estimators::drift_mc_bracket;
use wreathwalk::group::{word_length_bracket, Element, GeneratorSet, GroupSpec, Weighting};
use wreathwalk::iterlog::{ln_l_tilde, threshold_t, ConcaveExtension, IterLogParams, TowerReal};
use wreathwalk::lattice::{functional_estimate, range_statistics};
use wreathwalk::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Parse = 3,
    SpecMismatch = 4,
    Domain = 5,
    Resource = 6,
    OutsideBall = 7,
    Internal = 8,
}

/// Local-time functionals for [`ww_functional_estimate`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WwFunctional {
    /// `b ↦ sqrt b`
    Sqrt = 0,
    /// `b ↦ 1{b > 0}`, whose sum is the range
    Indicator = 1,
    /// `b ↦ b`, whose sum is `n + 1`
    Identity = 2,
    /// The concave extension `L_(k, alpha)`
    Extension = 3,
}

/// A group with its decorated generating set.
pub struct WwGroup {
    spec: GroupSpec,
    gens: GeneratorSet,
}

/// An element of some group. Operations check that it fits the group given.
pub struct WwElement {
    inner: Element,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WwEstimate {
    pub n: u64,
    pub trials: u64,
    pub mean: f64,
    /// Standard error of the mean (named to avoid the C `stderr` macro).
    pub std_error: f64,
    pub master_seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WwRangeStats {
    pub n: u64,
    pub trials: u64,
    pub master_seed: u64,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    /// `E[R] ln n / n`
    pub normalized_mean: f64,
    /// `6 E[R]^2 + E[R]`
    pub variance_bound: f64,
    pub q1: f64,
    pub q2: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WwDriftBracket {
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
    pub lower_mean: f64,
    pub lower_stderr: f64,
    pub upper_mean: f64,
    pub upper_stderr: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> WwStatus {
    match e {
        Error::Parse { .. } => WwStatus::Parse,
        Error::SpecMismatch(_) => WwStatus::SpecMismatch,
        Error::Resource { .. } => WwStatus::Resource,
        Error::Domain(_) => WwStatus::Domain,
        Error::OutsideBall(_) => WwStatus::OutsideBall,
        Error::InvalidInput(_) | Error::Assertion(_) | Error::Io(_) => WwStatus::InvalidInput,
    }
}

struct Failure(WwStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(WwStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, records any failure or panic and converts it to a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> WwStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => WwStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal error: {message}"));
            WwStatus::Internal
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(WwStatus::InvalidInput, format!("{what} is not UTF-8")))
}

/// Boxes `value` into `*out`; checks `out` first so nothing leaks.
unsafe fn give<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

unsafe fn give_element(out: *mut *mut WwElement, inner: Element) -> Result<(), Failure> {
    give(out, WwElement { inner })
}

fn params(k: u32, alpha: f64) -> Result<IterLogParams, Failure> {
    Ok(IterLogParams::new(k, alpha)?)
}

fn checked(group: &WwGroup, e: &WwElement) -> Result<(), Failure> {
    Ok(group.spec.validate(&e.inner)?)
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len`) and returns the full message length
/// without the terminator. `buf` may be null to query the length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ww_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let bytes = e.borrow();
        let bytes = bytes.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ww_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a group such as `"Z2 wr C2"` and builds its generators. With
/// `word_multiplicity` false each distinct generator has equal weight.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ww_group_new(
    spec: *const c_char,
    word_multiplicity: bool,
    out: *mut *mut WwGroup,
) -> WwStatus {
    guard(|| {
        let spec: GroupSpec = text(spec, "spec")?.parse()?;
        let weighting = if word_multiplicity {
            Weighting::WordMultiplicity
        } else {
            Weighting::Distinct
        };
        let gens = GeneratorSet::build(&spec, weighting)?;
        give(out, WwGroup { spec, gens })
    })
}

/// # Safety
/// `group` must be null or a handle from [`ww_group_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ww_group_free(group: *mut WwGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Number of generators, 0 for a null handle.
///
/// # Safety
/// `group` must be null or a live group handle.
#[no_mangle]
pub unsafe extern "C" fn ww_group_generator_count(group: *const WwGroup) -> usize {
    group.as_ref().map_or(0, |g| g.gens.len())
}

/// A new element handle for generator `index`.
///
/// # Safety
/// `group` must be a live group handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ww_group_generator(group: *const WwGroup, index: usize, out: *mut *mut WwElement) -> WwStatus {
    guard(|| {
        let g = borrow(group, "group")?;
        let e = g.gens.elements().get(index).cloned().ok_or_else(|| {
            Failure(
                WwStatus::InvalidInput,
                format!("generator index {index} out of range 0..{}", g.gens.len()),
            )
        })?;
        give_element(out, e)
    })
}

/// # Safety
/// `group` must be a live group handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ww_element_identity(group: *const WwGroup, out: *mut *mut WwElement) -> WwStatus {
    guard(|| {
        let g = borrow(group, "group")?;
        give_element(out, g.spec.identity())
    })
}

/// # Safety
/// `element` must be null or a live element handle.
#[no_mangle]
pub unsafe extern "C" fn ww_element_free(element: *mut WwElement) {
    if !element.is_null() {
        drop(Box::from_raw(element));
    }
}

/// `out = a · b`.
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ww_element_multiply(
    group: *const WwGroup,
    a: *const WwElement,
    b: *const WwElement,
    out: *mut *mut WwElement,
) -> WwStatus {
    guard(|| {
        let g = borrow(group, "group")?;
        let (a, b) = (borrow(a, "a")?, borrow(b, "b")?);
        checked(g, a)?;
        checked(g, b)?;
        let product = g.spec.multiply(&a.inner, &b.inner)?;
        give_element(out, product)
    })
}

/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ww_element_invert(
    group: *const WwGroup,
    a: *const WwElement,
    out: *mut *mut WwElement,
) -> WwStatus {
    guard(|| {
        let g = borrow(group, "group")?;
        let a = borrow(a, "a")?;
        checked(g, a)?;
        give_element(out, g.spec.invert(&a.inner)?)
    })
}

/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ww_element_equal(a: *const WwElement, b: *const WwElement, out: *mut bool) -> WwStatus {
    guard(|| {
        let equal = borrow(a, "a")?.inner == borrow(b, "b")?.inner;
        write(out, equal, "out")
    })
}

/// Canonical text of `element`, released with [`ww_string_free`].
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ww_element_encode(
    group: *const WwGroup,
    element: *const WwElement,
    out: *mut *mut c_char,
) -> WwStatus {
    guard(|| {
        let g = borrow(group, "group")?;
        let e = borrow(element, "element")?;
        checked(g, e)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CString::new(g.spec.encode(&e.inner))
            .map_err(|_| Failure(WwStatus::Internal, "encoding contains NUL".into()))?;
        write(out, s.into_raw(), "out")
    })
}

/// Parses the canonical text form.
///
/// # Safety
/// `encoded` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ww_element_decode(
    group: *const WwGroup,
    encoded: *const c_char,
    out: *mut *mut WwElement,
) -> WwStatus {
    guard(|| {
        let g = borrow(group, "group")?;
        let e = g.spec.decode(text(encoded, "encoded")?)?;
        give_element(out, e)
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ww_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Lower and upper bounds on the word length of `element`.
///
/// # Safety
/// Handles must be live; `lower` and `upper` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ww_word_length_bracket(
    group: *const WwGroup,
    element: *const WwElement,
    lower: *mut f64,
    upper: *mut f64,
) -> WwStatus {
    guard(|| {
        let g = borrow(group, "group")?;
        let e = borrow(element, "element")?;
        checked(g, e)?;
        if upper.is_null() {
            return Err(null("upper"));
        }
        let b = word_length_bracket(&g.spec, &e.inner);
        write(lower, b.lower, "lower")?;
        write(upper, b.upper, "upper")
    })
}

/// Monte Carlo bracket on the expected word length after `n` steps.
///
/// # Safety
/// `group` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ww_drift_bracket(
    group: *const WwGroup,
    n: u64,
    trials: u64,
    seed: u64,
    out: *mut WwDriftBracket,
) -> WwStatus {
    guard(|| {
        let g = borrow(group, "group")?;
        let b = drift_mc_bracket(&g.spec, &g.gens, n, trials, seed)?;
        let value = WwDriftBracket {
            n: b.n,
            trials: b.trials,
            seed: b.seed,
            lower_mean: b.lower_mean,
            lower_stderr: b.lower_stderr,
            upper_mean: b.upper_mean,
            upper_stderr: b.upper_stderr,
        };
        write(out, value, "out")
    })
}

fn walk_length(n: u64, trials: u64) -> Result<usize, Failure> {
    if trials == 0 {
        return Err(Failure(WwStatus::InvalidInput, "trials must be at least 1".into()));
    }
    usize::try_from(n).map_err(|_| Failure(WwStatus::InvalidInput, format!("n = {n} too large")))
}

/// Range statistics of `trials` planar walks of `n` steps.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ww_range_statistics(n: u64, trials: u64, seed: u64, out: *mut WwRangeStats) -> WwStatus {
    guard(|| {
        let s = range_statistics(walk_length(n, trials)?, trials, seed);
        let value = WwRangeStats {
            n: s.n,
            trials: s.trials,
            master_seed: s.master_seed,
            mean: s.mean,
            variance: s.variance,
            std_error: s.stderr,
            normalized_mean: s.normalized_mean,
            variance_bound: s.variance_bound,
            q1: s.q1,
            q2: s.q2,
        };
        write(out, value, "out")
    })
}

/// Monte Carlo estimate of `E Σ_z f(b_z)`. `k` and `alpha` are read only
/// for the extension.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ww_functional_estimate(
    functional: WwFunctional,
    k: u32,
    alpha: f64,
    n: u64,
    trials: u64,
    seed: u64,
    out: *mut WwEstimate,
) -> WwStatus {
    guard(|| {
        let steps = walk_length(n, trials)?;
        let r = match functional {
            WwFunctional::Sqrt => functional_estimate(&|b| (b as f64).sqrt(), steps, trials, seed),
            WwFunctional::Indicator => functional_estimate(&|b| (b > 0) as u64 as f64, steps, trials, seed),
            WwFunctional::Identity => functional_estimate(&|b| b as f64, steps, trials, seed),
            WwFunctional::Extension => {
                let ext = ConcaveExtension::new(params(k, alpha)?);
                functional_estimate(&|b| ext.eval_f64(b as f64), steps, trials, seed)
            }
        };
        let value = WwEstimate {
            n: r.n,
            trials: r.trials,
            mean: r.mean,
            std_error: r.stderr,
            master_seed: r.master_seed,
        };
        write(out, value, "out")
    })
}

/// `ln T_{k,alpha}`; `+inf` when `T` is too deep for a finite log.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ww_threshold_ln(k: u32, alpha: f64, out: *mut f64) -> WwStatus {
    guard(|| write(out, threshold_t(params(k, alpha)?).ln_f64(), "out"))
}

/// `ln L~_{k,alpha}(x)` for `x = exp(ln_x)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ww_l_tilde_ln(k: u32, alpha: f64, ln_x: f64, out: *mut f64) -> WwStatus {
    guard(|| {
        if !ln_x.is_finite() {
            return Err(Failure(WwStatus::InvalidInput, "ln_x must be finite".into()));
        }
        write(out, ln_l_tilde(params(k, alpha)?, &TowerReal::from_ln(ln_x))?, "out")
    })
}

/// The concave extension `L_{k,alpha}(x)` at a finite `x ≥ 0`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ww_concave_extension(k: u32, alpha: f64, x: f64, out: *mut f64) -> WwStatus {
    guard(|| {
        if !(x >= 0.0 && x.is_finite()) {
            return Err(Failure(
                WwStatus::Domain,
                format!("x = {x} must be finite and non-negative"),
            ));
        }
        write(out, ConcaveExtension::new(params(k, alpha)?).eval_f64(x), "out")
    })
}
