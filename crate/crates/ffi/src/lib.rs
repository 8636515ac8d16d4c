//! C ABI for `degmix`.
//!
//! Every function returns a [`DegmixStatus`]; results come back through out
//! parameters. Handles are opaque and must be released with the matching
//! `*_free` function. Strings handed out by the library are NUL-terminated
//! UTF-8 and must be released with [`degmix_string_free`]. After a non-OK
//! status, [`degmix_last_error_message`] describes the failure on the calling
//! thread.
//!
//! Vertex indices crossing the boundary are 0-based. Bipartite edges are
//! `(u, w)` pairs with each side numbered within its class.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use degmix::chain::{build_chain, sample, Factorize, ProductChain, SampleConfig};
use degmix::decomposition::{canonical_decompose, factorize_bipartite, SplittedBipartiteSequence};
use degmix::enumeration::{count_bipartite_graphical, DEFAULT_MAX_CENSUS};
use degmix::{BipartiteDegreeSequence, DegreeSequence, DirectedDegreeSequence, Error, ForbiddenSet, Sequence};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegmixStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotGraphical = 3,
    TooLarge = 4,
    Disconnected = 5,
    BufferTooSmall = 6,
    Other = 7,
    Panic = 8,
}

/// A degree sequence plus optional extra forbidden pairs.
pub struct DegmixSequence {
    sequence: Sequence,
    forbidden: Option<ForbiddenSet>,
}

/// A running product swap chain.
pub struct DegmixSampler {
    chain: ProductChain,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> DegmixStatus {
    match err {
        Error::NotGraphical => DegmixStatus::NotGraphical,
        Error::TooLarge { .. } => DegmixStatus::TooLarge,
        Error::Disconnected { .. } => DegmixStatus::Disconnected,
        Error::InvalidSequence(_)
        | Error::InvalidSplit(_)
        | Error::ForbiddenSetNotMatching(_)
        | Error::Divisibility { .. }
        | Error::InconsistentMatrix(_)
        | Error::Json(_) => DegmixStatus::InvalidArgument,
        _ => DegmixStatus::Other,
    }
}

struct Failure(DegmixStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null() -> Failure {
    Failure(DegmixStatus::NullPointer, "null pointer argument".into())
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(DegmixStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DegmixStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DegmixStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {msg}"));
            DegmixStatus::Panic
        }
    }
}

unsafe fn slice<'a>(p: *const usize, len: usize) -> Result<&'a [usize], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(null)
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

fn new_string(s: String) -> Result<*mut c_char, Failure> {
    Ok(CString::new(s).map_err(|_| invalid("string contains NUL"))?.into_raw())
}

fn emit_sequence(sequence: Sequence, out: *mut *mut DegmixSequence) -> Result<(), Failure> {
    let out = unsafe { out_ref(out)? };
    *out = Box::into_raw(Box::new(DegmixSequence { sequence, forbidden: None }));
    Ok(())
}

/// Message for the last failure on this thread. Owned by the library and
/// valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn degmix_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn degmix_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `degrees` must point to `n` readable values (or be null with `n == 0`);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn degmix_sequence_simple(
    degrees: *const usize,
    n: usize,
    out: *mut *mut DegmixSequence,
) -> DegmixStatus {
    guard(|| {
        let d = DegreeSequence::new(slice(degrees, n)?.to_vec())?;
        emit_sequence(Sequence::Simple(d), out)
    })
}

/// # Safety
/// `u` and `w` must point to `nu` and `nw` readable values; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn degmix_sequence_bipartite(
    u: *const usize,
    nu: usize,
    w: *const usize,
    nw: usize,
    out: *mut *mut DegmixSequence,
) -> DegmixStatus {
    guard(|| {
        let bd = BipartiteDegreeSequence::new(slice(u, nu)?.to_vec(), slice(w, nw)?.to_vec());
        emit_sequence(Sequence::Bipartite(bd), out)
    })
}

/// # Safety
/// `out_degrees` and `in_degrees` must each point to `n` readable values;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn degmix_sequence_directed(
    out_degrees: *const usize,
    in_degrees: *const usize,
    n: usize,
    out: *mut *mut DegmixSequence,
) -> DegmixStatus {
    guard(|| {
        let dd = DirectedDegreeSequence::new(slice(out_degrees, n)?.to_vec(), slice(in_degrees, n)?.to_vec())?;
        emit_sequence(Sequence::Directed(dd), out)
    })
}

/// Parses a JSON sequence in the CLI file format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn degmix_sequence_from_json(json: *const c_char, out: *mut *mut DegmixSequence) -> DegmixStatus {
    guard(|| {
        if json.is_null() {
            return Err(null());
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| invalid("input is not UTF-8"))?;
        emit_sequence(degmix::io::parse_sequence(text)?, out)
    })
}

/// Forbids the chord `(u, w)`. Only bipartite and directed sequences accept
/// forbidden pairs.
///
/// # Safety
/// `seq` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn degmix_sequence_forbid(seq: *mut DegmixSequence, u: usize, w: usize) -> DegmixStatus {
    guard(|| {
        let seq = out_ref(seq)?;
        if matches!(seq.sequence, Sequence::Simple(_)) {
            return Err(invalid("simple sequences take no forbidden pairs"));
        }
        seq.forbidden.get_or_insert_with(ForbiddenSet::new).insert(u, w);
        Ok(())
    })
}

/// # Safety
/// `seq` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn degmix_sequence_free(seq: *mut DegmixSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Writes 1 to `out` when the sequence (with its forbidden pairs) has a
/// realization, 0 otherwise.
///
/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn degmix_is_graphical(seq: *const DegmixSequence, out: *mut i32) -> DegmixStatus {
    guard(|| {
        let seq = handle(seq)?;
        let out = out_ref(out)?;
        *out = match degmix::graph::realize(&seq.sequence, seq.forbidden.as_ref()) {
            Ok(_) => 1,
            Err(Error::NotGraphical) => 0,
            Err(e) => return Err(e.into()),
        };
        Ok(())
    })
}

/// Starts a chain at a deterministic realization. `factorize` nonzero runs
/// one chain per canonical component.
///
/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn degmix_sampler_new(
    seq: *const DegmixSequence,
    seed: u64,
    factorize: i32,
    out: *mut *mut DegmixSampler,
) -> DegmixStatus {
    guard(|| {
        let seq = handle(seq)?;
        let out = out_ref(out)?;
        let mode = if factorize != 0 { Factorize::Auto } else { Factorize::Off };
        let chain = build_chain(&seq.sequence, seq.forbidden.as_ref(), mode, seed)?;
        *out = Box::into_raw(Box::new(DegmixSampler { chain }));
        Ok(())
    })
}

/// Advances the chain by `steps` product steps.
///
/// # Safety
/// `sampler` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn degmix_sampler_step(sampler: *mut DegmixSampler, steps: u64) -> DegmixStatus {
    guard(|| {
        out_ref(sampler)?.chain.run(steps);
        Ok(())
    })
}

/// # Safety
/// `sampler` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn degmix_sampler_edge_count(sampler: *const DegmixSampler, out: *mut usize) -> DegmixStatus {
    guard(|| {
        let s = handle(sampler)?;
        *out_ref(out)? = s.chain.assemble().edge_count();
        Ok(())
    })
}

/// Copies the current edges into `buf` as `2 * edge_count` values
/// `a0 b0 a1 b1 ...`. `capacity` counts edges. Returns `BUFFER_TOO_SMALL`
/// (with `written` set to the required edge count) when the buffer is short.
///
/// # Safety
/// `buf` must have room for `2 * capacity` values; `sampler` must be a live
/// handle; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn degmix_sampler_edges(
    sampler: *const DegmixSampler,
    buf: *mut usize,
    capacity: usize,
    written: *mut usize,
) -> DegmixStatus {
    guard(|| {
        let s = handle(sampler)?;
        let written = out_ref(written)?;
        let r = s.chain.assemble();
        *written = r.edge_count();
        if r.edge_count() > capacity {
            return Err(Failure(
                DegmixStatus::BufferTooSmall,
                format!("need room for {} edges, got {capacity}", r.edge_count()),
            ));
        }
        if r.edge_count() == 0 {
            return Ok(());
        }
        if buf.is_null() {
            return Err(null());
        }
        let out = std::slice::from_raw_parts_mut(buf, 2 * r.edge_count());
        for (k, &(a, b)) in r.edges().iter().enumerate() {
            out[2 * k] = a;
            out[2 * k + 1] = b;
        }
        Ok(())
    })
}

/// # Safety
/// `sampler` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn degmix_sampler_free(sampler: *mut DegmixSampler) {
    if !sampler.is_null() {
        drop(Box::from_raw(sampler));
    }
}

/// Draws `count` samples and writes a JSON array of edge lists (0-based
/// pairs) to `out`.
///
/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn degmix_sample_json(
    seq: *const DegmixSequence,
    burn_in: u64,
    thin: u64,
    count: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> DegmixStatus {
    guard(|| {
        let seq = handle(seq)?;
        let out = out_ref(out)?;
        let cfg = SampleConfig { burn_in, thin, count, seed, ..SampleConfig::default() };
        let samples = sample(&seq.sequence, seq.forbidden.as_ref(), &cfg)?;
        let edges: Vec<&[(usize, usize)]> = samples.iter().map(|r| r.edges()).collect();
        *out = new_string(serde_json::to_string(&edges).map_err(Error::from)?)?;
        Ok(())
    })
}

/// Writes the canonical decomposition as JSON: the split components and
/// tail for a simple sequence, the factor list for bipartite and directed
/// ones.
///
/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn degmix_decompose_json(seq: *const DegmixSequence, out: *mut *mut c_char) -> DegmixStatus {
    guard(|| {
        let seq = handle(seq)?;
        let out = out_ref(out)?;
        let extra = seq.forbidden.clone().unwrap_or_default();
        let json = match &seq.sequence {
            Sequence::Simple(d) => serde_json::to_string(&canonical_decompose(d)?),
            Sequence::Bipartite(bd) => {
                let sb = SplittedBipartiteSequence::new(bd.u.clone(), bd.w.clone());
                serde_json::to_string(&factorize_bipartite(&sb, &extra)?)
            }
            Sequence::Directed(dd) => {
                let (bd, diag) = dd.gale_representation();
                let all: ForbiddenSet = diag.iter().chain(extra.iter()).collect();
                serde_json::to_string(&factorize_bipartite(&SplittedBipartiteSequence::new(bd.u, bd.w), &all)?)
            }
        };
        *out = new_string(json.map_err(Error::from)?)?;
        Ok(())
    })
}

/// Number of graphical bipartite degree sequences on `n+n` vertices, as a
/// decimal string.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn degmix_count_bipartite(n: usize, out: *mut *mut c_char) -> DegmixStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = new_string(count_bipartite_graphical(n, DEFAULT_MAX_CENSUS)?.to_str_radix(10))?;
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn degmix_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
