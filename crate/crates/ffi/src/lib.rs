//! C ABI for the monodromy library.
//!
//! Every fallible call returns an [`MdStatus`]; the message of the most
//! recent failure on the calling thread is available from
//! [`md_last_error`]. Handles are opaque and owned by the caller, who
//! releases them with the matching `*_free` function. Strings returned by
//! the library are released with [`md_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use monodromy::algebra::{discriminant_y, parse_poly, projective_transform, BiPoly, ProjMatrix};
use monodromy::hamiltonian::{default_loops, monodromy_group, GroupReport, HamiltonianError, SystemId};
use monodromy::zvk::{critical_values, genericity_fix, pi1, Pi1Config, Pi1Result, ZvkError};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed or unsupported input (parse error, singular matrix, ...).
    Input = 3,
    /// A pipeline stage failed.
    Pipeline = 4,
    /// A numerical result could not be certified.
    Certification = 5,
    /// Caller buffer too small; the required size has been written.
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MdSystem {
    Pendulum = 0,
    Kepler = 1,
}

impl From<MdSystem> for SystemId {
    fn from(s: MdSystem) -> Self {
        match s {
            MdSystem::Pendulum => SystemId::Pendulum,
            MdSystem::Kepler => SystemId::Kepler,
        }
    }
}

/// Bivariate polynomial over Q(i).
pub struct MdPoly(BiPoly);

/// Output of the fundamental group pipeline.
pub struct MdPi1(Pi1Result);

/// Monodromy matrices of a Hamiltonian system and the group they generate.
pub struct MdMonodromy(GroupReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

type Failure = (MdStatus, String);

fn fail(status: MdStatus, e: impl std::fmt::Display) -> Failure {
    (status, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MdStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(MdStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| fail(MdStatus::InvalidUtf8, e))
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| fail(MdStatus::NullPointer, "null handle"))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(MdStatus::NullPointer, "null output pointer"));
    }
    out.write(v);
    Ok(())
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn zvk_failure(e: ZvkError) -> Failure {
    let status = match e {
        ZvkError::Algebra(_) | ZvkError::NotSquarefree | ZvkError::Degenerate(_) | ZvkError::GenericityFailed(_) => {
            MdStatus::Input
        }
        _ => MdStatus::Pipeline,
    };
    fail(status, e)
}

fn hamiltonian_failure(e: HamiltonianError) -> Failure {
    let status = match e {
        HamiltonianError::Residual(_) | HamiltonianError::StepUnderflow { .. } | HamiltonianError::Quadrature(_) => {
            MdStatus::Certification
        }
        _ => MdStatus::Pipeline,
    };
    fail(status, e)
}

/// Message of the last failure on this thread; empty if none. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn md_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn md_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a polynomial in `x`, `y` with coefficients in Q(i).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn md_poly_parse(text: *const c_char, out: *mut *mut MdPoly) -> MdStatus {
    guard(|| {
        let f = parse_poly(str_arg(text)?).map_err(|e| fail(MdStatus::Input, e))?;
        write_out(out, Box::into_raw(Box::new(MdPoly(f))))
    })
}

/// # Safety
/// `p` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn md_poly_free(p: *mut MdPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Canonical text of a polynomial; free with [`md_string_free`].
///
/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn md_poly_to_string(p: *const MdPoly) -> *mut c_char {
    match p.as_ref() {
        Some(p) => to_c(p.0.to_string()),
        None => ptr::null_mut(),
    }
}

/// Exact discriminant with respect to `y`, as text.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn md_discriminant(p: *const MdPoly, out: *mut *mut c_char) -> MdStatus {
    guard(|| {
        let f = ref_arg(p)?;
        let d = discriminant_y(&f.0).map_err(|e| fail(MdStatus::Input, e))?;
        write_out(out, to_c(d.to_string()))
    })
}

/// Certified critical values as JSON (after the seeded genericity fix).
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn md_critical_values_json(p: *const MdPoly, seed: u64, out: *mut *mut c_char) -> MdStatus {
    guard(|| {
        let f = ref_arg(p)?;
        let (curve, _) = genericity_fix(&f.0, seed).map_err(zvk_failure)?;
        let cs = critical_values(&curve).map_err(zvk_failure)?;
        let s = serde_json::to_string(&cs).map_err(|e| fail(MdStatus::Pipeline, e))?;
        write_out(out, to_c(s))
    })
}

/// Projective change of coordinates. `matrix` is `identity`, `swap-yz` or
/// nine comma separated constants, row by row.
///
/// # Safety
/// `p` must be a live handle, `matrix` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn md_transform(
    p: *const MdPoly,
    matrix: *const c_char,
    line_at_infinity: bool,
    out: *mut *mut MdPoly,
) -> MdStatus {
    guard(|| {
        let f = ref_arg(p)?;
        let m = match str_arg(matrix)? {
            "identity" => ProjMatrix::identity(),
            "swap-yz" => ProjMatrix::swap_yz(),
            spec => {
                let mut entries = Vec::new();
                for s in spec.split(',') {
                    let c = parse_poly(s.trim()).map_err(|e| fail(MdStatus::Input, e))?.constant_value().ok_or_else(
                        || fail(MdStatus::Input, format!("matrix entry `{}` is not a constant", s.trim())),
                    )?;
                    entries.push(c);
                }
                if entries.len() != 9 {
                    return Err(fail(MdStatus::Input, format!("matrix needs 9 entries, got {}", entries.len())));
                }
                let mut it = entries.into_iter();
                let rows = std::array::from_fn(|_| std::array::from_fn(|_| it.next().unwrap()));
                ProjMatrix::new(rows).map_err(|e| fail(MdStatus::Input, e))?
            }
        };
        let g = projective_transform(&f.0, &m, line_at_infinity).map_err(|e| fail(MdStatus::Input, e))?;
        write_out(out, Box::into_raw(Box::new(MdPoly(g))))
    })
}

/// Fundamental group of the complement of `p = 0` in C^2.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn md_pi1(
    p: *const MdPoly,
    precision: u32,
    seed: u64,
    budget: usize,
    out: *mut *mut MdPi1,
) -> MdStatus {
    guard(|| {
        let f = ref_arg(p)?;
        if precision < 53 {
            return Err(fail(MdStatus::Input, format!("precision must be at least 53 bits, got {}", precision)));
        }
        let cfg = Pi1Config { precision, seed, budget, keep_trajectories: false };
        let r = pi1(&f.0, &cfg).map_err(zvk_failure)?;
        write_out(out, Box::into_raw(Box::new(MdPi1(r))))
    })
}

/// # Safety
/// `r` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn md_pi1_free(r: *mut MdPi1) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Free rank of the abelianization; -1 on a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn md_pi1_abelian_rank(r: *const MdPi1) -> i64 {
    r.as_ref().map_or(-1, |r| r.0.abelianization.rank as i64)
}

/// Number of generators of the simplified presentation; -1 on a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn md_pi1_generators(r: *const MdPi1) -> i64 {
    r.as_ref().map_or(-1, |r| r.0.simplified.num_generators() as i64)
}

/// Torsion coefficients of the abelianization. Writes up to `cap` values
/// into `buf` and the total count into `len`.
///
/// # Safety
/// `r` must be a live handle, `buf` valid for `cap` writes (may be null if
/// `cap` is 0) and `len` writable.
#[no_mangle]
pub unsafe extern "C" fn md_pi1_torsion(r: *const MdPi1, buf: *mut u64, cap: usize, len: *mut usize) -> MdStatus {
    guard(|| {
        let t = &ref_arg(r)?.0.abelianization.torsion;
        write_out(len, t.len())?;
        if t.len() > cap {
            return Err(fail(MdStatus::BufferTooSmall, format!("need {} entries", t.len())));
        }
        if !t.is_empty() {
            if buf.is_null() {
                return Err(fail(MdStatus::NullPointer, "null buffer"));
            }
            ptr::copy_nonoverlapping(t.as_ptr(), buf, t.len());
        }
        Ok(())
    })
}

/// Simplified presentation as text; free with [`md_string_free`].
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn md_pi1_presentation(r: *const MdPi1) -> *mut c_char {
    r.as_ref().map_or(ptr::null_mut(), |r| to_c(r.0.simplified.to_string()))
}

/// Every intermediate of the pipeline as JSON; free with [`md_string_free`].
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn md_pi1_json(r: *const MdPi1) -> *mut c_char {
    r.as_ref().and_then(|r| serde_json::to_string(&r.0).ok()).map_or(ptr::null_mut(), to_c)
}

/// Monodromy of the default loops of `system`, or of one constant loop at
/// their basepoint when `constant_loop` is set.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn md_monodromy(
    system: MdSystem,
    precision: u32,
    constant_loop: bool,
    out: *mut *mut MdMonodromy,
) -> MdStatus {
    guard(|| {
        if precision < 53 {
            return Err(fail(MdStatus::Input, format!("precision must be at least 53 bits, got {}", precision)));
        }
        let system = SystemId::from(system);
        let mut loops = default_loops(system);
        if constant_loop {
            let d = &loops[0];
            loops = vec![monodromy::hamiltonian::BaseLoop::constant("const", d.x, d.path.start())];
        }
        let report = monodromy_group(system, &loops, precision).map_err(hamiltonian_failure)?;
        write_out(out, Box::into_raw(Box::new(MdMonodromy(report))))
    })
}

/// # Safety
/// `m` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn md_monodromy_free(m: *mut MdMonodromy) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of loops; 0 on a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn md_monodromy_loop_count(m: *const MdMonodromy) -> usize {
    m.as_ref().map_or(0, |m| m.0.loops.len())
}

/// Matrix of loop `index`, row-major. Writes the dimension into `dim` and,
/// if `cap >= dim*dim`, the entries into `buf`.
///
/// # Safety
/// `m` must be a live handle, `buf` valid for `cap` writes and `dim`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn md_monodromy_matrix(
    m: *const MdMonodromy,
    index: usize,
    buf: *mut i64,
    cap: usize,
    dim: *mut usize,
) -> MdStatus {
    guard(|| {
        let r = &ref_arg(m)?.0;
        let l = r.loops.get(index).ok_or_else(|| fail(MdStatus::Input, format!("no loop {}", index)))?;
        let n = l.matrix.len();
        write_out(dim, n)?;
        if n * n > cap {
            return Err(fail(MdStatus::BufferTooSmall, format!("need {} entries", n * n)));
        }
        if buf.is_null() {
            return Err(fail(MdStatus::NullPointer, "null buffer"));
        }
        for (k, v) in l.matrix.iter().flatten().enumerate() {
            buf.add(k).write(*v);
        }
        Ok(())
    })
}

/// Description of the generated group; free with [`md_string_free`].
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn md_monodromy_group(m: *const MdMonodromy) -> *mut c_char {
    m.as_ref().map_or(ptr::null_mut(), |m| to_c(m.0.group.clone()))
}

/// Full report as JSON; free with [`md_string_free`].
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn md_monodromy_json(m: *const MdMonodromy) -> *mut c_char {
    m.as_ref().and_then(|m| serde_json::to_string(&m.0).ok()).map_or(ptr::null_mut(), to_c)
}
