//! C ABI for `rac-lab`.
//!
//! Objects are opaque heap handles created by `rac_*_new`-style functions and
//! released with the matching `rac_*_free`. Every fallible call returns a
//! [`RacStatus`]; on failure `rac_last_error()` describes the problem for the
//! calling thread. Outputs are written only on success.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rac_lab::classical::{
    evaluate_strategy, exhaustive_search, optimal_distribution, BestCode, ClassicalStrategy, EncodingFilter,
    MarginalConstraint, SharedDistribution,
};
use rac_lab::qstate::{
    geometric_discord_bell_diagonal, is_separable, is_valid_state, werner, BellDiagonalSpec, TwoQubitState, Vec3,
};
use rac_lab::quantum_rac::{
    canonical_protocol, concatenated_pmin_formula, evaluate, pmin_formula, prepare_and_measure_pmin, QuantumRacProtocol,
};
use rac_lab::{EvaluationResult, RacError};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RacStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidState = 3,
    NullEvent = 4,
    DegenerateState = 5,
    Config = 6,
    Json = 7,
    Io = 8,
    Utf8 = 9,
    Panic = 10,
}

/// Restriction on the shared distribution in classical optimizations.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RacConstraint {
    None = 0,
    /// Bob's shared bit is uniformly distributed.
    BobMixed = 1,
}

impl From<RacConstraint> for MarginalConstraint {
    fn from(c: RacConstraint) -> Self {
        match c {
            RacConstraint::None => MarginalConstraint::None,
            RacConstraint::BobMixed => MarginalConstraint::BobMixed,
        }
    }
}

/// Shared two-qubit state.
pub struct RacState(TwoQubitState);
/// Quantum code: Alice's and Bob's measurement directions.
pub struct RacProtocol(QuantumRacProtocol);
/// Success table of a code.
pub struct RacEvaluation(EvaluationResult);
/// Deterministic classical code using one shared bit per party.
pub struct RacStrategy(ClassicalStrategy);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

struct Failure(RacStatus, String);

impl From<RacError> for Failure {
    fn from(e: RacError) -> Self {
        let status = match &e {
            RacError::InvalidArgument(_) => RacStatus::InvalidArgument,
            RacError::InvalidState(_) => RacStatus::InvalidState,
            RacError::NullEvent(_) => RacStatus::NullEvent,
            RacError::DegenerateState(_) => RacStatus::DegenerateState,
            RacError::Config(_) => RacStatus::Config,
            RacError::Json(_) => RacStatus::Json,
            RacError::Io(_) => RacStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(RacStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RacStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            RacStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "internal panic".into());
            set_last_error(format!("panic: {msg}"));
            RacStatus::Panic
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

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    write(out, Box::into_raw(Box::new(value)), "output handle pointer")
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null("string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Failure(RacStatus::Utf8, e.to_string()))
}

unsafe fn read3(p: *const f64, what: &str) -> Result<[f64; 3], Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok([*p, *p.add(1), *p.add(2)])
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn rac_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rac_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// States.

/// State from local Bloch vectors `a0[3]`, `b0[3]` and row-major correlations `e[9]`.
/// Positivity is not checked here; see `rac_state_is_valid`.
#[no_mangle]
pub unsafe extern "C" fn rac_state_new(
    a0: *const f64,
    b0: *const f64,
    e: *const f64,
    out: *mut *mut RacState,
) -> RacStatus {
    guard(|| {
        let a0 = read3(a0, "a0")?;
        let b0 = read3(b0, "b0")?;
        if e.is_null() {
            return Err(null("e"));
        }
        let mut m = [[0.0; 3]; 3];
        for (k, v) in std::slice::from_raw_parts(e, 9).iter().enumerate() {
            m[k / 3][k % 3] = *v;
        }
        let st = TwoQubitState::new(Vec3::from(a0), Vec3::from(b0), m);
        for v in [st.a0, st.b0] {
            v.check_state()?;
        }
        emit(out, RacState(st))
    })
}

/// Bell-diagonal state with correlations `(e1, e2, e3)`; fails outside the
/// positivity tetrahedron.
#[no_mangle]
pub unsafe extern "C" fn rac_state_bell_diagonal(e1: f64, e2: f64, e3: f64, out: *mut *mut RacState) -> RacStatus {
    guard(|| {
        let spec = BellDiagonalSpec::new(e1, e2, e3);
        spec.check_valid()?;
        emit(out, RacState(spec.to_state()))
    })
}

/// Werner state with visibility `q` in [0, 1].
#[no_mangle]
pub unsafe extern "C" fn rac_state_werner(q: f64, out: *mut *mut RacState) -> RacStatus {
    guard(|| emit(out, RacState(werner(q)?.to_state())))
}

/// State from JSON: `{"a0", "b0", "E"}`, `{"werner": q}` or `{"bell_diagonal": [..]}`.
#[no_mangle]
pub unsafe extern "C" fn rac_state_from_json(json: *const c_char, out: *mut *mut RacState) -> RacStatus {
    guard(|| {
        let doc = rac_lab::qstate::StateDocument::from_json(read_str(json)?)?;
        emit(out, RacState(doc.to_state()?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn rac_state_free(state: *mut RacState) {
    free(state)
}

#[no_mangle]
pub unsafe extern "C" fn rac_state_is_valid(state: *const RacState, out: *mut bool) -> RacStatus {
    guard(|| write(out, is_valid_state(&borrow(state, "state")?.0), "out"))
}

/// PPT verdict; fails with `InvalidState` for an invalid state.
#[no_mangle]
pub unsafe extern "C" fn rac_state_is_separable(state: *const RacState, out: *mut bool) -> RacStatus {
    guard(|| write(out, is_separable(&borrow(state, "state")?.0)?, "out"))
}

/// Geometric discord of the Bell-diagonal state `(e1, e2, e3)`.
#[no_mangle]
pub unsafe extern "C" fn rac_bell_diagonal_discord(e1: f64, e2: f64, e3: f64, out: *mut f64) -> RacStatus {
    guard(|| write(out, geometric_discord_bell_diagonal(BellDiagonalSpec::new(e1, e2, e3))?, "out"))
}

// Quantum codes.

/// Canonical n→1 code (n = 2 or 3) for diagonal correlations `(e1, e2, e3)`.
#[no_mangle]
pub unsafe extern "C" fn rac_protocol_canonical(
    n: usize,
    e1: f64,
    e2: f64,
    e3: f64,
    out: *mut *mut RacProtocol,
) -> RacStatus {
    guard(|| emit(out, RacProtocol(canonical_protocol(n, BellDiagonalSpec::new(e1, e2, e3))?)))
}

/// Protocol from JSON `{"n", "alice": {"00": [..], ..}, "bob": {"1": [..], ..}}`.
#[no_mangle]
pub unsafe extern "C" fn rac_protocol_from_json(json: *const c_char, out: *mut *mut RacProtocol) -> RacStatus {
    guard(|| emit(out, RacProtocol(QuantumRacProtocol::from_json(read_str(json)?)?)))
}

#[no_mangle]
pub unsafe extern "C" fn rac_protocol_free(protocol: *mut RacProtocol) {
    free(protocol)
}

/// Exact success table of `protocol` on `state`.
#[no_mangle]
pub unsafe extern "C" fn rac_evaluate(
    protocol: *const RacProtocol,
    state: *const RacState,
    out: *mut *mut RacEvaluation,
) -> RacStatus {
    guard(|| {
        let r = evaluate(&borrow(protocol, "protocol")?.0, &borrow(state, "state")?.0)?;
        emit(out, RacEvaluation(r))
    })
}

// Evaluations.

#[no_mangle]
pub unsafe extern "C" fn rac_evaluation_n(eval: *const RacEvaluation, out: *mut usize) -> RacStatus {
    guard(|| write(out, borrow(eval, "evaluation")?.0.n(), "out"))
}

#[no_mangle]
pub unsafe extern "C" fn rac_evaluation_p_min(eval: *const RacEvaluation, out: *mut f64) -> RacStatus {
    guard(|| write(out, borrow(eval, "evaluation")?.0.p_min(), "out"))
}

/// Success probability for input `x` (bit 1 most significant) and 1-based index `i`.
#[no_mangle]
pub unsafe extern "C" fn rac_evaluation_success(
    eval: *const RacEvaluation,
    x: usize,
    i: usize,
    out: *mut f64,
) -> RacStatus {
    guard(|| {
        let r = &borrow(eval, "evaluation")?.0;
        let n = r.n();
        if x >= 1 << n || i == 0 || i > n {
            return Err(Failure(RacStatus::InvalidArgument, format!("(x={x}, i={i}) out of range for n = {n}")));
        }
        write(out, r.success(x, i), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn rac_evaluation_free(eval: *mut RacEvaluation) {
    free(eval)
}

// Closed forms.

/// Worst-case success of the canonical n→1 code on Bell-diagonal `(e1, e2, e3)`.
#[no_mangle]
pub unsafe extern "C" fn rac_pmin_formula(n: usize, e1: f64, e2: f64, e3: f64, out: *mut f64) -> RacStatus {
    guard(|| write(out, pmin_formula(n, BellDiagonalSpec::new(e1, e2, e3))?, "out"))
}

/// `m`-level concatenated 2→1 codes on states of discord `d`.
#[no_mangle]
pub unsafe extern "C" fn rac_concatenated_pmin(d: f64, m: u32, out: *mut f64) -> RacStatus {
    guard(|| write(out, concatenated_pmin_formula(d, m)?, "out"))
}

/// Prepare-and-measure 2→1 code with qubits of Bloch length `q`.
#[no_mangle]
pub unsafe extern "C" fn rac_prepare_measure_pmin(q: f64, out: *mut f64) -> RacStatus {
    guard(|| write(out, prepare_and_measure_pmin(q)?, "out"))
}

// Classical codes.

/// The optimal classical 2→1 code.
#[no_mangle]
pub unsafe extern "C" fn rac_strategy_optimal_2to1(out: *mut *mut RacStrategy) -> RacStatus {
    guard(|| emit(out, RacStrategy(ClassicalStrategy::table1())))
}

/// Strategy from packed indices: two bits per input for the encoding function
/// (0 = zero, 1 = one, 2 = identity, 3 = negation; input 0 lowest) and four bits
/// per index for Bob's table (entry `[c][r_b]` at bit `2c + r_b`, index 1 lowest).
#[no_mangle]
pub unsafe extern "C" fn rac_strategy_from_indices(
    n: usize,
    encoding_index: u64,
    decoding_index: u64,
    out: *mut *mut RacStrategy,
) -> RacStatus {
    guard(|| {
        if !(2..=5).contains(&n) {
            return Err(Failure(RacStatus::InvalidArgument, format!("n = {n} not in 2..=5")));
        }
        emit(out, RacStrategy(ClassicalStrategy::from_indices(n, encoding_index, decoding_index)))
    })
}

#[no_mangle]
pub unsafe extern "C" fn rac_strategy_from_json(json: *const c_char, out: *mut *mut RacStrategy) -> RacStatus {
    guard(|| emit(out, RacStrategy(ClassicalStrategy::from_json(read_str(json)?)?)))
}

#[no_mangle]
pub unsafe extern "C" fn rac_strategy_free(strategy: *mut RacStrategy) {
    free(strategy)
}

unsafe fn distribution(p: *const f64) -> Result<SharedDistribution, Failure> {
    if p.is_null() {
        return Err(null("distribution"));
    }
    Ok(SharedDistribution::new([*p, *p.add(1), *p.add(2), *p.add(3)])?)
}

/// Success table under shared distribution `p[4] = (p00, p01, p10, p11)`.
#[no_mangle]
pub unsafe extern "C" fn rac_strategy_evaluate(
    strategy: *const RacStrategy,
    p: *const f64,
    out: *mut *mut RacEvaluation,
) -> RacStatus {
    guard(|| {
        let s = &borrow(strategy, "strategy")?.0;
        emit(out, RacEvaluation(evaluate_strategy(s, &distribution(p)?)))
    })
}

/// Best shared distribution for `strategy`, written to `p_out[4]`, and its worst-case success.
#[no_mangle]
pub unsafe extern "C" fn rac_strategy_optimal_distribution(
    strategy: *const RacStrategy,
    constraint: RacConstraint,
    p_out: *mut f64,
    p_min_out: *mut f64,
) -> RacStatus {
    guard(|| {
        let sol = optimal_distribution(&borrow(strategy, "strategy")?.0, constraint.into());
        if p_out.is_null() {
            return Err(null("p_out"));
        }
        write(p_min_out, sol.p_min, "p_min_out")?;
        for (k, v) in sol.distribution.as_array().iter().enumerate() {
            p_out.add(k).write(*v);
        }
        Ok(())
    })
}

/// Exhaustive search over every 2→1 strategy. `best_out` and `p_out[4]` may be
/// null; `workers = 0` uses all cores.
#[no_mangle]
pub unsafe extern "C" fn rac_exhaustive_search_2to1(
    constraint: RacConstraint,
    workers: usize,
    best_p_min: *mut f64,
    best_out: *mut *mut RacStrategy,
    p_out: *mut f64,
) -> RacStatus {
    guard(|| {
        if best_p_min.is_null() {
            return Err(null("best_p_min"));
        }
        let report = exhaustive_search(2, constraint.into(), EncodingFilter::All, workers)?;
        let BestCode::Single { strategy, distribution } = report.best else {
            return Err(Failure(RacStatus::InvalidState, "unexpected concatenated result".into()));
        };
        best_p_min.write(report.best_p_min);
        if !p_out.is_null() {
            for (k, v) in distribution.as_array().iter().enumerate() {
                p_out.add(k).write(*v);
            }
        }
        if !best_out.is_null() {
            best_out.write(Box::into_raw(Box::new(RacStrategy(strategy))));
        }
        Ok(())
    })
}

/// Releases a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn rac_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// JSON form of a strategy; release with `rac_string_free`.
#[no_mangle]
pub unsafe extern "C" fn rac_strategy_to_json(strategy: *const RacStrategy, out: *mut *mut c_char) -> RacStatus {
    guard(|| {
        let json = borrow(strategy, "strategy")?.0.to_json();
        let c = CString::new(json).map_err(|e| Failure(RacStatus::Utf8, e.to_string()))?;
        write(out, c.into_raw(), "out")
    })
}
