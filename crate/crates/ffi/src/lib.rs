//! C interface to `dualgreen`.
//!
//! Every fallible call returns a [`DgStatus`] and writes its result through an
//! out pointer. On failure a message is available from
//! [`dg_last_error_message`] on the same thread. Handles are opaque and must be
//! released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use dualgreen::confine::{self, ConfinementSpec, ZeroEnergyState};
use dualgreen::duality::{make_map, DualityMap};
use dualgreen::green::{self, CoulombEigenfunction, OscEigenfunction};
use dualgreen::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DgStatus {
    Ok = 0,
    Domain = 1,
    Pole = 2,
    Convergence = 3,
    Overflow = 4,
    Ordering = 5,
    ExponentMismatch = 6,
    NoBracket = 7,
    NullPointer = 8,
    Panic = 9,
}

impl From<&Error> for DgStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => DgStatus::Domain,
            Error::Pole(_) => DgStatus::Pole,
            Error::Convergence(_) => DgStatus::Convergence,
            Error::Overflow(_) => DgStatus::Overflow,
            Error::Ordering { .. } => DgStatus::Ordering,
            Error::ExponentMismatch { .. } => DgStatus::ExponentMismatch,
            Error::NoBracket(_) => DgStatus::NoBracket,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: DgStatus, msg: impl Into<String>) -> DgStatus {
    set_error(msg.into());
    status
}

fn guard<F: FnOnce() -> Result<(), DgStatus>>(f: F) -> DgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            DgStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(DgStatus::Panic, format!("panic: {msg}"))
        }
    }
}

fn lift<T>(r: dualgreen::Result<T>) -> Result<T, DgStatus> {
    r.map_err(|e| fail(DgStatus::from(&e), e.to_string()))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), DgStatus> {
    if out.is_null() {
        return Err(fail(DgStatus::NullPointer, "null output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn get<'a, T>(h: *const T) -> Result<&'a T, DgStatus> {
    h.as_ref().ok_or_else(|| fail(DgStatus::NullPointer, "null handle"))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn dg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Opaque duality map `r = C ρ^η`.
pub struct DgDualityMap {
    map: DualityMap,
}

/// # Safety
/// `out` must be a valid pointer; the handle it receives is owned by the caller.
#[no_mangle]
pub unsafe extern "C" fn dg_map_new(a: f64, scale: f64, out: *mut *mut DgDualityMap) -> DgStatus {
    guard(|| {
        let map = lift(make_map(a, scale))?;
        put(out, Box::into_raw(Box::new(DgDualityMap { map })))
    })
}

/// Inverse map as a new handle.
///
/// # Safety
/// `map` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_map_inverse(map: *const DgDualityMap, out: *mut *mut DgDualityMap) -> DgStatus {
    guard(|| {
        let inv = get(map)?.map.inverse();
        put(out, Box::into_raw(Box::new(DgDualityMap { map: inv })))
    })
}

/// # Safety
/// `map` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dg_map_free(map: *mut DgDualityMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Exponents and scale of the map; any out pointer may be null.
///
/// # Safety
/// `map` must be a live handle; non-null out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dg_map_parameters(map: *const DgDualityMap, a: *mut f64, b: *mut f64, eta: *mut f64, scale: *mut f64) -> DgStatus {
    guard(|| {
        let m = get(map)?.map;
        for (p, v) in [(a, m.a), (b, m.b), (eta, m.eta), (scale, m.scale)] {
            if !p.is_null() {
                p.write(v);
            }
        }
        Ok(())
    })
}

/// `r` for a given `ρ`.
///
/// # Safety
/// `map` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_map_eval(map: *const DgDualityMap, rho: f64, out: *mut f64) -> DgStatus {
    guard(|| {
        let m = get(map)?;
        if !(rho >= 0.0) {
            return Err(fail(DgStatus::Domain, format!("radius {rho} must be non-negative")));
        }
        put(out, m.map.map_radius(rho))
    })
}

/// Dual energy and coupling for a primary coupling and energy.
///
/// # Safety
/// `map` must be a live handle; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dg_map_dual(map: *const DgDualityMap, coupling: f64, energy: f64, dual_energy: *mut f64, dual_coupling: *mut f64) -> DgStatus {
    guard(|| {
        let m = get(map)?.map;
        put(dual_energy, m.dual_energy(coupling))?;
        put(dual_coupling, m.dual_coupling(energy))
    })
}

enum Eigen {
    Osc(OscEigenfunction),
    Coulomb(CoulombEigenfunction),
}

/// Opaque normalised radial eigenfunction.
pub struct DgEigenfunction {
    inner: Eigen,
    energy: f64,
}

/// Oscillator eigenfunction with `n` radial nodes and angular momentum `L`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_osc_eigenfunction_new(n: u32, l: f64, omega: f64, mass: f64, hbar: f64, out: *mut *mut DgEigenfunction) -> DgStatus {
    guard(|| {
        let f = lift(OscEigenfunction::new(n, l, omega, mass, hbar))?;
        let energy = green::osc_level(n, l, omega, hbar);
        put(out, Box::into_raw(Box::new(DgEigenfunction { inner: Eigen::Osc(f), energy })))
    })
}

/// Coulomb eigenfunction for `V = -Ze²/r` with `n` radial nodes.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_coulomb_eigenfunction_new(n: u32, l: f64, zesq: f64, mass: f64, hbar: f64, out: *mut *mut DgEigenfunction) -> DgStatus {
    guard(|| {
        let f = lift(CoulombEigenfunction::new(n, l, zesq, mass, hbar))?;
        let energy = green::coulomb_level(n, l, zesq, mass, hbar);
        put(out, Box::into_raw(Box::new(DgEigenfunction { inner: Eigen::Coulomb(f), energy })))
    })
}

/// Reduced radial value `u(r)`.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_eigenfunction_eval(f: *const DgEigenfunction, r: f64, out: *mut f64) -> DgStatus {
    guard(|| {
        let v = match &get(f)?.inner {
            Eigen::Osc(e) => lift(e.value(r))?,
            Eigen::Coulomb(e) => lift(e.value(r))?,
        };
        put(out, v)
    })
}

/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_eigenfunction_energy(f: *const DgEigenfunction, out: *mut f64) -> DgStatus {
    guard(|| put(out, get(f)?.energy))
}

/// # Safety
/// `f` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dg_eigenfunction_free(f: *mut DgEigenfunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Opaque zero-energy state of a confining potential.
pub struct DgConfinement {
    state: ZeroEnergyState,
}

/// Zero-energy state with `nu` nodes for `λ_a r^{a'/2-1} + λ' r^{a'}`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn dg_confinement_new(
    a_prime: f64,
    confining_coupling: f64,
    nu: u32,
    ell: u32,
    dimension: u32,
    mass: f64,
    hbar: f64,
    out: *mut *mut DgConfinement,
) -> DgStatus {
    guard(|| {
        let spec = lift(ConfinementSpec::with_units(a_prime, confining_coupling, nu, ell, dimension, mass, hbar))?;
        let state = lift(confine::zero_energy_psi(&spec))?;
        put(out, Box::into_raw(Box::new(DgConfinement { state })))
    })
}

/// Quantised primary coupling `λ_{a,ν}`.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_confinement_coupling(c: *const DgConfinement, out: *mut f64) -> DgStatus {
    guard(|| put(out, confine::admissible_coupling(&get(c)?.state.spec)))
}

/// Reduced radial value `u(r)`, normalised in `dr`.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_confinement_eval(c: *const DgConfinement, r: f64, out: *mut f64) -> DgStatus {
    guard(|| put(out, lift(get(c)?.state.reduced(r))?))
}

/// # Safety
/// `c` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dg_confinement_free(c: *mut DgConfinement) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Closed-form oscillator Green function at energy `E`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_osc_green(rho_outer: f64, rho_inner: f64, l: f64, energy: f64, omega: f64, mass: f64, hbar: f64, out: *mut f64) -> DgStatus {
    guard(|| put(out, lift(green::osc_green(rho_outer, rho_inner, l, energy, omega, mass, hbar))?))
}

/// Oscillator Green function by quadrature of the promotor.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn dg_osc_green_quadrature(
    rho_outer: f64,
    rho_inner: f64,
    l: f64,
    energy: f64,
    omega: f64,
    mass: f64,
    hbar: f64,
    tol: f64,
    out: *mut f64,
) -> DgStatus {
    guard(|| put(out, lift(green::osc_green_quadrature(rho_outer, rho_inner, l, energy, omega, mass, hbar, tol))?))
}

/// Closed-form Coulomb Green function for `V = -Ze²/r`, `E < 0`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_coulomb_green(r_outer: f64, r_inner: f64, l: f64, energy: f64, zesq: f64, mass: f64, hbar: f64, out: *mut f64) -> DgStatus {
    guard(|| put(out, lift(green::coulomb_green(r_outer, r_inner, l, energy, zesq, mass, hbar))?))
}

/// Coulomb Green function assembled from the oscillator through the map.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_coulomb_green_via_dual(r_outer: f64, r_inner: f64, l: f64, energy: f64, zesq: f64, mass: f64, hbar: f64, out: *mut f64) -> DgStatus {
    guard(|| put(out, lift(green::coulomb_green_via_oscillator(r_outer, r_inner, l, energy, zesq, mass, hbar))?))
}

fn positive(name: &str, v: f64) -> Result<(), DgStatus> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(fail(DgStatus::Domain, format!("{name} = {v} must be positive")))
    }
}

/// Oscillator level `ħω(2n + ℓ + 3/2)` in three dimensions.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_osc_spectrum(n: u32, ell: u32, omega: f64, hbar: f64, out: *mut f64) -> DgStatus {
    guard(|| {
        positive("omega", omega)?;
        positive("hbar", hbar)?;
        put(out, green::osc_spectrum(n, ell, omega, hbar))
    })
}

/// Coulomb level `-m(Ze²)²/(2ħ²(n + ℓ + 1)²)` in three dimensions.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_coulomb_spectrum(n: u32, ell: u32, zesq: f64, mass: f64, hbar: f64, out: *mut f64) -> DgStatus {
    guard(|| {
        positive("Ze^2", zesq)?;
        positive("mass", mass)?;
        positive("hbar", hbar)?;
        put(out, green::coulomb_spectrum(n, ell, zesq, mass, hbar))
    })
}
