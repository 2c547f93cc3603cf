//! C ABI over `icvec`.
//!
//! Objects are opaque handles created by `icvec_*_new`/`generate`/compute
//! functions and released with the matching `*_free`. Every fallible call
//! returns an [`IcvecStatus`]; on failure the message is available from
//! [`icvec_last_error`] on the same thread until the next failing call.
//! Panics are caught at the boundary and reported as `ICVEC_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use icvec::homology::{rips_diagram, PersistenceDiagram, PersistencePoint};
use icvec::metrics::{bottleneck, sliced_wasserstein, wasserstein};
use icvec::pointcloud::{generate, CloudKind, PointCloud, Provenance};
use icvec::rips::{RipsOptions, RipsScale};
use icvec::vectorize::{interconnectivity_vector, persistence_vector, stable_interconnectivity_vector, FeatureVector};
use icvec::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IcvecStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    EmptyInput = 3,
    EmptyDiagram = 4,
    SingularCovariance = 5,
    InfiniteDeath = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IcvecCloudKind {
    Uniform = 0,
    Normal = 1,
    Lattice = 2,
    Sierpinski = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IcvecMethod {
    Persistence = 0,
    Interconnectivity = 1,
    StableInterconnectivity = 2,
}

/// Opaque point cloud.
pub struct IcvecCloud(PointCloud);

/// Opaque persistence diagram.
pub struct IcvecDiagram(PersistenceDiagram);

/// Opaque feature vector.
pub struct IcvecVector(FeatureVector);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

fn status_of(e: &Error) -> IcvecStatus {
    match e {
        Error::EmptyCloud | Error::EmptyDistanceMatrix | Error::EmptyImage { .. } => IcvecStatus::EmptyInput,
        Error::EmptyDiagram(_) => IcvecStatus::EmptyDiagram,
        Error::SingularCovariance => IcvecStatus::SingularCovariance,
        Error::InfiniteDeath => IcvecStatus::InfiniteDeath,
        _ => IcvecStatus::InvalidArgument,
    }
}

fn fail(status: IcvecStatus, message: &str) -> IcvecStatus {
    set_last_error(message);
    status
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), IcvecStatus>) -> IcvecStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IcvecStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(IcvecStatus::Internal, "internal panic"),
    }
}

fn check(e: Error) -> IcvecStatus {
    fail(status_of(&e), &e.to_string())
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), IcvecStatus> {
    if p.is_null() {
        Err(fail(IcvecStatus::NullPointer, &format!("{name} is null")))
    } else {
        Ok(())
    }
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Copies `values` into `buf` when it holds at least `values.len()` entries.
unsafe fn copy_out(values: &[f64], buf: *mut f64, capacity: usize) -> Result<(), IcvecStatus> {
    if capacity < values.len() {
        return Err(fail(
            IcvecStatus::BufferTooSmall,
            &format!("buffer holds {capacity} values, need {}", values.len()),
        ));
    }
    if !values.is_empty() {
        non_null(buf, "buf")?;
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    }
    Ok(())
}

/// Message of the last failing call on this thread. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn icvec_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn icvec_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Seeded synthetic cloud. `dim` is used by the uniform and normal kinds only.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn icvec_cloud_generate(
    kind: IcvecCloudKind,
    dim: usize,
    n: usize,
    seed: u64,
    out: *mut *mut IcvecCloud,
) -> IcvecStatus {
    guard(|| {
        non_null(out, "out")?;
        let kind = match kind {
            IcvecCloudKind::Uniform => CloudKind::Uniform { dim },
            IcvecCloudKind::Normal => CloudKind::Normal { dim },
            IcvecCloudKind::Lattice => CloudKind::Lattice,
            IcvecCloudKind::Sierpinski => CloudKind::Sierpinski,
        };
        let cloud = generate(kind, n, seed).map_err(check)?;
        put(out, IcvecCloud(cloud));
        Ok(())
    })
}

/// Cloud from `n` row-major points of dimension `dim`.
///
/// # Safety
/// `coords` must point to `n * dim` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn icvec_cloud_from_coords(
    coords: *const f64,
    n: usize,
    dim: usize,
    out: *mut *mut IcvecCloud,
) -> IcvecStatus {
    guard(|| {
        non_null(out, "out")?;
        let total = n.checked_mul(dim).ok_or_else(|| fail(IcvecStatus::InvalidArgument, "n * dim overflows"))?;
        let flat = if total == 0 {
            Vec::new()
        } else {
            non_null(coords, "coords")?;
            std::slice::from_raw_parts(coords, total).to_vec()
        };
        let provenance = Provenance::File { path: "<ffi>".into() };
        let cloud = PointCloud::from_flat(flat, dim, provenance, None).map_err(check)?;
        put(out, IcvecCloud(cloud));
        Ok(())
    })
}

/// # Safety
/// `cloud` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn icvec_cloud_len(cloud: *const IcvecCloud) -> usize {
    cloud.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `cloud` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn icvec_cloud_dim(cloud: *const IcvecCloud) -> usize {
    cloud.as_ref().map_or(0, |c| c.0.dim())
}

/// Copies the row-major coordinates into `buf`, which must hold `len * dim` doubles.
///
/// # Safety
/// `cloud` must be a live handle and `buf` writable for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn icvec_cloud_coords(cloud: *const IcvecCloud, buf: *mut f64, capacity: usize) -> IcvecStatus {
    guard(|| {
        non_null(cloud, "cloud")?;
        copy_out((*cloud).0.coords(), buf, capacity)
    })
}

/// # Safety
/// `cloud` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn icvec_cloud_free(cloud: *mut IcvecCloud) {
    if !cloud.is_null() {
        drop(Box::from_raw(cloud));
    }
}

/// Rips persistence in dimensions 0 and 1. `max_filtration` may be `INFINITY`;
/// with `double_scale` nonzero, edges enter at half their length.
///
/// # Safety
/// `cloud` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn icvec_persistence(
    cloud: *const IcvecCloud,
    max_filtration: f64,
    double_scale: bool,
    out: *mut *mut IcvecDiagram,
) -> IcvecStatus {
    guard(|| {
        non_null(cloud, "cloud")?;
        non_null(out, "out")?;
        let opts = RipsOptions {
            max_filtration,
            max_dim: 2,
            scale: if double_scale { RipsScale::HalfLength } else { RipsScale::Length },
        };
        let diagram = rips_diagram(&(*cloud).0, &opts).map_err(check)?;
        put(out, IcvecDiagram(diagram));
        Ok(())
    })
}

/// Diagram from `n` points given as parallel arrays. Deaths may be `INFINITY`.
///
/// # Safety
/// The three arrays must hold `n` readable entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn icvec_diagram_new(
    dims: *const usize,
    births: *const f64,
    deaths: *const f64,
    n: usize,
    max_filtration: f64,
    out: *mut *mut IcvecDiagram,
) -> IcvecStatus {
    guard(|| {
        non_null(out, "out")?;
        let mut points = Vec::with_capacity(n);
        if n > 0 {
            non_null(dims, "dims")?;
            non_null(births, "births")?;
            non_null(deaths, "deaths")?;
            for i in 0..n {
                points.push(PersistencePoint::new(*dims.add(i), *births.add(i), *deaths.add(i)).map_err(check)?);
            }
        }
        let diagram = PersistenceDiagram::new(points, max_filtration).map_err(check)?;
        put(out, IcvecDiagram(diagram));
        Ok(())
    })
}

/// Number of points over all dimensions.
///
/// # Safety
/// `diagram` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn icvec_diagram_len(diagram: *const IcvecDiagram) -> usize {
    diagram.as_ref().map_or(0, |d| d.0.points().len())
}

/// Point `index` in canonical order.
///
/// # Safety
/// `diagram` must be a live handle and the out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn icvec_diagram_point(
    diagram: *const IcvecDiagram,
    index: usize,
    dim: *mut usize,
    birth: *mut f64,
    death: *mut f64,
) -> IcvecStatus {
    guard(|| {
        non_null(diagram, "diagram")?;
        non_null(dim, "dim")?;
        non_null(birth, "birth")?;
        non_null(death, "death")?;
        let points = (*diagram).0.points();
        let p = points.get(index).ok_or_else(|| {
            fail(IcvecStatus::InvalidArgument, &format!("index {index} out of range for {} points", points.len()))
        })?;
        *dim = p.dim;
        *birth = p.birth;
        *death = p.death;
        Ok(())
    })
}

/// New diagram with infinite deaths replaced by the max filtration.
///
/// # Safety
/// `diagram` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn icvec_diagram_capped(
    diagram: *const IcvecDiagram,
    out: *mut *mut IcvecDiagram,
) -> IcvecStatus {
    guard(|| {
        non_null(diagram, "diagram")?;
        non_null(out, "out")?;
        put(out, IcvecDiagram((*diagram).0.capped()));
        Ok(())
    })
}

/// # Safety
/// `diagram` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn icvec_diagram_free(diagram: *mut IcvecDiagram) {
    if !diagram.is_null() {
        drop(Box::from_raw(diagram));
    }
}

/// Vectorizes the finite off-diagonal points of dimension `dim`. `delta` is
/// used by the stable method only, `normalized` by the persistence method only.
///
/// # Safety
/// `diagram` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn icvec_vectorize(
    diagram: *const IcvecDiagram,
    method: IcvecMethod,
    dim: usize,
    delta: f64,
    normalized: bool,
    out: *mut *mut IcvecVector,
) -> IcvecStatus {
    guard(|| {
        non_null(diagram, "diagram")?;
        non_null(out, "out")?;
        let d = &(*diagram).0;
        let vector = match method {
            IcvecMethod::Persistence => persistence_vector(d, dim, normalized),
            IcvecMethod::Interconnectivity => interconnectivity_vector(d, dim),
            IcvecMethod::StableInterconnectivity => stable_interconnectivity_vector(d, dim, delta),
        }
        .map_err(check)?;
        put(out, IcvecVector(vector));
        Ok(())
    })
}

/// # Safety
/// `vector` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn icvec_vector_len(vector: *const IcvecVector) -> usize {
    vector.as_ref().map_or(0, |v| v.0.len())
}

/// Copies the (descending) entries into `buf`.
///
/// # Safety
/// `vector` must be a live handle and `buf` writable for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn icvec_vector_values(
    vector: *const IcvecVector,
    buf: *mut f64,
    capacity: usize,
) -> IcvecStatus {
    guard(|| {
        non_null(vector, "vector")?;
        copy_out(&(*vector).0.values, buf, capacity)
    })
}

/// # Safety
/// `vector` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn icvec_vector_free(vector: *mut IcvecVector) {
    if !vector.is_null() {
        drop(Box::from_raw(vector));
    }
}

unsafe fn distance(
    a: *const IcvecDiagram,
    b: *const IcvecDiagram,
    out: *mut f64,
    f: impl FnOnce(&PersistenceDiagram, &PersistenceDiagram) -> icvec::Result<f64>,
) -> IcvecStatus {
    guard(|| {
        non_null(a, "a")?;
        non_null(b, "b")?;
        non_null(out, "out")?;
        *out = f(&(*a).0, &(*b).0).map_err(check)?;
        Ok(())
    })
}

/// p-Wasserstein distance with L∞ ground cost between the finite points of dimension `dim`.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn icvec_wasserstein(
    a: *const IcvecDiagram,
    b: *const IcvecDiagram,
    dim: usize,
    p: f64,
    out: *mut f64,
) -> IcvecStatus {
    distance(a, b, out, |a, b| Ok(wasserstein(a, b, dim, p)?.total))
}

/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn icvec_bottleneck(
    a: *const IcvecDiagram,
    b: *const IcvecDiagram,
    dim: usize,
    out: *mut f64,
) -> IcvecStatus {
    distance(a, b, out, |a, b| bottleneck(a, b, dim))
}

/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn icvec_sliced_wasserstein(
    a: *const IcvecDiagram,
    b: *const IcvecDiagram,
    dim: usize,
    slices: usize,
    out: *mut f64,
) -> IcvecStatus {
    distance(a, b, out, |a, b| sliced_wasserstein(a, b, dim, slices))
}
