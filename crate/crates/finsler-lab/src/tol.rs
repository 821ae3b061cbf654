//! Centralized tolerances used by the verification machinery and the
//! acceptance suite. Grouped by origin so no check carries an ad-hoc magic
//! number.

// ----- jet engine vs finite-difference oracle -------------------------------

/// Jet vs FD agreement for entries of total order <= 3. The FD side carries
/// O(h^4) truncation plus ~1e-9 cancellation noise at its tuned steps.
pub const JET_FD_REL_LOW: f64 = 1e-5;

/// Jet vs FD agreement for total order 4, where stencil cancellation costs
/// roughly one more digit.
pub const JET_FD_REL_HIGH: f64 = 1e-4;

/// Default FD base step; per-entry steps are scaled up with derivative order
/// to keep cancellation below truncation.
pub const FD_DEFAULT_STEP: f64 = 1e-3;

// ----- exact-path algebraic identities --------------------------------------

/// Euler relations and homogeneity degrees: pure series algebra, noise floor
/// only.
pub const EULER_REL: f64 = 1e-9;

/// Metric-compatibility defects of family members (both slots).
pub const COMPAT_DEFECT: f64 = 1e-7;

/// Frame-convention validators: ell-contractions of covariant derivatives
/// of the Cartan tensor and vertical-derivative symmetry.
pub const CONVENTION_RESIDUAL: f64 = 1e-7;

/// Curvature identity suite (skew symmetry, first Bianchi, symmetric-part
/// formulas, the P_n slice formula).
pub const CURVATURE_IDENTITY: f64 = 1e-6;

/// The assembled vv-block, identically zero for torsion-free members.
pub const Q_ZERO: f64 = 1e-12;

/// Cross-construction oracles (family(1) vs spray Hessian, raised first
/// iterate vs Landsberg tensor), relative.
pub const CROSS_ORACLE_REL: f64 = 1e-6;

// ----- classification --------------------------------------------------------

/// Deciding-norm threshold for Riemannian / Landsberg / Berwald verdicts,
/// relative to the natural scale of each norm. One order above the observed
/// jet-engine noise floor.
pub const CLASSIFY_TAU: f64 = 1e-7;

/// Threshold for the hv-curvature Berwald criterion.
pub const CLASSIFY_TAU_P: f64 = 1e-6;

/// Non-Berwald witnesses must push |P| at least this high.
pub const NONBERWALD_P_MIN: f64 = 1e-3;

// ----- constant-flag-curvature oracles ---------------------------------------

pub const SPHERE_FLAG_TOL: f64 = 1e-6;
pub const FUNK_FLAG_TOL: f64 = 1e-5;

// ----- geodesics --------------------------------------------------------------

/// Unit-speed drift budget over t in [0, 10] at dt = 1e-3 with the classical
/// fourth-order one-step integrator.
pub const GEODESIC_DRIFT: f64 = 1e-6;

/// Residual of d(adot)/dt against the second iterate along transported
/// frames; limited by the centered differencing of the time series.
pub const ODE_RESIDUAL: f64 = 1e-4;

/// Along-geodesic witness k2 * addot - adot on Landsberg metrics.
pub const WITNESS_SMALL: f64 = 1e-7;

/// The same witness on a non-Landsberg metric stays above this.
pub const WITNESS_LARGE: f64 = 1e-3;
