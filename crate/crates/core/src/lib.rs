//! Numeric computation of Arnold's J+ invariant and the Stark-Zeeman
//! invariants J1, J2 for T_{k,l}-type periodic orbits of the rotating Kepler
//! problem, cross-validated against their closed-form values.
//!
//! The pipeline: sample an orbit (or build its combinatorial schematic),
//! find the transverse self-intersections, build the planar arrangement of
//! the complement with face windings and double-point indices, evaluate
//! Viro's formula, and repeat on the Levi-Civita square-root lift for J2.

pub mod arrangement;
pub mod closed_form;
pub mod curve;
pub mod error;
pub mod geom;
pub mod intersect;
pub mod invariants;
pub mod kepler;
pub mod roots;
pub mod scan;
pub mod validate;

pub use arrangement::{build_arrangement, j_plus, Arrangement, Face};
pub use closed_form::{
    closed_form_triple, j1_formula, j2_formula, jplus_formula, regime_of, ClosedFormTriple, Regime,
};
pub use curve::{rotation_number, schematic_orbit, standard_curve, winding_at, PolylineCurve};
pub use error::{Error, Result};
pub use geom::Point2;
pub use intersect::{find_double_points, DoublePoint, Tolerances};
pub use invariants::{
    curve_invariants, invariant_report, j1, j2, levi_civita_preimage, CurveInvariants, Guards,
    Half, InvariantReport,
};
pub use kepler::{
    circular_data, circular_kepler_energies, critical_eccentricity, default_samples, hill_radii,
    inertial_position, orbit_params, rotating_position, sample_orbit, solve_kepler,
    tangency_radius, torus_energy, CircularData, Direction, OrbitParams, TorusOrbitSpec,
};
pub use scan::{
    constancy_check, scan_family, scan_family_default, ConstancyReport, EventKind, HomotopyEvent,
    ScanConfig, ScanReport,
};
pub use validate::{run_grid, ValidateCell, ValidateReport};
