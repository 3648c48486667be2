//! Contracting geometry in free groups: axes, projections, barriers and
//! admissible paths.

mod admissible;
mod axis;
mod barrier;

pub use admissible::{
    admissible_check, extension_choose, extension_path, quasi_geodesic_constant, translated_geodesic,
    AdmissiblePathSpec, AdmissibleReport, AxisSegment, Clause, ExtensionSet, Violation,
};
pub use axis::{
    contraction_constant, primitive_root, project, projection_diameter, Axis, AXIS_WINDOW_CAP,
    CONTRACTION_PAIR_LIMIT,
};
pub use barrier::{
    barrier_free_portion, barrier_free_set, barrier_stats, barrier_witnesses, has_barrier, portion_from_witnesses,
    write_barrier_stats_csv, BarrierFreeSet, BarrierRecord, BarrierStatsRow,
};
