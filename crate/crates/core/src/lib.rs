//! Selective Rips filtrations on finite geodesic metric spaces, with
//! persistent homology over a prime field, exact winding-number oracles on
//! model spaces and localization of detected loops via critical
//! 2-simplices.

pub mod compare;
pub mod complex;
pub mod error;
pub mod io;
pub mod localize;
pub mod metric;
pub mod persistence;
pub mod scale;
pub mod winding;

pub use compare::{compare_diagrams, MatchReport, SimpleBar};
pub use complex::{
    build_filtration, cluster_value, filtration_value, FilteredSimplex, Filtration,
    FiltrationParams,
};
pub use error::{Error, Result};
pub use localize::{critical_simplex, filling, localize_bar, verify_loop, LocalizedLoop};
pub use persistence::{reduce, reduce_with_metric, Bar, Chain, PersistenceDiagram, PrimeField};
pub use metric::{
    azimuthal_context, build_geodesic_metric, exact_circle_metric, exact_cylinder_metric,
    poisson_thin, sample_cut_sphere, sample_cylinder, FiniteMetric, PointCloud, Provenance,
    WindingContext,
};
pub use scale::ScaleMap;
pub use winding::{
    check_quadruple, is_circumventing, winding_chain, winding_triple, OrientedTriple,
    QuadrupleReport, WindingResult,
};
