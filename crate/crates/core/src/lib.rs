pub mod composite;
pub mod cones;
pub mod conic;
pub mod conjugate;
pub mod error;
pub mod extended;
pub mod linalg;
pub mod library;
pub mod lp;
pub mod map;
pub mod matrixapps;
pub mod oracle;
pub mod polyhedral;
pub mod sampling;
pub mod scalar;
pub mod search;
pub mod sets;
pub mod space;
pub mod subdiff;
pub mod verify;

pub use error::{Error, Result};
pub use extended::{ExtPoint, Extended};
pub use scalar::Real;
pub use space::SpaceDescriptor;

pub type ExtendedReal = Extended<f64>;

pub type FunctionOracle = oracle::Oracle<f64>;
pub type ConeDescriptor = cones::Cone<f64>;
pub type ConvexSetDescriptor = sets::ConvexSet<f64>;
pub type ConeConvexMap = map::ConeMap<f64>;
pub type CompositeProblem = composite::CompositeProblem<f64>;
pub type SubdifferentialSet = subdiff::SubdifferentialSet<f64>;

pub type FunctionOracle32 = oracle::Oracle<f32>;
pub type ConeDescriptor32 = cones::Cone<f32>;
pub type ConvexSetDescriptor32 = sets::ConvexSet<f32>;
pub type ConeConvexMap32 = map::ConeMap<f32>;
pub type CompositeProblem32 = composite::CompositeProblem<f32>;
pub type SubdifferentialSet32 = subdiff::SubdifferentialSet<f32>;
