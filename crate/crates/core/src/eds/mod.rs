//! Numerical exterior differential systems on the unitary frame bundle of
//! `CP²` and `CH²`.

pub mod cartan;
pub mod coframe;
pub mod form;
pub mod jet;
pub mod reduce;
pub mod systems;
pub mod tableau;

pub use cartan::{cartan_test_hopf, characteristic_test, CartanReport, PolarData};
pub use coframe::Coframe;
pub use form::DifferentialForm;
pub use jet::Jet;
pub use reduce::{reduce_mod_ideal, Ideal, Reducer};
pub use systems::{SystemId, TableauReport};
pub use tableau::TableauAnalysis;
