//! Fields of characteristic 0 and finite transcendence degree.

pub mod cyclotomic;
pub mod radical;
pub mod rootset;
pub mod tower;
pub mod transcendental;
pub mod view;

pub use cyclotomic::{
    compare_cyclotomic, cyclo_emitter, example_field_f, inf_reduction, pi2_reduction, CycloEmitter,
    CycloTower, Detector, OnesCount, PatternRepeat, UpDownCounter,
};
pub use radical::{radical_field, radical_field_enumerated, RadicalEmitter, RadicalTower};
pub use rootset::{int_poly, int_poly_index, RootSetOperator, RootWitness};
pub use tower::{FieldEmitterConfig, Tower, TowerEmitter};
pub use transcendental::{map_frac, CodeFrac, PureTranscendental};
pub use view::FieldView;
