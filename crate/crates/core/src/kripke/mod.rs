//! Finite preorder models: evaluation, clusters, confluence and p-morphisms.

mod check;
mod clusters;
mod json;
mod model;
mod pmorphism;
mod worldset;

pub use check::{model_check, satisfies, SmallModel};
pub use clusters::{clusters, ClusterView};
pub use json::{model_from_json, model_to_json, ClosureMode, ModelFile};
pub use model::{default_world_names, OrderMode, PreorderModel};
pub use pmorphism::{find_p_morphism, spec_candidate, PMorphism, RootedFrame};
pub use worldset::WorldSet;

pub(crate) use check::full_mask;
pub(crate) use model::close_preorder;

pub fn generated_submodel(m: &PreorderModel, x: usize) -> PreorderModel {
    m.generated_submodel(x)
}

pub fn is_confluent(m: &PreorderModel) -> bool {
    m.is_confluent()
}
