//! Exact symmetry group of the three-term relation coefficients.

mod closure;
mod export;
mod generators;
mod relations;
mod transform;

pub use closure::{element_order, enumerate_group, enumerate_group_capped, word_transform, Group, GroupElement, DEFAULT_CAP};
pub use export::{cayley_dot, table};
pub use generators::{conjugated_generators, generator, parse_generator_list, GeneratorId};
pub use relations::{check_relations, k_order_multiset, order_multiset, s4_isomorphism_holds, s4_order_multiset, RelationCheck};
pub use transform::{compose, det4, power, product, unimodular_inverse, IMat4, IVec4, IndexAffine, MonomialMap, MonomialSlot, Transform};

/// Transforms and display names for a generator list.
pub fn resolve(ids: &[GeneratorId]) -> (Vec<Transform>, Vec<String>) {
    (ids.iter().map(|&g| generator(g)).collect(), ids.iter().map(|g| g.name().to_string()).collect())
}

/// `⟨σ₀,σ₁,σ₂,σ₃⟩`.
pub fn full_group() -> Group {
    let (gens, names) = resolve(&GeneratorId::BASE);
    enumerate_group(&gens, &names).expect("the base generators close")
}

/// `⟨τσᵢτ⁻¹⟩`, with words over the same indices as [`full_group`].
pub fn conjugated_group() -> Group {
    let names: Vec<String> = GeneratorId::BASE.iter().map(|g| format!("t{}", g.name())).collect();
    enumerate_group(&conjugated_generators(), &names).expect("the conjugated generators close")
}
