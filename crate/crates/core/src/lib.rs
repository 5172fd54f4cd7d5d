//! Computations with finite crossed modules and their quasi-abelian third
//! cohomology: cocycle checking and classification up to coboundary, the
//! modular data (simple objects, twists, S-matrix, Gauss sum, central charge,
//! fusion rules) of the braided fusion category obtained by equivariantizing
//! the associated crossed pointed category, and the structure constants and
//! axiom verification of the generalized twisted-double quasi-Hopf algebra.
//!
//! All group data is extensional (multiplication tables, order at most 120)
//! and all cocycle scalars are roots of unity stored as exponents mod a fixed
//! level `N`, so the cohomological layer is exact integer arithmetic. Only
//! character tables and derived modular/algebra data are floating point, with
//! explicit tolerances.

pub mod cohomology;
pub mod group;
pub mod modular;
pub mod numeric;
pub mod projrep;
pub mod quasihopf;
pub mod scalar;
pub mod snf;
pub mod xmod;

pub use cohomology::{
    are_equivalent, check_crossed_category_axioms, check_qa3, coboundary, cocycle_basis,
    cyclic_3cocycle, from_group_3cocycle, from_ospel, group_3cocycle_basis, h3qa, h3qa_detail,
    is_coboundary, is_nondegenerate, normalize, normalize_group_3cocycle, pullback, CategoryReport,
    CoboundaryData, CocycleError, CocycleReport, CohomologyGroup, QaCocycle,
};
pub use group::{make_group, FiniteGroup, GroupAction, GroupError, GroupSpec};
pub use modular::{
    central_charge, enumerate_twists, gauss_sum, is_modular, modular_data, s_matrix,
    simple_objects, twist_vector, verlinde_fusion, FusionTensor, ModularData, ModularError,
    SimpleObject, Simples,
};
pub use projrep::{
    projective_character_table, stabilizer_2cocycle, CharacterTable, ProjRepError, TwistedCocycle,
};
pub use quasihopf::{
    build_qhopf, center_dimension, first_failing_axiom, perturb_random_constant,
    verify_qhopf_axioms, QhAxiom, QhReport, QuasiHopf, QuasiHopfError,
};
pub use scalar::ScalarExp;
pub use xmod::{
    automorphisms, conjugation_module, inclusion_module, isomorphisms, ker_partial,
    trivial_base_module, CrossedModule, XModError, XModHom, XModReport,
};
