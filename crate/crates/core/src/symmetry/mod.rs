//! Permutation groups acting on variables, induced actions on axioms, and
//! automorphisms of circuits.

mod automorphism;
mod group;
mod io;

pub use automorphism::{
    attach_witnesses, derive_witness, search_automorphism, verify_witness, DEFAULT_AUTOMORPHISM_CAP,
};
pub use group::{
    check_invariance, cycle_space_generators, induce_y_action, symmetric_group_moves,
    GroupPresentation, VariablePermutation, DEFAULT_GROUP_CAP,
};
pub use io::{parse_group, write_group};
pub(crate) use io::{parse_group_lines, write_group_lines};
