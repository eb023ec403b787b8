//! Paths, gadgets, templates and absorbing structures.

pub mod gadget;
pub mod greedy;
pub mod path;
pub mod reach;
pub mod structure;
pub mod template;

pub use gadget::{build_gadget, gadget_exit_tiling, gadget_for, GadgetBlueprint, SplitGadget};
pub use path::{build_h_path, complement_vector, path_exit_tilings, HPath};
pub use structure::{absorb, assemble_absorbing_structure, AbsorbingStructure, AssemblyError, StructureParams};
pub use template::{
    generate_shaped, generate_template, sparse_template, Template, TemplateShape, Verification, VerifyMode,
};
