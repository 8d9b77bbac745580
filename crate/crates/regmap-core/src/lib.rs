//! Pre-compile register-map automation for Verilog designs.
//!
//! The core pipeline: scan source files for `(* external *)` port
//! attributes and `(* lb_automatic *)` instantiations, elaborate the
//! instance hierarchy, allocate a flat address map, and emit connection
//! macros, an address-map header, a bus decoder macro, a JSON map, and
//! markdown documentation. A software decode oracle models the generated
//! bus semantics for property testing and downstream use.
//!
//! This crate is `no_std` (alloc required); file IO, module resolution on
//! disk, and the CLI live in the `regmap-gen` companion crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ast;
pub mod emit;
pub mod error;
pub mod hier;
pub mod oracle;
pub mod parse;
pub mod regmodel;
pub mod token;

pub use ast::{AttributeSet, Direction, InstanceDecl, Module, PortDecl, SourceUnit};
pub use emit::{emit_all, EmittedArtifacts};
pub use error::{Error, Result};
pub use hier::{build_instance_tree, InstanceNode, ModuleGraph};
pub use parse::parse_source;
pub use regmodel::{
    allocate, collect_registers, AddressMap, AddressMapEntry, BusConfig, RegisterSpec,
};
