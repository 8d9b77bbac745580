//! Parsed representation of one Verilog file: modules, their ports (with
//! attributes), and the instantiations found in their bodies.

use alloc::string::String;
use alloc::vec::Vec;

/// Ordered `(* key = "value" *)` entries. Keys are unique within a set;
/// a bare key stores no value.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AttributeSet {
    pub entries: Vec<(String, Option<String>)>,
}

impl AttributeSet {
    pub fn has(&self, key: &str) -> bool {
        self.entries.iter().any(|(k, _)| k == key)
    }

    /// Value of `key`, if the key is present and carries one.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .and_then(|(_, v)| v.as_deref())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Input,
    Output,
    Inout,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortDecl {
    pub name: String,
    pub direction: Direction,
    /// `[msb:lsb]`; absent for scalar ports.
    pub range: Option<(i64, i64)>,
    pub signed: bool,
    pub attrs: AttributeSet,
    pub line: u32,
    pub col: u32,
}

impl PortDecl {
    pub fn width(&self) -> u32 {
        match self.range {
            Some((msb, lsb)) => (msb - lsb).unsigned_abs() as u32 + 1,
            None => 1,
        }
    }
}

/// An attributed (`lb_automatic`) instantiation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceDecl {
    pub module_name: String,
    pub instance_name: String,
    pub attrs: AttributeSet,
    /// Body contained `` `AUTOMATIC_<instance_name> ``.
    pub has_automatic_macro: bool,
    pub gvar: Option<String>,
    pub gcnt: Option<u32>,
    pub line: u32,
    pub col: u32,
}

/// A plain instantiation, recorded only so collection can flag modules
/// whose registers would be unreachable through it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlainInstance {
    pub module_name: String,
    pub instance_name: String,
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Module {
    pub name: String,
    pub ports: Vec<PortDecl>,
    pub instances: Vec<InstanceDecl>,
    pub plain_instances: Vec<PlainInstance>,
}

impl Module {
    pub fn port(&self, name: &str) -> Option<&PortDecl> {
        self.ports.iter().find(|p| p.name == name)
    }

    pub fn has_external_ports(&self) -> bool {
        self.ports.iter().any(|p| p.attrs.has("external"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceUnit {
    pub path: String,
    pub modules: Vec<Module>,
    /// Non-fatal diagnostics (unknown attribute keys and the like).
    pub warnings: Vec<String>,
}
