//! Register collection and deterministic address allocation.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::ast::Direction;
use crate::error::{Error, Result};
use crate::hier::{InstanceNode, ModuleGraph};

pub const BUS_DATA_WIDTH: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Access {
    Rw,
    R,
}

impl fmt::Display for Access {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Access::Rw => "rw",
            Access::R => "r",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Signed,
    Unsigned,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Signed => "signed",
            Sign::Unsigned => "unsigned",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalType {
    Plain,
    PlusWe,
    PlusRe,
    SingleCycle,
}

impl SignalType {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "plus-we" => Some(SignalType::PlusWe),
            "plus-re" => Some(SignalType::PlusRe),
            "single-cycle" => Some(SignalType::SingleCycle),
            _ => None,
        }
    }
}

/// One host-accessible register, collected from an `external` port.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterSpec {
    /// Hierarchical name: instance prefix + "_" + port name.
    pub full_name: String,
    pub port_name: String,
    pub instance_path: Vec<String>,
    pub data_width: u32,
    pub sign: Sign,
    pub access: Access,
    pub signal_type: SignalType,
    /// Defaults to "lb", the bus clock domain.
    pub clock_domain: String,
    pub description: String,
    /// A 1-bit sibling port `<port>_we` exists.
    pub has_trailing_we: bool,
    /// From the port's `aw` attribute; the register spans 2^aw addresses.
    pub addr_width: u32,
}

impl RegisterSpec {
    /// The register has a write-enable strobe signal.
    pub fn has_we_strobe(&self) -> bool {
        self.has_trailing_we || self.signal_type == SignalType::PlusWe
    }
}

pub fn addr_width_of(reg: &RegisterSpec) -> u32 {
    reg.addr_width
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BusConfig {
    /// MSB index of the address bus; the space spans 2^(lb_hi+1) addresses.
    pub lb_hi: u32,
    pub base_offset: u64,
    pub data_width: u32,
}

impl BusConfig {
    pub fn new(lb_hi: u32, base_offset: u64) -> Result<Self> {
        if !(4..=30).contains(&lb_hi) {
            return Err(Error::Alloc(format!("lb_hi {lb_hi} outside [4, 30]")));
        }
        let cfg = BusConfig {
            lb_hi,
            base_offset,
            data_width: BUS_DATA_WIDTH,
        };
        if base_offset >= cfg.space_size() {
            return Err(Error::Alloc(format!(
                "base offset {base_offset} outside the 2^{} address space",
                lb_hi + 1
            )));
        }
        Ok(cfg)
    }

    pub fn space_size(&self) -> u64 {
        1u64 << (self.lb_hi + 1)
    }

    pub fn addr_mask(&self) -> u64 {
        self.space_size() - 1
    }
}

impl Default for BusConfig {
    fn default() -> Self {
        BusConfig {
            lb_hi: 14,
            base_offset: 0,
            data_width: BUS_DATA_WIDTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddressMapEntry {
    pub register: RegisterSpec,
    pub base_addr: u64,
    pub addr_width: u32,
}

impl AddressMapEntry {
    pub fn span(&self) -> u64 {
        1u64 << self.addr_width
    }

    pub fn contains(&self, addr: u64) -> bool {
        addr >= self.base_addr && addr < self.base_addr + self.span()
    }
}

/// Allocated map; entries sorted by full name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddressMap {
    pub bus: BusConfig,
    pub entries: Vec<AddressMapEntry>,
}

impl AddressMap {
    pub fn entry(&self, full_name: &str) -> Option<&AddressMapEntry> {
        self.entries.iter().find(|e| e.register.full_name == full_name)
    }
}

fn join_name(prefix: &str, port: &str) -> String {
    if prefix.is_empty() {
        port.to_string()
    } else {
        format!("{prefix}_{port}")
    }
}

/// Collect one RegisterSpec per external port per tree node. Trailing `_we`
/// siblings are absorbed into their base register. Result is sorted by full
/// name.
pub fn collect_registers(tree: &InstanceNode, graph: &ModuleGraph) -> Result<Vec<RegisterSpec>> {
    let mut regs: Vec<RegisterSpec> = Vec::new();
    for node in tree.walk() {
        let gm = graph
            .get(&node.module_name)
            .ok_or_else(|| Error::Hier(format!("module '{}' not in graph", node.module_name)))?;
        let module = &gm.module;
        let external: BTreeSet<&str> = module
            .ports
            .iter()
            .filter(|p| p.attrs.has("external"))
            .map(|p| p.name.as_str())
            .collect();
        for port in &module.ports {
            if let Some(base) = port.name.strip_suffix("_we") {
                if external.contains(base) {
                    // strobe sibling, absorbed into the base register
                    if port.width() != 1 {
                        return Err(Error::Collect(format!(
                            "strobe port '{}' in module '{}' must be 1 bit wide, got {}",
                            port.name,
                            module.name,
                            port.width()
                        )));
                    }
                    continue;
                }
            }
            if !port.attrs.has("external") {
                continue;
            }
            if port.direction == Direction::Inout {
                return Err(Error::Collect(format!(
                    "external port '{}' in module '{}' is inout; only input or output ports can be registers",
                    port.name, module.name
                )));
            }
            if port.width() > BUS_DATA_WIDTH {
                return Err(Error::Collect(format!(
                    "external port '{}' in module '{}' is {} bits wide, exceeding the {}-bit bus",
                    port.name,
                    module.name,
                    port.width(),
                    BUS_DATA_WIDTH
                )));
            }
            let signal_type = match port.attrs.get("signal_type") {
                Some(s) => SignalType::parse(s).ok_or_else(|| {
                    Error::Collect(format!(
                        "unknown signal_type \"{}\" on port '{}' in module '{}' \
                         (expected plus-we, plus-re, or single-cycle)",
                        s, port.name, module.name
                    ))
                })?,
                None => SignalType::Plain,
            };
            let addr_width = match port.attrs.get("aw") {
                Some(s) => s.parse::<u32>().map_err(|_| {
                    Error::Collect(format!(
                        "aw attribute on port '{}' in module '{}' must be a non-negative integer, got \"{s}\"",
                        port.name, module.name
                    ))
                })?,
                None => 0,
            };
            let has_trailing_we = module
                .port(&format!("{}_we", port.name))
                .is_some();
            regs.push(RegisterSpec {
                full_name: join_name(&node.prefix, &port.name),
                port_name: port.name.clone(),
                instance_path: node.path.clone(),
                data_width: port.width(),
                sign: if port.signed { Sign::Signed } else { Sign::Unsigned },
                access: if port.direction == Direction::Output {
                    Access::R
                } else {
                    Access::Rw
                },
                signal_type,
                clock_domain: port.attrs.get("cd").unwrap_or("lb").to_string(),
                description: port.attrs.get("description").unwrap_or("").to_string(),
                has_trailing_we,
                addr_width,
            });
        }
    }

    // A module with automatic registers must not be instantiated without
    // lb_automatic anywhere in the design: those registers are unreachable.
    for (name, gm) in graph.iter() {
        for pi in &gm.module.plain_instances {
            if let Some(target) = graph.get(&pi.module_name) {
                if target.module.has_external_ports() {
                    return Err(Error::Collect(format!(
                        "module '{}' has host-accessible registers but instance '{}' in '{}' ({}:{}:{}) is not marked (* lb_automatic *)",
                        pi.module_name, pi.instance_name, name, gm.path, pi.line, pi.col
                    )));
                }
            }
        }
    }

    regs.sort_by(|a, b| a.full_name.cmp(&b.full_name));
    for pair in regs.windows(2) {
        if pair[0].full_name == pair[1].full_name {
            return Err(Error::Collect(format!(
                "register name '{}' is produced by both '{}' and '{}'",
                pair[0].full_name,
                pair[0].instance_path.join("/"),
                pair[1].instance_path.join("/")
            )));
        }
    }
    Ok(regs)
}

/// Deterministic first-fit allocation: descending addr_width, then ascending
/// full name; the cursor aligns up to each entry's span.
pub fn allocate(regs: &[RegisterSpec], bus: BusConfig) -> Result<AddressMap> {
    let mut order: Vec<&RegisterSpec> = regs.iter().collect();
    order.sort_by(|a, b| {
        b.addr_width
            .cmp(&a.addr_width)
            .then_with(|| a.full_name.cmp(&b.full_name))
    });
    let mut cursor = bus.base_offset;
    let mut entries = Vec::with_capacity(regs.len());
    for reg in order {
        let span = 1u64 << reg.addr_width;
        let aligned = cursor
            .checked_add(span - 1)
            .map(|c| c & !(span - 1))
            .ok_or_else(|| Error::Alloc("address cursor overflow".into()))?;
        if aligned + span > bus.space_size() {
            return Err(Error::Alloc(format!(
                "address space exhausted allocating '{}' (need {} addresses at {}, space is {})",
                reg.full_name,
                span,
                aligned,
                bus.space_size()
            )));
        }
        entries.push(AddressMapEntry {
            register: reg.clone(),
            base_addr: aligned,
            addr_width: reg.addr_width,
        });
        cursor = aligned + span;
    }
    entries.sort_by(|a, b| a.register.full_name.cmp(&b.register.full_name));
    Ok(AddressMap { bus, entries })
}
