//! Software reference model of the bus decode and write semantics. Used to
//! property-test the generated artifacts and usable by downstream software
//! as a library.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::regmodel::{Access, AddressMap, SignalType};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TxnKind {
    Write,
    Read,
    Idle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BusTransaction {
    pub cycle: u64,
    pub kind: TxnKind,
    pub addr: u64,
    pub data: u32,
}

impl BusTransaction {
    pub fn write(cycle: u64, addr: u64, data: u32) -> Self {
        BusTransaction {
            cycle,
            kind: TxnKind::Write,
            addr,
            data,
        }
    }

    pub fn read(cycle: u64, addr: u64) -> Self {
        BusTransaction {
            cycle,
            kind: TxnKind::Read,
            addr,
            data: 0,
        }
    }

    pub fn idle(cycle: u64) -> Self {
        BusTransaction {
            cycle,
            kind: TxnKind::Idle,
            addr: 0,
            data: 0,
        }
    }
}

/// Register values plus strobe levels for one cycle. Strobes are keyed by
/// their signal name (`<reg>_we` / `<reg>_re`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterStore {
    pub values: BTreeMap<String, u32>,
    pub strobes: BTreeMap<String, bool>,
}

impl RegisterStore {
    fn initial(map: &AddressMap) -> Self {
        let mut values = BTreeMap::new();
        let mut strobes = BTreeMap::new();
        for e in &map.entries {
            let r = &e.register;
            values.insert(r.full_name.clone(), 0u32);
            if r.has_we_strobe() {
                strobes.insert(format!("{}_we", r.full_name), false);
            }
            if r.signal_type == SignalType::PlusRe {
                strobes.insert(format!("{}_re", r.full_name), false);
            }
        }
        RegisterStore { values, strobes }
    }
}

/// The unique entry whose span contains the masked address, with the offset
/// within the span. Total: unallocated addresses return None.
pub fn decode<'a>(map: &'a AddressMap, addr: u64) -> Option<(&'a str, u64)> {
    let a = addr & map.bus.addr_mask();
    map.entries
        .iter()
        .find(|e| e.contains(a))
        .map(|e| (e.register.full_name.as_str(), a - e.base_addr))
}

fn width_mask(w: u32) -> u32 {
    if w >= 32 {
        u32::MAX
    } else {
        (1u32 << w) - 1
    }
}

/// Run a transaction sequence through the model; returns one snapshot per
/// cycle (index = cycle). A write at cycle t is visible at t+1 (t+2 for
/// registers outside the lb clock domain); strobes pulse for exactly one
/// cycle.
pub fn simulate_write_sequence(map: &AddressMap, txns: &[BusTransaction]) -> Vec<RegisterStore> {
    let last_cycle = txns.iter().map(|t| t.cycle).max().unwrap_or(0);
    // enough cycles for the slowest path (cross-domain write) to settle
    let cycles = last_cycle + 4;
    let by_cycle: BTreeMap<u64, &BusTransaction> = txns.iter().map(|t| (t.cycle, t)).collect();

    struct Arrival {
        visible: u64,
        name: String,
        value: Option<u32>,
        strobe: Option<String>,
    }
    let mut pending: Vec<Arrival> = Vec::new();
    let mut snapshots = Vec::with_capacity(cycles as usize);
    snapshots.push(RegisterStore::initial(map));

    for cycle in 0..cycles - 1 {
        let mut next = snapshots[cycle as usize].clone();
        for s in next.strobes.values_mut() {
            *s = false;
        }
        // single-cycle registers hold the written value for one cycle only
        for e in &map.entries {
            if e.register.signal_type == SignalType::SingleCycle {
                next.values.insert(e.register.full_name.clone(), 0);
            }
        }
        if let Some(txn) = by_cycle.get(&cycle) {
            if let Some((name, _offset)) = decode(map, txn.addr) {
                let e = map.entry(name).expect("decoded entry");
                let r = &e.register;
                match txn.kind {
                    TxnKind::Write if r.access == Access::Rw => {
                        let latency = if r.clock_domain == "lb" { 1 } else { 2 };
                        pending.push(Arrival {
                            visible: cycle + latency,
                            name: r.full_name.clone(),
                            value: Some(txn.data & width_mask(r.data_width)),
                            strobe: r
                                .has_we_strobe()
                                .then(|| format!("{}_we", r.full_name)),
                        });
                    }
                    TxnKind::Read if r.signal_type == SignalType::PlusRe => {
                        pending.push(Arrival {
                            visible: cycle + 1,
                            name: r.full_name.clone(),
                            value: None,
                            strobe: Some(format!("{}_re", r.full_name)),
                        });
                    }
                    _ => {}
                }
            }
        }
        // apply everything that becomes visible in the snapshot being built
        pending.retain(|a| {
            if a.visible != cycle + 1 {
                return true;
            }
            if let Some(v) = a.value {
                next.values.insert(a.name.clone(), v);
            }
            if let Some(s) = &a.strobe {
                next.strobes.insert(s.clone(), true);
            }
            false
        });
        snapshots.push(next);
    }
    snapshots
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Overlap { a: String, b: String, addr: u64 },
    Misaligned { name: String, base_addr: u64 },
    OutOfRange { name: String, base_addr: u64 },
    DuplicateName { name: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Overlap { a, b, addr } => {
                write!(f, "entries '{a}' and '{b}' both decode address {addr}")
            }
            Violation::Misaligned { name, base_addr } => {
                write!(f, "entry '{name}' base address {base_addr} is not span-aligned")
            }
            Violation::OutOfRange { name, base_addr } => {
                write!(f, "entry '{name}' at {base_addr} extends past the address space")
            }
            Violation::DuplicateName { name } => {
                write!(f, "register name '{name}' appears twice")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Brute-force re-check of the map invariants, independent of the
/// allocator: every address decodes to at most one entry, spans are aligned
/// and in range, names are unique. Violations are data, not errors.
pub fn verify_map(map: &AddressMap) -> VerifyReport {
    let mut report = VerifyReport::default();
    let space = map.bus.space_size();
    for (i, e) in map.entries.iter().enumerate() {
        let name = &e.register.full_name;
        if e.base_addr % e.span() != 0 {
            report.violations.push(Violation::Misaligned {
                name: name.clone(),
                base_addr: e.base_addr,
            });
        }
        if e.base_addr + e.span() > space {
            report.violations.push(Violation::OutOfRange {
                name: name.clone(),
                base_addr: e.base_addr,
            });
        }
        if map.entries[..i].iter().any(|p| p.register.full_name == *name) {
            report
                .violations
                .push(Violation::DuplicateName { name: name.clone() });
        }
    }
    // sweep: owner per address
    let mut owner: Vec<usize> = Vec::new();
    owner.resize(space as usize, usize::MAX);
    for (i, e) in map.entries.iter().enumerate() {
        let end = (e.base_addr + e.span()).min(space);
        for a in e.base_addr..end {
            let slot = &mut owner[a as usize];
            if *slot != usize::MAX {
                report.violations.push(Violation::Overlap {
                    a: map.entries[*slot].register.full_name.clone(),
                    b: e.register.full_name.clone(),
                    addr: a,
                });
            } else {
                *slot = i;
            }
        }
    }
    report
}

/// One parsed `` `define HIT_<name> `` predicate: hit when
/// `(addr & space_mask) & !ignore_mask == base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HitPredicate {
    pub name: String,
    pub ignore_mask: u64,
    pub base: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HitTable {
    pub lb_hi: u32,
    pub predicates: Vec<HitPredicate>,
}

impl HitTable {
    pub fn addr_mask(&self) -> u64 {
        (1u64 << (self.lb_hi + 1)) - 1
    }

    /// Names of all predicates true at `addr`.
    pub fn hits(&self, addr: u64) -> Vec<&str> {
        let a = addr & self.addr_mask();
        self.predicates
            .iter()
            .filter(|p| a & !p.ignore_mask == p.base)
            .map(|p| p.name.as_str())
            .collect()
    }
}

/// Parse an emitted address-map header back into evaluatable predicates.
/// Only the two emitted forms (equality and mask) are understood.
pub fn parse_hit_header(text: &str) -> Result<HitTable> {
    let mut lb_hi = None;
    let mut predicates = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let bad = |what: &str| {
            Error::OracleInput(format!("line {}: {what}: {line}", lineno + 1))
        };
        if let Some(rest) = line.strip_prefix("`define LB_HI ") {
            lb_hi = Some(
                rest.trim()
                    .parse::<u32>()
                    .map_err(|_| bad("malformed LB_HI"))?,
            );
        } else if let Some(rest) = line.strip_prefix("`define HIT_") {
            let (name, body) = rest.split_once(' ').ok_or_else(|| bad("missing body"))?;
            let pred = if let Some(b) = body.strip_prefix("((lb_addr[`LB_HI:0]&~") {
                let (mask, b) = b.split_once(")==").ok_or_else(|| bad("malformed mask form"))?;
                let base = b.strip_suffix(')').ok_or_else(|| bad("missing ')'"))?;
                HitPredicate {
                    name: name.to_string(),
                    ignore_mask: mask.parse().map_err(|_| bad("malformed mask"))?,
                    base: base.parse().map_err(|_| bad("malformed base"))?,
                }
            } else if let Some(b) = body.strip_prefix("(lb_addr[`LB_HI:0]==") {
                let base = b.strip_suffix(')').ok_or_else(|| bad("missing ')'"))?;
                HitPredicate {
                    name: name.to_string(),
                    ignore_mask: 0,
                    base: base.parse().map_err(|_| bad("malformed base"))?,
                }
            } else {
                return Err(bad("unrecognized HIT form"));
            };
            predicates.push(pred);
        }
    }
    Ok(HitTable {
        lb_hi: lb_hi.ok_or_else(|| Error::OracleInput("no LB_HI define found".to_string()))?,
        predicates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emit::emit_addr_map_header;
    use crate::regmodel::{
        AddressMap, AddressMapEntry, BusConfig, RegisterSpec, Sign,
    };

    fn reg(name: &str, width: u32, st: SignalType, trailing_we: bool, cd: &str) -> RegisterSpec {
        RegisterSpec {
            full_name: name.into(),
            port_name: name.into(),
            instance_path: Vec::new(),
            data_width: width,
            sign: Sign::Unsigned,
            access: Access::Rw,
            signal_type: st,
            clock_domain: cd.into(),
            description: String::new(),
            has_trailing_we: trailing_we,
            addr_width: 0,
        }
    }

    fn map_of(entries: Vec<(RegisterSpec, u64, u32)>) -> AddressMap {
        let mut entries: Vec<AddressMapEntry> = entries
            .into_iter()
            .map(|(mut r, base, aw)| {
                r.addr_width = aw;
                AddressMapEntry {
                    register: r,
                    base_addr: base,
                    addr_width: aw,
                }
            })
            .collect();
        entries.sort_by(|a, b| a.register.full_name.cmp(&b.register.full_name));
        AddressMap {
            bus: BusConfig::default(),
            entries,
        }
    }

    #[test]
    fn decode_scalars() {
        let map = map_of(alloc::vec![
            (reg("x", 8, SignalType::Plain, false, "lb"), 0, 0),
            (reg("y", 8, SignalType::Plain, false, "lb"), 1, 0),
        ]);
        assert_eq!(decode(&map, 1), Some(("y", 0)));
        assert_eq!(decode(&map, 2), None);
    }

    #[test]
    fn decode_empty_map() {
        let map = map_of(Vec::new());
        for a in 0..64 {
            assert_eq!(decode(&map, a), None);
        }
    }

    #[test]
    fn decode_span() {
        let map = map_of(alloc::vec![(
            reg("m", 8, SignalType::Plain, false, "lb"),
            8,
            2
        )]);
        // brute force the low addresses
        for a in 0u64..16 {
            let expect = if (8..12).contains(&a) {
                Some(("m", a - 8))
            } else {
                None
            };
            assert_eq!(decode(&map, a), expect, "addr {a}");
        }
    }

    #[test]
    fn decode_masks_address() {
        let map = map_of(alloc::vec![(
            reg("x", 8, SignalType::Plain, false, "lb"),
            3,
            0
        )]);
        // bit 15 is above LB_HI=14 and must be ignored
        assert_eq!(decode(&map, 3 + (1 << 15)), Some(("x", 0)));
    }

    #[test]
    fn write_pulses_strobe_one_cycle() {
        let map = map_of(alloc::vec![(
            reg("prng_iva", 32, SignalType::PlusWe, true, "lb"),
            0,
            0
        )]);
        let trace = simulate_write_sequence(&map, &[BusTransaction::write(0, 0, 5)]);
        assert_eq!(trace[0].values["prng_iva"], 0);
        assert_eq!(trace[0].strobes["prng_iva_we"], false);
        assert_eq!(trace[1].values["prng_iva"], 5);
        assert_eq!(trace[1].strobes["prng_iva_we"], true);
        assert_eq!(trace[2].values["prng_iva"], 5);
        assert_eq!(trace[2].strobes["prng_iva_we"], false);
    }

    #[test]
    fn idle_sequence_keeps_initial_store() {
        let map = map_of(alloc::vec![(
            reg("x", 8, SignalType::Plain, false, "lb"),
            0,
            0
        )]);
        let trace = simulate_write_sequence(
            &map,
            &[BusTransaction::idle(0), BusTransaction::idle(3)],
        );
        for snap in &trace {
            assert_eq!(snap, &trace[0]);
        }
    }

    #[test]
    fn write_truncates_to_data_width() {
        let map = map_of(alloc::vec![(
            reg("prng_run", 1, SignalType::Plain, false, "lb"),
            0,
            0
        )]);
        let trace = simulate_write_sequence(&map, &[BusTransaction::write(0, 0, 0xFFFF_FFFF)]);
        assert_eq!(trace[1].values["prng_run"], 1);
    }

    #[test]
    fn single_cycle_reverts() {
        let map = map_of(alloc::vec![(
            reg("pulse", 8, SignalType::SingleCycle, false, "lb"),
            0,
            0
        )]);
        let trace = simulate_write_sequence(&map, &[BusTransaction::write(0, 0, 7)]);
        assert_eq!(trace[1].values["pulse"], 7);
        assert_eq!(trace[2].values["pulse"], 0);
    }

    #[test]
    fn read_strobe_pulses() {
        let map = map_of(alloc::vec![(
            reg("x", 8, SignalType::PlusRe, false, "lb"),
            0,
            0
        )]);
        let trace = simulate_write_sequence(&map, &[BusTransaction::read(1, 0)]);
        assert_eq!(trace[1].strobes["x_re"], false);
        assert_eq!(trace[2].strobes["x_re"], true);
        assert_eq!(trace[3].strobes["x_re"], false);
    }

    #[test]
    fn read_only_ignores_writes() {
        let mut r = reg("ro", 8, SignalType::Plain, false, "lb");
        r.access = Access::R;
        let map = map_of(alloc::vec![(r, 0, 0)]);
        let trace = simulate_write_sequence(&map, &[BusTransaction::write(0, 0, 9)]);
        assert_eq!(trace[1].values["ro"], 0);
    }

    #[test]
    fn cross_domain_extra_latency() {
        let map = map_of(alloc::vec![(
            reg("gain", 16, SignalType::PlusWe, false, "dsp"),
            0,
            0
        )]);
        let trace = simulate_write_sequence(&map, &[BusTransaction::write(0, 0, 42)]);
        assert_eq!(trace[1].values["gain"], 0);
        assert_eq!(trace[1].strobes["gain_we"], false);
        assert_eq!(trace[2].values["gain"], 42);
        assert_eq!(trace[2].strobes["gain_we"], true);
        assert_eq!(trace[3].strobes["gain_we"], false);
    }

    #[test]
    fn verify_clean_map() {
        let map = map_of(alloc::vec![
            (reg("prng_iva", 32, SignalType::PlusWe, true, "lb"), 0, 0),
            (reg("prng_run", 1, SignalType::Plain, false, "lb"), 1, 0),
        ]);
        assert!(verify_map(&map).is_ok());
    }

    #[test]
    fn verify_detects_overlap() {
        let map = map_of(alloc::vec![
            (reg("x", 8, SignalType::Plain, false, "lb"), 0, 1),
            (reg("y", 8, SignalType::Plain, false, "lb"), 1, 0),
        ]);
        let report = verify_map(&map);
        assert!(!report.is_ok());
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::Overlap { a, b, addr: 1 } if a == "x" && b == "y"
        )));
    }

    #[test]
    fn verify_empty_map_ok() {
        assert!(verify_map(&map_of(Vec::new())).is_ok());
    }

    #[test]
    fn hit_table_matches_decode() {
        let map = map_of(alloc::vec![
            (reg("a", 8, SignalType::Plain, false, "lb"), 4, 2),
            (reg("b", 8, SignalType::Plain, false, "lb"), 0, 0),
            (reg("c", 8, SignalType::Plain, false, "lb"), 1, 0),
        ]);
        let table = parse_hit_header(&emit_addr_map_header(&map)).unwrap();
        assert_eq!(table.lb_hi, 14);
        for a in 0..64u64 {
            let hits = table.hits(a);
            match decode(&map, a) {
                Some((name, _)) => assert_eq!(hits, alloc::vec![name], "addr {a}"),
                None => assert!(hits.is_empty(), "addr {a}"),
            }
        }
    }

    #[test]
    fn hit_parse_rejects_garbage() {
        assert!(parse_hit_header("`define LB_HI x\n").is_err());
        assert!(parse_hit_header("`define HIT_a (lb_addr==3)\n").is_err());
        assert!(parse_hit_header("// nothing\n").is_err());
    }
}
