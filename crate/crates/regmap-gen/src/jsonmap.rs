//! Re-ingest an emitted JSON register map, so downstream software can run
//! the decode oracle against the same file it ships.

use std::collections::BTreeMap;

use serde::Deserialize;

use regmap_core::regmodel::{Access, AddressMapEntry, Sign, SignalType};
use regmap_core::{AddressMap, BusConfig, Error, RegisterSpec};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonEntry {
    access: String,
    addr_width: u32,
    base_addr: u64,
    data_width: u32,
    description: String,
    sign: String,
}

/// Build an AddressMap from emitted JSON text. The JSON carries no bus
/// configuration, so the caller supplies one (the defaults match the
/// emitter's defaults). Signal types and clock domains are not part of the
/// JSON schema; registers come back as plain lb-domain registers.
pub fn address_map_from_json(text: &str, bus: BusConfig) -> Result<AddressMap, Error> {
    let raw: BTreeMap<String, JsonEntry> = serde_json::from_str(text)
        .map_err(|e| Error::OracleInput(format!("malformed JSON map: {e}")))?;
    let mut entries = Vec::with_capacity(raw.len());
    for (name, e) in raw {
        let access = match e.access.as_str() {
            "rw" => Access::Rw,
            "r" => Access::R,
            other => {
                return Err(Error::OracleInput(format!(
                    "register '{name}': unknown access \"{other}\""
                )));
            }
        };
        let sign = match e.sign.as_str() {
            "signed" => Sign::Signed,
            "unsigned" => Sign::Unsigned,
            other => {
                return Err(Error::OracleInput(format!(
                    "register '{name}': unknown sign \"{other}\""
                )));
            }
        };
        if e.data_width == 0 || e.data_width > bus.data_width {
            return Err(Error::OracleInput(format!(
                "register '{name}': data_width {} outside 1..={}",
                e.data_width, bus.data_width
            )));
        }
        entries.push(AddressMapEntry {
            register: RegisterSpec {
                full_name: name.clone(),
                port_name: name,
                instance_path: Vec::new(),
                data_width: e.data_width,
                sign,
                access,
                signal_type: SignalType::Plain,
                clock_domain: "lb".into(),
                description: e.description,
                has_trailing_we: false,
                addr_width: e.addr_width,
            },
            base_addr: e.base_addr,
            addr_width: e.addr_width,
        });
    }
    entries.sort_by(|a, b| a.register.full_name.cmp(&b.register.full_name));
    Ok(AddressMap { bus, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use regmap_core::oracle::{decode, verify_map};

    const JSON: &str = r#"{
    "prng_iva": {
        "access": "rw",
        "addr_width": 0,
        "base_addr": 7203,
        "data_width": 32,
        "description": "",
        "sign": "unsigned"
    },
    "prng_run": {
        "access": "rw",
        "addr_width": 0,
        "base_addr": 7205,
        "data_width": 1,
        "description": "",
        "sign": "unsigned"
    }
}
"#;

    #[test]
    fn round_trip_from_json() {
        let map = address_map_from_json(JSON, BusConfig::default()).unwrap();
        assert_eq!(map.entries.len(), 2);
        assert_eq!(decode(&map, 7203), Some(("prng_iva", 0)));
        assert_eq!(decode(&map, 7205), Some(("prng_run", 0)));
        assert_eq!(decode(&map, 7204), None);
        assert!(verify_map(&map).is_ok());
    }

    #[test]
    fn extra_key_rejected() {
        let bad = r#"{"x": {"access": "rw", "addr_width": 0, "base_addr": 0,
            "data_width": 8, "description": "", "sign": "unsigned", "color": "red"}}"#;
        assert!(address_map_from_json(bad, BusConfig::default()).is_err());
    }

    #[test]
    fn missing_key_rejected() {
        let bad = r#"{"x": {"access": "rw", "addr_width": 0, "base_addr": 0,
            "data_width": 8, "sign": "unsigned"}}"#;
        assert!(address_map_from_json(bad, BusConfig::default()).is_err());
    }
}
