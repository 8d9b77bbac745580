//! Byte-deterministic emitters for the four output texts: the auto header
//! (instance-connection macros plus the decoder macro), the address-map
//! header, the JSON map, and the markdown documentation.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ast::Module;
use crate::error::{Error, Result};
use crate::hier::{InstanceNode, ModuleGraph};
use crate::regmodel::{Access, AddressMap, SignalType};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedArtifacts {
    /// `<top>_auto.vh`
    pub auto_header: String,
    /// `addr_map_<top>.vh`
    pub addr_header: String,
    /// `regmap_<top>.json`
    pub json_map: String,
    /// `regmap_<top>.md`
    pub docs: String,
}

/// Named port connections one instance macro must carry, in port
/// declaration order with strobe connections ahead of their value.
fn instance_connections(node: &InstanceNode, module: &Module) -> Vec<String> {
    let mut out = Vec::new();
    let p = &node.prefix;
    for port in &module.ports {
        if !port.attrs.has("external") {
            continue;
        }
        let n = &port.name;
        let has_trailing_we = module.port(&format!("{n}_we")).is_some();
        let plus_we = port.attrs.get("signal_type") == Some("plus-we");
        let plus_re = port.attrs.get("signal_type") == Some("plus-re");
        if has_trailing_we || plus_we {
            out.push(format!(".{n}_we({p}_{n}_we)"));
        }
        if plus_re {
            out.push(format!(".{n}_re({p}_{n}_re)"));
        }
        out.push(format!(".{n}({p}_{n})"));
    }
    out
}

fn opt_str<T: core::fmt::Display>(v: &Option<T>) -> String {
    match v {
        Some(v) => format!("{v}"),
        None => String::from("None"),
    }
}

/// One `` `AUTOMATIC_<prefix> `` macro per instance node below the top,
/// each preceded by a metadata comment line.
pub fn emit_instance_macros(tree: &InstanceNode, graph: &ModuleGraph) -> Result<String> {
    let mut out = String::new();
    for node in tree.walk() {
        if node.prefix.is_empty() {
            continue; // the top module hosts the decoder, not a macro
        }
        let gm = graph
            .get(&node.module_name)
            .ok_or_else(|| Error::Emit(format!("module '{}' not in graph", node.module_name)))?;
        out.push_str(&format!(
            "// module={} instance={} gvar={} gcnt={}\n",
            node.module_name,
            node.instance_name,
            opt_str(&node.gvar),
            opt_str(&node.gcnt),
        ));
        let conns = instance_connections(node, &gm.module);
        if conns.is_empty() {
            out.push_str(&format!("`define AUTOMATIC_{}\n", node.prefix));
            continue;
        }
        out.push_str(&format!("`define AUTOMATIC_{} ", node.prefix));
        let last = conns.len() - 1;
        for (i, c) in conns.iter().enumerate() {
            if i > 0 {
                out.push_str("    ");
            }
            out.push_str(c);
            out.push(',');
            if i < last {
                out.push_str("\\\n");
            } else {
                out.push('\n');
            }
        }
    }
    Ok(out)
}

/// Address-map header: `` `define LB_HI `` first, then one commented
/// `` `define HIT_<name> `` predicate per entry in name order.
pub fn emit_addr_map_header(map: &AddressMap) -> String {
    let mut out = format!("`define LB_HI {}\n", map.bus.lb_hi);
    for e in &map.entries {
        let name = &e.register.full_name;
        out.push_str(&format!(
            "// {} bw: {}, base_addr: {}\n",
            name, e.addr_width, e.base_addr
        ));
        if e.addr_width == 0 {
            out.push_str(&format!(
                "`define HIT_{} (lb_addr[`LB_HI:0]=={})\n",
                name, e.base_addr
            ));
        } else {
            let mask = e.span() - 1;
            out.push_str(&format!(
                "`define HIT_{} ((lb_addr[`LB_HI:0]&~{})=={})\n",
                name, mask, e.base_addr
            ));
        }
    }
    out
}

/// The `` `AUTOMATIC_decode `` macro: storage declarations, one synchronous
/// block for the lb domain, and one re-registering block per other clock
/// domain.
pub fn emit_decoder(map: &AddressMap) -> Result<String> {
    let mut lines: Vec<String> = Vec::new();
    let mut lb_lines: Vec<String> = Vec::new();
    let mut domains: BTreeSet<&str> = BTreeSet::new();

    for e in &map.entries {
        let r = &e.register;
        let name = &r.full_name;
        let w = r.data_width;
        let cd = r.clock_domain.as_str();
        let crossed = cd != "lb";
        if crossed && r.signal_type == SignalType::PlusRe {
            return Err(Error::Emit(format!(
                "register '{name}': read strobes are only supported in the lb clock domain (cd=\"{cd}\")"
            )));
        }
        if r.access == Access::R {
            // read-only: an external wire driven by the instance, no decode
            lines.push(format!("wire [{}:0] {};", w - 1, name));
            continue;
        }
        if crossed {
            if e.addr_width > 0 {
                return Err(Error::Emit(format!(
                    "register '{name}': array registers (aw > 0) must stay in the lb clock domain"
                )));
            }
            domains.insert(cd);
        }

        // storage
        if e.addr_width > 0 {
            lines.push(format!("reg [{}:0] {} [0:{}];", w - 1, name, e.span() - 1));
        } else if crossed {
            lines.push(format!("reg [{}:0] {}_pre=0;", w - 1, name));
            lines.push(format!("reg [{}:0] {}=0;", w - 1, name));
        } else {
            lines.push(format!("reg [{}:0] {}=0;", w - 1, name));
        }
        if r.has_we_strobe() {
            if crossed {
                lines.push(format!("reg {name}_we_pre=0;"));
                lines.push(format!("reg {name}_we=0;"));
            } else {
                lines.push(format!("reg {name}_we=0;"));
            }
        }
        if r.signal_type == SignalType::PlusRe {
            lines.push(format!("reg {name}_re=0;"));
        }

        // lb-domain decode stanza
        let target = if crossed {
            format!("{name}_pre")
        } else {
            name.clone()
        };
        let we_target = if crossed {
            format!("{name}_we_pre")
        } else {
            format!("{name}_we")
        };
        let data = format!("lb_data[{}:0]", w - 1);
        lb_lines.push(format!("    if (lb_write & `HIT_{name}) begin"));
        if e.addr_width > 0 {
            lb_lines.push(format!(
                "        {}[lb_addr[{}:0]] <= {};",
                target,
                e.addr_width - 1,
                data
            ));
        } else {
            lb_lines.push(format!("        {target} <= {data};"));
        }
        if r.has_we_strobe() {
            lb_lines.push(format!("        {we_target} <= 1'b1;"));
        }
        let needs_else = r.has_we_strobe() || r.signal_type == SignalType::SingleCycle;
        if needs_else {
            lb_lines.push(String::from("    end else begin"));
            if r.signal_type == SignalType::SingleCycle {
                lb_lines.push(format!("        {target} <= {}'d0;", w));
            }
            if r.has_we_strobe() {
                lb_lines.push(format!("        {we_target} <= 1'b0;"));
            }
        }
        lb_lines.push(String::from("    end"));
        if r.signal_type == SignalType::PlusRe {
            lb_lines.push(format!("    if (lb_read & `HIT_{name}) begin"));
            lb_lines.push(format!("        {name}_re <= 1'b1;"));
            lb_lines.push(String::from("    end else begin"));
            lb_lines.push(format!("        {name}_re <= 1'b0;"));
            lb_lines.push(String::from("    end"));
        }
    }

    if !lb_lines.is_empty() {
        lines.push(String::from("always @(posedge lb_clk) begin"));
        lines.append(&mut lb_lines);
        lines.push(String::from("end"));
    }

    // cross-domain re-register blocks, one per foreign domain
    for cd in domains {
        lines.push(format!("always @(posedge {cd}_clk) begin"));
        for e in &map.entries {
            let r = &e.register;
            if r.access == Access::R || r.clock_domain != cd {
                continue;
            }
            let name = &r.full_name;
            lines.push(format!("    {name} <= {name}_pre;"));
            if r.has_we_strobe() {
                lines.push(format!("    {name}_we <= {name}_we_pre;"));
            }
        }
        lines.push(String::from("end"));
    }

    if lines.is_empty() {
        return Ok(String::from("`define AUTOMATIC_decode\n"));
    }
    let mut out = String::from("`define AUTOMATIC_decode \\\n");
    let last = lines.len() - 1;
    for (i, l) in lines.iter().enumerate() {
        out.push_str(l);
        if i < last {
            out.push_str("\\\n");
        } else {
            out.push('\n');
        }
    }
    Ok(out)
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// JSON map: one object keyed by register name, entries in name order,
/// value keys in alphabetical order, 4-space indentation.
pub fn emit_json(map: &AddressMap) -> String {
    if map.entries.is_empty() {
        return String::from("{}\n");
    }
    let mut out = String::from("{\n");
    let last = map.entries.len() - 1;
    for (i, e) in map.entries.iter().enumerate() {
        let r = &e.register;
        out.push_str(&format!("    \"{}\": {{\n", json_escape(&r.full_name)));
        out.push_str(&format!("        \"access\": \"{}\",\n", r.access));
        out.push_str(&format!("        \"addr_width\": {},\n", e.addr_width));
        out.push_str(&format!("        \"base_addr\": {},\n", e.base_addr));
        out.push_str(&format!("        \"data_width\": {},\n", r.data_width));
        out.push_str(&format!(
            "        \"description\": \"{}\",\n",
            json_escape(&r.description)
        ));
        out.push_str(&format!("        \"sign\": \"{}\"\n", r.sign));
        out.push_str(if i < last { "    },\n" } else { "    }\n" });
    }
    out.push_str("}\n");
    out
}

fn md_escape(s: &str) -> String {
    s.replace('|', "\\|")
}

/// Markdown documentation: bus summary plus one table row per register.
pub fn emit_docs(map: &AddressMap, top: &str) -> String {
    let hex_digits = ((map.bus.lb_hi + 1 + 3) / 4) as usize;
    let mut out = format!("# Register map: {top}\n\n");
    out.push_str(&format!(
        "- Address space: {} addresses (LB_HI = {})\n",
        map.bus.space_size(),
        map.bus.lb_hi
    ));
    out.push_str(&format!("- Base offset: {}\n", map.bus.base_offset));
    out.push_str(&format!("- Registers: {}\n\n", map.entries.len()));
    out.push_str("| Register | Base | Width | Access | Sign | Clock domain | Description |\n");
    out.push_str("|----------|------|-------|--------|------|--------------|-------------|\n");
    for e in &map.entries {
        let r = &e.register;
        out.push_str(&format!(
            "| {} | 0x{:0width$x} | {} | {} | {} | {} | {} |\n",
            md_escape(&r.full_name),
            e.base_addr,
            r.data_width,
            r.access,
            r.sign,
            md_escape(&r.clock_domain),
            md_escape(&r.description),
            width = hex_digits
        ));
    }
    out
}

/// Assemble all four artifacts for a run.
pub fn emit_all(
    tree: &InstanceNode,
    graph: &ModuleGraph,
    map: &AddressMap,
    top: &str,
    top_file: &str,
    gen_decoder: bool,
) -> Result<EmittedArtifacts> {
    let mut auto_header = format!("// {top}_auto.vh\n// regmap-gen {top_file}\n");
    let macros = emit_instance_macros(tree, graph)?;
    auto_header.push_str(&macros);
    if gen_decoder {
        auto_header.push('\n');
        auto_header.push_str(&emit_decoder(map)?);
    }
    Ok(EmittedArtifacts {
        auto_header,
        addr_header: emit_addr_map_header(map),
        json_map: emit_json(map),
        docs: emit_docs(map, top),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hier::build_instance_tree;
    use crate::parse::parse_source;
    use crate::regmodel::{allocate, collect_registers, BusConfig};

    const PRNG: &str = r#"
module prng(
    input clk,
    output [31:0] rnda,
    output [31:0] rndb,
    (* external *)
    input [0:0] run,
    (* external, signal_type="plus-we" *)
    input [31:0] iva,
    input iva_we, // special trailing_we
);
endmodule
"#;

    const STATION: &str = r#"
module station(input clk);
`AUTOMATIC_decode
(* lb_automatic *)
prng prng (.clk(clk) `AUTOMATIC_prng);
endmodule
"#;

    fn station_pipeline() -> (InstanceNode, ModuleGraph, AddressMap) {
        let mut g = ModuleGraph::new();
        for (path, src) in [("station.v", STATION), ("prng.v", PRNG)] {
            for m in parse_source(src, path).unwrap().modules {
                g.insert(path, m).unwrap();
            }
        }
        let tree = build_instance_tree(&g, "station").unwrap();
        let regs = collect_registers(&tree, &g).unwrap();
        let map = allocate(&regs, BusConfig::default()).unwrap();
        (tree, g, map)
    }

    #[test]
    fn prng_instance_macro() {
        let (tree, g, _) = station_pipeline();
        let text = emit_instance_macros(&tree, &g).unwrap();
        assert_eq!(
            text,
            "// module=prng instance=prng gvar=None gcnt=None\n\
             `define AUTOMATIC_prng .run(prng_run),\\\n\
             \x20   .iva_we(prng_iva_we),\\\n\
             \x20   .iva(prng_iva),\n"
        );
    }

    #[test]
    fn addr_header_format() {
        let (_, _, map) = station_pipeline();
        let text = emit_addr_map_header(&map);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "`define LB_HI 14");
        assert_eq!(lines[1], "// prng_iva bw: 0, base_addr: 0");
        assert_eq!(lines[2], "`define HIT_prng_iva (lb_addr[`LB_HI:0]==0)");
        assert_eq!(lines[3], "// prng_run bw: 0, base_addr: 1");
        assert_eq!(lines[4], "`define HIT_prng_run (lb_addr[`LB_HI:0]==1)");
    }

    #[test]
    fn masked_hit_for_array_register() {
        let src = "module m(\n(* external, aw=2 *) input [7:0] buf_port\n);\nendmodule";
        let mut g = ModuleGraph::new();
        for m in parse_source(src, "m.v").unwrap().modules {
            g.insert("m.v", m).unwrap();
        }
        let tree = build_instance_tree(&g, "m").unwrap();
        let regs = collect_registers(&tree, &g).unwrap();
        let map = allocate(&regs, BusConfig::default()).unwrap();
        let text = emit_addr_map_header(&map);
        assert!(
            text.contains("`define HIT_buf_port ((lb_addr[`LB_HI:0]&~3)==0)"),
            "{text}"
        );
    }

    #[test]
    fn decoder_contains_strobe_template() {
        let (_, _, map) = station_pipeline();
        let text = emit_decoder(&map).unwrap();
        assert!(text.contains("reg [31:0] prng_iva=0;"), "{text}");
        assert!(text.contains("reg prng_iva_we=0;"), "{text}");
        assert!(text.contains("if (lb_write & `HIT_prng_iva) begin"), "{text}");
        assert!(text.contains("prng_iva <= lb_data[31:0];"), "{text}");
        assert!(text.contains("prng_iva_we <= 1'b1;"), "{text}");
        assert!(text.contains("prng_iva_we <= 1'b0;"), "{text}");
        assert!(text.contains("prng_run <= lb_data[0:0];"), "{text}");
    }

    #[test]
    fn decoder_empty_map() {
        let map = allocate(&[], BusConfig::default()).unwrap();
        assert_eq!(emit_decoder(&map).unwrap(), "`define AUTOMATIC_decode\n");
    }

    #[test]
    fn decoder_cross_domain_block() {
        let src = "module m(\n(* external, cd=\"dsp\" *) input [15:0] gain\n);\nendmodule";
        let mut g = ModuleGraph::new();
        for m in parse_source(src, "m.v").unwrap().modules {
            g.insert("m.v", m).unwrap();
        }
        let tree = build_instance_tree(&g, "m").unwrap();
        let regs = collect_registers(&tree, &g).unwrap();
        let map = allocate(&regs, BusConfig::default()).unwrap();
        let text = emit_decoder(&map).unwrap();
        assert!(text.contains("always @(posedge dsp_clk) begin"), "{text}");
        assert!(text.contains("gain <= gain_pre;"), "{text}");
        assert!(text.contains("gain_pre <= lb_data[15:0];"), "{text}");
    }

    #[test]
    fn cross_domain_read_strobe_is_error() {
        let src =
            "module m(\n(* external, cd=\"dsp\", signal_type=\"plus-re\" *) input [7:0] x\n);\nendmodule";
        let mut g = ModuleGraph::new();
        for m in parse_source(src, "m.v").unwrap().modules {
            g.insert("m.v", m).unwrap();
        }
        let tree = build_instance_tree(&g, "m").unwrap();
        let regs = collect_registers(&tree, &g).unwrap();
        let map = allocate(&regs, BusConfig::default()).unwrap();
        assert!(emit_decoder(&map).is_err());
    }

    #[test]
    fn macro_bodies_have_no_unescaped_newline() {
        let (tree, g, map) = station_pipeline();
        let arts = emit_all(&tree, &g, &map, "station", "station.v", true).unwrap();
        let mut in_define = false;
        for line in arts.auto_header.lines() {
            if line.starts_with("`define") {
                in_define = line.ends_with('\\');
            } else if in_define {
                in_define = line.ends_with('\\');
            }
        }
        assert!(!in_define, "auto header ends inside a continued define");
    }

    #[test]
    fn name_coherence_between_macros_and_decoder() {
        let (tree, g, map) = station_pipeline();
        let macros = emit_instance_macros(&tree, &g).unwrap();
        let decoder = emit_decoder(&map).unwrap();
        for line in macros.lines() {
            let Some(start) = line.find('(') else { continue };
            let Some(end) = line.rfind(')') else { continue };
            if start + 1 >= end {
                continue;
            }
            let signal = &line[start + 1..end];
            assert!(
                decoder.contains(&format!(" {signal}=0;"))
                    || decoder.contains(&format!(" {signal};"))
                    || decoder.contains(&format!(" {signal} [")),
                "signal {signal} connected but not declared in decoder"
            );
        }
    }

    #[test]
    fn json_exact_shape() {
        let (_, _, map) = station_pipeline();
        let text = emit_json(&map);
        assert_eq!(
            text,
            r#"{
    "prng_iva": {
        "access": "rw",
        "addr_width": 0,
        "base_addr": 0,
        "data_width": 32,
        "description": "",
        "sign": "unsigned"
    },
    "prng_run": {
        "access": "rw",
        "addr_width": 0,
        "base_addr": 1,
        "data_width": 1,
        "description": "",
        "sign": "unsigned"
    }
}
"#
        );
    }

    #[test]
    fn json_empty_map() {
        let map = allocate(&[], BusConfig::default()).unwrap();
        assert_eq!(emit_json(&map), "{}\n");
    }

    #[test]
    fn docs_table_and_escaping() {
        let src = "module m(\n(* external, description=\"a|b\" *) input [7:0] x\n);\nendmodule";
        let mut g = ModuleGraph::new();
        for m in parse_source(src, "m.v").unwrap().modules {
            g.insert("m.v", m).unwrap();
        }
        let tree = build_instance_tree(&g, "m").unwrap();
        let regs = collect_registers(&tree, &g).unwrap();
        let map = allocate(&regs, BusConfig::default()).unwrap();
        let text = emit_docs(&map, "m");
        assert!(text.contains("a\\|b"), "{text}");
        assert!(text.contains("| x | 0x0000 | 8 | rw | unsigned | lb |"), "{text}");
    }

    #[test]
    fn docs_empty_map() {
        let map = allocate(&[], BusConfig::default()).unwrap();
        let text = emit_docs(&map, "top");
        assert!(text.contains("Registers: 0"));
        assert!(text.ends_with("|-------------|\n"));
    }

    #[test]
    fn artifacts_end_with_single_newline() {
        let (tree, g, map) = station_pipeline();
        let arts = emit_all(&tree, &g, &map, "station", "station.v", true).unwrap();
        for text in [&arts.auto_header, &arts.addr_header, &arts.json_map, &arts.docs] {
            assert!(text.ends_with('\n'));
            assert!(!text.ends_with("\n\n"), "double trailing newline: {text:?}");
        }
    }

    #[test]
    fn reemission_is_byte_identical() {
        let (tree, g, map) = station_pipeline();
        let a = emit_all(&tree, &g, &map, "station", "station.v", true).unwrap();
        let b = emit_all(&tree, &g, &map, "station", "station.v", true).unwrap();
        assert_eq!(a, b);
    }
}
