//! End-to-end run: parse, resolve, collect, allocate, verify, emit.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use regmap_core::emit::emit_all;
use regmap_core::oracle::{parse_hit_header, verify_map};
use regmap_core::{allocate, build_instance_tree, collect_registers, BusConfig, EmittedArtifacts};

use crate::jsonmap::address_map_from_json;
use crate::resolve::resolve_modules;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub top: PathBuf,
    pub search_dirs: Vec<PathBuf>,
    /// When absent, nothing is written (useful with `print`).
    pub out_dir: Option<PathBuf>,
    pub lb_hi: u32,
    pub base_offset: u64,
    pub gen_decoder: bool,
    pub verify: bool,
    pub print: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            top: PathBuf::new(),
            search_dirs: Vec::new(),
            out_dir: None,
            lb_hi: 14,
            base_offset: 0,
            gen_decoder: true,
            verify: true,
            print: false,
        }
    }
}

/// Exit-code contract: 0 success, 1 input error, 2 usage error.
#[derive(Debug)]
pub enum RunError {
    /// Bad arguments (exit 2).
    Usage(String),
    /// Bad input design or failed verification (exit 1).
    Input(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => 2,
            RunError::Input(_) => 1,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Usage(msg) => write!(f, "usage error: {msg}"),
            RunError::Input(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl From<regmap_core::Error> for RunError {
    fn from(e: regmap_core::Error) -> Self {
        RunError::Input(e.to_string())
    }
}

/// Output file names for a given top module name.
pub fn artifact_names(top: &str) -> [String; 4] {
    [
        format!("{top}_auto.vh"),
        format!("addr_map_{top}.vh"),
        format!("regmap_{top}.json"),
        format!("regmap_{top}.md"),
    ]
}

fn top_module_name(top: &Path) -> Result<String, RunError> {
    top.file_stem()
        .and_then(|s| s.to_str())
        .map(String::from)
        .ok_or_else(|| RunError::Usage(format!("cannot derive module name from {}", top.display())))
}

/// Generate artifacts in memory, verifying when configured. Never touches
/// the file system beyond reading sources.
pub fn generate(config: &RunConfig) -> Result<(String, EmittedArtifacts, Vec<String>), RunError> {
    if !config.top.is_file() {
        return Err(RunError::Usage(format!(
            "top file {} does not exist",
            config.top.display()
        )));
    }
    let bus = BusConfig::new(config.lb_hi, config.base_offset)
        .map_err(|e| RunError::Usage(e.to_string()))?;
    let top_name = top_module_name(&config.top)?;
    let top_file = config
        .top
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or("?")
        .to_string();

    let resolved = resolve_modules(&config.top, &config.search_dirs)?;
    let mut warnings = resolved.warnings;
    let tree = build_instance_tree(&resolved.graph, &top_name)?;
    for node in tree.walk() {
        if !node.prefix.is_empty() && !node.has_automatic_macro {
            warnings.push(format!(
                "instance '{}': macro `AUTOMATIC_{}` is generated but the instantiation does not use `AUTOMATIC_{}`",
                node.path.join("/"),
                node.prefix,
                node.instance_name
            ));
        }
    }
    let regs = collect_registers(&tree, &resolved.graph)?;
    let map = allocate(&regs, bus)?;
    let artifacts = emit_all(
        &tree,
        &resolved.graph,
        &map,
        &top_name,
        &top_file,
        config.gen_decoder,
    )?;

    if config.verify {
        let report = verify_map(&map);
        if !report.is_ok() {
            let lines: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            return Err(RunError::Input(format!(
                "address map verification failed:\n  {}",
                lines.join("\n  ")
            )));
        }
        // HIT/JSON agreement: the two emitted texts must name identical
        // (register, base address) pairs.
        let table = parse_hit_header(&artifacts.addr_header)?;
        let json_map = address_map_from_json(&artifacts.json_map, bus)?;
        let from_hits: Vec<(String, u64)> = {
            let mut v: Vec<(String, u64)> = table
                .predicates
                .iter()
                .map(|p| (p.name.clone(), p.base))
                .collect();
            v.sort();
            v
        };
        let from_json: Vec<(String, u64)> = json_map
            .entries
            .iter()
            .map(|e| (e.register.full_name.clone(), e.base_addr))
            .collect();
        if from_hits != from_json {
            return Err(RunError::Input(
                "HIT defines and JSON map disagree on (register, base address) pairs".into(),
            ));
        }
    }

    Ok((top_name, artifacts, warnings))
}

/// Write the four artifacts atomically: everything goes to temp files
/// first, renames happen only after all writes succeeded, so a failing run
/// leaves the output directory unchanged.
fn write_artifacts(out_dir: &Path, top: &str, artifacts: &EmittedArtifacts) -> Result<(), RunError> {
    fs::create_dir_all(out_dir)
        .map_err(|e| RunError::Input(format!("cannot create {}: {e}", out_dir.display())))?;
    let names = artifact_names(top);
    let texts = [
        &artifacts.auto_header,
        &artifacts.addr_header,
        &artifacts.json_map,
        &artifacts.docs,
    ];
    let mut temps = Vec::new();
    for (name, text) in names.iter().zip(texts) {
        let tmp = out_dir.join(format!(".{name}.tmp"));
        if let Err(e) = fs::write(&tmp, text) {
            for t in &temps {
                let _ = fs::remove_file(t);
            }
            return Err(RunError::Input(format!(
                "cannot write {}: {e}",
                tmp.display()
            )));
        }
        temps.push(tmp);
    }
    for (name, tmp) in names.iter().zip(&temps) {
        if let Err(e) = fs::rename(tmp, out_dir.join(name)) {
            for t in &temps {
                let _ = fs::remove_file(t);
            }
            return Err(RunError::Input(format!("cannot rename {}: {e}", tmp.display())));
        }
    }
    Ok(())
}

/// Full run. Warnings go to standard error; with `print` the register table
/// goes to standard output.
pub fn run(config: &RunConfig) -> Result<(), RunError> {
    let (top_name, artifacts, warnings) = generate(config)?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    if config.print {
        print!("{}", artifacts.docs);
    }
    if let Some(out_dir) = &config.out_dir {
        write_artifacts(out_dir, &top_name, &artifacts)?;
    }
    Ok(())
}
