//! Locate module definition files on disk and assemble the module graph.
//!
//! Resolution contract: a module named `m` lives in a file named `m.v`,
//! searched first in the directory of the referencing file, then in the
//! configured search directories in order. A file may define extra private
//! modules; those are only visible to instantiations in the same design.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use regmap_core::parse::parse_source;
use regmap_core::{Error, ModuleGraph};

#[derive(Debug, Default, Clone)]
pub struct ResolveStats {
    /// Distinct files read and parsed.
    pub files_parsed: usize,
}

#[derive(Debug)]
pub struct Resolved {
    pub graph: ModuleGraph,
    pub warnings: Vec<String>,
    pub stats: ResolveStats,
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::Hier(format!("cannot read {}: {e}", path.display())))
}

/// Parse the top file and transitively resolve every attributed
/// instantiation's module to a `<name>.v` file.
pub fn resolve_modules(top_path: &Path, search_dirs: &[PathBuf]) -> Result<Resolved, Error> {
    let mut graph = ModuleGraph::new();
    let mut warnings = Vec::new();
    let mut stats = ResolveStats::default();
    let mut parsed_files: BTreeSet<PathBuf> = BTreeSet::new();

    // (module name still to resolve, file that referenced it, instance name)
    let mut worklist: Vec<(String, PathBuf, String)> = Vec::new();

    let ingest = |path: &Path,
                      graph: &mut ModuleGraph,
                      warnings: &mut Vec<String>,
                      stats: &mut ResolveStats,
                      parsed_files: &mut BTreeSet<PathBuf>,
                      worklist: &mut Vec<(String, PathBuf, String)>|
     -> Result<(), Error> {
        let canon = path.canonicalize().unwrap_or_else(|_| path.to_path_buf());
        if !parsed_files.insert(canon) {
            return Ok(());
        }
        let text = read(path)?;
        let unit = parse_source(&text, &path.display().to_string())?;
        stats.files_parsed += 1;
        warnings.extend(unit.warnings);
        for m in unit.modules {
            for inst in &m.instances {
                worklist.push((
                    inst.module_name.clone(),
                    path.to_path_buf(),
                    inst.instance_name.clone(),
                ));
            }
            graph.insert(&path.display().to_string(), m)?;
        }
        Ok(())
    };

    ingest(
        top_path,
        &mut graph,
        &mut warnings,
        &mut stats,
        &mut parsed_files,
        &mut worklist,
    )?;

    while let Some((module_name, referenced_from, instance_name)) = worklist.pop() {
        if graph.contains(&module_name) {
            continue;
        }
        // candidate directories: beside the referencing file, then -d dirs
        let mut candidates: Vec<PathBuf> = Vec::new();
        if let Some(dir) = referenced_from.parent() {
            candidates.push(dir.join(format!("{module_name}.v")));
        }
        for d in search_dirs {
            candidates.push(d.join(format!("{module_name}.v")));
        }
        let hits: Vec<&PathBuf> = candidates.iter().filter(|p| p.is_file()).collect();
        if hits.is_empty() {
            return Err(Error::Hier(format!(
                "cannot find module '{module_name}' (file {module_name}.v) \
                 instantiated as '{instance_name}' in {}",
                referenced_from.display()
            )));
        }
        // multiple hits are tolerated only when the files agree
        let first_text = read(hits[0])?;
        for other in &hits[1..] {
            if read(other)? != first_text {
                return Err(Error::Hier(format!(
                    "module '{module_name}' found in both {} and {} with differing content",
                    hits[0].display(),
                    other.display()
                )));
            }
        }
        ingest(
            hits[0],
            &mut graph,
            &mut warnings,
            &mut stats,
            &mut parsed_files,
            &mut worklist,
        )?;
        if !graph.contains(&module_name) {
            return Err(Error::Hier(format!(
                "{} does not define module '{module_name}'",
                hits[0].display()
            )));
        }
    }

    Ok(Resolved {
        graph,
        warnings,
        stats,
    })
}
