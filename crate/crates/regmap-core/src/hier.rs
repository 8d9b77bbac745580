//! Module graph and instance-tree elaboration.
//!
//! The graph maps module names to parsed definitions; file lookup lives in
//! the std companion crate. The tree mirrors attributed instantiations from
//! the top module, with replication (gvar/gcnt) expanded and underscore-
//! joined hierarchical prefixes assigned.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ast::Module;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct GraphModule {
    pub path: String,
    pub module: Module,
}

/// Modules of the design, keyed by name. Attributed instantiations are the
/// edges.
#[derive(Debug, Clone, Default)]
pub struct ModuleGraph {
    modules: BTreeMap<String, GraphModule>,
}

impl ModuleGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, path: &str, module: Module) -> Result<()> {
        if let Some(prev) = self.modules.get(&module.name) {
            return Err(Error::Hier(format!(
                "module '{}' defined in both {} and {}",
                module.name, prev.path, path
            )));
        }
        self.modules.insert(
            module.name.clone(),
            GraphModule {
                path: path.to_owned(),
                module,
            },
        );
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&GraphModule> {
        self.modules.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.modules.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &GraphModule)> {
        self.modules.iter()
    }

    /// Every attributed instantiation must resolve to a module in the graph.
    pub fn check_resolved(&self) -> Result<()> {
        for (name, gm) in &self.modules {
            for inst in &gm.module.instances {
                if !self.modules.contains_key(&inst.module_name) {
                    return Err(Error::Hier(format!(
                        "module '{}' instantiated as '{}' in {} ({}:{}:{}) is not in the design",
                        inst.module_name, inst.instance_name, name, gm.path, inst.line, inst.col
                    )));
                }
            }
        }
        Ok(())
    }

    /// Verilog forbids recursive instantiation; a cycle in the attributed
    /// instantiation relation is an input error.
    pub fn check_acyclic(&self, top: &str) -> Result<()> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            InProgress,
            Done,
        }
        fn visit(
            graph: &ModuleGraph,
            name: &str,
            marks: &mut BTreeMap<String, Mark>,
            stack: &mut Vec<String>,
        ) -> Result<()> {
            match marks.get(name) {
                Some(Mark::Done) => return Ok(()),
                Some(Mark::InProgress) => {
                    let mut cycle = stack.clone();
                    cycle.push(name.to_owned());
                    return Err(Error::Hier(format!(
                        "recursive instantiation: {}",
                        cycle.join(" -> ")
                    )));
                }
                None => {}
            }
            marks.insert(name.to_owned(), Mark::InProgress);
            stack.push(name.to_owned());
            if let Some(gm) = graph.get(name) {
                for inst in &gm.module.instances {
                    visit(graph, &inst.module_name, marks, stack)?;
                }
            }
            stack.pop();
            marks.insert(name.to_owned(), Mark::Done);
            Ok(())
        }
        let mut marks = BTreeMap::new();
        visit(self, top, &mut marks, &mut Vec::new())
    }
}

/// One node of the elaborated instance tree. Replicated instantiations
/// appear as one node per replica, each with its index folded into the
/// instance name and prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceNode {
    pub module_name: String,
    pub instance_name: String,
    /// Underscore-joined instance path; empty for the top node.
    pub prefix: String,
    /// Instance path as elements, for collision diagnostics.
    pub path: Vec<String>,
    pub children: Vec<InstanceNode>,
    pub gvar: Option<String>,
    pub gcnt: Option<u32>,
    pub has_automatic_macro: bool,
}

impl InstanceNode {
    /// Depth-first iteration over this node and all descendants.
    pub fn walk(&self) -> Vec<&InstanceNode> {
        let mut out = Vec::new();
        fn rec<'a>(n: &'a InstanceNode, out: &mut Vec<&'a InstanceNode>) {
            out.push(n);
            for c in &n.children {
                rec(c, out);
            }
        }
        rec(self, &mut out);
        out
    }
}

fn join_prefix(parent: &str, elem: &str) -> String {
    if parent.is_empty() {
        elem.to_owned()
    } else {
        format!("{parent}_{elem}")
    }
}

/// Elaborate the instance tree below `top`. Prefix collisions (two distinct
/// instance paths joining to one string) are a hard error.
pub fn build_instance_tree(graph: &ModuleGraph, top: &str) -> Result<InstanceNode> {
    graph.check_resolved()?;
    graph.check_acyclic(top)?;
    let top_gm = graph
        .get(top)
        .ok_or_else(|| Error::Hier(format!("top module '{top}' not found")))?;

    fn build(
        graph: &ModuleGraph,
        module_name: &str,
        instance_name: &str,
        prefix: String,
        path: Vec<String>,
        gvar: Option<String>,
        gcnt: Option<u32>,
        has_automatic_macro: bool,
        seen: &mut BTreeMap<String, Vec<String>>,
    ) -> Result<InstanceNode> {
        if !prefix.is_empty() {
            if let Some(other) = seen.get(&prefix) {
                return Err(Error::Hier(format!(
                    "instance prefix collision: paths '{}' and '{}' both join to '{}'",
                    other.join("/"),
                    path.join("/"),
                    prefix
                )));
            }
            seen.insert(prefix.clone(), path.clone());
        }
        let gm = graph.get(module_name).expect("resolved graph");
        let mut children = Vec::new();
        for inst in &gm.module.instances {
            if let Some(k) = inst.gcnt {
                for i in 0..k {
                    let elem = format!("{}_{}", inst.instance_name, i);
                    let mut child_path = path.clone();
                    child_path.push(elem.clone());
                    children.push(build(
                        graph,
                        &inst.module_name,
                        &elem,
                        join_prefix(&prefix, &elem),
                        child_path,
                        inst.gvar.clone(),
                        inst.gcnt,
                        inst.has_automatic_macro,
                        seen,
                    )?);
                }
            } else {
                let mut child_path = path.clone();
                child_path.push(inst.instance_name.clone());
                children.push(build(
                    graph,
                    &inst.module_name,
                    &inst.instance_name,
                    join_prefix(&prefix, &inst.instance_name),
                    child_path,
                    None,
                    None,
                    inst.has_automatic_macro,
                    seen,
                )?);
            }
        }
        Ok(InstanceNode {
            module_name: module_name.to_owned(),
            instance_name: instance_name.to_owned(),
            prefix,
            path,
            children,
            gvar,
            gcnt,
            has_automatic_macro,
        })
    }

    let mut seen = BTreeMap::new();
    build(
        graph,
        &top_gm.module.name,
        &top_gm.module.name,
        String::new(),
        Vec::new(),
        None,
        None,
        true,
        &mut seen,
    )
}
