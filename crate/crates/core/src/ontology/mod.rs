//! Rooted concept hierarchies.
//!
//! An [`OntologyGraph`] is a single-parent tree of concept nodes loaded from
//! a tab-separated text file, one node per line:
//!
//! ```text
//! # node_id <TAB> parent_id|- <TAB> label <TAB> synonym1;synonym2;...
//! CL	-	computational linguistics
//! ResearchTopic	CL	research topic
//! ```
//!
//! The root has depth 1 and every child sits one level below its parent.
//! Both the domain ontology and the research style ontology use this format.
#![allow(clippy::tabs_in_doc_comments)]

mod linking;
mod style;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::text::normalize_term;

pub use linking::{levenshtein, Link, LOW_CONFIDENCE_RATIO};
pub use style::StyleOntology;

use linking::NameIndex;

/// Dense index of a node inside one [`OntologyGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeIx(pub(crate) u32);

impl NodeIx {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptNode {
    pub id: String,
    pub label: String,
    pub synonyms: Vec<String>,
    pub parent: Option<NodeIx>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OntologyError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: duplicate node id `{id}`")]
    DuplicateNode { line: usize, id: String },
    #[error("node `{node}` refers to unknown parent `{parent}`")]
    DanglingParent { node: String, parent: String },
    #[error("cycle detected at node `{0}`")]
    Cycle(String),
    #[error("multiple roots: {}", .0.join(", "))]
    MultipleRoots(Vec<String>),
    #[error("ontology has no nodes")]
    Empty,
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("style ontology: {0}")]
    Style(String),
}

/// Immutable concept tree with cached depths and a name index for linking.
#[derive(Debug, Clone)]
pub struct OntologyGraph {
    nodes: Vec<ConceptNode>,
    index: HashMap<String, NodeIx>,
    root: NodeIx,
    depth: Vec<u32>,
    children: Vec<Vec<NodeIx>>,
    names: NameIndex,
}

impl OntologyGraph {
    /// Parses the ontology text format and checks the tree invariants.
    pub fn load(source: &str) -> Result<Self, OntologyError> {
        let mut raw: Vec<(String, Option<String>, String, Vec<String>)> = Vec::new();
        let mut index = HashMap::new();
        for (n, line) in source.lines().enumerate() {
            let line_no = n + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.trim_end_matches('\r').split('\t').collect();
            if !(3..=4).contains(&fields.len()) {
                return Err(OntologyError::Malformed {
                    line: line_no,
                    message: format!(
                        "expected 3 or 4 tab-separated fields, found {}",
                        fields.len()
                    ),
                });
            }
            let id = fields[0].trim().to_string();
            if id.is_empty() {
                return Err(OntologyError::Malformed {
                    line: line_no,
                    message: "empty node id".into(),
                });
            }
            let parent = match fields[1].trim() {
                "-" => None,
                "" => {
                    return Err(OntologyError::Malformed {
                        line: line_no,
                        message: "empty parent field".into(),
                    })
                }
                p => Some(p.to_string()),
            };
            let label = fields[2].trim().to_string();
            if normalize_term(&label).is_empty() {
                return Err(OntologyError::Malformed {
                    line: line_no,
                    message: format!("node `{id}` has an empty label"),
                });
            }
            let synonyms = fields
                .get(3)
                .map(|s| {
                    s.split(';')
                        .map(str::trim)
                        .filter(|s| !normalize_term(s).is_empty())
                        .map(String::from)
                        .collect()
                })
                .unwrap_or_default();
            if index.insert(id.clone(), NodeIx(raw.len() as u32)).is_some() {
                return Err(OntologyError::DuplicateNode { line: line_no, id });
            }
            raw.push((id, parent, label, synonyms));
        }
        if raw.is_empty() {
            return Err(OntologyError::Empty);
        }

        let mut nodes = Vec::with_capacity(raw.len());
        for (id, parent, label, synonyms) in raw {
            let parent = match parent {
                None => None,
                Some(p) => match index.get(&p) {
                    Some(&ix) => Some(ix),
                    None => {
                        return Err(OntologyError::DanglingParent {
                            node: id,
                            parent: p,
                        })
                    }
                },
            };
            nodes.push(ConceptNode {
                id,
                label,
                synonyms,
                parent,
            });
        }

        let depth = compute_depths(&nodes)?;
        let roots: Vec<NodeIx> = (0..nodes.len())
            .filter(|&i| nodes[i].parent.is_none())
            .map(|i| NodeIx(i as u32))
            .collect();
        let root = match roots.as_slice() {
            [r] => *r,
            // no root without a cycle, which compute_depths already rejected
            [] => return Err(OntologyError::Empty),
            many => {
                return Err(OntologyError::MultipleRoots(
                    many.iter().map(|r| nodes[r.index()].id.clone()).collect(),
                ))
            }
        };
        let mut children = vec![Vec::new(); nodes.len()];
        for (i, n) in nodes.iter().enumerate() {
            if let Some(p) = n.parent {
                children[p.index()].push(NodeIx(i as u32));
            }
        }
        let names = NameIndex::build(&nodes);
        Ok(Self {
            nodes,
            index,
            root,
            depth,
            children,
            names,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeIx {
        self.root
    }

    pub fn node(&self, ix: NodeIx) -> &ConceptNode {
        &self.nodes[ix.index()]
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = (NodeIx, &ConceptNode)> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (NodeIx(i as u32), n))
    }

    pub fn lookup(&self, id: &str) -> Option<NodeIx> {
        self.index.get(id).copied()
    }

    pub fn require(&self, id: &str) -> Result<NodeIx, OntologyError> {
        self.lookup(id)
            .ok_or_else(|| OntologyError::UnknownNode(id.to_string()))
    }

    pub fn id(&self, ix: NodeIx) -> &str {
        &self.nodes[ix.index()].id
    }

    pub fn label(&self, ix: NodeIx) -> &str {
        &self.nodes[ix.index()].label
    }

    pub fn parent(&self, ix: NodeIx) -> Option<NodeIx> {
        self.nodes[ix.index()].parent
    }

    pub fn children(&self, ix: NodeIx) -> &[NodeIx] {
        &self.children[ix.index()]
    }

    /// Depth with the root at 1.
    pub fn depth(&self, ix: NodeIx) -> u32 {
        self.depth[ix.index()]
    }

    pub fn max_depth(&self) -> u32 {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Number of nodes at each depth, index 0 holding depth 1.
    pub fn depth_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0; self.max_depth() as usize];
        for &d in &self.depth {
            hist[d as usize - 1] += 1;
        }
        hist
    }

    pub fn is_leaf(&self, ix: NodeIx) -> bool {
        self.children[ix.index()].is_empty()
    }

    /// `ix` followed by its ancestors up to the root.
    pub fn ancestors_or_self(&self, ix: NodeIx) -> impl Iterator<Item = NodeIx> + '_ {
        std::iter::successors(Some(ix), move |&n| self.parent(n))
    }

    /// Nodes strictly below `ix`, in pre-order.
    pub fn descendants(&self, ix: NodeIx) -> Vec<NodeIx> {
        let mut out = Vec::new();
        let mut stack: Vec<NodeIx> = self.children(ix).iter().rev().copied().collect();
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(self.children(n).iter().rev().copied());
        }
        out
    }

    /// Deepest node that is an ancestor-or-self of both arguments.
    pub fn lcs_ix(&self, a: NodeIx, b: NodeIx) -> NodeIx {
        let (mut a, mut b) = (a, b);
        while self.depth(a) > self.depth(b) {
            a = self.parent(a).expect("non-root has a parent");
        }
        while self.depth(b) > self.depth(a) {
            b = self.parent(b).expect("non-root has a parent");
        }
        while a != b {
            a = self
                .parent(a)
                .expect("distinct nodes at equal depth are below the root");
            b = self
                .parent(b)
                .expect("distinct nodes at equal depth are below the root");
        }
        a
    }

    pub fn lcs(&self, a: &str, b: &str) -> Result<&str, OntologyError> {
        let ix = self.lcs_ix(self.require(a)?, self.require(b)?);
        Ok(self.id(ix))
    }

    /// `2·depth(lcs) / (depth(a) + depth(b))`, in (0, 1].
    pub fn wu_palmer_ix(&self, a: NodeIx, b: NodeIx) -> f64 {
        let lcs = self.lcs_ix(a, b);
        2.0 * f64::from(self.depth(lcs)) / f64::from(self.depth(a) + self.depth(b))
    }

    pub fn wu_palmer(&self, a: &str, b: &str) -> Result<f64, OntologyError> {
        Ok(self.wu_palmer_ix(self.require(a)?, self.require(b)?))
    }

    /// Links a terminology to the node whose label or synonym is closest
    /// in edit distance. See [`Link`] for the scoring and tie rules.
    pub fn link(&self, term: &str) -> Link {
        self.names.link(self, term)
    }
}

impl fmt::Display for OntologyGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ontology(root={}, nodes={}, max_depth={})",
            self.id(self.root),
            self.len(),
            self.max_depth()
        )
    }
}

fn compute_depths(nodes: &[ConceptNode]) -> Result<Vec<u32>, OntologyError> {
    const UNSEEN: u32 = 0;
    const ON_PATH: u32 = u32::MAX;
    let mut depth = vec![UNSEEN; nodes.len()];
    let mut path = Vec::new();
    for start in 0..nodes.len() {
        let mut cur = start;
        loop {
            match depth[cur] {
                UNSEEN => {
                    depth[cur] = ON_PATH;
                    path.push(cur);
                    match nodes[cur].parent {
                        Some(p) => cur = p.index(),
                        None => {
                            path.pop();
                            depth[cur] = 1;
                            break;
                        }
                    }
                }
                ON_PATH => return Err(OntologyError::Cycle(nodes[cur].id.clone())),
                _ => break,
            }
        }
        while let Some(n) = path.pop() {
            let p = nodes[n]
                .parent
                .expect("nodes on a path have parents")
                .index();
            depth[n] = depth[p] + 1;
        }
    }
    Ok(depth)
}
