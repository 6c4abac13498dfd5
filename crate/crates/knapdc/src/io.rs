//! JSON instance, solution and tree files.
//!
//! Item indices in files are 0-based, like the library.

use std::fs;
use std::path::{Path, PathBuf};

use knapdc_core::dnc::{Node, Tree};
use knapdc_core::randmodel::RandomInstance;
use knapdc_core::{Instance, InstanceError, Solution};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Invalid {
        path: PathBuf,
        source: InstanceError,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub capacity: u64,
    pub weights: Vec<u64>,
    pub profits: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub increments: Option<Vec<f64>>,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        InstanceFile {
            capacity: inst.capacity(),
            weights: inst.weights().to_vec(),
            profits: inst.profits().to_vec(),
            increments: None,
        }
    }

    pub fn from_random(r: &RandomInstance) -> Self {
        InstanceFile {
            increments: Some(r.increments.clone()),
            ..Self::from_instance(&r.instance)
        }
    }

    pub fn validate(self) -> Result<Instance, InstanceError> {
        Instance::new(self.capacity, self.weights, self.profits)
    }
}

pub fn parse_instance(text: &str, path: &Path) -> Result<Instance, IoError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| IoError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.validate().map_err(|source| IoError::Invalid {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_instance(path: &Path) -> Result<Instance, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_instance(&text, path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub algorithm: String,
    pub objective: f64,
    pub decisions: Vec<f64>,
    pub split: usize,
    pub slack: u64,
}

impl From<&Solution> for SolutionRecord {
    fn from(s: &Solution) -> Self {
        SolutionRecord {
            algorithm: s.algorithm.tag().to_string(),
            objective: s.objective,
            decisions: s.decisions.clone(),
            split: s.split,
            slack: s.slack,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeRecord {
    pub indices: Vec<usize>,
    pub capacity: u64,
    /// Turns from the root, `l` or `r` per level.
    pub marker: String,
    pub children: Vec<TreeRecord>,
}

impl From<&Node> for TreeRecord {
    fn from(node: &Node) -> Self {
        TreeRecord {
            indices: node.subproblem.indices.clone(),
            capacity: node.subproblem.capacity,
            marker: node.marker.iter().map(|s| s.letter()).collect(),
            children: node
                .children
                .as_ref()
                .map(|kids| kids.iter().map(TreeRecord::from).collect())
                .unwrap_or_default(),
        }
    }
}

impl From<&Tree> for TreeRecord {
    fn from(tree: &Tree) -> Self {
        TreeRecord::from(&tree.root)
    }
}

impl TreeRecord {
    /// Markers of the leaves, left to right.
    pub fn leaf_markers(&self) -> Vec<String> {
        if self.children.is_empty() {
            return vec![self.marker.clone()];
        }
        self.children
            .iter()
            .flat_map(|c| c.leaf_markers())
            .collect()
    }
}
