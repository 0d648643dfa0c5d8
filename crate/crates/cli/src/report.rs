use std::collections::BTreeMap;

use p5color::branching::BranchStats;
use p5color::{Color, Error, StructureKind};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Sat,
    Unsat,
    Error,
    Timeout,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentStructure {
    pub component: Vec<usize>,
    pub kind: StructureKind,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchRow {
    pub suite: String,
    pub case: String,
    pub n: usize,
    pub k: u32,
    /// Verdict for single-instance rows.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<Status>,
    pub elapsed_ms: f64,
    pub ok: bool,
}

/// Everything a subcommand reports. Vertices are 1-indexed DIMACS ids.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<Status>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coloring: Option<BTreeMap<usize, Color>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<BranchStats>,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    /// Clique on k+1 vertices proving UNSAT, when one was found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clique: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chromatic_number: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p5_free: Option<bool>,
    /// Induced P5, for inputs that are not P5-free.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominating: Option<Vec<ComponentStructure>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated: Option<Generated>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bench: Option<Vec<BenchRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Generated {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lists_file: Option<String>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            ..Self::default()
        }
    }

    pub fn set_coloring(&mut self, colors: &[Color]) {
        self.coloring = Some(
            colors
                .iter()
                .enumerate()
                .map(|(v, &c)| (v + 1, c))
                .collect(),
        );
    }

    /// Fills in an error and returns the exit code for it.
    pub fn fail(&mut self, err: &Error) -> i32 {
        self.coloring = None;
        self.error = Some(err.to_string());
        self.status = Some(if matches!(err, Error::Timeout) {
            Status::Timeout
        } else {
            Status::Error
        });
        if let Error::NotP5Free { witness } = err {
            self.p5_free = Some(false);
            self.witness = Some(ids(witness));
            self.error = Some(format!(
                "graph is not P5-free: induced path {:?}",
                ids(witness)
            ));
        }
        exit_code(err)
    }
}

pub fn ids(vs: &[usize]) -> Vec<usize> {
    vs.iter().map(|v| v + 1).collect()
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Input(_) | Error::Io(_) => 2,
        Error::NotP5Free { .. }
        | Error::Precondition(_)
        | Error::Contract(_)
        | Error::OracleRefused(_) => 3,
        Error::Timeout => 4,
        Error::Internal(_) | Error::Generator { .. } => 1,
    }
}
