use std::collections::BTreeSet;

use super::{Allocation, CoverageInstance};
use crate::error::{Error, Result};

/// Maximum coverage: pick at most `k` of `sets` to cover the most elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McpInstance {
    pub universe_size: usize,
    pub k: usize,
    pub sets: Vec<Vec<usize>>,
}

impl McpInstance {
    pub fn new(universe_size: usize, k: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("maximum coverage needs k >= 1"));
        }
        if sets.is_empty() {
            return Err(Error::invalid("maximum coverage needs at least one set"));
        }
        if let Some(e) = sets.iter().flatten().find(|&&e| e >= universe_size) {
            return Err(Error::invalid(format!(
                "element {e} outside universe of size {universe_size}"
            )));
        }
        Ok(Self {
            universe_size,
            k,
            sets,
        })
    }

    /// Size of the union of the selected sets.
    pub fn coverage(&self, selected: &[usize]) -> usize {
        selected
            .iter()
            .flat_map(|&j| self.sets[j].iter().copied())
            .collect::<BTreeSet<_>>()
            .len()
    }
}

/// `k` cells, one PRB per set, and every cell offered the same sets.
pub fn reduce_mcp(mcp: &McpInstance) -> CoverageInstance {
    let mut inst = CoverageInstance::new(mcp.universe_size, mcp.k, mcp.sets.len())
        .expect("McpInstance guarantees k >= 1 and a nonempty collection");
    for c in 0..mcp.k {
        for (j, set) in mcp.sets.iter().enumerate() {
            for &e in set {
                inst.insert(c, j, e)
                    .expect("elements validated by McpInstance");
            }
        }
    }
    inst
}

/// The distinct PRB indices of an allocation on a reduced instance, which
/// are the selected MCP sets. At most `k` of them.
pub fn map_solution(sol: &Allocation) -> Vec<usize> {
    sol.chosen()
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}
