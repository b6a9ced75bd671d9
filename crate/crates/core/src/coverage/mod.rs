//! The per-sub-frame allocation problem and its solvers.
//!
//! A [`CoverageInstance`] holds, for every (cell, PRB) pair, the set of users
//! that would decode the multicast stream if that cell transmitted it on that
//! PRB. A feasible [`Allocation`] picks exactly one PRB per cell and its value
//! is the number of distinct users in the union of the chosen sets.
//!
//! Solvers:
//! * [`solve_cga`]: centralized greedy over (cell, PRB) pairs, one pick per cell.
//! * [`solve_dga`]: each cell maximises its own local count independently.
//! * [`solve_sc`]: [`solve_dga`] on an instance built with single connectivity.
//! * [`solve_mbsfn`]: one PRB index shared by every cell.
//! * [`solve_exact`]: exhaustive search, used as an oracle at small sizes.
//!
//! [`reduce_mcp`] and [`map_solution`] translate maximum-coverage instances
//! into this problem and solutions back.
//!
//! All argmax steps break ties towards the lowest (cell, PRB) index.

mod cga;
mod dga;
mod exact;
mod mbsfn;
mod reduce;
mod text;

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::channel::RateMatrix;
use crate::error::{Error, Result};

pub use cga::{solve_cga, solve_cga_traced, GreedyStep};
pub use dga::{solve_dga, solve_sc, DgaCounting};
pub use exact::{allocation_count, solve_exact, solve_exact_with_cap, DEFAULT_EXACT_CAP};
pub use mbsfn::solve_mbsfn;
pub use reduce::{map_solution, reduce_mcp, McpInstance};

/// Set of user ids in `0..num_users`.
pub type UserSet = FixedBitSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageInstance {
    num_users: usize,
    num_cells: usize,
    num_prbs: usize,
    /// Indexed by `cell * num_prbs + prb`.
    sets: Vec<UserSet>,
}

impl CoverageInstance {
    /// Instance with every set empty.
    pub fn new(num_users: usize, num_cells: usize, num_prbs: usize) -> Result<Self> {
        if num_cells == 0 || num_prbs == 0 {
            return Err(Error::invalid(format!(
                "instance needs at least one cell and one PRB (got {num_cells} cells, {num_prbs} PRBs)"
            )));
        }
        Ok(Self {
            num_users,
            num_cells,
            num_prbs,
            sets: vec![UserSet::with_capacity(num_users); num_cells * num_prbs],
        })
    }

    /// Builds an instance from `sets[cell][prb] = users`.
    pub fn from_sets(num_users: usize, sets: &[Vec<Vec<usize>>]) -> Result<Self> {
        let num_cells = sets.len();
        let num_prbs = sets.first().map_or(0, Vec::len);
        let mut inst = Self::new(num_users, num_cells, num_prbs)?;
        for (c, per_cell) in sets.iter().enumerate() {
            if per_cell.len() != num_prbs {
                return Err(Error::invalid(format!(
                    "cell {c} has {} PRB sets, expected {num_prbs}",
                    per_cell.len()
                )));
            }
            for (j, users) in per_cell.iter().enumerate() {
                for &u in users {
                    inst.insert(c, j, u)?;
                }
            }
        }
        Ok(inst)
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn num_cells(&self) -> usize {
        self.num_cells
    }

    pub fn num_prbs(&self) -> usize {
        self.num_prbs
    }

    pub fn insert(&mut self, cell: usize, prb: usize, user: usize) -> Result<()> {
        self.check_pair(cell, prb)?;
        if user >= self.num_users {
            return Err(Error::invalid(format!(
                "user {user} outside universe of {} users",
                self.num_users
            )));
        }
        let idx = cell * self.num_prbs + prb;
        self.sets[idx].insert(user);
        Ok(())
    }

    /// Users served if `cell` streams on `prb`.
    ///
    /// Panics if the pair is out of range.
    pub fn set(&self, cell: usize, prb: usize) -> &UserSet {
        assert!(cell < self.num_cells && prb < self.num_prbs);
        &self.sets[cell * self.num_prbs + prb]
    }

    fn check_pair(&self, cell: usize, prb: usize) -> Result<()> {
        if cell >= self.num_cells || prb >= self.num_prbs {
            return Err(Error::invalid(format!(
                "(cell {cell}, prb {prb}) outside {}x{} instance",
                self.num_cells, self.num_prbs
            )));
        }
        Ok(())
    }

    pub(crate) fn empty_user_set(&self) -> UserSet {
        UserSet::with_capacity(self.num_users)
    }
}

/// Builds the instance for one sub-frame: user `k` joins `U[j][c]` iff `c` is
/// in `k`'s connectivity set and `required_rate <= rates[c][j][k]`.
///
/// A zero required rate still needs a nonzero decodable rate, so a user with
/// no usable channel is never counted as served.
pub fn build_instance(
    rates: &RateMatrix,
    required_rate: u64,
    connectivity: &[Vec<usize>],
) -> Result<CoverageInstance> {
    if connectivity.len() != rates.num_users() {
        return Err(Error::invalid(format!(
            "connectivity lists {} users but rate matrix has {}",
            connectivity.len(),
            rates.num_users()
        )));
    }
    let mut inst = CoverageInstance::new(rates.num_users(), rates.num_cells(), rates.num_prbs())?;
    for (k, cells) in connectivity.iter().enumerate() {
        for &c in cells {
            if c >= rates.num_cells() {
                return Err(Error::invalid(format!(
                    "user {k} lists cell {c} but rate matrix has {} cells",
                    rates.num_cells()
                )));
            }
            for j in 0..rates.num_prbs() {
                let r = u64::from(rates.get(c, j, k));
                if r > 0 && required_rate <= r {
                    inst.sets[c * inst.num_prbs + j].insert(k);
                }
            }
        }
    }
    Ok(inst)
}

/// One PRB index per cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Allocation {
    chosen: Vec<usize>,
}

impl Allocation {
    pub fn new(chosen: Vec<usize>, inst: &CoverageInstance) -> Result<Self> {
        if chosen.len() != inst.num_cells() {
            return Err(Error::invalid(format!(
                "allocation covers {} cells, instance has {}",
                chosen.len(),
                inst.num_cells()
            )));
        }
        if let Some((c, &j)) = chosen
            .iter()
            .enumerate()
            .find(|(_, &j)| j >= inst.num_prbs())
        {
            return Err(Error::invalid(format!(
                "cell {c} assigned PRB {j}, instance has {} PRBs",
                inst.num_prbs()
            )));
        }
        Ok(Self { chosen })
    }

    /// Same PRB in every cell.
    pub fn uniform(prb: usize, inst: &CoverageInstance) -> Result<Self> {
        Self::new(vec![prb; inst.num_cells()], inst)
    }

    pub fn prb(&self, cell: usize) -> usize {
        self.chosen[cell]
    }

    pub fn chosen(&self) -> &[usize] {
        &self.chosen
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageResult {
    pub allocation: Allocation,
    pub served: UserSet,
    pub served_count: usize,
}

impl CoverageResult {
    /// Scores an allocation from scratch: the union of the chosen sets.
    pub fn evaluate(inst: &CoverageInstance, allocation: Allocation) -> Self {
        let mut served = inst.empty_user_set();
        for (c, &j) in allocation.chosen.iter().enumerate() {
            served.union_with(inst.set(c, j));
        }
        let served_count = served.count_ones(..);
        Self {
            allocation,
            served,
            served_count,
        }
    }

    pub fn served_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.served.ones()
    }
}

/// Allocation policy selectable by the engine and CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    Cga,
    Dga,
    Sc,
    Mbsfn,
    Exact,
}

impl Policy {
    pub const ALL: [Policy; 5] = [
        Policy::Cga,
        Policy::Dga,
        Policy::Sc,
        Policy::Mbsfn,
        Policy::Exact,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Policy::Cga => "cga",
            Policy::Dga => "dga",
            Policy::Sc => "sc",
            Policy::Mbsfn => "mbsfn",
            Policy::Exact => "exact",
        }
    }

    /// Whether the policy runs on the single-connectivity instance.
    pub fn single_connectivity(self) -> bool {
        matches!(self, Policy::Sc)
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Policy::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown policy '{s}' (expected cga|dga|sc|mbsfn|exact)"
                ))
            })
    }
}
