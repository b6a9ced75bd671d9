use super::{Allocation, CoverageInstance, CoverageResult, UserSet};

/// Which users a cell counts when it maximises locally.
#[derive(Debug, Clone, Copy)]
pub enum DgaCounting<'a> {
    /// Every user whose connectivity set includes the cell, i.e. `|U_jc|`.
    Connected,
    /// Only users whose primary cell is this cell; `primary[k]` is user `k`'s
    /// primary cell.
    Primary(&'a [usize]),
}

/// Distributed allocation: every cell independently picks the PRB that
/// serves most of the users it counts. Service is still scored globally.
pub fn solve_dga(inst: &CoverageInstance, counting: DgaCounting<'_>) -> CoverageResult {
    let masks: Option<Vec<UserSet>> = match counting {
        DgaCounting::Connected => None,
        DgaCounting::Primary(primary) => {
            let mut masks = vec![inst.empty_user_set(); inst.num_cells()];
            for (k, &c) in primary.iter().enumerate().take(inst.num_users()) {
                if let Some(m) = masks.get_mut(c) {
                    m.insert(k);
                }
            }
            Some(masks)
        }
    };

    let chosen = (0..inst.num_cells())
        .map(|c| {
            let score = |j: usize| match &masks {
                None => inst.set(c, j).count_ones(..),
                Some(m) => inst.set(c, j).intersection_count(&m[c]),
            };
            argmax_first(inst.num_prbs(), score)
        })
        .collect();
    CoverageResult::evaluate(inst, Allocation { chosen })
}

/// Single-connectivity baseline. Expects an instance whose users are eligible
/// only at their primary cell; the allocation rule is the distributed one.
pub fn solve_sc(inst: &CoverageInstance) -> CoverageResult {
    solve_dga(inst, DgaCounting::Connected)
}

pub(crate) fn argmax_first(n: usize, score: impl Fn(usize) -> usize) -> usize {
    let mut best = (0, score(0));
    for j in 1..n {
        let s = score(j);
        if s > best.1 {
            best = (j, s);
        }
    }
    best.0
}
