use super::dga::argmax_first;
use super::{Allocation, CoverageInstance, CoverageResult};

/// Single-frequency-network baseline: one PRB index for every cell, chosen to
/// maximise the number of users served across the whole area.
pub fn solve_mbsfn(inst: &CoverageInstance) -> CoverageResult {
    let union_size = |j: usize| {
        let mut u = inst.empty_user_set();
        for c in 0..inst.num_cells() {
            u.union_with(inst.set(c, j));
        }
        u.count_ones(..)
    };
    let prb = argmax_first(inst.num_prbs(), union_size);
    CoverageResult::evaluate(
        inst,
        Allocation {
            chosen: vec![prb; inst.num_cells()],
        },
    )
}
