use super::{Allocation, CoverageInstance, CoverageResult};

/// One iteration of the centralized greedy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreedyStep {
    pub cell: usize,
    pub prb: usize,
    /// Users newly covered by this pick.
    pub gain: usize,
}

/// Centralized greedy allocation.
///
/// Runs one iteration per cell. Each iteration scans every (cell, PRB) pair of
/// the cells not yet assigned, takes the pair covering the most users not
/// already covered, and retires that cell. A pick is forced even when every
/// remaining pair adds nothing, so the allocation is always total.
pub fn solve_cga(inst: &CoverageInstance) -> CoverageResult {
    solve_cga_traced(inst).0
}

/// [`solve_cga`] plus the per-iteration picks in the order they were made.
pub fn solve_cga_traced(inst: &CoverageInstance) -> (CoverageResult, Vec<GreedyStep>) {
    let cells = inst.num_cells();
    let mut covered = inst.empty_user_set();
    let mut assigned = vec![false; cells];
    let mut chosen = vec![0; cells];
    let mut steps = Vec::with_capacity(cells);

    for _ in 0..cells {
        let mut best: Option<GreedyStep> = None;
        for c in (0..cells).filter(|&c| !assigned[c]) {
            for j in 0..inst.num_prbs() {
                let gain = inst.set(c, j).difference_count(&covered);
                if best.is_none_or(|b| gain > b.gain) {
                    best = Some(GreedyStep {
                        cell: c,
                        prb: j,
                        gain,
                    });
                }
            }
        }
        let step = best.expect("an unassigned cell remains on every iteration");
        covered.union_with(inst.set(step.cell, step.prb));
        assigned[step.cell] = true;
        chosen[step.cell] = step.prb;
        steps.push(step);
    }

    let allocation = Allocation { chosen };
    let served_count = covered.count_ones(..);
    (
        CoverageResult {
            allocation,
            served: covered,
            served_count,
        },
        steps,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::fixtures;

    #[test]
    fn worked_example_serves_everyone() {
        let inst = fixtures::two_cell_example();
        let (res, steps) = solve_cga_traced(&inst);
        assert_eq!(res.served_count, 6);
        assert_eq!(res.allocation.chosen(), &[0, 1]);
        assert_eq!(
            steps,
            vec![
                GreedyStep {
                    cell: 1,
                    prb: 1,
                    gain: 4
                },
                GreedyStep {
                    cell: 0,
                    prb: 0,
                    gain: 2
                },
            ]
        );
    }

    #[test]
    fn empty_instance_picks_prb_zero() {
        let inst = CoverageInstance::new(4, 3, 2).unwrap();
        let res = solve_cga(&inst);
        assert_eq!(res.served_count, 0);
        assert_eq!(res.allocation.chosen(), &[0, 0, 0]);
    }

    #[test]
    fn ties_go_to_lowest_cell_then_prb() {
        let inst =
            CoverageInstance::from_sets(4, &[vec![vec![0], vec![1]], vec![vec![2], vec![3]]])
                .unwrap();
        let (_, steps) = solve_cga_traced(&inst);
        assert_eq!((steps[0].cell, steps[0].prb), (0, 0));
        assert_eq!((steps[1].cell, steps[1].prb), (1, 0));
    }

    #[test]
    fn single_cell_is_argmax() {
        let inst =
            CoverageInstance::from_sets(5, &[vec![vec![0], vec![1, 2, 3], vec![4]]]).unwrap();
        assert_eq!(solve_cga(&inst).allocation.chosen(), &[1]);
    }

    #[test]
    fn result_matches_independent_evaluation() {
        let inst = fixtures::two_cell_example();
        let res = solve_cga(&inst);
        let again = CoverageResult::evaluate(&inst, res.allocation.clone());
        assert_eq!(res, again);
    }
}
