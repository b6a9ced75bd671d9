use super::{Allocation, CoverageInstance, CoverageResult, UserSet};
use crate::error::{Error, Result};

/// Default bound on `N^C` for [`solve_exact`].
pub const DEFAULT_EXACT_CAP: u64 = 10_000_000;

/// Number of feasible allocations, `num_prbs ^ num_cells`, saturating.
pub fn allocation_count(inst: &CoverageInstance) -> u128 {
    (0..inst.num_cells()).fold(1u128, |acc, _| acc.saturating_mul(inst.num_prbs() as u128))
}

/// Exhaustive optimum with the default cap.
pub fn solve_exact(inst: &CoverageInstance) -> Result<CoverageResult> {
    solve_exact_with_cap(inst, DEFAULT_EXACT_CAP)
}

/// Enumerates allocations in lexicographic order (cell 0's PRB most
/// significant) and returns the first one reaching the maximum coverage.
///
/// Subtrees whose optimistic bound cannot strictly beat the incumbent are
/// skipped; that never changes which allocation is returned.
pub fn solve_exact_with_cap(inst: &CoverageInstance, cap: u64) -> Result<CoverageResult> {
    let candidates = allocation_count(inst);
    if candidates > u128::from(cap) {
        return Err(Error::CapExceeded { candidates, cap });
    }

    let cells = inst.num_cells();
    // suffix[c] = sum over cells >= c of the largest set size in that cell
    let mut suffix = vec![0usize; cells + 1];
    for c in (0..cells).rev() {
        let largest = (0..inst.num_prbs())
            .map(|j| inst.set(c, j).count_ones(..))
            .max()
            .unwrap_or(0);
        suffix[c] = suffix[c + 1] + largest;
    }

    let mut search = Search {
        inst,
        suffix,
        current: vec![0; cells],
        best: vec![0; cells],
        best_count: None,
        layers: vec![inst.empty_user_set(); cells + 1],
    };
    search.descend(0);

    Ok(CoverageResult::evaluate(
        inst,
        Allocation {
            chosen: search.best,
        },
    ))
}

struct Search<'a> {
    inst: &'a CoverageInstance,
    suffix: Vec<usize>,
    current: Vec<usize>,
    best: Vec<usize>,
    best_count: Option<usize>,
    /// layers[c] = union of the sets chosen for cells < c
    layers: Vec<UserSet>,
}

impl Search<'_> {
    fn descend(&mut self, cell: usize) {
        let covered = self.layers[cell].count_ones(..);
        if cell == self.inst.num_cells() {
            if self.best_count.is_none_or(|b| covered > b) {
                self.best_count = Some(covered);
                self.best.copy_from_slice(&self.current);
            }
            return;
        }
        if let Some(best) = self.best_count {
            let bound = (covered + self.suffix[cell]).min(self.inst.num_users());
            if bound <= best {
                return;
            }
        }
        for j in 0..self.inst.num_prbs() {
            let (done, rest) = self.layers.split_at_mut(cell + 1);
            let next = &mut rest[0];
            next.clone_from(&done[cell]);
            next.union_with(self.inst.set(cell, j));
            self.current[cell] = j;
            self.descend(cell + 1);
            if self.best_count == Some(self.inst.num_users()) {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::fixtures;

    fn brute_force(inst: &CoverageInstance) -> (usize, Vec<usize>) {
        let (n, c) = (inst.num_prbs(), inst.num_cells());
        let mut best = (0, vec![0; c]);
        let mut first = true;
        for code in 0..n.pow(c as u32) {
            let mut chosen = vec![0; c];
            let mut x = code;
            for slot in chosen.iter_mut().rev() {
                *slot = x % n;
                x /= n;
            }
            let count = CoverageResult::evaluate(
                inst,
                Allocation {
                    chosen: chosen.clone(),
                },
            )
            .served_count;
            if first || count > best.0 {
                best = (count, chosen);
                first = false;
            }
        }
        best
    }

    #[test]
    fn worked_example_optimum_is_six() {
        let res = solve_exact(&fixtures::two_cell_example()).unwrap();
        assert_eq!(res.served_count, 6);
        assert_eq!(res.allocation.chosen(), &[0, 1]);
    }

    #[test]
    fn single_cell_is_argmax() {
        let inst =
            CoverageInstance::from_sets(4, &[vec![vec![0], vec![1, 2], vec![1, 2], vec![3]]])
                .unwrap();
        assert_eq!(solve_exact(&inst).unwrap().allocation.chosen(), &[1]);
    }

    #[test]
    fn cap_is_enforced() {
        let inst = CoverageInstance::new(3, 4, 10).unwrap();
        assert!(matches!(
            solve_exact_with_cap(&inst, 9_999),
            Err(Error::CapExceeded {
                candidates: 10_000,
                cap: 9_999
            })
        ));
        assert!(solve_exact_with_cap(&inst, 10_000).is_ok());
        let huge = CoverageInstance::new(3, 40, 100).unwrap();
        assert!(solve_exact(&huge).is_err());
    }

    #[test]
    fn matches_plain_enumeration_including_tie_break() {
        use rand::Rng;
        let mut rng = crate::rng::stream(11, &[]);
        for _ in 0..300 {
            let m = rng.random_range(1..=10);
            let c = rng.random_range(1..=4);
            let n = rng.random_range(1..=4);
            let mut inst = CoverageInstance::new(m, c, n).unwrap();
            for ci in 0..c {
                for j in 0..n {
                    for u in 0..m {
                        if rng.random_bool(0.3) {
                            inst.insert(ci, j, u).unwrap();
                        }
                    }
                }
            }
            let (count, chosen) = brute_force(&inst);
            let res = solve_exact(&inst).unwrap();
            assert_eq!(res.served_count, count);
            assert_eq!(res.allocation.chosen(), chosen.as_slice());
        }
    }
}
