//! Band assignment: which sensors are served in a round.

/// Picks the `min(n_c, m)` sensors with the least accumulated energy.
///
/// Ties go to the lower index. The result is sorted by index.
pub fn ssep(accumulated_energy: &[f64], n_c: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..accumulated_energy.len()).collect();
    // Stable sort keeps index order among equal energies.
    order.sort_by(|&i, &j| accumulated_energy[i].total_cmp(&accumulated_energy[j]));
    order.truncate(n_c.min(accumulated_energy.len()));
    order.sort_unstable();
    order
}

/// Rotation cursor for round-robin band assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SelectionState {
    pub next_index: usize,
}

/// Serves `min(n_c, m)` consecutive sensors starting at the cursor, wrapping
/// modulo `m`, and advances the cursor by `n_c`.
pub fn round_robin(state: SelectionState, m: usize, n_c: usize) -> (Vec<usize>, SelectionState) {
    if m == 0 {
        return (Vec::new(), state);
    }
    let start = state.next_index % m;
    let mut selected: Vec<usize> = (0..n_c.min(m)).map(|i| (start + i) % m).collect();
    selected.sort_unstable();
    let next = SelectionState {
        next_index: (start + n_c % m) % m,
    };
    (selected, next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ssep_examples() {
        assert_eq!(ssep(&[5.0, 1.0, 3.0, 2.0], 2), vec![1, 3]);
        assert_eq!(ssep(&[0.0; 4], 2), vec![0, 1]);
        assert_eq!(ssep(&[1.0, 2.0, 3.0], 8), vec![0, 1, 2]);
        assert!(ssep(&[], 3).is_empty());
    }

    #[test]
    fn round_robin_examples() {
        let (sel, st) = round_robin(SelectionState { next_index: 0 }, 4, 2);
        assert_eq!((sel, st.next_index), (vec![0, 1], 2));
        let (sel, st) = round_robin(st, 4, 2);
        assert_eq!((sel, st.next_index), (vec![2, 3], 0));

        // 16 sensors on 8 bands alternate between the two halves.
        let mut st = SelectionState::default();
        for round in 0..6 {
            let (sel, next) = round_robin(st, 16, 8);
            let base = if round % 2 == 0 { 0 } else { 8 };
            assert_eq!(sel, (base..base + 8).collect::<Vec<_>>());
            st = next;
        }

        let (sel, _) = round_robin(SelectionState { next_index: 1 }, 3, 8);
        assert_eq!(sel, vec![0, 1, 2]);
    }

    proptest! {
        #[test]
        fn ssep_returns_argmin_set(
            u in prop::collection::vec(0.0f64..10.0, 1..24),
            n_c in 1usize..12,
        ) {
            let sel = ssep(&u, n_c);
            prop_assert_eq!(sel.len(), n_c.min(u.len()));
            let mut dedup = sel.clone();
            dedup.dedup();
            prop_assert_eq!(dedup.len(), sel.len());
            let max_in = sel.iter().map(|&i| u[i]).fold(f64::MIN, f64::max);
            let min_out = (0..u.len())
                .filter(|i| !sel.contains(i))
                .map(|i| u[i])
                .fold(f64::MAX, f64::min);
            prop_assert!(max_in <= min_out);
        }

        #[test]
        fn round_robin_is_balanced(m in 1usize..20, n_c in 1usize..12, k in 1usize..5) {
            let mut counts = vec![0usize; m];
            let mut st = SelectionState::default();
            for _ in 0..m * k {
                let (sel, next) = round_robin(st, m, n_c);
                prop_assert_eq!(sel.len(), n_c.min(m));
                let mut dedup = sel.clone();
                dedup.dedup();
                prop_assert_eq!(dedup.len(), sel.len());
                for i in sel {
                    counts[i] += 1;
                }
                st = next;
            }
            let lo = *counts.iter().min().unwrap();
            let hi = *counts.iter().max().unwrap();
            prop_assert!(hi - lo <= 1, "counts {:?}", counts);
        }
    }
}
