use std::collections::HashSet;

use crate::poly::MultiDegree;

/// Whether the equations of degrees `remaining` can be assigned to groups,
/// equation `m` only to a group `i` with `remaining[m][i] > 0`, so that group
/// `i` receives exactly `d[i]` of them.
///
/// Slice types failing this cannot lead to isolated solutions of a square system.
pub fn can_reach_isolated(d: &[usize], remaining: &[MultiDegree]) -> bool {
    if d.iter().sum::<usize>() != remaining.len() {
        return false;
    }
    let mut seen = HashSet::new();
    assign(0, &mut d.to_vec(), remaining, &mut seen)
}

fn assign(
    m: usize,
    left: &mut Vec<usize>,
    remaining: &[MultiDegree],
    seen: &mut HashSet<(usize, Vec<usize>)>,
) -> bool {
    if m == remaining.len() {
        return left.iter().all(|&x| x == 0);
    }
    if !seen.insert((m, left.clone())) {
        return false;
    }
    for i in 0..left.len() {
        if left[i] > 0 && remaining[m][i] > 0 {
            left[i] -= 1;
            let ok = assign(m + 1, left, remaining, seen);
            left[i] += 1;
            if ok {
                return true;
            }
        }
    }
    false
}
