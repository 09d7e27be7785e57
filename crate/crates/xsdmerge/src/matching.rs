//! Bipartite matching primitives used by the property-extraction and
//! dictionary layers: maximum-cardinality matching (augmenting paths with
//! BFS layering) and maximum-weight matching (assignment algorithm with
//! potentials over exact rationals), plus a canonicalization step that makes
//! tie-breaking deterministic.

use std::collections::VecDeque;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Size of a maximum-cardinality matching between `left` and `right` node
/// sets connected by `arcs` (0-based indices).
pub fn maximum_cardinality(left: usize, right: usize, arcs: &[(usize, usize)]) -> usize {
    let mut adjacency = vec![Vec::new(); left];
    for &(i, j) in arcs {
        debug_assert!(i < left && j < right);
        adjacency[i].push(j);
    }
    let mut match_left = vec![usize::MAX; left];
    let mut match_right = vec![usize::MAX; right];
    let mut size = 0;

    loop {
        let mut dist = vec![usize::MAX; left];
        let mut queue: VecDeque<usize> = (0..left)
            .filter(|&i| match_left[i] == usize::MAX)
            .collect();
        for &i in &queue {
            dist[i] = 0;
        }
        let mut reachable_free = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adjacency[i] {
                let owner = match_right[j];
                if owner == usize::MAX {
                    reachable_free = true;
                } else if dist[owner] == usize::MAX {
                    dist[owner] = dist[i] + 1;
                    queue.push_back(owner);
                }
            }
        }
        if !reachable_free {
            break;
        }
        for i in 0..left {
            if match_left[i] == usize::MAX
                && augment(i, &adjacency, &mut match_left, &mut match_right, &mut dist)
            {
                size += 1;
            }
        }
    }
    size
}

fn augment(
    i: usize,
    adjacency: &[Vec<usize>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for k in 0..adjacency[i].len() {
        let j = adjacency[i][k];
        let owner = match_right[j];
        if owner == usize::MAX
            || (dist[owner] == dist[i].wrapping_add(1)
                && augment(owner, adjacency, match_left, match_right, dist))
        {
            match_left[i] = j;
            match_right[j] = i;
            return true;
        }
    }
    dist[i] = usize::MAX;
    false
}

/// Maximum-weight matching (not necessarily maximum-cardinality) between
/// `left` and `right` node sets. Weights must be non-negative; the returned
/// matching contains only arcs of strictly positive weight. Returns the total
/// weight and the chosen (left, right) pairs.
pub fn maximum_weight(
    left: usize,
    right: usize,
    arcs: &[(usize, usize, BigRational)],
) -> (BigRational, Vec<(usize, usize)>) {
    let n = left.max(right);
    if n == 0 || arcs.is_empty() {
        return (BigRational::zero(), Vec::new());
    }

    // Assignment formulation: pad to a square matrix, missing cells cost 0,
    // real arcs cost -w; a minimum-cost perfect assignment then realizes the
    // maximum-weight matching because leaving a node unmatched costs nothing.
    let mut cost = vec![vec![BigRational::zero(); n + 1]; n + 1];
    for (i, j, w) in arcs {
        debug_assert!(*i < left && *j < right);
        debug_assert!(!w.is_negative());
        let c = -w.clone();
        if c < cost[i + 1][j + 1] {
            cost[i + 1][j + 1] = c;
        }
    }

    let mut u = vec![BigRational::zero(); n + 1];
    let mut v = vec![BigRational::zero(); n + 1];
    let mut row_of = vec![0usize; n + 1]; // row currently assigned to column j
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0usize;
        let mut minv: Vec<Option<BigRational>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta: Option<BigRational> = None;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = &cost[i0][j] - &u[i0] - &v[j];
                if minv[j].as_ref().is_none_or(|m| reduced < *m) {
                    minv[j] = Some(reduced);
                    way[j] = j0;
                }
                if delta
                    .as_ref()
                    .is_none_or(|d| minv[j].as_ref().unwrap() < d)
                {
                    delta = minv[j].clone();
                    j1 = j;
                }
            }
            let delta = delta.expect("padded square matrix always has a free column");
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta.clone();
                    v[j] -= delta.clone();
                } else if let Some(m) = &mut minv[j] {
                    *m -= delta.clone();
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut positive = vec![vec![BigRational::zero(); right]; left];
    for (i, j, w) in arcs {
        if *w > positive[*i][*j] {
            positive[*i][*j] = w.clone();
        }
    }
    let mut total = BigRational::zero();
    let mut pairs = Vec::new();
    for j in 1..=n {
        let i = row_of[j];
        if i == 0 || i > left || j > right {
            continue;
        }
        let w = &positive[i - 1][j - 1];
        if w.is_positive() {
            total += w.clone();
            pairs.push((i - 1, j - 1));
        }
    }
    pairs.sort_unstable();
    (total, pairs)
}

/// Deterministic maximum-weight matching: arcs are considered in the order
/// given (the caller's preference order) and an arc is kept whenever some
/// optimal matching contains it together with everything already kept.
/// Returns indices into `arcs`.
pub fn canonical_maximum_weight(
    left: usize,
    right: usize,
    arcs: &[(usize, usize, BigRational)],
) -> Vec<usize> {
    let (best, _) = maximum_weight(left, right, arcs);
    let mut chosen = Vec::new();
    let mut used_left = vec![false; left];
    let mut used_right = vec![false; right];
    let mut forced = BigRational::zero();
    for (k, (i, j, w)) in arcs.iter().enumerate() {
        if used_left[*i] || used_right[*j] || !w.is_positive() {
            continue;
        }
        let rest: Vec<(usize, usize, BigRational)> = arcs
            .iter()
            .filter(|(a, b, _)| !used_left[*a] && !used_right[*b] && *a != *i && *b != *j)
            .cloned()
            .collect();
        let (rest_best, _) = maximum_weight(left, right, &rest);
        if &forced + w + rest_best == best {
            chosen.push(k);
            used_left[*i] = true;
            used_right[*j] = true;
            forced += w.clone();
        }
    }
    chosen
}

/// Deterministic maximum-cardinality matching over unweighted arcs, with the
/// same preference-order semantics as [`canonical_maximum_weight`].
pub fn canonical_maximum_cardinality(
    left: usize,
    right: usize,
    arcs: &[(usize, usize)],
) -> Vec<usize> {
    let one = || BigRational::from_integer(1.into());
    let weighted: Vec<(usize, usize, BigRational)> =
        arcs.iter().map(|&(i, j)| (i, j, one())).collect();
    canonical_maximum_weight(left, right, &weighted)
}
