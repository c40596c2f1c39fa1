//! Exact planarity at desk scale: the edge bound as a fast reject, then
//! exhaustive search for a subdivision of either forbidden graph.

use crate::structures::{components, FinStructure};

/// Exact planarity test: a graph is planar iff it contains no subdivision of
/// the 5-clique or of the 3,3-biclique. Intended for small graphs (the
/// subdivision search is exhaustive).
pub fn is_planar(g: &FinStructure) -> bool {
    components(g).components.iter().all(is_planar_connected)
}

fn is_planar_connected(g: &FinStructure) -> bool {
    let n = g.size();
    if n < 5 {
        return true;
    }
    if n >= 3 && g.edge_count() > 3 * n - 6 {
        return false;
    }
    let adj = adjacency_matrix(g);
    !has_clique5_subdivision(&adj) && !has_biclique33_subdivision(&adj)
}

fn adjacency_matrix(g: &FinStructure) -> Vec<Vec<bool>> {
    let n = g.size();
    let mut adj = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    adj
}

fn degrees(adj: &[Vec<bool>]) -> Vec<usize> {
    adj.iter()
        .map(|row| row.iter().filter(|&&b| b).count())
        .collect()
}

fn has_clique5_subdivision(adj: &[Vec<bool>]) -> bool {
    let deg = degrees(adj);
    let candidates: Vec<usize> = (0..adj.len()).filter(|&v| deg[v] >= 4).collect();
    let mut chosen = Vec::with_capacity(5);
    choose_branches(&candidates, 0, 5, &mut chosen, &mut |branch| {
        let pairs: Vec<(usize, usize)> = (0..5)
            .flat_map(|i| ((i + 1)..5).map(move |j| (i, j)))
            .collect();
        connect_pairs(adj, branch, &pairs)
    })
}

fn has_biclique33_subdivision(adj: &[Vec<bool>]) -> bool {
    let deg = degrees(adj);
    let candidates: Vec<usize> = (0..adj.len()).filter(|&v| deg[v] >= 3).collect();
    let mut chosen = Vec::with_capacity(6);
    choose_branches(&candidates, 0, 6, &mut chosen, &mut |branch| {
        // split the six chosen vertices into two sides of three; fixing the
        // first on the left halves the symmetric splits
        let mut rest: Vec<usize> = (1..6).collect();
        split_sides(&mut rest, &mut vec![0], adj, branch)
    })
}

fn split_sides(
    rest: &mut Vec<usize>,
    left: &mut Vec<usize>,
    adj: &[Vec<bool>],
    branch: &[usize],
) -> bool {
    if left.len() == 3 {
        let right: Vec<usize> = (0..6).filter(|i| !left.contains(i)).collect();
        let pairs: Vec<(usize, usize)> = left
            .iter()
            .flat_map(|&l| right.iter().map(move |&r| (l, r)))
            .collect();
        return connect_pairs(adj, branch, &pairs);
    }
    for i in 0..rest.len() {
        let v = rest.remove(i);
        left.push(v);
        if split_sides(rest, left, adj, branch) {
            return true;
        }
        left.pop();
        rest.insert(i, v);
    }
    false
}

fn choose_branches(
    candidates: &[usize],
    from: usize,
    need: usize,
    chosen: &mut Vec<usize>,
    on_full: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if need == 0 {
        return on_full(chosen);
    }
    if candidates.len() - from < need {
        return false;
    }
    for i in from..candidates.len() {
        chosen.push(candidates[i]);
        if choose_branches(candidates, i + 1, need - 1, chosen, on_full) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Try to realize all `pairs` (indices into `branch`) as internally disjoint
/// paths avoiding the branch vertices internally.
fn connect_pairs(adj: &[Vec<bool>], branch: &[usize], pairs: &[(usize, usize)]) -> bool {
    let n = adj.len();
    let mut used = vec![false; n];
    for &b in branch {
        used[b] = true;
    }
    connect_from(adj, branch, pairs, 0, &mut used)
}

fn connect_from(
    adj: &[Vec<bool>],
    branch: &[usize],
    pairs: &[(usize, usize)],
    idx: usize,
    used: &mut Vec<bool>,
) -> bool {
    let Some(&(i, j)) = pairs.get(idx) else {
        return true;
    };
    extend_path(adj, branch, pairs, idx, branch[i], branch[j], used)
}

fn extend_path(
    adj: &[Vec<bool>],
    branch: &[usize],
    pairs: &[(usize, usize)],
    idx: usize,
    cur: usize,
    goal: usize,
    used: &mut Vec<bool>,
) -> bool {
    if adj[cur][goal] && connect_from(adj, branch, pairs, idx + 1, used) {
        return true;
    }
    for next in 0..adj.len() {
        if !adj[cur][next] || used[next] {
            continue;
        }
        used[next] = true;
        if extend_path(adj, branch, pairs, idx, next, goal, used) {
            return true;
        }
        used[next] = false;
    }
    false
}
