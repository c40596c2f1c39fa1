//! Isomorphism testing and canonical forms.
//!
//! Testing first decomposes into Gaifman components, groups the components
//! into isomorphism classes, and only then searches vertex bijections, so
//! large disjoint unions of small pieces stay cheap. Connected pieces are
//! matched by colour refinement followed by backtracking; graphs additionally
//! get an exact canonical form used for grouping, deduplication and stable
//! file names.

use std::collections::HashMap;

use super::{components, FinStructure, Homomorphism};
use crate::error::{Error, Result};

/// Colour refinement on an adjacency list, starting from `colors`.
///
/// Colour ids are ranks of the (old colour, sorted neighbour colours)
/// signatures, so they are invariant under isomorphism and comparable between
/// structures refined jointly.
fn refine(adj: &[Vec<usize>], colors: &mut Vec<usize>) {
    let n = adj.len();
    if n == 0 {
        return;
    }
    let mut distinct = colors.iter().copied().max().unwrap_or(0) + 1;
    loop {
        let mut signatures: Vec<(usize, Vec<usize>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut neigh: Vec<usize> = adj[v].iter().map(|&u| colors[u]).collect();
            neigh.sort_unstable();
            signatures.push((colors[v], neigh));
        }
        let mut sorted: Vec<&(usize, Vec<usize>)> = signatures.iter().collect();
        sorted.sort();
        sorted.dedup();
        let rank: HashMap<&(usize, Vec<usize>), usize> =
            sorted.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let next: Vec<usize> = signatures.iter().map(|s| rank[s]).collect();
        let next_distinct = sorted.len();
        *colors = next;
        if next_distinct == distinct {
            return;
        }
        distinct = next_distinct;
    }
}

/// Initial vertex colours from relation incidence profiles: for every
/// relation and argument position, how many tuples hold the vertex there.
fn initial_colors(s: &FinStructure) -> Vec<usize> {
    let profiles = initial_profiles_raw(s);
    let mut sorted: Vec<&Vec<usize>> = profiles.iter().collect();
    sorted.sort();
    sorted.dedup();
    let rank: HashMap<&Vec<usize>, usize> =
        sorted.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    profiles.iter().map(|p| rank[p]).collect()
}

/// Stable colours of `a` and `b` refined jointly, so ids are comparable
/// across the two structures.
fn joint_colors(a: &FinStructure, b: &FinStructure) -> (Vec<usize>, Vec<usize>) {
    let adj_a = a.gaifman_adjacency();
    let adj_b = b.gaifman_adjacency();
    let mut adj = adj_a;
    adj.extend(
        adj_b
            .into_iter()
            .map(|list| list.into_iter().map(|v| v + a.size()).collect()),
    );
    // initial profiles must also be ranked jointly
    let mut profiles = Vec::with_capacity(a.size() + b.size());
    {
        let pa = initial_profiles_raw(a);
        let pb = initial_profiles_raw(b);
        profiles.extend(pa);
        profiles.extend(pb);
    }
    let mut sorted: Vec<&Vec<usize>> = profiles.iter().collect();
    sorted.sort();
    sorted.dedup();
    let rank: HashMap<&Vec<usize>, usize> =
        sorted.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let mut colors: Vec<usize> = profiles.iter().map(|p| rank[p]).collect();
    refine(&adj, &mut colors);
    let colors_b = colors.split_off(a.size());
    (colors, colors_b)
}

fn initial_profiles_raw(s: &FinStructure) -> Vec<Vec<usize>> {
    let mut profiles: Vec<Vec<usize>> = vec![Vec::new(); s.size()];
    for rel in 0..s.relation_count() {
        let arity = s.sig().arity(rel);
        for p in profiles.iter_mut() {
            p.extend(std::iter::repeat_n(0, arity));
        }
        let offset = profiles.first().map_or(0, |p| p.len() - arity);
        for t in s.tuples(rel) {
            for (pos, &x) in t.iter().enumerate() {
                profiles[x][offset + pos] += 1;
            }
        }
    }
    profiles
}

fn histogram(colors: &[usize]) -> Vec<(usize, usize)> {
    let mut h: HashMap<usize, usize> = HashMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    let mut v: Vec<_> = h.into_iter().collect();
    v.sort_unstable();
    v
}

struct IsoSearch {
    order: Vec<usize>,
    ca: Vec<usize>,
    cb: Vec<usize>,
    adj_a: Vec<Vec<usize>>,
    adj_mat_b: Vec<Vec<bool>>,
}

impl IsoSearch {
    fn extend(&self, depth: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        'cand: for w in 0..self.cb.len() {
            if used[w] || self.cb[w] != self.ca[v] {
                continue;
            }
            // Gaifman adjacency must match exactly on the assigned prefix
            for &u in &self.adj_a[v] {
                if map[u] != usize::MAX && !self.adj_mat_b[w][map[u]] {
                    continue 'cand;
                }
            }
            let w_deg = self.adj_mat_b[w].iter().filter(|&&x| x).count();
            if w_deg != self.adj_a[v].len() {
                continue;
            }
            // non-neighbours of v must not map to neighbours of w
            let mut ok = true;
            for u in 0..map.len() {
                if map[u] != usize::MAX && self.adj_mat_b[w][map[u]] && !self.adj_a[v].contains(&u)
                {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if self.extend(depth + 1, map, used) {
                return true;
            }
            map[v] = usize::MAX;
            used[w] = false;
        }
        false
    }
}

/// Backtracking isomorphism search between two connected structures of equal
/// size and tuple counts. Returns the vertex bijection `a -> b` if one exists.
fn iso_connected(a: &FinStructure, b: &FinStructure) -> Option<Vec<usize>> {
    let n = a.size();
    if n != b.size() {
        return None;
    }
    if n == 0 {
        return Some(Vec::new());
    }
    let (ca, cb) = joint_colors(a, b);
    if histogram(&ca) != histogram(&cb) {
        return None;
    }
    let adj_a = a.gaifman_adjacency();
    let adj_b = b.gaifman_adjacency();
    let adj_mat_b: Vec<Vec<bool>> = {
        let mut m = vec![vec![false; n]; n];
        for (u, list) in adj_b.iter().enumerate() {
            for &v in list {
                m[u][v] = true;
            }
        }
        m
    };

    // assign most-constrained colour classes first
    let mut class_size: HashMap<usize, usize> = HashMap::new();
    for &c in &ca {
        *class_size.entry(c).or_insert(0) += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (class_size[&ca[v]], ca[v], v));

    let search = IsoSearch {
        order,
        ca,
        cb,
        adj_a,
        adj_mat_b,
    };
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if !search.extend(0, &mut map, &mut used) {
        return None;
    }
    // the Gaifman bijection must also preserve every relation exactly
    let mut image = Vec::new();
    for rel in 0..a.relation_count() {
        if a.tuples(rel).len() != b.tuples(rel).len() {
            return None;
        }
        for t in a.tuples(rel) {
            image.clear();
            image.extend(t.iter().map(|&x| map[x]));
            if !b.has_tuple(rel, &image) {
                return None;
            }
        }
    }
    Some(map)
}

/// Search for an isomorphism witness between two structures of the same
/// signature. The witness is a bijective homomorphism whose inverse is also a
/// homomorphism.
pub fn is_isomorphic(a: &FinStructure, b: &FinStructure) -> Result<Option<Homomorphism>> {
    if a.sig() != b.sig() {
        return Err(Error::SignatureMismatch(
            "isomorphism testing needs equal signatures".into(),
        ));
    }
    if a.size() != b.size() {
        return Ok(None);
    }
    for rel in 0..a.relation_count() {
        if a.tuples(rel).len() != b.tuples(rel).len() {
            return Ok(None);
        }
    }
    let dec_a = components(a);
    let dec_b = components(b);
    if dec_a.components.len() != dec_b.components.len() {
        return Ok(None);
    }
    let m = dec_a.components.len();

    // (b component index, vertex map comp_a -> comp_b) for each a component
    let mut pair_maps: Vec<(usize, Vec<usize>)> = Vec::with_capacity(m);
    if a.sig().is_graph() {
        // group components by exact canonical class, then pair classes off
        type CanonClasses = HashMap<(usize, Vec<u64>), Vec<(usize, Vec<usize>)>>;
        let mut classes_b: CanonClasses = HashMap::new();
        for (j, comp) in dec_b.components.iter().enumerate() {
            let (rows, order) = canonical_search(comp);
            classes_b
                .entry((comp.size(), rows))
                .or_default()
                .push((j, order));
        }
        for comp_a in &dec_a.components {
            let (rows, order_a) = canonical_search(comp_a);
            let Some(bucket) = classes_b.get_mut(&(comp_a.size(), rows)) else {
                return Ok(None);
            };
            let Some((j, order_b)) = bucket.pop() else {
                return Ok(None);
            };
            // both orderings relabel onto the same canonical graph
            let mut relabel_a = vec![0usize; comp_a.size()];
            for (new, &old) in order_a.iter().enumerate() {
                relabel_a[old] = new;
            }
            let map: Vec<usize> = relabel_a.iter().map(|&c| order_b[c]).collect();
            pair_maps.push((j, map));
        }
    } else {
        let mut matched_b = vec![false; m];
        for comp_a in &dec_a.components {
            let mut found = None;
            for (j, comp_b) in dec_b.components.iter().enumerate() {
                if matched_b[j] || comp_a.size() != comp_b.size() {
                    continue;
                }
                if let Some(map) = iso_connected(comp_a, comp_b) {
                    found = Some((j, map));
                    break;
                }
            }
            match found {
                Some((j, map)) => {
                    matched_b[j] = true;
                    pair_maps.push((j, map));
                }
                None => return Ok(None),
            }
        }
    }

    let mut global = vec![0usize; a.size()];
    for v in 0..a.size() {
        let (ci, local) = dec_a.witness[v];
        let (bj, ref map) = pair_maps[ci];
        global[v] = dec_b.inclusions[bj].apply(map[local]);
    }
    let witness = Homomorphism::from_parts_unchecked(a.clone(), b.clone(), global);
    debug_assert!(witness.is_valid());
    debug_assert!(witness.inverse().is_some_and(|inv| inv.is_valid()));
    Ok(Some(witness))
}

/// Canonical form search state for graphs.
struct CanonSearch<'a> {
    adj: &'a [Vec<bool>],
    colors: &'a [usize],
    n: usize,
    best: Option<Vec<u64>>,
    best_order: Vec<usize>,
}

impl CanonSearch<'_> {
    fn run(&mut self) {
        let mut order = Vec::with_capacity(self.n);
        let mut rows = Vec::with_capacity(self.n);
        let mut remaining: Vec<usize> = (0..self.n).collect();
        self.step(&mut order, &mut rows, &mut remaining, true);
    }

    fn step(
        &mut self,
        order: &mut Vec<usize>,
        rows: &mut Vec<u64>,
        remaining: &mut Vec<usize>,
        tight: bool,
    ) {
        if remaining.is_empty() {
            if self
                .best
                .as_ref()
                .is_none_or(|b| rows.as_slice() < b.as_slice())
            {
                self.best = Some(rows.clone());
                self.best_order = order.clone();
            }
            return;
        }
        // candidates: the minimal refinement colour among remaining vertices
        let min_color = remaining.iter().map(|&v| self.colors[v]).min().unwrap();
        let depth = order.len();
        let candidates: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&v| self.colors[v] == min_color)
            .collect();
        for v in candidates {
            let mut row = 0u64;
            for (i, &u) in order.iter().enumerate() {
                if self.adj[v][u] {
                    row |= 1 << i;
                }
            }
            let mut child_tight = tight;
            if tight {
                if let Some(best) = &self.best {
                    match row.cmp(&best[depth]) {
                        std::cmp::Ordering::Greater => continue,
                        std::cmp::Ordering::Less => child_tight = false,
                        std::cmp::Ordering::Equal => {}
                    }
                }
            }
            order.push(v);
            rows.push(row);
            let pos = remaining.iter().position(|&u| u == v).unwrap();
            remaining.swap_remove(pos);
            self.step(order, rows, remaining, child_tight);
            remaining.push(v);
            let last = remaining.len() - 1;
            remaining.swap(pos, last);
            rows.pop();
            order.pop();
        }
    }
}

fn canonical_search(g: &FinStructure) -> (Vec<u64>, Vec<usize>) {
    assert!(g.sig().is_graph(), "canonical forms are graph-mode only");
    assert!(g.size() <= 64, "canonical form limited to 64 vertices");
    let n = g.size();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut colors = initial_colors(g);
    let adj_lists = g.gaifman_adjacency();
    refine(&adj_lists, &mut colors);
    let mut adj = vec![vec![false; n]; n];
    for (u, list) in adj_lists.iter().enumerate() {
        for &v in list {
            adj[u][v] = true;
        }
    }
    let mut search = CanonSearch {
        adj: &adj,
        colors: &colors,
        n,
        best: None,
        best_order: Vec::new(),
    };
    search.run();
    (search.best.unwrap(), search.best_order)
}

/// A canonical relabelling of a graph: isomorphic graphs yield identical
/// results. Also returns the relabelling (old vertex -> new vertex).
pub fn canonical_graph(g: &FinStructure) -> (FinStructure, Vec<usize>) {
    let (_, order) = canonical_search(g);
    let mut relabel = vec![0usize; g.size()];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new;
    }
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (relabel[u], relabel[v]))
        .collect();
    let canon = FinStructure::graph(g.size(), &edges).expect("relabelling preserves validity");
    (canon, relabel)
}

/// A compact canonical key `(size, packed adjacency rows)` for hashing and
/// deduplication of graphs.
pub fn canonical_key(g: &FinStructure) -> (usize, Vec<u64>) {
    let (rows, _) = canonical_search(g);
    (g.size(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::coproduct;
    use crate::structures::Signature;

    #[test]
    fn relabelled_cycle_is_isomorphic() {
        let c6 = FinStructure::cycle(6);
        // relabel by the permutation v -> 5 - v
        let edges: Vec<(usize, usize)> = c6.edges().iter().map(|&(u, v)| (5 - u, 5 - v)).collect();
        let relabelled = FinStructure::graph(6, &edges).unwrap();
        let w = is_isomorphic(&c6, &relabelled).unwrap().unwrap();
        assert!(w.is_valid());
        assert!(w.inverse().unwrap().is_valid());
    }

    #[test]
    fn c6_vs_two_triangles() {
        let c6 = FinStructure::cycle(6);
        let k3 = FinStructure::complete(3);
        let (two, _) = coproduct(&Signature::graph(), &[k3.clone(), k3]).unwrap();
        assert!(is_isomorphic(&c6, &two).unwrap().is_none());
    }

    #[test]
    fn star_vs_c4_plus_k1() {
        let star = FinStructure::star(4);
        let (other, _) = coproduct(
            &Signature::graph(),
            &[FinStructure::cycle(4), FinStructure::edgeless(1)],
        )
        .unwrap();
        assert!(is_isomorphic(&star, &other).unwrap().is_none());
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let g = FinStructure::complete(2);
        let sig = Signature::relational(vec![("R".into(), 2)]).unwrap();
        let s = FinStructure::new(sig, 2, vec![vec![vec![0, 1]]]).unwrap();
        assert!(is_isomorphic(&g, &s).is_err());
    }

    #[test]
    fn canonical_form_is_iso_invariant() {
        let p4 = FinStructure::path(4);
        let shuffled = FinStructure::graph(4, &[(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(canonical_key(&p4), canonical_key(&shuffled));
        assert_eq!(canonical_graph(&p4).0, canonical_graph(&shuffled).0);
        assert_ne!(canonical_key(&p4), canonical_key(&FinStructure::star(3)));
    }

    #[test]
    fn tuple_orientation_is_respected() {
        let sig = Signature::relational(vec![("R".into(), 2)]).unwrap();
        // a single directed pair flips under the swap
        let fwd = FinStructure::new(sig.clone(), 2, vec![vec![vec![0, 1]]]).unwrap();
        let bwd = FinStructure::new(sig.clone(), 2, vec![vec![vec![1, 0]]]).unwrap();
        let w = is_isomorphic(&fwd, &bwd).unwrap().unwrap();
        assert_eq!(w.map(), &[1, 0]);
        // a directed path and an out-star share the Gaifman graph and the
        // tuple count but are not isomorphic
        let path = FinStructure::new(sig.clone(), 3, vec![vec![vec![0, 1], vec![1, 2]]]).unwrap();
        let star = FinStructure::new(sig, 3, vec![vec![vec![1, 0], vec![1, 2]]]).unwrap();
        assert_eq!(path.gaifman(), star.gaifman());
        assert!(is_isomorphic(&path, &star).unwrap().is_none());
    }

    #[test]
    fn iso_works_on_relational_structures() {
        let sig = Signature::relational(vec![("R".into(), 3)]).unwrap();
        let s1 = FinStructure::new(sig.clone(), 3, vec![vec![vec![0, 1, 2]]]).unwrap();
        let s2 = FinStructure::new(sig.clone(), 3, vec![vec![vec![2, 0, 1]]]).unwrap();
        let w = is_isomorphic(&s1, &s2).unwrap().unwrap();
        assert_eq!(w.map(), &[2, 0, 1]);
        // cyclic vs reversed ternary tuple: still isomorphic via relabelling
        let s3 = FinStructure::new(sig, 3, vec![vec![vec![0, 1, 2], vec![2, 1, 0]]]).unwrap();
        assert!(is_isomorphic(&s1, &s3).unwrap().is_none());
    }

    #[test]
    fn iso_is_equivalence_on_small_graphs() {
        // reflexivity and symmetry spot checks on a few graphs
        let graphs = [
            FinStructure::edgeless(3),
            FinStructure::path(4),
            FinStructure::cycle(4),
            FinStructure::star(3),
        ];
        for g in &graphs {
            assert!(is_isomorphic(g, g).unwrap().is_some());
        }
        for a in &graphs {
            for b in &graphs {
                let ab = is_isomorphic(a, b).unwrap().is_some();
                let ba = is_isomorphic(b, a).unwrap().is_some();
                assert_eq!(ab, ba);
            }
        }
    }
}
