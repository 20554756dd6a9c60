//! Maximum bipartite matching (Hopcroft–Karp), also in a capacitated form
//! where a right node may absorb several left nodes.

use std::collections::VecDeque;

/// A bipartite graph with `left` and `right` nodes indexed from zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BipartiteGraph {
    right: usize,
    adj: Vec<Vec<u32>>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize) -> Self {
        BipartiteGraph {
            right,
            adj: vec![Vec::new(); left],
        }
    }

    pub fn add_edge(&mut self, l: usize, r: usize) {
        assert!(r < self.right, "right node {r} out of range");
        self.adj[l].push(r as u32);
    }

    pub fn left_count(&self) -> usize {
        self.adj.len()
    }

    pub fn right_count(&self) -> usize {
        self.right
    }

    pub fn neighbors(&self, l: usize) -> &[u32] {
        &self.adj[l]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }
}

/// Cardinality of a maximum matching.
pub fn max_bipartite_matching(g: &BipartiteGraph) -> usize {
    capacitated_matching(&g.adj, &vec![1; g.right])
}

const INF: u32 = u32::MAX;

/// Size of a maximum assignment of left nodes to right nodes where right
/// node `r` takes at most `caps[r]` left nodes. Equivalent to ordinary
/// matching after splitting each right node into `caps[r]` copies.
pub(crate) fn capacitated_matching(adj: &[Vec<u32>], caps: &[usize]) -> usize {
    let n = adj.len();
    let mut mate: Vec<u32> = vec![INF; n];
    let mut holders: Vec<Vec<u32>> = vec![Vec::new(); caps.len()];
    let mut dist = vec![INF; n];
    let mut size = 0;

    loop {
        // BFS layers from free left nodes; stop at the first layer that
        // reaches a right node with spare capacity.
        let mut queue = VecDeque::new();
        for l in 0..n {
            if mate[l] == INF {
                dist[l] = 0;
                queue.push_back(l as u32);
            } else {
                dist[l] = INF;
            }
        }
        let mut found = INF;
        while let Some(l) = queue.pop_front() {
            let dl = dist[l as usize];
            if dl >= found {
                continue;
            }
            for &r in &adj[l as usize] {
                let r = r as usize;
                if holders[r].len() < caps[r] {
                    found = found.min(dl + 1);
                } else {
                    for &l2 in &holders[r] {
                        if dist[l2 as usize] == INF {
                            dist[l2 as usize] = dl + 1;
                            queue.push_back(l2);
                        }
                    }
                }
            }
        }
        if found == INF {
            return size;
        }

        let mut next_edge = vec![0usize; n];
        for l in 0..n {
            if mate[l] == INF && augment(l, adj, caps, &mut mate, &mut holders, &mut dist, &mut next_edge, found) {
                size += 1;
            }
        }
    }
}

/// Iterative layered DFS for one augmenting path starting at free `start`.
#[allow(clippy::too_many_arguments)]
fn augment(
    start: usize,
    adj: &[Vec<u32>],
    caps: &[usize],
    mate: &mut [u32],
    holders: &mut [Vec<u32>],
    dist: &mut [u32],
    next_edge: &mut [usize],
    limit: u32,
) -> bool {
    // Path as (left node, right node it moves to).
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut l = start;
    loop {
        let mut advanced = false;
        while next_edge[l] < adj[l].len() {
            let r = adj[l][next_edge[l]] as usize;
            if holders[r].len() < caps[r] {
                if dist[l] + 1 == limit {
                    stack.push((l, r));
                    apply(&stack, mate, holders);
                    return true;
                }
                next_edge[l] += 1;
                continue;
            }
            // Holders that dead-end get their distance cleared, so retrying
            // the same edge moves on to the next holder.
            let next = holders[r]
                .iter()
                .copied()
                .find(|&l2| dist[l2 as usize] == dist[l] + 1);
            if let Some(l2) = next {
                stack.push((l, r));
                l = l2 as usize;
                advanced = true;
                break;
            }
            next_edge[l] += 1;
        }
        if !advanced {
            dist[l] = INF;
            match stack.pop() {
                Some((prev, _)) => l = prev,
                None => return false,
            }
        }
    }
}

fn apply(path: &[(usize, usize)], mate: &mut [u32], holders: &mut [Vec<u32>]) {
    // Walk backwards so that each right node first gains its new holder and
    // then releases the one that moves on.
    for &(l, r) in path.iter().rev() {
        let old = mate[l];
        if old != INF {
            let h = &mut holders[old as usize];
            let pos = h.iter().position(|&x| x as usize == l).expect("holder present");
            h.swap_remove(pos);
        }
        mate[l] = r as u32;
        holders[r].push(l as u32);
    }
}
