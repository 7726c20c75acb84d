//! Simple-path enumeration: iterative-deepening DFS that yields shorter
//! paths first.
//!
//! Paths are produced in non-decreasing hop-count order; among paths of
//! equal length the order is lexicographic by node-id sequence, which
//! makes first-fit placement deterministic. A path of exact length `d`
//! is emitted only during the depth-`d` iteration, so each path appears
//! exactly once. The DFS prunes any branch that cannot reach the
//! destination within the remaining hop budget (precomputed BFS
//! distances), which keeps the fat-tree case polynomial instead of
//! exploring the full factorial path space.

use super::{NodeId, Path, Topology, TopologyError};

/// Enumerate every acyclic path from `source` to `dest` with at most
/// `max_hops` links, lazily.
pub fn simple_paths<'a>(
    topo: &'a Topology,
    source: NodeId,
    dest: NodeId,
    max_hops: usize,
) -> Result<SimplePaths<'a>, TopologyError> {
    if source == dest {
        return Err(TopologyError::SameEndpoints);
    }
    for &n in &[source, dest] {
        if n.index() >= topo.node_count() {
            return Err(TopologyError::NoSuchNode(n));
        }
    }
    let dist_to_dest = topo.hop_distances_to(dest);
    Ok(SimplePaths {
        topo,
        source,
        dest,
        max_hops,
        dist_to_dest,
        depth: 0,
        stack: Vec::new(),
        on_path: vec![false; topo.node_count()],
        nodes: Vec::new(),
        links: Vec::new(),
        exhausted: false,
    })
}

/// Lazy iterator over simple paths; see [`simple_paths`].
pub struct SimplePaths<'a> {
    topo: &'a Topology,
    source: NodeId,
    dest: NodeId,
    max_hops: usize,
    dist_to_dest: Vec<u32>,
    /// Current target depth of the deepening loop (exact path length).
    depth: usize,
    /// DFS frames: index of the next neighbor to try at each level.
    stack: Vec<usize>,
    on_path: Vec<bool>,
    nodes: Vec<NodeId>,
    links: Vec<super::LinkId>,
    exhausted: bool,
}

impl<'a> SimplePaths<'a> {
    fn start_depth(&mut self, depth: usize) {
        self.depth = depth;
        for v in self.on_path.iter_mut() {
            *v = false;
        }
        self.nodes.clear();
        self.links.clear();
        self.nodes.push(self.source);
        self.on_path[self.source.index()] = true;
        self.stack.clear();
        self.stack.push(0);
    }

    /// True when `node` can still reach the destination within the
    /// remaining hop budget of the current iteration.
    fn feasible(&self, node: NodeId, hops_used: usize) -> bool {
        let d = self.dist_to_dest[node.index()];
        d != u32::MAX && hops_used + d as usize <= self.depth
    }

    /// Runs the DFS for the current depth until the next exact-length
    /// path is found or the iteration is exhausted.
    fn advance(&mut self) -> Option<Path> {
        while let Some(next_idx) = self.stack.last_mut() {
            let here = *self.nodes.last().unwrap();
            let hops = self.nodes.len() - 1;
            // A completed prefix of target length either ends at the
            // destination (already yielded) or is a dead end.
            if hops == self.depth || here == self.dest {
                self.pop_frame();
                continue;
            }
            let row = self.topo.neighbors(here);
            if *next_idx >= row.len() {
                self.pop_frame();
                continue;
            }
            let (nbr, link) = row[*next_idx];
            *next_idx += 1;
            if self.on_path[nbr.index()] {
                continue;
            }
            if !self.feasible(nbr, hops + 1) {
                continue;
            }
            self.nodes.push(nbr);
            self.links.push(link);
            self.on_path[nbr.index()] = true;
            self.stack.push(0);
            if nbr == self.dest && self.nodes.len() - 1 == self.depth {
                return Some(Path::from_parts(self.nodes.clone(), self.links.clone()));
            }
        }
        None
    }

    fn pop_frame(&mut self) {
        self.stack.pop();
        if let Some(n) = self.nodes.pop() {
            self.on_path[n.index()] = false;
        }
        self.links.pop();
    }
}

impl<'a> Iterator for SimplePaths<'a> {
    type Item = Path;

    fn next(&mut self) -> Option<Path> {
        if self.exhausted {
            return None;
        }
        loop {
            if self.stack.is_empty() {
                // Next deepening iteration, or done. No path can be
                // shorter than the BFS distance, so start there.
                let dist = self.dist_to_dest[self.source.index()];
                if dist == u32::MAX {
                    self.exhausted = true;
                    return None;
                }
                let next = if self.depth == 0 {
                    dist as usize
                } else {
                    self.depth + 1
                };
                if next > self.max_hops {
                    self.exhausted = true;
                    return None;
                }
                self.start_depth(next);
            }
            if let Some(p) = self.advance() {
                return Some(p);
            }
        }
    }
}
