//! Network graph model: switches, hosts, capacitated links and paths.
//!
//! A [`Topology`] is immutable after construction except for per-link
//! dynamic state (reservations, measured utilization, counters, queue
//! depth), which only the controller event thread mutates. Every
//! physical link is stored as a pair of directed half-links with
//! independent counters; the reverse direction of link `2i` is `2i+1`.

use std::collections::HashMap;

use thiserror::Error;

mod fat_tree;
mod format;
mod paths;

pub use fat_tree::{generate_fat_tree, FatTree};
pub use paths::{simple_paths, SimplePaths};

/// Errors raised while building, parsing or querying topologies.
#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("link references unknown node `{0}`")]
    UnknownNode(String),
    #[error("self-loop link on `{0}`")]
    SelfLoop(String),
    #[error("link {0} -> {1} has non-positive capacity")]
    BadCapacity(String, String),
    #[error("host `{0}` must have exactly one attached link, found {1}")]
    HostDegree(String, usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("topology has no nodes")]
    Empty,
    #[error("fat-tree parameter k={0} must be even and >= 2")]
    BadFatTreeK(u32),
    #[error("path is empty")]
    EmptyPath,
    #[error("nodes {0:?} and {1:?} are not adjacent")]
    NotAdjacent(NodeId, NodeId),
    #[error("path repeats node {0:?}")]
    RepeatedNode(NodeId),
    #[error("source and destination are the same node")]
    SameEndpoints,
    #[error("unknown node id {0:?}")]
    NoSuchNode(NodeId),
}

/// Index of a node within its topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Index of a directed half-link within its topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkId(pub u32);

impl LinkId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The opposite direction of the same physical link.
    pub fn reverse(self) -> LinkId {
        LinkId(self.0 ^ 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Switch,
    Host,
}

#[derive(Debug, Clone)]
pub struct Node {
    pub id: NodeId,
    pub name: String,
    pub kind: NodeKind,
}

/// One direction of a physical link.
///
/// `capacity` and `prop_delay` are static; the remaining fields are
/// dynamic state owned by the controller thread: `reserved` tracks the
/// sum of admitted minimum-rate demands, `measured_utilization` is the
/// monitor's latest estimate of carried load, `queued_bytes` is the
/// simulated queue backlog, and the counters accumulate fluid traffic.
#[derive(Debug, Clone)]
pub struct Link {
    pub id: LinkId,
    pub from: NodeId,
    pub to: NodeId,
    /// Capacity in bits/second.
    pub capacity: f64,
    /// Propagation delay in seconds.
    pub prop_delay: f64,
    /// Sum of admitted minimum-rate demands, bits/second.
    pub reserved: f64,
    /// Monitor's latest utilization estimate, bits/second.
    pub measured_utilization: f64,
    /// Simulated queue backlog in bytes.
    pub queued_bytes: f64,
    tx_bytes: f64,
    dropped_packets: f64,
    forwarded_packets: f64,
}

impl Link {
    fn new(id: LinkId, from: NodeId, to: NodeId, capacity: f64, prop_delay: f64) -> Self {
        Link {
            id,
            from,
            to,
            capacity,
            prop_delay,
            reserved: 0.0,
            measured_utilization: 0.0,
            queued_bytes: 0.0,
            tx_bytes: 0.0,
            dropped_packets: 0.0,
            forwarded_packets: 0.0,
        }
    }

    /// Transmitted bytes since the start of the run (monotone).
    pub fn tx_bytes(&self) -> u64 {
        self.tx_bytes as u64
    }

    /// Dropped packets since the start of the run (monotone).
    pub fn dropped_packets(&self) -> u64 {
        self.dropped_packets as u64
    }

    /// Forwarded packets since the start of the run (monotone).
    pub fn forwarded_packets(&self) -> u64 {
        self.forwarded_packets as u64
    }

    /// Utilization the admission logic must assume: the larger of what
    /// the monitor measured and what has been promised to reservations,
    /// so admission is not fooled by flows that have not started yet.
    pub fn effective_utilization(&self) -> f64 {
        self.reserved.max(self.measured_utilization)
    }

    pub(crate) fn account(&mut self, forwarded_bits: f64, dropped_bits: f64, packet_bytes: f64) {
        let fwd_bytes = forwarded_bits / 8.0;
        let drop_bytes = dropped_bits / 8.0;
        self.tx_bytes += fwd_bytes;
        self.forwarded_packets += fwd_bytes / packet_bytes;
        self.dropped_packets += drop_bytes / packet_bytes;
    }
}

/// An acyclic node sequence with its derived link sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    nodes: Vec<NodeId>,
    links: Vec<LinkId>,
}

impl Path {
    /// Builds a path from a node sequence, validating adjacency and
    /// acyclicity against the topology.
    pub fn new(topo: &Topology, nodes: Vec<NodeId>) -> Result<Path, TopologyError> {
        if nodes.is_empty() {
            return Err(TopologyError::EmptyPath);
        }
        let mut seen = vec![false; topo.node_count()];
        for &n in &nodes {
            if n.index() >= topo.node_count() {
                return Err(TopologyError::NoSuchNode(n));
            }
            if seen[n.index()] {
                return Err(TopologyError::RepeatedNode(n));
            }
            seen[n.index()] = true;
        }
        let mut links = Vec::with_capacity(nodes.len().saturating_sub(1));
        for pair in nodes.windows(2) {
            let link = topo
                .link_between(pair[0], pair[1])
                .ok_or(TopologyError::NotAdjacent(pair[0], pair[1]))?;
            links.push(link);
        }
        Ok(Path { nodes, links })
    }

    pub(crate) fn from_parts(nodes: Vec<NodeId>, links: Vec<LinkId>) -> Path {
        Path { nodes, links }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn links(&self) -> &[LinkId] {
        &self.links
    }

    /// Number of links traversed.
    pub fn hops(&self) -> usize {
        self.links.len()
    }

    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn dest(&self) -> NodeId {
        *self.nodes.last().unwrap()
    }

    /// Human-readable `a-b-c` form using node names.
    pub fn display(&self, topo: &Topology) -> String {
        self.nodes
            .iter()
            .map(|&n| topo.node(n).name.as_str())
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// The network graph: nodes, directed half-links and adjacency.
#[derive(Debug, Clone)]
pub struct Topology {
    nodes: Vec<Node>,
    links: Vec<Link>,
    /// Per node, outgoing (neighbor, link) sorted by neighbor id.
    adj: Vec<Vec<(NodeId, LinkId)>>,
    by_name: HashMap<String, NodeId>,
    diameter: usize,
}

impl Topology {
    pub fn builder() -> TopologyBuilder {
        TopologyBuilder::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of directed half-links (twice the physical link count).
    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id.index()]
    }

    pub fn link_mut(&mut self, id: LinkId) -> &mut Link {
        &mut self.links[id.index()]
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.by_name.get(name).copied()
    }

    /// Outgoing neighbors of `n`, sorted by neighbor id.
    pub fn neighbors(&self, n: NodeId) -> &[(NodeId, LinkId)] {
        &self.adj[n.index()]
    }

    /// The directed link from `a` to `b`, if adjacent.
    pub fn link_between(&self, a: NodeId, b: NodeId) -> Option<LinkId> {
        let row = &self.adj[a.index()];
        row.binary_search_by_key(&b, |&(n, _)| n)
            .ok()
            .map(|i| row[i].1)
    }

    pub fn hosts(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Host)
    }

    pub fn switches(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Switch)
    }

    /// Longest shortest-path hop count over all node pairs.
    pub fn diameter(&self) -> usize {
        self.diameter
    }

    /// Default search depth for path enumeration: one more than the
    /// diameter, so every shortest path is reachable without opening
    /// the door to factorial blowup.
    pub fn default_max_hops(&self) -> usize {
        self.diameter + 1
    }

    /// Clears all dynamic link state (reservations, counters, queues).
    pub fn reset_dynamic_state(&mut self) {
        for l in &mut self.links {
            l.reserved = 0.0;
            l.measured_utilization = 0.0;
            l.queued_bytes = 0.0;
            l.tx_bytes = 0.0;
            l.dropped_packets = 0.0;
            l.forwarded_packets = 0.0;
        }
    }

    /// Minimum residual capacity along `path`: for every link,
    /// `capacity - max(reserved, measured_utilization)`, clamped at 0.
    pub fn residual_capacity(&self, path: &Path) -> Result<f64, TopologyError> {
        if path.links().is_empty() {
            return Err(TopologyError::EmptyPath);
        }
        let mut min = f64::INFINITY;
        for &l in path.links() {
            let link = self.link(l);
            let residual = (link.capacity - link.effective_utilization()).max(0.0);
            min = min.min(residual);
        }
        Ok(min)
    }

    fn bfs_ecc(&self, start: NodeId, dist: &mut [u32]) -> u32 {
        dist.fill(u32::MAX);
        dist[start.index()] = 0;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(start);
        let mut ecc = 0;
        while let Some(u) = queue.pop_front() {
            let d = dist[u.index()];
            ecc = ecc.max(d);
            for &(v, _) in self.neighbors(u) {
                if dist[v.index()] == u32::MAX {
                    dist[v.index()] = d + 1;
                    queue.push_back(v);
                }
            }
        }
        ecc
    }

    /// Hop distances from every node to `target` (BFS on the reversed
    /// graph; links come in symmetric pairs so forward adjacency works).
    pub(crate) fn hop_distances_to(&self, target: NodeId) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.node_count()];
        self.bfs_ecc(target, &mut dist);
        dist
    }
}

#[derive(Default)]
pub struct TopologyBuilder {
    nodes: Vec<Node>,
    // (from, to, capacity, delay) — one entry per physical link.
    raw_links: Vec<(NodeId, NodeId, f64, f64)>,
    by_name: HashMap<String, NodeId>,
    diameter_hint: Option<usize>,
    dup: Option<String>,
}

impl TopologyBuilder {
    pub fn add_node(&mut self, name: &str, kind: NodeKind) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        if self.by_name.insert(name.to_string(), id).is_some() {
            self.dup.get_or_insert_with(|| name.to_string());
        }
        self.nodes.push(Node {
            id,
            name: name.to_string(),
            kind,
        });
        id
    }

    pub fn add_switch(&mut self, name: &str) -> NodeId {
        self.add_node(name, NodeKind::Switch)
    }

    pub fn add_host(&mut self, name: &str) -> NodeId {
        self.add_node(name, NodeKind::Host)
    }

    /// Adds a bidirectional link (two half-links with independent state).
    pub fn add_link(&mut self, a: NodeId, b: NodeId, capacity: f64, prop_delay: f64) {
        self.raw_links.push((a, b, capacity, prop_delay));
    }

    /// Skips the all-pairs BFS at build time for generated topologies
    /// whose diameter is known in closed form.
    pub fn diameter_hint(&mut self, hops: usize) {
        self.diameter_hint = Some(hops);
    }

    pub fn build(self) -> Result<Topology, TopologyError> {
        if self.nodes.is_empty() {
            return Err(TopologyError::Empty);
        }
        if let Some(name) = self.dup {
            return Err(TopologyError::DuplicateNode(name));
        }
        let n = self.nodes.len();
        let mut links = Vec::with_capacity(self.raw_links.len() * 2);
        let mut adj: Vec<Vec<(NodeId, LinkId)>> = vec![Vec::new(); n];
        for &(a, b, capacity, delay) in &self.raw_links {
            for &end in &[a, b] {
                if end.index() >= n {
                    return Err(TopologyError::NoSuchNode(end));
                }
            }
            if a == b {
                return Err(TopologyError::SelfLoop(self.nodes[a.index()].name.clone()));
            }
            if capacity <= 0.0 {
                return Err(TopologyError::BadCapacity(
                    self.nodes[a.index()].name.clone(),
                    self.nodes[b.index()].name.clone(),
                ));
            }
            let fwd = LinkId(links.len() as u32);
            links.push(Link::new(fwd, a, b, capacity, delay));
            let rev = LinkId(links.len() as u32);
            links.push(Link::new(rev, b, a, capacity, delay));
            adj[a.index()].push((b, fwd));
            adj[b.index()].push((a, rev));
        }
        for row in &mut adj {
            row.sort_by_key(|&(n, _)| n);
        }
        for node in &self.nodes {
            if node.kind == NodeKind::Host {
                let degree = adj[node.id.index()].len();
                if degree != 1 {
                    return Err(TopologyError::HostDegree(node.name.clone(), degree));
                }
            }
        }
        let mut topo = Topology {
            nodes: self.nodes,
            links,
            adj,
            by_name: self.by_name,
            diameter: 0,
        };
        // Connectivity check doubles as the first eccentricity sample.
        let mut dist = vec![u32::MAX; n];
        topo.bfs_ecc(NodeId(0), &mut dist);
        if dist.iter().any(|&d| d == u32::MAX) {
            return Err(TopologyError::Disconnected);
        }
        topo.diameter = match self.diameter_hint {
            Some(d) => d,
            None => {
                let mut ecc = 0;
                for i in 0..n {
                    ecc = ecc.max(topo.bfs_ecc(NodeId(i as u32), &mut dist));
                }
                ecc as usize
            }
        };
        Ok(topo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Topology {
        let mut b = Topology::builder();
        let a = b.add_switch("a");
        let c = b.add_switch("b");
        let d = b.add_switch("c");
        b.add_link(a, c, 10e6, 0.001);
        b.add_link(c, d, 10e6, 0.001);
        b.add_link(a, d, 10e6, 0.001);
        b.build().unwrap()
    }

    #[test]
    fn minimal_switch_with_two_hosts() {
        let mut b = Topology::builder();
        let s = b.add_switch("s1");
        let h1 = b.add_host("h1");
        let h2 = b.add_host("h2");
        b.add_link(s, h1, 20e6, 0.001);
        b.add_link(s, h2, 20e6, 0.001);
        let t = b.build().unwrap();
        assert_eq!(t.node_count(), 3);
        assert_eq!(t.link_count(), 4);
        assert_eq!(t.diameter(), 2);
    }

    #[test]
    fn disconnected_graph_rejected() {
        let mut b = Topology::builder();
        b.add_switch("a");
        b.add_switch("b");
        let err = b.build().unwrap_err();
        assert!(matches!(err, TopologyError::Disconnected));
    }

    #[test]
    fn self_loop_rejected() {
        let mut b = Topology::builder();
        let a = b.add_switch("a");
        b.add_link(a, a, 1e6, 0.0);
        assert!(matches!(b.build(), Err(TopologyError::SelfLoop(_))));
    }

    #[test]
    fn host_with_two_links_rejected() {
        let mut b = Topology::builder();
        let s1 = b.add_switch("s1");
        let s2 = b.add_switch("s2");
        let h = b.add_host("h1");
        b.add_link(s1, s2, 1e6, 0.0);
        b.add_link(h, s1, 1e6, 0.0);
        b.add_link(h, s2, 1e6, 0.0);
        assert!(matches!(b.build(), Err(TopologyError::HostDegree(_, 2))));
    }

    #[test]
    fn duplicate_node_rejected() {
        let mut b = Topology::builder();
        b.add_switch("a");
        b.add_switch("a");
        assert!(matches!(b.build(), Err(TopologyError::DuplicateNode(_))));
    }

    #[test]
    fn reverse_link_pairing() {
        let t = triangle();
        let a = t.node_by_name("a").unwrap();
        let b = t.node_by_name("b").unwrap();
        let fwd = t.link_between(a, b).unwrap();
        let rev = fwd.reverse();
        assert_eq!(t.link(rev).from, b);
        assert_eq!(t.link(rev).to, a);
        assert_eq!(rev.reverse(), fwd);
    }

    #[test]
    fn residual_idle_is_capacity() {
        let t = triangle();
        let a = t.node_by_name("a").unwrap();
        let c = t.node_by_name("c").unwrap();
        let p = Path::new(&t, vec![a, c]).unwrap();
        assert_eq!(t.residual_capacity(&p).unwrap(), 10e6);
    }

    #[test]
    fn residual_uses_max_of_reserved_and_measured() {
        let mut t = triangle();
        let a = t.node_by_name("a").unwrap();
        let c = t.node_by_name("c").unwrap();
        let p = Path::new(&t, vec![a, c]).unwrap();
        let l = p.links()[0];
        t.link_mut(l).reserved = 4e6;
        t.link_mut(l).measured_utilization = 6e6;
        assert_eq!(t.residual_capacity(&p).unwrap(), 4e6);
    }

    #[test]
    fn residual_clamped_at_zero_when_saturated() {
        let mut t = triangle();
        let a = t.node_by_name("a").unwrap();
        let c = t.node_by_name("c").unwrap();
        let p = Path::new(&t, vec![a, c]).unwrap();
        let l = p.links()[0];
        t.link_mut(l).measured_utilization = 12e6;
        assert_eq!(t.residual_capacity(&p).unwrap(), 0.0);
    }

    #[test]
    fn residual_never_exceeds_any_link_capacity() {
        let t = triangle();
        let a = t.node_by_name("a").unwrap();
        let b = t.node_by_name("b").unwrap();
        let c = t.node_by_name("c").unwrap();
        let p = Path::new(&t, vec![a, b, c]).unwrap();
        let r = t.residual_capacity(&p).unwrap();
        for &l in p.links() {
            assert!(r <= t.link(l).capacity);
        }
    }

    #[test]
    fn path_rejects_cycles_and_gaps() {
        let t = triangle();
        let a = t.node_by_name("a").unwrap();
        let b = t.node_by_name("b").unwrap();
        assert!(matches!(
            Path::new(&t, vec![a, b, a]),
            Err(TopologyError::RepeatedNode(_))
        ));
        assert!(matches!(
            Path::new(&t, vec![]),
            Err(TopologyError::EmptyPath)
        ));
    }

    #[test]
    fn counters_monotone_under_accounting() {
        let mut t = triangle();
        let l = LinkId(0);
        let before = t.link(l).tx_bytes();
        t.link_mut(l).account(8000.0, 800.0, 1500.0);
        let mid = t.link(l).tx_bytes();
        t.link_mut(l).account(8000.0, 0.0, 1500.0);
        assert!(before <= mid && mid <= t.link(l).tx_bytes());
        assert!(t.link(l).dropped_packets() <= t.link(l).dropped_packets() + 1);
    }
}
