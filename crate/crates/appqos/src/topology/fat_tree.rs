//! k-ary fat-tree generator (Clos instance).
//!
//! For an even `k` there are `k` pods, each with `k/2` aggregation and
//! `k/2` edge switches; `(k/2)^2` core switches connect the pods and
//! each edge switch serves `k/2` hosts, for `k^3/4` hosts total.
//! Between any two hosts in different pods there are exactly `(k/2)^2`
//! shortest switch-level paths.

use super::{NodeId, Topology, TopologyBuilder, TopologyError};

/// Default link capacity for generated fat-trees, bits/second.
pub const FAT_TREE_CAPACITY: f64 = 1e9;
/// Default propagation delay for generated fat-trees, seconds.
pub const FAT_TREE_DELAY: f64 = 10e-6;

/// A generated fat-tree with structured access to its layers.
#[derive(Debug)]
pub struct FatTree {
    pub k: u32,
    pub topology: Topology,
    core: Vec<NodeId>,
    /// `agg[pod][i]`
    agg: Vec<Vec<NodeId>>,
    /// `edge[pod][j]`
    edge: Vec<Vec<NodeId>>,
    /// `hosts[pod][j][m]` — host `m` under edge switch `j` of `pod`.
    hosts: Vec<Vec<Vec<NodeId>>>,
}

impl FatTree {
    pub fn new(k: u32) -> Result<FatTree, TopologyError> {
        if k < 2 || k % 2 != 0 {
            return Err(TopologyError::BadFatTreeK(k));
        }
        let half = (k / 2) as usize;
        let pods = k as usize;
        let mut b: TopologyBuilder = Topology::builder();

        let core: Vec<NodeId> = (0..half * half)
            .map(|i| b.add_switch(&format!("c{i}")))
            .collect();
        let mut agg = Vec::with_capacity(pods);
        let mut edge = Vec::with_capacity(pods);
        for p in 0..pods {
            agg.push(
                (0..half)
                    .map(|i| b.add_switch(&format!("a{p}_{i}")))
                    .collect::<Vec<_>>(),
            );
            edge.push(
                (0..half)
                    .map(|j| b.add_switch(&format!("e{p}_{j}")))
                    .collect::<Vec<_>>(),
            );
        }
        let mut hosts = Vec::with_capacity(pods);
        for p in 0..pods {
            let mut per_edge = Vec::with_capacity(half);
            for j in 0..half {
                per_edge.push(
                    (0..half)
                        .map(|m| b.add_host(&format!("h{p}_{j}_{m}")))
                        .collect::<Vec<_>>(),
                );
            }
            hosts.push(per_edge);
        }

        for p in 0..pods {
            for i in 0..half {
                // Aggregation switch i of every pod uplinks to core
                // group i (cores i*half .. (i+1)*half).
                for c in 0..half {
                    b.add_link(agg[p][i], core[i * half + c], FAT_TREE_CAPACITY, FAT_TREE_DELAY);
                }
                for j in 0..half {
                    b.add_link(edge[p][j], agg[p][i], FAT_TREE_CAPACITY, FAT_TREE_DELAY);
                }
            }
            for j in 0..half {
                for m in 0..half {
                    b.add_link(hosts[p][j][m], edge[p][j], FAT_TREE_CAPACITY, FAT_TREE_DELAY);
                }
            }
        }

        // Host-to-host across pods: host-edge-agg-core-agg-edge-host.
        b.diameter_hint(6);
        let topology = b.build()?;
        Ok(FatTree {
            k,
            topology,
            core,
            agg,
            edge,
            hosts,
        })
    }

    pub fn core_switches(&self) -> &[NodeId] {
        &self.core
    }

    pub fn aggregation_switches(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.agg.iter().flatten().copied()
    }

    pub fn edge_switches(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.edge.iter().flatten().copied()
    }

    pub fn edge_switch_count(&self) -> usize {
        self.edge.iter().map(|v| v.len()).sum()
    }

    pub fn host_count(&self) -> usize {
        self.hosts.iter().flatten().map(|v| v.len()).sum()
    }

    pub fn host(&self, pod: usize, edge: usize, m: usize) -> NodeId {
        self.hosts[pod][edge][m]
    }

    pub fn pods(&self) -> usize {
        self.k as usize
    }

    pub fn half(&self) -> usize {
        (self.k / 2) as usize
    }
}

/// Convenience wrapper returning just the graph.
pub fn generate_fat_tree(k: u32) -> Result<Topology, TopologyError> {
    Ok(FatTree::new(k)?.topology)
}

#[cfg(test)]
mod tests {
    use super::super::{simple_paths, NodeKind};
    use super::*;

    #[test]
    fn k4_layer_counts() {
        let ft = FatTree::new(4).unwrap();
        assert_eq!(ft.core_switches().len(), 4);
        assert_eq!(ft.aggregation_switches().count(), 8);
        assert_eq!(ft.edge_switch_count(), 8);
        assert_eq!(ft.host_count(), 16);
        let switches = ft
            .topology
            .nodes()
            .iter()
            .filter(|n| n.kind == NodeKind::Switch)
            .count();
        assert_eq!(switches, 20);
    }

    #[test]
    fn k2_smallest_legal() {
        let ft = FatTree::new(2).unwrap();
        assert_eq!(ft.core_switches().len(), 1);
        assert_eq!(ft.host_count(), 2);
        assert_eq!(ft.pods(), 2);
    }

    #[test]
    fn k8_edge_switches() {
        let ft = FatTree::new(8).unwrap();
        assert_eq!(ft.edge_switch_count(), 32);
    }

    #[test]
    fn odd_or_small_k_rejected() {
        assert!(matches!(FatTree::new(3), Err(TopologyError::BadFatTreeK(3))));
        assert!(matches!(FatTree::new(0), Err(TopologyError::BadFatTreeK(0))));
        assert!(matches!(FatTree::new(1), Err(TopologyError::BadFatTreeK(1))));
    }

    #[test]
    fn inter_pod_path_count_is_half_k_squared() {
        let ft = FatTree::new(4).unwrap();
        let src = ft.host(0, 0, 0);
        let dst = ft.host(1, 1, 1);
        let paths: Vec<_> = simple_paths(&ft.topology, src, dst, 6).unwrap().collect();
        assert_eq!(paths.len(), 4);
        assert!(paths.iter().all(|p| p.hops() == 6));
    }

    #[test]
    fn intra_pod_same_edge_is_two_hops() {
        let ft = FatTree::new(4).unwrap();
        let src = ft.host(0, 0, 0);
        let dst = ft.host(0, 0, 1);
        let first = simple_paths(&ft.topology, src, dst, 6)
            .unwrap()
            .next()
            .unwrap();
        assert_eq!(first.hops(), 2);
    }
}
