//! Application-aware traffic management for a software-defined network,
//! desk scale.

pub mod topology;

pub use topology::{
    generate_fat_tree, simple_paths, FatTree, Link, LinkId, Node, NodeId, NodeKind, Path,
    Topology, TopologyError,
};
