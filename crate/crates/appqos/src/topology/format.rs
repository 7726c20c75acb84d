//! Line-oriented topology description documents.
//!
//! Grammar (one directive per line, `#` starts a comment):
//!
//! ```text
//! node <name> switch|host
//! link <a> <b> <capacity_bits_per_s> <prop_delay_s>
//! ```
//!
//! All `node` lines must precede the `link` lines that reference them.
//! [`Topology::to_spec`] emits the same grammar and round-trips
//! losslessly through [`Topology::parse`].

use super::{NodeKind, Topology, TopologyError};

impl Topology {
    /// Parses a topology description document.
    pub fn parse(text: &str) -> Result<Topology, TopologyError> {
        let mut b = Topology::builder();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields[0] {
                "node" => {
                    if fields.len() != 3 {
                        return Err(TopologyError::Parse {
                            line,
                            msg: "expected: node <name> switch|host".into(),
                        });
                    }
                    let kind = match fields[2] {
                        "switch" => NodeKind::Switch,
                        "host" => NodeKind::Host,
                        other => {
                            return Err(TopologyError::Parse {
                                line,
                                msg: format!("unknown node kind `{other}`"),
                            })
                        }
                    };
                    b.add_node(fields[1], kind);
                }
                "link" => {
                    if fields.len() != 5 {
                        return Err(TopologyError::Parse {
                            line,
                            msg: "expected: link <a> <b> <capacity> <delay>".into(),
                        });
                    }
                    let a = b
                        .node_id(fields[1])
                        .ok_or_else(|| TopologyError::UnknownNode(fields[1].to_string()))?;
                    let z = b
                        .node_id(fields[2])
                        .ok_or_else(|| TopologyError::UnknownNode(fields[2].to_string()))?;
                    let capacity: f64 = fields[3].parse().map_err(|_| TopologyError::Parse {
                        line,
                        msg: format!("bad capacity `{}`", fields[3]),
                    })?;
                    let delay: f64 = fields[4].parse().map_err(|_| TopologyError::Parse {
                        line,
                        msg: format!("bad delay `{}`", fields[4]),
                    })?;
                    b.add_link(a, z, capacity, delay);
                }
                other => {
                    return Err(TopologyError::Parse {
                        line,
                        msg: format!("unknown directive `{other}`"),
                    })
                }
            }
        }
        b.build()
    }

    /// Serializes back to the document grammar. Nodes are written in id
    /// order and links in creation order, so `parse(to_spec(t))` equals
    /// `t` structurally.
    pub fn to_spec(&self) -> String {
        let mut out = String::new();
        for n in self.nodes() {
            let kind = match n.kind {
                NodeKind::Switch => "switch",
                NodeKind::Host => "host",
            };
            out.push_str(&format!("node {} {}\n", n.name, kind));
        }
        // Forward half-links only (even ids).
        for l in self.links().iter().step_by(2) {
            out.push_str(&format!(
                "link {} {} {} {}\n",
                self.node(l.from).name,
                self.node(l.to).name,
                l.capacity,
                l.prop_delay
            ));
        }
        out
    }

    /// The evaluation tree: a complete binary tree of 7 switches
    /// (`s1` root, `s2`/`s3` aggregation, `s4`-`s7` edge) with two
    /// hosts per edge switch (`h1`-`h8`), every link 20 Mbps.
    pub fn eval_tree() -> Topology {
        Topology::parse(EVAL_TREE_SPEC).expect("built-in eval tree must parse")
    }
}

impl super::TopologyBuilder {
    fn node_id(&self, name: &str) -> Option<super::NodeId> {
        self.by_name.get(name).copied()
    }
}

/// Built-in evaluation topology document (also shipped in `assets/`).
pub const EVAL_TREE_SPEC: &str = include_str!("../../assets/eval_tree.topo");
