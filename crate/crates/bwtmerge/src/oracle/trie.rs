//! Explicit trie model and its two-array transform.

use crate::alphabet::StringCollection;
use crate::index::AggregateStat;
use crate::merge_xbwt::Xbwt;

const TERMINATOR: u8 = 0;

struct Node {
    children: Vec<(u8, u32)>, // sorted by label, terminator smallest
    height: u32,
    parent: u32,
    label: u8,
}

/// Rooted trie over a set of documents, each closed by a terminator edge.
///
/// Duplicate documents collapse onto the same path, so the modeled set is
/// the set of distinct documents.
pub struct TrieModel {
    nodes: Vec<Node>,
}

impl TrieModel {
    fn child(&self, node: u32, label: u8) -> Option<u32> {
        let list = &self.nodes[node as usize].children;
        list.binary_search_by_key(&label, |&(l, _)| l)
            .ok()
            .map(|i| list[i].1)
    }

    fn insert_child(&mut self, node: u32, label: u8) -> u32 {
        if let Some(c) = self.child(node, label) {
            return c;
        }
        let id = self.nodes.len() as u32;
        let height = self.nodes[node as usize].height + 1;
        self.nodes.push(Node {
            children: Vec::new(),
            height,
            parent: node,
            label,
        });
        let list = &mut self.nodes[node as usize].children;
        let pos = list.partition_point(|&(l, _)| l < label);
        list.insert(pos, (label, id));
        id
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn internal_count(&self) -> usize {
        self.nodes.iter().filter(|n| !n.children.is_empty()).count()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.len() - self.internal_count()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Height of the tallest node.
    pub fn hgt(&self) -> u32 {
        self.nodes.iter().map(|n| n.height).max().unwrap_or(0)
    }

    /// Max and average node height; the average divides by the node count.
    pub fn height_stats(&self) -> AggregateStat {
        AggregateStat {
            max: self.hgt() as u64,
            sum: self.nodes.iter().map(|n| n.height as u64).sum(),
            denom: self.nodes.len() as u64,
        }
    }

    /// Upward-path string of a node: edge labels from the node to the root.
    pub fn upward_path(&self, mut node: u32) -> Vec<u8> {
        let mut path = Vec::new();
        while node != 0 {
            path.push(self.nodes[node as usize].label);
            node = self.nodes[node as usize].parent;
        }
        path
    }

    /// Upward-path strings of the internal nodes, sorted; the sort order of
    /// the transform's groups.
    pub fn sorted_internal_paths(&self) -> Vec<Vec<u8>> {
        let mut paths: Vec<Vec<u8>> = (0..self.nodes.len() as u32)
            .filter(|&id| !self.nodes[id as usize].children.is_empty())
            .map(|id| self.upward_path(id))
            .collect();
        paths.sort();
        paths
    }
}

/// Builds the trie of the collection's document set.
pub fn trie_build(coll: &StringCollection) -> TrieModel {
    let mut trie = TrieModel {
        nodes: vec![Node {
            children: Vec::new(),
            height: 0,
            parent: 0,
            label: 0,
        }],
    };
    for doc in coll.docs() {
        let mut node = 0u32;
        for &sym in doc {
            node = trie.insert_child(node, sym);
        }
        trie.insert_child(node, TERMINATOR);
    }
    trie
}

/// Serializes a trie into its two-array form: internal nodes sorted by
/// upward path, each contributing its outgoing labels.
pub fn xbwt_build(trie: &TrieModel, sigma: u8) -> Xbwt {
    let mut internal: Vec<(Vec<u8>, u32)> = (0..trie.nodes.len() as u32)
        .filter(|&id| !trie.nodes[id as usize].children.is_empty())
        .map(|id| (trie.upward_path(id), id))
        .collect();
    internal.sort();
    let mut labels = Vec::with_capacity(trie.edge_count());
    let mut last = Vec::with_capacity(trie.edge_count());
    for (_, id) in &internal {
        let children = &trie.nodes[*id as usize].children;
        for (i, &(label, _)) in children.iter().enumerate() {
            labels.push(label);
            last.push(i + 1 == children.len());
        }
    }
    Xbwt::new(last.into_iter().collect(), labels, sigma).expect("oracle output is well formed")
}
