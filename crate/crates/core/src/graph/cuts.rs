//! Articulation points, bridges and biconnected components by depth-first
//! search low-link values. Used as the reference against which ER-based
//! decisions are checked.

use std::collections::BTreeSet;

use super::{ordered, WeightedGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct CutAnalysis {
    /// Sorted cut vertices.
    pub articulation_points: Vec<usize>,
    /// Sorted bridges `(u, v)` with `u < v`.
    pub bridges: Vec<(usize, usize)>,
    /// Vertex-biconnected components (blocks), each sorted. Isolated vertices
    /// form no block.
    pub blocks: Vec<Vec<usize>>,
    /// Two-edge-connected component label per vertex.
    pub edge_components: Vec<usize>,
}

impl CutAnalysis {
    pub fn is_articulation(&self, v: usize) -> bool {
        self.articulation_points.binary_search(&v).is_ok()
    }

    pub fn is_bridge(&self, u: usize, v: usize) -> bool {
        self.bridges.binary_search(&ordered(u, v)).is_ok()
    }

    /// True when some block contains both vertices.
    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.blocks
            .iter()
            .any(|blk| blk.binary_search(&a).is_ok() && blk.binary_search(&b).is_ok())
    }

    pub fn same_edge_component(&self, a: usize, b: usize) -> bool {
        self.edge_components[a] == self.edge_components[b]
    }
}

pub fn classical_cut_analysis(g: &WeightedGraph) -> CutAnalysis {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut articulation = vec![false; n];
    let mut bridges = Vec::new();
    let mut blocks = Vec::new();
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut root_children = 0;
        // (vertex, parent, next neighbor index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, parent, idx) = *top;
            if idx < g.degree(v) {
                top.2 += 1;
                let w = g.neighbors(v)[idx].0;
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    edge_stack.push((v, w));
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    low[v] = low[v].min(disc[w]);
                    edge_stack.push((v, w));
                }
                continue;
            }
            stack.pop();
            if parent == usize::MAX {
                continue;
            }
            low[parent] = low[parent].min(low[v]);
            if low[v] > disc[parent] {
                bridges.push(ordered(parent, v));
            }
            if low[v] >= disc[parent] {
                if parent != root {
                    articulation[parent] = true;
                }
                let mut block = BTreeSet::new();
                while let Some((a, b)) = edge_stack.pop() {
                    block.insert(a);
                    block.insert(b);
                    if (a, b) == (parent, v) {
                        break;
                    }
                }
                blocks.push(block.into_iter().collect());
            }
        }
        if root_children > 1 {
            articulation[root] = true;
        }
    }

    bridges.sort_unstable();
    blocks.sort();
    let edge_components = edge_component_labels(g, &bridges);
    CutAnalysis {
        articulation_points: (0..n).filter(|&v| articulation[v]).collect(),
        bridges,
        blocks,
        edge_components,
    }
}

fn edge_component_labels(g: &WeightedGraph, bridges: &[(usize, usize)]) -> Vec<usize> {
    let kept = g
        .edges()
        .iter()
        .filter(|e| bridges.binary_search(&(e.u, e.v)).is_err())
        .map(|e| (e.u, e.v, e.w));
    WeightedGraph::new(g.n(), kept)
        .expect("subgraph of a valid graph")
        .components()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_has_middle_articulation_and_two_bridges() {
        let g = WeightedGraph::unweighted(3, [(0, 1), (1, 2)]).unwrap();
        let c = classical_cut_analysis(&g);
        assert_eq!(c.articulation_points, vec![1]);
        assert_eq!(c.bridges, vec![(0, 1), (1, 2)]);
        assert_eq!(c.blocks, vec![vec![0, 1], vec![1, 2]]);
        assert!(!c.same_block(0, 2));
        assert!(!c.same_edge_component(0, 1));
    }

    #[test]
    fn cycle_has_no_cuts() {
        let g = WeightedGraph::unweighted(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let c = classical_cut_analysis(&g);
        assert!(c.articulation_points.is_empty());
        assert!(c.bridges.is_empty());
        assert_eq!(c.blocks.len(), 1);
    }

    #[test]
    fn bowtie_shares_one_vertex() {
        let g =
            WeightedGraph::unweighted(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let c = classical_cut_analysis(&g);
        assert_eq!(c.articulation_points, vec![2]);
        assert!(c.bridges.is_empty());
        assert!(c.same_block(0, 2));
        assert!(!c.same_block(0, 4));
        assert!(c.same_edge_component(0, 4));
    }

    #[test]
    fn root_with_two_children_is_articulation() {
        let g = WeightedGraph::unweighted(3, [(0, 1), (0, 2)]).unwrap();
        let c = classical_cut_analysis(&g);
        assert_eq!(c.articulation_points, vec![0]);
    }

    #[test]
    fn disconnected_graph_and_isolated_vertex() {
        let g = WeightedGraph::unweighted(5, [(0, 1), (2, 3), (3, 4), (2, 4)]).unwrap();
        let c = classical_cut_analysis(&g);
        assert!(c.articulation_points.is_empty());
        assert_eq!(c.bridges, vec![(0, 1)]);
        assert_eq!(c.blocks.len(), 2);
    }
}
