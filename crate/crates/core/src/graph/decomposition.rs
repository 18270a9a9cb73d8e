//! Tree decompositions: bags of vertices arranged on a tree.

use std::collections::VecDeque;

use thiserror::Error;

use super::WeightedGraph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TdError {
    #[error("a tree decomposition needs at least one bag")]
    NoBags,
    #[error("tree edge ({0}, {1}) refers to a missing bag")]
    BagOutOfRange(usize, usize),
    #[error("tree edges do not form a tree on {bags} bags")]
    NotATree { bags: usize },
}

/// Why a decomposition fails to decompose a given graph. The numbered
/// conditions are vertex coverage (1), edge coverage (2) and the
/// connected-subtree property (3).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum TdViolation {
    #[error("bag {bag} contains vertex {vertex}, which is not in the graph")]
    UnknownVertex { bag: usize, vertex: usize },
    #[error("condition 1: vertex {0} is in no bag")]
    VertexUncovered(usize),
    #[error("condition 2: edge ({0}, {1}) is in no bag")]
    EdgeUncovered(usize, usize),
    #[error("condition 3: the bags containing vertex {0} are not connected in the tree")]
    NotContiguous(usize),
}

impl TdViolation {
    /// Which of the three conditions failed; 0 for a structural mismatch.
    pub fn condition(&self) -> u8 {
        match self {
            TdViolation::UnknownVertex { .. } => 0,
            TdViolation::VertexUncovered(_) => 1,
            TdViolation::EdgeUncovered(..) => 2,
            TdViolation::NotContiguous(_) => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    tree_edges: Vec<(usize, usize)>,
    tree_adjacency: Vec<Vec<usize>>,
}

impl TreeDecomposition {
    /// Bags are sorted and deduplicated; `tree_edges` must form a tree.
    pub fn new(bags: Vec<Vec<usize>>, tree_edges: Vec<(usize, usize)>) -> Result<Self, TdError> {
        if bags.is_empty() {
            return Err(TdError::NoBags);
        }
        let k = bags.len();
        let mut tree_adjacency = vec![Vec::new(); k];
        for &(a, b) in &tree_edges {
            if a >= k || b >= k || a == b {
                return Err(TdError::BagOutOfRange(a, b));
            }
            tree_adjacency[a].push(b);
            tree_adjacency[b].push(a);
        }
        if tree_edges.len() != k - 1 || bfs_distances(&tree_adjacency, 0).contains(&usize::MAX) {
            return Err(TdError::NotATree { bags: k });
        }
        for list in &mut tree_adjacency {
            list.sort_unstable();
        }
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        Ok(TreeDecomposition {
            bags,
            tree_edges,
            tree_adjacency,
        })
    }

    /// Bags chained in the given order.
    pub fn path(bags: Vec<Vec<usize>>) -> Result<Self, TdError> {
        let edges = (1..bags.len()).map(|i| (i - 1, i)).collect();
        Self::new(bags, edges)
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn bag(&self, i: usize) -> &[usize] {
        &self.bags[i]
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    pub fn bag_count(&self) -> usize {
        self.bags.len()
    }

    pub fn tree_neighbors(&self, bag: usize) -> &[usize] {
        &self.tree_adjacency[bag]
    }

    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Maximum degree of a bag in the tree.
    pub fn tree_max_degree(&self) -> usize {
        self.tree_adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Indices of the bags containing `v`.
    pub fn bags_containing(&self, v: usize) -> Vec<usize> {
        (0..self.bags.len())
            .filter(|&i| self.bags[i].binary_search(&v).is_ok())
            .collect()
    }

    /// The largest number of bags any vertex appears in.
    pub fn max_multiplicity(&self, n: usize) -> usize {
        let mut count = vec![0usize; n];
        for bag in &self.bags {
            for &v in bag {
                if v < n {
                    count[v] += 1;
                }
            }
        }
        count.into_iter().max().unwrap_or(0)
    }

    /// Hop distances in the tree from bag `from` to every bag.
    pub fn tree_distances(&self, from: usize) -> Vec<usize> {
        bfs_distances(&self.tree_adjacency, from)
    }
}

fn bfs_distances(adjacency: &[Vec<usize>], from: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adjacency.len()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for &y in &adjacency[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Checks the three tree-decomposition conditions in order and reports the
/// first violation found.
pub fn validate_tree_decomposition(
    g: &WeightedGraph,
    td: &TreeDecomposition,
) -> Result<(), TdViolation> {
    let n = g.n();
    for (bag, vertices) in td.bags.iter().enumerate() {
        if let Some(&vertex) = vertices.iter().find(|&&v| v >= n) {
            return Err(TdViolation::UnknownVertex { bag, vertex });
        }
    }
    let mut covered = vec![false; n];
    for bag in &td.bags {
        for &v in bag {
            covered[v] = true;
        }
    }
    if let Some(v) = covered.iter().position(|c| !c) {
        return Err(TdViolation::VertexUncovered(v));
    }
    for e in g.edges() {
        let inside = td
            .bags
            .iter()
            .any(|b| b.binary_search(&e.u).is_ok() && b.binary_search(&e.v).is_ok());
        if !inside {
            return Err(TdViolation::EdgeUncovered(e.u, e.v));
        }
    }
    for v in 0..n {
        let holders = td.bags_containing(v);
        // Restrict the tree to `holders` and check it is connected.
        let mut seen = vec![false; td.bags.len()];
        let mut queue = VecDeque::from([holders[0]]);
        seen[holders[0]] = true;
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &td.tree_adjacency[x] {
                if !seen[y] && td.bags[y].binary_search(&v).is_ok() {
                    seen[y] = true;
                    reached += 1;
                    queue.push_back(y);
                }
            }
        }
        if reached != holders.len() {
            return Err(TdViolation::NotContiguous(v));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4() -> WeightedGraph {
        WeightedGraph::unweighted(4, [(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn path_decomposition_is_valid() {
        let td = TreeDecomposition::path(vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        assert_eq!(validate_tree_decomposition(&p4(), &td), Ok(()));
        assert_eq!(td.width(), 1);
        assert_eq!(td.max_multiplicity(4), 2);
    }

    #[test]
    fn contiguity_violation() {
        // Vertex 1 sits in the first and last bags but not the middle one.
        let td = TreeDecomposition::path(vec![vec![0, 1], vec![2, 3], vec![1, 2]]).unwrap();
        let err = validate_tree_decomposition(&p4(), &td).unwrap_err();
        assert_eq!(err, TdViolation::NotContiguous(1));
        assert_eq!(err.condition(), 3);
    }

    #[test]
    fn missing_edge_violation() {
        let td = TreeDecomposition::path(vec![vec![0], vec![1, 2], vec![2, 3]]).unwrap();
        let err = validate_tree_decomposition(&p4(), &td).unwrap_err();
        assert_eq!(err, TdViolation::EdgeUncovered(0, 1));
        assert_eq!(err.condition(), 2);
    }

    #[test]
    fn missing_vertex_violation() {
        let td = TreeDecomposition::path(vec![vec![1, 2], vec![2, 3]]).unwrap();
        assert_eq!(
            validate_tree_decomposition(&p4(), &td)
                .unwrap_err()
                .condition(),
            1
        );
    }

    #[test]
    fn tree_structure_is_checked() {
        assert_eq!(TreeDecomposition::new(vec![], vec![]), Err(TdError::NoBags));
        assert!(matches!(
            TreeDecomposition::new(vec![vec![0], vec![1], vec![2]], vec![(0, 1), (1, 0)]),
            Err(TdError::NotATree { .. })
        ));
        assert!(matches!(
            TreeDecomposition::new(vec![vec![0], vec![1]], vec![(0, 5)]),
            Err(TdError::BagOutOfRange(0, 5))
        ));
    }

    #[test]
    fn tree_distances_on_a_star_of_bags() {
        let td = TreeDecomposition::new(
            vec![vec![0, 1], vec![1, 2], vec![1, 3], vec![3, 4]],
            vec![(0, 1), (0, 2), (2, 3)],
        )
        .unwrap();
        assert_eq!(td.tree_distances(1), vec![1, 0, 2, 3]);
        assert_eq!(td.tree_max_degree(), 2);
    }
}
