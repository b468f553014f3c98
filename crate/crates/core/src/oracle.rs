//! Brute-force composition counting.
//!
//! Every set partition of the vertex set is generated as a restricted-growth
//! string and kept when each of its blocks induces a connected subgraph. The
//! work is split on short partition prefixes and summed in parallel, so the
//! result does not depend on the number of worker threads.

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{GraphError, LabeledGraph, VertexId};
use crate::Count;

/// Default largest vertex count the oracle accepts.
pub const DEFAULT_VERTEX_LIMIT: usize = 15;

/// Vertex sets are bitmasks, which caps even an overridden limit.
pub const HARD_VERTEX_LIMIT: usize = 64;

/// Below this size the connectivity of every vertex subset is tabulated.
const TABLE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle limit exceeded: graph has {n} vertices, limit is {limit}")]
    LimitExceeded { n: usize, limit: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A partition of `0..n` as a restricted-growth string: `rgs[0] = 0` and each
/// entry is at most one more than the maximum before it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition {
    rgs: Vec<usize>,
}

impl SetPartition {
    /// Validates the restricted-growth property.
    pub fn from_rgs(rgs: Vec<usize>) -> Option<Self> {
        let mut max: Option<usize> = None;
        for &x in &rgs {
            let bound = max.map_or(0, |m| m + 1);
            if x > bound {
                return None;
            }
            max = Some(max.map_or(x, |m| m.max(x)));
        }
        Some(SetPartition { rgs })
    }

    pub fn rgs(&self) -> &[usize] {
        &self.rgs
    }

    pub fn len(&self) -> usize {
        self.rgs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rgs.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.rgs.iter().max().map_or(0, |m| m + 1)
    }

    /// Blocks in order of their smallest element, each sorted ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (i, &b) in self.rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        blocks
    }
}

/// Lexicographic iterator over all restricted-growth strings of length `n`.
#[derive(Debug, Clone)]
pub struct Partitions {
    rgs: Vec<usize>,
    // prefix_max[i] = max(rgs[0..=i])
    prefix_max: Vec<usize>,
    done: bool,
}

impl Partitions {
    fn new(n: usize) -> Self {
        Partitions {
            rgs: vec![0; n],
            prefix_max: vec![0; n],
            done: false,
        }
    }
}

impl Iterator for Partitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let current = SetPartition {
            rgs: self.rgs.clone(),
        };
        let n = self.rgs.len();
        // rightmost position that can still grow
        match (1..n)
            .rev()
            .find(|&i| self.rgs[i] <= self.prefix_max[i - 1])
        {
            None => self.done = true,
            Some(i) => {
                self.rgs[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
            }
        }
        Some(current)
    }
}

/// Brute-force counter with a configurable vertex limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    limit: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            limit: DEFAULT_VERTEX_LIMIT,
        }
    }
}

impl Oracle {
    /// Oracle accepting graphs with at most `limit` vertices. Values above
    /// [`HARD_VERTEX_LIMIT`] are clamped.
    pub fn with_limit(limit: usize) -> Self {
        Oracle {
            limit: limit.min(HARD_VERTEX_LIMIT),
        }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    fn guard(&self, n: usize) -> Result<(), OracleError> {
        if n > self.limit {
            Err(OracleError::LimitExceeded {
                n,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    /// All partitions of `0..n` in lexicographic restricted-growth order.
    /// `n = 0` yields the single empty partition.
    pub fn enumerate_partitions(&self, n: usize) -> Result<Partitions, OracleError> {
        self.guard(n)?;
        Ok(Partitions::new(n))
    }

    /// Number of compositions of `g`.
    pub fn count_compositions(&self, g: &LabeledGraph) -> Result<Count, OracleError> {
        self.guard(g.vertex_count())?;
        Ok(Enumerator::new(g).count(|_| true))
    }

    /// Compositions with all of `subset` inside one block (`C^+`).
    pub fn count_together(
        &self,
        g: &LabeledGraph,
        subset: &[VertexId],
    ) -> Result<Count, OracleError> {
        self.guard(g.vertex_count())?;
        let mask = subset_mask(g, subset)?;
        Ok(Enumerator::new(g).count(|blocks| blocks.iter().any(|&b| b & mask == mask)))
    }

    /// Compositions with the elements of `subset` in pairwise distinct blocks
    /// (`C^-`).
    pub fn count_separated(
        &self,
        g: &LabeledGraph,
        subset: &[VertexId],
    ) -> Result<Count, OracleError> {
        self.guard(g.vertex_count())?;
        let mask = subset_mask(g, subset)?;
        Ok(Enumerator::new(g).count(|blocks| blocks.iter().all(|&b| (b & mask).count_ones() <= 1)))
    }
}

/// [`Oracle::enumerate_partitions`] with the default limit.
pub fn enumerate_partitions(n: usize) -> Result<Partitions, OracleError> {
    Oracle::default().enumerate_partitions(n)
}

/// [`Oracle::count_compositions`] with the default limit.
pub fn count_compositions(g: &LabeledGraph) -> Result<Count, OracleError> {
    Oracle::default().count_compositions(g)
}

/// [`Oracle::count_together`] with the default limit.
pub fn count_together(g: &LabeledGraph, subset: &[VertexId]) -> Result<Count, OracleError> {
    Oracle::default().count_together(g, subset)
}

/// [`Oracle::count_separated`] with the default limit.
pub fn count_separated(g: &LabeledGraph, subset: &[VertexId]) -> Result<Count, OracleError> {
    Oracle::default().count_separated(g, subset)
}

fn subset_mask(g: &LabeledGraph, subset: &[VertexId]) -> Result<u64, GraphError> {
    if subset.is_empty() {
        return Err(GraphError::InvalidSubset);
    }
    subset.iter().try_fold(0u64, |acc, &v| {
        if v < g.vertex_count() {
            Ok(acc | 1 << v)
        } else {
            Err(GraphError::InvalidSubset)
        }
    })
}

/// Bitmask view of a graph, built once per count.
struct Enumerator {
    n: usize,
    adj: Vec<u64>,
    // connected[mask] for every mask when n <= TABLE_LIMIT
    table: Option<Vec<bool>>,
}

impl Enumerator {
    fn new(g: &LabeledGraph) -> Self {
        let n = g.vertex_count();
        debug_assert!(n <= HARD_VERTEX_LIMIT);
        let mut adj = vec![0u64; n];
        for e in g.edges() {
            adj[e.lo()] |= 1 << e.hi();
            adj[e.hi()] |= 1 << e.lo();
        }
        let mut this = Enumerator {
            n,
            adj,
            table: None,
        };
        if n <= TABLE_LIMIT {
            let table = (0..1u64 << n).map(|m| m == 0 || this.flood(m)).collect();
            this.table = Some(table);
        }
        this
    }

    fn flood(&self, mask: u64) -> bool {
        let start = mask & mask.wrapping_neg();
        let mut reached = start;
        let mut frontier = start;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & mask & !reached;
            reached |= fresh;
            frontier |= fresh;
        }
        reached == mask
    }

    fn connected(&self, mask: u64) -> bool {
        match &self.table {
            Some(t) => t[mask as usize],
            None => self.flood(mask),
        }
    }

    fn count<F>(&self, accept: F) -> BigUint
    where
        F: Fn(&[u64]) -> bool + Sync,
    {
        if self.n == 0 {
            return BigUint::from(u64::from(accept(&[])));
        }
        let split = self.n.min(6);
        let prefixes: Vec<SetPartition> = Partitions::new(split).collect();
        let total: u64 = prefixes
            .par_iter()
            .map(|p| {
                let mut blocks = vec![0u64; self.n];
                for (i, &b) in p.rgs().iter().enumerate() {
                    blocks[b] |= 1 << i;
                }
                self.complete(split, p.block_count(), &mut blocks, &accept)
            })
            .sum();
        BigUint::from(total)
    }

    fn complete<F>(&self, next: usize, used: usize, blocks: &mut [u64], accept: &F) -> u64
    where
        F: Fn(&[u64]) -> bool,
    {
        if next == self.n {
            let parts = &blocks[..used];
            return u64::from(parts.iter().all(|&b| self.connected(b)) && accept(parts));
        }
        let bit = 1u64 << next;
        let mut total = 0;
        for b in 0..=used {
            blocks[b] |= bit;
            total += self.complete(next + 1, used.max(b + 1), blocks, accept);
            blocks[b] &= !bit;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_standard, Family};

    fn count(g: &LabeledGraph) -> u64 {
        count_compositions(g).unwrap().try_into().unwrap()
    }

    #[test]
    fn partition_counts() {
        let sizes: Vec<usize> = (0..=7)
            .map(|n| enumerate_partitions(n).unwrap().count())
            .collect();
        assert_eq!(sizes, vec![1, 1, 2, 5, 15, 52, 203, 877]);
        let empty: Vec<_> = enumerate_partitions(0).unwrap().collect();
        assert_eq!(empty.len(), 1);
        assert!(empty[0].is_empty());
    }

    #[test]
    fn partitions_are_lexicographic_and_valid() {
        let all: Vec<SetPartition> = enumerate_partitions(4).unwrap().collect();
        let rgs: Vec<Vec<usize>> = all.iter().map(|p| p.rgs().to_vec()).collect();
        assert_eq!(rgs[0], vec![0, 0, 0, 0]);
        assert_eq!(rgs[1], vec![0, 0, 0, 1]);
        assert_eq!(rgs.last().unwrap(), &vec![0, 1, 2, 3]);
        assert!(rgs.windows(2).all(|w| w[0] < w[1]));
        for r in rgs {
            assert!(SetPartition::from_rgs(r).is_some());
        }
        assert!(SetPartition::from_rgs(vec![0, 2]).is_none());
        assert!(SetPartition::from_rgs(vec![1]).is_none());
        let p = SetPartition::from_rgs(vec![0, 1, 0, 2]).unwrap();
        assert_eq!(p.blocks(), vec![vec![0, 2], vec![1], vec![3]]);
    }

    #[test]
    fn guard_limit() {
        assert_eq!(
            enumerate_partitions(16).err(),
            Some(OracleError::LimitExceeded { n: 16, limit: 15 })
        );
        let k16 = make_standard(Family::Empty, 16).unwrap();
        assert!(count_compositions(&k16).is_err());
        let k5 = make_standard(Family::Complete, 5).unwrap();
        assert!(Oracle::with_limit(4).count_compositions(&k5).is_err());
        assert_eq!(
            Oracle::with_limit(5).count_compositions(&k5).unwrap(),
            BigUint::from(52u8)
        );
        assert_eq!(Oracle::with_limit(1000).limit(), HARD_VERTEX_LIMIT);
    }

    #[test]
    fn printed_examples() {
        for n in 0..6 {
            assert_eq!(count(&LabeledGraph::empty(n)), 1);
        }
        assert_eq!(count(&make_standard(Family::Cycle, 4).unwrap()), 12);
        assert_eq!(count(&make_standard(Family::Complete, 2).unwrap()), 2);
    }

    #[test]
    fn flood_fill_matches_table() {
        let g = make_standard(Family::Cycle, 6).unwrap();
        let en = Enumerator::new(&g);
        let mut no_table = Enumerator::new(&g);
        no_table.table = None;
        for m in 1..64u64 {
            assert_eq!(en.connected(m), no_table.connected(m));
        }
        assert_eq!(en.count(|_| true), no_table.count(|_| true));
    }

    #[test]
    fn together_and_separated() {
        let k3 = make_standard(Family::Complete, 3).unwrap();
        assert_eq!(count_together(&k3, &[0, 1]).unwrap(), BigUint::from(2u8));
        assert_eq!(count_separated(&k3, &[0, 1]).unwrap(), BigUint::from(3u8));

        let e3 = LabeledGraph::empty(3);
        assert_eq!(count_together(&e3, &[0, 1]).unwrap(), BigUint::from(0u8));
        assert_eq!(
            count_separated(&e3, &[0, 1, 2]).unwrap(),
            BigUint::from(1u8)
        );

        let p = make_standard(Family::Path, 2).unwrap();
        assert_eq!(count_together(&p, &[0, 2]).unwrap(), BigUint::from(1u8));

        let k2 = make_standard(Family::Complete, 2).unwrap();
        assert_eq!(count_separated(&k2, &[0, 1]).unwrap(), BigUint::from(1u8));

        assert_eq!(
            count_together(&k3, &[]),
            Err(OracleError::Graph(GraphError::InvalidSubset))
        );
        assert_eq!(
            count_separated(&k3, &[5]),
            Err(OracleError::Graph(GraphError::InvalidSubset))
        );
    }
}
