use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Result, RmtError};

/// Largest `m` for exhaustive scans over all set partitions of `[m]`.
pub const MAX_PARTITION_SIZE: usize = 12;

/// Set partition of `[m]`. Blocks hold 0-based positions, each block sorted,
/// blocks ordered by their smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// From a block label per position; labels are arbitrary.
    pub fn from_labels<T: Eq + std::hash::Hash>(labels: &[T]) -> Self {
        let mut index: HashMap<&T, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (pos, l) in labels.iter().enumerate() {
            let b = *index.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(pos);
        }
        Self { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Blocks with 1-based elements.
    pub fn blocks_one_based(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.iter().map(|x| x + 1).collect()).collect()
    }

    pub fn size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Block index of every position.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.size()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &p in block {
                out[p] = b;
            }
        }
        out
    }
}

/// Kernel of a multi-index: positions are in the same block iff the indices agree.
pub fn kernel_of_index<T: Eq + std::hash::Hash>(index: &[T]) -> Partition {
    Partition::from_labels(index)
}

fn graph_edges(sigma: &Partition) -> BTreeSet<(usize, usize)> {
    let labels = sigma.labels();
    let m = labels.len();
    (0..m)
        .map(|p| {
            let (a, b) = (labels[p], labels[(p + 1) % m]);
            (a.min(b), a.max(b))
        })
        .collect()
}

/// Whether the graph on the blocks of `sigma`, with an edge between the blocks
/// of cyclically consecutive positions (multi-edges collapsed, loops kept and
/// counted as edges), is a tree.
pub fn graph_is_tree(sigma: &Partition) -> bool {
    let v = sigma.blocks.len();
    if v == 0 {
        return false;
    }
    let edges = graph_edges(sigma);
    if v != edges.len() + 1 {
        return false;
    }
    let mut parent: Vec<usize> = (0..v).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = v;
    for &(a, b) in &edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components == 1
}

/// Lazy enumeration of all set partitions of `[m]` via restricted growth strings.
pub struct PartitionIter {
    rgs: Vec<usize>,
    max_prefix: Vec<usize>,
    pending: bool,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if !self.pending {
            return None;
        }
        let out = Partition::from_labels(&self.rgs);
        let m = self.rgs.len();
        // increment the rightmost position that may grow, reset the suffix
        self.pending = false;
        for i in (1..m).rev() {
            if self.rgs[i] <= self.max_prefix[i - 1] {
                self.rgs[i] += 1;
                self.max_prefix[i] = self.max_prefix[i - 1].max(self.rgs[i]);
                for j in i + 1..m {
                    self.rgs[j] = 0;
                    self.max_prefix[j] = self.max_prefix[i];
                }
                self.pending = true;
                break;
            }
        }
        Some(out)
    }
}

/// All set partitions of `[m]` (Bell-number many), `m <= MAX_PARTITION_SIZE`.
pub fn enumerate_partitions(m: usize) -> Result<PartitionIter> {
    if m > MAX_PARTITION_SIZE {
        return Err(RmtError::Resource(format!(
            "partition scan of [{m}] exceeds budget {MAX_PARTITION_SIZE}"
        )));
    }
    Ok(PartitionIter { rgs: vec![0; m], max_prefix: vec![0; m], pending: true })
}

/// Number of partitions of `[2k]` whose graph is a tree and whose closed walk
/// `1 -> 2 -> ... -> 2k -> 1` crosses every edge exactly twice.
pub fn count_tree_pair_partitions(k: usize) -> Result<u64> {
    let m = 2 * k;
    let mut count = 0;
    for sigma in enumerate_partitions(m)? {
        if m == 0 || !graph_is_tree(&sigma) {
            continue;
        }
        let labels = sigma.labels();
        let mut uses: HashMap<(usize, usize), usize> = HashMap::new();
        for p in 0..m {
            let (a, b) = (labels[p], labels[(p + 1) % m]);
            *uses.entry((a.min(b), a.max(b))).or_default() += 1;
        }
        if uses.values().all(|&u| u == 2) {
            count += 1;
        }
    }
    Ok(count)
}
