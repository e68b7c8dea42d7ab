//! Small internal helpers shared across modules.

use alloc::vec::Vec;

/// Union-find over `0..n` with path halving; small and allocation-free
/// after construction.  Used to merge cells across segments when cutting
/// drawings along curves (lens sides, vertex-link surgery).
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    /// Distinct class representatives, in ascending order.
    pub fn roots(&mut self) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.parent.len()).map(|i| self.find(i)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
