use std::fmt;

use crate::error::{Error, Result};

/// A partition of `0..n`, stored as a restricted growth string: blocks are
/// numbered by first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPartition {
    block_of: Vec<usize>,
    blocks: usize,
}

impl VertexPartition {
    pub fn singletons(n: usize) -> Self {
        VertexPartition {
            block_of: (0..n).collect(),
            blocks: n,
        }
    }

    /// Any labeling of vertices by block keys; keys are renumbered.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Self {
        let mut ids = std::collections::HashMap::new();
        let block_of = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l.clone()).or_insert(next)
            })
            .collect();
        VertexPartition {
            block_of,
            blocks: ids.len(),
        }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut label = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &v in block {
                if v >= n {
                    return Err(Error::InvalidPartition(format!("vertex {v} out of range")));
                }
                if label[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("vertex {v} in two blocks")));
                }
                label[v] = b;
            }
        }
        if let Some(v) = label.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidPartition(format!("vertex {v} not covered")));
        }
        Ok(Self::from_labels(&label))
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    /// `|Δ|`.
    pub fn num_blocks(&self) -> usize {
        self.blocks
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.block_of
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (v, &b) in self.block_of.iter().enumerate() {
            out[b].push(v);
        }
        out
    }

    pub fn same_block(&self, u: usize, v: usize) -> bool {
        self.block_of[u] == self.block_of[v]
    }

    /// True when every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &VertexPartition) -> bool {
        if self.len() != coarser.len() {
            return false;
        }
        let mut image = vec![usize::MAX; self.blocks];
        self.block_of.iter().zip(&coarser.block_of).all(|(&b, &c)| {
            if image[b] == usize::MAX {
                image[b] = c;
            }
            image[b] == c
        })
    }

    /// The partition with the blocks of `u` and `v` joined: `Δ ∪ {u = v}`.
    pub fn merge(&self, u: usize, v: usize) -> VertexPartition {
        let (bu, bv) = (self.block_of[u], self.block_of[v]);
        let labels: Vec<usize> = self
            .block_of
            .iter()
            .map(|&b| if b == bv { bu } else { b })
            .collect();
        Self::from_labels(&labels)
    }

    /// The partition `Γ` of the original vertices with `G/Γ = (G/self)/outer`,
    /// where `outer` partitions the blocks of `self`.
    pub fn then(&self, outer: &VertexPartition) -> Result<VertexPartition> {
        if outer.len() != self.blocks {
            return Err(Error::SizeMismatch {
                expected: self.blocks,
                found: outer.len(),
            });
        }
        let labels: Vec<usize> = self.block_of.iter().map(|&b| outer.block_of[b]).collect();
        Ok(Self::from_labels(&labels))
    }
}

impl fmt::Display for VertexPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                let vs: Vec<String> = b.iter().map(|v| v.to_string()).collect();
                format!("{{{}}}", vs.join(","))
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_are_renumbered() {
        let p = VertexPartition::from_labels(&[7, 3, 7, 9]);
        assert_eq!(p.assignment(), &[0, 1, 0, 2]);
        assert_eq!(p.num_blocks(), 3);
    }

    #[test]
    fn from_blocks_validates() {
        assert!(VertexPartition::from_blocks(3, &[vec![0, 1], vec![2]]).is_ok());
        assert!(VertexPartition::from_blocks(3, &[vec![0, 1]]).is_err());
        assert!(VertexPartition::from_blocks(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(VertexPartition::from_blocks(2, &[vec![0, 1], vec![]]).is_err());
    }

    #[test]
    fn refinement_and_merge() {
        let s = VertexPartition::singletons(4);
        let m = s.merge(1, 3);
        assert!(s.refines(&m));
        assert!(!m.refines(&s));
        assert!(m.same_block(1, 3));
        assert_eq!(m.num_blocks(), 3);
    }

    #[test]
    fn then_composes() {
        let inner = VertexPartition::from_labels(&[0, 0, 1, 2]);
        let outer = VertexPartition::from_labels(&[0, 1, 1]);
        let g = inner.then(&outer).unwrap();
        assert_eq!(g.assignment(), &[0, 0, 1, 1]);
    }
}
