//! Row-column block interleaver: written row by row, read column by column.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interleaver {
    pub rows: usize,
    pub cols: usize,
}

impl Default for Interleaver {
    fn default() -> Self {
        Interleaver { rows: 32, cols: 16 }
    }
}

impl Interleaver {
    pub fn block(&self) -> usize {
        self.rows * self.cols
    }

    /// Output position `p` takes input `perm[p]`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm = Vec::with_capacity(self.block());
        for c in 0..self.cols {
            for r in 0..self.rows {
                perm.push(r * self.cols + c);
            }
        }
        perm
    }

    fn check<T>(&self, data: &[T]) -> Result<()> {
        if self.block() == 0 || data.len() % self.block() != 0 {
            return Err(Error::invalid(format!(
                "length {} is not a multiple of the {}-element interleaver block",
                data.len(),
                self.block()
            )));
        }
        Ok(())
    }

    pub fn interleave<T: Copy>(&self, data: &[T]) -> Result<Vec<T>> {
        self.check(data)?;
        let perm = self.permutation();
        Ok(data
            .chunks(self.block())
            .flat_map(|blk| perm.iter().map(move |&p| blk[p]))
            .collect())
    }

    pub fn deinterleave<T: Copy + Default>(&self, data: &[T]) -> Result<Vec<T>> {
        self.check(data)?;
        let perm = self.permutation();
        let mut out = vec![T::default(); data.len()];
        for (b, blk) in data.chunks(self.block()).enumerate() {
            let base = b * self.block();
            for (p, &src) in perm.iter().enumerate() {
                out[base + src] = blk[p];
            }
        }
        Ok(out)
    }
}
