//! Rate-1/2 feedforward convolutional code with terminated-trellis Viterbi
//! decoding.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvCode {
    /// Octal generators, most significant bit on the current input.
    pub g0: u32,
    pub g1: u32,
    pub constraint: usize,
}

impl Default for ConvCode {
    fn default() -> Self {
        ConvCode {
            g0: 0o133,
            g1: 0o171,
            constraint: 7,
        }
    }
}

impl ConvCode {
    pub fn new(g0: u32, g1: u32, constraint: usize) -> Result<Self> {
        if !(2..=16).contains(&constraint) {
            return Err(Error::invalid(format!("constraint length {constraint} outside 2..=16")));
        }
        let limit = 1u32 << constraint;
        if g0 == 0 || g1 == 0 || g0 >= limit || g1 >= limit {
            return Err(Error::invalid("generators must be nonzero and fit the constraint length"));
        }
        Ok(ConvCode { g0, g1, constraint })
    }

    pub fn memory(&self) -> usize {
        self.constraint - 1
    }

    fn states(&self) -> usize {
        1 << self.memory()
    }

    /// Output pair for `state` (previous inputs, newest in the top bit) and
    /// input `b`.
    fn output(&self, state: usize, b: u8) -> (u8, u8) {
        let reg = ((b as u32) << self.memory()) | state as u32;
        (((reg & self.g0).count_ones() & 1) as u8, ((reg & self.g1).count_ones() & 1) as u8)
    }

    fn next_state(&self, state: usize, b: u8) -> usize {
        ((b as usize) << (self.memory() - 1)) | (state >> 1)
    }

    /// Encodes `bits` followed by `memory` zero tail bits; output length is
    /// `2 (bits.len() + memory)`.
    pub fn encode(&self, bits: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(2 * (bits.len() + self.memory()));
        let mut state = 0usize;
        for &b in bits.iter().chain(std::iter::repeat_n(&0u8, self.memory())) {
            let (c0, c1) = self.output(state, b & 1);
            out.push(c0);
            out.push(c1);
            state = self.next_state(state, b & 1);
        }
        out
    }

    /// Hard-decision decoding (Hamming branch metric).
    pub fn decode_hard(&self, coded: &[u8]) -> Result<Vec<u8>> {
        let metric: Vec<f64> = coded.iter().map(|&c| if c & 1 == 0 { 1.0 } else { -1.0 }).collect();
        self.decode_soft(&metric)
    }

    /// Decoding from per-bit reliabilities (positive favors 0). Hard bits
    /// map to +-1, so the correlation metric reduces to Hamming distance.
    pub fn decode_soft(&self, llr: &[f64]) -> Result<Vec<u8>> {
        if llr.len() % 2 != 0 || llr.len() < 2 * self.memory() {
            return Err(Error::invalid(format!("coded length {} is not a terminated codeword", llr.len())));
        }
        let steps = llr.len() / 2;
        let ns = self.states();
        let mut table = Vec::with_capacity(ns * 2);
        for s in 0..ns {
            for b in 0..2u8 {
                let (c0, c1) = self.output(s, b);
                table.push((self.next_state(s, b), c0, c1));
            }
        }
        let neg = f64::NEG_INFINITY;
        let mut metric = vec![neg; ns];
        metric[0] = 0.0;
        let mut next = vec![neg; ns];
        // survivor: previous state and input bit per (step, state)
        let mut surv = vec![(0u32, 0u8); steps * ns];
        for t in 0..steps {
            let (l0, l1) = (llr[2 * t], llr[2 * t + 1]);
            next.iter_mut().for_each(|m| *m = neg);
            for s in 0..ns {
                let m = metric[s];
                if m == neg {
                    continue;
                }
                for b in 0..2u8 {
                    let (ns2, c0, c1) = table[s * 2 + b as usize];
                    let gain = if c0 == 0 { l0 } else { -l0 } + if c1 == 0 { l1 } else { -l1 };
                    let cand = m + gain;
                    if cand > next[ns2] {
                        next[ns2] = cand;
                        surv[t * ns + ns2] = (s as u32, b);
                    }
                }
            }
            std::mem::swap(&mut metric, &mut next);
        }
        let mut bits = vec![0u8; steps];
        let mut state = 0usize;
        for t in (0..steps).rev() {
            let (prev, b) = surv[t * ns + state];
            bits[t] = b;
            state = prev as usize;
        }
        bits.truncate(steps - self.memory());
        Ok(bits)
    }
}
