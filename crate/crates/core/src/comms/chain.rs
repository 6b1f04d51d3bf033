//! Frame-level coding: convolutional code, interleaving and 4-QAM mapping
//! onto the data positions of a multicarrier frame.

use rand::Rng;

use super::conv::ConvCode;
use super::interleaver::Interleaver;
use super::qam::{qam_demap_hard, qam_llr, qam_map, qam_random};
use crate::error::{Error, Result};
use crate::estimators::PilotSet;
use crate::frame::SymbolGrid;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CodecConfig {
    pub code: ConvCode,
    pub interleaver: Interleaver,
    /// Max-log soft demapping instead of hard decisions.
    pub soft: bool,
}

/// Data positions of a frame (row-major, pilots excluded) and the number of
/// information bits carried by the whole interleaver blocks that fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameLayout {
    pub l: usize,
    pub k: usize,
    pub data_positions: Vec<(usize, usize)>,
    pub blocks: usize,
    pub info_bits: usize,
}

impl FrameLayout {
    pub fn new(l: usize, k: usize, pilots: &PilotSet, codec: &CodecConfig) -> Result<Self> {
        let mask = pilots.mask(l, k);
        let data_positions: Vec<(usize, usize)> = (0..l)
            .flat_map(|li| (0..k).map(move |ki| (li, ki)))
            .filter(|&(li, ki)| !mask[li * k + ki])
            .collect();
        let block = codec.interleaver.block();
        if block % 2 != 0 {
            return Err(Error::invalid("interleaver block must hold whole 4-QAM symbols"));
        }
        let blocks = 2 * data_positions.len() / block;
        let tail = codec.code.memory();
        if blocks == 0 || blocks * block / 2 <= tail {
            return Err(Error::invalid("frame too small for one coded block"));
        }
        Ok(FrameLayout {
            l,
            k,
            data_positions,
            blocks,
            info_bits: blocks * block / 2 - tail,
        })
    }

    /// Symbols carrying coded bits; the remaining data positions are filler.
    pub fn coded_symbols(&self, codec: &CodecConfig) -> usize {
        self.blocks * codec.interleaver.block() / 2
    }
}

/// Encodes, interleaves and maps `bits` onto the data positions; pilots are
/// placed at their positions and leftover data positions get random filler
/// symbols from `rng`.
pub fn encode_chain<R: Rng + ?Sized>(
    bits: &[u8],
    layout: &FrameLayout,
    pilots: &PilotSet,
    codec: &CodecConfig,
    rng: &mut R,
) -> Result<SymbolGrid> {
    if bits.len() != layout.info_bits {
        return Err(Error::mismatch("encode_chain", layout.info_bits, bits.len()));
    }
    let coded = codec.code.encode(bits);
    let inter = codec.interleaver.interleave(&coded)?;
    let symbols = qam_map(&inter);
    let mut grid = SymbolGrid::zeros(layout.l, layout.k);
    for (idx, &(l, k)) in layout.data_positions.iter().enumerate() {
        let v = symbols.get(idx).copied().unwrap_or_else(|| qam_random(rng));
        grid.set(l, k, v);
    }
    pilots.place(&mut grid);
    Ok(grid)
}

/// Demaps the equalized data symbols, deinterleaves and decodes. `noise_var`
/// scales the soft metric and is ignored for hard decisions.
pub fn decode_chain(soft: &SymbolGrid, layout: &FrameLayout, codec: &CodecConfig, noise_var: f64) -> Result<Vec<u8>> {
    if soft.rows() != layout.l || soft.cols() != layout.k {
        return Err(Error::mismatch("decode_chain", layout.l * layout.k, soft.rows() * soft.cols()));
    }
    let n = layout.coded_symbols(codec);
    let symbols: Vec<C64> = layout.data_positions[..n].iter().map(|&(l, k)| soft.get(l, k)).collect();
    if codec.soft {
        let llr = qam_llr(&symbols, noise_var);
        let de = codec.interleaver.deinterleave(&llr)?;
        codec.code.decode_soft(&de)
    } else {
        let hard = qam_demap_hard(&symbols);
        let de = codec.interleaver.deinterleave(&hard)?;
        codec.code.decode_hard(&de)
    }
}
