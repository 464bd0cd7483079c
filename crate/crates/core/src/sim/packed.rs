//! Packed binary sample files.
//!
//! Header, all integers little-endian:
//!
//! | bytes | field                                  |
//! |-------|----------------------------------------|
//! | 8     | magic `SDSMPL01`                       |
//! | 4     | detectors per record                   |
//! | 4     | observables per record                 |
//! | 4     | bits per record (detectors+observables)|
//! | 8     | record count                           |
//!
//! Each record is the detector bits followed by the observable bits, packed
//! least significant bit first and padded to a whole byte.

use std::io::{Read, Write};

use super::frame::Samples;
use crate::error::{Error, Result};
use crate::gf2::BinMatrix;

pub const MAGIC: &[u8; 8] = b"SDSMPL01";

fn record_bytes(bits: usize) -> usize {
    bits.div_ceil(8)
}

pub fn write_samples<W: Write>(mut w: W, s: &Samples) -> Result<()> {
    let (nd, no) = (s.detectors.cols(), s.observables.cols());
    let bits = nd + no;
    w.write_all(MAGIC)?;
    w.write_all(&(nd as u32).to_le_bytes())?;
    w.write_all(&(no as u32).to_le_bytes())?;
    w.write_all(&(bits as u32).to_le_bytes())?;
    w.write_all(&(s.shots() as u64).to_le_bytes())?;
    let mut buf = vec![0u8; record_bytes(bits)];
    for r in 0..s.shots() {
        buf.fill(0);
        let ones = s.detectors.row_support(r).into_iter().chain(s.observables.row_support(r).into_iter().map(|o| o + nd));
        for b in ones {
            buf[b / 8] |= 1 << (b % 8);
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

pub fn read_samples<R: Read>(mut r: R) -> Result<Samples> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Parse("samples: bad magic".into()));
    }
    let mut u32s = [0u32; 3];
    for v in &mut u32s {
        let mut b = [0u8; 4];
        r.read_exact(&mut b)?;
        *v = u32::from_le_bytes(b);
    }
    let [nd, no, bits] = u32s.map(|v| v as usize);
    if bits != nd + no {
        return Err(Error::Parse("samples: bit width disagrees with counts".into()));
    }
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    let shots = u64::from_le_bytes(b) as usize;
    let mut dets = BinMatrix::zeros(shots, nd);
    let mut obs = BinMatrix::zeros(shots, no);
    let mut buf = vec![0u8; record_bytes(bits)];
    for s in 0..shots {
        r.read_exact(&mut buf)?;
        for i in 0..bits {
            if buf[i / 8] >> (i % 8) & 1 == 1 {
                if i < nd {
                    dets.set(s, i, true);
                } else {
                    obs.set(s, i - nd, true);
                }
            }
        }
    }
    Ok(Samples { detectors: dets, observables: obs })
}
