//! Per-utterance feature cache (`MFRM`): frame_count u32, D u32, then
//! row-major little-endian f32.

use crate::bytes::{Reader, Writer};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"MFRM";

pub fn write_frame_cache(rows: &[Vec<f64>]) -> Vec<u8> {
    let d = rows.first().map(Vec::len).unwrap_or(0);
    let mut w = Writer::new();
    w.bytes(MAGIC);
    w.u32(rows.len() as u32);
    w.u32(d as u32);
    for row in rows {
        debug_assert_eq!(row.len(), d);
        for &v in row {
            w.f32(v as f32);
        }
    }
    w.into_vec()
}

pub fn read_frame_cache(bytes: &[u8]) -> Result<Vec<Vec<f64>>> {
    let mut r = Reader::new(bytes);
    if r.take(4)? != MAGIC {
        return Err(Error::BadArtifact("MFRM magic mismatch".into()));
    }
    let frames = r.u32()? as usize;
    let d = r.u32()? as usize;
    let mut rows = Vec::with_capacity(frames);
    for _ in 0..frames {
        let mut row = Vec::with_capacity(d);
        for _ in 0..d {
            row.push(r.f32()? as f64);
        }
        rows.push(row);
    }
    r.expect_end()?;
    Ok(rows)
}
