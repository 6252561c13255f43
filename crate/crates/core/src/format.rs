//! On-disk formats.
//!
//! `.bwt`: magic `GAPBWT1\n`, `n: u64 LE`, `k: u64 LE` (number of strings),
//! then `n` symbol bytes with every sentinel written as `0x00`.
//!
//! `.lcp`: magic `GAPLCP1\n`, `n: u64 LE`, then `n` values as `u32 LE`. The
//! first slot, `-1` in memory, is stored as `0`; the trailing bookend is not
//! stored.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::text::{BwtString, LcpArray};

pub const BWT_MAGIC: &[u8; 8] = b"GAPBWT1\n";
pub const LCP_MAGIC: &[u8; 8] = b"GAPLCP1\n";

pub fn bwt_path(prefix: &Path) -> PathBuf {
    with_suffix(prefix, ".bwt")
}

pub fn lcp_path(prefix: &Path) -> PathBuf {
    with_suffix(prefix, ".lcp")
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn read_magic<R: Read>(r: &mut R, magic: &[u8; 8]) -> Result<()> {
    let mut got = [0u8; 8];
    r.read_exact(&mut got).map_err(truncated)?;
    if &got != magic {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&got),
            String::from_utf8_lossy(magic)
        )));
    }
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf).map_err(truncated)?;
    Ok(u64::from_le_bytes(buf))
}

fn truncated(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::Format("file truncated".into())
    } else {
        Error::Io(e)
    }
}

fn expect_eof<R: Read>(r: &mut R) -> Result<()> {
    let mut probe = [0u8; 1];
    match r.read(&mut probe)? {
        0 => Ok(()),
        _ => Err(Error::Format("trailing bytes after payload".into())),
    }
}

pub fn write_bwt<W: Write>(w: &mut W, bwt: &BwtString) -> Result<()> {
    w.write_all(BWT_MAGIC)?;
    w.write_all(&(bwt.len() as u64).to_le_bytes())?;
    w.write_all(&(bwt.string_count() as u64).to_le_bytes())?;
    w.write_all(&bwt.to_external())?;
    Ok(())
}

/// Reads a BWT; every sentinel comes back as code 0.
pub fn read_bwt<R: Read>(r: &mut R) -> Result<BwtString> {
    read_magic(r, BWT_MAGIC)?;
    let n = read_u64(r)? as usize;
    let k = read_u64(r)? as usize;
    let mut symbols = vec![0u8; n];
    r.read_exact(&mut symbols).map_err(truncated)?;
    expect_eof(r)?;
    if let Some(i) = symbols.iter().position(|&c| c == 1) {
        return Err(Error::Format(format!("reserved byte 0x01 at symbol {i}")));
    }
    let bwt = BwtString::new(symbols);
    if bwt.string_count() != k {
        return Err(Error::Format(format!(
            "header declares {k} strings but {} sentinels found",
            bwt.string_count()
        )));
    }
    Ok(bwt)
}

pub fn write_lcp<W: Write>(w: &mut W, lcp: &LcpArray) -> Result<()> {
    let n = lcp.rows();
    w.write_all(LCP_MAGIC)?;
    w.write_all(&(n as u64).to_le_bytes())?;
    let mut buf = Vec::with_capacity(4 * n);
    for (i, &v) in lcp.values()[..n].iter().enumerate() {
        let stored = if i == 0 { 0 } else { v };
        let stored = u32::try_from(stored).map_err(|_| {
            Error::Format(format!("LCP value {v} at row {i} does not fit in 32 bits"))
        })?;
        buf.extend_from_slice(&stored.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_lcp<R: Read>(r: &mut R) -> Result<LcpArray> {
    read_magic(r, LCP_MAGIC)?;
    let n = read_u64(r)? as usize;
    if n == 0 {
        return Err(Error::Format("empty LCP array".into()));
    }
    let mut raw = vec![0u8; 4 * n];
    r.read_exact(&mut raw).map_err(truncated)?;
    expect_eof(r)?;
    let mut values = Vec::with_capacity(n + 1);
    values.push(-1);
    values.extend(
        raw.chunks_exact(4)
            .skip(1)
            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]) as i64),
    );
    values.push(-1);
    LcpArray::from_values(values)
}

pub fn save_bwt(path: &Path, bwt: &BwtString) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_bwt(&mut w, bwt)?;
    w.flush()?;
    Ok(())
}

pub fn load_bwt(path: &Path) -> Result<BwtString> {
    read_bwt(&mut BufReader::new(File::open(path)?))
}

pub fn save_lcp(path: &Path, lcp: &LcpArray) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_lcp(&mut w, lcp)?;
    w.flush()?;
    Ok(())
}

pub fn load_lcp(path: &Path) -> Result<LcpArray> {
    read_lcp(&mut BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{bwt_and_lcp, Text};
    use proptest::prelude::*;

    #[test]
    fn bwt_layout() {
        let (bwt, _) = bwt_and_lcp(&Text::from_raw(b"abcab", 0).unwrap());
        let mut out = Vec::new();
        write_bwt(&mut out, &bwt).unwrap();
        assert_eq!(&out[..8], b"GAPBWT1\n");
        assert_eq!(&out[8..16], &6u64.to_le_bytes());
        assert_eq!(&out[16..24], &1u64.to_le_bytes());
        assert_eq!(&out[24..], b"bc\x00aab");
    }

    #[test]
    fn lcp_layout() {
        let (_, lcp) = bwt_and_lcp(&Text::from_raw(b"abcab", 0).unwrap());
        let mut out = Vec::new();
        write_lcp(&mut out, &lcp).unwrap();
        assert_eq!(&out[..8], b"GAPLCP1\n");
        assert_eq!(&out[8..16], &6u64.to_le_bytes());
        let vals: Vec<u32> = out[16..]
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        assert_eq!(vals, vec![0, 0, 2, 0, 1, 0]);
        assert_eq!(read_lcp(&mut &out[..]).unwrap(), lcp);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(
            read_bwt(&mut &b"GAPBWT2\n"[..]),
            Err(Error::Format(_))
        ));
        let mut out = Vec::new();
        write_bwt(&mut out, &BwtString::new(vec![0, b'a'])).unwrap();
        assert!(matches!(
            read_bwt(&mut &out[..out.len() - 1]),
            Err(Error::Format(_))
        ));
        let mut extra = out.clone();
        extra.push(b'x');
        assert!(matches!(read_bwt(&mut &extra[..]), Err(Error::Format(_))));
        let mut wrong_k = out.clone();
        wrong_k[16] = 2;
        assert!(matches!(read_bwt(&mut &wrong_k[..]), Err(Error::Format(_))));
        let mut reserved = out;
        reserved[25] = 1;
        assert!(matches!(
            read_bwt(&mut &reserved[..]),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn sentinels_are_externalized() {
        let merged = BwtString::new(vec![b'b', 1, 0, b'a']);
        let mut out = Vec::new();
        write_bwt(&mut out, &merged).unwrap();
        assert_eq!(&out[16..24], &2u64.to_le_bytes());
        assert_eq!(
            read_bwt(&mut &out[..]).unwrap().symbols(),
            &[b'b', 0, 0, b'a']
        );
    }

    proptest! {
        #[test]
        fn files_round_trip(raw in proptest::collection::vec(2u8.., 0..200)) {
            let (bwt, lcp) = bwt_and_lcp(&Text::from_raw(&raw, 0).unwrap());
            let mut b = Vec::new();
            write_bwt(&mut b, &bwt).unwrap();
            prop_assert_eq!(read_bwt(&mut &b[..]).unwrap(), bwt);
            let mut l = Vec::new();
            write_lcp(&mut l, &lcp).unwrap();
            prop_assert_eq!(read_lcp(&mut &l[..]).unwrap(), lcp);
        }
    }
}
