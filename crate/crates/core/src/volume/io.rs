//! Volume and image file formats.
//!
//! Volume: magic `CFVOL1`, dims as three u32 LE, spacing as three f64 LE, a
//! one-byte dtype tag (0 = u8, 1 = f32), then raw voxel data v1-major.
//! Image: magic `CFIMG1`, dims as two u32 LE, spacing as two f64 LE, dtype
//! tag, then raw pixel data first-dim-major.

use super::{BinaryVolume, Image2D, VoxelVolume};
use crate::{CoreError, Result};
use std::io::{Read, Write};

const VOL_MAGIC: &[u8; 6] = b"CFVOL1";
const IMG_MAGIC: &[u8; 6] = b"CFIMG1";
const DTYPE_U8: u8 = 0;
const DTYPE_F32: u8 = 1;

pub enum AnyVolume {
    Scalar(VoxelVolume),
    Binary(BinaryVolume),
}

fn write_vol_header<W: Write>(
    w: &mut W,
    dims: [usize; 3],
    spacing: [f64; 3],
    dtype: u8,
) -> Result<()> {
    w.write_all(VOL_MAGIC)?;
    for d in dims {
        w.write_all(&(d as u32).to_le_bytes())?;
    }
    for s in spacing {
        w.write_all(&s.to_le_bytes())?;
    }
    w.write_all(&[dtype])?;
    Ok(())
}

pub fn write_volume<W: Write>(w: &mut W, vol: &AnyVolume) -> Result<()> {
    match vol {
        AnyVolume::Binary(b) => {
            write_vol_header(w, b.dims, b.spacing_mm, DTYPE_U8)?;
            w.write_all(&b.data)?;
        }
        AnyVolume::Scalar(v) => {
            write_vol_header(w, v.dims, v.spacing_mm, DTYPE_F32)?;
            let mut buf = Vec::with_capacity(v.data.len() * 4);
            for x in &v.data {
                buf.extend_from_slice(&x.to_le_bytes());
            }
            w.write_all(&buf)?;
        }
    }
    Ok(())
}

fn read_exact_array<R: Read, const N: usize>(r: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)?;
    Ok(buf)
}

fn read_vol_header<R: Read>(r: &mut R) -> Result<([usize; 3], [f64; 3], u8)> {
    let magic = read_exact_array::<_, 6>(r)?;
    if &magic != VOL_MAGIC {
        return Err(CoreError::Format("bad volume magic".into()));
    }
    let mut dims = [0usize; 3];
    for d in &mut dims {
        *d = u32::from_le_bytes(read_exact_array::<_, 4>(r)?) as usize;
    }
    let mut spacing = [0f64; 3];
    for s in &mut spacing {
        *s = f64::from_le_bytes(read_exact_array::<_, 8>(r)?);
    }
    let dtype = read_exact_array::<_, 1>(r)?[0];
    Ok((dims, spacing, dtype))
}

pub fn read_volume<R: Read>(r: &mut R) -> Result<AnyVolume> {
    let (dims, spacing, dtype) = read_vol_header(r)?;
    let n = dims[0] * dims[1] * dims[2];
    match dtype {
        DTYPE_U8 => {
            let mut data = vec![0u8; n];
            r.read_exact(&mut data)?;
            Ok(AnyVolume::Binary(BinaryVolume::new(dims, spacing, data)?))
        }
        DTYPE_F32 => {
            let mut raw = vec![0u8; n * 4];
            r.read_exact(&mut raw)?;
            let data = raw
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
                .collect();
            Ok(AnyVolume::Scalar(VoxelVolume::new(dims, spacing, data)?))
        }
        other => Err(CoreError::Format(format!("unknown dtype tag {other}"))),
    }
}

pub fn read_volume_bin<R: Read>(r: &mut R) -> Result<BinaryVolume> {
    match read_volume(r)? {
        AnyVolume::Binary(b) => Ok(b),
        AnyVolume::Scalar(_) => Err(CoreError::Format("expected u8 volume, got f32".into())),
    }
}

pub fn read_volume_f32<R: Read>(r: &mut R) -> Result<VoxelVolume> {
    match read_volume(r)? {
        AnyVolume::Scalar(v) => Ok(v),
        AnyVolume::Binary(_) => Err(CoreError::Format("expected f32 volume, got u8".into())),
    }
}

pub fn write_image<W: Write>(w: &mut W, img: &Image2D) -> Result<()> {
    w.write_all(IMG_MAGIC)?;
    for d in img.dims {
        w.write_all(&(d as u32).to_le_bytes())?;
    }
    for s in img.spacing_mm {
        w.write_all(&s.to_le_bytes())?;
    }
    w.write_all(&[DTYPE_F32])?;
    let mut buf = Vec::with_capacity(img.data.len() * 4);
    for x in &img.data {
        buf.extend_from_slice(&(*x as f32).to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_image<R: Read>(r: &mut R) -> Result<Image2D> {
    let magic = read_exact_array::<_, 6>(r)?;
    if &magic != IMG_MAGIC {
        return Err(CoreError::Format("bad image magic".into()));
    }
    let mut dims = [0usize; 2];
    for d in &mut dims {
        *d = u32::from_le_bytes(read_exact_array::<_, 4>(r)?) as usize;
    }
    let mut spacing = [0f64; 2];
    for s in &mut spacing {
        *s = f64::from_le_bytes(read_exact_array::<_, 8>(r)?);
    }
    let dtype = read_exact_array::<_, 1>(r)?[0];
    if dtype != DTYPE_F32 {
        return Err(CoreError::Format(format!("unknown image dtype {dtype}")));
    }
    let n = dims[0] * dims[1];
    let mut raw = vec![0u8; n * 4];
    r.read_exact(&mut raw)?;
    let data = raw
        .chunks_exact(4)
        .map(|c| f64::from(f32::from_le_bytes([c[0], c[1], c[2], c[3]])))
        .collect();
    Image2D::new(dims, spacing, data)
}
