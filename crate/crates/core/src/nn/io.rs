//! Model serialization: magic `CFNET1`, a format version, a JSON spec
//! descriptor, then every parameter tensor as little-endian f64 in
//! declaration order. Round-trips are bit-exact.

use crate::{CoreError, Result};
use std::io::{Read, Write};

const MAGIC: &[u8; 6] = b"CFNET1";
const VERSION: u32 = 1;

/// A serialized network: the spec descriptor (JSON) plus parameter tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct NetBlob {
    pub spec_json: String,
    pub tensors: Vec<Vec<f64>>,
}

pub fn save_net<W: Write>(w: &mut W, spec_json: &str, tensors: &[&Vec<f64>]) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    let spec = spec_json.as_bytes();
    w.write_all(&(spec.len() as u64).to_le_bytes())?;
    w.write_all(spec)?;
    w.write_all(&(tensors.len() as u64).to_le_bytes())?;
    for t in tensors {
        w.write_all(&(t.len() as u64).to_le_bytes())?;
        let mut buf = Vec::with_capacity(t.len() * 8);
        for x in t.iter() {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

pub fn load_net<R: Read>(r: &mut R) -> Result<NetBlob> {
    let mut magic = [0u8; 6];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(CoreError::Format("bad net magic".into()));
    }
    let mut v4 = [0u8; 4];
    r.read_exact(&mut v4)?;
    let version = u32::from_le_bytes(v4);
    if version != VERSION {
        return Err(CoreError::Format(format!("unsupported net version {version}")));
    }
    let mut v8 = [0u8; 8];
    r.read_exact(&mut v8)?;
    let spec_len = u64::from_le_bytes(v8) as usize;
    let mut spec = vec![0u8; spec_len];
    r.read_exact(&mut spec)?;
    let spec_json = String::from_utf8(spec)
        .map_err(|e| CoreError::Format(format!("spec descriptor not utf-8: {e}")))?;

    r.read_exact(&mut v8)?;
    let n_tensors = u64::from_le_bytes(v8) as usize;
    let mut tensors = Vec::with_capacity(n_tensors);
    for _ in 0..n_tensors {
        r.read_exact(&mut v8)?;
        let len = u64::from_le_bytes(v8) as usize;
        let mut raw = vec![0u8; len * 8];
        r.read_exact(&mut raw)?;
        tensors.push(
            raw.chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect(),
        );
    }
    Ok(NetBlob { spec_json, tensors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::{Activation, HasParams, MlpParams, MlpSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::io::Cursor;

    #[test]
    fn save_load_is_bit_exact() {
        let spec = MlpSpec::new(vec![7, 5, 2], Activation::Linear);
        let params = MlpParams::init(spec.clone(), &mut ChaCha8Rng::seed_from_u64(9));
        let spec_json = serde_json::to_string(&spec).unwrap();
        let mut buf = Vec::new();
        save_net(&mut buf, &spec_json, &params.params()).unwrap();

        let blob = load_net(&mut Cursor::new(&buf)).unwrap();
        assert_eq!(blob.spec_json, spec_json);
        let loaded_spec: MlpSpec = serde_json::from_str(&blob.spec_json).unwrap();
        assert_eq!(loaded_spec, spec);
        for (orig, loaded) in params.params().iter().zip(&blob.tensors) {
            assert_eq!(orig.as_slice(), loaded.as_slice());
        }
    }

    #[test]
    fn truncated_blob_is_rejected() {
        let spec = MlpSpec::new(vec![3, 2], Activation::Linear);
        let params = MlpParams::init(spec.clone(), &mut ChaCha8Rng::seed_from_u64(1));
        let mut buf = Vec::new();
        save_net(&mut buf, "{}", &params.params()).unwrap();
        buf.truncate(buf.len() - 5);
        assert!(load_net(&mut Cursor::new(&buf)).is_err());
    }
}
