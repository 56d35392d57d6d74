use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BINARY_MAGIC: &[u8; 4] = b"MNT1";

/// Dense d-dimensional real array. Axis 0 varies fastest in `data`, so a
/// contiguous run of `shape[0]` entries is one innermost fibre.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<f64>,
}

impl Tensor {
    pub fn new(shape: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        if shape.is_empty() {
            return Err(Error::InvalidInput("tensor must have at least one axis".into()));
        }
        if shape.iter().any(|&k| k == 0) {
            return Err(Error::InvalidInput(format!("shape {shape:?} has a zero extent")));
        }
        let len: usize = shape.iter().product();
        if len != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "shape {shape:?} needs {len} entries, got {}",
                data.len()
            )));
        }
        Ok(Tensor { shape, data })
    }

    pub fn zeros(shape: Vec<usize>) -> Result<Self> {
        let len = shape.iter().product();
        Self::new(shape, vec![0.0; len])
    }

    /// Builds a tensor by evaluating `f` on every multi-index.
    pub fn from_fn(shape: Vec<usize>, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let len: usize = shape.iter().product();
        let mut data = Vec::with_capacity(len);
        let mut idx = vec![0usize; shape.len()];
        for _ in 0..len {
            data.push(f(&idx));
            for (i, k) in idx.iter_mut().zip(&shape) {
                *i += 1;
                if *i < *k {
                    break;
                }
                *i = 0;
            }
        }
        Self::new(shape, data)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn d(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        let mut off = 0;
        for (j, (&i, &k)) in idx.iter().zip(&self.shape).enumerate().rev() {
            debug_assert!(i < k, "index {i} out of range on axis {j}");
            off = off * k + i;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let off = self.offset(idx);
        self.data[off] = v;
    }

    pub fn scaled(&self, alpha: f64) -> Tensor {
        Tensor { shape: self.shape.clone(), data: self.data.iter().map(|v| alpha * v).collect() }
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        if self.shape != other.shape {
            return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", self.shape, other.shape)));
        }
        Ok(Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn dot(&self, other: &Tensor) -> Result<f64> {
        if self.shape != other.shape {
            return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", self.shape, other.shape)));
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    /// Reorders axes: axis `j` of the result is axis `perm[j]` of `self`.
    pub fn permute_axes(&self, perm: &[usize]) -> Result<Tensor> {
        let d = self.d();
        let mut seen = vec![false; d];
        if perm.len() != d || perm.iter().any(|&a| a >= d || std::mem::replace(&mut seen[a], true)) {
            return Err(Error::InvalidInput(format!("{perm:?} is not a permutation of {d} axes")));
        }
        let shape: Vec<usize> = perm.iter().map(|&a| self.shape[a]).collect();
        let mut src = vec![0usize; d];
        Tensor::from_fn(shape, |idx| {
            for (j, &a) in perm.iter().enumerate() {
                src[a] = idx[j];
            }
            self.get(&src)
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Tensor> {
        #[derive(Deserialize)]
        struct Raw {
            shape: Vec<usize>,
            data: Vec<f64>,
        }
        let raw: Raw = serde_json::from_str(s)?;
        Tensor::new(raw.shape, raw.data)
    }

    /// Layout: `b"MNT1"`, `u32` axis count, one `u64` per extent, then the
    /// entries as `f64`, all little-endian, in the in-memory order.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(BINARY_MAGIC)?;
        w.write_all(&(self.shape.len() as u32).to_le_bytes())?;
        for &k in &self.shape {
            w.write_all(&(k as u64).to_le_bytes())?;
        }
        for v in &self.data {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Tensor> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != BINARY_MAGIC {
            return Err(Error::Parse("bad tensor magic".into()));
        }
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        let d = u32::from_le_bytes(b4) as usize;
        if d == 0 || d > 64 {
            return Err(Error::Parse(format!("implausible axis count {d}")));
        }
        let mut b8 = [0u8; 8];
        let mut shape = Vec::with_capacity(d);
        for _ in 0..d {
            r.read_exact(&mut b8)?;
            shape.push(u64::from_le_bytes(b8) as usize);
        }
        let len = shape
            .iter()
            .try_fold(1usize, |acc, &k| acc.checked_mul(k))
            .ok_or_else(|| Error::Parse("shape overflows".into()))?;
        let mut data = Vec::with_capacity(len.min(1 << 24));
        for _ in 0..len {
            r.read_exact(&mut b8)?;
            data.push(f64::from_le_bytes(b8));
        }
        Tensor::new(shape, data)
    }
}
