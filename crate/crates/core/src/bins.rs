//! Regular partition of `[0,1]^d` into `k^d` hypercubes of side `h = 1/k`.

use alloc::vec::Vec;

use crate::{Error, Result};

/// A regular grid over the unit cube. Stores the integer `k` so that `1/h` is
/// always an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinGrid {
    d_x: usize,
    k: usize,
}

/// Integer coordinates of one bin, each in `[0, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinIndex {
    pub coords: Vec<usize>,
}

impl BinGrid {
    pub fn new(d_x: usize, k: usize) -> Result<Self> {
        if d_x == 0 {
            return Err(Error::InvalidDimension("covariate dimension must be at least 1"));
        }
        if k == 0 {
            return Err(Error::InvalidDimension("bins per axis must be at least 1"));
        }
        if (k as u128).checked_pow(d_x as u32).is_none_or(|n| n > usize::MAX as u128) {
            return Err(Error::InvalidDimension("bin count overflows usize"));
        }
        Ok(Self { d_x, k })
    }

    pub fn d_x(&self) -> usize {
        self.d_x
    }

    pub fn bins_per_axis(&self) -> usize {
        self.k
    }

    pub fn side(&self) -> f64 {
        1.0 / self.k as f64
    }

    pub fn bin_count(&self) -> usize {
        self.k.pow(self.d_x as u32)
    }

    /// Bin containing `x`. Coordinates equal to 1.0 fold into the last bin.
    pub fn locate(&self, x: &[f64]) -> Result<BinIndex> {
        self.check_point(x)?;
        let coords = x.iter().map(|&v| self.axis_cell(v)).collect();
        Ok(BinIndex { coords })
    }

    /// Flat index of the bin containing `x`; avoids allocating a [`BinIndex`].
    pub fn locate_flat(&self, x: &[f64]) -> Result<usize> {
        self.check_point(x)?;
        Ok(x.iter().fold(0, |acc, &v| acc * self.k + self.axis_cell(v)))
    }

    fn axis_cell(&self, v: f64) -> usize {
        let c = libm::floor(v * self.k as f64) as usize;
        c.min(self.k - 1)
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.d_x {
            return Err(Error::LengthMismatch { expected: self.d_x, found: x.len() });
        }
        for &v in x {
            if !v.is_finite() {
                return Err(Error::NonFinite("covariate"));
            }
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::OutOfRange { what: "covariate coordinate", value: v });
            }
        }
        Ok(())
    }

    fn check_index(&self, bin: &BinIndex) -> Result<()> {
        if bin.coords.len() != self.d_x {
            return Err(Error::LengthMismatch { expected: self.d_x, found: bin.coords.len() });
        }
        if let Some(&c) = bin.coords.iter().find(|&&c| c >= self.k) {
            return Err(Error::OutOfRange { what: "bin coordinate", value: c as f64 });
        }
        Ok(())
    }

    /// Mixed-radix encoding, first coordinate most significant.
    pub fn flat_index(&self, bin: &BinIndex) -> Result<usize> {
        self.check_index(bin)?;
        Ok(bin.coords.iter().fold(0, |acc, &c| acc * self.k + c))
    }

    pub fn from_flat(&self, mut flat: usize) -> Result<BinIndex> {
        if flat >= self.bin_count() {
            return Err(Error::OutOfRange { what: "flat bin index", value: flat as f64 });
        }
        let mut coords = alloc::vec![0; self.d_x];
        for c in coords.iter_mut().rev() {
            *c = flat % self.k;
            flat /= self.k;
        }
        Ok(BinIndex { coords })
    }

    pub fn bin_center(&self, bin: &BinIndex) -> Result<Vec<f64>> {
        self.check_index(bin)?;
        let h = self.side();
        Ok(bin.coords.iter().map(|&c| (c as f64 + 0.5) * h).collect())
    }

    pub fn bin_lower(&self, bin: &BinIndex) -> Result<Vec<f64>> {
        self.check_index(bin)?;
        let h = self.side();
        Ok(bin.coords.iter().map(|&c| c as f64 * h).collect())
    }

    /// Whether `x` lies in the closed hypercube of `bin`.
    pub fn contains(&self, bin: &BinIndex, x: &[f64]) -> Result<bool> {
        let lower = self.bin_lower(bin)?;
        if x.len() != self.d_x {
            return Err(Error::LengthMismatch { expected: self.d_x, found: x.len() });
        }
        let h = self.side();
        Ok(x.iter().zip(&lower).all(|(&v, &lo)| v >= lo && v <= lo + h))
    }

    /// Bin-normalized covariate `U = (x - C_B) / h`, each component in
    /// `[-1/2, 1/2]`.
    pub fn normalize(&self, bin: &BinIndex, x: &[f64]) -> Result<Vec<f64>> {
        if self.locate(x)? != *bin {
            return Err(Error::NotInBin);
        }
        let h = self.side();
        let center = self.bin_center(bin)?;
        Ok(x.iter().zip(&center).map(|(&v, &c)| (v - c) / h).collect())
    }

    /// Iterator over all bins in flat-index order.
    pub fn iter(&self) -> impl Iterator<Item = BinIndex> + '_ {
        (0..self.bin_count()).map(move |f| self.from_flat(f).expect("flat index in range"))
    }
}
