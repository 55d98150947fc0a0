use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Positive integer vertex weights `(w_1, ..., w_n)` with cached total `W`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector {
    w: Vec<u64>,
    total: u64,
}

impl WeightVector {
    pub fn new(w: Vec<u64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::MalformedInput("weight vector is empty".into()));
        }
        if let Some(i) = w.iter().position(|&x| x == 0) {
            return Err(Error::MalformedInput(format!(
                "weight w_{} is zero; weights must be positive",
                i + 1
            )));
        }
        let total = w
            .iter()
            .try_fold(0u64, |acc, &x| acc.checked_add(x))
            .ok_or_else(|| Error::MalformedInput("weight total overflows u64".into()))?;
        Ok(WeightVector { w, total })
    }

    pub fn unit(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `W`, the sum of all weights.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn weights(&self) -> &[u64] {
        &self.w
    }

    /// Weight of the 1-based vertex `v`.
    pub fn weight(&self, v: usize) -> u64 {
        self.w[v - 1]
    }

    /// Total weight of a vertex bitset (bit `v - 1` for vertex `v`).
    pub fn weight_of_mask(&self, mask: u64) -> u64 {
        crate::graph::BitIter(mask).map(|b| self.w[b]).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.w.iter().all(|&x| x == 1)
    }

    pub fn product(&self) -> BigUint {
        self.w.iter().fold(BigUint::from(1u32), |acc, &x| acc * x)
    }

    /// The sub-vector on the given 1-based vertices, in the given order.
    pub fn restrict(&self, vertices: &[usize]) -> Result<Self> {
        Self::new(vertices.iter().map(|&v| self.w[v - 1]).collect())
    }

    /// Same vector with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Result<Self> {
        Self::new(self.w.iter().map(|&x| x * factor).collect())
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.w.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Parses the comma-separated form, e.g. `"2,1,3"`.
impl FromStr for WeightVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let w = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::MalformedInput(format!("bad weight {part:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(w)
    }
}
