//! Named tensor-factor bookkeeping for composite operators.
//!
//! A layout records an ordered list of factor names and dimensions. Composite
//! indices enumerate the rightmost factor fastest, so the dense matrix of a
//! product `A (x) B` is the usual Kronecker product.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemLayout {
    names: Vec<String>,
    dims: Vec<usize>,
}

impl SubsystemLayout {
    pub fn new<S: Into<String>>(factors: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut names = Vec::new();
        let mut dims = Vec::new();
        for (name, dim) in factors {
            let name = name.into();
            if names.contains(&name) {
                return Err(Error::DuplicateFactor(name));
            }
            names.push(name);
            dims.push(dim);
        }
        Ok(Self { names, dims })
    }

    /// Single-factor layout.
    pub fn single(name: &str, dim: usize) -> Self {
        Self {
            names: vec![name.to_string()],
            dims: vec![dim],
        }
    }

    /// Total dimension (product of factor dimensions).
    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn factor_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownFactor(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }

    pub fn factor_dim(&self, name: &str) -> Result<usize> {
        Ok(self.dims[self.position(name)?])
    }

    /// Layout with the factor at `pos` removed.
    pub fn without(&self, pos: usize) -> SubsystemLayout {
        let mut names = self.names.clone();
        let mut dims = self.dims.clone();
        names.remove(pos);
        dims.remove(pos);
        SubsystemLayout { names, dims }
    }

    /// Concatenation, left factors first. Fails on a name collision.
    pub fn concat(&self, other: &SubsystemLayout) -> Result<SubsystemLayout> {
        let mut names = self.names.clone();
        let mut dims = self.dims.clone();
        for (name, &dim) in other.names.iter().zip(&other.dims) {
            if names.contains(name) {
                return Err(Error::DuplicateFactor(name.clone()));
            }
            names.push(name.clone());
            dims.push(dim);
        }
        Ok(SubsystemLayout { names, dims })
    }

    /// Splits the composite index space around the factor at `pos` into
    /// (left block count, factor dimension, right block count), so that a
    /// composite index decomposes as `(left * d + k) * right + r`.
    pub(crate) fn split_at(&self, pos: usize) -> (usize, usize, usize) {
        let left: usize = self.dims[..pos].iter().product();
        let right: usize = self.dims[pos + 1..].iter().product();
        (left, self.dims[pos], right)
    }
}
