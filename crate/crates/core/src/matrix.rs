//! Dense nonnegative matrices.

use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A dense, non-empty matrix whose entries are finite and nonnegative.
///
/// Used for observed data, scale-parameter fields, masks and NMF factors.
#[derive(Debug, Clone, PartialEq)]
pub struct NonnegMatrix<S> {
    data: Array2<S>,
}

impl<S: Scalar> NonnegMatrix<S> {
    pub fn new(data: Array2<S>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::domain("matrix must have at least one row and one column"));
        }
        if let Some(((r, c), v)) = data
            .indexed_iter()
            .find(|(_, v)| !(v.is_finite() && **v >= S::zero()))
        {
            return Err(Error::domain(format!(
                "entry ({r}, {c}) = {v} is not a finite nonnegative number"
            )));
        }
        Ok(Self { data })
    }

    pub fn from_shape_vec(rows: usize, cols: usize, values: Vec<S>) -> Result<Self> {
        let data = Array2::from_shape_vec((rows, cols), values)
            .map_err(|e| Error::domain(format!("cannot shape {rows}x{cols} matrix: {e}")))?;
        Self::new(data)
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::domain("rows have differing lengths"));
        }
        Self::from_shape_vec(rows.len(), cols, rows.concat())
    }

    pub fn filled(rows: usize, cols: usize, value: S) -> Result<Self> {
        Self::new(Array2::from_elem((rows, cols), value))
    }

    /// Builds a matrix from an array already known to satisfy the invariants.
    pub(crate) fn from_array_unchecked(data: Array2<S>) -> Self {
        debug_assert!(!data.is_empty());
        debug_assert!(data.iter().all(|v| *v >= S::zero()));
        Self { data }
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn dim(&self) -> (usize, usize) {
        self.data.dim()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, row: usize, col: usize) -> S {
        self.data[[row, col]]
    }

    pub fn view(&self) -> ArrayView2<'_, S> {
        self.data.view()
    }

    pub fn as_array(&self) -> &Array2<S> {
        &self.data
    }

    pub fn into_array(self) -> Array2<S> {
        self.data
    }

    /// Entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = S> + '_ {
        self.data.iter().copied()
    }

    /// Elementwise map; the result must stay nonnegative.
    pub fn map(&self, f: impl Fn(S) -> S) -> Result<Self> {
        Self::new(self.data.mapv(f))
    }

    pub fn transpose(&self) -> Self {
        Self {
            data: self.data.t().to_owned(),
        }
    }

    /// Checks that every entry is exactly 0 or 1.
    pub fn is_binary(&self) -> bool {
        self.data.iter().all(|v| *v == S::zero() || *v == S::one())
    }

    /// Converts to another scalar width.
    pub fn cast<T: Scalar>(&self) -> NonnegMatrix<T> {
        NonnegMatrix {
            data: self.data.mapv(|v| T::of(v.as_f64())),
        }
    }
}

impl<S: Scalar> TryFrom<Array2<S>> for NonnegMatrix<S> {
    type Error = Error;

    fn try_from(data: Array2<S>) -> Result<Self> {
        Self::new(data)
    }
}
