//! Generalized Wiener filtering for positive α-stable mixtures.
//!
//! Given per-source fields `p_k = σ_k^α` (for Lévy NMF, the rank-1 terms
//! `W_k H_k`), the posterior mean of source `k` is `p_k / Σ_l p_l ⊙ X`.

use ndarray::{Array2, Zip};

use crate::error::{ensure_same_dim, Error, Result};
use crate::matrix::NonnegMatrix;
use crate::nmf::FactorPair;
use crate::scalar::Scalar;

/// Per-source nonnegative fields of equal shape.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSet<S> {
    parts: Vec<NonnegMatrix<S>>,
}

impl<S: Scalar> ComponentSet<S> {
    pub fn new(parts: Vec<NonnegMatrix<S>>) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::domain("a component set needs at least one part"))?;
        let dim = first.dim();
        for p in &parts[1..] {
            ensure_same_dim("component part", dim, p.dim())?;
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[NonnegMatrix<S>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn dim(&self) -> (usize, usize) {
        self.parts[0].dim()
    }

    /// Elementwise sum of all parts.
    pub fn total(&self) -> NonnegMatrix<S> {
        let mut acc = Array2::<S>::zeros(self.dim());
        for p in &self.parts {
            Zip::from(&mut acc).and(p.as_array()).for_each(|a, &v| *a = *a + v);
        }
        NonnegMatrix::from_array_unchecked(acc)
    }
}

/// Splits `WH` into its `K` rank-1 terms `W[:,k] H[k,:]`.
pub fn rank1_components<S: Scalar>(factors: &FactorPair<S>) -> ComponentSet<S> {
    let w = factors.w().as_array();
    let h = factors.h().as_array();
    let parts = (0..factors.rank())
        .map(|k| {
            let col = w.column(k);
            let row = h.row(k);
            let outer = Array2::from_shape_fn((col.len(), row.len()), |(f, t)| col[f] * row[t]);
            NonnegMatrix::from_array_unchecked(outer)
        })
        .collect();
    ComponentSet { parts }
}

/// Soft-mask estimates `X̂_k = p_k / max(Σ_l p_l, ε) ⊙ X`.
///
/// Where the parts sum to less than `ε` the mixture is split evenly, so the
/// estimates always add up to `X`.
pub fn wiener_separate<S: Scalar>(
    x: &NonnegMatrix<S>,
    components: &ComponentSet<S>,
    epsilon: S,
) -> Result<Vec<NonnegMatrix<S>>> {
    ensure_same_dim("mixture vs components", components.dim(), x.dim())?;
    let total = components.total();
    let uniform = S::one() / S::of(components.len() as f64);
    Ok(components
        .parts
        .iter()
        .map(|part| {
            let est = Zip::from(part.as_array())
                .and(total.as_array())
                .and(x.as_array())
                .map_collect(|&p, &sum, &xv| {
                    if sum < epsilon {
                        uniform * xv
                    } else {
                        p / sum * xv
                    }
                });
            NonnegMatrix::from_array_unchecked(est)
        })
        .collect())
}
