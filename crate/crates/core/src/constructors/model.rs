//! Integer linear models for the groups that act orthogonally on a sphere.
//!
//! Matrices act on row vectors, so `matrix(a.compose(b)) = matrix(a) * matrix(b)`.

use serde::Serialize;
use thiserror::Error;

use super::build::{alternating_gens, signed_even_gens, symmetric_gens};
use super::spec::GroupSpec;
use crate::perm::Perm;

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("no orthogonal model for {0}")]
    UnsupportedFamily(String),
    #[error("permutation of degree {got} does not belong to a model of degree {expected}")]
    ModelMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModelKind {
    /// Deleted permutation module of `Sym(n)` or `Alt(n)`; with `twisted`,
    /// odd permutations are multiplied by `-1`.
    Deleted { n: usize, twisted: bool },
    /// Signed permutation matrices on `n` coordinates.
    Signed { n: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct LinearModel {
    pub kind: ModelKind,
    pub dim: usize,
    /// Invariant symmetric form.
    pub gram: IntMatrix,
    /// Images of the family's defining generators.
    pub generators: Vec<IntMatrix>,
}

impl LinearModel {
    /// Degree of the permutation representation this model is attached to.
    pub fn perm_degree(&self) -> usize {
        match self.kind {
            ModelKind::Deleted { n, .. } => n,
            ModelKind::Signed { n } => 2 * n,
        }
    }

    pub fn matrix(&self, g: &Perm) -> Result<IntMatrix, ModelError> {
        if g.degree() != self.perm_degree() {
            return Err(ModelError::ModelMismatch { expected: self.perm_degree(), got: g.degree() });
        }
        Ok(match self.kind {
            ModelKind::Deleted { n, twisted } => {
                let sign = if twisted && !g.is_even() { -1 } else { 1 };
                // f_i = e_i - e_{n-1} maps to f_{g(i)} - f_{g(n-1)}, with f_{n-1} = 0
                let last = g.apply(n - 1);
                let mut m = vec![vec![0i64; n - 1]; n - 1];
                for (i, row) in m.iter_mut().enumerate() {
                    let gi = g.apply(i);
                    if gi < n - 1 {
                        row[gi] += sign;
                    }
                    if last < n - 1 {
                        row[last] -= sign;
                    }
                }
                m
            }
            ModelKind::Signed { n } => {
                let mut m = vec![vec![0i64; n]; n];
                for (i, row) in m.iter_mut().enumerate() {
                    let img = g.apply(2 * i);
                    row[img / 2] = if img % 2 == 0 { 1 } else { -1 };
                }
                m
            }
        })
    }

    /// `m G m^T = G` for the model's invariant form.
    pub fn preserves_form(&self, m: &IntMatrix) -> bool {
        mat_mul(&mat_mul(m, &self.gram), &transpose(m)) == self.gram
    }
}

/// Orthogonal model of `Alt(n)` (dimension `n - 1`), `Sym(n)` for even `n`
/// (dimension `n - 1`, odd elements twisted by `-id`) or `SignedEven(n)`
/// (dimension `n`).
pub fn orthogonal_model(spec: &GroupSpec) -> Result<LinearModel, ModelError> {
    let (kind, gens) = match spec {
        GroupSpec::Alt(n) if *n >= 2 => (ModelKind::Deleted { n: *n, twisted: false }, alternating_gens(*n)),
        GroupSpec::Sym(n) if *n >= 2 && n % 2 == 0 => {
            (ModelKind::Deleted { n: *n, twisted: true }, symmetric_gens(*n))
        }
        GroupSpec::SignedEven(n) if *n >= 2 => (ModelKind::Signed { n: *n }, signed_even_gens(*n)),
        other => return Err(ModelError::UnsupportedFamily(other.to_string())),
    };
    let (dim, gram) = match kind {
        ModelKind::Deleted { n, .. } => {
            let d = n - 1;
            (d, (0..d).map(|i| (0..d).map(|j| if i == j { 2 } else { 1 }).collect()).collect())
        }
        ModelKind::Signed { n } => (n, identity(n)),
    };
    let mut model = LinearModel { kind, dim, gram, generators: Vec::new() };
    model.generators = gens.iter().map(|g| model.matrix(g)).collect::<Result<_, _>>()?;
    Ok(model)
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..cols).map(|j| row.iter().zip(b).map(|(x, br)| x * br[j]).sum()).collect())
        .collect()
}

pub fn transpose(a: &IntMatrix) -> IntMatrix {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// Bareiss elimination on a copy of `a`; returns the rank and, for square
/// input, the determinant.
fn bareiss(a: &IntMatrix) -> (usize, i128) {
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = 1i128;
    let mut sign = 1i128;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        if piv != rank {
            m.swap(piv, rank);
            sign = -sign;
        }
        for r in rank + 1..rows {
            for k in c + 1..cols {
                m[r][k] = (m[rank][c] * m[r][k] - m[r][c] * m[rank][k]) / prev;
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
    }
    let det = if rows == cols && rank == rows { sign * prev } else { 0 };
    (rank, det)
}

pub fn rank(a: &IntMatrix) -> usize {
    bareiss(a).0
}

pub fn determinant(a: &IntMatrix) -> i128 {
    assert!(a.iter().all(|r| r.len() == a.len()), "square matrix");
    if a.is_empty() {
        return 1;
    }
    bareiss(a).1
}

/// Dimension of the subspace fixed by every matrix in `mats` (row action):
/// `dim - rank [M_1 - I | M_2 - I | ...]`.
pub fn fixed_dimension(dim: usize, mats: &[IntMatrix]) -> usize {
    if mats.is_empty() {
        return dim;
    }
    let stacked: IntMatrix = (0..dim)
        .map(|i| {
            mats.iter()
                .flat_map(|m| (0..dim).map(move |j| m[i][j] - i64::from(i == j)))
                .collect()
        })
        .collect();
    dim - rank(&stacked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_rank_and_det() {
        assert_eq!(determinant(&vec![vec![2, 1], vec![1, 3]]), 5);
        assert_eq!(determinant(&vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(rank(&vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]), 2);
        assert_eq!(determinant(&vec![vec![1, 2], vec![2, 4]]), 0);
    }

    #[test]
    fn alt6_model_is_five_dimensional() {
        let m = orthogonal_model(&GroupSpec::Alt(6)).unwrap();
        assert_eq!(m.dim, 5);
        for g in &m.generators {
            assert_eq!(determinant(g), 1);
            assert!(m.preserves_form(g));
        }
    }

    #[test]
    fn sym6_twist_keeps_determinant_one() {
        let m = orthogonal_model(&GroupSpec::Sym(6)).unwrap();
        assert!(m.generators.iter().all(|g| determinant(g) == 1 && m.preserves_form(g)));
        assert!(orthogonal_model(&GroupSpec::Sym(5)).is_err());
        assert!(orthogonal_model(&GroupSpec::Psl2(7)).is_err());
    }

    #[test]
    fn fixed_dimension_of_three_cycle() {
        let m = orthogonal_model(&GroupSpec::Alt(6)).unwrap();
        let c = Perm::from_cycles(6, &[[0, 1, 2]]).unwrap();
        assert_eq!(fixed_dimension(5, &[m.matrix(&c).unwrap()]), 3);
        assert_eq!(fixed_dimension(5, &[]), 5);
    }
}
