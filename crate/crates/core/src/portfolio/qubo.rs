use nalgebra::{DMatrix, DVector};

use super::{AssetUniverse, PortfolioError};

/// `min z'Qz + offset` over bit vectors `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboProblem {
    q: DMatrix<f64>,
    offset: f64,
}

impl QuboProblem {
    pub fn new(q: DMatrix<f64>, offset: f64) -> Result<Self, PortfolioError> {
        let (r, c) = q.shape();
        if r != c {
            return Err(PortfolioError::DimensionMismatch { expected: r, got: c });
        }
        let asym = if r == 0 { 0.0 } else { (&q - q.transpose()).amax() };
        if asym > 1e-12 {
            return Err(PortfolioError::NotSymmetric(asym));
        }
        Ok(Self { q, offset })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn n_vars(&self) -> usize {
        self.q.nrows()
    }

    /// Energy of the assignment encoded by the low `n` bits of `index`
    /// (bit `i` is variable `i`).
    pub fn energy_of_index(&self, index: usize) -> f64 {
        let n = self.n_vars();
        let mut e = self.offset;
        for i in 0..n {
            if index >> i & 1 == 0 {
                continue;
            }
            e += self.q[(i, i)];
            for j in (i + 1)..n {
                if index >> j & 1 == 1 {
                    e += 2.0 * self.q[(i, j)];
                }
            }
        }
        e
    }
}

/// `E(s) = sum_{i<j} J_ij s_i s_j + sum_i h_i s_i + offset` over spins `s_i = +-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    /// Strictly upper-triangular couplings.
    pub couplings: DMatrix<f64>,
    pub fields: DVector<f64>,
    pub offset: f64,
}

impl IsingModel {
    pub fn n_spins(&self) -> usize {
        self.fields.len()
    }

    /// Full energy including the constant offset.
    pub fn energy(&self, spins: &[i8]) -> Result<f64, PortfolioError> {
        let n = self.n_spins();
        if spins.len() != n {
            return Err(PortfolioError::DimensionMismatch {
                expected: n,
                got: spins.len(),
            });
        }
        let mut e = self.offset;
        for i in 0..n {
            let si = f64::from(spins[i]);
            e += self.fields[i] * si;
            for j in (i + 1)..n {
                e += self.couplings[(i, j)] * si * f64::from(spins[j]);
            }
        }
        Ok(e)
    }
}

pub fn bits_from_index(index: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| index >> i & 1 == 1).collect()
}

pub fn index_from_bits(bits: &[bool]) -> usize {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| if b { acc | 1 << i } else { acc })
}

/// `z'Qz + offset`.
pub fn qubo_energy(q: &QuboProblem, z: &[bool]) -> Result<f64, PortfolioError> {
    let n = q.n_vars();
    if z.len() != n {
        return Err(PortfolioError::DimensionMismatch {
            expected: n,
            got: z.len(),
        });
    }
    let mut e = q.offset;
    for i in 0..n {
        if !z[i] {
            continue;
        }
        for j in 0..n {
            if z[j] {
                e += q.q[(i, j)];
            }
        }
    }
    Ok(e)
}

/// Folds `lambda x'Sx - mu'x + A (sum x - K)^2` into `z'Qz + offset`.
///
/// With `z_i^2 = z_i`: `Q_ij = lambda S_ij + A` off the diagonal,
/// `Q_ii = lambda S_ii + A - mu_i - 2AK`, and `offset = A K^2`.
pub fn build_cardinality_qubo(
    universe: &AssetUniverse,
    lambda_risk: f64,
    penalty: f64,
    k: usize,
) -> Result<QuboProblem, PortfolioError> {
    let n = universe.n_assets();
    if k < 1 || k > n {
        return Err(PortfolioError::CardinalityOutOfRange { k, n });
    }
    if !(penalty > 0.0) {
        return Err(PortfolioError::InvalidPenalty(penalty));
    }
    let kf = k as f64;
    let mut q = universe.sigma.map(|s| lambda_risk * s + penalty);
    for i in 0..n {
        q[(i, i)] += -universe.mu[i] - 2.0 * penalty * kf;
    }
    // exact symmetry, independent of rounding in sigma
    let q = (&q + q.transpose()) * 0.5;
    QuboProblem::new(q, penalty * kf * kf)
}

/// Maps a QUBO to spins via `z = (1 + s) / 2`.
pub fn qubo_to_ising(q: &QuboProblem) -> IsingModel {
    let n = q.n_vars();
    let m = &q.q;
    let mut couplings = DMatrix::zeros(n, n);
    let mut fields = DVector::zeros(n);
    let mut offset = q.offset;
    for i in 0..n {
        fields[i] += 0.5 * m[(i, i)];
        offset += 0.5 * m[(i, i)];
        for j in (i + 1)..n {
            let w = 0.25 * (m[(i, j)] + m[(j, i)]);
            couplings[(i, j)] = w;
            fields[i] += w;
            fields[j] += w;
            offset += w;
        }
    }
    IsingModel {
        couplings,
        fields,
        offset,
    }
}
