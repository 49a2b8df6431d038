use crate::error::{Error, Result};
use crate::fock::JacobiSequence;
use crate::scalar::to_f64;

/// Largest dimension accepted by [`eigendecompose`].
pub const MAX_DIMENSION: usize = 4096;

/// QL sweeps allowed per eigenvalue before giving up.
pub const MAX_SWEEPS: usize = 50;

/// A real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diagonal: Vec<f64>,
    /// `off_diagonal[i]` couples rows `i` and `i + 1`.
    pub off_diagonal: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Self {
        assert_eq!(
            off_diagonal.len() + 1,
            diagonal.len().max(1),
            "off-diagonal must be one shorter than the diagonal"
        );
        Self {
            diagonal,
            off_diagonal,
        }
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }
}

/// `X = (a + a*) / sqrt 2` on levels `0..K`: zero diagonal, off-diagonal
/// `sqrt(omega(n) / 2)` between levels `n - 1` and `n`.
pub fn truncated_position_matrix(seq: &JacobiSequence, k: usize) -> Result<SymTridiagonal> {
    if k == 0 {
        return Err(Error::DimensionTooSmall { k, n: 0 });
    }
    let off = (1..k)
        .map(|n| Ok((to_f64(&seq.weight(n)?) / 2.0).sqrt()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SymTridiagonal::new(vec![0.0; k], off))
}

/// Eigenvalues of a tridiagonal matrix together with the components of the
/// normalized eigenvectors at one row.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSpectrum {
    pub row: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvector components at `row`, paired with `eigenvalues`. Signs
    /// are whatever the iteration produced.
    pub components: Vec<f64>,
}

impl TridiagonalSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Squared components; these sum to one.
    pub fn weights(&self) -> Vec<f64> {
        self.components.iter().map(|c| c * c).collect()
    }

    /// `max_i |lambda_i + lambda_(K-1-i)|`, zero for a spectrum symmetric about 0.
    pub fn symmetry_defect(&self) -> f64 {
        let k = self.eigenvalues.len();
        (0..k)
            .map(|i| (self.eigenvalues[i] + self.eigenvalues[k - 1 - i]).abs())
            .fold(0.0, f64::max)
    }
}

/// Implicit-shift QL on a symmetric tridiagonal matrix.
///
/// Only row `row` of the eigenvector matrix is accumulated: every rotation
/// acts on rows independently, so this costs `O(K^2)` instead of `O(K^3)`.
pub fn eigendecompose(t: &SymTridiagonal, row: usize) -> Result<TridiagonalSpectrum> {
    let n = t.dim();
    if n > MAX_DIMENSION {
        return Err(Error::DimensionTooLarge {
            k: n,
            limit: MAX_DIMENSION,
        });
    }
    if row >= n {
        return Err(Error::RowOutOfRange { row, k: n });
    }
    let mut d = t.diagonal.clone();
    let mut e = t.off_diagonal.clone();
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[row] = 1.0;

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    index: l,
                    sweeps: MAX_SWEEPS,
                });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Underflow: the matrix split; restart from l.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    Ok(TridiagonalSpectrum {
        row,
        eigenvalues: order.iter().map(|&i| d[i]).collect(),
        components: order.iter().map(|&i| z[i]).collect(),
    })
}
