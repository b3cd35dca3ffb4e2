//! Integer vectors in `N = Z^n` and its dual `M = Hom(N, Z)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, rat};

/// An element of the lattice `N` (ray generators live here).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(pub Vec<BigInt>);

/// An element of the dual lattice `M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualVector(pub Vec<BigInt>);

macro_rules! int_vector {
    ($t:ident) => {
        impl $t {
            pub fn from_i64s(v: &[i64]) -> Self {
                $t(v.iter().map(|&x| BigInt::from(x)).collect())
            }

            pub fn zero(n: usize) -> Self {
                $t(vec![BigInt::zero(); n])
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn coords(&self) -> &[BigInt] {
                &self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|x| x.is_zero())
            }

            pub fn neg(&self) -> Self {
                $t(self.0.iter().map(|x| -x).collect())
            }
        }

        impl From<Vec<i64>> for $t {
            fn from(v: Vec<i64>) -> Self {
                $t::from_i64s(&v)
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "(")?;
                for (i, x) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    };
}

int_vector!(LatticeVector);
int_vector!(DualVector);

pub fn pairing(u: &DualVector, v: &LatticeVector) -> Result<BigInt> {
    if u.dim() != v.dim() {
        return Err(Error::Dimension { expected: u.dim(), found: v.dim() });
    }
    Ok(u.0.iter().zip(&v.0).map(|(a, b)| a * b).sum())
}

pub fn is_primitive(v: &LatticeVector) -> Result<bool> {
    if v.is_zero() {
        return Err(Error::InvalidRay(format!("zero vector {v}")));
    }
    let g = v.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    Ok(g.is_one())
}

/// Outcome of the elementary-divisor test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Unimodularity {
    /// All elementary divisors are 1: the vectors extend to a basis.
    Unimodular,
    /// Independent but the spanned sublattice is not saturated.
    NotSaturated { divisors: Vec<BigInt> },
    RankDeficient { rank: usize },
}

/// Diagonalizes an integer matrix by unimodular row and column operations
/// and returns the absolute values of the nonzero diagonal entries.
pub fn elementary_divisors(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let k = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for t in 0..k.min(n) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..k {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return out;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..k {
                let q = a[i][t].div_floor(&p);
                if !q.is_zero() {
                    for j in t..n {
                        let delta = &q * &a[t][j];
                        a[i][j] -= delta;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = a[t][j].div_floor(&p);
                if !q.is_zero() {
                    for i in t..k {
                        let delta = &q * &a[i][t];
                        a[i][j] -= delta;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if clean {
                out.push(p.abs());
                break;
            }
        }
    }
    out
}

pub fn unimodularity(vectors: &[LatticeVector]) -> Result<Unimodularity> {
    let Some(first) = vectors.first() else {
        return Ok(Unimodularity::Unimodular);
    };
    let n = first.dim();
    for v in vectors {
        if v.dim() != n {
            return Err(Error::Dimension { expected: n, found: v.dim() });
        }
    }
    if vectors.len() > n {
        return Ok(Unimodularity::RankDeficient { rank: n.min(rank_of(vectors)) });
    }
    let rows: Vec<Vec<BigInt>> = vectors.iter().map(|v| v.0.clone()).collect();
    let divisors = elementary_divisors(&rows);
    if divisors.len() < vectors.len() {
        Ok(Unimodularity::RankDeficient { rank: divisors.len() })
    } else if divisors.iter().all(|d| d.is_one()) {
        Ok(Unimodularity::Unimodular)
    } else {
        Ok(Unimodularity::NotSaturated { divisors })
    }
}

pub fn is_unimodular(vectors: &[LatticeVector]) -> Result<bool> {
    Ok(unimodularity(vectors)? == Unimodularity::Unimodular)
}

pub(crate) fn rank_of(vectors: &[LatticeVector]) -> usize {
    let rows: Vec<Vec<_>> = vectors.iter().map(|v| v.0.iter().map(rat).collect()).collect();
    linalg::rank(&rows)
}

/// The basis `u_1..u_n` of `M` with `<u_i, rays[j]> = delta_ij`.
pub fn dual_basis(rays: &[LatticeVector]) -> Result<Vec<DualVector>> {
    let n = rays.len();
    for v in rays {
        if v.dim() != n {
            return Err(Error::Dimension { expected: n, found: v.dim() });
        }
    }
    if !is_unimodular(rays)? {
        let shown: Vec<String> = rays.iter().map(|v| v.to_string()).collect();
        return Err(Error::NotSmooth(format!("rays {} are not a Z-basis", shown.join(" "))));
    }
    let m: Vec<Vec<_>> = rays.iter().map(|v| v.0.iter().map(rat).collect()).collect();
    let inv = linalg::inverse(&m).ok_or_else(|| Error::Internal("unimodular matrix is singular".into()))?;
    // rows of (V^{-1})^T are the dual vectors
    (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    let x = &inv[k][i];
                    if x.is_integer() {
                        Ok(x.to_integer())
                    } else {
                        Err(Error::Internal("non-integral inverse of a unimodular matrix".into()))
                    }
                })
                .collect::<Result<Vec<_>>>()
                .map(DualVector)
        })
        .collect()
}
