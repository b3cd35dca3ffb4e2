//! Exact rational linear algebra used by fan validation and the oracles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<Rat>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let delta = &f * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn determinant(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let delta = &f * &a[c][j];
                a[i][j] -= delta;
            }
        }
    }
    det
}

/// Fraction-free Gauss-Jordan elimination of an integer matrix. Returns
/// `(det, adj)` with `adj * m = det * I`, or `None` when singular.
pub fn integer_inverse(m: &[Vec<BigInt>]) -> Option<(BigInt, Vec<Vec<BigInt>>)> {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        let (pivot_row, rest) = (a[k].clone(), &mut a);
        let pivot = &pivot_row[k];
        for (i, row) in rest.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let f = row[k].clone();
            for j in 0..2 * n {
                if j == k {
                    continue;
                }
                let v = pivot * &row[j] - &f * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot.clone();
    }
    // every diagonal entry now equals `prev`; the right block is `prev * m^-1`
    let det = &prev * &sign;
    let adj = a.into_iter().map(|r| r[n..].iter().map(|x| x * &sign).collect()).collect();
    Some((det, adj))
}

/// A linear constraint `coeffs · x (>= | =) rhs`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
    pub equality: bool,
}

/// Decides feasibility of a small system of linear equalities and
/// non-strict inequalities over the rationals by Fourier-Motzkin elimination.
pub fn feasible(constraints: &[Constraint]) -> bool {
    let mut eqs: Vec<Constraint> = constraints.iter().filter(|c| c.equality).cloned().collect();
    let mut ineqs: Vec<Constraint> = constraints.iter().filter(|c| !c.equality).cloned().collect();
    let nvars = constraints.first().map_or(0, |c| c.coeffs.len());
    let mut eliminated = vec![false; nvars];

    while let Some(eq) = eqs.pop() {
        let Some(k) = (0..nvars).find(|&k| !eq.coeffs[k].is_zero()) else {
            if !eq.rhs.is_zero() {
                return false;
            }
            continue;
        };
        // x_k = (rhs - sum_{j != k} a_j x_j) / a_k
        let a = eq.coeffs[k].clone();
        let substitute = |c: &mut Constraint| {
            let f = &c.coeffs[k] / &a;
            if f.is_zero() {
                return;
            }
            for j in 0..nvars {
                let delta = &f * &eq.coeffs[j];
                c.coeffs[j] -= delta;
            }
            c.rhs -= &f * &eq.rhs;
        };
        eqs.iter_mut().for_each(substitute);
        ineqs.iter_mut().for_each(substitute);
        eliminated[k] = true;
    }

    for k in 0..nvars {
        if eliminated[k] {
            continue;
        }
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in ineqs.drain(..) {
            if c.coeffs[k].is_positive() {
                pos.push(c);
            } else if c.coeffs[k].is_negative() {
                neg.push(c);
            } else {
                rest.push(c);
            }
        }
        for p in &pos {
            for q in &neg {
                let fp = -q.coeffs[k].clone();
                let fq = p.coeffs[k].clone();
                let coeffs = (0..nvars).map(|j| &fp * &p.coeffs[j] + &fq * &q.coeffs[j]).collect();
                let rhs = &fp * &p.rhs + &fq * &q.rhs;
                rest.push(Constraint { coeffs, rhs, equality: false });
            }
        }
        dedup(&mut rest);
        ineqs = rest;
    }
    ineqs.iter().all(|c| !c.rhs.is_positive())
}

fn dedup(cs: &mut Vec<Constraint>) {
    for c in cs.iter_mut() {
        if let Some(lead) = c.coeffs.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
            for x in c.coeffs.iter_mut() {
                *x = &*x / &lead;
            }
            c.rhs = &c.rhs / &lead;
        }
    }
    cs.sort_by(|a, b| a.coeffs.cmp(&b.coeffs).then(a.rhs.cmp(&b.rhs)));
    // among identical left-hand sides keep the tightest bound
    cs.dedup_by(|later, earlier| {
        if later.coeffs == earlier.coeffs {
            if later.rhs > earlier.rhs {
                earlier.rhs = later.rhs.clone();
            }
            true
        } else {
            false
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn ge(coeffs: &[i64], rhs: i64) -> Constraint {
        Constraint { coeffs: coeffs.iter().map(|&c| r(c)).collect(), rhs: r(rhs), equality: false }
    }

    #[test]
    fn inverse_and_determinant() {
        let m = vec![vec![r(1), r(0)], vec![r(-1), r(-1)]];
        assert_eq!(determinant(&m), r(-1));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![r(1), r(0)], vec![r(-1), r(-1)]]);
        assert!(inverse(&[vec![r(1), r(2)], vec![r(2), r(4)]]).is_none());
    }

    #[test]
    fn integer_inverse_matches_rational() {
        let rows = [[2i64, 1, 0], [1, 3, -1], [0, -2, 4]];
        let int: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        let rat: Vec<Vec<Rat>> = rows.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect();
        let (det, adj) = integer_inverse(&int).unwrap();
        assert_eq!(rat_of(&det), determinant(&rat));
        let inv = inverse(&rat).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(Rat::new(adj[i][j].clone(), det.clone()), inv[i][j]);
            }
        }
        let swapped = vec![int[1].clone(), int[0].clone(), int[2].clone()];
        assert_eq!(integer_inverse(&swapped).unwrap().0, -det);
        assert!(integer_inverse(&[vec![1.into(), 2.into()], vec![2.into(), 4.into()]]).is_none());
    }

    fn rat_of(n: &BigInt) -> Rat {
        rat(n)
    }

    #[test]
    fn fourier_motzkin() {
        // x >= 1, y >= 1, x + y <= 1
        assert!(!feasible(&[ge(&[1, 0], 1), ge(&[0, 1], 1), ge(&[-1, -1], -1)]));
        // x >= 0, y >= 0, x + y = 1
        let mut eq = ge(&[1, 1], 1);
        eq.equality = true;
        assert!(feasible(&[ge(&[1, 0], 0), ge(&[0, 1], 0), eq.clone()]));
        // x >= 0, y >= 0, x + y = 1, x - y >= 2
        assert!(!feasible(&[ge(&[1, 0], 0), ge(&[0, 1], 0), eq, ge(&[1, -1], 2)]));
    }
}
