//! Smith normal form of dense integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Nonzero invariant factors `d_1 | d_2 | ... | d_r` of `matrix`, all positive.
/// The rank is the number of factors.
pub fn invariant_factors(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut factors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let pivot = m[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&pivot);
                for j in t..cols {
                    let sub = &q * &m[t][j];
                    m[i][j] -= sub;
                }
                if !m[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&pivot);
                for row in m.iter_mut().skip(t) {
                    let sub = &q * &row[t];
                    row[j] -= sub;
                }
                if !m[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                move_smallest_to_pivot(&mut m, t);
                continue;
            }
            // enforce divisibility of the trailing block by the pivot
            let pivot = m[t][t].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&m[i][j] % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    for j in t..cols {
                        let add = m[i][j].clone();
                        m[t][j] += add;
                    }
                }
                None => break,
            }
        }
        factors.push(m[t][t].abs());
        t += 1;
    }
    factors
}

fn move_smallest_to_pivot(m: &mut [Vec<BigInt>], t: usize) {
    let mut best = (t, t);
    for i in t..m.len() {
        if !m[i][t].is_zero() && (m[best.0][best.1].is_zero() || m[i][t].abs() < m[best.0][best.1].abs()) {
            best = (i, t);
        }
    }
    for j in t..m[t].len() {
        if !m[t][j].is_zero() && (m[best.0][best.1].is_zero() || m[t][j].abs() < m[best.0][best.1].abs()) {
            best = (t, j);
        }
    }
    m.swap(t, best.0);
    for row in m.iter_mut() {
        row.swap(t, best.1);
    }
}

/// Invariant factors greater than one.
pub fn torsion(factors: &[BigInt]) -> Vec<BigInt> {
    factors.iter().filter(|d| !d.is_one()).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| x.try_into().unwrap()).collect()
    }

    #[test]
    fn diagonal_needs_divisibility_fix() {
        // diag(2, 3) ~ diag(1, 6)
        assert_eq!(ints(&invariant_factors(&mat(&[&[2, 0], &[0, 3]]))), vec![1, 6]);
    }

    #[test]
    fn known_example() {
        let m = mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        assert_eq!(ints(&invariant_factors(&m)), vec![2, 6, 12]);
    }

    #[test]
    fn rank_deficient() {
        let m = mat(&[&[1, 2], &[2, 4], &[3, 6]]);
        assert_eq!(ints(&invariant_factors(&m)), vec![1]);
        assert!(invariant_factors(&mat(&[&[0, 0]])).is_empty());
        assert!(invariant_factors(&[]).is_empty());
    }
}
