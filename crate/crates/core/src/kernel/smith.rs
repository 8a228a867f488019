use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal with
/// `d₁ | d₂ | …`, all `dᵢ ≥ 0`. Matrices are row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: Vec<Vec<BigInt>>,
    pub d: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

impl SmithForm {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..k).map(|i| self.d[i][i].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().filter(|d| !d.is_zero()).count()
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// Row operation `row_t -= q·row_s` on `a` and on the row transform `u`.
fn row_axpy(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], t: usize, s: usize, q: &BigInt) {
    for m in [a, u] {
        let src = m[s].clone();
        for (x, y) in m[t].iter_mut().zip(&src) {
            *x -= q * y;
        }
    }
}

fn col_axpy(a: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], t: usize, s: usize, q: &BigInt) {
    for m in [a, v] {
        for row in m.iter_mut() {
            let y = row[s].clone();
            row[t] -= q * y;
        }
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

/// Smith normal form of an integer matrix with `ncols` columns (needed when
/// the matrix has no rows).
pub fn smith_normal_form(a: &[Vec<BigInt>], ncols: usize) -> SmithForm {
    let nrows = a.len();
    let mut d: Vec<Vec<BigInt>> = a.to_vec();
    let mut u = identity(nrows);
    let mut v = identity(ncols);
    for t in 0..nrows.min(ncols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let pivot = (t..nrows)
                .flat_map(|i| (t..ncols).map(move |j| (i, j)))
                .filter(|&(i, j)| !d[i][j].is_zero())
                .min_by(|&(i, j), &(k, l)| d[i][j].abs().cmp(&d[k][l].abs()).then((i, j).cmp(&(k, l))));
            let Some((pi, pj)) = pivot else {
                return SmithForm { u, d, v };
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..nrows {
                if !d[i][t].is_zero() {
                    let q = d[i][t].div_floor(&d[t][t]);
                    row_axpy(&mut d, &mut u, i, t, &q);
                    clean &= d[i][t].is_zero();
                }
            }
            for j in t + 1..ncols {
                if !d[t][j].is_zero() {
                    let q = d[t][j].div_floor(&d[t][t]);
                    col_axpy(&mut d, &mut v, j, t, &q);
                    clean &= d[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // enforce divisibility on the trailing block
            let bad = (t + 1..nrows)
                .flat_map(|i| (t + 1..ncols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&d[i][j] % &d[t][t]).is_zero());
            match bad {
                Some((i, _)) => row_axpy(&mut d, &mut u, t, i, &-BigInt::one()),
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for m in [&mut d, &mut u] {
                for x in m[t].iter_mut() {
                    *x = -x.clone();
                }
            }
        }
    }
    SmithForm { u, d, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], inner: usize, cols: usize) -> Vec<Vec<BigInt>> {
        a.iter()
            .map(|row| (0..cols).map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum()).collect())
            .collect()
    }

    fn check(a: &[Vec<BigInt>], ncols: usize) -> SmithForm {
        let s = smith_normal_form(a, ncols);
        let ua = mul(&s.u, a, a.len(), ncols);
        assert_eq!(mul(&ua, &s.v, ncols, ncols), s.d);
        s
    }

    #[test]
    fn diagonal_two_three() {
        let s = check(&m(&[&[2, 0], &[0, 3]]), 2);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_matrix_keeps_identities() {
        let s = check(&m(&[&[0, 0], &[0, 0]]), 2);
        assert_eq!(s.u, identity(2));
        assert_eq!(s.v, identity(2));
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn single_row_gcd() {
        let s = check(&m(&[&[4, 6]]), 2);
        assert_eq!(s.d, m(&[&[2, 0]]));
    }
}
