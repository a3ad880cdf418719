//! Exact linear algebra over the rationals.
//!
//! `rank_exact` clears denominators row by row and runs fraction-free
//! (Bareiss) elimination on big integers; `rank_naive` is plain Gaussian
//! elimination over `BigRational` and exists as an independent cross-check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::inequality::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        RationalMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        RationalMatrix::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Rational) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Each row multiplied by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let l = row
                    .iter()
                    .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }
}

/// Rank via fraction-free elimination on the denominator-cleared matrix.
pub fn rank_exact(m: &RationalMatrix) -> usize {
    bareiss_rank(m.integer_rows(), m.cols)
}

fn bareiss_rank(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = a.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let v = &a[rank][c] * &a[r][k] - &a[r][c] * &a[rank][k];
                // exact by Sylvester's identity
                a[r][k] = v / &prev;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Rank via textbook Gaussian elimination over the rationals.
pub fn rank_naive(m: &RationalMatrix) -> usize {
    let mut a: Vec<Vec<Rational>> = (0..m.rows).map(|r| m.row(r).to_vec()).collect();
    let mut rank = 0;
    for c in 0..m.cols {
        let Some(p) = (rank..m.rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        for r in 0..m.rows {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &pivot;
                for k in c..m.cols {
                    let d = &f * &a[rank][k];
                    a[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A nonzero integer vector spanning the null space of `rows`, which must
/// have rank exactly `cols - 1`. Entries are coprime.
pub fn null_vector(rows: &[Vec<BigInt>], cols: usize) -> Option<Vec<BigInt>> {
    let mut a: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = a[rank][c].recip();
        for x in a[rank].iter_mut() {
            *x *= &inv;
        }
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..cols {
                    let d = &f * &a[rank][k];
                    a[r][k] -= d;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    if rank + 1 != cols {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut x = vec![Rational::zero(); cols];
    x[free] = Rational::one();
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = -a[r][free].clone();
    }
    let l = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut ints: Vec<BigInt> = x.iter().map(|v| v.numer() * (&l / v.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_one() {
        for v in &mut ints {
            *v /= &g;
        }
    }
    Some(ints)
}

/// Row-echelon basis built one vector at a time, kept primitive (each row
/// divided by the gcd of its entries) to limit coefficient growth.
#[derive(Clone, Debug, Default)]
pub struct IntBasis {
    cols: usize,
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl IntBasis {
    pub fn new(cols: usize) -> Self {
        IntBasis {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn reduce(&self, v: &[i64]) -> Vec<BigInt> {
        debug_assert_eq!(v.len(), self.cols);
        let mut v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            let g = row[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x = &*x * &g - &f * r;
            }
            primitive(&mut v);
        }
        v
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` if it is independent of the current rows; returns whether
    /// the rank grew.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        if r[p].is_negative() {
            for x in &mut r {
                *x = -&*x;
            }
        }
        // keep earlier rows reduced at the new pivot so `reduce` stays a
        // single pass
        for (_, row) in &mut self.rows {
            if !row[p].is_zero() {
                let f = row[p].clone();
                let g = r[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    *x = &*x * &g - &f * y;
                }
                primitive(row);
            }
        }
        self.rows.push((p, r));
        true
    }
}

fn primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::rat;
    use proptest::prelude::*;

    #[test]
    fn small_ranks() {
        assert_eq!(rank_exact(&RationalMatrix::identity(3)), 3);
        let m = RationalMatrix::from_int_rows(&[[1, 2, 3], [1, 2, 3]]);
        assert_eq!(rank_exact(&m), 1);
        assert_eq!(rank_naive(&m), 1);
        assert_eq!(rank_exact(&RationalMatrix::zeros(4, 2)), 0);
        assert_eq!(rank_exact(&RationalMatrix::zeros(0, 0)), 0);
    }

    #[test]
    fn fractional_entries() {
        let m = RationalMatrix::from_rows(vec![
            vec![Rational::new(1.into(), 2.into()), rat(1)],
            vec![rat(1), rat(2)],
            vec![rat(0), Rational::new(1.into(), 3.into())],
        ]);
        assert_eq!(rank_exact(&m), 2);
        assert_eq!(rank_naive(&m), 2);
    }

    #[test]
    fn null_vector_of_plane() {
        let rows = vec![
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(1)],
        ];
        let n = null_vector(&rows, 3).unwrap();
        assert_eq!(n, vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(1)]);
        assert!(null_vector(&rows[..1], 3).is_none());
        assert_eq!(null_vector(&[], 1).unwrap(), vec![BigInt::from(1)]);
    }

    #[test]
    fn basis_tracks_span() {
        let mut b = IntBasis::new(3);
        assert!(b.insert(&[1, 1, 0]));
        assert!(b.insert(&[0, 1, 1]));
        assert!(b.contains(&[1, 0, -1]));
        assert!(!b.insert(&[2, 3, 1]));
        assert!(b.insert(&[0, 0, 5]));
        assert_eq!(b.rank(), 3);
        assert!(b.contains(&[7, -3, 2]));
    }

    fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn bareiss_matches_naive(rows in matrix()) {
            let m = RationalMatrix::from_int_rows(&rows);
            let r = rank_exact(&m);
            prop_assert_eq!(r, rank_naive(&m));
            let mut b = IntBasis::new(m.cols());
            for row in &rows {
                b.insert(row);
            }
            prop_assert_eq!(b.rank(), r);
        }
    }
}
