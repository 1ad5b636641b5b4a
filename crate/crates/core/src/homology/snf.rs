use super::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// `u * a * v == s` with `u`, `v` unimodular and `s` diagonal, its nonzero
/// entries positive and each dividing the next. The inverses of `u` and `v`
/// are tracked alongside so class coordinates never need a matrix inversion.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    rank: usize,
}

impl SnfDecomposition {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The nonzero diagonal entries `d₁ | d₂ | … | d_rank`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }

    /// The `min(rows, cols)` diagonal of `s`, trailing zeros included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s.get(i, i).clone()).collect()
    }
}

struct Reducer {
    s: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.s.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// `row[target] += factor * row[source]` on `s`, recorded in `u`.
    fn add_row(&mut self, target: usize, source: usize, factor: &BigInt) {
        self.s.add_row_multiple(target, source, factor);
        self.u.add_row_multiple(target, source, factor);
        self.u_inv.add_col_multiple(source, target, &-factor);
    }

    /// `col[target] += factor * col[source]` on `s`, recorded in `v`.
    fn add_col(&mut self, target: usize, source: usize, factor: &BigInt) {
        self.s.add_col_multiple(target, source, factor);
        self.v.add_col_multiple(target, source, factor);
        self.v_inv.add_row_multiple(source, target, &-factor);
    }

    fn negate_row(&mut self, i: usize) {
        self.s.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Smallest nonzero absolute value in the trailing block, ties broken by
    /// the lexicographically least position.
    fn pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in k..self.s.rows() {
            for j in k..self.s.cols() {
                let x = self.s.get(i, j);
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.s.get(bi, bj).abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    /// Clears row and column `k` below/right of the pivot. Returns false when
    /// a nonzero remainder survived, meaning a new pivot must be chosen.
    fn eliminate(&mut self, k: usize) -> bool {
        let mut clean = true;
        let pivot = self.s.get(k, k).clone();
        for i in k + 1..self.s.rows() {
            if self.s.get(i, k).is_zero() {
                continue;
            }
            let q = self.s.get(i, k).div_floor(&pivot);
            self.add_row(i, k, &-q);
            if !self.s.get(i, k).is_zero() {
                clean = false;
            }
        }
        for j in k + 1..self.s.cols() {
            if self.s.get(k, j).is_zero() {
                continue;
            }
            let q = self.s.get(k, j).div_floor(&pivot);
            self.add_col(j, k, &-q);
            if !self.s.get(k, j).is_zero() {
                clean = false;
            }
        }
        clean
    }

    fn non_divisible_row(&self, k: usize) -> Option<usize> {
        let pivot = self.s.get(k, k);
        for i in k + 1..self.s.rows() {
            for j in k + 1..self.s.cols() {
                if !self.s.get(i, j).is_multiple_of(pivot) {
                    return Some(i);
                }
            }
        }
        None
    }
}

/// Smith normal form by gcd-driven elimination with smallest-magnitude
/// pivoting. Deterministic: equal inputs give equal bases.
pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut r = Reducer {
        s: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    let mut rank = 0;
    for k in 0..m.min(n) {
        while let Some((pi, pj)) = r.pivot(k) {
            r.swap_rows(k, pi);
            r.swap_cols(k, pj);
            if !r.eliminate(k) {
                continue;
            }
            match r.non_divisible_row(k) {
                Some(i) => r.add_row(k, i, &BigInt::from(1)),
                None => break,
            }
        }
        if r.s.get(k, k).is_zero() {
            break;
        }
        if r.s.get(k, k).is_negative() {
            r.negate_row(k);
        }
        rank += 1;
    }
    SnfDecomposition { u: r.u, s: r.s, v: r.v, u_inv: r.u_inv, v_inv: r.v_inv, rank }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check(a: &IntMatrix) -> SnfDecomposition {
        let d = smith_normal_form(a);
        assert_eq!(d.u.mul(a).mul(&d.v), d.s);
        assert_eq!(d.u.mul(&d.u_inv), IntMatrix::identity(a.rows()));
        assert_eq!(d.v.mul(&d.v_inv), IntMatrix::identity(a.cols()));
        for i in 0..d.s.rows() {
            for j in 0..d.s.cols() {
                if i != j {
                    assert!(d.s.get(i, j).is_zero());
                }
            }
        }
        let diag = d.diagonal();
        for w in diag.windows(2) {
            if w[1].is_zero() {
                continue;
            }
            assert!(!w[0].is_zero());
            assert!(w[1].is_multiple_of(&w[0]));
        }
        d
    }

    #[test]
    fn identity_is_fixed() {
        let d = check(&IntMatrix::identity(3));
        assert_eq!(d.s, IntMatrix::identity(3));
    }

    #[test]
    fn zero_matrix() {
        let d = check(&IntMatrix::zeros(2, 3));
        assert!(d.s.is_zero());
        assert_eq!(d.rank(), 0);
        assert_eq!(d.u, IntMatrix::identity(2));
        assert_eq!(d.v, IntMatrix::identity(3));
    }

    #[test]
    fn two_by_two() {
        let a = IntMatrix::from_i64_rows(&[vec![2, 4], vec![6, 8]], 2);
        let d = check(&a);
        assert_eq!(d.invariant_factors(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn coprime_entries_need_divisibility_repair() {
        // diag(2, 3) has invariant factors 1, 6.
        let a = IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 3]], 2);
        let d = check(&a);
        assert_eq!(d.invariant_factors(), vec![BigInt::one(), BigInt::from(6)]);
    }

    #[test]
    fn empty_shapes() {
        check(&IntMatrix::zeros(0, 4));
        check(&IntMatrix::zeros(3, 0));
        check(&IntMatrix::zeros(0, 0));
    }

    #[test]
    fn entries_beyond_machine_words() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let mut a = IntMatrix::zeros(2, 2);
        a.set(0, 0, big.clone());
        a.set(1, 1, &big * 3 + 1);
        a.set(0, 1, BigInt::from(7));
        let d = check(&a);
        assert_eq!(d.rank(), 2);
        let det: BigInt = d.invariant_factors().iter().product();
        assert_eq!(det.abs(), a.determinant().abs());
    }
}
