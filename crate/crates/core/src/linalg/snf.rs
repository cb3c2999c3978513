//! Smith normal form over the integers and diagonalisation over `F_p`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::{modulo, pow_mod, IntMatrix};

/// `d = u * a * v` with `u`, `v` invertible over the working ring and `d`
/// diagonal with each diagonal entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries up to the first zero.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

#[derive(Clone, Copy, Debug)]
enum Arith {
    Integers,
    Mod(u64),
}

impl Arith {
    fn quotient(&self, a: &BigInt, pivot: &BigInt) -> BigInt {
        match *self {
            Arith::Integers => a / pivot,
            Arith::Mod(p) => {
                let pb = BigInt::from(p);
                modulo(&(a * inverse_mod(pivot, p)), &pb)
            }
        }
    }

    fn normalize(&self, m: &mut IntMatrix) {
        if let Arith::Mod(p) = *self {
            *m = m.reduce_mod(&BigInt::from(p));
        }
    }
}

fn inverse_mod(a: &BigInt, p: u64) -> BigInt {
    let r = modulo(a, &BigInt::from(p));
    let r = u128::try_from(r).expect("residue fits");
    BigInt::from(pow_mod(r, p as u128 - 2, p as u128))
}

/// Smith normal form over the integers.
///
/// Pivots on the entry of least nonzero absolute value, ties broken by
/// `(row, col)` order, so `u` and `v` are reproducible.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    diagonalize(a, Arith::Integers)
}

/// Diagonal form over `F_p`: `d = diag(1, ..., 1, 0, ...)` with all entries of
/// `u`, `d`, `v` reduced into `[0, p)`.
pub fn diagonalize_mod(a: &IntMatrix, p: u64) -> SmithForm {
    diagonalize(&a.reduce_mod(&BigInt::from(p)), Arith::Mod(p))
}

fn find_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                best = Some(((i, j), ax));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

fn diagonalize(a: &IntMatrix, arith: Arith) -> SmithForm {
    let (r, c) = a.shape();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        loop {
            let Some((pi, pj)) = find_pivot(&d, t) else {
                arith.normalize(&mut u);
                arith.normalize(&mut v);
                return SmithForm { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                let q = arith.quotient(&d[(i, t)], &d[(t, t)]);
                if !q.is_zero() {
                    let nq = -q;
                    d.add_row_multiple(i, t, &nq);
                    u.add_row_multiple(i, t, &nq);
                }
                if !d[(i, t)].is_zero() && matches!(arith, Arith::Integers) {
                    clean = false;
                }
            }
            for j in t + 1..c {
                let q = arith.quotient(&d[(t, j)], &d[(t, t)]);
                if !q.is_zero() {
                    let nq = -q;
                    d.add_col_multiple(j, t, &nq);
                    v.add_col_multiple(j, t, &nq);
                }
                if !d[(t, j)].is_zero() && matches!(arith, Arith::Integers) {
                    clean = false;
                }
            }
            arith.normalize(&mut d);
            if !clean {
                continue;
            }
            if let Arith::Integers = arith {
                let pivot = d[(t, t)].clone();
                let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(&d[(i, j)] % &pivot).is_zero()));
                if let Some(i) = offender {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                    continue;
                }
            }
            break;
        }
        match arith {
            Arith::Integers => {
                if d[(t, t)].is_negative() {
                    d.negate_row(t);
                    u.negate_row(t);
                }
            }
            Arith::Mod(p) => {
                let inv = inverse_mod(&d[(t, t)], p);
                scale_row(&mut d, t, &inv);
                scale_row(&mut u, t, &inv);
                arith.normalize(&mut d);
                arith.normalize(&mut u);
            }
        }
    }
    arith.normalize(&mut u);
    arith.normalize(&mut v);
    SmithForm { u, d, v }
}

fn scale_row(m: &mut IntMatrix, i: usize, c: &BigInt) {
    for j in 0..m.cols() {
        let x = &m[(i, j)] * c;
        m[(i, j)] = x;
    }
}
