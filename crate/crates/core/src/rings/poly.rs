//! Univariate polynomials over a `Ring` (coefficients constant term first),
//! characteristic polynomials, and Hensel splitting over finite local rings.

use crate::error::{invalid, Result};
use crate::linalg::{solve, Mat};
use crate::rings::{Elt, Ring};

pub type Poly = Vec<Elt>;

pub fn trim(r: &Ring, mut a: Poly) -> Poly {
    while a.last().is_some_and(|x| r.is_zero(x)) {
        a.pop();
    }
    a
}

pub fn add(r: &Ring, a: &[Elt], b: &[Elt]) -> Poly {
    let n = a.len().max(b.len());
    let z = r.zero();
    trim(r, (0..n).map(|i| r.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect())
}

pub fn sub(r: &Ring, a: &[Elt], b: &[Elt]) -> Poly {
    let n = a.len().max(b.len());
    let z = r.zero();
    trim(r, (0..n).map(|i| r.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect())
}

pub fn mul(r: &Ring, a: &[Elt], b: &[Elt]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if r.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = r.add(&out[i + j], &r.mul(x, y));
        }
    }
    trim(r, out)
}

/// Division by a monic polynomial.
pub fn divrem_monic(r: &Ring, a: &[Elt], b: &[Elt]) -> (Poly, Poly) {
    let db = b.len() - 1;
    debug_assert_eq!(b[db], r.one());
    let mut rem = trim(r, a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut q = vec![r.zero(); rem.len() - db];
    for k in (db..rem.len()).rev() {
        let c = rem[k].clone();
        if r.is_zero(&c) {
            continue;
        }
        q[k - db] = c.clone();
        for (i, bi) in b.iter().enumerate() {
            rem[k - db + i] = r.sub(&rem[k - db + i], &r.mul(&c, bi));
        }
    }
    rem.truncate(db);
    (trim(r, q), trim(r, rem))
}

pub fn is_monic(r: &Ring, a: &[Elt]) -> bool {
    a.last().is_some_and(|x| *x == r.one())
}

/// Evaluate at a square matrix (Horner).
pub fn eval_mat(a: &[Elt], t: &Mat) -> Mat {
    let r = &t.ring;
    let mut acc = Mat::zeros(r, t.rows, t.cols);
    for c in a.iter().rev() {
        acc = acc.mul(t).add(&Mat::scalar(r, t.rows, c));
    }
    acc
}

/// Characteristic polynomial det(X - A) by Berkowitz's division-free method.
pub fn charpoly(a: &Mat) -> Poly {
    let r = &a.ring;
    let n = a.rows;
    // coefficient vectors stored highest degree first while building
    let mut p: Vec<Elt> = vec![r.one()];
    for k in 0..n {
        // A_{k+1} = [[A_k, C], [R, a_kk]]
        let akk = a.at(k, k).clone();
        let mut col = vec![r.one(), r.neg(&akk)];
        if k > 0 {
            let ak = a.submatrix(0..k, 0..k);
            let c = a.submatrix(0..k, k..k + 1);
            let row = a.submatrix(k..k + 1, 0..k);
            let mut v = c;
            for _ in 0..k {
                col.push(r.neg(row.mul(&v).at(0, 0)));
                v = ak.mul(&v);
            }
        }
        // Toeplitz (k+2) x (k+1) times p
        let mut next = vec![r.zero(); k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, pj) in p.iter().enumerate() {
                if i >= j && i - j < col.len() {
                    *slot = r.add(slot, &r.mul(&col[i - j], pj));
                }
            }
        }
        p = next;
    }
    p.reverse();
    p
}

/// Solve u a + v b = 1 with deg u < deg b, deg v < deg a, for monic a, b
/// coprime modulo the maximal ideal.
pub fn bezout(r: &Ring, a: &[Elt], b: &[Elt]) -> Result<(Poly, Poly)> {
    let (da, db) = (a.len() - 1, b.len() - 1);
    let n = da + db;
    if n == 0 {
        // both constant 1
        return Ok((vec![r.one()], Vec::new()));
    }
    // columns: u_0..u_{db-1}, v_0..v_{da-1}; rows: coefficient of X^k
    let mut m = Mat::zeros(r, n, n);
    for j in 0..db {
        for (i, c) in a.iter().enumerate() {
            m.set(i + j, j, c.clone());
        }
    }
    for j in 0..da {
        for (i, c) in b.iter().enumerate() {
            m.set(i + j, db + j, c.clone());
        }
    }
    let mut rhs = vec![r.zero(); n];
    rhs[0] = r.one();
    let Some(x) = solve(&m, &rhs) else {
        return invalid("factors are not coprime modulo the maximal ideal");
    };
    Ok((trim(r, x[..db].to_vec()), trim(r, x[db..].to_vec())))
}

/// Split a monic P = A B over a finite local ring with A(0) a unit and
/// B congruent to X^m modulo the maximal ideal.
pub fn hensel_split(r: &Ring, p: &[Elt]) -> Result<(Poly, Poly)> {
    if !r.is_finite() || r.is_poly_pid() {
        return invalid("Hensel splitting needs a finite local ring");
    }
    if !is_monic(r, p) {
        return invalid("polynomial is not monic");
    }
    let m = p.iter().position(|c| !r.in_max_ideal(c)).expect("monic has a unit coefficient");
    // residue factor lifted by constant lifts
    let mut a: Poly = p[m..].iter().map(|c| r.lift_residue(r.residue(c))).collect();
    let mut b: Poly = vec![r.zero(); m + 1];
    b[m] = r.one();
    let limit = 64 + 8 * r.base_rank() * r.c() as usize;
    for _ in 0..limit {
        let e = sub(r, p, &mul(r, &a, &b));
        if e.is_empty() {
            return Ok((a, b));
        }
        let (u, v) = bezout(r, &a, &b)?;
        // E = A (uE + qB) + B (vE mod A)
        let ve = mul(r, &v, &e);
        let (q, rem) = if a.len() > 1 { divrem_monic(r, &ve, &a) } else { (ve, Vec::new()) };
        let da = add(r, &mul(r, &u, &e), &mul(r, &q, &b));
        a = add(r, &a, &rem);
        b = add(r, &b, &da);
    }
    unreachable!("Newton iteration on a nilpotent defect terminates")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(r: &Ring, c: &[i64]) -> Poly {
        c.iter().map(|&x| r.from_int(x)).collect()
    }

    #[test]
    fn split_examples_over_z9() {
        let r = Ring::zpc(3, 2).unwrap();
        assert_eq!(hensel_split(&r, &poly(&r, &[0, -2, 1])).unwrap(), (poly(&r, &[-2, 1]), poly(&r, &[0, 1])));
        assert_eq!(hensel_split(&r, &poly(&r, &[0, 1])).unwrap(), (poly(&r, &[1]), poly(&r, &[0, 1])));
        assert_eq!(hensel_split(&r, &poly(&r, &[3, -1, 1])).unwrap(), (poly(&r, &[2, 1]), poly(&r, &[6, 1])));
    }

    #[test]
    fn charpoly_satisfies_cayley_hamilton() {
        let r = Ring::zpc(5, 2).unwrap();
        let a = Mat::from_ints(&r, &[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]);
        let p = charpoly(&a);
        assert_eq!(p.len(), 4);
        assert!(eval_mat(&p, &a).is_zero());
        // trace appears as the negated X^2 coefficient
        assert_eq!(p[2], r.from_int(-16));
    }
}
