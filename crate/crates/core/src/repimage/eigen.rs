//! Eigenvalues in the base field and the eigen-projectors e_{h,α}.

use crate::linalg::FMat;
use crate::rings::gfpoly;
use crate::rings::Gf;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Spectrum {
    /// n distinct eigenvalues, all in k, sorted by field index.
    Distinct(Vec<u32>),
    Repeated,
    NotInField,
}

/// Classify the eigenvalues of h by exhaustive root search of its
/// characteristic polynomial over k.
pub fn spectrum(k: &Gf, h: &FMat) -> Spectrum {
    let mut f = h.charpoly(k);
    let n = h.rows;
    let mut roots = Vec::new();
    let mut found = 0;
    let mut repeated = false;
    for a in k.elements() {
        if found == n {
            break;
        }
        let lin = [k.neg(a), 1];
        let mut mult = 0;
        loop {
            let (q, r) = gfpoly::divrem(k, &f, &lin);
            if !r.is_empty() {
                break;
            }
            f = q;
            mult += 1;
        }
        if mult > 0 {
            roots.push(a);
            found += mult;
            repeated |= mult > 1;
        }
    }
    match (found == n, repeated) {
        (false, _) => Spectrum::NotInField,
        (true, true) => Spectrum::Repeated,
        (true, false) => Spectrum::Distinct(roots),
    }
}

/// e_{h,α} = Π_{β≠α} (h − β)/(α − β).
pub fn projector(k: &Gf, h: &FMat, alpha: u32, eigenvalues: &[u32]) -> FMat {
    let n = h.rows;
    let mut e = FMat::identity(n);
    for &b in eigenvalues.iter().filter(|&&b| b != alpha) {
        let c = k.inv(k.sub(alpha, b)).expect("distinct eigenvalues");
        e = e.mul(k, &h.sub(k, &FMat::scalar(n, b))).scale(k, c);
    }
    e
}

/// e² = e, h e = α e and Σ_α e_{h,α} = 1 for every eigenvalue.
pub fn projectors_are_consistent(k: &Gf, h: &FMat, eigenvalues: &[u32]) -> bool {
    let n = h.rows;
    let mut sum = FMat::zeros(n, n);
    for &a in eigenvalues {
        let e = projector(k, h, a, eigenvalues);
        if e.mul(k, &e) != e || h.mul(k, &e) != e.scale(k, a) || e.mul(k, h) != e.scale(k, a) {
            return false;
        }
        sum = sum.add(k, &e);
    }
    sum == FMat::identity(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repimage::mat;

    #[test]
    fn spectra() {
        let k = Gf::prime(5).unwrap();
        let h = mat(&k, &[&[2, 0], &[0, 3]]);
        assert_eq!(spectrum(&k, &h), Spectrum::Distinct(vec![2, 3]));
        assert_eq!(spectrum(&k, &FMat::identity(2)), Spectrum::Repeated);
        // x^2 - 2 has no root mod 5
        let r = mat(&k, &[&[0, 2], &[1, 0]]);
        assert_eq!(spectrum(&k, &r), Spectrum::NotInField);
        // (x - 1)^2 (x^2 - 2): repeated and not split
        let mut m = FMat::identity(4);
        m.a[2] = vec![0, 0, 0, 2];
        m.a[3] = vec![0, 0, 1, 0];
        assert_eq!(spectrum(&k, &m), Spectrum::NotInField);
        let e = projector(&k, &h, 2, &[2, 3]);
        assert_eq!(e, mat(&k, &[&[1, 0], &[0, 0]]));
        assert!(projectors_are_consistent(&k, &mat(&k, &[&[0, 2], &[3, 0]]), &[1, 4]));
    }
}
