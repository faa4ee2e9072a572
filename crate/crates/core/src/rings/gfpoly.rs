//! Univariate polynomials over a `Gf`, coefficients constant term first,
//! trimmed so the zero polynomial is empty.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gf::Gf;

pub type GfPoly = Vec<u32>;

pub fn trim(mut a: GfPoly) -> GfPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u32]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn add(f: &Gf, a: &[u32], b: &[u32]) -> GfPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn sub(f: &Gf, a: &[u32], b: &[u32]) -> GfPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn scale(f: &Gf, a: &[u32], c: u32) -> GfPoly {
    trim(a.iter().map(|&x| f.mul(x, c)).collect())
}

pub fn mul(f: &Gf, a: &[u32], b: &[u32]) -> GfPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

pub fn divrem(f: &Gf, a: &[u32], b: &[u32]) -> (GfPoly, GfPoly) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = f.inv(b[db]).expect("nonzero leading coefficient");
    if r.len() < b.len() {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![0u32; r.len() - db];
    for k in (db..r.len()).rev() {
        let c = f.mul(r[k], lead_inv);
        if c == 0 {
            continue;
        }
        q[k - db] = c;
        for (i, &bi) in b.iter().enumerate() {
            let idx = k - db + i;
            r[idx] = f.sub(r[idx], f.mul(c, bi));
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn rem(f: &Gf, a: &[u32], b: &[u32]) -> GfPoly {
    divrem(f, a, b).1
}

pub fn monic(f: &Gf, a: &[u32]) -> GfPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => scale(f, a, f.inv(l).unwrap()),
    }
}

pub fn gcd(f: &Gf, a: &[u32], b: &[u32]) -> GfPoly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

/// Extended gcd: returns (g, s, t) with s a + t b = g, g monic.
pub fn xgcd(f: &Gf, a: &[u32], b: &[u32]) -> (GfPoly, GfPoly, GfPoly) {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![1u32], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u32]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(&l) => {
            let li = f.inv(l).unwrap();
            (scale(f, &r0, li), scale(f, &s0, li), scale(f, &t0, li))
        }
    }
}

pub fn mulmod(f: &Gf, a: &[u32], b: &[u32], m: &[u32]) -> GfPoly {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &Gf, base: &[u32], mut e: u64, m: &[u32]) -> GfPoly {
    let mut result = rem(f, &[1], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(f, &result, &b, m);
        }
        b = mulmod(f, &b, &b, m);
        e >>= 1;
    }
    result
}

pub fn derivative(f: &Gf, a: &[u32]) -> GfPoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
            .collect(),
    )
}

pub fn eval(f: &Gf, a: &[u32], x: u32) -> u32 {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

fn pth_root(f: &Gf, a: &[u32]) -> GfPoly {
    let p = f.p() as usize;
    let e = f.p().pow(f.degree() as u32 - 1);
    trim(a.iter().step_by(p).map(|&c| f.pow(c, e)).collect())
}

/// Square-free decomposition of a monic polynomial: pairs (g, multiplicity),
/// the g square-free, pairwise coprime, product of g^mult equal to `a`.
pub fn squarefree(f: &Gf, a: &[u32]) -> Vec<(GfPoly, usize)> {
    let a = monic(f, a);
    let mut out = Vec::new();
    if a.len() <= 1 {
        return out;
    }
    let da = derivative(f, &a);
    let mut c = gcd(f, &a, &da);
    let mut w = divrem(f, &a, &c).0;
    let mut i = 1;
    while w.len() > 1 {
        let y = gcd(f, &w, &c);
        let fac = divrem(f, &w, &y).0;
        if fac.len() > 1 {
            out.push((monic(f, &fac), i));
        }
        c = divrem(f, &c, &y).0;
        w = y;
        i += 1;
    }
    if c.len() > 1 {
        let root = pth_root(f, &c);
        for (g, m) in squarefree(f, &root) {
            out.push((g, m * f.p() as usize));
        }
    }
    out
}

fn frobenius_power(f: &Gf, a: &[u32], m: &[u32]) -> GfPoly {
    powmod(f, a, f.size() as u64, m)
}

fn distinct_degree(f: &Gf, a: &[u32]) -> Vec<(GfPoly, usize)> {
    let mut out = Vec::new();
    let mut rest = monic(f, a);
    let x = vec![0u32, 1];
    let mut h = rem(f, &x, &rest);
    let mut d = 1;
    while rest.len() > 2 * d {
        h = frobenius_power(f, &h, &rest);
        let g = gcd(f, &rest, &sub(f, &h, &x));
        if g.len() > 1 {
            rest = divrem(f, &rest, &g).0;
            h = rem(f, &h, &rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.len() > 1 {
        let deg = rest.len() - 1;
        out.push((rest, deg));
    }
    out
}

fn equal_degree(f: &Gf, g: &[u32], d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<GfPoly>) {
    let n = g.len() - 1;
    if n == d {
        out.push(g.to_vec());
        return;
    }
    loop {
        let a: GfPoly = trim((0..n).map(|_| rng.gen_range(0..f.size())).collect());
        if a.len() <= 1 {
            continue;
        }
        let b = if f.p() == 2 {
            // trace to F_2 of a over GF(q^d)
            let steps = f.degree() * d;
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..steps {
                t = mulmod(f, &t, &t, g);
                acc = add(f, &acc, &t);
            }
            acc
        } else {
            let mut norm = rem(f, &a, g);
            let mut t = norm.clone();
            for _ in 1..d {
                t = frobenius_power(f, &t, g);
                norm = mulmod(f, &norm, &t, g);
            }
            let half = (f.size() as u64 - 1) / 2;
            sub(f, &powmod(f, &norm, half, g), &[1])
        };
        let h = gcd(f, g, &b);
        if h.len() > 1 && h.len() < g.len() {
            let other = divrem(f, g, &h).0;
            equal_degree(f, &h, d, rng, out);
            equal_degree(f, &monic(f, &other), d, rng, out);
            return;
        }
    }
}

/// Factorisation into distinct monic irreducibles with multiplicities, sorted.
pub fn factor(f: &Gf, a: &[u32]) -> Vec<(GfPoly, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    for (sq, mult) in squarefree(f, a) {
        for (g, d) in distinct_degree(f, &sq) {
            let mut irr = Vec::new();
            equal_degree(f, &g, d, &mut rng, &mut irr);
            for h in irr {
                out.push((h, mult));
            }
        }
    }
    out.sort_by(|x, y| (x.0.len(), &x.0).cmp(&(y.0.len(), &y.0)));
    out
}
