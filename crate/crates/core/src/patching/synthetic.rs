//! Inputs whose patched output is known in advance.

use super::algebra::{exponents, variable, FinAlg};
use super::{lift_complex, lift_map, InputLevel, PatchingInput};
use crate::complexes::{ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::rings::{Elt, Ring};

fn embed(x: &Elt, from: &[Vec<u32>], to_ring: &Ring, to: &[Vec<u32>]) -> Elt {
    let mut out = to_ring.zero();
    for (k, m) in from.iter().enumerate() {
        let mut padded = m.clone();
        padded.resize(to[0].len(), 0);
        if let Some(t) = to.iter().position(|e| *e == padded) {
            out[t] = x[k];
        }
    }
    out
}

/// C_N = C_0 ⊗_Λ S_N and R_N = R_0[Y_1..Y_q]/(I_N), with S_i acting as Y_i.
/// `r0` is presented over Λ[X_1..X_g]/(X)^K; the output ambient appends Y_1..Y_q.
pub fn constant_input(
    c0: &FreeComplex,
    r0: &FinAlg,
    r0_action: &[ChainMap],
    q: usize,
    levels: usize,
    schedule: Option<Vec<u32>>,
) -> Result<PatchingInput> {
    let lambda = c0.ring.clone();
    let (p, c) = (lambda.p(), lambda.c());
    let g0 = r0.vars;
    let schedule = schedule.unwrap_or_else(|| (1..=levels as u32).collect());
    if schedule.len() < levels {
        return Err(Error::InvalidInput("schedule shorter than the number of levels".into()));
    }
    let order = r0.ambient.trunc_shape().map_or(1, |s| s.1).max(schedule.iter().copied().max().unwrap_or(1) + 1);
    let vars = g0 + q;
    let ambient = Ring::trunc(p, c, vars, order)?;
    let (from, to) = (exponents(&r0.ambient, g0), exponents(&ambient, vars));
    let lift = |x: &Elt| embed(x, &from, &ambient, &to);
    let j0: Vec<Elt> = r0.gens().iter().map(lift).collect();
    let ys: Vec<Elt> = (0..q).map(|i| variable(&ambient, vars, g0 + i)).collect();
    let xs: Vec<Elt> = (0..g0).map(|j| variable(&ambient, vars, j)).collect();
    let r_inf = FinAlg::new(&ambient, vars, &j0);
    let mut r0_rel = j0.clone();
    r0_rel.extend(ys.iter().cloned());
    let r0_big = FinAlg::new(&ambient, vars, &r0_rel);
    let mut big_action: Vec<ChainMap> = r0_action.to_vec();
    big_action.extend((0..q).map(|_| ChainMap::zero(c0, c0)));
    let mut input = PatchingInput {
        lambda: lambda.clone(),
        q,
        d: c0.hi,
        schedule,
        ambient: ambient.clone(),
        vars,
        r_inf: r_inf.clone(),
        c0: c0.clone(),
        r0: r0_big,
        r0_action: big_action,
        levels: Vec::new(),
    };
    for n in 1..=levels {
        let s_ring = input.level_ring(n);
        let complex = lift_complex(c0, &s_ring);
        let reduced = complex.base_change(&input.augmentation(n));
        let framing = ChainMap::identity(&reduced).retarget(&reduced, &input.c0_at(n));
        let mut action: Vec<ChainMap> = r0_action.iter().map(|t| lift_map(t, &complex, &complex)).collect();
        action.extend((0..q).map(|i| ChainMap::identity(&complex).scale(&variable(&s_ring, q, i))));
        let mut algebra = r_inf.with(&[ambient.from_int(p.pow(input.c_at(n)) as i64)]);
        algebra = algebra.with(&input.level_ideal(n, &ys));
        let mut to_r0 = xs.clone();
        to_r0.extend((0..q).map(|_| ambient.zero()));
        input.levels.push(InputLevel { complex, framing, algebra, sigma: ys.clone(), action, to_r0 });
    }
    Ok(input)
}

/// Λ = F_p, q = 1, d = 1, C_N = [S_N --S--> S_N], R_N = F_p[X]/(X^N) with S
/// acting as X and X acting as S; C_0 = [F_p --0--> F_p] and R_0 = F_p.
pub fn koszul_input(p: u64, levels: usize) -> Result<PatchingInput> {
    let lambda = Ring::zpc(p, 1)?;
    let ambient = Ring::trunc(p, 1, 1, levels as u32 + 1)?;
    let x = variable(&ambient, 1, 0);
    let c0 = FreeComplex::two_term(0, Mat::zeros(&lambda, 1, 1));
    let r0 = FinAlg::new(&ambient, 1, &[x.clone()]);
    let mut input = PatchingInput {
        lambda: lambda.clone(),
        q: 1,
        d: 1,
        schedule: (1..=levels as u32).collect(),
        ambient: ambient.clone(),
        vars: 1,
        r_inf: FinAlg::new(&ambient, 1, &[]),
        c0: c0.clone(),
        r0,
        r0_action: vec![ChainMap::zero(&c0, &c0)],
        levels: Vec::new(),
    };
    for n in 1..=levels {
        let s_ring = input.level_ring(n);
        let s = variable(&s_ring, 1, 0);
        let complex = FreeComplex::two_term(0, Mat::scalar(&s_ring, 1, &s));
        let reduced = complex.base_change(&input.augmentation(n));
        let framing = ChainMap::identity(&reduced).retarget(&reduced, &input.c0_at(n));
        let algebra = FinAlg::new(&ambient, 1, &[ambient.pow(&x, n as u64)]);
        let action = vec![ChainMap::identity(&complex).scale(&s)];
        input.levels.push(InputLevel { complex, framing, algebra, sigma: vec![x.clone()], action, to_r0: vec![ambient.zero()] });
    }
    Ok(input)
}
