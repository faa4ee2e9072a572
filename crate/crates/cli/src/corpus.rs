//! Deterministic corpora of valid inputs, one JSON file per item plus a
//! manifest of digests.

use std::fs;
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use ordkit::complexes::homology::homology;
use ordkit::complexes::random::random_complex;
use ordkit::complexes::ChainMap;
use ordkit::hecke::HeckeModule;
use ordkit::patching::algebra::variable;
use ordkit::patching::{constant_input, koszul_input, FinAlg, PatchingInput};
use ordkit::repimage::enumerate_group;
use ordkit::rings::{Gf, Ring};
use ordkit::tower::{glue_ordinary, ComplexTower, QuotientChain};
use ordkit::Error;

use crate::gen::{item_seed, random_endo, random_invertible_fmat, random_matrix, rng, scramble_tower};
use crate::verdict::{digest, InvalidInput};

pub const KINDS: [&str; 5] = ["complexes", "towers", "patching-inputs", "hecke-modules", "groups"];

/// Attempts per item before giving up.
pub const MAX_ATTEMPTS: usize = 200;

/// One candidate, or `None` when its preconditions fail and it must be
/// resampled.
fn candidate(kind: &str, rng: &mut ChaCha8Rng) -> Option<Value> {
    match kind {
        "complexes" => {
            let ring = Ring::zpc([3u64, 5][rng.gen_range(0..2)], rng.gen_range(1..=3)).ok()?;
            let c = random_complex(&ring, 0, rng.gen_range(0..=3), 4, rng);
            let nonzero = c.ranks().iter().any(|&r| r > 0);
            (nonzero && homology(&c).verify(&c).is_ok()).then(|| c.to_json())
        }
        "towers" => {
            let chain = QuotientChain::p_adic([3u64, 5][rng.gen_range(0..2)], rng.gen_range(2..=4)).ok()?;
            let m = random_complex(&chain.top, 0, rng.gen_range(0..=1), 2, rng);
            let t = random_endo(&m, rng);
            let s = t.compose(&t).add(&t);
            let tower = scramble_tower(&ComplexTower::constant(&chain, &m, Some(&t), Some(&s)), rng);
            glue_ordinary(&tower).ok()?.verified().then(|| tower.to_json())
        }
        "patching-inputs" => {
            let input: PatchingInput = match rng.gen_range(0..3) {
                0 => koszul_input(3, rng.gen_range(2..=4)).ok()?,
                q => {
                    let q = q as usize - 1;
                    let c = if q == 0 { rng.gen_range(1..=2) } else { 1 };
                    let lam = Ring::zpc(3, c).ok()?;
                    let c0 = random_complex(&lam, 0, rng.gen_range(0..=1), if q == 0 { 2 } else { 1 }, rng);
                    if q == 1 && c0.ranks().iter().any(|&r| r > 1) {
                        return None;
                    }
                    let amb = Ring::trunc(3, c, 1, 3).ok()?;
                    let x = variable(&amb, 1, 0);
                    let r0 = FinAlg::new(&amb, 1, &[amb.pow(&x, 2)]);
                    let act = if c > 1 && rng.gen_bool(0.5) {
                        let t = random_endo(&c0, rng);
                        t.scale(&lam.from_int(3))
                    } else {
                        ChainMap::zero(&c0, &c0)
                    };
                    constant_input(&c0, &r0, &[act], q, rng.gen_range(2..=4), None).ok()?
                }
            };
            input.validate().ok()?;
            Some(input.to_json())
        }
        "hecke-modules" => {
            let n = rng.gen_range(1..=3);
            let k = Gf::prime([3u64, 5, 7][rng.gen_range(0..3)]).ok()?;
            let gamma: Vec<u32> = (0..n).map(|_| rng.gen_range(1..k.size())).collect();
            let m = HeckeModule::regular(n, &k, &gamma).ok()?;
            let p = random_invertible_fmat(&k, m.dim, 1.0, rng);
            let pi = p.inverse(&k)?;
            let conj = |x: &ordkit::linalg::FMat| p.mul(&k, x).mul(&k, &pi);
            let m = HeckeModule::new(n, &k, m.q, m.theta.iter().map(conj).collect(), m.t.iter().map(conj).collect()).ok()?;
            m.violated_relations().is_empty().then(|| json!({"module": m.to_json(), "gamma": gamma}))
        }
        _ => {
            let n = rng.gen_range(2..=3);
            let k = Gf::prime([3u64, 5, 7][rng.gen_range(0..3)]).ok()?;
            let gens: Vec<_> = (0..rng.gen_range(1..=2)).map(|_| random_matrix(&k, n, n, 0.5, rng)).collect();
            if gens.iter().any(|g| g.det(&k) == 0) {
                return None;
            }
            let h = enumerate_group(&k, n, &gens, 2000).ok()?;
            let mut v = h.to_json();
            v["bound"] = json!(2000);
            Some(v)
        }
    }
}

/// Generate item `index`, resampling until its preconditions hold.
fn generate_one(kind: &str, seed: u64, index: usize) -> Result<(Value, usize), Error> {
    let mut r = rng(item_seed(kind, seed, index));
    for attempt in 0..MAX_ATTEMPTS {
        if let Some(v) = candidate(kind, &mut r) {
            return Ok((v, attempt));
        }
    }
    Err(Error::GenerationStalled(index))
}

#[derive(Debug)]
pub enum CorpusError {
    Invalid(InvalidInput),
    Stalled(Error),
}

/// Write `count` items of `kind` to `out`; returns the manifest.
pub fn generate(kind: &str, count: usize, seed: u64, out: &Path) -> Result<Value, CorpusError> {
    if !KINDS.contains(&kind) {
        return Err(CorpusError::Invalid(InvalidInput::new("--kind", format!("unknown kind {kind:?}; expected one of {}", KINDS.join(", ")))));
    }
    let items: Vec<(Value, usize)> = (0..count)
        .into_par_iter()
        .map(|i| generate_one(kind, seed, i))
        .collect::<Result<_, _>>()
        .map_err(CorpusError::Stalled)?;
    let io = |e: std::io::Error| CorpusError::Invalid(InvalidInput::new("--out", e.to_string()));
    fs::create_dir_all(out).map_err(io)?;
    let mut files = Vec::new();
    let mut resamples = 0;
    for (i, (v, tries)) in items.iter().enumerate() {
        let name = format!("{kind}-{i:04}.json");
        let text = serde_json::to_string_pretty(v).expect("values serialize") + "\n";
        fs::write(out.join(&name), text).map_err(io)?;
        files.push(json!({"file": name, "digest": digest(v), "resamples": tries}));
        resamples += tries;
    }
    let manifest = json!({"kind": kind, "count": count, "seed": seed, "resamples": resamples, "files": files});
    fs::write(out.join("manifest.json"), serde_json::to_string_pretty(&manifest).expect("values serialize") + "\n").map_err(io)?;
    eprintln!("corpus {kind}: {count} items, {resamples} resamples");
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidates_are_reproducible() {
        for kind in KINDS {
            let a = generate_one(kind, 9, 3).unwrap();
            let b = generate_one(kind, 9, 3).unwrap();
            assert_eq!(a, b, "{kind}");
        }
    }
}
