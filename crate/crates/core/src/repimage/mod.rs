//! Finite subgroups of GL_n over finite fields: closure enumeration, images of
//! induced representations, a small MeatAxe, cohomology of the trace-zero
//! adjoint module, the enormous-image test and Taylor–Wiles witness search.

pub mod adjoint;
pub mod eigen;
pub mod enormous;
pub mod induced;
pub mod meataxe;
pub mod tw;

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::linalg::FMat;
use crate::rings::{field_from_json, field_to_json, Gf};

pub use enormous::{enormous_check, EnormousReport};
pub use induced::{induced_image, InducedSpec};
pub use meataxe::{simple_submodules, Module};
pub use tw::{semidirect_extension, tw_witness, TwOutcome, TwReport};

pub const DEFAULT_BOUND: usize = 512;

/// A finite matrix group, enumerated breadth-first from its generators.
///
/// `elements[0]` is the identity and every other element is reached as
/// `elements[y] * generators[s]` for an earlier `y`, recorded in `parent`.
#[derive(Clone, Debug)]
pub struct MatGroup {
    pub n: usize,
    pub k: Arc<Gf>,
    pub generators: Vec<FMat>,
    pub elements: Vec<FMat>,
    /// `right[x][s]` is the index of `elements[x] * generators[s]`.
    pub right: Vec<Vec<usize>>,
    pub parent: Vec<Option<(usize, usize)>>,
    index: HashMap<FMat, usize>,
}

pub fn enumerate_group(k: &Arc<Gf>, n: usize, gens: &[FMat], bound: usize) -> Result<MatGroup> {
    if bound == 0 {
        return invalid("bound must be at least 1");
    }
    for (i, g) in gens.iter().enumerate() {
        if g.rows != n || g.cols != n {
            return Err(Error::DimensionMismatch(format!("generator {i} is not {n}x{n}")));
        }
        if g.det(k) == 0 {
            return Err(Error::SingularGenerator(i));
        }
    }
    let id = FMat::identity(n);
    let mut elements = vec![id.clone()];
    let mut index = HashMap::from([(id, 0usize)]);
    let mut parent = vec![None];
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut x = 0;
    while x < elements.len() {
        let mut row = Vec::with_capacity(gens.len());
        for (s, g) in gens.iter().enumerate() {
            let y = elements[x].mul(k, g);
            let j = match index.get(&y) {
                Some(&j) => j,
                None => {
                    if elements.len() == bound {
                        return Err(Error::BoundExceeded(bound));
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                    parent.push(Some((x, s)));
                    elements.len() - 1
                }
            };
            row.push(j);
        }
        right.push(row);
        x += 1;
    }
    Ok(MatGroup { n, k: k.clone(), generators: gens.to_vec(), elements, right, parent, index })
}

impl MatGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, m: &FMat) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let m = self.elements[a].mul(&self.k, &self.elements[b]);
        self.index[&m]
    }

    pub fn inverse(&self, a: usize) -> usize {
        let m = self.elements[a].inverse(&self.k).expect("group elements are invertible");
        self.index[&m]
    }

    /// Index of generator `s` as an element.
    pub fn generator_index(&self, s: usize) -> usize {
        self.right[0][s]
    }

    /// Subgroup generated by the given elements, as sorted indices.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            for &g in gens {
                let y = self.mul(out[i], g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// The commutator subgroup, generated by all commutators.
    pub fn derived_subgroup(&self) -> Vec<usize> {
        let inv: Vec<usize> = (0..self.order()).map(|a| self.inverse(a)).collect();
        let mut comms = std::collections::BTreeSet::new();
        for a in 0..self.order() {
            for b in 0..self.order() {
                let c = self.mul(self.mul(a, b), self.mul(inv[a], inv[b]));
                comms.insert(c);
            }
        }
        comms.remove(&0);
        self.closure(&comms.into_iter().collect::<Vec<_>>())
    }

    /// Values of a character on all elements from its values on generators.
    /// Fails unless the values define a homomorphism to k^×.
    pub fn extend_character(&self, on_gens: &[u32]) -> Result<Vec<u32>> {
        if on_gens.len() != self.generators.len() {
            return Err(Error::DimensionMismatch("one character value per generator".into()));
        }
        if on_gens.iter().any(|&c| c == 0) {
            return invalid("character values must be nonzero");
        }
        let k = &self.k;
        let mut vals = vec![1u32; self.order()];
        for x in 1..self.order() {
            let (y, s) = self.parent[x].expect("non-identity elements have parents");
            vals[x] = k.mul(vals[y], on_gens[s]);
        }
        for x in 0..self.order() {
            for (s, &y) in self.right[x].iter().enumerate() {
                if vals[y] != k.mul(vals[x], on_gens[s]) {
                    return invalid(format!("character is not a homomorphism (element {x}, generator {s})"));
                }
            }
        }
        Ok(vals)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "field": field_to_json(&self.k),
            "generators": self.generators.iter().map(|g| g.to_field_json(&self.k)).collect::<Vec<_>>(),
            "order": self.order(),
        })
    }
}

/// Parse `{"n", "field", "generators", "bound"?}` and enumerate.
pub fn group_from_json(v: &Value) -> Result<MatGroup> {
    let (k, n, gens, bound) = group_parts_from_json(v)?;
    enumerate_group(&k, n, &gens, bound)
}

pub(crate) fn group_parts_from_json(v: &Value) -> Result<(Arc<Gf>, usize, Vec<FMat>, usize)> {
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::InvalidInput("group needs \"n\"".into()))? as usize;
    let k = field_from_json(v.get("field").ok_or_else(|| Error::InvalidInput("group needs \"field\"".into()))?)?;
    let gens = v
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput("group needs a \"generators\" list".into()))?
        .iter()
        .map(|g| FMat::from_json_square(&k, g, n))
        .collect::<Result<Vec<_>>>()?;
    let bound = match v.get("bound") {
        None => DEFAULT_BOUND,
        Some(b) => b.as_u64().ok_or_else(|| Error::InvalidInput("bound must be an integer".into()))? as usize,
    };
    Ok((k, n, gens, bound))
}

pub fn diag(n: usize, entries: &[u32]) -> FMat {
    let mut m = FMat::zeros(n, n);
    for (i, &e) in entries.iter().enumerate() {
        m.a[i][i] = e;
    }
    m
}

/// Matrix from integer rows, reduced into a prime field.
pub fn mat(k: &Gf, rows: &[&[i64]]) -> FMat {
    let n = rows.len();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut m = FMat::zeros(n, cols);
    for (i, r) in rows.iter().enumerate() {
        for (j, &x) in r.iter().enumerate() {
            m.a[i][j] = k.from_int(x);
        }
    }
    m
}

/// The order-8 subgroup of GL_2(F_5) generated by diag(2,3) and the swap.
pub fn dihedral_example() -> MatGroup {
    let k = Gf::prime(5).expect("5 is prime");
    let gens = [mat(&k, &[&[2, 0], &[0, 3]]), mat(&k, &[&[0, 1], &[1, 0]])];
    enumerate_group(&k, 2, &gens, DEFAULT_BOUND).expect("order 8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_examples() {
        let k = Gf::prime(5).unwrap();
        let triv = enumerate_group(&k, 2, &[FMat::identity(2)], 1).unwrap();
        assert_eq!(triv.order(), 1);
        assert_eq!(dihedral_example().order(), 8);
        let g = mat(&k, &[&[2, 0], &[0, 1]]);
        assert_eq!(enumerate_group(&k, 2, &[g], 3).unwrap_err(), Error::BoundExceeded(3));
        let sing = mat(&k, &[&[1, 1], &[1, 1]]);
        assert_eq!(enumerate_group(&k, 2, &[FMat::identity(2), sing], 10).unwrap_err(), Error::SingularGenerator(1));
    }

    #[test]
    fn derived_subgroup_of_dihedral() {
        let h = dihedral_example();
        // commutators of D4 form its centre {±1}
        let d = h.derived_subgroup();
        assert_eq!(d.len(), 2);
        let minus = h.index_of(&diag(2, &[4, 4])).unwrap();
        assert!(d.contains(&minus));
    }

    #[test]
    fn characters_extend_or_fail() {
        let h = dihedral_example();
        let sign = h.extend_character(&[1, 4]).unwrap();
        assert_eq!(sign.iter().filter(|&&c| c == 4).count(), 4);
        assert!(h.extend_character(&[2, 1]).is_err());
    }
}
