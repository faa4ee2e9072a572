//! One function per subcommand: parse the JSON input, run the core
//! operation, and report pass/fail with witnesses.

use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use ordkit::complexes::homology::homology;
use ordkit::complexes::truncate::Side;
use ordkit::complexes::{homotopy_classes, minimalize, tor_base_change_check, truncate, ChainMap, FreeComplex, RegularElement};
use ordkit::hecke::{center_element, hecke_mul, mod_p_group_algebra_check, module_support, non_commuting, HeckeElt, HeckeModule};
use ordkit::linalg::{FMat, Mat};
use ordkit::numerology::{
    euler_characteristic, selmer_dimension, space_dims, tw_presentation, DimLedger, FieldShape, SelmerInput, TateInputs,
};
use ordkit::ordinary::{complex_ordinary, derived_idempotent, localize_complex, module_ordinary, verify_decomposition, PresentedModule};
use ordkit::patching::{patch, PatchingInput};
use ordkit::repimage::enormous::adjoint_module;
use ordkit::repimage::group_from_json;
use ordkit::repimage::tw::TwInput;
use ordkit::repimage::{enormous_check, simple_submodules, tw_witness, InducedSpec, Module};
use ordkit::rings::poly::{hensel_split, is_monic, mul as poly_mul, trim};
use ordkit::rings::{field_elt_from_json, field_from_json, field_to_json, Gf, Ring, RingSpec};
use ordkit::tower::{control_check, glue_good, glue_minimal, glue_ordinary, ComplexTower};

use crate::verdict::{invalid, At, CmdResult, Outcome, Stop};

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value, Stop> {
    match v.get(key) {
        Some(x) if !x.is_null() => Ok(x),
        _ => invalid(&format!("/{key}"), format!("missing \"{key}\"")),
    }
}

fn parse<T: DeserializeOwned>(v: &Value, location: &str) -> Result<T, Stop> {
    serde_json::from_value(v.clone()).or_else(|e| invalid(location, e.to_string()))
}

fn uint(v: &Value, key: &str) -> Result<u64, Stop> {
    get(v, key)?.as_u64().map_or_else(|| invalid(&format!("/{key}"), "expected a non-negative integer"), Ok)
}

fn ring_of(v: &Value, location: &str) -> Result<Ring, Stop> {
    let spec: RingSpec = parse(v, location)?;
    Ring::new(&spec).at(location)
}

/// The complex under "complex", or the whole input.
fn complex_arg(v: &Value) -> Result<(FreeComplex, &'static str), Stop> {
    match v.get("complex") {
        Some(c) => Ok((FreeComplex::from_json(c).at("/complex")?, "/complex")),
        None => Ok((FreeComplex::from_json(v).at("")?, "")),
    }
}

/// Endomorphisms under "endos" (or a single "T").
fn endos(v: &Value, c: &FreeComplex) -> Result<Vec<ChainMap>, Stop> {
    if let Some(t) = v.get("T") {
        return Ok(vec![ChainMap::from_json(c, c, t).at("/T")?]);
    }
    let list = get(v, "endos")?.as_array().map_or_else(|| invalid("/endos", "expected a list"), Ok)?;
    list.iter()
        .enumerate()
        .map(|(i, x)| ChainMap::from_json(c, c, x).at(&format!("/endos/{i}")))
        .collect()
}

fn field_of(p: u64, modulus: &[u64]) -> Result<std::sync::Arc<Gf>, Stop> {
    if modulus.is_empty() {
        Gf::prime(p).at("--p")
    } else {
        Gf::new(p, modulus.to_vec()).at("--modulus")
    }
}

pub fn ring(v: &Value) -> CmdResult {
    let spec_v = v.get("ring").unwrap_or(v);
    let ring = ring_of(spec_v, if v.get("ring").is_some() { "/ring" } else { "" })?;
    let elt = |x: &Value, loc: &str| ring.elt_from_json(x).at(loc);
    let mut w = json!({
        "ring": ring.spec(),
        "finite": ring.is_finite(),
        "size": ring.size().map(|s| s.to_string()),
        "residue_field": field_to_json(ring.residue_field()),
    });
    let mut pass = true;
    if let Some(ps) = v.get("products") {
        let ps = ps.as_array().map_or_else(|| invalid("/products", "expected a list of pairs"), Ok)?;
        let mut out = Vec::new();
        for (i, pair) in ps.iter().enumerate() {
            let loc = format!("/products/{i}");
            let (a, b) = match pair.as_array().map(Vec::as_slice) {
                Some([a, b]) => (elt(a, &loc)?, elt(b, &loc)?),
                _ => return invalid(&loc, "expected [a, b]"),
            };
            out.push(ring.elt_to_json(&ring.mul(&a, &b)));
        }
        w["products"] = json!(out);
    }
    if let Some(pv) = v.get("poly") {
        let coeffs = pv.as_array().map_or_else(|| invalid("/poly", "expected a coefficient list"), Ok)?;
        let p: Vec<_> = coeffs.iter().enumerate().map(|(i, c)| elt(c, &format!("/poly/{i}"))).collect::<Result<_, _>>()?;
        if !is_monic(&ring, &p) {
            return invalid("/poly", "polynomial must be monic (constant term first)");
        }
        let (a, b) = hensel_split(&ring, &p).at("/poly")?;
        let matches = trim(&ring, poly_mul(&ring, &a, &b)) == trim(&ring, p);
        let js = |f: &[ordkit::rings::Elt]| f.iter().map(|c| ring.elt_to_json(c)).collect::<Vec<_>>();
        w["hensel"] = json!({"A": js(&a), "B": js(&b), "product_matches": matches});
        pass = matches;
    }
    Ok(Outcome::new(pass, w))
}

pub fn complex_homology(v: &Value) -> CmdResult {
    let (c, _) = complex_arg(v)?;
    let rep = homology(&c);
    let verified = rep.verify(&c);
    let mut w = rep.to_json();
    w["verified"] = json!(verified.is_ok());
    if let Err(e) = verified {
        w["verification_error"] = json!(e.to_string());
    }
    Ok(Outcome::new(w["verified"] == json!(true), w))
}

pub fn complex_minimalize(v: &Value) -> CmdResult {
    let (c, _) = complex_arg(v)?;
    let m = minimalize(&c);
    let minimal = m.complex.is_minimal();
    let certified = m.certify();
    Ok(Outcome::new(
        minimal && certified,
        json!({
            "complex": m.complex.to_json(),
            "f": m.f.to_json(),
            "g": m.g.to_json(),
            "cancelled_pairs": m.pivots.len(),
            "minimal": minimal,
            "certified": certified,
        }),
    ))
}

fn side_of(s: &str) -> Result<Side, Stop> {
    match s {
        "le" | "<=" | "≤" => Ok(Side::AtMost),
        "gt" | ">" => Ok(Side::Above),
        _ => invalid("/side", format!("side must be \"le\" or \"gt\", got {s:?}")),
    }
}

pub fn complex_truncate(v: &Value) -> CmdResult {
    let (c, _) = complex_arg(v)?;
    let n = get(v, "n")?.as_i64().map_or_else(|| invalid("/n", "expected an integer"), Ok)?;
    let side = side_of(get(v, "side")?.as_str().unwrap_or(""))?;
    let t = truncate(&c, n).at("/n")?;
    let map = match side {
        Side::AtMost => t.incl.to_json(),
        Side::Above => t.proj.to_json(),
    };
    Ok(Outcome::new(
        t.les_verified && t.quasi_iso_verified,
        json!({
            "n": n,
            "side": side,
            "complex": t.side(side).to_json(),
            "map": map,
            "exact_from": t.exact_from(side),
            "les_verified": t.les_verified,
            "quasi_iso_verified": t.quasi_iso_verified,
        }),
    ))
}

fn regular_element(v: &Value) -> Result<RegularElement, Stop> {
    let x = get(v, "x")?;
    let num = |key: &str| x.get(key).and_then(Value::as_u64).map_or_else(|| invalid(&format!("/x/{key}"), "expected an integer"), Ok);
    match x.get("kind").and_then(Value::as_str) {
        Some("s-power") => Ok(RegularElement::SPower { j: num("j")? as u32 }),
        Some("s-minus") => Ok(RegularElement::SMinus { u: num("u")? }),
        _ => invalid("/x/kind", "kind must be \"s-power\" or \"s-minus\""),
    }
}

pub fn complex_tor_check(v: &Value) -> CmdResult {
    let (c, _) = complex_arg(v)?;
    let x = regular_element(v)?;
    let rep = tor_base_change_check(&c, x).at("/x")?;
    Ok(Outcome::new(rep.passed(), serde_json::to_value(&rep).expect("serializable")))
}

pub fn complex_hom_classes(v: &Value) -> CmdResult {
    let s = FreeComplex::from_json(get(v, "source")?).at("/source")?;
    let t = FreeComplex::from_json_over(&s.ring, get(v, "target")?).at("/target")?;
    let b = homotopy_classes(&s, &t).at("/source")?;
    Ok(Outcome::new(
        true,
        json!({
            "generators": b.num_generators(),
            "factors": b.factors().iter().map(|f| s.ring.elt_to_json(f)).collect::<Vec<_>>(),
            "representatives": b.reps.iter().map(ChainMap::to_json).collect::<Vec<_>>(),
        }),
    ))
}

pub fn ordinary_module(v: &Value) -> CmdResult {
    let ring = ring_of(get(v, "ring")?, "/ring")?;
    let n = uint(v, "n")? as usize;
    let rel = match v.get("relations") {
        None | Some(Value::Null) => Mat::zeros(&ring, n, 0),
        Some(x) => {
            let m = Mat::from_json_any(&ring, x).at("/relations")?;
            if m.rows == 0 {
                Mat::zeros(&ring, n, 0)
            } else {
                m
            }
        }
    };
    let t_json = match v.get("T") {
        Some(t) => t,
        None => get(v, "endos")?.get(0).map_or_else(|| invalid("/endos", "expected one endomorphism"), Ok)?,
    };
    let t = Mat::from_json(&ring, t_json, n, n).at("/T")?;
    let m = PresentedModule::new(&ring, n, rel).at("/relations")?;
    let d = module_ordinary(&m, &t).at("/T")?;
    let check = verify_decomposition(&m, &t, &d);
    let mut w = d.to_json();
    w["module"] = m.to_json();
    w["verified"] = json!(check.is_ok());
    if let Err(e) = &check {
        w["verification_error"] = json!(e);
    }
    Ok(Outcome::new(check.is_ok(), w))
}

pub fn ordinary_complex(v: &Value) -> CmdResult {
    let (c, _) = complex_arg(v)?;
    let t = endos(v, &c)?.remove(0);
    let o = complex_ordinary(&c, &t).at("/endos/0")?;
    let check = o.verify(&c, &t);
    let mut w = o.to_json();
    w["verified"] = json!(check.is_ok());
    if let Err(e) = &check {
        w["verification_error"] = json!(e);
    }
    Ok(Outcome::new(check.is_ok(), w))
}

pub fn ordinary_derived(v: &Value) -> CmdResult {
    let (c, _) = complex_arg(v)?;
    let t = endos(v, &c)?.remove(0);
    let d = derived_idempotent(&c, &t).at("/endos/0")?;
    let mut w = d.to_json(&c.ring);
    w["e"] = d.e.to_json();
    Ok(Outcome::new(d.unique(), w))
}

pub fn ordinary_localize(v: &Value) -> CmdResult {
    let (c, _) = complex_arg(v)?;
    let gens = endos(v, &c)?;
    let loc = localize_complex(&c, &gens).at("/endos")?;
    let mut w = loc.to_json();
    if let Some(r) = v.get("residues") {
        let k = c.ring.residue_field();
        let list = r.as_array().map_or_else(|| invalid("/residues", "expected a list"), Ok)?;
        let res: Vec<u32> = list
            .iter()
            .enumerate()
            .map(|(i, x)| field_elt_from_json(k, x).at(&format!("/residues/{i}")))
            .collect::<Result<_, _>>()?;
        let sel = loc.select(&res).at("/residues")?;
        w["selected"] = match sel {
            Some(f) => json!({"complex": f.complex.to_json(), "idempotent": f.idempotent.to_json()}),
            None => json!({"complex": null, "zero": true}),
        };
    }
    Ok(Outcome::new(loc.recovers, w))
}

pub fn tower_glue(v: &Value, which: &str) -> CmdResult {
    let tower = ComplexTower::from_json(v).at("")?;
    match which {
        "glue" => {
            let l = glue_good(&tower).run("/levels")?;
            Ok(Outcome::new(l.verified(), l.to_json()))
        }
        "glue-min" => {
            let l = glue_minimal(&tower).run("/levels")?;
            Ok(Outcome::new(l.verified(), l.to_json()))
        }
        "glue-ord" => {
            let l = glue_ordinary(&tower).run("/levels")?;
            Ok(Outcome::new(l.verified(), l.to_json()))
        }
        _ => {
            let limit = match v.get("limit") {
                Some(x) => FreeComplex::from_json_over(&tower.chain.top, x).at("/limit")?,
                None => glue_ordinary(&tower).run("/levels")?.complex,
            };
            let r = control_check(&limit, &tower);
            Ok(Outcome::new(r.passed(), json!({"limit": limit.to_json(), "report": r.to_json()})))
        }
    }
}

pub fn patch_run(v: &Value) -> CmdResult {
    let input = PatchingInput::from_json(v).at("")?;
    input.validate().at("")?;
    let horizon = uint(v, "horizon")? as usize;
    let out = patch(&input, horizon).run("/horizon")?;
    Ok(Outcome::new(out.verified(), out.to_json()))
}

pub fn hecke_mul_cmd(v: &Value) -> CmdResult {
    let a = HeckeElt::from_json(get(v, "a")?).at("/a")?;
    let b = HeckeElt::from_json(get(v, "b")?).at("/b")?;
    let prod = hecke_mul(&a, &b).at("/b")?;
    Ok(Outcome::new(true, json!({"product": prod.to_json()})))
}

pub fn hecke_check_iso(n: usize, p: u64, q: i64, modulus: &[u64]) -> CmdResult {
    let k = field_of(p, modulus)?;
    let verdict = mod_p_group_algebra_check(n, &k, k.from_int(q)).at("--n")?;
    Ok(Outcome::new(verdict.pass, verdict.to_json()))
}

pub fn hecke_center(i: usize, n: usize, p: u64, q: i64, modulus: &[u64]) -> CmdResult {
    let k = field_of(p, modulus)?;
    let z = center_element(i, n, &k, k.from_int(q)).at("--i")?;
    let bad = non_commuting(&z).at("--i")?;
    Ok(Outcome::new(bad.is_empty(), json!({"element": z.to_json(), "non_commuting_generators": bad})))
}

pub fn hecke_support(v: &Value) -> CmdResult {
    let m = HeckeModule::from_json(get(v, "module")?).at("/module")?;
    let list = get(v, "gamma")?.as_array().map_or_else(|| invalid("/gamma", "expected a list"), Ok)?;
    let gamma: Vec<u32> = list
        .iter()
        .enumerate()
        .map(|(i, x)| field_elt_from_json(&m.k, x).at(&format!("/gamma/{i}")))
        .collect::<Result<_, _>>()?;
    let violated = m.violated_relations();
    let rep = module_support(&m, &gamma).at("/gamma")?;
    Ok(Outcome::new(rep.ok() && violated.is_empty(), json!({"report": rep.to_json(), "violated_relations": violated})))
}

pub fn image_enumerate(v: &Value) -> CmdResult {
    let h = group_from_json(v).at("")?;
    let mut w = h.to_json();
    w["elements"] = json!(h.elements.iter().map(|g| g.to_field_json(&h.k)).collect::<Vec<_>>());
    Ok(Outcome::new(true, w))
}

pub fn image_induce(v: &Value) -> CmdResult {
    let spec = InducedSpec::from_json(v).at("")?;
    let ind = spec.validate().at("")?;
    let img = ind.image().at("/bound")?;
    let gens: Vec<Value> = spec.group.iter().map(|g| ind.matrix(g).to_field_json(&spec.k)).collect();
    Ok(Outcome::new(
        true,
        json!({"image": img.to_json(), "generator_matrices": gens, "hypotheses": ind.hypotheses().to_json()}),
    ))
}

pub fn image_simples(v: &Value) -> CmdResult {
    let m = if let Some(g) = v.get("group") {
        adjoint_module(&group_from_json(g).at("/group")?)
    } else {
        let mv = get(v, "module")?;
        let k = field_from_json(get(mv, "field").map_err(|_| invalid::<()>("/module/field", "missing").unwrap_err())?).at("/module/field")?;
        let dim = mv.get("dim").and_then(Value::as_u64).map_or_else(|| invalid("/module/dim", "expected an integer"), Ok)? as usize;
        let gens = mv
            .get("generators")
            .and_then(Value::as_array)
            .map_or_else(|| invalid("/module/generators", "expected a list"), Ok)?
            .iter()
            .enumerate()
            .map(|(i, g)| FMat::from_json_square(&k, g, dim).at(&format!("/module/generators/{i}")))
            .collect::<Result<Vec<_>, _>>()?;
        Module::new(&k, dim, gens).at("/module")?
    };
    let simples = simple_submodules(&m).at("")?;
    Ok(Outcome::new(
        true,
        json!({"dim": m.dim, "simples": simples.iter().map(|s| s.to_json()).collect::<Vec<_>>()}),
    ))
}

pub fn image_enormous(v: &Value) -> CmdResult {
    let h = group_from_json(v).at("")?;
    let r = enormous_check(&h).at("")?;
    Ok(Outcome::new(r.enormous(), r.to_json(&h)))
}

pub fn image_tw(v: &Value) -> CmdResult {
    let input = TwInput::from_json(v).at("")?;
    let r = tw_witness(&input).at("/phi")?;
    Ok(Outcome::new(r.found(), r.to_json(&input)))
}

pub fn dims_space(v: &Value) -> CmdResult {
    let shape: FieldShape = parse(v, "")?;
    let d = space_dims(shape).at("")?;
    let mut w = serde_json::to_value(d).expect("serializable");
    w["degree"] = json!(shape.degree());
    Ok(Outcome::new(true, w))
}

pub fn dims_euler(v: &Value) -> CmdResult {
    let input: SelmerInput = parse(v, "")?;
    let tate: Option<TateInputs> = match v.get("tate") {
        None | Some(Value::Null) => None,
        Some(t) => Some(parse(t, "/tate")?),
    };
    let r = euler_characteristic(&input, tate.as_ref()).at("/tate")?;
    Ok(Outcome::new(true, serde_json::to_value(r).expect("serializable")))
}

pub fn dims_selmer(v: &Value) -> CmdResult {
    let input: SelmerInput = parse(v, "")?;
    let r = selmer_dimension(&input).run("")?;
    Ok(Outcome::new(true, serde_json::to_value(r).expect("serializable")))
}

pub fn dims_presentation(v: &Value) -> CmdResult {
    let l0 = get(v, "l0")?.as_i64().map_or_else(|| invalid("/l0", "expected an integer"), Ok)?;
    let ledger: Option<DimLedger> = match v.get("ledger") {
        None | Some(Value::Null) => None,
        Some(x) => Some(parse(x, "/ledger")?),
    };
    let r = tw_presentation(uint(v, "q")?, uint(v, "n")?, uint(v, "degree")?, l0, uint(v, "t")?, ledger.as_ref()).run("/ledger")?;
    Ok(Outcome::new(true, serde_json::to_value(r).expect("serializable")))
}
