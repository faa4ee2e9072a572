//! Seeded property suites, one per acceptance criterion. Items are generated
//! from per-index seeds and evaluated in parallel; the report is sorted by
//! item digest so it does not depend on scheduling.

use std::fmt::Display;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::gen::{item_seed, rng};
use crate::verdict::{digest, InvalidInput};

mod algebra;
mod dims;
mod hecke;
mod image;
mod tower;

/// (name, criterion number)
pub const SUITES: [(&str, usize); 11] = [
    ("ordinary", 1),
    ("exactness", 2),
    ("minimalization", 3),
    ("nilpotence", 4),
    ("tor", 5),
    ("gluing", 6),
    ("patching", 7),
    ("hecke", 8),
    ("enormous", 9),
    ("tw", 10),
    ("numerology", 11),
];

/// Accepts a suite name or its criterion number.
pub fn resolve(name: &str) -> Option<(&'static str, usize)> {
    SUITES.iter().copied().find(|&(n, c)| n == name || c.to_string() == name)
}

/// One checked instance.
#[derive(Clone, Debug)]
pub struct Case {
    input: Value,
    failures: Vec<String>,
}

impl Case {
    pub fn new(input: Value) -> Case {
        Case { input, failures: Vec::new() }
    }

    pub fn check(&mut self, ok: bool, what: impl Display) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    /// Unwrap a core result, recording the error as a failure.
    pub fn expect<T, E: Display>(&mut self, r: Result<T, E>, what: &str) -> Option<T> {
        match r {
            Ok(x) => Some(x),
            Err(e) => {
                self.failures.push(format!("{what}: {e}"));
                None
            }
        }
    }

    fn into_item(self) -> Item {
        Item { digest: digest(&self.input), pass: self.failures.is_empty(), failures: self.failures }
    }
}

#[derive(Clone, Debug)]
pub struct Item {
    pub digest: String,
    pub pass: bool,
    pub failures: Vec<String>,
}

fn panicked(label: &str, index: usize, payload: Box<dyn std::any::Any + Send>) -> Item {
    let msg = payload
        .downcast_ref::<String>()
        .cloned()
        .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panic".into());
    Item { digest: digest(&json!({"suite": label, "index": index})), pass: false, failures: vec![format!("panicked: {msg}")] }
}

/// `count` seeded cases, evaluated in parallel.
pub fn seeded<F>(label: &str, seed: u64, count: usize, f: F) -> Vec<Item>
where
    F: Fn(usize, &mut ChaCha8Rng) -> Case + Sync,
{
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(item_seed(label, seed, i));
            match catch_unwind(AssertUnwindSafe(|| f(i, &mut r))) {
                Ok(case) => case.into_item(),
                Err(p) => panicked(label, i, p),
            }
        })
        .collect()
}

/// Fixed cases, evaluated in parallel.
pub fn fixed<T, F>(label: &str, inputs: Vec<T>, f: F) -> Vec<Item>
where
    T: Send,
    F: Fn(T) -> Case + Sync,
{
    inputs
        .into_par_iter()
        .enumerate()
        .map(|(i, x)| match catch_unwind(AssertUnwindSafe(|| f(x))) {
            Ok(case) => case.into_item(),
            Err(p) => panicked(label, i, p),
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub criterion: usize,
    pub seed: u64,
    /// sorted by digest
    pub items: Vec<Item>,
    pub stats: Value,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        !self.items.is_empty() && self.items.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Item> {
        self.items.iter().filter(|i| !i.pass)
    }

    /// Deterministic summary; timing is left out.
    pub fn to_json(&self) -> Value {
        let listing: Vec<Value> = self.items.iter().map(|i| json!([i.digest, i.pass])).collect();
        json!({
            "suite": self.suite,
            "criterion": self.criterion,
            "items": self.items.len(),
            "passed": self.items.iter().filter(|i| i.pass).count(),
            "items_digest": digest(&json!(listing)),
            "failures": self.failures().take(20).map(|i| json!({"digest": i.digest, "failures": i.failures})).collect::<Vec<_>>(),
            "stats": self.stats,
        })
    }
}

pub fn run(name: &str, seed: u64) -> Result<SuiteReport, InvalidInput> {
    let (suite, criterion) = resolve(name).ok_or_else(|| {
        let names: Vec<&str> = SUITES.iter().map(|s| s.0).collect();
        InvalidInput::new("suite", format!("unknown suite {name:?}; expected one of {}", names.join(", ")))
    })?;
    let start = Instant::now();
    let (mut items, stats) = match suite {
        "ordinary" => algebra::ordinary(seed),
        "exactness" => algebra::exactness(seed),
        "minimalization" => algebra::minimalization(seed),
        "nilpotence" => algebra::nilpotence(seed),
        "tor" => algebra::tor(seed),
        "gluing" => tower::gluing(seed),
        "patching" => tower::patching(seed),
        "hecke" => hecke::hecke(seed),
        "enormous" => image::enormous(seed),
        "tw" => image::tw(seed),
        _ => dims::numerology(seed),
    };
    items.sort_by(|a, b| a.digest.cmp(&b.digest));
    Ok(SuiteReport { suite, criterion, seed, items, stats, seconds: start.elapsed().as_secs_f64() })
}
