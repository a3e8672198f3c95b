//! Randomized property runner for the lattice poset.
//!
//! Every trial draws from its own ChaCha8 stream (`seed`, stream = trial id), so
//! results do not depend on how trials are scheduled.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::kernel::Field;
use crate::lattice::random::{lower_bound_candidate, random_lattice, upper_bound_candidate};
use crate::lattice::split::window_basis;
use crate::lattice::{index_bundle, quotient_dims, Lattice, LatticeError};
use crate::linalg::FieldMatrix;

#[derive(Clone, Debug)]
pub struct GrCheckConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Random bound candidates per trial for the glb/lub checks.
    pub candidates: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub check: String,
    pub witness: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub prng: &'static str,
    pub field: String,
    pub passed: bool,
    pub checks: BTreeMap<String, Tally>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

type Outcome = Vec<(&'static str, Result<(), String>)>;

fn check(out: &mut Outcome, name: &'static str, r: Result<bool, LatticeError>) {
    out.push((
        name,
        match r {
            Ok(true) => Ok(()),
            Ok(false) => Err("property violated".into()),
            Err(e) => Err(e.to_string()),
        },
    ));
}

fn subspace_sum(a: &FieldMatrix, b: &FieldMatrix) -> FieldMatrix {
    a.hstack(b)
}

/// Compares the window images of `l0`, `l1`, their meet and join with subspace arithmetic.
fn window_oracle(l0: &Lattice, l1: &Lattice, meet: &Lattice, join: &Lattice) -> Result<bool, LatticeError> {
    let w = [l0, l1, meet, join].iter().map(|l| l.conductor().max(-l.floor())).max().unwrap_or(0).max(1);
    let (w0, w1) = (window_basis(l0, w)?, window_basis(l1, w)?);
    let (wm, wj) = (window_basis(meet, w)?, window_basis(join, w)?);
    let sum = subspace_sum(&w0, &w1);
    let join_ok = wj.same_column_space(&sum);
    let inter_dim = w0.rank() + w1.rank() - sum.rank();
    let meet_ok = w0.column_space_contains(&wm) && w1.column_space_contains(&wm) && wm.rank() == inter_dim;
    let q0: u64 = quotient_dims(meet, l0)?.iter().sum();
    let dims_ok = q0 as usize == w0.rank() - wm.rank();
    Ok(join_ok && meet_ok && dims_ok)
}

fn run_trial(field: &Field, cfg: &GrCheckConfig, trial: usize) -> (Outcome, Value) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial as u64);
    let n = cfg.n;
    let l0 = random_lattice(&mut rng, field, n);
    let l1 = random_lattice(&mut rng, field, n);
    let l2 = random_lattice(&mut rng, field, n);
    let witness = json!({"l0": l0.to_json(), "l1": l1.to_json(), "l2": l2.to_json()});
    let mut out = Outcome::new();
    let (meet, join) = match (l0.meet(&l1), l0.join(&l1)) {
        (Ok(m), Ok(j)) => (m, j),
        (Err(e), _) | (_, Err(e)) => {
            out.push(("meet_join", Err(e.to_string())));
            return (out, witness);
        }
    };
    check(&mut out, "meet_lower_bound", (|| Ok(meet.leq(&l0)? && meet.leq(&l1)?))());
    check(&mut out, "join_upper_bound", (|| Ok(l0.leq(&join)? && l1.leq(&join)?))());
    let cands: Vec<Lattice> = (0..cfg.candidates).map(|_| random_lattice(&mut rng, field, n)).collect();
    check(
        &mut out,
        "meet_glb",
        cands.iter().try_fold(true, |ok, r| Ok(ok && lower_bound_candidate(r, &[&l0, &l1]).leq(&meet)?)),
    );
    check(
        &mut out,
        "join_lub",
        cands.iter().try_fold(true, |ok, r| Ok(ok && join.leq(&upper_bound_candidate(r, &[&l0, &l1]))?)),
    );
    check(
        &mut out,
        "quotient_dims",
        (|| {
            let d0 = quotient_dims(&meet, &l0)?;
            let d1 = quotient_dims(&l1, &join)?;
            Ok(d0.len() == n
                && d0.iter().sum::<u64>() as i64 == meet.det_val() - l0.det_val()
                && d1.iter().sum::<u64>() as i64 == l1.det_val() - join.det_val())
        })(),
    );
    check(
        &mut out,
        "index_det",
        index_bundle(&l0, &l1).map(|b| b.net == l1.det_val() - l0.det_val()),
    );
    check(
        &mut out,
        "index_cocycle",
        (|| {
            let a = index_bundle(&l0, &l1)?.net;
            let b = index_bundle(&l1, &l2)?.net;
            Ok(index_bundle(&l0, &l2)?.net == a + b)
        })(),
    );
    if n <= 2 {
        check(&mut out, "window_oracle", window_oracle(&l0, &l1, &meet, &join));
    }
    (out, witness)
}

pub fn gr_check(field: &Field, cfg: &GrCheckConfig) -> GrReport {
    let results: Vec<(usize, Outcome, Value)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let (o, w) = run_trial(field, cfg, t);
            (t, o, w)
        })
        .collect();
    let mut checks: BTreeMap<String, Tally> = BTreeMap::new();
    let mut first_failure = None;
    for (trial, outcome, witness) in results {
        for (name, r) in outcome {
            let tally = checks.entry(name.to_string()).or_default();
            match r {
                Ok(()) => tally.passed += 1,
                Err(msg) => {
                    tally.failed += 1;
                    if first_failure.is_none() {
                        let mut w = witness.clone();
                        w["message"] = Value::String(msg);
                        first_failure = Some(Failure { trial, check: name.to_string(), witness: w });
                    }
                }
            }
        }
    }
    GrReport {
        n: cfg.n,
        trials: cfg.trials,
        seed: cfg.seed,
        prng: "chacha8",
        field: field.to_string(),
        passed: first_failure.is_none(),
        checks,
        first_failure,
        warning: (cfg.trials == 0).then(|| "zero trials requested; the pass is vacuous".to_string()),
    }
}
