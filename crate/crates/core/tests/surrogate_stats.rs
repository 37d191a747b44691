//! Statistical behavior of the surrogate ensemble against the transfer
//! entropy estimator: for independent inputs, TE measured on surrogate data
//! must be distributed like TE measured on genuinely fresh independent data
//! (that equivalence is what makes surrogate pools usable as a null), while
//! a genuinely coupled pair must tower above its own surrogate null.

mod common;

use common::*;
use stenet_core::entropy::transfer_entropy;
use stenet_core::surrogate::phase_randomize;

const LEN: usize = 400;
const TRIALS: usize = 150;
const K: usize = 2;
const DELTA: usize = 2;

#[test]
fn surrogate_te_null_matches_fresh_pair_null() {
    let mut r = rng(7100);

    // arm A: fresh independent pairs
    let mut fresh: Vec<f64> = (0..TRIALS)
        .map(|_| {
            let x = normals(&mut r, LEN);
            let y = normals(&mut r, LEN);
            transfer_entropy(&x, &y, K, DELTA).unwrap()
        })
        .collect();

    // arm B: both sides phase-randomized, as the pipeline's pools are built
    let mut both: Vec<f64> = (0..TRIALS)
        .map(|_| {
            let x = normals(&mut r, LEN);
            let y = normals(&mut r, LEN);
            let sx = phase_randomize(&x, &mut r).unwrap().values;
            let sy = phase_randomize(&y, &mut r).unwrap().values;
            transfer_entropy(&sx, &sy, K, DELTA).unwrap()
        })
        .collect();

    // arm C: only the source side randomized
    let mut one: Vec<f64> = (0..TRIALS)
        .map(|_| {
            let x = normals(&mut r, LEN);
            let y = normals(&mut r, LEN);
            let sy = phase_randomize(&y, &mut r).unwrap().values;
            transfer_entropy(&x, &sy, K, DELTA).unwrap()
        })
        .collect();

    let p_both = ks_p_value(&mut fresh, &mut both);
    let p_one = ks_p_value(&mut fresh, &mut one);
    assert!(
        p_both > 0.01,
        "both-sides surrogate null drifts from the fresh-pair null (KS p = {p_both:.4})"
    );
    assert!(
        p_one > 0.01,
        "source-side surrogate null drifts from the fresh-pair null (KS p = {p_one:.4})"
    );
}

#[test]
fn coupled_pair_exceeds_its_surrogate_null() {
    let mut r = rng(7200);
    let (zx, zy) = coupled_log_prices(&mut r, 500, 0.8, DELTA, 0.6);

    let forward = transfer_entropy(&zx, &zy, K, DELTA).unwrap();
    let reverse = transfer_entropy(&zy, &zx, K, DELTA).unwrap();

    let null: Vec<f64> = (0..100)
        .map(|_| {
            let sy = phase_randomize(&zy, &mut r).unwrap().values;
            transfer_entropy(&zx, &sy, K, DELTA).unwrap()
        })
        .collect();
    let null_max = null.iter().cloned().fold(f64::MIN, f64::max);
    let null_mean = null.iter().sum::<f64>() / null.len() as f64;

    assert!(
        forward > null_max,
        "coupling not detected: forward TE {forward:.4} vs surrogate max {null_max:.4}"
    );
    assert!(
        forward > 10.0 * null_mean,
        "forward TE {forward:.4} not well separated from surrogate mean {null_mean:.4}"
    );
    assert!(
        forward > reverse,
        "directionality lost: forward {forward:.4} <= reverse {reverse:.4}"
    );
}
