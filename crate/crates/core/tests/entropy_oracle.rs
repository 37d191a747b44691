//! Cross-checks of the optimized entropy estimator against the independent
//! hash-map reference implementation in `common`, on structured signals and
//! edge-case geometries the random sweep in the acceptance suite is unlikely
//! to hit.

mod common;

use common::{naive_transfer_entropy, naive_transfer_entropy_ste, normals, rng};
use stenet_core::entropy::{
    pair_transfer_entropy, te_matrix, transfer_entropy, transfer_entropy_ste, PairGrid,
};
use stenet_core::returns::log_returns;
use stenet_core::AnalysisDomain;

const TOL: f64 = 1e-12;

fn assert_close(optimized: f64, reference: f64, context: &str) {
    assert!(
        (optimized - reference).abs() <= TOL,
        "{context}: optimized {optimized} vs reference {reference}"
    );
}

#[test]
fn agrees_on_minimum_length_inputs() {
    for k in 1..=3usize {
        for delta in 1..=3usize {
            let len = k * delta + 2;
            let mut r = rng((k * 10 + delta) as u64);
            let x = normals(&mut r, len);
            let y = normals(&mut r, len);
            let got = transfer_entropy(&x, &y, k, delta).unwrap();
            let want = naive_transfer_entropy(&x, &y, k, delta);
            assert_close(got, want, &format!("len={len} k={k} delta={delta}"));
        }
    }
}

#[test]
fn agrees_on_constant_and_tied_series() {
    let len = 40;
    let constant = vec![1.0; len];
    let mut r = rng(7);
    let noisy = normals(&mut r, len);
    // all-tied windows collapse to a single pattern; TE must be exactly zero
    let te = transfer_entropy(&constant, &noisy, 2, 1).unwrap();
    assert_eq!(te, 0.0);
    assert_close(
        te,
        naive_transfer_entropy(&constant, &noisy, 2, 1),
        "constant target",
    );
    // two-valued series produce heavy systematic ties
    let steps: Vec<f64> = (0..len).map(|t| f64::from(t % 3 == 0)).collect();
    let got = transfer_entropy(&steps, &noisy, 2, 2).unwrap();
    let want = naive_transfer_entropy(&steps, &noisy, 2, 2);
    assert_close(got, want, "tied steps");
}

#[test]
fn agrees_on_coupled_pairs_both_directions() {
    let mut r = rng(101);
    let y = normals(&mut r, 400);
    let noise = normals(&mut r, 400);
    let x: Vec<f64> = (0..400)
        .map(|t| if t >= 2 { 0.9 * y[t - 2] } else { 0.0 } + 0.4 * noise[t])
        .collect();
    for delta in 1..=3usize {
        let forward = transfer_entropy(&x, &y, 2, delta).unwrap();
        let reverse = transfer_entropy(&y, &x, 2, delta).unwrap();
        assert_close(
            forward,
            naive_transfer_entropy(&x, &y, 2, delta),
            &format!("forward delta={delta}"),
        );
        assert_close(
            reverse,
            naive_transfer_entropy(&y, &x, 2, delta),
            &format!("reverse delta={delta}"),
        );
        let (t_xy, t_yx) = pair_transfer_entropy(&x, &y, 2, delta).unwrap();
        // pair sweep must match the single-direction entry points exactly
        assert_eq!(t_yx, forward, "pair vs single, into x, delta={delta}");
        assert_eq!(t_xy, reverse, "pair vs single, into y, delta={delta}");
    }
}

#[test]
fn ste_variant_agrees_with_reference() {
    let mut r = rng(55);
    for case in 0..20 {
        let len = 30 + 17 * case;
        let x = normals(&mut r, len);
        let y = normals(&mut r, len);
        for (k, delta) in [(1, 1), (2, 1), (2, 3), (3, 2)] {
            let got = transfer_entropy_ste(&x, &y, k, delta).unwrap();
            let want = naive_transfer_entropy_ste(&x, &y, k, delta);
            assert_close(got, want, &format!("ste case={case} k={k} delta={delta}"));
        }
    }
}

#[test]
fn returns_domain_matrix_matches_manual_return_pipeline() {
    let mut r = rng(909);
    let n = 4;
    let delta = 2;
    let closes: Vec<Vec<f64>> = (0..n)
        .map(|_| normals(&mut r, 120).iter().map(|z| 100.0 * z.exp()).collect())
        .collect();
    let mut grid = PairGrid::new(n);
    for i in 0..n {
        for j in i + 1..n {
            grid.set(i, j, closes[i].clone(), closes[j].clone());
        }
    }
    let te = te_matrix(&grid, 2, delta, AnalysisDomain::Returns, 0);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                assert!(!te.is_valid(i, j));
                continue;
            }
            let ri = log_returns(&closes[i], delta).unwrap();
            let rj = log_returns(&closes[j], delta).unwrap();
            let want = naive_transfer_entropy(&rj.values, &ri.values, 2, delta);
            assert_close(
                te.get(i, j).unwrap(),
                want,
                &format!("matrix cell ({i},{j})"),
            );
        }
    }
}

#[test]
fn prices_domain_matrix_symbolizes_raw_values() {
    let mut r = rng(910);
    let a: Vec<f64> = normals(&mut r, 90).iter().map(|z| 100.0 * z.exp()).collect();
    let b: Vec<f64> = normals(&mut r, 90).iter().map(|z| 100.0 * z.exp()).collect();
    let mut grid = PairGrid::new(2);
    grid.set(0, 1, a.clone(), b.clone());
    let te = te_matrix(&grid, 2, 1, AnalysisDomain::Prices, 0);
    assert_close(
        te.get(0, 1).unwrap(),
        naive_transfer_entropy(&b, &a, 2, 1),
        "price-domain (0,1)",
    );
    assert_close(
        te.get(1, 0).unwrap(),
        naive_transfer_entropy(&a, &b, 2, 1),
        "price-domain (1,0)",
    );
}
