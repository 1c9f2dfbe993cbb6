//! Exact revealment against the Fourier level weights on small complete graphs.

use erdyn::graph::{Configuration, EdgeSpace};
use erdyn::revealment::{bfs_reveal, component_indicator_table, incident_mask, revealment_exact, ConfigOracle};
use erdyn::spectral::{revealment_bound_check, transform};

#[test]
fn bound_holds_on_k4() {
    let n = 4;
    let space = EdgeSpace::new(n).unwrap();
    let excluded = incident_mask(space, 1).unwrap() as usize;
    for p in [0.25, 0.5] {
        for threshold in 2..=n {
            let f = component_indicator_table(n, 1, threshold, p).unwrap();
            let exact = revealment_exact(n, p, 1, threshold).unwrap();
            for k in 1..=space.m() as u32 {
                let check = revealment_bound_check(&f, &exact.probabilities, excluded, k).unwrap();
                assert!(check.holds, "N = {threshold}, k = {k}: {check:?}");
            }
            assert!((exact.decision_probability - f.expectation()).abs() < 1e-12);
        }
    }
}

#[test]
fn zero_revealment_kills_off_set_weight() {
    // N = 2 never reveals an edge away from vertex 1, so f depends on U_1 only.
    let n = 5;
    let space = EdgeSpace::new(n).unwrap();
    let excluded = incident_mask(space, 1).unwrap() as usize;
    let f = component_indicator_table(n, 1, 2, 0.2).unwrap();
    let fhat = transform(&f);
    for k in 1..=space.m() as u32 {
        assert!(fhat.level_energy(k, excluded) < 1e-20);
    }
}

#[test]
fn exact_probabilities_by_direct_enumeration() {
    let n = 5;
    let p: f64 = 0.2;
    let space = EdgeSpace::new(n).unwrap();
    let m = space.m() as u32;
    for threshold in 2..=n {
        let mut direct = vec![0.0; m as usize];
        for mask in 0..1u64 << m {
            let config = Configuration::from_bitmask(space, mask).unwrap();
            let w = p.powi(mask.count_ones() as i32) * (1.0 - p).powi((m - mask.count_ones()) as i32);
            for e in bfs_reveal(&mut ConfigOracle::new(&config), 1, threshold).unwrap().revealed {
                direct[e.0 as usize] += w;
            }
        }
        let exact = revealment_exact(n, p, 1, threshold).unwrap();
        for (a, b) in direct.iter().zip(&exact.probabilities) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
