use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wanglandau::kernel::discrete_penalized_kernel;
use wanglandau::{mh_step, ChainState, GaussianRandomWalk, PartitionedTarget, PenaltyState, Proposal};

fn toy() -> PartitionedTarget {
    PartitionedTarget::truncated_normal(0.0, 1.0, vec![-10.0, 0.0, 10.0]).unwrap()
}

#[test]
fn every_support_point_has_exactly_one_bin() {
    let t = PartitionedTarget::uniform(vec![-10.0, -3.0, 0.0, 4.5, 10.0]).unwrap();
    let edges = t.edges().to_vec();
    for k in 0..=10_000 {
        let x = -10.0 + 20.0 * k as f64 / 10_000.0;
        let bin = t.bin_of(x).unwrap();
        let inside: Vec<usize> = (0..t.num_bins())
            .filter(|&i| {
                let lo_ok = if i == 0 { x >= edges[0] } else { x > edges[i] };
                lo_ok && x <= edges[i + 1]
            })
            .collect();
        assert_eq!(inside, vec![bin], "x = {x}");
    }
    assert_eq!(t.bin_of(0.0).unwrap(), 1);
    assert!(t.bin_of(10.5).is_err());
}

#[test]
fn common_shift_of_penalties_leaves_the_chain_unchanged() {
    let t = toy();
    let q = GaussianRandomWalk::new(1.0).unwrap();
    let p = PenaltyState::from_log_theta(vec![0.7, -1.3]).unwrap();
    let shifted = p.shifted(42.0);
    let mut r1 = ChaCha8Rng::seed_from_u64(5);
    let mut r2 = ChaCha8Rng::seed_from_u64(5);
    let mut s1 = ChainState::new(&t, 0.3).unwrap();
    let mut s2 = s1;
    for _ in 0..10_000 {
        s1 = mh_step(&t, &q, &p, &s1, &mut r1);
        s2 = mh_step(&t, &q, &shifted, &s2, &mut r2);
        assert_eq!(s1, s2);
    }
}

#[test]
fn gaussian_walk_is_symmetric() {
    let q = GaussianRandomWalk::new(1.7).unwrap();
    for k in 0..100 {
        let x = -5.0 + 0.1 * k as f64;
        let y = 3.0 - 0.07 * k as f64;
        assert_eq!(q.log_q(x, y), q.log_q(y, x));
    }
}

fn stochastic_matrix(raw: &[f64], n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            let row = &raw[i * n..(i + 1) * n];
            let s: f64 = row.iter().sum();
            row.iter().map(|v| v / s).collect()
        })
        .collect()
}

proptest! {
    #[test]
    fn discrete_kernel_is_reversible_and_stochastic(
        pi in prop::collection::vec(0.05f64..1.0, 4),
        raw in prop::collection::vec(0.05f64..1.0, 16),
        lt in prop::collection::vec(-4.0f64..4.0, 2),
    ) {
        let q = stochastic_matrix(&raw, 4);
        let bins = [0, 1, 0, 1];
        let k = discrete_penalized_kernel(&pi, &q, &bins, &lt).unwrap();
        let w: Vec<f64> = (0..4).map(|x| pi[x] * (-lt[bins[x]]).exp()).collect();
        for x in 0..4 {
            prop_assert!((k[x].iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for y in 0..4 {
                prop_assert!(k[x][y] >= 0.0);
                prop_assert!((w[x] * k[x][y] - w[y] * k[y][x]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn chain_never_leaves_support(seed in any::<u64>(), x0 in -9.9f64..9.9) {
        let t = toy();
        let q = GaussianRandomWalk::new(3.0).unwrap();
        let p = PenaltyState::from_log_theta(vec![2.0, -2.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = ChainState::new(&t, x0).unwrap();
        for _ in 0..500 {
            s = mh_step(&t, &q, &p, &s, &mut rng);
            prop_assert!(t.contains(s.x));
            prop_assert_eq!(s.bin, t.bin_of(s.x).unwrap());
        }
    }
}
