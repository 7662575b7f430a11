use flybot_core::neural::{Activation, HopfieldNet, Mlp, NeuralError};
use proptest::prelude::*;

fn xor() -> Vec<(Vec<f64>, Vec<f64>)> {
    vec![
        (vec![0.0, 0.0], vec![0.0]),
        (vec![0.0, 1.0], vec![1.0]),
        (vec![1.0, 0.0], vec![1.0]),
        (vec![1.0, 1.0], vec![0.0]),
    ]
}

// Seed 2 crosses MSE 0.05 after ~1.8k steps under the ChaCha8 uniform
// initialization; seed 1 needs ~6.2k and is not used here.
#[test]
fn xor_training_run_seed_2() {
    let mut net = Mlp::init(&[2, 4, 1], Activation::Sigmoid, 2).unwrap();
    let data = xor();
    let first = net.train_step(&data, 0.5).unwrap();
    for _ in 1..5000 {
        net.train_step(&data, 0.5).unwrap();
    }
    let last = net.loss(&data).unwrap();
    assert!(last < 0.05, "final mse {last} (initial {first})");
    for (x, t) in &data {
        let y = net.predict(x).unwrap()[0];
        assert!((y - t[0]).abs() < 0.5, "xor({x:?}) = {y}");
    }
}

#[test]
fn gradient_check_sigmoid() {
    for seed in 0..5 {
        let net = Mlp::init(&[2, 3, 1], Activation::Sigmoid, seed).unwrap();
        let err = net.gradient_check(&[0.3, -0.7], &[0.9], 1e-5).unwrap();
        assert!(err < 1e-6, "seed {seed}: {err}");
    }
}

/// Inputs whose pre-activations all sit at least 1e-3 from zero.
fn kink_free_input(net: &Mlp) -> Vec<f64> {
    let candidates = [
        vec![0.3, -0.7],
        vec![0.9, 0.4],
        vec![-0.6, 0.25],
        vec![1.3, -1.1],
        vec![-0.2, -0.9],
    ];
    candidates
        .into_iter()
        .find(|x| {
            let pass = net.forward(x).unwrap();
            pass.pre.iter().flatten().all(|z| z.abs() >= 1e-3)
        })
        .expect("some candidate stays away from the kink")
}

#[test]
fn gradient_check_rectifiers() {
    for act in [Activation::Relu, Activation::leaky()] {
        for seed in 0..5 {
            let net = Mlp::init(&[2, 3, 1], act, seed).unwrap();
            let x = kink_free_input(&net);
            let err = net.gradient_check(&x, &[0.4], 1e-5).unwrap();
            assert!(err < 1e-6, "{} seed {seed}: {err}", act.name());
        }
    }
}

#[test]
fn gradient_check_linear_neuron_is_exact() {
    // A 1-1-1 LeakyReLU chain evaluated on the positive side is linear, so
    // the loss is quadratic in each weight and central differences are exact
    // up to rounding.
    let net = Mlp::from_parts(
        &[1, 1, 1],
        vec![vec![0.8], vec![1.5]],
        vec![vec![0.1], vec![0.2]],
        vec![Activation::leaky(); 2],
    )
    .unwrap();
    let err = net.gradient_check(&[0.5], &[3.0], 1e-4).unwrap();
    assert!(err < 1e-9, "{err}");
}

fn biased_net(act: Activation) -> Mlp {
    Mlp::from_parts(
        &[2, 3, 1],
        vec![
            vec![0.01, -0.02, 0.015, 0.01, -0.01, 0.02],
            vec![0.3, -0.2, 0.1],
        ],
        vec![vec![-10.0, -10.0, -10.0], vec![0.1]],
        vec![act; 2],
    )
    .unwrap()
}

fn unit_square_grid() -> Vec<Vec<f64>> {
    let mut pts = Vec::new();
    for i in 0..=4 {
        for j in 0..=4 {
            pts.push(vec![i as f64 / 4.0, j as f64 / 4.0]);
        }
    }
    pts
}

#[test]
fn relu_units_with_large_negative_bias_are_dead() {
    let report = biased_net(Activation::Relu)
        .diagnose(&unit_square_grid())
        .unwrap();
    assert_eq!(report.dead[0], vec![true, true, true]);
    assert!(report.dead_count() >= 3);
    // Dead units pass no gradient to their incoming weights.
    assert_eq!(report.mean_abs_grad[0], 0.0);
}

#[test]
fn leaky_units_are_never_dead() {
    let report = biased_net(Activation::leaky())
        .diagnose(&unit_square_grid())
        .unwrap();
    assert_eq!(report.dead_count(), 0);
    assert!(report.mean_abs_grad[0] > 0.0);
}

#[test]
fn deep_sigmoid_gradients_vanish_toward_the_input() {
    let sizes = [4, 8, 8, 8, 8, 8, 8, 8, 8, 8, 1];
    let net = Mlp::init(&sizes, Activation::Sigmoid, 1).unwrap();
    let inputs: Vec<Vec<f64>> = (0..16)
        .map(|i| {
            (0..4)
                .map(|j| ((i * 7 + j * 3) % 11) as f64 / 10.0)
                .collect()
        })
        .collect();
    let report = net.diagnose(&inputs).unwrap();
    assert_eq!(report.mean_abs_grad.len(), 10);
    assert!(
        report.mean_abs_grad[0] < report.mean_abs_grad[9],
        "{:?}",
        report.mean_abs_grad
    );
    assert_eq!(report.dead_count(), 0);
}

#[test]
fn diagnose_needs_data() {
    let net = Mlp::init(&[2, 2, 1], Activation::Relu, 0).unwrap();
    assert_eq!(net.diagnose(&[]), Err(NeuralError::EmptyDataset));
}

// --- Hopfield -------------------------------------------------------------

fn two_vertex() -> HopfieldNet {
    HopfieldNet::train(&[vec![1, -1, 1], vec![-1, 1, -1]], 3).unwrap()
}

fn all_ternary(n: usize) -> Vec<Vec<i8>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                [-1i8, 0, 1].into_iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Independent brute force: floating-point weights, explicit sweeps.
fn oracle_recall(input: &[i8], max_sweeps: usize) -> Option<Vec<i8>> {
    let w = [
        [0.0, -2.0 / 3.0, 2.0 / 3.0],
        [-2.0 / 3.0, 0.0, -2.0 / 3.0],
        [2.0 / 3.0, -2.0 / 3.0, 0.0],
    ];
    let mut s: Vec<f64> = input.iter().map(|&v| v as f64).collect();
    for _ in 0..max_sweeps {
        let next: Vec<f64> = (0..3)
            .map(|i| {
                let h: f64 = (0..3).map(|j| w[i][j] * s[j]).sum();
                if h.abs() < 1e-12 {
                    s[i]
                } else {
                    h.signum()
                }
            })
            .collect();
        if next == s {
            return if s.contains(&0.0) {
                None
            } else {
                Some(s.iter().map(|&v| v as i8).collect())
            };
        }
        s = next;
    }
    None
}

#[test]
fn exhaustive_ternary_recall_matches_oracle() {
    let net = two_vertex();
    let vertices = [vec![1i8, -1, 1], vec![-1i8, 1, -1]];
    let mut converged = 0;
    for input in all_ternary(3) {
        let got = net.recall(&input, 3);
        let expected = oracle_recall(&input, 3);
        match (&got, &expected) {
            (Ok(r), Some(s)) => {
                assert_eq!(&r.state, s, "input {input:?}");
                assert!(vertices.contains(&r.state));
                assert!(r.iterations <= 3);
                converged += 1;
            }
            (Err(NeuralError::NonConvergent { .. }), None) => {}
            _ => panic!("input {input:?}: got {got:?}, oracle {expected:?}"),
        }
    }
    assert!(converged > 0);
}

#[test]
fn recall_is_sign_symmetric() {
    let net = two_vertex();
    for input in all_ternary(3) {
        let neg: Vec<i8> = input.iter().map(|v| -v).collect();
        match (net.recall(&input, 3), net.recall(&neg, 3)) {
            (Ok(a), Ok(b)) => {
                let flipped: Vec<i8> = a.state.iter().map(|v| -v).collect();
                assert_eq!(flipped, b.state);
                assert_eq!(a.iterations, b.iterations);
            }
            (Err(_), Err(_)) => {}
            other => panic!("asymmetric outcome for {input:?}: {other:?}"),
        }
    }
}

fn all_bipolar(n: usize) -> Vec<Vec<i8>> {
    all_ternary(n)
        .into_iter()
        .filter(|p| !p.contains(&0))
        .collect()
}

#[test]
fn stored_vertices_are_unique_energy_minima() {
    let net = two_vertex();
    let energies: Vec<(Vec<i8>, f64)> = all_bipolar(3)
        .into_iter()
        .map(|s| {
            let e = net.energy(&s).unwrap();
            (s, e)
        })
        .collect();
    let min = energies
        .iter()
        .map(|(_, e)| *e)
        .fold(f64::INFINITY, f64::min);
    let argmins: Vec<&Vec<i8>> = energies
        .iter()
        .filter(|(_, e)| *e == min)
        .map(|(s, _)| s)
        .collect();
    assert_eq!(argmins.len(), 2);
    assert!(argmins.contains(&&vec![1, -1, 1]));
    assert!(argmins.contains(&&vec![-1, 1, -1]));
    assert_eq!(
        net.energy(&[1, -1, 1]).unwrap(),
        net.energy(&[-1, 1, -1]).unwrap()
    );
}

#[test]
fn fixed_points_are_local_energy_minima() {
    let net = two_vertex();
    for s in all_bipolar(3) {
        if !net.is_fixed_point(&s).unwrap() {
            continue;
        }
        let e = net.energy(&s).unwrap();
        for k in 0..3 {
            let mut t = s.clone();
            t[k] = -t[k];
            assert!(e <= net.energy(&t).unwrap());
        }
    }
}

fn bipolar_patterns(count: usize, n: usize) -> impl Strategy<Value = Vec<Vec<i8>>> {
    prop::collection::vec(
        prop::collection::vec(prop::bool::ANY.prop_map(|b| if b { 1i8 } else { -1 }), n),
        count,
    )
}

proptest! {
    #[test]
    fn hebbian_weights_are_symmetric_with_zero_diagonal(
        patterns in (1usize..4, 2usize..10).prop_flat_map(|(c, n)| bipolar_patterns(c, n))
    ) {
        let n = patterns[0].len();
        let net = HopfieldNet::train(&patterns, n).unwrap();
        for i in 0..n {
            prop_assert_eq!(net.weight(i, i), 0.0);
            for j in 0..n {
                prop_assert_eq!(net.weight(i, j), net.weight(j, i));
            }
        }
    }

    // Crosstalk from one other pattern is at most n-1 against a self term of
    // n-1, so with the zero-field hold rule two random patterns are always
    // stable. Three random patterns at n = 12 are not (the crosstalk can
    // reach 2(n-1)); see `orthogonal_triples_are_fixed` for that case.
    #[test]
    fn sparse_storage_keeps_patterns_fixed(
        patterns in (1usize..=2).prop_flat_map(|c| bipolar_patterns(c, 4 * c))
    ) {
        let n = patterns[0].len();
        let net = HopfieldNet::train(&patterns, n).unwrap();
        for p in &patterns {
            prop_assert!(net.is_fixed_point(p).unwrap(), "pattern {:?} of {:?}", p, patterns);
        }
    }

    #[test]
    fn orthogonal_triples_are_fixed(
        mask in prop::collection::vec(prop::bool::ANY, 16),
        rows in prop::sample::subsequence((1usize..16).collect::<Vec<_>>(), 3),
    ) {
        // Walsh rows under a common sign mask stay mutually orthogonal.
        let patterns: Vec<Vec<i8>> = rows
            .iter()
            .map(|&r| {
                (0..16usize)
                    .map(|j| {
                        let walsh = if (r & j).count_ones() % 2 == 0 { 1 } else { -1 };
                        if mask[j] { walsh } else { -walsh }
                    })
                    .collect()
            })
            .collect();
        let net = HopfieldNet::train(&patterns, 16).unwrap();
        for p in &patterns {
            prop_assert!(net.is_fixed_point(p).unwrap());
        }
    }
}
