use flybot_core::neural::HopfieldNet;
use flybot_core::raster::Image;
use flybot_core::sidewalk::{
    classify_segment, inspect, random_erased, vertex_net, InspectConfig, SidewalkError,
    SidewalkSpec, Verdict,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn flagged(spec: &SidewalkSpec) -> Vec<usize> {
    let img = spec.render().unwrap();
    inspect(&img, &InspectConfig::default()).unwrap().0.flagged
}

#[test]
fn clean_sidewalk_has_no_flags() {
    let spec = SidewalkSpec::default();
    let img = spec.render().unwrap();
    let (report, overlay) = inspect(&img, &InspectConfig::default()).unwrap();
    assert!(report.flagged.is_empty());
    assert_eq!(report.block_means.len(), 12);
    assert!(spec.band_rows().contains(&report.band_top));
    assert!(report
        .decisions
        .iter()
        .all(|d| d.verdict == Verdict::Intact));
    assert_eq!(overlay, img);
}

#[test]
fn single_erased_block_is_flagged_alone() {
    let spec = SidewalkSpec {
        erased: vec![4],
        ..SidewalkSpec::default()
    };
    let img = spec.render().unwrap();
    let (report, overlay) = inspect(&img, &InspectConfig::default()).unwrap();
    assert_eq!(report.flagged, vec![4]);
    // Segments 2, 3 and 4 cover block 4 and each vote for it.
    for d in &report.decisions {
        let covers = (d.start..d.start + 3).contains(&4);
        match &d.verdict {
            Verdict::PaintBlocks(b) => {
                assert!(covers);
                assert_eq!(b, &vec![4]);
            }
            v => {
                assert!(!covers);
                assert_eq!(v, &Verdict::Intact);
            }
        }
    }
    // Outline only: block corner and edge at 255, block centre untouched.
    let (x0, y0) = (4 * 16, report.band_top);
    assert_eq!(overlay.gray_at(x0, y0), 255);
    assert_eq!(overlay.gray_at(x0 + 15, y0 + 7), 255);
    assert_eq!(overlay.gray_at(x0 + 8, y0 + 8), 128);
}

#[test]
fn uniform_strip_is_not_found() {
    for noise in [0.0, 10.0] {
        let spec = SidewalkSpec {
            erased: (0..12).collect(),
            noise_sigma: noise,
            seed: 5,
            ..SidewalkSpec::default()
        };
        let img = spec.render().unwrap();
        assert!(matches!(
            inspect(&img, &InspectConfig::default()),
            Err(SidewalkError::NoStripFound { .. })
        ));
    }
}

#[test]
fn uniform_strip_below_zero_floor_is_all_unresolved() {
    let spec = SidewalkSpec {
        erased: (0..12).collect(),
        noise_sigma: 10.0,
        seed: 5,
        ..SidewalkSpec::default()
    };
    let cfg = InspectConfig {
        min_response: 0.0,
        ..InspectConfig::default()
    };
    let (report, _) = inspect(&spec.render().unwrap(), &cfg).unwrap();
    assert!(report.flagged.is_empty());
    assert!(report
        .decisions
        .iter()
        .all(|d| d.verdict == Verdict::Unresolved));
}

#[test]
fn edge_and_paired_erasures() {
    for erased in [
        vec![0],
        vec![11],
        vec![0, 1],
        vec![10, 11],
        vec![2, 3, 7],
        vec![0, 5, 6, 11],
    ] {
        let spec = SidewalkSpec {
            erased: erased.clone(),
            ..SidewalkSpec::default()
        };
        assert_eq!(flagged(&spec), erased);
    }
}

#[test]
fn rgb_input_is_converted() {
    let spec = SidewalkSpec {
        erased: vec![6],
        ..SidewalkSpec::default()
    };
    let gray = spec.render().unwrap();
    let rgb = Image::rgb_from_fn(gray.width(), gray.height(), |x, y| {
        let v = gray.gray_at(x, y);
        [v, v, v]
    })
    .unwrap();
    let (report, _) = inspect(&rgb, &InspectConfig::default()).unwrap();
    assert_eq!(report.flagged, vec![6]);
}

#[test]
fn noisy_generator_matches_ground_truth() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..20 {
        let spec = SidewalkSpec {
            erased: random_erased(&mut rng, 12, 0.25, 2),
            noise_sigma: 10.0,
            seed,
            ..SidewalkSpec::default()
        };
        assert_eq!(flagged(&spec), spec.erased_set(), "seed {seed}");
    }
}

fn all_ternary() -> Vec<[i8; 3]> {
    let vals = [-1i8, 0, 1];
    let mut out = Vec::new();
    for a in vals {
        for b in vals {
            for c in vals {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn flags(verdict: &Verdict) -> Vec<usize> {
    match verdict {
        Verdict::PaintBlocks(b) => b.clone(),
        _ => Vec::new(),
    }
}

#[test]
fn sharpening_toward_the_vertex_never_adds_flags() {
    let net = vertex_net();
    for encoded in all_ternary() {
        let before = classify_segment(0, encoded, &net);
        let Some(vertex) = before.vertex else {
            continue;
        };
        for k in 0..3 {
            if encoded[k] != 0 {
                continue;
            }
            let mut sharper = encoded;
            sharper[k] = vertex[k];
            let after = classify_segment(0, sharper, &net);
            let new_flags = flags(&after.verdict);
            let old_flags = flags(&before.verdict);
            assert!(
                new_flags.iter().all(|b| old_flags.contains(b)),
                "{encoded:?} -> {sharper:?}: {old_flags:?} vs {new_flags:?}"
            );
            assert_eq!(after.vertex, Some(vertex));
        }
    }
}

#[test]
fn classification_is_sign_symmetric() {
    let net = vertex_net();
    for encoded in all_ternary() {
        let a = classify_segment(3, encoded, &net);
        let b = classify_segment(3, encoded.map(|v| -v), &net);
        assert_eq!(a.verdict, b.verdict, "{encoded:?}");
        assert_eq!(a.vertex.map(|v| v.map(|x| -x)), b.vertex);
    }
}

#[test]
fn non_vertex_fixed_points_are_unresolved() {
    // A net storing a single pattern still has its negation as an attractor.
    let net = HopfieldNet::train(&[vec![1, -1, 1]], 3).unwrap();
    let d = classify_segment(0, [-1, 0, -1], &net);
    assert_eq!(d.verdict, Verdict::Unresolved);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inversion_keeps_flagged_positions(seed in 0u64..1000, noise in prop::bool::ANY) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = SidewalkSpec {
            erased: random_erased(&mut rng, 12, 0.3, 2),
            noise_sigma: if noise { 10.0 } else { 0.0 },
            seed,
            ..SidewalkSpec::default()
        };
        let img = spec.render().unwrap();
        let cfg = InspectConfig::default();
        let (plain, _) = inspect(&img, &cfg).unwrap();
        let (inverted, _) = inspect(&img.inverted(), &cfg).unwrap();
        prop_assert_eq!(&plain.flagged, &inverted.flagged);
        for (a, b) in plain.decisions.iter().zip(&inverted.decisions) {
            prop_assert_eq!(a.encoded.map(|v| -v), b.encoded);
        }
    }

    #[test]
    fn zero_noise_flags_exactly_the_erased_set(seed in 0u64..10_000, first_bright in prop::bool::ANY) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = SidewalkSpec {
            erased: random_erased(&mut rng, 12, 0.3, 2),
            first_bright,
            ..SidewalkSpec::default()
        };
        prop_assert_eq!(flagged(&spec), spec.erased_set());
    }
}
