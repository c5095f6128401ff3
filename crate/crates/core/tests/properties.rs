use bjscc::bounds::{
    baseline_bound, bsc_bound, hybrid_bound, theorem1_bound, JsccInstance, SchemeDescriptor,
};
use bjscc::prob::{mutual_information, product_channel, DistortionMatrix, Kernel, Pmf};
use bjscc::{JsccInstance32, Kernel32, Pmf32};
use proptest::prelude::*;

fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, n)
}

fn normalize(v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

/// Random instance with `|W| = |Z| = 3`, `|X| = |Y| = 2`.
fn instance() -> impl Strategy<Value = JsccInstance<f64>> {
    (
        weights(3),
        weights(3),
        weights(2),
        (weights(2), weights(2)),
        prop::collection::vec(0.0f64..1.0, 9),
        0.0f64..1.0,
        1u64..9,
    )
        .prop_map(|(pw, pz, px, (r0, r1), d, thr, k)| {
            JsccInstance::new(
                Pmf::new(normalize(pw)).unwrap(),
                Pmf::new(normalize(px)).unwrap(),
                Pmf::new(normalize(pz)).unwrap(),
                Kernel::new(vec![normalize(r0), normalize(r1)]).unwrap(),
                DistortionMatrix::new(d.chunks(3).map(<[f64]>::to_vec).collect()).unwrap(),
                thr,
                k,
            )
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bounds_are_probabilities(inst in instance()) {
        for b in [theorem1_bound(&inst).unwrap(), baseline_bound(&inst).unwrap()] {
            prop_assert!((0.0..=1.0).contains(&b), "{b}");
        }
    }

    #[test]
    fn more_disjoint_decoders_never_hurt(inst in instance()) {
        let b = theorem1_bound(&inst).unwrap();
        let b2 = theorem1_bound(&inst.with_k(inst.k * 2).unwrap()).unwrap();
        prop_assert!(b2 <= b + 1e-15);
    }

    #[test]
    fn baseline_never_beats_disjoint(inst in instance()) {
        // A shared codebook cannot do better than K private ones in the bound.
        prop_assert!(theorem1_bound(&inst).unwrap() <= baseline_bound(&inst).unwrap() + 1e-15);
    }

    #[test]
    fn bsc_bound_increases_with_m(n in 1u32..30, delta in 0.0f64..0.5, m in 1.0f64..1e6, j in 1u64..8, l in 1u64..8) {
        let sd = SchemeDescriptor::hybrid(j, l).unwrap();
        let a = bsc_bound(&sd, n, delta, m).unwrap();
        let b = bsc_bound(&sd, n, delta, 2.0 * m).unwrap();
        prop_assert!(a <= b + 1e-15);
    }

    #[test]
    fn mutual_information_is_bounded(px in weights(3), rows in prop::collection::vec(weights(4), 3)) {
        let px = Pmf::new(normalize(px)).unwrap();
        let ch = Kernel::new(rows.into_iter().map(normalize).collect()).unwrap();
        let i = mutual_information(&px, &ch).unwrap();
        prop_assert!(i >= 0.0);
        prop_assert!(i <= px.entropy() + 1e-12);
        prop_assert!(i <= 2.0 + 1e-12);
    }
}

fn bsc_near_lossless(n: u32, delta: f64, m: usize, k: u64) -> JsccInstance<f64> {
    JsccInstance::near_lossless(
        Pmf::uniform(m).unwrap(),
        Pmf::uniform(1 << n).unwrap(),
        product_channel(&Kernel::bsc(delta).unwrap(), n).unwrap(),
        k,
    )
    .unwrap()
}

#[test]
fn explicit_bounds_match_bsc_closed_form() {
    for n in [1u32, 3, 6, 8] {
        for m in [2usize, 5, 1 << n] {
            for (j, l) in [(1u64, 1u64), (4, 1), (1, 4), (2, 3)] {
                let k = j * l;
                let inst = bsc_near_lossless(n, 0.11, m, k);
                let sd = SchemeDescriptor::hybrid(j, l).unwrap();
                let closed = bsc_bound(&sd, n, 0.11, m as f64).unwrap();
                let explicit = hybrid_bound(&inst, &sd).unwrap();
                assert!(
                    (closed - explicit).abs() < 1e-12,
                    "n={n} M={m} J={j} L={l}: {closed} vs {explicit}"
                );
                if l == 1 {
                    assert!((theorem1_bound(&inst).unwrap() - closed).abs() < 1e-12);
                }
                if j == 1 {
                    assert!((baseline_bound(&inst).unwrap() - closed).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn single_precision_agrees() {
    let p_w = Pmf32::new(vec![0.5, 0.3, 0.2]).unwrap();
    let p_x = Pmf32::uniform(2).unwrap();
    let ch = Kernel32::bsc(0.1).unwrap();
    let inst = JsccInstance32::near_lossless(p_w, p_x, ch, 3).unwrap();
    let wide = JsccInstance::near_lossless(
        Pmf::new(vec![0.5, 0.3, 0.2]).unwrap(),
        Pmf::uniform(2).unwrap(),
        Kernel::bsc(0.1).unwrap(),
        3,
    )
    .unwrap();
    let b32 = theorem1_bound(&inst).unwrap();
    let b64 = theorem1_bound(&wide).unwrap();
    assert!((b32 as f64 - b64).abs() < 1e-6);
}
