use proptest::prelude::*;
use serde::Deserialize;
use wilddistort::fusion::{
    aggregate_tta, average_probs, gate1_applies, gate2_applies, intsig_flattened_weights, intsig_fuse, logit,
    prism_predict, prism_weights, rapid_cascade, sigmoid, weighted_expert_average, FusionScheme, Gate2Policy,
    HeadType, IntsigScores, PrismInputs, PrismModel, Probability, RapidScores, ScoreTable, TtaBundle,
    TwoClassLogits, PROBABILITY_EPSILON,
};

#[derive(Deserialize)]
struct OracleCase {
    inputs: Vec<String>,
    s1a: String,
    b: String,
    s2: String,
    f: String,
}

fn oracle_cases() -> Vec<OracleCase> {
    let text = include_str!("fixtures/rapid_oracle.json");
    serde_json::from_str(text).unwrap()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn rapid_matches_high_precision_oracle() {
    let cases = oracle_cases();
    assert_eq!(cases.len(), 1000);
    let mut worst = 0.0f64;
    for c in &cases {
        let p: Vec<f64> = c.inputs.iter().map(|s| num(s)).collect();
        let st = rapid_cascade(&RapidScores::from_array(p.try_into().unwrap()).unwrap());
        for (got, want) in [(st.s1a, &c.s1a), (st.b, &c.b), (st.s2, &c.s2), (st.f, &c.f)] {
            worst = worst.max((got - num(want)).abs());
        }
    }
    assert!(worst <= 1e-10, "{worst}");
    let first = &cases[0];
    assert_eq!(first.inputs, ["0.9", "0.8", "0.7", "0.6", "0.55", "0.65"]);
}

/// Expanded product form: every branch enters the last stage once with the
/// product of the weights along its path.
fn rapid_closed_form(p: [f64; 6]) -> f64 {
    let l = p.map(|v| (v / (1.0 - v)).ln());
    let w = [
        0.89 * 0.85 * 0.80 * 0.50,
        0.89 * 0.85 * 0.80 * 0.35,
        0.89 * 0.85 * 0.80 * 0.15,
        0.89 * 0.85 * 0.20,
        0.89 * 0.15,
        0.11,
    ];
    let z: f64 = l.iter().zip(w).map(|(a, b)| a * b).sum();
    1.0 / (1.0 + (-z).exp())
}

fn unit() -> impl Strategy<Value = f64> {
    0.001f64..0.999
}

proptest! {
    #[test]
    fn rapid_agrees_with_closed_form(p in prop::array::uniform6(unit())) {
        let f = rapid_cascade(&RapidScores::from_array(p).unwrap()).f;
        prop_assert!((f - rapid_closed_form(p)).abs() <= 1e-12);
    }

    #[test]
    fn rapid_is_monotone(p in prop::array::uniform6(unit()), which in 0usize..6, bump in 1e-6f64..0.2) {
        let base = rapid_cascade(&RapidScores::from_array(p).unwrap()).f;
        let mut q = p;
        q[which] = (q[which] + bump).min(0.999_999);
        let raised = rapid_cascade(&RapidScores::from_array(q).unwrap()).f;
        prop_assert!(raised >= base);
    }

    #[test]
    fn all_equal_inputs_are_fixed_points(v in unit()) {
        prop_assert!((rapid_cascade(&RapidScores::from_array([v; 6]).unwrap()).f - v).abs() <= 1e-12);
        prop_assert!((average_probs(&[v; 4]).unwrap() - v).abs() <= 1e-15);
        prop_assert!((weighted_expert_average(&[v; 3], &[0.2, 5.0, 1.0]).unwrap() - v).abs() <= 1e-15);
        for head in [HeadType::Sigmoid, HeadType::Softmax] {
            let b = TtaBundle { views: vec![v; 8], head };
            prop_assert!((aggregate_tta(&b).unwrap() - v).abs() <= 1e-12);
        }
        let models = [0.91, 0.84, 0.77].map(|a| PrismModel { prob: v, prob_flipped: v, robust_auc: a }).to_vec();
        let fused = prism_predict(&PrismInputs { models }).unwrap();
        prop_assert!((fused - v).abs() <= 1e-15);
        let lv = 8.0 * v - 4.0;
        let s = IntsigScores::new([TwoClassLogits::new(-lv, lv); 5]).unwrap();
        for gates in [false, true] {
            let out = intsig_fuse(&s, gates, Gate2Policy::default());
            prop_assert!((out.logits.logit1 - lv).abs() <= 1e-12);
            prop_assert!((out.logits.logit0 + lv).abs() <= 1e-12);
        }
    }

    #[test]
    fn logit_roundtrip(p in PROBABILITY_EPSILON..(1.0 - PROBABILITY_EPSILON)) {
        let q = Probability::new(p).unwrap();
        prop_assert!((sigmoid(logit(q)) - q.value()).abs() <= 1e-12);
    }

    #[test]
    fn intsig_without_gates_is_linear(
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        x in prop::array::uniform10(-20.0f64..20.0),
        y in prop::array::uniform10(-20.0f64..20.0),
    ) {
        let mk = |v: [f64; 10]| IntsigScores::new(std::array::from_fn(|k| TwoClassLogits::new(v[2 * k], v[2 * k + 1]))).unwrap();
        let mix: [f64; 10] = std::array::from_fn(|i| a * x[i] + b * y[i]);
        let fx = intsig_fuse(&mk(x), false, Gate2Policy::default()).logits;
        let fy = intsig_fuse(&mk(y), false, Gate2Policy::default()).logits;
        let fm = intsig_fuse(&mk(mix), false, Gate2Policy::default()).logits;
        prop_assert!((fm.logit0 - (a * fx.logit0 + b * fy.logit0)).abs() <= 1e-9);
        prop_assert!((fm.logit1 - (a * fx.logit1 + b * fy.logit1)).abs() <= 1e-9);
    }

    #[test]
    fn gates_change_output_only_when_triggered(d in prop::array::uniform5(-15.0f64..15.0)) {
        let s = IntsigScores::new(d.map(|v| TwoClassLogits::new(0.0, v))).unwrap();
        let off = intsig_fuse(&s, false, Gate2Policy::default());
        let on = intsig_fuse(&s, true, Gate2Policy::default());
        prop_assert_eq!(on.gate2, gate2_applies(&s));
        if !on.gate1 && !on.gate2 {
            prop_assert_eq!(on.logits, off.logits);
        }
        if on != off {
            prop_assert!(gate1_applies(&s, off.score()) || gate2_applies(&s) || on.gate1);
        }
        // Gate-1 never fires when the fused diff already points M4's way.
        let pre_shift = if on.gate1 { on.score() - 2.5 * d[3].signum() } else { on.score() };
        if pre_shift.signum() == d[3].signum() && pre_shift != 0.0 {
            prop_assert!(!on.gate1);
        }
    }

    #[test]
    fn prism_weights_normalise(aucs in prop::collection::vec(0.01f64..=1.0, 1..12), c in 0.05f64..1.0) {
        let w = prism_weights(&aucs).unwrap();
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        let scaled: Vec<f64> = aucs.iter().map(|a| a * c).collect();
        for (x, y) in w.iter().zip(prism_weights(&scaled).unwrap()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }
}

fn diffs(d: [f64; 5]) -> IntsigScores {
    IntsigScores::new(d.map(|v| TwoClassLogits::new(0.0, v))).unwrap()
}

#[test]
fn gate_cases() {
    let p = Gate2Policy::default();
    // Neither.
    let s = diffs([1.0, 2.0, -0.5, 3.0, 1.0]);
    let out = intsig_fuse(&s, true, p);
    assert!(!out.gate1 && !out.gate2);
    assert_eq!(out, intsig_fuse(&s, false, p));

    // Gate-1 only: fused -0.4 becomes 2.1.
    let d1 = (-0.4 - 0.0735 - 0.0490 - 0.21 * 9.0 - 0.3 * 3.5) / 0.3675;
    let out = intsig_fuse(&diffs([d1, 1.0, 1.0, 9.0, 3.5]), true, p);
    assert!(out.gate1 && !out.gate2);
    assert!((out.score() - 2.1).abs() < 1e-12);

    // Gate-2 only: M4 dropped, inner committee takes the middle bracket.
    let s = diffs([2.0, 2.0, 2.0, -1.0, 2.0]);
    let off = intsig_fuse(&s, false, p);
    assert!((off.score() - (0.49 * 2.0 - 0.21 + 0.6)).abs() < 1e-12);
    let out = intsig_fuse(&s, true, p);
    assert!(out.gate2 && !out.gate1);
    assert!((out.score() - 2.0).abs() < 1e-12);
    let global = intsig_fuse(&s, true, Gate2Policy::Global);
    assert!((global.score() - 2.0).abs() < 1e-12);

    // Both: Gate-2 drops M4, the re-fused diff still opposes M4/M5, Gate-1 shifts.
    let s = diffs([-5.0, -5.0, -5.0, 9.0, 3.5]);
    let out = intsig_fuse(&s, true, p);
    assert!(out.gate1 && out.gate2);
    assert!((out.score() - (0.7 * -5.0 + 0.3 * 3.5 + 2.5)).abs() < 1e-12);
}

#[test]
fn flattened_weights() {
    let w = intsig_flattened_weights(None);
    for (a, b) in w.iter().zip([0.3675, 0.0735, 0.0490, 0.2100, 0.3000]) {
        assert!((a - b).abs() <= 1e-6);
    }
    assert!((0.7f64 * (0.7 * 1.0 + 0.3) + 0.3 - 1.0).abs() < 1e-15);
}

#[test]
fn cli_style_table_fusion() {
    let csv = "image_id,M1_logit0,M1_logit1,M2_logit0,M2_logit1,M3_logit0,M3_logit1,M4_logit0,M4_logit1,M5_logit0,M5_logit1\n\
               a,0,1,0,2,0,-0.5,0,3,0,1\n\
               b,0,-5,0,-5,0,-5,0,9,0,3.5\n";
    let table = ScoreTable::read(csv.as_bytes()).unwrap();
    let on = FusionScheme::from_json(r#"{"scheme":"intsig","gates":true}"#).unwrap().fuse(&table).unwrap();
    let off = FusionScheme::from_json(r#"{"scheme":"intsig","gates":false}"#).unwrap().fuse(&table).unwrap();
    assert_eq!(on[0], off[0]);
    assert_ne!(on[1], off[1]);
}
