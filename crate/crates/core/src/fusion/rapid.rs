use super::{sigmoid, FusionError, Probability};

/// `(stage 1a: G4, SigLIP, SRM), (b: 1a, EVA02), (2: b, EVA02 fixed), (f: 2, G4 v2)`.
pub const RAPID_STAGE_WEIGHTS: ([f64; 3], [f64; 2], [f64; 2], [f64; 2]) =
    ([0.50, 0.35, 0.15], [0.80, 0.20], [0.85, 0.15], [0.89, 0.11]);

/// Branch probabilities entering the cascade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RapidScores {
    pub g4: Probability,
    pub siglip: Probability,
    pub srm: Probability,
    pub eva02: Probability,
    pub eva02_fixed: Probability,
    pub g4v2: Probability,
}

impl RapidScores {
    pub const ROLES: [&'static str; 6] = ["g4", "siglip", "srm", "eva02", "eva02_fixed", "g4v2"];

    /// From raw probabilities in [`RapidScores::ROLES`] order.
    pub fn from_array(p: [f64; 6]) -> Result<Self, FusionError> {
        Ok(Self {
            g4: Probability::new(p[0])?,
            siglip: Probability::new(p[1])?,
            srm: Probability::new(p[2])?,
            eva02: Probability::new(p[3])?,
            eva02_fixed: Probability::new(p[4])?,
            g4v2: Probability::new(p[5])?,
        })
    }
}

/// Pre-sigmoid logit and probability of every cascade stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RapidStages {
    pub logit_1a: f64,
    pub logit_b: f64,
    pub logit_2: f64,
    pub logit_f: f64,
    pub s1a: f64,
    pub b: f64,
    pub s2: f64,
    pub f: f64,
}

/// Four-stage logit cascade. Each stage output re-enters as `logit(sigmoid(z))`,
/// which is `z`; the pre-sigmoid value is carried forward directly.
pub fn rapid_cascade(s: &RapidScores) -> RapidStages {
    let (w1, wb, w2, wf) = RAPID_STAGE_WEIGHTS;
    let logit_1a = w1[0] * s.g4.logit() + w1[1] * s.siglip.logit() + w1[2] * s.srm.logit();
    let logit_b = wb[0] * logit_1a + wb[1] * s.eva02.logit();
    let logit_2 = w2[0] * logit_b + w2[1] * s.eva02_fixed.logit();
    let logit_f = wf[0] * logit_2 + wf[1] * s.g4v2.logit();
    RapidStages {
        logit_1a,
        logit_b,
        logit_2,
        logit_f,
        s1a: sigmoid(logit_1a),
        b: sigmoid(logit_b),
        s2: sigmoid(logit_2),
        f: sigmoid(logit_f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_weights_are_convex() {
        let (w1, wb, w2, wf) = RAPID_STAGE_WEIGHTS;
        for sum in [w1.iter().sum::<f64>(), wb.iter().sum(), w2.iter().sum(), wf.iter().sum()] {
            assert!((sum - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn half_is_a_fixed_point() {
        let st = rapid_cascade(&RapidScores::from_array([0.5; 6]).unwrap());
        assert_eq!([st.s1a, st.b, st.s2, st.f], [0.5; 4]);
    }
}
