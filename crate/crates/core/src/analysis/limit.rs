use num_traits::Num;

use crate::error::{Result, WlError};
use crate::wl::{linear_increment, DesiredFrequencies, UpdateRule};

/// Predicted long-run visit proportions.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitPrediction(pub Vec<f64>);

impl LimitPrediction {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Long-run proportion of visits to bin 1 for two bins at fixed `gamma`,
/// given the per-coordinate increment `f(visited, phi_i, gamma)`:
///
/// `[f(1,phi2) - f(0,phi1)] / [f(1,phi1) - f(0,phi1) + f(1,phi2) - f(0,phi2)]`.
///
/// It follows from `Z_t = Z_0 + nu_t(1) D + t C` once `Z_t / t -> 0`.
pub fn eq3_limit<T, F>(f: F, phi1: &T, gamma: &T) -> T
where
    T: Num + Clone,
    F: Fn(bool, &T, &T) -> T,
{
    let phi2 = T::one() - phi1.clone();
    let num = f(true, &phi2, gamma) - f(false, phi1, gamma);
    let den = f(true, phi1, gamma) - f(false, phi1, gamma) + f(true, &phi2, gamma) - f(false, &phi2, gamma);
    num / den
}

/// Evaluates [`eq3_limit`] for one of the two update rules. Only defined
/// for `d = 2`; see [`linear_limit`] for the linear rule in any dimension.
pub fn predict_limit(rule: UpdateRule, phi: &DesiredFrequencies, gamma: f64) -> Result<LimitPrediction> {
    if phi.len() != 2 {
        return Err(WlError::Unsupported(format!(
            "the fixed-gamma limit formula is only available for two bins, got {}",
            phi.len()
        )));
    }
    rule.validate(phi, gamma)?;
    let p1 = phi.as_slice()[0];
    let l = match rule {
        UpdateRule::Linear => eq3_limit(|v, p: &f64, g: &f64| linear_increment(v, p, g), &p1, &gamma),
        UpdateRule::LogForm => eq3_limit(|v, p: &f64, g: &f64| rule.increment(v, *p, *g), &p1, &gamma),
    };
    Ok(LimitPrediction(vec![l, 1.0 - l]))
}

/// Under the linear rule the visit proportions converge to `phi` for every
/// `d >= 2`.
pub fn linear_limit(phi: &DesiredFrequencies) -> LimitPrediction {
    LimitPrediction(phi.as_slice().to_vec())
}

/// The two values `(+a, -b)` taken by the increment of `Z = log theta(1) -
/// log theta(2)`, returned as `(a, b)`.
pub fn z_increments(rule: UpdateRule, phi1: f64, gamma: f64) -> (f64, f64) {
    let phi2 = 1.0 - phi1;
    let a = rule.increment(true, phi1, gamma) - rule.increment(false, phi2, gamma);
    let b = rule.increment(true, phi2, gamma) - rule.increment(false, phi1, gamma);
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi(p1: f64) -> DesiredFrequencies {
        DesiredFrequencies::new(vec![p1, 1.0 - p1]).unwrap()
    }

    #[test]
    fn linear_limit_is_phi() {
        let l = predict_limit(UpdateRule::Linear, &phi(0.75), 1.0).unwrap();
        assert!((l.0[0] - 0.75).abs() < 1e-15);
        assert!((l.0[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn log_form_limit_matches_high_precision_value() {
        // log 7 / (log 5 + log(7/3)) to 40 digits: 0.79207140246125821594...
        let l = predict_limit(UpdateRule::LogForm, &phi(0.75), 1.0).unwrap();
        assert!((l.0[0] - 0.792_071_402_461_258_2).abs() < 1e-14, "{}", l.0[0]);
        assert!((l.0[0] - 0.79).abs() < 0.005);
    }

    #[test]
    fn log_form_is_unbiased_only_at_one_half() {
        for g in [0.1, 0.5, 0.9] {
            let l = predict_limit(UpdateRule::LogForm, &phi(0.5), g).unwrap();
            assert!((l.0[0] - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn more_than_two_bins_is_unsupported() {
        let p = DesiredFrequencies::new(vec![0.2, 0.3, 0.5]).unwrap();
        assert!(matches!(predict_limit(UpdateRule::Linear, &p, 0.1), Err(WlError::Unsupported(_))));
        assert_eq!(linear_limit(&p).0, vec![0.2, 0.3, 0.5]);
    }

    #[test]
    fn increments_for_both_rules() {
        let (a, b) = z_increments(UpdateRule::Linear, 0.75, 0.4);
        assert!((a - 2.0 * 0.4 * 0.25).abs() < 1e-15);
        assert!((b - 2.0 * 0.4 * 0.75).abs() < 1e-15);
        let (a, b) = z_increments(UpdateRule::LogForm, 0.75, 0.5);
        assert!((a - (1.125f64 / 0.875).ln()).abs() < 1e-15);
        assert!((b - (1.375f64 / 0.625).ln()).abs() < 1e-15);
    }
}
