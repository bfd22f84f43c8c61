use crate::planner::PlanError;

/// Legal range of one pitch-preserving tempo stage in common encoders.
pub const TEMPO_STAGE_MIN: f64 = 0.5;
pub const TEMPO_STAGE_MAX: f64 = 2.0;

/// Splits a speed factor into the fewest equal tempo stages that each stay
/// inside `[0.5, 2.0]`.
pub fn decompose_tempo(factor: f64) -> Result<Vec<f64>, PlanError> {
    if !(factor.is_finite() && factor > 0.0) {
        return Err(PlanError::InvalidSpeed { name: "tempo factor", value: factor });
    }
    if (TEMPO_STAGE_MIN..=TEMPO_STAGE_MAX).contains(&factor) {
        return Ok(vec![factor]);
    }
    let octaves = factor.log2().abs().ceil() as i32;
    let stage = factor.powf(1.0 / octaves as f64).clamp(TEMPO_STAGE_MIN, TEMPO_STAGE_MAX);
    Ok(vec![stage; octaves as usize])
}

/// Best rational approximation `p / q` of a positive real with
/// `q <= max_den`, via continued-fraction convergents and the last
/// semiconvergent.
pub fn approximate_ratio(x: f64, max_den: u64) -> (u64, u64) {
    assert!(x.is_finite() && x > 0.0 && max_den >= 1);
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut v = x;
    loop {
        let a = v.floor();
        if a > u32::MAX as f64 {
            break;
        }
        let a = a as u64;
        let q2 = a.saturating_mul(q1).saturating_add(q0);
        if q2 > max_den {
            let k = (max_den - q0) / q1;
            let (ps, qs) = (k * p1 + p0, k * q1 + q0);
            let err = |p: u64, q: u64| (p as f64 / q as f64 - x).abs();
            if err(ps, qs) < err(p1, q1) {
                (p1, q1) = (ps, qs);
            }
            break;
        }
        let p2 = a * p1 + p0;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - v.floor();
        if p1 as f64 / q1 as f64 == x || frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    (p1, q1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(stages: &[f64]) -> f64 {
        stages.iter().product()
    }

    #[test]
    fn in_range_factor_is_one_stage() {
        assert_eq!(decompose_tempo(1.5).unwrap(), vec![1.5]);
        assert_eq!(decompose_tempo(2.0).unwrap(), vec![2.0]);
        assert_eq!(decompose_tempo(0.5).unwrap(), vec![0.5]);
    }

    #[test]
    fn six_is_three_cube_roots() {
        let stages = decompose_tempo(6.0).unwrap();
        assert_eq!(stages.len(), 3);
        assert!((stages[0] - 1.817_120_592_832_139_7).abs() < 1e-12);
        assert!((product(&stages) / 6.0 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn quarter_is_two_halves() {
        assert_eq!(decompose_tempo(0.25).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn powers_of_two_use_full_stages() {
        assert_eq!(decompose_tempo(8.0).unwrap().len(), 3);
        assert_eq!(decompose_tempo(8.01).unwrap().len(), 4);
        assert_eq!(decompose_tempo(1000.0).unwrap().len(), 10);
    }

    #[test]
    fn invalid_factor() {
        assert!(decompose_tempo(0.0).is_err());
        assert!(decompose_tempo(f64::INFINITY).is_err());
    }

    #[test]
    fn ratios() {
        assert_eq!(approximate_ratio(1.0, 1_000_000), (1, 1));
        assert_eq!(approximate_ratio(2.5, 1_000_000), (5, 2));
        assert_eq!(approximate_ratio(5.91, 1_000_000), (591, 100));
        assert_eq!(approximate_ratio(1.0 / 3.0, 1_000_000), (1, 3));
        assert_eq!(approximate_ratio(std::f64::consts::PI, 100), (311, 99));
        assert_eq!(approximate_ratio(0.001, 1_000_000), (1, 1000));
    }
}
