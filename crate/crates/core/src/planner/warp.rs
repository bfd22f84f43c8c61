use super::{PlanError, WarpPlan};
use crate::time::TimeMs;

/// Maps a source instant to output time.
///
/// Interior points are rounded the same way as segment boundaries: source
/// time is summed per speed class, divided, and rounded once. A plan with a
/// single speed `s` therefore maps every `t` to exactly `round(t / s)`. The
/// result is clamped to the segment's output span.
pub fn warp_time(plan: &WarpPlan, t: TimeMs) -> Result<TimeMs, PlanError> {
    if t > plan.l_in {
        return Err(PlanError::OutOfRange { t, limit: plan.l_in });
    }
    if t == plan.l_in {
        return Ok(plan.l_out);
    }
    let i = plan.segments.partition_point(|s| s.in_end <= t);
    let seg = &plan.segments[i];
    if t == seg.in_start {
        return Ok(seg.out_start);
    }
    let a = plan.anchor(i);
    let exact = a.other + (a.same_ms + (t - seg.in_start).0) as f64 / seg.speed;
    let out = TimeMs::round_from_f64(exact) + TimeMs(a.shift);
    Ok(out.clamp(seg.out_start, seg.out_end))
}

/// Inverse of [`warp_time`] up to rounding: `|warp(unwarp(x)) - x|` stays
/// within `ceil(max(max_speed, 1 / min_speed))` ms.
pub fn unwarp_time(plan: &WarpPlan, t_out: TimeMs) -> Result<TimeMs, PlanError> {
    if t_out > plan.l_out {
        return Err(PlanError::OutOfRange { t: t_out, limit: plan.l_out });
    }
    if t_out == plan.l_out {
        return Ok(plan.l_in);
    }
    let i = plan.segments.partition_point(|s| s.out_end <= t_out);
    let seg = &plan.segments[i];
    if t_out == seg.out_start {
        return Ok(seg.in_start);
    }
    let a = plan.anchor(i);
    let played = (t_out.0 as f64 - a.shift as f64 - a.other) * seg.speed - a.same_ms as f64;
    let offset = TimeMs::round_from_f64(played.max(0.0));
    Ok((seg.in_start + offset).min(seg.in_end))
}

/// Applies [`warp_time`] to many instants, in parallel when the `parallel`
/// feature is on.
pub fn warp_many(plan: &WarpPlan, times: &[TimeMs], exec: crate::par::Execution) -> Result<Vec<TimeMs>, PlanError> {
    crate::par::map(exec, times, |&t| warp_time(plan, t)).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timeline::SegmentKind::{Language as L, NonLanguage as N};

    fn two_speed() -> WarpPlan {
        WarpPlan::from_pieces(&[(TimeMs(0), TimeMs(10_000), 2.0, N), (TimeMs(10_000), TimeMs(20_000), 1.0, L)], None)
            .unwrap()
    }

    #[test]
    fn identity() {
        let plan = WarpPlan::from_pieces(&[(TimeMs(0), TimeMs(777), 1.0, N)], None).unwrap();
        for t in 0..=777 {
            assert_eq!(warp_time(&plan, TimeMs(t)).unwrap(), TimeMs(t));
            assert_eq!(unwarp_time(&plan, TimeMs(t)).unwrap(), TimeMs(t));
        }
    }

    #[test]
    fn two_speed_points() {
        let plan = two_speed();
        assert_eq!(warp_time(&plan, TimeMs(15_000)).unwrap(), TimeMs(10_000));
        assert_eq!(warp_time(&plan, TimeMs(10_000)).unwrap(), TimeMs(5000));
        assert_eq!(warp_time(&plan, TimeMs(0)).unwrap(), TimeMs(0));
        assert_eq!(warp_time(&plan, TimeMs(20_000)).unwrap(), TimeMs(15_000));
        assert_eq!(unwarp_time(&plan, TimeMs(10_000)).unwrap(), TimeMs(15_000));
        assert_eq!(unwarp_time(&plan, TimeMs(5000)).unwrap(), TimeMs(10_000));
    }

    #[test]
    fn out_of_range() {
        let plan = two_speed();
        assert!(matches!(warp_time(&plan, TimeMs(20_001)), Err(PlanError::OutOfRange { .. })));
        assert!(matches!(unwarp_time(&plan, TimeMs(15_001)), Err(PlanError::OutOfRange { .. })));
    }

    #[test]
    fn rounding_clamps_at_segment_end() {
        // 10 ms at 3x rounds to 3 ms output; t = 9 would give round(3.0) = 3 but
        // must not pass the boundary owned by the next segment
        let plan =
            WarpPlan::from_pieces(&[(TimeMs(0), TimeMs(10), 3.0, N), (TimeMs(10), TimeMs(20), 1.0, L)], None).unwrap();
        assert_eq!(plan.segments()[0].out_end, TimeMs(3));
        let values: Vec<u64> = (0..=20).map(|t| warp_time(&plan, TimeMs(t)).unwrap().0).collect();
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(values[9], 3);
        assert_eq!(values[10], 3);
    }

    #[test]
    fn batch_matches_scalar() {
        let plan = two_speed();
        let times: Vec<TimeMs> = (0..=20_000).step_by(7).map(TimeMs).collect();
        let seq = warp_many(&plan, &times, crate::par::Execution::Sequential).unwrap();
        let par = warp_many(&plan, &times, crate::par::Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq[3], warp_time(&plan, times[3]).unwrap());
    }
}
