use super::ReflectionData;
use crate::scattering::{count_zeros_a1, count_zeros_a2, InitialProfile, Rectangle};
use crate::specfun::bessel_i0;
use serde::Serialize;

/// Sufficient L¹ bound for both assumptions.
pub const REMARK_L1_BOUND: f64 = 0.817;

/// Diagnostic summary of the two assumptions behind the long-time asymptotics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateReport {
    /// Zeros of `a1` in the rectangle, `None` if counting failed.
    pub zeros_a1: Option<u32>,
    /// Zeros of `a2` in the mirrored rectangle, `None` if counting failed.
    pub zeros_a2: Option<u32>,
    /// Reason a count is missing.
    pub zero_count_note: Option<String>,
    pub contour_half_width: f64,
    pub gate_i: bool,
    pub max_abs_arg_w: f64,
    pub gate_ii: bool,
    /// Spacing of the grid on which the argument condition was checked.
    pub grid_step: f64,
    pub l1_norm: f64,
    pub remark_l1: bool,
    /// `I0(2 ‖q0‖₁)`.
    pub i0_of_2q0: f64,
    pub remark_i0: bool,
}

impl GateReport {
    pub fn passed(&self) -> bool {
        self.gate_i && self.gate_ii
    }
}

/// Evaluates both assumptions and the L¹ sufficient conditions.
pub fn gate_assumptions(q0: &InitialProfile, r: &ReflectionData, contour: &Rectangle) -> GateReport {
    let mut notes = Vec::new();
    let zeros_a1 = count_zeros_a1(q0, contour).map_err(|e| notes.push(format!("a1: {e}"))).ok();
    let zeros_a2 = count_zeros_a2(q0, contour).map_err(|e| notes.push(format!("a2: {e}"))).ok();
    let max_abs_arg_w = r.max_abs_arg();
    let l1 = q0.l1_norm();
    let i0 = bessel_i0(2.0 * l1).unwrap_or(f64::INFINITY);
    GateReport {
        gate_i: zeros_a1 == Some(0) && zeros_a2 == Some(0),
        zeros_a1,
        zeros_a2,
        zero_count_note: if notes.is_empty() { None } else { Some(notes.join("; ")) },
        contour_half_width: contour.re_max,
        gate_ii: super::strictly_below_pi(max_abs_arg_w) && max_abs_arg_w < std::f64::consts::PI - 1e-8,
        max_abs_arg_w,
        grid_step: r.kgrid.step(),
        l1_norm: l1,
        remark_l1: l1 < REMARK_L1_BOUND,
        i0_of_2q0: i0,
        remark_i0: i0 < 2.0,
    }
}
