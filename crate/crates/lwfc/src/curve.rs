//! Error-versus-c_max curves as CSV.

use std::fmt::Write as _;

use lwfc_core::clip::ErrorBreakdown;

pub const HEADER: &str = "c_max,e_clip,e_quant,e_tot";

/// `from, from + step, ...` up to `to` inclusive (with a small tolerance
/// so that rounding does not drop the last point).
pub fn grid(from: f64, to: f64, step: f64) -> Vec<f64> {
    if step.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || to < from {
        return Vec::new();
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| from + i as f64 * step).collect()
}

/// One row per point, floats with 9 significant digits.
pub fn to_csv(rows: &[(f64, ErrorBreakdown)]) -> String {
    let mut s = String::with_capacity(64 * (rows.len() + 1));
    s.push_str(HEADER);
    s.push('\n');
    for (c, e) in rows {
        let _ = writeln!(s, "{c:.8e},{:.8e},{:.8e},{:.8e}", e.e_clip, e.e_quant, e.e_tot);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_endpoint() {
        assert_eq!(grid(1.0, 2.0, 0.5), vec![1.0, 1.5, 2.0]);
        assert_eq!(grid(0.1, 0.7, 0.1).len(), 7);
        assert!(grid(2.0, 1.0, 0.5).is_empty());
        assert!(grid(0.0, 1.0, 0.0).is_empty());
    }

    #[test]
    fn csv_layout() {
        let s = to_csv(&[(2.0, ErrorBreakdown::new(0.25, 1.5))]);
        assert_eq!(
            s,
            "c_max,e_clip,e_quant,e_tot\n2.00000000e0,1.50000000e0,2.50000000e-1,1.75000000e0\n"
        );
    }
}
