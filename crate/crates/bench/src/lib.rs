//! Fixtures shared by the benchmarks.

use quadpic::QuadraticForm;

/// Every real form with `1 <= p + m <= max_dim`.
pub fn real_forms(max_dim: u32) -> Vec<QuadraticForm> {
    let mut out = Vec::new();
    for n in 1..=max_dim {
        for p in 0..=n {
            out.push(QuadraticForm::real(p, n - p).expect("dimension is positive"));
        }
    }
    out
}
