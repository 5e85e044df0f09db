//! Finite-sample bias and variance predictions for the lag-0 correlation
//! estimates.

/// Correlation values at integer lags `-neg..=pos`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagSequence {
    values: Vec<f64>,
    zero: usize,
}

impl LagSequence {
    /// `values[zero]` is lag 0; index `i` holds lag `i - zero`.
    pub fn new(values: Vec<f64>, zero: usize) -> Self {
        assert!(zero < values.len(), "zero-lag index out of range");
        LagSequence { values, zero }
    }

    /// Even sequence from its values at lags `0, 1, 2, ...`.
    pub fn symmetric(one_sided: &[f64]) -> Self {
        let mut values: Vec<f64> = one_sided.iter().skip(1).rev().copied().collect();
        values.extend_from_slice(one_sided);
        LagSequence { values, zero: one_sided.len() - 1 }
    }

    /// Value at `lag`, zero outside the stored range.
    pub fn at(&self, lag: i64) -> f64 {
        let idx = self.zero as i64 + lag;
        if idx < 0 {
            0.0
        } else {
            self.values.get(idx as usize).copied().unwrap_or(0.0)
        }
    }

    fn lags(&self) -> std::ops::RangeInclusive<i64> {
        -(self.zero as i64)..=(self.values.len() - 1 - self.zero) as i64
    }
}

fn triangle(lag: i64, n: usize) -> f64 {
    (1.0 - lag.unsigned_abs() as f64 / n as f64).max(0.0)
}

/// `(2/N) Σ_{|m|<N} (1 - |m|/N) r(m)²`, the large-sample variance of a
/// lag-0 autocorrelation estimate for Gaussian data. Lags outside `r` count as zero.
pub fn predict_variance(r: &LagSequence, n: usize) -> f64 {
    let sum: f64 = r.lags().filter(|m| m.unsigned_abs() < n as u64).map(|m| triangle(m, n) * r.at(m).powi(2)).sum();
    2.0 * sum / n as f64
}

/// Variance of a lag-0 cross-correlation estimate for jointly Gaussian
/// channels: `(1/N) Σ (1 - |m|/N) [r_aa(m) r_bb(m) + r_ab(m) r_ab(-m)]`.
/// Reduces to [`predict_variance`] when all three sequences are equal and even.
pub fn predict_cross_variance(r_aa: &LagSequence, r_bb: &LagSequence, r_ab: &LagSequence, n: usize) -> f64 {
    let span = r_aa.lags().chain(r_bb.lags()).chain(r_ab.lags()).map(|m| m.abs()).max().unwrap_or(0);
    let span = span.min(n as i64 - 1);
    let sum: f64 = (-span..=span)
        .map(|m| triangle(m, n) * (r_aa.at(m) * r_bb.at(m) + r_ab.at(m) * r_ab.at(-m)))
        .sum();
    sum / n as f64
}

/// Expected value of the lag-0 estimate for filters `h_a`, `h_b` (sharing an
/// index origin) applied to zero-padded length-`N` channel records, summed over
/// all output samples:
/// `Σ_m Σ_l h_a(m) h_b(l) r_{y_a y_b}(l - m) max(0, 1 - |m - l|/N)`.
pub fn predict_bias(r_y: impl Fn(i64) -> f64, h_a: &[f64], h_b: &[f64], n: usize) -> f64 {
    let mut total = 0.0;
    for (m, &ha) in h_a.iter().enumerate() {
        for (l, &hb) in h_b.iter().enumerate() {
            let lag = l as i64 - m as i64;
            let w = triangle(lag, n);
            if w > 0.0 {
                total += ha * hb * r_y(lag) * w;
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn white_variance() {
        let r = LagSequence::symmetric(&[2.0]);
        assert!((predict_variance(&r, 500) - 2.0 * 4.0 / 500.0).abs() < 1e-15);
        let r = LagSequence::symmetric(&[1.0, 0.5, 0.25]);
        let ratio = predict_variance(&r, 1000) / predict_variance(&r, 10_000);
        assert!((ratio - 10.0).abs() < 0.01);
    }

    #[test]
    fn cross_variance_reduces_to_auto() {
        let r = LagSequence::symmetric(&[1.0, 0.6, -0.2, 0.05]);
        let a = predict_variance(&r, 200);
        let b = predict_cross_variance(&r, &r, &r, 200);
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn lag_lookup() {
        let r = LagSequence::new(vec![1.0, 2.0, 3.0, 4.0], 1);
        assert_eq!(r.at(-1), 1.0);
        assert_eq!(r.at(2), 4.0);
        assert_eq!(r.at(3), 0.0);
        assert_eq!(r.at(-2), 0.0);
    }

    #[test]
    fn delta_filters_on_white_input() {
        let bias = predict_bias(|k| if k == 0 { 1.5 } else { 0.0 }, &[1.0], &[1.0], 32);
        assert_eq!(bias, 1.5);
    }

    #[test]
    fn large_n_limit_for_a_tone() {
        // r_y(k) = cos(ω k)/2 for a unit tone; filters delay by 0.3 and 0.1 samples
        let w0 = 0.4f64;
        let ha = crate::sampler::delay_filter(0.3, 32);
        let hb = crate::sampler::delay_filter(0.1, 32);
        let r = |k: i64| 0.5 * (w0 * k as f64).cos();
        let limit = predict_bias(r, &ha, &hb, usize::MAX / 4);
        // z_a - z_b phase difference is ω (0.3 - 0.1), so r_z(0) = cos(0.2 ω)/2
        assert!((limit - 0.5 * (w0 * 0.2).cos()).abs() < 1e-3);
        let finite = predict_bias(r, &ha, &hb, 40);
        assert!(finite < limit);
    }
}
