//! Channel-count, resolution, and rate arithmetic for choosing `(L, q)`.

use serde::Serialize;

/// Whether the stacked system has at least as many rows as columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Overdetermined,
    Underdetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TradeoffReport {
    pub l: usize,
    pub q: usize,
    pub s: Option<usize>,
    pub min_q_noncompressive: usize,
    pub min_q_compressive: Option<usize>,
    pub avg_rate_hz: f64,
    pub resolution_hz: f64,
    pub regime: Regime,
}

/// Number of real measurements `q(q-1)+1` produced by `q` channels.
pub fn measurements(q: usize) -> usize {
    q * (q.saturating_sub(1)) + 1
}

/// Smallest `q >= 2` with `q(q-1)+1 >= rows`.
pub fn min_channels(rows: usize) -> usize {
    let mut q = 2;
    while measurements(q) < rows {
        q += 1;
    }
    q
}

/// Tradeoff summary at resolution `L` and Nyquist rate `W`.
///
/// `q` defaults to the smallest channel count that allows an estimate: the
/// compressive minimum when a sparsity `s` is given, the noncompressive
/// minimum otherwise.
pub fn tradeoff(l: usize, nyquist_hz: f64, s: Option<usize>, q: Option<usize>) -> TradeoffReport {
    let min_nc = min_channels(l);
    let min_c = s.map(|s| min_channels(2 * s));
    let q = q.unwrap_or(min_c.unwrap_or(min_nc));
    let regime = if measurements(q) >= l { Regime::Overdetermined } else { Regime::Underdetermined };
    TradeoffReport {
        l,
        q,
        s,
        min_q_noncompressive: min_nc,
        min_q_compressive: min_c,
        avg_rate_hz: q as f64 * nyquist_hz / l as f64,
        resolution_hz: nyquist_hz / l as f64,
        regime,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_values() {
        assert_eq!(tradeoff(400, 1e9, None, None).min_q_noncompressive, 21);
        assert_eq!(tradeoff(128, 2e9, Some(16), None).min_q_compressive, Some(7));
        assert_eq!(tradeoff(2, 1.0, None, None).min_q_noncompressive, 2);
        let r = tradeoff(128, 2e9, Some(16), None);
        assert_eq!(r.q, 7);
        assert_eq!(r.regime, Regime::Underdetermined);
        assert_eq!(r.resolution_hz, 15.625e6);
        assert_eq!(tradeoff(128, 2e9, None, Some(13)).regime, Regime::Overdetermined);
    }

    proptest! {
        #[test]
        fn monotone_in_l_and_s(l in 1usize..2000, s in 1usize..500) {
            prop_assert!(min_channels(l) <= min_channels(l + 1));
            prop_assert!(min_channels(2 * s) <= min_channels(2 * s + 2));
            let q = min_channels(l);
            prop_assert!(measurements(q) >= l);
            prop_assert!(q == 2 || measurements(q - 1) < l);
        }
    }
}
