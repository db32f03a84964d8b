//! Distinct-edge estimators: the register-driven martingale counter used by
//! the bucket sampler, and the bottom-k (KMV) formula used by FABLE.

use crate::hashing::Priority;

/// Running state of the martingale distinct counter.
///
/// The registers themselves are not stored here: in the bucket sampler each
/// bucket occupant's `rho` *is* that bucket's register, so the sampler reports
/// register changes through [`FmState::observe`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FmState {
    /// Probability that the next unseen item raises some register:
    /// `(1/M) Σ 2^-ρ_i`, with `ρ_i = 0` for empty registers.
    q: f64,
    m_hat: f64,
    num_buckets: usize,
}

impl FmState {
    pub fn new(num_buckets: usize) -> Self {
        assert!(num_buckets > 0, "need at least one register");
        Self {
            q: 1.0,
            m_hat: 0.0,
            num_buckets,
        }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn m_hat(&self) -> f64 {
        self.m_hat
    }

    pub fn num_buckets(&self) -> usize {
        self.num_buckets
    }

    /// A register moved from `rho_max_old` (0 when empty) to `rho_new`.
    ///
    /// When the register actually rises, the estimate grows by `1/q` using
    /// the probability *before* the change, then `q` is adjusted. Updating
    /// `q` first would bias the estimate upwards.
    #[inline]
    pub fn observe(&mut self, rho_new: u32, rho_max_old: u32) {
        if rho_new > rho_max_old {
            self.m_hat += 1.0 / self.q;
            self.q += (inv_pow2(rho_new) - inv_pow2(rho_max_old)) / self.num_buckets as f64;
        }
    }

    /// `q` recomputed from scratch for a register array.
    pub fn q_from_registers(registers: &[u32]) -> f64 {
        registers.iter().map(|&r| inv_pow2(r)).sum::<f64>() / registers.len() as f64
    }
}

/// Exact `2^-n` for `n ≤ 1074`.
#[inline]
pub fn inv_pow2(n: u32) -> f64 {
    if n < 1023 {
        f64::from_bits((1023 - n as u64) << 52)
    } else {
        2f64.powi(-(n as i32))
    }
}

/// KMV distinct-count estimate `(M - 1) / h_max`, where `h_max` is the `M`-th
/// smallest priority seen. Only meaningful once `M` priorities are held.
#[inline]
pub fn kmv_estimate(h_max: Priority, m: usize) -> f64 {
    (m as f64 - 1.0) / h_max.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observe_trace() {
        let mut s = FmState::new(4);
        s.observe(2, 0);
        assert_eq!(s.m_hat(), 1.0);
        assert_eq!(s.q(), 0.8125);
    }

    #[test]
    fn equal_register_is_noop() {
        let mut s = FmState::new(4);
        s.observe(2, 0);
        let before = s;
        s.observe(2, 2);
        s.observe(1, 2);
        assert_eq!(s, before);
    }

    #[test]
    fn update_uses_old_q() {
        let mut s = FmState::new(2);
        s.observe(1, 0);
        // q = 1 + (0.5 - 1)/2 = 0.75; second increment is 1/0.75.
        s.observe(3, 0);
        assert!((s.m_hat() - (1.0 + 1.0 / 0.75)).abs() < 1e-15);
        assert!((s.q() - FmState::q_from_registers(&[1, 3])).abs() < 1e-15);
    }

    #[test]
    fn inv_pow2_exact() {
        assert_eq!(inv_pow2(0), 1.0);
        assert_eq!(inv_pow2(1), 0.5);
        assert_eq!(inv_pow2(54), 2f64.powi(-54));
        assert_eq!(inv_pow2(1030), 2f64.powi(-1030));
    }

    #[test]
    fn kmv_formula() {
        assert_eq!(kmv_estimate(Priority::new(0.5).unwrap(), 101), 200.0);
        let near_one = Priority::new(1.0 - f64::EPSILON).unwrap();
        assert!(kmv_estimate(near_one, 5) > 4.0);
    }
}
