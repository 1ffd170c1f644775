use crate::ratfn::RatFn;
use std::fmt::Debug;

/// Commutative ring of characteristic p with the q-power Frobenius.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    /// Size of the constant field.
    fn q(&self) -> u64;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// `x ↦ x^{q^i}`.
    fn twist(&self, i: u32) -> Self;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
}

/// A ring that is an algebra over K = F_q(θ).
pub trait KAlgebra: Ring {
    fn scale(&self, c: &RatFn) -> Self;
    fn from_k(&self, c: &RatFn) -> Self;
}
