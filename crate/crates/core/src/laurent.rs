//! Truncated Laurent series in u = 1/θ, the completion K_∞ = F_q((u)).

use crate::field::{Elem, Fq};
use crate::ratfn::RatFn;
use std::fmt;

/// `Σ_{k=v}^{prec−1} c_k u^k + O(u^prec)`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentApprox {
    f: Fq,
    v: i64,
    c: Vec<Elem>,
    prec: i64,
}

impl fmt::Debug for LaurentApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl LaurentApprox {
    fn normalized(f: &Fq, mut v: i64, mut c: Vec<Elem>, prec: i64) -> LaurentApprox {
        let lead = c.iter().position(|&x| x != 0);
        match lead {
            None => LaurentApprox { f: f.clone(), v: prec, c: Vec::new(), prec },
            Some(k) => {
                c.drain(..k);
                v += k as i64;
                let keep = (prec - v).max(0) as usize;
                c.truncate(keep);
                while c.last() == Some(&0) {
                    c.pop();
                }
                LaurentApprox { f: f.clone(), v, c, prec }
            }
        }
    }

    /// Zero known to precision `prec`.
    pub fn zero(f: &Fq, prec: i64) -> LaurentApprox {
        LaurentApprox { f: f.clone(), v: prec, c: Vec::new(), prec }
    }

    pub fn from_ratfn(x: &RatFn, prec: i64) -> LaurentApprox {
        let f = x.field();
        let Some(v) = x.v_inf() else {
            return LaurentApprox::zero(f, prec);
        };
        if v >= prec {
            return LaurentApprox::zero(f, prec);
        }
        let k = (prec - v) as usize;
        let (n, d) = x.reversed_series(k);
        // d has constant term 1 (monic denominator); divide power series.
        let mut out = vec![0; k];
        for i in 0..k {
            let mut acc = n[i];
            for j in 1..=i {
                if d[j] != 0 && out[i - j] != 0 {
                    acc = f.sub(acc, f.mul(d[j], out[i - j]));
                }
            }
            out[i] = acc;
        }
        LaurentApprox::normalized(f, v, out, prec)
    }

    pub fn field(&self) -> &Fq {
        &self.f
    }

    /// Valuation if a nonzero coefficient is known.
    pub fn valuation(&self) -> Option<i64> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.v)
        }
    }

    /// Lower bound on the valuation: `v` when nonzero, `prec` otherwise.
    pub fn val_bound(&self) -> i64 {
        self.v
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, k: i64) -> Elem {
        if k < self.v || k >= self.v + self.c.len() as i64 {
            0
        } else {
            self.c[(k - self.v) as usize]
        }
    }

    pub fn lead(&self) -> Elem {
        self.c.first().copied().unwrap_or(0)
    }

    pub fn with_precision(&self, prec: i64) -> LaurentApprox {
        let prec = prec.min(self.prec);
        LaurentApprox::normalized(&self.f, self.v, self.c.clone(), prec)
    }

    pub fn add(&self, o: &LaurentApprox) -> LaurentApprox {
        let prec = self.prec.min(o.prec);
        let v = self.v.min(o.v).min(prec);
        let n = (prec - v).max(0) as usize;
        let c = (0..n).map(|i| self.f.add(self.coeff(v + i as i64), o.coeff(v + i as i64))).collect();
        LaurentApprox::normalized(&self.f, v, c, prec)
    }

    pub fn neg(&self) -> LaurentApprox {
        LaurentApprox { f: self.f.clone(), v: self.v, c: self.c.iter().map(|&x| self.f.neg(x)).collect(), prec: self.prec }
    }

    pub fn sub(&self, o: &LaurentApprox) -> LaurentApprox {
        self.add(&o.neg())
    }

    /// Precision `min(v_a + N_b, v_b + N_a)`.
    pub fn mul(&self, o: &LaurentApprox) -> LaurentApprox {
        let prec = (self.v + o.prec).min(o.v + self.prec);
        if self.c.is_empty() || o.c.is_empty() {
            return LaurentApprox::zero(&self.f, prec);
        }
        let v = self.v + o.v;
        let n = (prec - v).max(0) as usize;
        let mut c = vec![0; n];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 || i >= n {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                c[i + j] = self.f.add(c[i + j], self.f.mul(a, b));
            }
        }
        LaurentApprox::normalized(&self.f, v, c, prec)
    }

    /// `x ↦ x^{q^i}`; coefficients lie in F_q, so only exponents scale.
    pub fn frobenius(&self, i: u32) -> LaurentApprox {
        let s = (self.f.q() as i64).pow(i);
        let prec = self.prec * s;
        let v = self.v * s;
        let n = (prec - v).max(0) as usize;
        let mut c = vec![0; n];
        for (k, &a) in self.c.iter().enumerate() {
            let idx = k * s as usize;
            if idx < n {
                c[idx] = a;
            }
        }
        LaurentApprox::normalized(&self.f, v, c, prec)
    }

    /// Coefficients as `(exponent, text)` pairs for nonzero terms.
    pub fn digits(&self) -> Vec<(i64, String)> {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(k, &a)| (self.v + k as i64, self.f.elem_text(a)))
            .collect()
    }

    /// `c*u^k` terms ascending, then `O(u^N)`.
    pub fn to_text(&self) -> String {
        let mut parts: Vec<String> = self
            .digits()
            .into_iter()
            .map(|(k, c)| {
                let mono = match k {
                    0 => String::new(),
                    1 => "u".into(),
                    _ => format!("u^{k}"),
                };
                match (mono.is_empty(), c == "1") {
                    (true, _) => c,
                    (false, true) => mono,
                    (false, false) => format!("{c}*{mono}"),
                }
            })
            .collect();
        parts.push(format!("O(u^{})", self.prec));
        parts.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_expansion() {
        let f2 = Fq::new(2, 1).unwrap();
        let x = RatFn::parse(&f2, "1/(T+1)", "T").unwrap();
        let l = LaurentApprox::from_ratfn(&x, 4);
        assert_eq!(l.to_text(), "u+u^2+u^3+O(u^4)");
        let t = LaurentApprox::from_ratfn(&RatFn::theta(&f2), 4);
        assert_eq!(t.valuation(), Some(-1));
        assert_eq!(t.to_text(), "u^-1+O(u^4)");
        let inv_t = RatFn::parse(&f2, "1/T", "T").unwrap();
        assert_eq!(LaurentApprox::from_ratfn(&inv_t, 4).to_text(), "u+O(u^4)");
    }

    #[test]
    fn b_denominators_expand() {
        let f3 = Fq::new(3, 1).unwrap();
        let a = RatFn::over_b(crate::UPoly::one(&f3), vec![1, 1]);
        let (n, d) = a.reduced();
        let b = RatFn::new(n, d).unwrap();
        assert_eq!(LaurentApprox::from_ratfn(&a, 30), LaurentApprox::from_ratfn(&b, 30));
    }
}
