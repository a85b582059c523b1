//! Exact arithmetic in `Z[zeta_L]`.
//!
//! Values are stored as coefficient vectors over the powers `zeta^0 .. zeta^(L-1)`,
//! i.e. as elements of the group ring `Z[Z/L]`. Equality with zero is decided by
//! reducing modulo the cyclotomic polynomial `Phi_L`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloInt {
    coeffs: Vec<i64>,
}

impl CycloInt {
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "root of unity order must be >= 1");
        CycloInt {
            coeffs: vec![0; order],
        }
    }

    pub fn constant(order: usize, value: i64) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = value;
        z
    }

    /// `coeff * zeta^exp`.
    pub fn monomial(order: usize, exp: usize, coeff: i64) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[exp % order] = coeff;
        z
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn add_monomial(&mut self, exp: usize, coeff: i64) {
        let l = self.order();
        self.coeffs[exp % l] += coeff;
    }

    /// Complex conjugate: `zeta^e -> zeta^(-e)`.
    pub fn conj(&self) -> Self {
        let l = self.order();
        let mut out = Self::zero(l);
        for (e, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[(l - e) % l] += c;
        }
        out
    }

    pub fn to_complex(&self) -> Complex64 {
        let l = self.order() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| Complex64::from_polar(c as f64, std::f64::consts::TAU * e as f64 / l))
            .sum()
    }

    /// Remainder modulo `Phi_L`, of degree below `phi(L)`.
    pub fn reduced(&self) -> Vec<i64> {
        let phi = cyclotomic_polynomial(self.order());
        let deg = phi.len() - 1;
        let mut r = self.coeffs.clone();
        for top in (deg..r.len()).rev() {
            let c = r[top];
            if c == 0 {
                continue;
            }
            // phi is monic
            for (i, &p) in phi.iter().enumerate() {
                r[top - deg + i] -= c * p;
            }
        }
        r.truncate(deg);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&c| c == 0)
    }

    pub fn exact_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_zero()
    }

    /// The rational integer this value equals, if it lies in `Z`.
    pub fn as_integer(&self) -> Option<i64> {
        let r = self.reduced();
        if r[1..].iter().all(|&c| c == 0) {
            Some(r[0])
        } else {
            None
        }
    }
}

fn check_orders(a: &CycloInt, b: &CycloInt) {
    assert_eq!(a.order(), b.order(), "cyclotomic orders differ");
}

impl Add for CycloInt {
    type Output = CycloInt;
    fn add(mut self, rhs: CycloInt) -> CycloInt {
        check_orders(&self, &rhs);
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Sub for CycloInt {
    type Output = CycloInt;
    fn sub(mut self, rhs: CycloInt) -> CycloInt {
        check_orders(&self, &rhs);
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
        self
    }
}

impl Neg for CycloInt {
    type Output = CycloInt;
    fn neg(mut self) -> CycloInt {
        for a in self.coeffs.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl Mul for CycloInt {
    type Output = CycloInt;
    fn mul(self, rhs: CycloInt) -> CycloInt {
        check_orders(&self, &rhs);
        let l = self.order();
        let mut out = CycloInt::zero(l);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                if b != 0 {
                    out.coeffs[(i + j) % l] += a * b;
                }
            }
        }
        out
    }
}

/// Integer coefficients of `Phi_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_div(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut r = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = r[k + dn];
        q[k] = c;
        for (i, &d) in den.iter().enumerate() {
            r[k + i] -= c * d;
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn root_sums_vanish() {
        for l in 2..30 {
            let mut s = CycloInt::zero(l);
            for e in 0..l {
                s.add_monomial(e, 1);
            }
            assert!(s.is_zero(), "sum of all {l}th roots");
            assert!(!CycloInt::monomial(l, 1, 1).is_zero());
        }
    }

    #[test]
    fn norm_of_root_is_one() {
        for l in 1..20 {
            for e in 0..l {
                let z = CycloInt::monomial(l, e, 1);
                assert_eq!((z.clone() * z.conj()).as_integer(), Some(1));
            }
        }
    }

    #[test]
    fn complex_shadow_agrees() {
        let mut z = CycloInt::zero(12);
        z.add_monomial(1, 3);
        z.add_monomial(5, -2);
        let w = z.clone() * z.conj();
        let f = z.to_complex();
        assert!((w.to_complex() - f * f.conj()).norm() < 1e-12);
    }
}
