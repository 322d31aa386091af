//! Integer cyclotomic polynomials and exact arithmetic in `Z[zeta_n]`.

use std::collections::HashMap;

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic(n: u64) -> Vec<i64> {
    let mut memo = HashMap::new();
    cyclotomic_memo(n, &mut memo)
}

fn cyclotomic_memo(n: u64, memo: &mut HashMap<u64, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    assert!(n >= 1);
    // x^n - 1 divided by every Phi_d with d | n, d < n
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den = cyclotomic_memo(d, memo);
            num = exact_div(&num, &den);
        }
    }
    memo.insert(n, num.clone());
    num
}

/// Exact quotient of integer polynomials, `den` monic.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let (q, r) = divmod(num, den);
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

fn divmod(num: &[i64], den: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let mut r = num.to_vec();
    if r.len() <= dd {
        return (vec![0], r);
    }
    let mut q = vec![0i64; r.len() - dd];
    for i in (dd..r.len()).rev() {
        let c = r[i];
        if c != 0 {
            q[i - dd] = c;
            for (j, &dc) in den.iter().enumerate() {
                r[i - dd + j] -= c * dc;
            }
        }
    }
    r.truncate(dd);
    (q, r)
}

/// Canonical representative of `sum c_e zeta_n^e` in `Z[zeta_n]`:
/// the remainder modulo `Phi_n`, of length `deg Phi_n`.
pub struct CyclotomicField {
    n: u64,
    phi: Vec<i64>,
}

impl CyclotomicField {
    pub fn new(n: u64) -> Self {
        CyclotomicField { n, phi: cyclotomic(n) }
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Reduces the element with the given exponent multiset.
    pub fn key(&self, exponents: impl IntoIterator<Item = u64>) -> Vec<i64> {
        let mut c = vec![0i64; self.n as usize];
        for e in exponents {
            c[(e % self.n) as usize] += 1;
        }
        self.reduce(&c)
    }

    pub fn reduce(&self, coeffs: &[i64]) -> Vec<i64> {
        let (_, mut r) = divmod(coeffs, &self.phi);
        r.resize(self.degree(), 0);
        r
    }

    pub fn is_zero(&self, exponents: impl IntoIterator<Item = u64>) -> bool {
        self.key(exponents).iter().all(|&c| c == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(2), vec![1, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic(30).len() - 1, 8);
        assert_eq!(cyclotomic(210).len() - 1, 48);
    }

    #[test]
    fn phi_105_has_a_minus_two() {
        assert!(cyclotomic(105).contains(&-2));
    }

    #[test]
    fn vanishing_examples() {
        let f = CyclotomicField::new(30);
        assert!(f.is_zero([0, 15]));
        assert!(f.is_zero([0, 10, 20]));
        assert!(f.is_zero([5, 25, 6, 12, 18, 24]));
        assert!(!f.is_zero([0, 10]));
    }
}
