//! Small finite fields with precomputed tables.
//!
//! Orders up to 64 cover every construction in this crate, so elements
//! are plain integers `0..q` read as base-`p` digit vectors of polynomial
//! coefficients (digit `i` is the coefficient of `x^i`), and arithmetic
//! is table lookup. The reduction polynomial is the lexicographically
//! smallest monic irreducible of degree `e`, comparing coefficients from
//! the constant term upward, which pins the tables uniquely. Field axioms
//! are checked exhaustively at construction.

use crate::error::FieldError;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 64;

/// A finite field of order `q = p^e`, `q <= 64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    e: u32,
    q: u32,
    /// Monic reduction polynomial, constant term first, length `e + 1`.
    reduction: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
}

/// Splits `q` into `(p, e)` with `p` prime, or fails.
fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut rest = q;
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            return (rest == 1).then_some((p, e));
        }
        p += 1;
    }
    Some((q, 1))
}

/// Polynomial multiplication then reduction, coefficients mod `p`.
fn poly_mulmod(a: &[u32], b: &[u32], reduction: &[u32], p: u32) -> Vec<u32> {
    let e = reduction.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // divide out the monic reduction polynomial
    for i in (e..prod.len()).rev() {
        let coeff = prod[i];
        if coeff != 0 {
            prod[i] = 0;
            for (k, &rk) in reduction.iter().take(e).enumerate() {
                let idx = i - e + k;
                prod[idx] = (prod[idx] + coeff * (p - rk) % p + p) % p;
            }
        }
    }
    prod.truncate(e);
    prod.resize(e.max(1), 0);
    prod
}

/// True when `g` divides `f` over GF(p).
fn poly_rem_is_zero(f: &[u32], g: &[u32], p: u32) -> bool {
    let mut r = f.to_vec();
    while r.len() >= g.len() {
        let lead = r[r.len() - 1];
        if lead == 0 {
            r.pop();
            continue;
        }
        let shift = r.len() - g.len();
        for (k, &gk) in g.iter().enumerate() {
            r[shift + k] = (r[shift + k] + lead * (p - gk) % p + p) % p;
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

impl FiniteField {
    /// Build GF(q) for a prime power `q <= 64`.
    pub fn new(q: u32) -> Result<Self, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(FieldError::TooLarge(q));
        }
        let reduction = if e == 1 {
            vec![0, 1] // the polynomial x; GF(p) is plain arithmetic mod p
        } else {
            // smallest monic irreducible of degree e, constant term first
            let mut found = None;
            'search: for n in 0..q {
                let mut f = vec![0u32; e as usize + 1];
                let mut rest = n;
                for c in f.iter_mut().take(e as usize) {
                    *c = rest % p;
                    rest /= p;
                }
                f[e as usize] = 1;
                for d in 1..=(e as usize) / 2 {
                    for m in 0..p.pow(d as u32) {
                        let mut g = vec![0u32; d + 1];
                        let mut r = m;
                        for c in g.iter_mut().take(d) {
                            *c = r % p;
                            r /= p;
                        }
                        g[d] = 1;
                        if poly_rem_is_zero(&f, &g, p) {
                            continue 'search;
                        }
                    }
                }
                found = Some(f);
                break;
            }
            found.expect("an irreducible polynomial of every degree exists")
        };

        let digits = |n: u32| -> Vec<u32> {
            let mut v = vec![0u32; e as usize];
            let mut rest = n;
            for c in v.iter_mut() {
                *c = rest % p;
                rest /= p;
            }
            v
        };
        let undigits = |v: &[u32]| -> u32 {
            v.iter().rev().fold(0, |acc, &c| acc * p + c)
        };

        let mut add = vec![0u32; (q * q) as usize];
        let mut mul = vec![0u32; (q * q) as usize];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&sum);
                let prod = poly_mulmod(&da, &db, &reduction, p);
                mul[(a * q + b) as usize] = undigits(&prod);
            }
        }

        let field = Self {
            p,
            e,
            q,
            reduction,
            add,
            mul,
        };
        field.check_axioms();
        Ok(field)
    }

    /// Exhaustive field-axiom check; panics on an internal table bug.
    fn check_axioms(&self) {
        let q = self.q;
        for a in 0..q {
            assert_eq!(self.add(a, 0), a);
            assert_eq!(self.mul(a, 1), a);
            assert_eq!(self.mul(a, 0), 0);
            assert!((0..q).any(|b| self.add(a, b) == 0), "additive inverse");
            if a != 0 {
                assert!((0..q).any(|b| self.mul(a, b) == 1), "multiplicative inverse");
            }
            for b in 0..q {
                assert_eq!(self.add(a, b), self.add(b, a));
                assert_eq!(self.mul(a, b), self.mul(b, a));
                for c in 0..q {
                    assert_eq!(self.add(self.add(a, b), c), self.add(a, self.add(b, c)));
                    assert_eq!(self.mul(self.mul(a, b), c), self.mul(a, self.mul(b, c)));
                    assert_eq!(
                        self.mul(a, self.add(b, c)),
                        self.add(self.mul(a, b), self.mul(a, c))
                    );
                }
            }
        }
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Reduction polynomial, constant term first.
    pub fn reduction(&self) -> &[u32] {
        &self.reduction
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    pub fn neg(&self, a: u32) -> u32 {
        (0..self.q).find(|&b| self.add(a, b) == 0).expect("checked")
    }
}

/// Build GF(q); see [`FiniteField::new`].
pub fn gf(q: u32) -> Result<FiniteField, FieldError> {
    FiniteField::new(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf5_is_mod_5() {
        let f = gf(5).unwrap();
        assert_eq!(f.add(2, 3), 0);
        assert_eq!(f.mul(2, 3), 1);
    }

    #[test]
    fn gf4_reduction_poly() {
        let f = gf(4).unwrap();
        // x^2 + x + 1, the only irreducible monic quadratic over GF(2)
        assert_eq!(f.reduction(), &[1, 1, 1]);
        // the element x (encoding 2) squares to x + 1 (encoding 3)
        assert_eq!(f.mul(2, 2), 3);
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert_eq!(gf(12), Err(FieldError::NotPrimePower(12)));
        assert_eq!(gf(1), Err(FieldError::NotPrimePower(1)));
        assert_eq!(gf(0), Err(FieldError::NotPrimePower(0)));
        assert_eq!(gf(81), Err(FieldError::TooLarge(81)));
    }

    #[test]
    fn all_supported_orders_build() {
        // axiom check runs inside the constructor
        for q in 2..=MAX_ORDER {
            match prime_power(q) {
                Some(_) => assert!(gf(q).is_ok(), "gf({q})"),
                None => assert!(gf(q).is_err()),
            }
        }
    }

    #[test]
    fn gf8_and_gf9_structure() {
        let f8 = gf(8).unwrap();
        assert_eq!((f8.characteristic(), f8.degree()), (2, 3));
        // x^3 + x + 1 is the smallest by low-first comparison
        assert_eq!(f8.reduction(), &[1, 1, 0, 1]);
        let f9 = gf(9).unwrap();
        assert_eq!((f9.characteristic(), f9.degree()), (3, 2));
        // x^2 + 1 over GF(3)
        assert_eq!(f9.reduction(), &[1, 0, 1]);
    }
}
