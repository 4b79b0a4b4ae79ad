//! Arithmetic in the prime field `Z/ellZ` and its cyclic unit group.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported modulus. Keeps the canonical matrix encoding
/// `a·ell³ + b·ell² + c·ell + d` inside a `u64`.
pub const MAX_MODULUS: u64 = 65_535;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Primes in the inclusive range `[lo, hi]`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// A prime `ell`, checked by trial division at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    pub fn new(ell: u64) -> Result<Self> {
        if ell > MAX_MODULUS {
            return Err(Error::ModulusOutOfRange(ell));
        }
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        Ok(PrimeModulus(ell as u32))
    }

    #[inline]
    pub fn ell(self) -> u64 {
        self.0 as u64
    }

    /// Fails with [`Error::EvenPrime`] for `ell = 2`.
    pub fn require_odd(self) -> Result<()> {
        if self.0 == 2 {
            Err(Error::EvenPrime)
        } else {
            Ok(())
        }
    }

    /// Canonical residue of a signed integer.
    #[inline]
    pub fn reduce(self, x: i64) -> u64 {
        x.rem_euclid(self.ell() as i64) as u64
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.ell()
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.ell()
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.ell() - b) % self.ell()
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        (self.ell() - a) % self.ell()
    }

    pub fn pow(self, base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.ell();
        let mut b = base % self.ell();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue via Fermat.
    pub fn inv(self, a: u64) -> Option<u64> {
        let a = a % self.ell();
        (a != 0).then(|| self.pow(a, self.ell() - 2))
    }

    /// `#GL2(ell) = (ell² − 1)(ell² − ell)`.
    pub fn gl2_order(self) -> u64 {
        let l = self.ell();
        (l * l - 1) * (l * l - l)
    }
}

impl TryFrom<u64> for PrimeModulus {
    type Error = Error;
    fn try_from(ell: u64) -> Result<Self> {
        PrimeModulus::new(ell)
    }
}

impl From<PrimeModulus> for u64 {
    fn from(m: PrimeModulus) -> u64 {
        m.ell()
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A nonzero residue mod `ell`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpUnit {
    value: u32,
    modulus: PrimeModulus,
}

impl FpUnit {
    pub fn new(value: i64, modulus: PrimeModulus) -> Result<Self> {
        let v = modulus.reduce(value);
        if v == 0 {
            return Err(Error::ZeroUnit(value.unsigned_abs(), modulus.ell()));
        }
        Ok(FpUnit { value: v as u32, modulus })
    }

    pub fn one(modulus: PrimeModulus) -> Self {
        FpUnit { value: 1, modulus }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value as u64
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    pub fn inverse(self) -> Self {
        fp_pow(self, -1)
    }

    /// Multiplicative order in `F_ell^×`.
    pub fn order(self) -> u64 {
        let n = self.modulus.ell() - 1;
        divisors(n)
            .into_iter()
            .find(|&k| self.modulus.pow(self.value(), k) == 1)
            .unwrap_or(n)
    }
}

impl fmt::Display for FpUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

/// `x^k` for any integer `k`; negative exponents invert first.
pub fn fp_pow(x: FpUnit, k: i64) -> FpUnit {
    let m = x.modulus;
    let base = if k < 0 {
        m.pow(x.value(), m.ell() - 2)
    } else {
        x.value()
    };
    FpUnit {
        value: m.pow(base, k.unsigned_abs()) as u32,
        modulus: m,
    }
}

/// The least integer in `[2, ell − 1]` generating `F_ell^×`.
pub fn least_primitive_root(m: PrimeModulus) -> Result<FpUnit> {
    m.require_odd()?;
    let n = m.ell() - 1;
    let prime_factors: Vec<u64> = divisors(n).into_iter().filter(|&p| p > 1 && is_prime(p)).collect();
    (2..m.ell())
        .find(|&g| prime_factors.iter().all(|&p| m.pow(g, n / p) != 1))
        .map(|g| FpUnit { value: g as u32, modulus: m })
        .ok_or(Error::EvenPrime)
}

/// Order of the subgroup of `k`-th powers in a cyclic group of order `n`.
pub fn power_image_order(n: u64, k: u64) -> u64 {
    assert!(n >= 1 && k >= 1, "power_image_order needs positive arguments");
    n / gcd(k, n)
}

/// Whether `gcd(12, n_psi)·n_r = gcd(12, n_r)·n_psi`, i.e. whether the
/// twelfth-power images of cyclic groups of orders `n_r`, `n_psi` agree in size.
pub fn gcd_character_identity_holds(n_r: u64, n_psi: u64) -> bool {
    gcd(12, n_psi) * n_r == gcd(12, n_r) * n_psi
}

/// A subgroup of `F_ell^×`, recorded by its order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicImage {
    modulus: PrimeModulus,
    order: u64,
}

impl CyclicImage {
    pub fn new(modulus: PrimeModulus, order: u64) -> Result<Self> {
        let bound = modulus.ell() - 1;
        if order == 0 || !bound.is_multiple_of(order) {
            return Err(Error::OrderDoesNotDivide { order, bound });
        }
        Ok(CyclicImage { modulus, order })
    }

    /// The image of a set of units: the order of the subgroup they generate.
    pub fn generated_by(modulus: PrimeModulus, units: impl IntoIterator<Item = u64>) -> Self {
        let n = modulus.ell() - 1;
        let order = units.into_iter().fold(1, |acc, u| {
            let o = FpUnit::new(u as i64, modulus).map(FpUnit::order).unwrap_or(1);
            lcm(acc, o)
        });
        // In a cyclic group the subgroup generated has order lcm of element orders.
        debug_assert!(n.is_multiple_of(order));
        CyclicImage { modulus, order }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }
}

/// `[F_ell^× : image] = (ell − 1) / #image`.
pub fn unit_group_index(img: &CyclicImage) -> u64 {
    (img.modulus.ell() - 1) / img.order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(ell: u64) -> PrimeModulus {
        PrimeModulus::new(ell).unwrap()
    }

    fn unit(v: i64, ell: u64) -> FpUnit {
        FpUnit::new(v, p(ell)).unwrap()
    }

    /// Brute-force multiplicative order, independent of `FpUnit::order`.
    fn order_by_iteration(g: u64, ell: u64) -> u64 {
        let mut x = g % ell;
        let mut k = 1;
        while x != 1 {
            x = x * g % ell;
            k += 1;
        }
        k
    }

    #[test]
    fn rejects_non_primes() {
        assert!(matches!(PrimeModulus::new(1), Err(Error::NotPrime(1))));
        assert!(matches!(PrimeModulus::new(9), Err(Error::NotPrime(9))));
        assert!(matches!(PrimeModulus::new(0), Err(Error::NotPrime(0))));
        assert!(PrimeModulus::new(2).is_ok());
        assert!(matches!(PrimeModulus::new(65_537), Err(Error::ModulusOutOfRange(_))));
    }

    #[test]
    fn fp_pow_examples() {
        assert_eq!(fp_pow(unit(2, 5), 0).value(), 1);
        assert_eq!(fp_pow(unit(2, 5), -1).value(), 3);
        assert_eq!(fp_pow(unit(2, 13), 12).value(), 1);
        assert_eq!(fp_pow(unit(2, 13), -3).value(), fp_pow(unit(8, 13), -1).value());
    }

    #[test]
    fn least_primitive_root_examples() {
        // Oracle: smallest g whose iterated order is ell - 1.
        for (ell, expected) in [(5, 2), (7, 3), (13, 2)] {
            let brute = (2..ell).find(|&g| order_by_iteration(g, ell) == ell - 1).unwrap();
            assert_eq!(brute, expected);
            assert_eq!(least_primitive_root(p(ell)).unwrap().value(), expected);
        }
        assert!(matches!(least_primitive_root(p(2)), Err(Error::EvenPrime)));
    }

    #[test]
    fn least_primitive_root_has_full_order_up_to_200() {
        for ell in primes_between(3, 200) {
            let g = least_primitive_root(p(ell)).unwrap();
            assert_eq!(order_by_iteration(g.value(), ell), ell - 1, "ell = {ell}");
            for smaller in 2..g.value() {
                assert!(order_by_iteration(smaller, ell) < ell - 1);
            }
        }
    }

    /// Size of `{k·x : x ∈ Z/nZ}`: the k-th powers of a cyclic group of order n.
    fn power_image_by_enumeration(n: u64, k: u64) -> u64 {
        let mut seen = vec![false; n as usize];
        for x in 0..n {
            seen[(k * x % n) as usize] = true;
        }
        seen.iter().filter(|&&s| s).count() as u64
    }

    #[test]
    fn power_image_order_examples() {
        assert_eq!(power_image_by_enumeration(10, 6), 5);
        assert_eq!(power_image_by_enumeration(24, 12), 2);
        assert_eq!(power_image_order(12, 12), 1);
        assert_eq!(power_image_order(10, 6), 5);
        assert_eq!(power_image_order(24, 12), 2);
    }

    #[test]
    fn power_image_order_matches_enumeration() {
        for n in 1..=100 {
            for k in 2..=24 {
                assert_eq!(power_image_order(n, k), power_image_by_enumeration(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn gcd_character_identity_examples() {
        assert!(gcd_character_identity_holds(24, 8));
        assert!(gcd_character_identity_holds(6, 6));
        assert!(!gcd_character_identity_holds(5, 7));
    }

    #[test]
    fn gcd_character_identity_is_equal_twelfth_power_orders() {
        for n in 1..=60 {
            for m in 1..=60 {
                assert_eq!(
                    gcd_character_identity_holds(n, m),
                    power_image_by_enumeration(n, 12) == power_image_by_enumeration(m, 12)
                );
            }
        }
    }

    #[test]
    fn unit_group_index_examples() {
        assert_eq!(unit_group_index(&CyclicImage::new(p(13), 12).unwrap()), 1);
        assert_eq!(unit_group_index(&CyclicImage::new(p(13), 4).unwrap()), 3);
        assert_eq!(unit_group_index(&CyclicImage::new(p(31), 6).unwrap()), 5);
        assert!(CyclicImage::new(p(13), 5).is_err());
    }

    #[test]
    fn generated_image() {
        // Squares mod 13 form the subgroup of order 6.
        let img = CyclicImage::generated_by(p(13), (1..13).map(|a| a * a % 13));
        assert_eq!(img.order(), 6);
        assert_eq!(CyclicImage::generated_by(p(13), []).order(), 1);
    }

    #[test]
    fn divisors_are_sorted() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }
}
