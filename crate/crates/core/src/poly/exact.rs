//! Integer polynomials and dyadic points.
//!
//! Every finite `f64` is a dyadic rational, so a polynomial with `f64`
//! coefficients scales exactly to one with integer coefficients. Sturm chains
//! built from primitive pseudo-remainder sequences on those integers give
//! exact sign-variation counts.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `mantissa / 2^exp`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Dyadic {
    pub mantissa: BigInt,
    pub exp: u32,
}

impl Dyadic {
    pub fn from_f64(x: f64) -> Dyadic {
        debug_assert!(x.is_finite());
        if x == 0.0 {
            return Dyadic {
                mantissa: BigInt::zero(),
                exp: 0,
            };
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let mut m = BigInt::from(mant);
        if negative {
            m = -m;
        }
        if e >= 0 {
            Dyadic {
                mantissa: m << (e as usize),
                exp: 0,
            }
        } else {
            Dyadic {
                mantissa: m,
                exp: (-e) as u32,
            }
            .reduced()
        }
    }

    pub fn pow2(e: i32) -> Dyadic {
        if e >= 0 {
            Dyadic {
                mantissa: BigInt::one() << (e as usize),
                exp: 0,
            }
        } else {
            Dyadic {
                mantissa: BigInt::one(),
                exp: (-e) as u32,
            }
        }
    }

    fn reduced(mut self) -> Dyadic {
        if self.mantissa.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self
            .mantissa
            .trailing_zeros()
            .unwrap_or(0)
            .min(self.exp as u64);
        self.mantissa >>= tz as usize;
        self.exp -= tz as u32;
        self
    }

    /// A point below `self` by `2^-1100`, closer than any `f64` spacing.
    pub fn nudged_down(&self) -> Dyadic {
        let k = 1100u32.max(self.exp);
        Dyadic {
            mantissa: (&self.mantissa << ((k - self.exp) as usize)) - BigInt::one(),
            exp: k,
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mantissa: -self.mantissa.clone(),
            exp: self.exp,
        }
    }

    pub fn midpoint(&self, other: &Dyadic) -> Dyadic {
        let k = self.exp.max(other.exp);
        let a = &self.mantissa << ((k - self.exp) as usize);
        let b = &other.mantissa << ((k - other.exp) as usize);
        Dyadic {
            mantissa: a + b,
            exp: k + 1,
        }
        .reduced()
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mantissa.bits();
        let (m, mut k) = if bits > 62 {
            let shift = bits - 62;
            (
                &self.mantissa >> (shift as usize),
                self.exp as i64 - shift as i64,
            )
        } else {
            (self.mantissa.clone(), self.exp as i64)
        };
        let mut v = m.to_f64().unwrap_or(0.0);
        while k > 1000 {
            v *= 2f64.powi(-1000);
            k -= 1000;
        }
        while k < -1000 {
            v *= 2f64.powi(1000);
            k += 1000;
        }
        v * 2f64.powi(-(k as i32))
    }

    pub fn cmp(&self, other: &Dyadic) -> std::cmp::Ordering {
        let k = self.exp.max(other.exp);
        let a = &self.mantissa << ((k - self.exp) as usize);
        let b = &other.mantissa << ((k - other.exp) as usize);
        a.cmp(&b)
    }
}

/// Ascending integer coefficients, no trailing zeros; the zero polynomial is
/// the empty vector.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct IntPoly(pub Vec<BigInt>);

fn sign_of(v: &BigInt) -> i8 {
    match v.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl IntPoly {
    fn trimmed(mut v: Vec<BigInt>) -> IntPoly {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        IntPoly(v)
    }

    /// Positive multiple of the polynomial with the given `f64` coefficients.
    pub fn from_f64s(coeffs: &[f64]) -> IntPoly {
        let ds: Vec<Dyadic> = coeffs.iter().map(|&c| Dyadic::from_f64(c)).collect();
        let k = ds.iter().map(|d| d.exp).max().unwrap_or(0);
        let v = ds
            .into_iter()
            .map(|d| d.mantissa << ((k - d.exp) as usize))
            .collect();
        IntPoly::trimmed(v).primitive()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &BigInt {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn derivative(&self) -> IntPoly {
        let v = self
            .0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        IntPoly::trimmed(v)
    }

    /// Divides out the (positive) content.
    pub fn primitive(self) -> IntPoly {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
            if g.is_one() {
                return self;
            }
        }
        if g.is_zero() {
            return self;
        }
        IntPoly(self.0.into_iter().map(|c| c / &g).collect())
    }

    /// Pseudo-division: `lc(b)^(deg a - deg b + 1) * a = quo * b + rem`.
    pub fn pseudo_divmod(&self, b: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(!b.is_zero(), "division by zero polynomial");
        if self.is_zero() || self.degree() < b.degree() {
            return (IntPoly(Vec::new()), self.clone());
        }
        let d = b.lead().clone();
        let db = b.degree();
        let mut steps = self.degree() - db + 1;
        let mut quo = vec![BigInt::zero(); steps];
        let mut rem = self.0.clone();
        while !rem.is_empty() && rem.len() > db {
            let shift = rem.len() - 1 - db;
            let lr = rem.last().unwrap().clone();
            for q in quo.iter_mut() {
                *q *= &d;
            }
            quo[shift] += &lr;
            for r in rem.iter_mut() {
                *r *= &d;
            }
            for (i, bc) in b.0.iter().enumerate() {
                rem[i + shift] -= &lr * bc;
            }
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
            steps -= 1;
        }
        if steps > 0 {
            let f = num_traits::pow(d, steps);
            for q in quo.iter_mut() {
                *q *= &f;
            }
            for r in rem.iter_mut() {
                *r *= &f;
            }
        }
        (IntPoly::trimmed(quo), IntPoly::trimmed(rem))
    }

    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.clone().primitive(), other.clone().primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let (_, r) = a.pseudo_divmod(&b);
            a = b;
            b = r.primitive();
        }
        a
    }

    /// Square-free part (up to a nonzero constant), i.e. `p / gcd(p, p')`.
    pub fn square_free(&self) -> IntPoly {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.clone();
        }
        let (q, r) = self.pseudo_divmod(&g);
        debug_assert!(r.is_zero());
        q.primitive()
    }

    /// Sign of the value at `x`.
    pub fn sign_at(&self, x: &Dyadic) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let d = self.degree();
        let mut acc = self.0[d].clone();
        for i in (0..d).rev() {
            acc = acc * &x.mantissa + (&self.0[i] << ((x.exp as usize) * (d - i)));
        }
        sign_of(&acc)
    }

    pub fn sign_at_pos_inf(&self) -> i8 {
        if self.is_zero() {
            0
        } else {
            sign_of(self.lead())
        }
    }

    pub fn sign_at_neg_inf(&self) -> i8 {
        let s = self.sign_at_pos_inf();
        if self.degree() % 2 == 1 {
            -s
        } else {
            s
        }
    }
}

/// Sturm sequence of a square-free polynomial.
#[derive(Debug, Clone)]
pub(crate) struct SturmChain(Vec<IntPoly>);

impl SturmChain {
    pub fn new(p: &IntPoly) -> SturmChain {
        let mut chain = vec![p.clone()];
        if p.is_zero() || p.degree() == 0 {
            return SturmChain(chain);
        }
        chain.push(p.derivative().primitive());
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            let (_, r) = a.pseudo_divmod(b);
            if r.is_zero() {
                break;
            }
            // prem = lc(b)^(da-db+1) * rem, so fix the sign before negating.
            let odd_power = (a.degree() - b.degree() + 1) % 2 == 1;
            let flip = odd_power && b.lead().is_negative();
            let next = if flip {
                r
            } else {
                IntPoly(r.0.into_iter().map(|c| -c).collect())
            };
            chain.push(next.primitive());
        }
        SturmChain(chain)
    }

    fn count_changes(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut n = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
        n
    }

    pub fn variations_at(&self, x: &Dyadic) -> usize {
        Self::count_changes(self.0.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_neg_inf(&self) -> usize {
        Self::count_changes(self.0.iter().map(|p| p.sign_at_neg_inf()))
    }

    pub fn variations_pos_inf(&self) -> usize {
        Self::count_changes(self.0.iter().map(|p| p.sign_at_pos_inf()))
    }

    /// Distinct roots in the half-open interval `(lo, hi]`.
    pub fn count_in(&self, lo: &Dyadic, hi: &Dyadic) -> usize {
        self.variations_at(lo)
            .saturating_sub(self.variations_at(hi))
    }

    pub fn count_all(&self) -> usize {
        self.variations_neg_inf()
            .saturating_sub(self.variations_pos_inf())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_roundtrip() {
        for x in [0.0, 1.0, -3.5, 1e-300, 6f64.cbrt(), -1e300, 5e-324] {
            assert_eq!(Dyadic::from_f64(x).to_f64(), x, "{x}");
        }
        let m = Dyadic::from_f64(1.0).midpoint(&Dyadic::from_f64(2.0));
        assert_eq!(m.to_f64(), 1.5);
    }

    #[test]
    fn sturm_counts_distinct_roots() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        let p = IntPoly::from_f64s(&[2.0, -3.0, 0.0, 1.0]);
        let sf = p.square_free();
        assert_eq!(sf.degree(), 2);
        assert_eq!(SturmChain::new(&sf).count_all(), 2);
        // x^2 + 1
        let q = IntPoly::from_f64s(&[1.0, 0.0, 1.0]);
        assert_eq!(SturmChain::new(&q).count_all(), 0);
    }

    #[test]
    fn half_open_counting_at_roots() {
        // x^2 - 1, roots -1 and 1
        let c = SturmChain::new(&IntPoly::from_f64s(&[-1.0, 0.0, 1.0]));
        let d = Dyadic::from_f64;
        assert_eq!(c.count_in(&d(-1.0), &d(1.0)), 1);
        assert_eq!(c.count_in(&d(-2.0), &d(1.0)), 2);
        assert_eq!(c.count_in(&d(-1.0), &d(0.5)), 0);
    }
}
