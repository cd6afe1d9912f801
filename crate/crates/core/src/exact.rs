//! Exact complex constants `sqrt(m) * e^{2 pi i t}` with `m >= 0` and `t` rational.
//!
//! The form is closed under products and quotients. Sums stay exact only when
//! both terms are collinear with a rational ratio; everything else drops to
//! `Complex<f64>`.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Complex, One, Signed, ToPrimitive, Zero};

pub type C64 = Complex<f64>;

/// `sqrt(modsq) * exp(2 pi i turn)`, with `turn` reduced to `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polar {
    pub modsq: BigRational,
    pub turn: BigRational,
}

fn reduce_turn(t: BigRational) -> BigRational {
    let f = t.floor();
    t - f
}

/// Exact rational square root if one exists.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl Polar {
    pub fn zero() -> Self {
        Polar { modsq: BigRational::zero(), turn: BigRational::zero() }
    }

    pub fn one() -> Self {
        Polar { modsq: BigRational::one(), turn: BigRational::zero() }
    }

    pub fn from_rational(r: BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let turn = if r.is_negative() { BigRational::new(1.into(), 2.into()) } else { BigRational::zero() };
        Polar { modsq: &r * &r, turn }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Principal square root of a rational.
    pub fn sqrt_of(r: BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let turn = if r.is_negative() { BigRational::new(1.into(), 4.into()) } else { BigRational::zero() };
        Polar { modsq: r.abs(), turn }
    }

    /// `e^{2 pi i t}`.
    pub fn root_of_unity(t: BigRational) -> Self {
        Polar { modsq: BigRational::one(), turn: reduce_turn(t) }
    }

    pub fn is_zero(&self) -> bool {
        self.modsq.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.modsq.is_one() && self.turn.is_zero()
    }

    pub fn mul(&self, o: &Polar) -> Polar {
        if self.is_zero() || o.is_zero() {
            return Polar::zero();
        }
        Polar { modsq: &self.modsq * &o.modsq, turn: reduce_turn(&self.turn + &o.turn) }
    }

    pub fn inv(&self) -> Option<Polar> {
        if self.is_zero() {
            return None;
        }
        Some(Polar { modsq: self.modsq.recip(), turn: reduce_turn(-self.turn.clone()) })
    }

    pub fn neg(&self) -> Polar {
        if self.is_zero() {
            return Polar::zero();
        }
        Polar { modsq: self.modsq.clone(), turn: reduce_turn(&self.turn + BigRational::new(1.into(), 2.into())) }
    }

    pub fn conj(&self) -> Polar {
        Polar { modsq: self.modsq.clone(), turn: reduce_turn(-self.turn.clone()) }
    }

    /// The value as a real rational, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        let m = rational_sqrt(&self.modsq)?;
        if self.turn.is_zero() {
            Some(m)
        } else if self.turn == BigRational::new(1.into(), 2.into()) {
            Some(-m)
        } else {
            None
        }
    }

    /// Exact sum when the two terms are collinear with a rational ratio.
    pub fn try_add(&self, o: &Polar) -> Option<Polar> {
        if self.is_zero() {
            return Some(o.clone());
        }
        if o.is_zero() {
            return Some(self.clone());
        }
        let half = BigRational::new(1.into(), 2.into());
        let sign = if self.turn == o.turn {
            BigRational::one()
        } else if reduce_turn(&self.turn + &half) == o.turn {
            -BigRational::one()
        } else {
            return None;
        };
        let ratio = rational_sqrt(&(&o.modsq / &self.modsq))?;
        let k = BigRational::one() + sign * ratio;
        if k.is_zero() {
            return Some(Polar::zero());
        }
        let turn = if k.is_negative() { reduce_turn(&self.turn + &half) } else { self.turn.clone() };
        Some(Polar { modsq: &self.modsq * &k * &k, turn })
    }

    pub fn to_c64(&self) -> C64 {
        if self.is_zero() {
            return C64::new(0.0, 0.0);
        }
        let m = self.modsq.to_f64().unwrap_or(f64::NAN).sqrt();
        let t = &self.turn * BigRational::from_integer(4.into());
        // quarter turns get exact axes so textual round trips stay bit-identical
        if t.is_integer() {
            return match t.to_integer().to_i64().unwrap_or(0) {
                0 => C64::new(m, 0.0),
                1 => C64::new(0.0, m),
                2 => C64::new(-m, 0.0),
                _ => C64::new(0.0, -m),
            };
        }
        let th = 2.0 * std::f64::consts::PI * self.turn.to_f64().unwrap_or(f64::NAN);
        C64::new(m * th.cos(), m * th.sin())
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Polar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", fmt_rational(&r));
        }
        let mag = match rational_sqrt(&self.modsq) {
            Some(m) => fmt_rational(&m),
            None => format!("sqrt({})", fmt_rational(&self.modsq)),
        };
        if self.turn.is_zero() {
            write!(f, "{}", mag)
        } else if self.turn == BigRational::new(1.into(), 2.into()) {
            write!(f, "-{}", mag)
        } else if self.modsq.is_one() {
            write!(f, "exp(2*pi*i*({}))", fmt_rational(&self.turn))
        } else {
            write!(f, "{}*exp(2*pi*i*({}))", mag, fmt_rational(&self.turn))
        }
    }
}

/// A constant that is exact when possible.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Polar),
    Float(C64),
}

impl Value {
    pub fn one() -> Self {
        Value::Exact(Polar::one())
    }

    pub fn zero() -> Self {
        Value::Exact(Polar::zero())
    }

    pub fn c(&self) -> C64 {
        match self {
            Value::Exact(p) => p.to_c64(),
            Value::Float(z) => *z,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn is_exact_one(&self) -> bool {
        matches!(self, Value::Exact(p) if p.is_one())
    }

    pub fn mul(&self, o: &Value) -> Value {
        match (self, o) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a.mul(b)),
            _ => Value::Float(self.c() * o.c()),
        }
    }

    pub fn div(&self, o: &Value) -> Option<Value> {
        match (self, o) {
            (Value::Exact(a), Value::Exact(b)) => Some(Value::Exact(a.mul(&b.inv()?))),
            _ => {
                let d = o.c();
                if d.norm() == 0.0 {
                    None
                } else {
                    Some(Value::Float(self.c() / d))
                }
            }
        }
    }

    pub fn add(&self, o: &Value) -> Value {
        if let (Value::Exact(a), Value::Exact(b)) = (self, o) {
            if let Some(s) = a.try_add(b) {
                return Value::Exact(s);
            }
        }
        Value::Float(self.c() + o.c())
    }

    pub fn neg(&self) -> Value {
        match self {
            Value::Exact(a) => Value::Exact(a.neg()),
            Value::Float(z) => Value::Float(-z),
        }
    }

    pub fn sub(&self, o: &Value) -> Value {
        self.add(&o.neg())
    }

    pub fn conj(&self) -> Value {
        match self {
            Value::Exact(a) => Value::Exact(a.conj()),
            Value::Float(z) => Value::Float(z.conj()),
        }
    }
}

fn fmt_f64(x: f64) -> String {
    // Debug output is the shortest string that parses back to the same bits
    // and always carries a '.' or an exponent, so it re-parses as a float.
    format!("{:?}", x)
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(p) => write!(f, "{}", p),
            Value::Float(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", fmt_f64(z.re))
                } else {
                    write!(f, "{} + {}*exp(2*pi*i*(1/4))", fmt_f64(z.re), fmt_f64(z.im))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn collinear_sums_stay_exact() {
        let a = Polar::from_rational(q(1, 2));
        let s = a.try_add(&a).unwrap();
        assert!(s.is_one());
        let r2 = Polar::sqrt_of(q(2, 1));
        let r8 = Polar::sqrt_of(q(8, 1));
        // sqrt(2) - sqrt(8) = -sqrt(2)
        let d = r2.try_add(&r8.neg()).unwrap();
        assert_eq!(d, r2.neg());
        assert!(Polar::sqrt_of(q(2, 1)).try_add(&Polar::one()).is_none());
    }

    #[test]
    fn quarter_turns_are_axis_aligned() {
        let i = Polar::root_of_unity(q(1, 4)).to_c64();
        assert_eq!(i, C64::new(0.0, 1.0));
        let m = Polar::root_of_unity(q(-1, 2)).to_c64();
        assert_eq!(m, C64::new(-1.0, 0.0));
    }
}
