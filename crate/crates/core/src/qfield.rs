//! Exact arithmetic in a real quadratic field `ℚ(α)`.
//!
//! `α` is the positive root of `α² = u + v·α` for rationals `u`, `v`. An
//! element `r + s·α` is stored as `(a + b·α)/c` over the integers with
//! `c > 0` and `gcd(a, b, c) = 1`. Because `(1, α)` is a basis over `ℚ`, that
//! triple is unique, so structural equality is numeric equality.
//!
//! Triples that fit in `i64` take a checked machine-integer path; anything
//! that overflows is redone on big integers. Comparisons are decided exactly
//! by squaring. No floating point value ever feeds back into a decision.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("discriminant v^2 + 4u = {0} must be positive")]
    NonPositiveDiscriminant(BigRational),
    #[error("discriminant v^2 + 4u = {0} is a rational square, so alpha is rational")]
    RationalAlpha(BigRational),
    #[error("alpha must be positive")]
    NonPositiveAlpha,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    SpecMismatch,
}

/// The defining relation `α² = u + v·α` of a real quadratic irrational.
#[derive(Debug, Clone)]
pub struct AlphaSpec {
    u: BigRational,
    v: BigRational,
    disc: BigRational,
    // Integer form: with L = lcm(den u, den v), L·α² = U + V·α and
    // 2L·α = V + √E where E = V² + 4UL.
    l: BigInt,
    big_u: BigInt,
    big_v: BigInt,
    big_e: BigInt,
    small: Option<SmallConsts>,
}

#[derive(Debug, Clone, Copy)]
struct SmallConsts {
    l: i128,
    u: i128,
    v: i128,
    e: i128,
}

impl PartialEq for AlphaSpec {
    fn eq(&self, other: &Self) -> bool {
        self.u == other.u && self.v == other.v
    }
}

impl Eq for AlphaSpec {}

fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &(&r * &r) == n
    }
}

impl AlphaSpec {
    pub fn new(u: BigRational, v: BigRational) -> Result<Arc<Self>, FieldError> {
        let disc = &v * &v + BigRational::from_integer(4.into()) * &u;
        if !disc.is_positive() {
            return Err(FieldError::NonPositiveDiscriminant(disc));
        }
        if is_square(disc.numer()) && is_square(disc.denom()) {
            return Err(FieldError::RationalAlpha(disc));
        }
        // α = (v + √D)/2 > 0 ⇔ √D > −v, automatic for v ≥ 0, else ⇔ u > 0.
        if v.is_negative() && !u.is_positive() {
            return Err(FieldError::NonPositiveAlpha);
        }
        let l = u.denom().lcm(v.denom());
        let big_u = (&u * BigRational::from_integer(l.clone())).to_integer();
        let big_v = (&v * BigRational::from_integer(l.clone())).to_integer();
        let big_e = &big_v * &big_v + BigInt::from(4) * &big_u * &l;
        let small = (|| {
            Some(SmallConsts {
                l: l.to_i64()?.into(),
                u: big_u.to_i64()?.into(),
                v: big_v.to_i64()?.into(),
                e: big_e.to_i128()?,
            })
        })();
        Ok(Arc::new(Self {
            u,
            v,
            disc,
            l,
            big_u,
            big_v,
            big_e,
            small,
        }))
    }

    /// `α = √n` for a non-square positive integer `n`.
    pub fn sqrt(n: i64) -> Result<Arc<Self>, FieldError> {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// The default field, `α = √2`.
    pub fn sqrt2() -> Arc<Self> {
        Self::sqrt(2).expect("2 is not a square")
    }

    pub fn u(&self) -> &BigRational {
        &self.u
    }

    pub fn v(&self) -> &BigRational {
        &self.v
    }

    pub fn discriminant(&self) -> &BigRational {
        &self.disc
    }

    /// Rational bounds `lo < α < hi` with `hi − lo ≤ 1/scale`.
    ///
    /// `√(N/M) = √(N·M)/M`, and the integer square root brackets `√(N·M)`.
    pub fn alpha_bracket(&self, scale: &BigInt) -> (BigRational, BigRational) {
        let n = self.disc.numer();
        let m = self.disc.denom();
        // √D·scale = √(N·M·scale²)/M
        let radicand = n * m * scale * scale;
        let root = radicand.sqrt();
        let den = m * scale;
        let lo_sqrt = BigRational::new(root.clone(), den.clone());
        let hi_sqrt = BigRational::new(root + 1, den);
        let two = BigRational::from_integer(2.into());
        ((&self.v + lo_sqrt) / &two, (&self.v + hi_sqrt) / two)
    }

    pub fn to_f64(&self) -> f64 {
        let v = self.v.to_f64().unwrap_or(f64::NAN);
        let d = self.disc.to_f64().unwrap_or(f64::NAN);
        (v + d.sqrt()) / 2.0
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64, i64, i64),
    Big(Box<[BigInt; 3]>),
}

type Big3 = [BigInt; 3];

impl Repr {
    fn to_big(&self) -> Big3 {
        match self {
            Repr::Small(a, b, c) => [(*a).into(), (*b).into(), (*c).into()],
            Repr::Big(t) => (**t).clone(),
        }
    }

    /// Canonical form of `(a + bα)/c`, `c ≠ 0`.
    fn from_big([mut a, mut b, mut c]: Big3) -> Repr {
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        match (a.to_i64(), b.to_i64(), c.to_i64()) {
            (Some(a), Some(b), Some(c)) => Repr::Small(a, b, c),
            _ => Repr::Big(Box::new([a, b, c])),
        }
    }

    fn from_small(mut a: i128, mut b: i128, mut c: i128) -> Option<Repr> {
        if c < 0 {
            a = a.checked_neg()?;
            b = b.checked_neg()?;
            c = c.checked_neg()?;
        }
        let g = a.gcd(&b).gcd(&c);
        if g > 1 {
            a /= g;
            b /= g;
            c /= g;
        }
        Some(Repr::Small(
            a.try_into().ok()?,
            b.try_into().ok()?,
            c.try_into().ok()?,
        ))
    }

    fn small(&self) -> Option<(i128, i128, i128)> {
        match self {
            Repr::Small(a, b, c) => Some(((*a).into(), (*b).into(), (*c).into())),
            Repr::Big(_) => None,
        }
    }
}

/// An element `r + s·α` of `ℚ(α)`.
#[derive(Clone)]
pub struct QElement {
    repr: Repr,
    spec: Arc<AlphaSpec>,
}

/// Builds `r + s·α`.
pub fn qel(r: BigRational, s: BigRational, spec: &Arc<AlphaSpec>) -> QElement {
    QElement::new(r, s, spec)
}

fn same_spec(a: &Arc<AlphaSpec>, b: &Arc<AlphaSpec>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn sign_i(x: &BigInt) -> i8 {
    if x.is_negative() {
        -1
    } else if x.is_zero() {
        0
    } else {
        1
    }
}

impl QElement {
    pub fn new(r: BigRational, s: BigRational, spec: &Arc<AlphaSpec>) -> Self {
        let c = r.denom().lcm(s.denom());
        let a = r.numer() * (&c / r.denom());
        let b = s.numer() * (&c / s.denom());
        Self::from_repr(Repr::from_big([a, b, c]), spec)
    }

    fn from_repr(repr: Repr, spec: &Arc<AlphaSpec>) -> Self {
        Self {
            repr,
            spec: Arc::clone(spec),
        }
    }

    pub fn from_rational(r: BigRational, spec: &Arc<AlphaSpec>) -> Self {
        Self::new(r, BigRational::zero(), spec)
    }

    pub fn from_int(n: impl Into<BigInt>, spec: &Arc<AlphaSpec>) -> Self {
        Self::from_repr(Repr::from_big([n.into(), BigInt::zero(), BigInt::one()]), spec)
    }

    /// Convenience constructor from small integer coefficients `r + s·α`.
    pub fn from_ints(r: i64, s: i64, spec: &Arc<AlphaSpec>) -> Self {
        Self::from_repr(Repr::Small(r, s, 1), spec)
    }

    pub fn zero(spec: &Arc<AlphaSpec>) -> Self {
        Self::from_ints(0, 0, spec)
    }

    pub fn one(spec: &Arc<AlphaSpec>) -> Self {
        Self::from_ints(1, 0, spec)
    }

    pub fn alpha(spec: &Arc<AlphaSpec>) -> Self {
        Self::from_ints(0, 1, spec)
    }

    /// Rational coordinate `r`.
    pub fn r(&self) -> BigRational {
        let [a, _, c] = self.repr.to_big();
        BigRational::new(a, c)
    }

    /// Coefficient `s` of `α`.
    pub fn s(&self) -> BigRational {
        let [_, b, c] = self.repr.to_big();
        BigRational::new(b, c)
    }

    pub fn spec(&self) -> &Arc<AlphaSpec> {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Small(a, b, _) => *a == 0 && *b == 0,
            Repr::Big(t) => t[0].is_zero() && t[1].is_zero(),
        }
    }

    pub fn is_rational(&self) -> bool {
        match &self.repr {
            Repr::Small(_, b, _) => *b == 0,
            Repr::Big(t) => t[1].is_zero(),
        }
    }

    /// The element as an integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        match &self.repr {
            Repr::Small(a, 0, 1) => Some((*a).into()),
            Repr::Small(..) => None,
            Repr::Big(t) => (t[1].is_zero() && t[2].is_one()).then(|| t[0].clone()),
        }
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if same_spec(&self.spec, &other.spec) {
            Ok(())
        } else {
            Err(FieldError::SpecMismatch)
        }
    }

    fn with(&self, repr: Repr) -> Self {
        Self::from_repr(repr, &self.spec)
    }

    fn add_repr(&self, other: &Self, negate: bool) -> Repr {
        if let (Some((a1, b1, c1)), Some((a2, b2, c2))) = (self.repr.small(), other.repr.small()) {
            let (a2, b2) = if negate { (-a2, -b2) } else { (a2, b2) };
            // |i64·i64| < 2^126, so a sum of two products fits in i128
            let r = if c1 == c2 {
                Repr::from_small(a1 + a2, b1 + b2, c1)
            } else {
                Repr::from_small(a1 * c2 + a2 * c1, b1 * c2 + b2 * c1, c1 * c2)
            };
            if let Some(r) = r {
                return r;
            }
        }
        let [a1, b1, c1] = self.repr.to_big();
        let [mut a2, mut b2, c2] = other.repr.to_big();
        if negate {
            a2 = -a2;
            b2 = -b2;
        }
        Repr::from_big([&a1 * &c2 + &a2 * &c1, b1 * &c2 + b2 * &c1, c1 * c2])
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.with(self.add_repr(other, false)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.with(self.add_repr(other, true)))
    }

    fn mul_small(&self, x: (i128, i128, i128), y: (i128, i128, i128)) -> Option<Repr> {
        let ((a1, b1, c1), (a2, b2, c2)) = (x, y);
        if b1 == 0 || b2 == 0 {
            return Repr::from_small(a1 * a2, a1 * b2 + b1 * a2, c1 * c2);
        }
        let k = self.spec.small?;
        let bb = b1 * b2;
        let a = (a1 * a2).checked_mul(k.l)?.checked_add(bb.checked_mul(k.u)?)?;
        let cross = (a1 * b2).checked_add(b1 * a2)?;
        let b = cross.checked_mul(k.l)?.checked_add(bb.checked_mul(k.v)?)?;
        let c = (c1 * c2).checked_mul(k.l)?;
        Repr::from_small(a, b, c)
    }

    /// `(a₁ + b₁α)(a₂ + b₂α)` reduced with `L·α² = U + V·α`.
    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        if let (Some(x), Some(y)) = (self.repr.small(), other.repr.small()) {
            if let Some(r) = self.mul_small(x, y) {
                return Ok(self.with(r));
            }
        }
        let [a1, b1, c1] = self.repr.to_big();
        let [a2, b2, c2] = other.repr.to_big();
        let sp = &self.spec;
        let bb = &b1 * &b2;
        let a = &a1 * &a2 * &sp.l + &bb * &sp.big_u;
        let b = (&a1 * &b2 + &b1 * &a2) * &sp.l + bb * &sp.big_v;
        let c = c1 * c2 * &sp.l;
        Ok(self.with(Repr::from_big([a, b, c])))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    /// Multiplicative inverse.
    ///
    /// Solves `(a + bα)·z = c`: the solution is the conjugate `a + bv − bα`
    /// over the norm `a² + abv − b²u`, which vanishes only at zero because
    /// `α` is irrational. Both are scaled by `L` to stay integral.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let (Some((a, b, c)), Some(k)) = (self.repr.small(), self.spec.small) {
            let small = (|| {
                if b == 0 {
                    return Repr::from_small(c, 0, a);
                }
                let norm = (a * a)
                    .checked_mul(k.l)?
                    .checked_add((a * b).checked_mul(k.v)?)?
                    .checked_sub((b * b).checked_mul(k.u)?)?;
                let x = c.checked_mul(a.checked_mul(k.l)?.checked_add(b.checked_mul(k.v)?)?)?;
                let y = c.checked_mul(b.checked_mul(k.l)?)?.checked_neg()?;
                Repr::from_small(x, y, norm)
            })();
            if let Some(r) = small {
                return Ok(self.with(r));
            }
        }
        let [a, b, c] = self.repr.to_big();
        let sp = &self.spec;
        let norm = &a * &a * &sp.l + &a * &b * &sp.big_v - &b * &b * &sp.big_u;
        let x = &c * (&a * &sp.l + &b * &sp.big_v);
        let y = -(c * b * &sp.l);
        Ok(self.with(Repr::from_big([x, y, norm])))
    }

    /// Field norm `N(x) = x·x̄`.
    pub fn norm(&self) -> BigRational {
        let (r, s) = (self.r(), self.s());
        &r * &r + &r * &s * &self.spec.v - &s * &s * &self.spec.u
    }

    /// Exact sign of the real number, as −1, 0 or +1.
    ///
    /// With `c > 0` the sign is that of `2L·(a + bα) = P + b√E` where
    /// `P = 2La + bV`; mixed signs are settled by comparing `P²` with `b²E`,
    /// which never tie because `E` is not a square.
    pub fn sign(&self) -> i8 {
        if let (Repr::Small(a, b, _), Some(k)) = (&self.repr, self.spec.small) {
            let (a, b) = (i128::from(*a), i128::from(*b));
            if b == 0 {
                return a.signum() as i8;
            }
            if a == 0 {
                return b.signum() as i8;
            }
            let small = (|| {
                let p = (2 * a).checked_mul(k.l)?.checked_add(b.checked_mul(k.v)?)?;
                let (sp, sb) = (p.signum() as i8, b.signum() as i8);
                if sp * sb >= 0 {
                    return Some(if sp != 0 { sp } else { sb });
                }
                let lhs = p.checked_mul(p)?;
                let rhs = (b * b).checked_mul(k.e)?;
                Some(if lhs > rhs { sp } else { sb })
            })();
            if let Some(s) = small {
                return s;
            }
        }
        let [a, b, _] = self.repr.to_big();
        let sb = sign_i(&b);
        if sb == 0 {
            return sign_i(&a);
        }
        let sp_ = &self.spec;
        let p = BigInt::from(2) * &a * &sp_.l + &b * &sp_.big_v;
        let sp = sign_i(&p);
        if sp * sb >= 0 {
            return if sp != 0 { sp } else { sb };
        }
        if &p * &p > &b * &b * &sp_.big_e {
            sp
        } else {
            sb
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Greatest integer `m` with `m ≤ self`.
    pub fn floor(&self) -> BigInt {
        let (r, s) = (self.r(), self.s());
        if s.is_zero() {
            return r.floor().to_integer();
        }
        // Bracket with a coarse rational enclosure of α, then bisect on
        // exact sign tests.
        let (alpha_lo, alpha_hi) = self.spec.alpha_bracket(&BigInt::one());
        let (x, y) = (&r + &s * &alpha_lo, &r + &s * &alpha_hi);
        let (lo_bound, hi_bound) = if x <= y { (x, y) } else { (y, x) };
        // floor(self) ∈ [lo, hi]
        let mut lo = lo_bound.floor().to_integer();
        let mut hi = hi_bound.floor().to_integer();
        while lo < hi {
            let sum: BigInt = &lo + &hi + 1u32;
            let mid = sum.div_floor(&BigInt::from(2));
            if (self - Self::from_int(mid.clone(), &self.spec)).sign() >= 0 {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Decimal expansion with `digits` places after the point, rounded to
    /// nearest (ties away from zero, which only rational elements can hit).
    pub fn to_decimal(&self, digits: usize) -> String {
        let negative = self.is_negative();
        let magnitude = self.abs();
        let scale = BigInt::from(10u32).pow(digits as u32);
        let half = Self::new(BigRational::new(1.into(), 2.into()), BigRational::zero(), &self.spec);
        let m = (magnitude * Self::from_int(scale.clone(), &self.spec) + half).floor();
        let (int_part, frac_part) = m.div_rem(&scale);
        let mut out = String::new();
        if negative && !m.is_zero() {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 {
            out.push('.');
            let frac = frac_part.to_string();
            out.extend(std::iter::repeat('0').take(digits - frac.len()));
            out.push_str(&frac);
        }
        out
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.r().to_f64().unwrap_or(f64::NAN);
        let s = self.s().to_f64().unwrap_or(f64::NAN);
        r + s * self.spec.to_f64()
    }

    pub fn square(&self) -> Self {
        self * self
    }
}

impl PartialEq for QElement {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr && same_spec(&self.spec, &other.spec)
    }
}

impl Eq for QElement {}

impl Hash for QElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state);
    }
}

impl PartialOrd for QElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let diff = self.try_sub(other).ok()?;
        Some(diff.sign().cmp(&0))
    }
}

impl fmt::Debug for QElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QElement({} + {}·α)", self.r(), self.s())
    }
}

impl fmt::Display for QElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, s) = (self.r(), self.s());
        match (r.is_zero(), s.is_zero()) {
            (_, true) => write!(f, "{}", r),
            (true, false) => write!(f, "{}α", s),
            (false, false) if s.is_negative() => write!(f, "{} - {}α", r, -s),
            (false, false) => write!(f, "{} + {}α", r, s),
        }
    }
}

// Operator impls panic on mixed fields; the `try_*` methods report it.
macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&QElement> for &QElement {
            type Output = QElement;
            fn $method(self, rhs: &QElement) -> QElement {
                match self.$try(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{}", e),
                }
            }
        }
        impl $trait<QElement> for QElement {
            type Output = QElement;
            fn $method(self, rhs: QElement) -> QElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QElement> for QElement {
            type Output = QElement;
            fn $method(self, rhs: &QElement) -> QElement {
                (&self).$method(rhs)
            }
        }
        impl $trait<QElement> for &QElement {
            type Output = QElement;
            fn $method(self, rhs: QElement) -> QElement {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &QElement {
    type Output = QElement;
    fn neg(self) -> QElement {
        let repr = match &self.repr {
            // i64::MIN has no i64 negation
            Repr::Small(a, b, c) if *a != i64::MIN && *b != i64::MIN => Repr::Small(-a, -b, *c),
            other => {
                let [a, b, c] = other.to_big();
                Repr::from_big([-a, -b, c])
            }
        };
        self.with(repr)
    }
}

impl Neg for QElement {
    type Output = QElement;
    fn neg(self) -> QElement {
        -&self
    }
}
