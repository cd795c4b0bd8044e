use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::predicate::ConstantSlot;
use super::ModelError;

pub type Q = Ratio<i64>;

/// Exact value carried by `aconst`, `rconst` and `lconst`.
///
/// Angles are stored as a multiple of π reduced into `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Constant {
    Angle(#[serde(with = "ratio_serde")] Q),
    Ratio(#[serde(with = "ratio_serde")] Q),
    Length(#[serde(with = "ratio_serde")] Q),
}

impl Constant {
    pub fn angle(turns_of_pi: Q) -> Constant {
        Constant::Angle(reduce_mod_one(turns_of_pi))
    }

    pub fn ratio(r: Q) -> Result<Constant, ModelError> {
        if r <= Q::zero() {
            return Err(ModelError::BadConstant(format!("ratio {r} must be positive")));
        }
        Ok(Constant::Ratio(r))
    }

    pub fn length(l: Q) -> Result<Constant, ModelError> {
        if l <= Q::zero() {
            return Err(ModelError::BadConstant(format!("length {l} must be positive")));
        }
        Ok(Constant::Length(l))
    }

    pub fn slot(&self) -> ConstantSlot {
        match self {
            Constant::Angle(_) => ConstantSlot::Angle,
            Constant::Ratio(_) => ConstantSlot::Ratio,
            Constant::Length(_) => ConstantSlot::Length,
        }
    }

    pub fn value(&self) -> Q {
        match *self {
            Constant::Angle(q) | Constant::Ratio(q) | Constant::Length(q) => q,
        }
    }

    /// Parses the textual form expected for `slot`.
    ///
    /// Angles: `90o`, `pi/3`, `2pi/3`, `pi`. Ratios: `p/q` or a decimal.
    /// Lengths: integer, decimal, or `p/q`.
    pub fn parse(slot: ConstantSlot, text: &str) -> Result<Constant, ModelError> {
        let bad = || ModelError::BadConstant(text.to_string());
        match slot {
            ConstantSlot::None => Err(bad()),
            ConstantSlot::Angle => {
                if let Some(deg) = text.strip_suffix('o').or_else(|| text.strip_suffix('°')) {
                    let d = parse_rational(deg).ok_or_else(bad)?;
                    Ok(Constant::angle(d / Q::from_integer(180)))
                } else if let Some(idx) = text.find("pi") {
                    let (coef, rest) = text.split_at(idx);
                    let rest = &rest[2..];
                    let num = if coef.is_empty() {
                        Q::one()
                    } else {
                        parse_rational(coef.trim_end_matches('*')).ok_or_else(bad)?
                    };
                    let den = if rest.is_empty() {
                        Q::one()
                    } else {
                        let d = rest.strip_prefix('/').ok_or_else(bad)?;
                        parse_rational(d).ok_or_else(bad)?
                    };
                    if den.is_zero() {
                        return Err(bad());
                    }
                    Ok(Constant::angle(num / den))
                } else {
                    Err(bad())
                }
            }
            ConstantSlot::Ratio => Constant::ratio(parse_rational(text).ok_or_else(bad)?),
            ConstantSlot::Length => Constant::length(parse_rational(text).ok_or_else(bad)?),
        }
    }

    /// Value a numeric check compares against: radians, plain ratio, or length.
    pub fn as_f64(&self) -> f64 {
        let q = self.value();
        let v = *q.numer() as f64 / *q.denom() as f64;
        match self {
            Constant::Angle(_) => v * std::f64::consts::PI,
            _ => v,
        }
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Angle(q) => {
                let deg = *q * Q::from_integer(180);
                if deg.is_integer() {
                    write!(f, "{}o", deg.numer())
                } else if q.numer().is_one() {
                    write!(f, "pi/{}", q.denom())
                } else {
                    write!(f, "{}pi/{}", q.numer(), q.denom())
                }
            }
            Constant::Ratio(q) | Constant::Length(q) => write!(f, "{}", fmt_q(*q)),
        }
    }
}

pub fn fmt_q(q: Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn reduce_mod_one(q: Q) -> Q {
    let floor = q.numer().div_floor(q.denom());
    q - Q::from_integer(floor)
}

/// Parses `7`, `-3/4`, `2.25`, `1e-3` style numbers into an exact rational.
pub fn parse_rational(text: &str) -> Option<Q> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((n, d)) = text.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    if frac_part.len() > 17 {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: i64 = digits.parse().ok()?;
    let denom = 10i64.checked_pow(frac_part.len() as u32)?;
    let q = Q::new(numer, denom);
    Some(if neg { -q } else { q })
}

/// Exact square root of a non-negative rational, when it is rational.
pub fn rational_sqrt(q: Q) -> Option<Q> {
    if q.is_negative() {
        return None;
    }
    let n = isqrt(*q.numer())?;
    let d = isqrt(*q.denom())?;
    Some(Q::new(n, d))
}

fn isqrt(v: i64) -> Option<i64> {
    if v < 0 {
        return None;
    }
    let mut r = (v as f64).sqrt() as i64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    (r * r == v).then_some(r)
}

mod ratio_serde {
    use super::Q;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_rational(&text).ok_or_else(|| serde::de::Error::custom("bad rational"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_and_radians_agree() {
        let a = Constant::parse(ConstantSlot::Angle, "60o").unwrap();
        let b = Constant::parse(ConstantSlot::Angle, "pi/3").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, Constant::Angle(Q::new(1, 3)));
    }

    #[test]
    fn angle_reduced_mod_pi() {
        let a = Constant::parse(ConstantSlot::Angle, "270o").unwrap();
        assert_eq!(a, Constant::Angle(Q::new(1, 2)));
        let b = Constant::parse(ConstantSlot::Angle, "-30o").unwrap();
        assert_eq!(b, Constant::Angle(Q::new(5, 6)));
        let c = Constant::parse(ConstantSlot::Angle, "2pi/3").unwrap();
        assert_eq!(c, Constant::Angle(Q::new(2, 3)));
    }

    #[test]
    fn lengths_and_ratios() {
        assert_eq!(
            Constant::parse(ConstantSlot::Length, "2.5").unwrap(),
            Constant::Length(Q::new(5, 2))
        );
        assert_eq!(
            Constant::parse(ConstantSlot::Ratio, "2/4").unwrap(),
            Constant::Ratio(Q::new(1, 2))
        );
        assert!(Constant::parse(ConstantSlot::Length, "-1").is_err());
        assert!(Constant::parse(ConstantSlot::Ratio, "1/0").is_err());
    }

    #[test]
    fn display_round_trips() {
        for (slot, text) in [
            (ConstantSlot::Angle, "50o"),
            (ConstantSlot::Angle, "pi/7"),
            (ConstantSlot::Ratio, "3/5"),
            (ConstantSlot::Length, "5"),
        ] {
            let c = Constant::parse(slot, text).unwrap();
            assert_eq!(Constant::parse(slot, &c.to_string()).unwrap(), c);
        }
    }

    #[test]
    fn sqrt() {
        assert_eq!(rational_sqrt(Q::from_integer(25)), Some(Q::from_integer(5)));
        assert_eq!(rational_sqrt(Q::new(9, 4)), Some(Q::new(3, 2)));
        assert_eq!(rational_sqrt(Q::from_integer(2)), None);
    }
}
