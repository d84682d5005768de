use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Serialize, Serializer};

/// Total degree of a polynomial or bracket, with a sentinel for zero.
///
/// `NegInfinity` orders below every finite degree and absorbs addition,
/// matching the convention `deg 0 = -inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(i64),
}

impl Degree {
    pub fn finite(self) -> Option<i64> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }

    pub fn is_neg_infinity(self) -> bool {
        matches!(self, Degree::NegInfinity)
    }
}

impl From<i64> for Degree {
    fn from(d: i64) -> Self {
        Degree::Finite(d)
    }
}

impl PartialOrd for Degree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Degree {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Degree::NegInfinity, Degree::NegInfinity) => Ordering::Equal,
            (Degree::NegInfinity, _) => Ordering::Less,
            (_, Degree::NegInfinity) => Ordering::Greater,
            (Degree::Finite(a), Degree::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for Degree {
    type Output = Degree;

    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInfinity,
        }
    }
}

impl Add<i64> for Degree {
    type Output = Degree;

    fn add(self, rhs: i64) -> Degree {
        self + Degree::Finite(rhs)
    }
}

impl PartialEq<i64> for Degree {
    fn eq(&self, other: &i64) -> bool {
        *self == Degree::Finite(*other)
    }
}

impl PartialOrd<i64> for Degree {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Degree::Finite(*other)))
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Serialized as an integer, or `null` for the zero polynomial.
impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Degree::NegInfinity => serializer.serialize_none(),
            Degree::Finite(d) => serializer.serialize_i64(*d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neg_infinity_is_below_everything() {
        assert!(Degree::NegInfinity < Degree::Finite(i64::MIN));
        assert!(Degree::NegInfinity < 0);
        assert_eq!(
            Degree::Finite(3).max(Degree::NegInfinity),
            Degree::Finite(3)
        );
    }

    #[test]
    fn neg_infinity_absorbs_addition() {
        assert_eq!(Degree::NegInfinity + 2, Degree::NegInfinity);
        assert_eq!(Degree::Finite(5) + Degree::NegInfinity, Degree::NegInfinity);
        assert_eq!(Degree::Finite(5) + 2, Degree::Finite(7));
    }
}
