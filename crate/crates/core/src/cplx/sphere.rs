use crate::Complex64;
use serde::de::{self, Deserializer, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A point of the Riemann sphere `C ∪ {∞}`.
///
/// There is a single point at infinity; signed or directional infinities
/// do not exist here. Finite points always carry finite coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub fn finite(re: f64, im: f64) -> Self {
        SpherePoint::Finite(Complex64::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    /// The finite coordinate, if any.
    pub fn as_finite(&self) -> Option<Complex64> {
        match self {
            SpherePoint::Finite(z) => Some(*z),
            SpherePoint::Infinity => None,
        }
    }

    /// Distance classification helper: true when the point equals `z`
    /// within `tol` (infinity never matches a finite point).
    pub fn is_near(&self, z: Complex64, tol: f64) -> bool {
        match self {
            SpherePoint::Finite(w) => (w - z).norm() <= tol,
            SpherePoint::Infinity => false,
        }
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::Finite(z)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Finite(z) => write!(f, "{}+{}i", z.re, z.im),
            SpherePoint::Infinity => write!(f, "inf"),
        }
    }
}

// Wire format: finite values as [re, im]; the string "inf" for ∞.
impl Serialize for SpherePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            SpherePoint::Finite(z) => {
                let mut seq = serializer.serialize_seq(Some(2))?;
                seq.serialize_element(&z.re)?;
                seq.serialize_element(&z.im)?;
                seq.end()
            }
            SpherePoint::Infinity => serializer.serialize_str("inf"),
        }
    }
}

struct SpherePointVisitor;

impl<'de> Visitor<'de> for SpherePointVisitor {
    type Value = SpherePoint;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a [re, im] pair or the string \"inf\"")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<SpherePoint, E> {
        if v == "inf" {
            Ok(SpherePoint::Infinity)
        } else {
            Err(E::custom(format!("unknown sphere point token: {v:?}")))
        }
    }

    fn visit_seq<A: de::SeqAccess<'de>>(self, mut seq: A) -> Result<SpherePoint, A::Error> {
        let re: f64 = seq
            .next_element()?
            .ok_or_else(|| de::Error::invalid_length(0, &self))?;
        let im: f64 = seq
            .next_element()?
            .ok_or_else(|| de::Error::invalid_length(1, &self))?;
        Ok(SpherePoint::finite(re, im))
    }
}

impl<'de> Deserialize<'de> for SpherePoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(SpherePointVisitor)
    }
}
