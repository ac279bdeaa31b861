//! Segment identifiers of the hexaface sphere and a fixed-size map keyed by them.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Quality rank of a representation: 1 is the highest, 4 the lowest.
pub type RepId = u8;

/// Number of representations in every tile's ladder.
pub const REP_COUNT: usize = 4;

/// One of the six hexaface segments.
///
/// The integer encoding is stable and doubles as the SRD `spatial_set_id`.
/// `M0` is centred on yaw 0 and `M1..M3` follow in increasing yaw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SegmentId {
    Top = 0,
    Bottom = 1,
    M0 = 2,
    M1 = 3,
    M2 = 4,
    M3 = 5,
}

impl SegmentId {
    pub const ALL: [SegmentId; 6] = [
        SegmentId::Top,
        SegmentId::Bottom,
        SegmentId::M0,
        SegmentId::M1,
        SegmentId::M2,
        SegmentId::M3,
    ];

    pub const MIDDLE: [SegmentId; 4] = [SegmentId::M0, SegmentId::M1, SegmentId::M2, SegmentId::M3];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// Middle segment covering yaw quarter `k` (0 = centred on yaw 0).
    pub fn middle(k: usize) -> Self {
        Self::MIDDLE[k % 4]
    }

    /// Position of a middle segment around the equator, `None` for caps.
    pub fn middle_index(self) -> Option<usize> {
        match self {
            SegmentId::Top | SegmentId::Bottom => None,
            s => Some(s.index() - 2),
        }
    }

    pub fn is_cap(self) -> bool {
        matches!(self, SegmentId::Top | SegmentId::Bottom)
    }

    /// Yaw neighbours of a middle segment (previous, next).
    pub fn yaw_neighbours(self) -> Option<(SegmentId, SegmentId)> {
        self.middle_index()
            .map(|k| (Self::middle(k + 3), Self::middle(k + 1)))
    }

    pub fn name(self) -> &'static str {
        match self {
            SegmentId::Top => "TOP",
            SegmentId::Bottom => "BOTTOM",
            SegmentId::M0 => "M0",
            SegmentId::M1 => "M1",
            SegmentId::M2 => "M2",
            SegmentId::M3 => "M3",
        }
    }
}

impl fmt::Display for SegmentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown segment {0:?}")]
pub struct UnknownSegment(pub String);

impl FromStr for SegmentId {
    type Err = UnknownSegment;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Ok(i) = t.parse::<usize>() {
            return Self::from_index(i).ok_or_else(|| UnknownSegment(s.to_owned()));
        }
        Self::ALL
            .into_iter()
            .find(|seg| seg.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| UnknownSegment(s.to_owned()))
    }
}

impl Serialize for SegmentId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for SegmentId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct SegVisitor;

        impl Visitor<'_> for SegVisitor {
            type Value = SegmentId;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a segment name (TOP, BOTTOM, M0..M3) or index 0..5")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<SegmentId, E> {
                SegmentId::from_index(v as usize)
                    .ok_or_else(|| E::custom(format!("segment index {v} out of range")))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<SegmentId, E> {
                if v < 0 {
                    return Err(E::custom(format!("segment index {v} out of range")));
                }
                self.visit_u64(v as u64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<SegmentId, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(SegVisitor)
    }
}

/// A value for each of the six segments, indexed by [`SegmentId`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PerSegment<T>(pub [T; 6]);

impl<T> PerSegment<T> {
    pub fn from_fn(mut f: impl FnMut(SegmentId) -> T) -> Self {
        PerSegment(std::array::from_fn(|i| f(SegmentId::ALL[i])))
    }

    pub fn iter(&self) -> impl Iterator<Item = (SegmentId, &T)> {
        SegmentId::ALL.into_iter().zip(self.0.iter())
    }

    pub fn map<U>(&self, mut f: impl FnMut(SegmentId, &T) -> U) -> PerSegment<U> {
        PerSegment::from_fn(|s| f(s, &self[s]))
    }
}

impl<T: Clone> PerSegment<T> {
    pub fn splat(v: T) -> Self {
        PerSegment::from_fn(|_| v.clone())
    }
}

impl<T> Index<SegmentId> for PerSegment<T> {
    type Output = T;

    fn index(&self, s: SegmentId) -> &T {
        &self.0[s.index()]
    }
}

impl<T> IndexMut<SegmentId> for PerSegment<T> {
    fn index_mut(&mut self, s: SegmentId) -> &mut T {
        &mut self.0[s.index()]
    }
}

impl<T: Serialize> Serialize for PerSegment<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(6))?;
        for (s, v) in self.iter() {
            map.serialize_entry(s.name(), v)?;
        }
        map.end()
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for PerSegment<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let entries = std::collections::BTreeMap::<SegmentId, T>::deserialize(deserializer)?;
        let mut slots: [Option<T>; 6] = Default::default();
        for (s, v) in entries {
            slots[s.index()] = Some(v);
        }
        let mut out = Vec::with_capacity(6);
        for (i, slot) in slots.into_iter().enumerate() {
            match slot {
                Some(v) => out.push(v),
                None => {
                    return Err(de::Error::custom(format!(
                        "missing segment {}",
                        SegmentId::ALL[i]
                    )))
                }
            }
        }
        let arr: [T; 6] = out.try_into().ok().expect("six entries");
        Ok(PerSegment(arr))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_encoding() {
        let codes: Vec<usize> = SegmentId::ALL.iter().map(|s| s.index()).collect();
        assert_eq!(codes, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(SegmentId::Top as u8, 0);
        assert_eq!(SegmentId::M3 as u8, 5);
    }

    #[test]
    fn neighbours_wrap() {
        assert_eq!(SegmentId::M0.yaw_neighbours(), Some((SegmentId::M3, SegmentId::M1)));
        assert_eq!(SegmentId::M3.yaw_neighbours(), Some((SegmentId::M2, SegmentId::M0)));
        assert_eq!(SegmentId::Top.yaw_neighbours(), None);
    }

    #[test]
    fn parse_names_and_indices() {
        assert_eq!("m1".parse::<SegmentId>().unwrap(), SegmentId::M1);
        assert_eq!("0".parse::<SegmentId>().unwrap(), SegmentId::Top);
        assert!("6".parse::<SegmentId>().is_err());
        let s: SegmentId = serde_json::from_str("4").unwrap();
        assert_eq!(s, SegmentId::M2);
        let s: SegmentId = serde_json::from_str("\"BOTTOM\"").unwrap();
        assert_eq!(s, SegmentId::Bottom);
    }

    #[test]
    fn per_segment_json() {
        let p = PerSegment::from_fn(|s| s.index() as u8 + 1);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"TOP":1,"BOTTOM":2,"M0":3,"M1":4,"M2":5,"M3":6}"#);
        let back: PerSegment<u8> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<PerSegment<u8>>(r#"{"TOP":1}"#).is_err());
    }
}
