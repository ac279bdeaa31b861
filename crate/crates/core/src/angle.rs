//! Degree helpers and wrap-aware yaw arcs.

use crate::scalar::Scalar;

/// Wraps a yaw angle into `[-180, 180)`.
pub fn normalize_yaw<T: Scalar>(deg: T) -> T {
    let full = T::lit(360.0);
    let half = T::lit(180.0);
    let mut y = (deg + half) % full;
    if y < T::zero() {
        y = y + full;
    }
    // (x % 360) + 360 can round up to exactly 360 for tiny negative x.
    if y >= full {
        y = y - full;
    }
    y - half
}

/// Wraps an angle into `[0, 360)`.
pub fn wrap_360<T: Scalar>(deg: T) -> T {
    normalize_yaw(deg - T::lit(180.0)) + T::lit(180.0)
}

/// A half-open arc of yaw `[start, start + len)` on the circle, `0 < len <= 360`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YawArc<T> {
    start: T,
    len: T,
}

impl<T: Scalar> YawArc<T> {
    pub fn new(start: T, len: T) -> Self {
        let full = T::lit(360.0);
        Self {
            start: wrap_360(start),
            len: len.max(T::zero()).min(full),
        }
    }

    /// Arc centred on `centre` with total width `width`.
    pub fn centred(centre: T, width: T) -> Self {
        Self::new(centre - width / T::lit(2.0), width)
    }

    pub fn full() -> Self {
        Self::new(T::zero(), T::lit(360.0))
    }

    pub fn start(&self) -> T {
        self.start
    }

    pub fn len(&self) -> T {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len <= T::zero()
    }

    /// Length of the intersection with `other`, in degrees.
    pub fn overlap(&self, other: &YawArc<T>) -> T {
        let full = T::lit(360.0);
        let a0 = self.start;
        let a1 = a0 + self.len;
        let mut total = T::zero();
        for k in [-1.0, 0.0, 1.0] {
            let b0 = other.start + T::lit(k) * full;
            let b1 = b0 + other.len;
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if hi > lo {
                total = total + (hi - lo);
            }
        }
        total.min(self.len).min(other.len)
    }

    pub fn contains(&self, yaw: T) -> bool {
        let d = wrap_360(yaw - self.start);
        d < self.len || self.len >= T::lit(360.0)
    }
}

/// Length of `[a0, a1] ∩ [b0, b1]`, zero when disjoint.
pub fn interval_overlap<T: Scalar>(a0: T, a1: T, b0: T, b1: T) -> T {
    (a1.min(b1) - a0.max(b0)).max(T::zero())
}
