//! Angle newtype. Stored in radians (binary64); degree conversions live at
//! the boundaries, since reports and inputs are human-facing in degrees.

use std::fmt;
use std::ops::{Add, Sub};

/// An angle in radians.
///
/// Link distances produced by this crate always lie in `[0, π]`; construction
/// itself only requires finiteness so that intermediate arithmetic (sums of
/// cycle lengths, degree inputs) can pass through.
#[derive(Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Angle {
    rad: f64,
}

impl Angle {
    pub const ZERO: Angle = Angle { rad: 0.0 };
    pub const PI: Angle = Angle {
        rad: std::f64::consts::PI,
    };
    pub const HALF_PI: Angle = Angle {
        rad: std::f64::consts::FRAC_PI_2,
    };
    pub const QUARTER_PI: Angle = Angle {
        rad: std::f64::consts::FRAC_PI_4,
    };

    pub fn from_radians(rad: f64) -> Angle {
        debug_assert!(rad.is_finite(), "angle must be finite");
        Angle { rad }
    }

    pub fn from_degrees(deg: f64) -> Angle {
        Angle::from_radians(deg.to_radians())
    }

    pub fn rad(self) -> f64 {
        self.rad
    }

    pub fn deg(self) -> f64 {
        self.rad.to_degrees()
    }

    pub fn cos(self) -> f64 {
        self.rad.cos()
    }

    pub fn sin(self) -> f64 {
        self.rad.sin()
    }

    /// Arccosine with the argument clamped into `[-1, 1]`, absorbing last-bit
    /// rounding of arguments that analytically lie in range.
    pub fn acos_clamped(cosine: f64) -> Angle {
        Angle::from_radians(cosine.clamp(-1.0, 1.0).acos())
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle::from_radians(self.rad + rhs.rad)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle::from_radians(self.rad - rhs.rad)
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}°", self.deg())
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(prec) = f.precision() {
            write!(f, "{:.*}°", prec, self.deg())
        } else {
            write!(f, "{}°", self.deg())
        }
    }
}
