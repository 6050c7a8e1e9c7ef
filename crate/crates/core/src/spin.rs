use std::fmt;

/// State of a single agent: selling, inactive or buying.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[repr(i8)]
pub enum Spin {
    Down = -1,
    #[default]
    Zero = 0,
    Up = 1,
}

impl Spin {
    pub const ALL: [Spin; 3] = [Spin::Down, Spin::Zero, Spin::Up];

    #[inline]
    pub fn value(self) -> i32 {
        self as i8 as i32
    }

    /// Maps the sign of an integer onto a spin.
    #[inline]
    pub fn from_sign(v: i64) -> Spin {
        match v.signum() {
            1 => Spin::Up,
            -1 => Spin::Down,
            _ => Spin::Zero,
        }
    }
}

impl std::ops::Neg for Spin {
    type Output = Spin;

    #[inline]
    fn neg(self) -> Spin {
        match self {
            Spin::Down => Spin::Up,
            Spin::Zero => Spin::Zero,
            Spin::Up => Spin::Down,
        }
    }
}

impl TryFrom<i64> for Spin {
    type Error = i64;

    fn try_from(v: i64) -> Result<Self, i64> {
        match v {
            -1 => Ok(Spin::Down),
            0 => Ok(Spin::Zero),
            1 => Ok(Spin::Up),
            other => Err(other),
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.value())
    }
}
