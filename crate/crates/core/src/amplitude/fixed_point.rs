/// Fractional bits of the function register.
pub const FRACTIONAL_BITS: u32 = 16;
/// Total width: sign, one integer bit, fraction. Range `[-2, 2)`.
pub const REGISTER_BITS: u32 = FRACTIONAL_BITS + 2;

const SCALE: f64 = (1u32 << FRACTIONAL_BITS) as f64;
const MIN_CODE: i64 = -(1i64 << (REGISTER_BITS - 1));
const MAX_CODE: i64 = (1i64 << (REGISTER_BITS - 1)) - 1;

/// Signed fixed-point value held in the function register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FixedPoint {
    /// Two's-complement bit pattern, `REGISTER_BITS` wide.
    pub code: u32,
    /// Set when the input was out of range (or NaN) and got clamped.
    pub saturated: bool,
}

impl FixedPoint {
    /// Rounds to the nearest representable value, saturating at the ends.
    pub fn encode(x: f64) -> Self {
        if x.is_nan() {
            return Self {
                code: 0,
                saturated: true,
            };
        }
        let raw = (x * SCALE).round();
        let clamped = raw.clamp(MIN_CODE as f64, MAX_CODE as f64) as i64;
        let mask = (1i64 << REGISTER_BITS) - 1;
        Self {
            code: (clamped & mask) as u32,
            saturated: raw != clamped as f64,
        }
    }

    pub fn decode(self) -> f64 {
        Self::decode_code(self.code)
    }

    pub fn decode_code(code: u32) -> f64 {
        let signed = if code as i64 > MAX_CODE {
            code as i64 - (1i64 << REGISTER_BITS)
        } else {
            code as i64
        };
        signed as f64 / SCALE
    }

    pub fn resolution() -> f64 {
        1.0 / SCALE
    }
}
