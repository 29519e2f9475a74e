//! Exact money arithmetic in integer micro-dollars.
//!
//! Billing formulas multiply integer period counts by per-period rates, so
//! keeping money in micro-dollars makes lease costs exact and makes test
//! comparisons plain integer equality. The only rounding point is
//! [`Money::per_gb`], where a fractional GB volume meets a per-GB rate;
//! that product is rounded half away from zero to the nearest micro-dollar.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};

use serde::{Deserialize, Serialize};

const MICROS_PER_DOLLAR: i64 = 1_000_000;

/// A dollar amount held as an exact count of micro-dollars.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Money(i64);

impl Money {
    pub const ZERO: Money = Money(0);

    pub fn from_micros(micros: i64) -> Money {
        Money(micros)
    }

    /// Converts a decimal dollar amount, rounding to the nearest micro-dollar.
    /// All catalog rates have at most four decimal places, so they convert
    /// without loss.
    pub fn from_dollars(dollars: f64) -> Money {
        Money((dollars * MICROS_PER_DOLLAR as f64).round() as i64)
    }

    pub fn micros(self) -> i64 {
        self.0
    }

    pub fn to_dollars(self) -> f64 {
        self.0 as f64 / MICROS_PER_DOLLAR as f64
    }

    /// Price for `volume_gb` at `self` dollars per GB, rounded to the nearest
    /// micro-dollar (half away from zero).
    pub fn per_gb(self, volume_gb: f64) -> Money {
        Money((self.0 as f64 * volume_gb).round() as i64)
    }

    /// Price for `periods` billing periods at `self` per period.
    pub fn per_periods(self, periods: u64) -> Money {
        Money(self.0 * periods as i64)
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, Add::add)
    }
}

/// Canonical decimal rendering: sign, integer dollars, then up to six
/// fractional digits with trailing zeros trimmed (`1500` micros -> `0.0015`,
/// whole dollars render with no fraction). Used verbatim in schedule files
/// and CSV output.
impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let whole = abs / MICROS_PER_DOLLAR as u64;
        let frac = abs % MICROS_PER_DOLLAR as u64;
        if frac == 0 {
            return write!(f, "{sign}{whole}");
        }
        let digits = format!("{frac:06}");
        write!(f, "{sign}{whole}.{}", digits.trim_end_matches('0'))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dollars_round_trip_for_catalog_rates() {
        for rate in [0.0015, 0.003, 0.006, 0.012, 0.06, 0.45, 0.014, 0.0093] {
            let m = Money::from_dollars(rate);
            assert_eq!(m.to_dollars(), rate);
        }
    }

    #[test]
    fn display_is_trimmed_decimal() {
        assert_eq!(Money::from_dollars(0.0015).to_string(), "0.0015");
        assert_eq!(Money::from_dollars(0.003).to_string(), "0.003");
        assert_eq!(Money::from_dollars(12.0).to_string(), "12");
        assert_eq!(Money::ZERO.to_string(), "0");
        assert_eq!(Money::from_micros(-1500).to_string(), "-0.0015");
        assert_eq!(Money::from_dollars(368.64).to_string(), "368.64");
    }

    #[test]
    fn per_gb_is_exact_on_integral_volumes() {
        assert_eq!(Money::from_dollars(0.08).per_gb(10.0), Money::from_dollars(0.8));
        assert_eq!(
            Money::from_dollars(0.18).per_gb(2048.0),
            Money::from_dollars(368.64)
        );
    }
}
