//! Day-index to weekday mapping.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::temporal_graph::Day;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Weekday {
    Monday = 0,
    Tuesday = 1,
    Wednesday = 2,
    Thursday = 3,
    Friday = 4,
    Saturday = 5,
    Sunday = 6,
}

/// Weekday of day index 0 in the default dataset (2007-10-31).
pub const DEFAULT_ANCHOR: Weekday = Weekday::Wednesday;

impl Weekday {
    pub const ALL: [Weekday; 7] = [
        Weekday::Monday,
        Weekday::Tuesday,
        Weekday::Wednesday,
        Weekday::Thursday,
        Weekday::Friday,
        Weekday::Saturday,
        Weekday::Sunday,
    ];

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_weekend(self) -> bool {
        matches!(self, Weekday::Saturday | Weekday::Sunday)
    }

    pub fn short_name(self) -> &'static str {
        ["Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"][self.index()]
    }
}

impl fmt::Display for Weekday {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Weekday {
    type Err = Error;

    /// Accepts an index `0..=6` (Monday = 0) or an English day name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(i) = s.parse::<usize>() {
            return Self::from_index(i)
                .ok_or_else(|| Error::Config(format!("weekday index {i} not in 0..=6")));
        }
        let lower = s.to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|d| lower.len() >= 3 && d.short_name().to_ascii_lowercase() == lower[..3])
            .ok_or_else(|| Error::Config(format!("unknown weekday `{s}`")))
    }
}

pub fn day_of_week(t: Day, anchor: Weekday) -> Weekday {
    Weekday::ALL[(anchor.index() + (t % 7) as usize) % 7]
}

pub fn is_weekend(t: Day, anchor: Weekday) -> bool {
    day_of_week(t, anchor).is_weekend()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchor_and_offsets() {
        assert_eq!(day_of_week(0, DEFAULT_ANCHOR), Weekday::Wednesday);
        assert!(!is_weekend(0, DEFAULT_ANCHOR));
        assert_eq!(day_of_week(3, DEFAULT_ANCHOR), Weekday::Saturday);
        assert!(is_weekend(3, DEFAULT_ANCHOR));
        assert_eq!(day_of_week(4, DEFAULT_ANCHOR), Weekday::Sunday);
        assert_eq!(day_of_week(5, DEFAULT_ANCHOR), Weekday::Monday);
    }

    #[test]
    fn period_seven_bijection() {
        for start in 0..30u32 {
            let mut seen = [false; 7];
            for t in start..start + 7 {
                seen[day_of_week(t, Weekday::Friday).index()] = true;
                assert_eq!(is_weekend(t, Weekday::Friday), is_weekend(t + 7, Weekday::Friday));
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn parse() {
        assert_eq!("2".parse::<Weekday>().unwrap(), Weekday::Wednesday);
        assert_eq!("saturday".parse::<Weekday>().unwrap(), Weekday::Saturday);
        assert!("7".parse::<Weekday>().is_err());
    }
}
