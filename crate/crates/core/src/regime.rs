//! Classification of a value set into the parameter region that selects a
//! gadget (or a known tractable / prior-work case).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::ValueSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeTag {
    /// `0 <= a < b < c`, `c <= 2b`, `b^2 >= ca`.
    GoodsCase1,
    /// `0 <= a < b < c`, `c <= 2b`, `b^2 < ca`.
    GoodsCase2,
    /// `0 <= a < b < c`, `2b < c`.
    GoodsVc,
    /// Two values `{3, c}` with `c > 3`, `3 ∤ c`.
    GoodsVc3c,
    /// Two values `{a, c}` with `a < 0 < c`, `|a| > |c|`.
    MixedLargeNegative,
    /// `a < b < 0 < c`.
    TwoNegative,
    /// `{-1, 0, c}`, `{-1, c}`, and two-valued goods with the smaller value in `{0, 1, 2}`.
    TractablePriorWork,
    /// Every value is `<= 0`.
    ChoresPriorWork,
    Unclassified,
}

impl RegimeTag {
    pub const ALL: [RegimeTag; 9] = [
        RegimeTag::GoodsCase1,
        RegimeTag::GoodsCase2,
        RegimeTag::GoodsVc,
        RegimeTag::GoodsVc3c,
        RegimeTag::MixedLargeNegative,
        RegimeTag::TwoNegative,
        RegimeTag::TractablePriorWork,
        RegimeTag::ChoresPriorWork,
        RegimeTag::Unclassified,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegimeTag::GoodsCase1 => "GoodsCase1",
            RegimeTag::GoodsCase2 => "GoodsCase2",
            RegimeTag::GoodsVc => "GoodsVC",
            RegimeTag::GoodsVc3c => "GoodsVC3c",
            RegimeTag::MixedLargeNegative => "MixedLargeNegative",
            RegimeTag::TwoNegative => "TwoNegative",
            RegimeTag::TractablePriorWork => "TractablePriorWork",
            RegimeTag::ChoresPriorWork => "ChoresPriorWork",
            RegimeTag::Unclassified => "Unclassified",
        }
    }

    pub fn is_goods_triple(self) -> bool {
        matches!(self, RegimeTag::GoodsCase1 | RegimeTag::GoodsCase2 | RegimeTag::GoodsVc)
    }
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RegimeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RegimeTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown regime '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regime {
    pub tag: RegimeTag,
    pub values: Vec<i64>,
    /// `b^2 >= ca` for non-negative triples; `None` otherwise.
    pub b_squared_ge_ca: Option<bool>,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:?}", self.tag, self.values)?;
        if let Some(p) = self.b_squared_ge_ca {
            write!(f, " (b^2 {} ca)", if p { ">=" } else { "<" })?;
        }
        Ok(())
    }
}

pub fn classify_regime(values: &[i64]) -> Result<Regime> {
    let vs = ValueSet::new(values)?;
    let v = vs.values();
    let (tag, b_sq) = match *v {
        [a, b, c] => classify_triple(a, b, c),
        [a, c] => (classify_pair(a, c), None),
        _ => unreachable!("ValueSet holds 2 or 3 values"),
    };
    Ok(Regime { tag, values: v.to_vec(), b_squared_ge_ca: b_sq })
}

fn classify_triple(a: i64, b: i64, c: i64) -> (RegimeTag, Option<bool>) {
    if a >= 0 {
        let (a, b, c) = (a as i128, b as i128, c as i128);
        let b_sq = b * b >= c * a;
        let tag = if c > 2 * b {
            RegimeTag::GoodsVc
        } else if b_sq {
            RegimeTag::GoodsCase1
        } else {
            RegimeTag::GoodsCase2
        };
        return (tag, Some(b_sq));
    }
    let tag = if c <= 0 {
        RegimeTag::ChoresPriorWork
    } else if b < 0 {
        RegimeTag::TwoNegative
    } else if b == 0 && a == -1 {
        RegimeTag::TractablePriorWork
    } else {
        RegimeTag::Unclassified
    };
    (tag, None)
}

fn classify_pair(a: i64, c: i64) -> RegimeTag {
    if a >= 0 {
        match a {
            0..=2 => RegimeTag::TractablePriorWork,
            3 if c % 3 != 0 => RegimeTag::GoodsVc3c,
            _ => RegimeTag::Unclassified,
        }
    } else if c <= 0 {
        RegimeTag::ChoresPriorWork
    } else if a.unsigned_abs() > c.unsigned_abs() {
        RegimeTag::MixedLargeNegative
    } else if a == -1 {
        RegimeTag::TractablePriorWork
    } else {
        RegimeTag::Unclassified
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn goods_cases() {
        let r = classify_regime(&[0, 1, 2]).unwrap();
        assert_eq!(r.tag, RegimeTag::GoodsCase1);
        assert_eq!(r.b_squared_ge_ca, Some(true));
        assert_eq!(classify_regime(&[0, 1, 3]).unwrap().tag, RegimeTag::GoodsVc);
        // b^2 = 9 < ca = 10
        assert_eq!(classify_regime(&[2, 3, 5]).unwrap().tag, RegimeTag::GoodsCase2);
        assert_eq!(classify_regime(&[1, 2, 3]).unwrap().tag, RegimeTag::GoodsCase1);
        // c = 2b boundary stays in the c <= 2b family
        assert_eq!(classify_regime(&[1, 2, 4]).unwrap().tag, RegimeTag::GoodsCase1);
    }

    #[test]
    fn mixed_and_prior_work() {
        assert_eq!(classify_regime(&[-1, 0, 2]).unwrap().tag, RegimeTag::TractablePriorWork);
        assert_eq!(classify_regime(&[-2, -1, 2]).unwrap().tag, RegimeTag::TwoNegative);
        assert_eq!(classify_regime(&[-2, 1]).unwrap().tag, RegimeTag::MixedLargeNegative);
        assert_eq!(classify_regime(&[-2, -1, 0]).unwrap().tag, RegimeTag::ChoresPriorWork);
        assert_eq!(classify_regime(&[-2, 0, 3]).unwrap().tag, RegimeTag::Unclassified);
        assert_eq!(classify_regime(&[3, 4]).unwrap().tag, RegimeTag::GoodsVc3c);
        assert_eq!(classify_regime(&[3, 6]).unwrap().tag, RegimeTag::Unclassified);
        assert_eq!(classify_regime(&[1, 5]).unwrap().tag, RegimeTag::TractablePriorWork);
    }

    #[test]
    fn rejects_non_increasing() {
        assert!(matches!(classify_regime(&[2, 1, 0]), Err(Error::InvalidValueSet(_))));
        assert!(matches!(classify_regime(&[1, 1, 2]), Err(Error::InvalidValueSet(_))));
    }

    #[test]
    fn tag_names_round_trip() {
        for tag in RegimeTag::ALL {
            assert_eq!(tag.name().parse::<RegimeTag>().unwrap(), tag);
        }
    }
}
