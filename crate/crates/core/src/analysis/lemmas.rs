use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::reductions::bounds::a_prime;
use crate::regime::{classify_regime, RegimeTag};

/// One instantiated inequality `lhs REL rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub statement: &'static str,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub strict: bool,
    pub holds: bool,
}

impl fmt::Display for LemmaCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.strict { ">" } else { ">=" };
        write!(
            f,
            "{} {}: {}  [{} {rel} {}]",
            if self.holds { "pass" } else { "FAIL" },
            self.name,
            self.statement,
            self.lhs,
            self.rhs
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub values: [i64; 3],
    pub regime: RegimeTag,
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.values;
        writeln!(f, "values ({a}, {b}, {c}), regime {}", self.regime)?;
        for check in &self.checks {
            writeln!(f, "  {check}")?;
        }
        write!(f, "{}", if self.passed() { "all chains hold" } else { "some chains fail" })
    }
}

fn r(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

struct Builder(Vec<LemmaCheck>);

impl Builder {
    fn ge(&mut self, name: &'static str, statement: &'static str, lhs: BigRational, rhs: BigRational) {
        let holds = lhs >= rhs;
        self.0.push(LemmaCheck { name, statement, lhs, rhs, strict: false, holds });
    }

    fn gt(&mut self, name: &'static str, statement: &'static str, lhs: BigRational, rhs: BigRational) {
        let holds = lhs.cmp(&rhs) == Ordering::Greater;
        self.0.push(LemmaCheck { name, statement, lhs, rhs, strict: true, holds });
    }
}

/// Evaluates the exchange inequalities behind the structural properties of
/// the Nash welfare gadgets, in exact rationals, for the regime of
/// `(a, b, c)`. Only the SAT (`c <= 2b`) and vertex-cover (`2b < c`)
/// regimes of goods triples have chains.
pub fn check_transfer_lemmas(a: i64, b: i64, c: i64) -> Result<LemmaReport> {
    let regime = classify_regime(&[a, b, c])?.tag;
    let (ra, rb, rc) = (r(a), r(b), r(c));
    let mut out = Builder(Vec::new());
    match regime {
        RegimeTag::GoodsCase1 | RegimeTag::GoodsCase2 => {
            out.ge(
                "clog-keeps-one",
                "c/(c+b) >= c/(c+b): a literal agent holding its clog gives up any other item",
                &rc / (&rc + &rb),
                &rc / (&rc + &rb),
            );
            // A three-item bundle keeps at least 2/3 of its value; the
            // receiving dummy holds its c special and gets a literal worth b.
            out.ge(
                "bundle-cap-dummy",
                "2/3 >= c/(c+b): a third item moves to a dummy holding only its special (needs c <= 2b)",
                q(2, 3),
                &rc / (&rc + &rb),
            );
            out.ge(
                "bundle-cap-weak",
                "2/3 >= b/(c+b): the weaker form of the same exchange",
                q(2, 3),
                &rb / (&rc + &rb),
            );
            out.gt(
                "two-a-swap",
                "(b+a)(b+a) > (2a)(2b): swapping out one of two a-items",
                (&rb + &ra) * (&rb + &ra),
                r(4) * &ra * &rb,
            );
            out.gt(
                "sink-two-a",
                "(b+a)(2b) > (2a)(2b): a sink with two a-items takes its own literal",
                (&rb + &ra) * r(2) * &rb,
                r(4) * &ra * &rb,
            );
            out.gt(
                "sink-one-a",
                "(b+a)b > a(2b): a sink with one a-item takes its own literal",
                (&rb + &ra) * &rb,
                r(2) * &ra * &rb,
            );
            if regime == RegimeTag::GoodsCase1 {
                out.ge(
                    "b-beats-a",
                    "b/(a+b) >= c/(c+b): an a-item leaves a b-holder for a lone dummy (a <= b^2/c)",
                    &rb / (&ra + &rb),
                    &rc / (&rc + &rb),
                );
                out.ge(
                    "extras-to-dummies",
                    "(b+c)/c >= (b+a)/b: leftover literals go to dummies, not unsatisfied clauses",
                    (&rb + &rc) / &rc,
                    (&rb + &ra) / &rb,
                );
                out.gt(
                    "gap-loss",
                    "2bc > b(c+b): each unsatisfied clause costs a factor b(c+b)/(2bc) < 1",
                    r(2) * &rb * &rc,
                    &rb * (&rc + &rb),
                );
            } else {
                out.gt(
                    "dummy-holds-one",
                    "c/(b+c) > b/(a+b): a second item on a dummy moves to a lone agent (c > b^2/a)",
                    &rc / (&rb + &rc),
                    &rb / (&ra + &rb),
                );
                out.gt(
                    "extras-to-clauses",
                    "(b+a)/b > (b+c)/c: leftover literals go to unsatisfied clauses",
                    (&rb + &ra) / &rb,
                    (&rb + &rc) / &rc,
                );
                out.gt(
                    "gap-loss",
                    "2b > b+a: each unsatisfied clause costs a factor (b+a)/(2b) < 1",
                    r(2) * &rb,
                    &rb + &ra,
                );
            }
        }
        RegimeTag::GoodsVc => {
            let ap = a_prime(&ra, &rb, &rc);
            out.ge("a-prime-dominates", "a' >= a", ap.clone(), ra.clone());
            out.ge(
                "cover-keeps-one",
                "c/(b+c) >= 2b/(a'+2b): a cover holder gives up any extra item (c >= 2b^2/a')",
                &rc / (&rb + &rc),
                r(2) * &rb / (&ap + r(2) * &rb),
            );
            out.ge(
                "four-items",
                "3/4 >= 2b/(2b+a'): a fourth item moves to an agent with at most two (a' >= 2b/3)",
                q(3, 4),
                r(2) * &rb / (r(2) * &rb + &ap),
            );
            out.gt(
                "gap-loss",
                "3b > 2b+a': an uncovered edge costs a factor (2b+a')/(3b) < 1",
                r(3) * &rb,
                r(2) * &rb + &ap,
            );
            out.gt("cover-beats-two-edges", "c > 2b: a cover item is worth more than two edges", rc.clone(), r(2) * &rb);
        }
        other => {
            return Err(Error::WrongRegime(format!(
                "no transfer chains for ({a}, {b}, {c}) in regime {other}"
            )))
        }
    }
    Ok(LemmaReport { values: [a, b, c], regime, checks: out.0 })
}
