//! Gap certificates: the YES value and NO bound of each reduction and the
//! inapproximability ratio they imply, kept as exact rational powers.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::regime::{classify_regime, RegimeTag};
use crate::welfare::{ln_biguint, NashScore, Objective};

/// The gap constant for vertex cover on 3-regular graphs: a NO instance has
/// no `k` vertices covering more than `(1 - GAMMA)` of the edges.
pub fn gamma() -> BigRational {
    rat(1, 297)
}

/// Exclusive upper end of the admissible epsilon range.
pub fn epsilon_limit() -> BigRational {
    rat(1, 2032)
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A product of positive rational bases raised to rational exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerExpr {
    factors: Vec<(BigRational, BigRational)>,
}

impl PowerExpr {
    pub fn one() -> Self {
        PowerExpr { factors: Vec::new() }
    }

    pub fn int(v: i64) -> Self {
        PowerExpr::one().times(int(v), BigRational::one())
    }

    /// Appends `base^exp`; `base` must be positive. Equal bases are merged;
    /// zero exponents and unit bases are dropped.
    pub fn times(mut self, base: BigRational, exp: BigRational) -> Self {
        assert!(base.is_positive(), "power bases must be positive");
        if exp.is_zero() || base.is_one() {
            return self;
        }
        match self.factors.iter().position(|(b, _)| *b == base) {
            Some(i) => {
                self.factors[i].1 += exp;
                if self.factors[i].1.is_zero() {
                    self.factors.remove(i);
                }
            }
            None => self.factors.push((base, exp)),
        }
        self
    }

    /// Product of two expressions; factors with equal bases are merged.
    pub fn mul(self, other: &PowerExpr) -> Self {
        let mut out = PowerExpr::one();
        for (b, e) in self.factors.into_iter().chain(other.factors.iter().cloned()) {
            match out.factors.iter().position(|(ob, _)| *ob == b) {
                Some(i) => out.factors[i].1 += e,
                None => out.factors.push((b, e)),
            }
        }
        out.factors.retain(|(_, e)| !e.is_zero());
        out
    }

    pub fn factors(&self) -> &[(BigRational, BigRational)] {
        &self.factors
    }

    pub fn ln(&self) -> f64 {
        self.factors.iter().map(|(b, e)| ln_rational(b) * e.to_f64().unwrap_or(f64::NAN)).sum()
    }

    pub fn approx(&self) -> f64 {
        self.ln().exp()
    }

    /// `self^p` as an exact rational when every scaled exponent is an integer.
    pub fn pow_exact(&self, p: i64) -> Option<BigRational> {
        let mut out = BigRational::one();
        for (b, e) in &self.factors {
            let scaled = e * int(p);
            if !scaled.is_integer() {
                return None;
            }
            let k = scaled.to_integer().to_i64()?;
            out *= pow_rational(b, k);
        }
        Some(out)
    }

    /// Compares the geometric mean of a Nash score with this expression.
    /// `None` when the exact comparison is unavailable and the float values
    /// are too close to call.
    pub fn cmp_geometric_mean(&self, score: &NashScore) -> Option<Ordering> {
        if score.zero_count() > 0 {
            return Some(Ordering::Less);
        }
        let agents = score.agents() as i64;
        if let Some(target) = self.pow_exact(agents) {
            let product = BigRational::from_integer(BigInt::from(score.product().clone()));
            return Some(product.cmp(&target));
        }
        let lhs = score.ln_product() / agents as f64;
        let rhs = self.ln();
        let margin = 1e-9 * lhs.abs().max(rhs.abs()).max(1.0);
        if lhs > rhs + margin {
            Some(Ordering::Greater)
        } else if lhs < rhs - margin {
            Some(Ordering::Less)
        } else {
            None
        }
    }
}

impl fmt::Display for PowerExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (idx, (b, e)) in self.factors.iter().enumerate() {
            if idx > 0 {
                f.write_str(" * ")?;
            }
            if b.is_integer() {
                write!(f, "{b}")?;
            } else {
                write!(f, "({b})")?;
            }
            if !e.is_one() {
                write!(f, "^({e})")?;
            }
        }
        Ok(())
    }
}

fn ln_rational(r: &BigRational) -> f64 {
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    ln_biguint(n) - ln_biguint(d)
}

fn pow_rational(b: &BigRational, k: i64) -> BigRational {
    let e = k.unsigned_abs() as u32;
    let p = BigRational::new(num_traits::pow(b.numer().clone(), e as usize), num_traits::pow(b.denom().clone(), e as usize));
    if k < 0 {
        p.recip()
    } else {
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertValue {
    /// A geometric-mean (Nash welfare) value.
    Nash(PowerExpr),
    /// An egalitarian welfare threshold.
    Egalitarian(i64),
}

impl CertValue {
    pub fn approx(&self) -> f64 {
        match self {
            CertValue::Nash(p) => p.approx(),
            CertValue::Egalitarian(v) => *v as f64,
        }
    }
}

impl fmt::Display for CertValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertValue::Nash(p) => write!(f, "{p} ~ {:.10}", p.approx()),
            CertValue::Egalitarian(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    SatCase1,
    SatCase2,
    Vc,
    VcCorollary,
    Vc3c,
    MewGoods,
    MewMixed,
    MewTwoNegative,
    MewRx3c,
}

impl BoundKind {
    pub const ALL: [BoundKind; 9] = [
        BoundKind::SatCase1,
        BoundKind::SatCase2,
        BoundKind::Vc,
        BoundKind::VcCorollary,
        BoundKind::Vc3c,
        BoundKind::MewGoods,
        BoundKind::MewMixed,
        BoundKind::MewTwoNegative,
        BoundKind::MewRx3c,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::SatCase1 => "sat-case1",
            BoundKind::SatCase2 => "sat-case2",
            BoundKind::Vc => "vc",
            BoundKind::VcCorollary => "vc-corollary",
            BoundKind::Vc3c => "vc-3c",
            BoundKind::MewGoods => "mew-goods",
            BoundKind::MewMixed => "mew-mixed",
            BoundKind::MewTwoNegative => "mew-two-negative",
            BoundKind::MewRx3c => "mew-rx3c",
        }
    }

    pub fn objective(self) -> Objective {
        match self {
            BoundKind::SatCase1 | BoundKind::SatCase2 | BoundKind::Vc | BoundKind::VcCorollary | BoundKind::Vc3c => {
                Objective::Nsw
            }
            _ => Objective::Mew,
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown bound kind '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapCertificate {
    pub kind: BoundKind,
    pub objective: Objective,
    pub regime: RegimeTag,
    pub values: Vec<i64>,
    pub yes_value: CertValue,
    pub no_bound: CertValue,
    /// The closed-form inapproximability ratio, when the objective values
    /// are positive.
    pub ratio: Option<PowerExpr>,
    pub epsilon: BigRational,
    /// `(|V|, k)` for the vertex-cover kinds.
    pub graph: Option<(usize, usize)>,
}

impl GapCertificate {
    /// Whether `yes_value` exceeds `no_bound`.
    pub fn is_consistent(&self) -> bool {
        match (&self.yes_value, &self.no_bound) {
            (CertValue::Egalitarian(y), CertValue::Egalitarian(n)) => y > n,
            (CertValue::Nash(y), CertValue::Nash(n)) => {
                let diff = y.clone().mul(&invert(n));
                diff.factors().iter().all(|(b, e)| (b > &BigRational::one()) == e.is_positive()) && !diff.factors().is_empty()
            }
            _ => false,
        }
    }
}

fn invert(p: &PowerExpr) -> PowerExpr {
    p.factors().iter().fold(PowerExpr::one(), |acc, (b, e)| acc.times(b.clone(), -e.clone()))
}

/// Size and slack parameters for [`compute_bounds`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundParams {
    pub values: Vec<i64>,
    pub epsilon: BigRational,
    pub vertices: usize,
    pub k: Option<usize>,
}

impl BoundParams {
    pub fn new(values: &[i64]) -> Self {
        BoundParams { values: values.to_vec(), epsilon: BigRational::zero(), vertices: 6, k: None }
    }

    pub fn with_epsilon(mut self, epsilon: BigRational) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_graph(mut self, vertices: usize, k: usize) -> Self {
        self.vertices = vertices;
        self.k = Some(k);
        self
    }
}

pub fn compute_bounds(kind: BoundKind, params: &BoundParams) -> Result<GapCertificate> {
    let regime = classify_regime(&params.values)?;
    let eps = params.epsilon.clone();
    if eps.is_negative() || eps >= epsilon_limit() {
        return Err(Error::InvalidInput(format!("epsilon {eps} outside [0, 1/2032)")));
    }
    let wrong = || {
        Err(Error::WrongRegime(format!(
            "{kind} does not apply to {:?} ({})",
            params.values, regime.tag
        )))
    };
    let v = &params.values;
    let graph = match kind {
        BoundKind::Vc | BoundKind::VcCorollary | BoundKind::Vc3c => Some(graph_params(params, kind)?),
        _ => None,
    };
    let cert = |yes, no, ratio| GapCertificate {
        kind,
        objective: kind.objective(),
        regime: regime.tag,
        values: v.clone(),
        yes_value: yes,
        no_bound: no,
        ratio,
        epsilon: eps.clone(),
        graph,
    };
    match kind {
        BoundKind::SatCase1 | BoundKind::SatCase2 => {
            let expected = if kind == BoundKind::SatCase1 { RegimeTag::GoodsCase1 } else { RegimeTag::GoodsCase2 };
            if regime.tag != expected {
                return wrong();
            }
            let (a, b, c) = (int(v[0]), int(v[1]), int(v[2]));
            let two_b = int(2) * &b;
            // per-unsatisfied-clause loss factor, below 1
            let loss = if kind == BoundKind::SatCase1 {
                (&b * (&c + &b)) / (&two_b * &c)
            } else {
                (&b + &a) / two_b.clone()
            };
            let base = PowerExpr::one().times(two_b, rat(3, 8)).times(c, rat(5, 8));
            // m = 4n/3 clauses over 8n agents: exponent (fraction of m) / 6
            let yes = base.clone().times(loss.clone(), &eps / int(6));
            let no = base.times(loss.clone(), (rat(1, 1016) - &eps) / int(6));
            let ratio = PowerExpr::one().times(loss.recip(), (rat(1, 1016) - int(2) * &eps) / int(6));
            Ok(cert(CertValue::Nash(yes), CertValue::Nash(no), Some(ratio)))
        }
        BoundKind::Vc | BoundKind::VcCorollary => {
            if regime.tag != RegimeTag::GoodsVc {
                return wrong();
            }
            let (nv, k) = graph_params(params, kind)?;
            let (a, b, c) = (int(v[0]), int(v[1]), int(v[2]));
            let a_prime = a_prime(&a, &b, &c);
            let agents2 = int(6 * k as i64 - nv as i64); // twice the agent count
            let yes = PowerExpr::one()
                .times(c, int(2 * k as i64) / &agents2)
                .times(int(3) * &b, int(4 * k as i64 - nv as i64) / &agents2);
            let loss = (int(2) * &b + &a_prime) / (int(3) * &b);
            let no = yes.clone().times(loss.clone(), gamma() * int(nv as i64) / &agents2);
            let denom = if kind == BoundKind::Vc { 5 } else { 3 };
            let ratio = PowerExpr::one().times(loss.recip(), gamma() / int(denom));
            Ok(cert(CertValue::Nash(yes), CertValue::Nash(no), Some(ratio)))
        }
        BoundKind::Vc3c => {
            if regime.tag != RegimeTag::GoodsVc3c {
                return wrong();
            }
            let (nv, k) = graph_params(params, kind)?;
            let c = v[1];
            let yes = PowerExpr::int(3 * c);
            let nine_c2 = int(9 * c * c);
            let loss = (&nine_c2 - int(1)) / &nine_c2;
            let no = yes.clone().times(loss.clone(), gamma() * int(nv as i64) / int(2 * (6 * k as i64 - nv as i64)));
            let ratio = PowerExpr::one().times(loss.recip(), gamma() / int(10));
            Ok(cert(CertValue::Nash(yes), CertValue::Nash(no), Some(ratio)))
        }
        BoundKind::MewGoods => {
            let [a, b, c] = v[..] else { return wrong() };
            if a < 0 {
                return wrong();
            }
            let (yes, no) = mew_goods_thresholds(a, b, c);
            let ratio = PowerExpr::one().times(rat(yes, no), BigRational::one());
            Ok(cert(CertValue::Egalitarian(yes), CertValue::Egalitarian(no), Some(ratio)))
        }
        BoundKind::MewMixed => {
            if regime.tag != RegimeTag::MixedLargeNegative {
                return wrong();
            }
            Ok(cert(CertValue::Egalitarian(0), CertValue::Egalitarian(-1), None))
        }
        BoundKind::MewTwoNegative => {
            let [a, b, c] = v[..] else { return wrong() };
            if regime.tag != RegimeTag::TwoNegative || a != 2 * b || c % b != 0 || -c / b < 2 {
                return wrong();
            }
            Ok(cert(CertValue::Egalitarian(0), CertValue::Egalitarian(-1), None))
        }
        BoundKind::MewRx3c => {
            if v[..] != [-1, 0, 1] {
                return wrong();
            }
            Ok(cert(CertValue::Egalitarian(1), CertValue::Egalitarian(0), None))
        }
    }
}

/// Egalitarian thresholds of the goods reduction: `(yes, no)`.
pub(crate) fn mew_goods_thresholds(a: i64, b: i64, c: i64) -> (i64, i64) {
    if c >= 2 * b {
        (2 * b, b + a)
    } else if a == 0 {
        (c, b)
    } else {
        let t = (c + a).min(2 * b);
        (t, t - 1)
    }
}

/// `max{a, 2b^2/c, 2b/3}`, exactly.
pub fn a_prime(a: &BigRational, b: &BigRational, c: &BigRational) -> BigRational {
    let candidates = [a.clone(), int(2) * b * b / c, int(2) * b / int(3)];
    candidates.into_iter().max().expect("non-empty")
}

fn graph_params(params: &BoundParams, kind: BoundKind) -> Result<(usize, usize)> {
    let nv = params.vertices;
    let k = params.k.unwrap_or(if kind == BoundKind::VcCorollary { 2 * nv / 3 } else { nv / 2 });
    if nv < 4 || !nv.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("a 3-regular graph needs an even vertex count >= 4, got {nv}")));
    }
    if 2 * k < nv || k > nv {
        return Err(Error::InvalidInput(format!("k = {k} outside [|V|/2, |V|] for |V| = {nv}")));
    }
    if kind == BoundKind::VcCorollary && 3 * k > 2 * nv {
        return Err(Error::InvalidInput(format!("the corollary needs k <= 2|V|/3, got k = {k}")));
    }
    Ok((nv, k))
}

/// Parses `p`, `p/q` or a finite decimal such as `0.0001` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("cannot parse '{s}' as a rational number"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{whole}{frac}").parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(digits, scale));
    }
    Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sat_case1_ratio() {
        let cert = compute_bounds(BoundKind::SatCase1, &BoundParams::new(&[0, 1, 2])).unwrap();
        let ratio = cert.ratio.clone().unwrap();
        assert_eq!(ratio.factors(), &[(rat(4, 3), rat(1, 6096))]);
        let r = ratio.approx();
        assert!((1.000045..=1.000050).contains(&r), "{r}");
        assert!(cert.is_consistent());
        // yes value 2^(3/8) 2^(5/8) = 2
        assert_eq!(
            match &cert.yes_value {
                CertValue::Nash(p) => p.pow_exact(24),
                _ => None,
            },
            Some(int(1 << 24))
        );
    }

    #[test]
    fn vc_corollary_ratio() {
        let cert = compute_bounds(BoundKind::VcCorollary, &BoundParams::new(&[0, 1, 3])).unwrap();
        let ratio = cert.ratio.unwrap();
        assert_eq!(ratio.factors(), &[(rat(9, 8), rat(1, 891))]);
        assert!((1.000130..=1.000134).contains(&ratio.approx()));
    }

    #[test]
    fn vc_yes_value_on_k33() {
        let cert = compute_bounds(BoundKind::Vc, &BoundParams::new(&[0, 1, 3]).with_graph(6, 3)).unwrap();
        let CertValue::Nash(yes) = &cert.yes_value else { panic!() };
        // (3^3 3^3)^(1/6) = 3
        assert_eq!(yes.pow_exact(6), Some(int(729)));
        assert!(cert.is_consistent());
    }

    #[test]
    fn vc3c_ratio() {
        let cert = compute_bounds(BoundKind::Vc3c, &BoundParams::new(&[3, 4])).unwrap();
        assert_eq!(cert.ratio.as_ref().unwrap().factors(), &[(rat(144, 143), rat(1, 2970))]);
        assert!(cert.is_consistent());
    }

    #[test]
    fn a_prime_is_exact() {
        assert_eq!(a_prime(&int(0), &int(1), &int(3)), rat(2, 3));
        assert_eq!(a_prime(&int(2), &int(3), &int(7)), rat(18, 7));
    }

    #[test]
    fn mew_thresholds() {
        assert_eq!(mew_goods_thresholds(0, 1, 2), (2, 1));
        assert_eq!(mew_goods_thresholds(0, 2, 3), (3, 2));
        assert_eq!(mew_goods_thresholds(1, 2, 3), (4, 3));
    }

    #[test]
    fn regime_mismatch() {
        assert!(matches!(
            compute_bounds(BoundKind::SatCase1, &BoundParams::new(&[0, 1, 3])),
            Err(Error::WrongRegime(_))
        ));
        assert!(compute_bounds(BoundKind::SatCase1, &BoundParams::new(&[0, 1, 2]).with_epsilon(rat(1, 2032))).is_err());
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("1/4064").unwrap(), rat(1, 4064));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("0").unwrap(), int(0));
        assert!(parse_rational("x").is_err());
    }
}
