//! Abstract connectivities on the naturals, their Day convolution and the
//! vanishing-line transfer rules.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::StabilityError;
use crate::bigraded::Bidegree;
use crate::gerstenhaber::Level;

/// An element of `Z u {-inf, +inf}`, ordered with `-inf` least.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConnValue {
    NegInf,
    Fin(i64),
    PosInf,
}

impl ConnValue {
    /// `self - l`, leaving infinities fixed.
    pub fn minus(self, l: i64) -> ConnValue {
        match self {
            ConnValue::Fin(v) => ConnValue::Fin(v.saturating_sub(l)),
            other => other,
        }
    }
}

/// Addition with `(+inf) + (-inf) = +inf`.
impl Add for ConnValue {
    type Output = ConnValue;
    fn add(self, o: ConnValue) -> ConnValue {
        match (self, o) {
            (ConnValue::PosInf, _) | (_, ConnValue::PosInf) => ConnValue::PosInf,
            (ConnValue::NegInf, _) | (_, ConnValue::NegInf) => ConnValue::NegInf,
            (ConnValue::Fin(a), ConnValue::Fin(b)) => ConnValue::Fin(a.saturating_add(b)),
        }
    }
}

impl fmt::Display for ConnValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConnValue::NegInf => write!(f, "-inf"),
            ConnValue::Fin(v) => write!(f, "{v}"),
            ConnValue::PosInf => write!(f, "inf"),
        }
    }
}

impl Serialize for ConnValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ConnValue::Fin(v) => s.serialize_i64(*v),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for ConnValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(ConnValue::Fin(v)),
            Raw::Text(t) => match t.trim() {
                "inf" | "+inf" => Ok(ConnValue::PosInf),
                "-inf" => Ok(ConnValue::NegInf),
                other => other
                    .parse()
                    .map(ConnValue::Fin)
                    .map_err(|_| serde::de::Error::custom(format!("not a connectivity value: `{other}`"))),
            },
        }
    }
}

/// Value of a connectivity away from its explicitly listed ranks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tail {
    Constant {
        value: ConnValue,
    },
    /// `ceil(num * n / den) + offset`, with `den > 0`.
    Linear {
        num: i64,
        den: i64,
        offset: i64,
    },
    /// The convolution of two connectivities, evaluated lazily.
    Convolution {
        left: Box<AbstractConnectivity>,
        right: Box<AbstractConnectivity>,
    },
}

/// A total function `N -> Z u {-inf, +inf}`: finitely many listed values over a default.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractConnectivity {
    #[serde(default)]
    pub values: BTreeMap<u32, ConnValue>,
    pub default: Tail,
}

impl AbstractConnectivity {
    pub fn constant(value: ConnValue) -> Self {
        AbstractConnectivity { values: BTreeMap::new(), default: Tail::Constant { value } }
    }

    /// The unit: `0` at rank 0 and `+inf` elsewhere.
    pub fn unit() -> Self {
        Self::constant(ConnValue::PosInf).with_value(0, ConnValue::Fin(0))
    }

    /// `n -> a n + b`.
    pub fn affine(a: i64, b: i64) -> Self {
        Self::linear(a, 1, b)
    }

    /// `n -> ceil(num n / den) + offset`.
    pub fn linear(num: i64, den: i64, offset: i64) -> Self {
        assert!(den > 0, "denominator must be positive");
        AbstractConnectivity { values: BTreeMap::new(), default: Tail::Linear { num, den, offset } }
    }

    pub fn with_value(mut self, n: u32, v: ConnValue) -> Self {
        self.values.insert(n, v);
        self
    }

    pub fn eval(&self, n: u32) -> ConnValue {
        if let Some(v) = self.values.get(&n) {
            return *v;
        }
        match &self.default {
            Tail::Constant { value } => *value,
            Tail::Linear { num, den, offset } => {
                let a = num * n as i64;
                ConnValue::Fin(-((-a).div_euclid(*den)) + offset)
            }
            Tail::Convolution { left, right } => {
                (0..=n).map(|a| left.eval(a) + right.eval(n - a)).min().expect("nonempty range")
            }
        }
    }

    /// Values at ranks `0..=nmax`.
    pub fn tabulate(&self, nmax: u32) -> Vec<ConnValue> {
        let mut out: Vec<ConnValue> = match &self.default {
            Tail::Convolution { left, right } => {
                let (l, r) = (left.tabulate(nmax), right.tabulate(nmax));
                (0..=nmax as usize).map(|n| (0..=n).map(|a| l[a] + r[n - a]).min().expect("nonempty")).collect()
            }
            _ => (0..=nmax).map(|n| self.eval(n)).collect(),
        };
        for (&n, &v) in self.values.range(..=nmax) {
            out[n as usize] = v;
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self, StabilityError> {
        let c: Self = serde_json::from_str(text).map_err(|e| StabilityError::Parse(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), StabilityError> {
        match &self.default {
            Tail::Linear { den, .. } if *den <= 0 => {
                Err(StabilityError::Parse("linear default needs a positive denominator".into()))
            }
            Tail::Convolution { left, right } => {
                left.validate()?;
                right.validate()
            }
            _ => Ok(()),
        }
    }
}

/// `(c * c')(n) = inf_{a + b = n} c(a) + c'(b)`.
pub fn connectivity_convolve(c: &AbstractConnectivity, c2: &AbstractConnectivity) -> AbstractConnectivity {
    AbstractConnectivity {
        values: BTreeMap::new(),
        default: Tail::Convolution { left: Box::new(c.clone()), right: Box::new(c2.clone()) },
    }
}

/// First rank where `rho * rho >= rho` fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisFailure {
    pub n: u32,
    pub convolution: ConnValue,
    pub value: ConnValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub holds: bool,
    pub checked_up_to: u32,
    pub failure: Option<HypothesisFailure>,
}

/// Checks `rho * rho >= rho` on ranks `0..=nmax`.
///
/// The algebras in the transfer theorems are reduced, so rank 0 carries only the
/// unit and `rho(0)` is replaced by `+inf`; only splittings into two positive ranks
/// constrain `rho`.
pub fn check_lax_monoidal(rho: &AbstractConnectivity, nmax: u32) -> HypothesisCheck {
    let mut vals = rho.tabulate(nmax);
    vals[0] = ConnValue::PosInf;
    for n in 0..=nmax as usize {
        let conv = (0..=n).map(|a| vals[a] + vals[n - a]).min().expect("nonempty");
        if conv.cmp(&vals[n]) == Ordering::Less {
            return HypothesisCheck {
                holds: false,
                checked_up_to: nmax,
                failure: Some(HypothesisFailure { n: n as u32, convolution: conv, value: vals[n] }),
            };
        }
    }
    HypothesisCheck { holds: true, checked_up_to: nmax, failure: None }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Up,
    Down,
}

/// A transferred vanishing line with the hypotheses it rests on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub direction: Direction,
    pub l: u32,
    pub k: Level,
    pub hypothesis: HypothesisCheck,
    /// `line[n] = rho(n) - l`: the claim is vanishing for `d < line[n]`. Absent when the hypothesis fails.
    pub line: Option<Vec<ConnValue>>,
    pub assumptions: Vec<String>,
}

impl TransferReport {
    /// Plain-text ledger of the claim and its hypotheses.
    pub fn render(&self) -> String {
        let (from, to) = match self.direction {
            Direction::Up => (format!("E_{}", self.l), format!("E_{}", self.k)),
            Direction::Down => (format!("E_{}", self.k), format!("E_{}", self.l)),
        };
        let mut out = format!("transfer {from} -> {to}\n");
        match &self.hypothesis.failure {
            None => {
                out.push_str(&format!("hypothesis rho*rho >= rho: holds for n <= {}\n", self.hypothesis.checked_up_to))
            }
            Some(f) => out.push_str(&format!(
                "hypothesis rho*rho >= rho: fails at n = {} ({} < {})\n",
                f.n, f.convolution, f.value
            )),
        }
        for a in &self.assumptions {
            out.push_str(&format!("assumption: {a}\n"));
        }
        match &self.line {
            Some(line) => {
                for (n, v) in line.iter().enumerate() {
                    out.push_str(&format!("H^{to}_{{{n},d}} = 0 for d < {v}\n"));
                }
            }
            None => out.push_str("no line emitted\n"),
        }
        out
    }
}

fn transfer(
    direction: Direction,
    rho: &AbstractConnectivity,
    l: u32,
    k: Level,
    nmax: u32,
    assumptions: Vec<String>,
) -> Result<TransferReport, StabilityError> {
    if Level::Finite(l) > k {
        return Err(StabilityError::LevelOrder { l, k });
    }
    let hypothesis = check_lax_monoidal(rho, nmax);
    let line = hypothesis.holds.then(|| rho.tabulate(nmax).into_iter().map(|v| v.minus(l as i64)).collect());
    Ok(TransferReport { direction, l, k, hypothesis, line, assumptions })
}

/// From `H^{E_l} = 0` for `d < rho(n) - l` to the same line for `E_k`-homology.
pub fn transfer_up(rho: &AbstractConnectivity, l: u32, k: Level, nmax: u32) -> Result<TransferReport, StabilityError> {
    let assumptions = vec![format!("R is an E_{k}-algebra and the E_{l}-homology line is known")];
    transfer(Direction::Up, rho, l, k, nmax, assumptions)
}

/// From `H^{E_k} = 0` for `d < rho(n) - l` to the same line for `E_l`-homology.
pub fn transfer_down(
    rho: &AbstractConnectivity,
    l: u32,
    k: Level,
    nmax: u32,
) -> Result<TransferReport, StabilityError> {
    let assumptions = vec![
        "the groupoid is Artinian".to_string(),
        "R is reduced".to_string(),
        "R is 0-connective".to_string(),
        "CW approximation holds (Hurewicz axiom)".to_string(),
    ];
    transfer(Direction::Down, rho, l, k, nmax, assumptions)
}

/// A minimal cell structure: one `(n,d)`-cell per basis element of the derived indecomposables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinCellCounts {
    pub cells: Vec<(Bidegree, u64)>,
    pub statement: String,
}

/// Reads Betti numbers of derived indecomposables as cell counts of a minimal CW approximation.
pub fn min_cell_counts(betti: &BTreeMap<Bidegree, u64>) -> MinCellCounts {
    MinCellCounts {
        cells: betti.iter().filter(|(_, &v)| v > 0).map(|(&b, &v)| (b, v)).collect(),
        statement: "a CW approximation with exactly b_{n,d} (n,d)-cells exists, and no CW approximation has fewer"
            .into(),
    }
}
