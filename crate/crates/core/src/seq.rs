//! Sequences `f_0, f_1, ...` of irreducible polynomials where `f_i` is
//! `f_{i-1}^R` when that is irreducible and one of its two factors otherwise.
//!
//! Degrees stay at `n` for `s1` polynomials, at `2n` for `s2`, then double at
//! every step. If the first split picks a factor whose root is periodic under
//! `theta`, the run stalls at degree `n`; it is then restarted once from the
//! other factor.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{factor_r_trusted, RFactorization};
use crate::fp::{nu2_prime_power_minus_one, PrimeModulus};
use crate::poly::{is_irreducible, FpPoly};

/// Which factor of a split `f^R` continues the sequence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// The smaller coefficient vector, compared from the leading coefficient down.
    #[default]
    DescendingLex,
    First,
    Second,
}

impl TieBreak {
    pub fn as_str(self) -> &'static str {
        match self {
            TieBreak::DescendingLex => "descending-lex",
            TieBreak::First => "first",
            TieBreak::Second => "second",
        }
    }
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TieBreak {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "descending-lex" => Ok(TieBreak::DescendingLex),
            "first" => Ok(TieBreak::First),
            "second" => Ok(TieBreak::Second),
            other => Err(Error::InvalidArgument(format!("unknown tie-break policy {other:?}"))),
        }
    }
}

/// 1 or 2: the position of the factor `policy` selects.
fn choice_index(g1: &FpPoly, g2: &FpPoly, policy: TieBreak) -> u8 {
    match policy {
        TieBreak::First => 1,
        TieBreak::Second => 2,
        TieBreak::DescendingLex => match g1.cmp_descending(g2) {
            Ordering::Greater => 2,
            _ => 1,
        },
    }
}

/// Returns `(chosen, other)`.
pub fn choose_factor(g1: &FpPoly, g2: &FpPoly, policy: TieBreak) -> (FpPoly, FpPoly) {
    match choice_index(g1, g2, policy) {
        1 => (g1.clone(), g2.clone()),
        _ => (g2.clone(), g1.clone()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqConfig {
    pub f0: FpPoly,
    /// Number of polynomials `f_1 ... f_target` to report.
    pub target_steps: usize,
    pub tie_break: TieBreak,
}

impl SeqConfig {
    pub fn new(f0: FpPoly, target_steps: usize) -> Self {
        SeqConfig {
            f0,
            target_steps,
            tie_break: TieBreak::default(),
        }
    }

    pub fn with_tie_break(mut self, tie_break: TieBreak) -> Self {
        self.tie_break = tie_break;
        self
    }

    pub fn p(&self) -> PrimeModulus {
        self.f0.modulus()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Irreducible,
    /// `chosen` is 1 or 2.
    Split {
        g1: FpPoly,
        g2: FpPoly,
        chosen: u8,
    },
}

/// One application of the R-transform: `output` is `f_index`, built from
/// `input = f_{index-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub index: usize,
    pub input: FpPoly,
    pub r_poly: FpPoly,
    pub outcome: StepOutcome,
    pub output: FpPoly,
    /// Part of the abandoned first attempt before a restart.
    pub discarded: bool,
}

impl StepRecord {
    pub fn degree(&self) -> usize {
        self.output.deg()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqTrace {
    pub f0: FpPoly,
    pub tie_break: TieBreak,
    /// `nu2(p^n - 1)`
    pub e0: u32,
    /// `nu2(p^(2n) - 1)`
    pub e1: u32,
    /// Number of degree-n polynomials, `f_0` included.
    pub s1: usize,
    /// Number of degree-2n polynomials.
    pub s2: usize,
    pub backtracked: bool,
    /// Splits plus restarts before the first polynomial of degree 4n.
    pub factorization_count: usize,
    pub steps: Vec<StepRecord>,
}

impl SeqTrace {
    pub fn p(&self) -> PrimeModulus {
        self.f0.modulus()
    }

    pub fn n(&self) -> usize {
        self.f0.deg()
    }

    /// `f_0, f_1, ...` along the kept run.
    pub fn sequence(&self) -> Vec<&FpPoly> {
        std::iter::once(&self.f0)
            .chain(self.steps.iter().filter(|s| !s.discarded).map(|s| &s.output))
            .collect()
    }

    /// Upper bound on `factorization_count`: `e1 + 1` for a run without a
    /// restart, `e0 + e1 + 1` otherwise.
    pub fn factorization_bound(&self) -> usize {
        let base = self.e1 as usize + 1;
        if self.backtracked {
            base + self.e0 as usize
        } else {
            base
        }
    }
}

fn validate_f0(f0: &FpPoly) -> Result<()> {
    if f0.is_zero() || f0.deg() == 0 {
        return Err(Error::ConstantPolynomial(f0.to_string()));
    }
    if !f0.is_monic() {
        return Err(Error::NotMonic(f0.to_string()));
    }
    if f0.is_x_plus_minus_one() {
        return Err(Error::Excluded(f0.to_string()));
    }
    if !is_irreducible(f0)? {
        return Err(Error::Reducible(f0.to_string()));
    }
    Ok(())
}

fn step_from(index: usize, input: &FpPoly, fact: RFactorization, policy: TieBreak) -> (StepRecord, Option<FpPoly>) {
    let r_poly = crate::poly::r_transform(input).expect("input is monic of positive degree");
    match fact {
        RFactorization::Irreducible(r) => (
            StepRecord {
                index,
                input: input.clone(),
                output: r.clone(),
                r_poly: r,
                outcome: StepOutcome::Irreducible,
                discarded: false,
            },
            None,
        ),
        RFactorization::Split { g1, g2 } => {
            let chosen = choice_index(&g1, &g2, policy);
            let (output, other) = if chosen == 1 {
                (g1.clone(), g2.clone())
            } else {
                (g2.clone(), g1.clone())
            };
            (
                StepRecord {
                    index,
                    input: input.clone(),
                    r_poly,
                    outcome: StepOutcome::Split { g1, g2, chosen },
                    output,
                    discarded: false,
                },
                Some(other),
            )
        }
    }
}

fn invariant(msg: String) -> Error {
    Error::Invariant(msg)
}

/// Builds the sequence from `cfg.f0`, restarting once if the first choice stalls.
///
/// The run always continues until the first degree-4n polynomial so that
/// `s1`, `s2` and the restart decision are settled; the returned steps are
/// then trimmed to `target_steps` kept polynomials.
pub fn build_sequence(cfg: &SeqConfig) -> Result<SeqTrace> {
    let f0 = &cfg.f0;
    validate_f0(f0)?;
    if cfg.target_steps == 0 {
        return Err(Error::InvalidArgument("target_steps must be positive".into()));
    }
    let md = f0.modulus();
    let n = f0.deg();
    let e0 = nu2_prime_power_minus_one(md, n)?;
    let e1 = nu2_prime_power_minus_one(md, 2 * n)?;
    let stall_index = e0 as usize + 1;
    // s1 + s2 <= e1 + 1, so the first 4n polynomial appears by index e1 + 1
    let max_resolve = e1 as usize + 1;

    let mut steps: Vec<StepRecord> = Vec::new();
    let mut factorizations = 0usize;
    let mut backtracked = false;

    let first_fact = factor_r_trusted(f0)?;
    let (first_step, first_other) = step_from(1, f0, first_fact, cfg.tie_break);
    if first_other.is_some() {
        factorizations += 1;
    }
    let first_split = first_step.clone();
    let mut attempt_start = 0;
    let mut current = first_step.output.clone();
    steps.push(first_step);
    let mut index = 1;

    loop {
        if !is_irreducible(&current)? {
            return Err(invariant(format!("f_{index} = {current} is reducible")));
        }
        if index == stall_index && current.deg() == n {
            let Some(other) = first_other.clone().filter(|_| !backtracked) else {
                return Err(invariant(format!(
                    "degree stays {n} through f_{index}, beyond the bound s1 <= e0 + 1 = {stall_index}"
                )));
            };
            for s in &mut steps[attempt_start..] {
                s.discarded = true;
            }
            backtracked = true;
            factorizations += 1;
            attempt_start = steps.len();
            let mut restart = first_split.clone();
            if let StepOutcome::Split { chosen, .. } = &mut restart.outcome {
                *chosen = 3 - *chosen;
            }
            restart.output = other.clone();
            steps.push(restart);
            current = other;
            index = 1;
            continue;
        }
        let kept = index;
        if current.deg() >= 4 * n && kept >= cfg.target_steps {
            break;
        }
        if current.deg() < 4 * n && index > max_resolve {
            return Err(invariant(format!("no degree-{} polynomial by f_{index}", 4 * n)));
        }
        let fact = factor_r_trusted(&current)?;
        let (step, other) = step_from(index + 1, &current, fact, cfg.tie_break);
        if other.is_some() {
            if current.deg() >= 4 * n {
                return Err(invariant(format!("{}^R splits in the doubling regime", current)));
            }
            factorizations += 1;
        }
        current = step.output.clone();
        steps.push(step);
        index += 1;
    }

    let kept: Vec<&StepRecord> = steps.iter().filter(|s| !s.discarded).collect();
    let degrees: Vec<usize> = std::iter::once(n).chain(kept.iter().map(|s| s.degree())).collect();
    let s1 = degrees.iter().take_while(|&&d| d == n).count();
    let s2 = degrees[s1..].iter().take_while(|&&d| d == 2 * n).count();
    check_degree_pattern(&degrees, n, s1, s2)?;
    if s1 > stall_index {
        return Err(invariant(format!("s1 = {s1} exceeds e0 + 1 = {stall_index}")));
    }
    if s2 as u32 != e1 - e0 {
        return Err(invariant(format!("s2 = {s2} differs from e1 - e0 = {}", e1 - e0)));
    }
    let weak_bound = (e0 + e1 + 1) as usize;
    if factorizations > weak_bound {
        return Err(invariant(format!(
            "{factorizations} factorizations exceed e0 + e1 + 1 = {weak_bound}"
        )));
    }

    // trim to the requested number of kept polynomials
    let mut seen = 0;
    steps.retain(|s| {
        if s.discarded {
            return true;
        }
        seen += 1;
        seen <= cfg.target_steps
    });

    Ok(SeqTrace {
        f0: f0.clone(),
        tie_break: cfg.tie_break,
        e0,
        e1,
        s1,
        s2,
        backtracked,
        factorization_count: factorizations,
        steps,
    })
}

fn check_degree_pattern(degrees: &[usize], n: usize, s1: usize, s2: usize) -> Result<()> {
    for (i, pair) in degrees[s1 + s2..].windows(2).enumerate() {
        if pair[1] != 2 * pair[0] {
            return Err(invariant(format!(
                "degree {} follows {} at f_{}",
                pair[1],
                pair[0],
                s1 + s2 + i + 1
            )));
        }
    }
    if degrees.get(s1 + s2).is_some_and(|&d| d != 4 * n) {
        return Err(invariant(format!("degree after the 2n segment is not {}", 4 * n)));
    }
    Ok(())
}

/// Serialized trace, with every polynomial in canonical string form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub format_version: u32,
    pub p: u64,
    pub f0: String,
    pub tie_break: TieBreak,
    pub e0: u32,
    pub e1: u32,
    pub s1: usize,
    pub s2: usize,
    pub backtracked: bool,
    pub factorization_count: usize,
    pub factorization_bound: usize,
    pub steps: Vec<StepDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDocument {
    pub index: usize,
    pub input: String,
    pub r_poly: String,
    /// `"irreducible"` or `"split"`.
    pub outcome: String,
    pub factors: Vec<String>,
    pub chosen: Option<u8>,
    pub output: String,
    pub degree: usize,
    pub discarded: bool,
}

pub const TRACE_FORMAT_VERSION: u32 = 1;

impl SeqTrace {
    pub fn to_document(&self) -> TraceDocument {
        TraceDocument {
            format_version: TRACE_FORMAT_VERSION,
            p: self.p().value(),
            f0: self.f0.to_string(),
            tie_break: self.tie_break,
            e0: self.e0,
            e1: self.e1,
            s1: self.s1,
            s2: self.s2,
            backtracked: self.backtracked,
            factorization_count: self.factorization_count,
            factorization_bound: self.factorization_bound(),
            steps: self
                .steps
                .iter()
                .map(|s| {
                    let (outcome, factors, chosen) = match &s.outcome {
                        StepOutcome::Irreducible => ("irreducible", vec![], None),
                        StepOutcome::Split { g1, g2, chosen } => {
                            ("split", vec![g1.to_string(), g2.to_string()], Some(*chosen))
                        }
                    };
                    StepDocument {
                        index: s.index,
                        input: s.input.to_string(),
                        r_poly: s.r_poly.to_string(),
                        outcome: outcome.to_string(),
                        factors,
                        chosen,
                        output: s.output.to_string(),
                        degree: s.degree(),
                        discarded: s.discarded,
                    }
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &TraceDocument) -> Result<SeqTrace> {
        if doc.format_version != TRACE_FORMAT_VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported trace format version {}",
                doc.format_version
            )));
        }
        let md = PrimeModulus::new(doc.p)?;
        let parse = |s: &str| FpPoly::parse(s, md);
        let steps = doc
            .steps
            .iter()
            .map(|s| {
                let outcome = match (s.outcome.as_str(), s.factors.as_slice(), s.chosen) {
                    ("irreducible", [], None) => StepOutcome::Irreducible,
                    ("split", [g1, g2], Some(chosen @ (1 | 2))) => StepOutcome::Split {
                        g1: parse(g1)?,
                        g2: parse(g2)?,
                        chosen,
                    },
                    _ => return Err(Error::InvalidArgument(format!("malformed outcome in step {}", s.index))),
                };
                let output = parse(&s.output)?;
                if output.deg() != s.degree {
                    return Err(Error::InvalidArgument(format!(
                        "step {} records degree {} for {}",
                        s.index, s.degree, output
                    )));
                }
                Ok(StepRecord {
                    index: s.index,
                    input: parse(&s.input)?,
                    r_poly: parse(&s.r_poly)?,
                    outcome,
                    output,
                    discarded: s.discarded,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SeqTrace {
            f0: parse(&doc.f0)?,
            tie_break: doc.tie_break,
            e0: doc.e0,
            e1: doc.e1,
            s1: doc.s1,
            s2: doc.s2,
            backtracked: doc.backtracked,
            factorization_count: doc.factorization_count,
            steps,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("trace serializes")
    }

    pub fn from_json(src: &str) -> Result<SeqTrace> {
        let doc: TraceDocument =
            serde_json::from_str(src).map_err(|e| Error::InvalidArgument(format!("invalid trace document: {e}")))?;
        Self::from_document(&doc)
    }
}
