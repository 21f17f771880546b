//! Exhaustive property checks over a range of small fields, with golden runs.

use std::fmt;

use crate::error::Result;
use crate::ext::{ext_sqrt_traced, factor_r, ExtField, RFactorization};
use crate::fp::{checked_prime_power, nu2, nu2_prime_power_minus_one, odd_primes_up_to, PrimeModulus};
use crate::graph::{conjugacy_failures, in_degree_failures, verify_tree_structure, FunctionalGraph, GRAPH_LIMIT};
use crate::poly::{
    is_irreducible, monic_irreducibles, q_irreducibility_predicate, q_transform, r_irreducibility_predicate,
    r_transform, reciprocal, FpPoly,
};
use crate::seq::{build_sequence, SeqConfig, StepOutcome, TieBreak};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub p_max: u64,
    pub n_max: usize,
    /// Sequence length for the bound checks. `None` stops each run once
    /// `s1` and `s2` are settled, at `e1 + 1` kept polynomials.
    pub steps: Option<usize>,
    /// Policy used for the golden runs; anything but the default is expected
    /// to fail them.
    pub golden_tie_break: TieBreak,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            p_max: 13,
            n_max: 3,
            steps: None,
            golden_tie_break: TieBreak::DescendingLex,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl PropertyResult {
    fn new(name: &'static str) -> Self {
        PropertyResult {
            name,
            ..Default::default()
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    fn record<T>(&mut self, r: Result<T>, context: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.cases += 1;
                self.failures.push(format!("{}: {e}", context()));
                None
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub properties: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.properties {
            let status = if p.passed() { "pass" } else { "FAIL" };
            writeln!(
                f,
                "{status} {:<28} cases={} failures={}",
                p.name,
                p.cases,
                p.failures.len()
            )?;
            for msg in p.failures.iter().take(10) {
                writeln!(f, "    {msg}")?;
            }
            if p.failures.len() > 10 {
                writeln!(f, "    ... {} more", p.failures.len() - 10)?;
            }
        }
        let failed = self.properties.iter().filter(|p| !p.passed()).count();
        write!(f, "{} properties, {failed} failed", self.properties.len())
    }
}

fn parse(p: u64, s: &str) -> FpPoly {
    FpPoly::parse(s, PrimeModulus::new(p).expect("odd prime")).expect("valid literal")
}

fn sequence_strings(p: u64, f0: &str, steps: usize, policy: TieBreak) -> Result<(Vec<String>, Vec<String>, bool)> {
    let trace = build_sequence(&SeqConfig::new(parse(p, f0), steps).with_tie_break(policy))?;
    let kept = trace.sequence().iter().map(|f| f.to_string()).collect();
    let discarded = trace
        .steps
        .iter()
        .filter(|s| s.discarded)
        .map(|s| s.output.to_string())
        .collect();
    Ok((kept, discarded, trace.backtracked))
}

fn diff(expected: &[&str], actual: &[String]) -> Option<String> {
    (expected != actual).then(|| format!("expected {expected:?}, got {actual:?}"))
}

fn golden(policy: TieBreak) -> PropertyResult {
    let mut r = PropertyResult::new("golden_runs");
    if let Some((kept, _, back)) = r.record(sequence_strings(7, "x", 4, policy), || "p=7 f0=x".into()) {
        let d = diff(&["x", "x^2+1", "x^2+2", "x^2+3x+6", "x^4+6x^3+5x^2+6x+1"], &kept);
        r.check(d.is_none() && !back, || format!("p=7 f0=x: {}", d.unwrap_or_default()));
    }
    if let Some((kept, discarded, back)) = r.record(sequence_strings(7, "x-3", 5, policy), || "p=7 f0=x-3".into()) {
        let d = diff(
            &["x+4", "x+5", "x^2+3x+1", "x^2+x+3", "x^2+4x+5", "x^4+x^3+x^2+x+1"],
            &kept,
        )
        .or_else(|| diff(&["x+3", "x+2"], &discarded));
        r.check(d.is_none() && back, || format!("p=7 f0=x-3: {}", d.unwrap_or_default()));
    }
    let split = factor_r(&parse(5, "x^3+3x^2+2"));
    if let Some(split) = r.record(split, || "p=5 f=x^3+3x^2+2".into()) {
        let want = RFactorization::Split {
            g1: parse(5, "x^3+3x+3"),
            g2: parse(5, "x^3+x^2+2"),
        };
        r.check(split == want, || format!("p=5 f=x^3+3x^2+2: got {split:?}"));
    }
    r
}

/// Every monic irreducible of degree `n` except `x +- 1`.
fn irr(md: PrimeModulus, n: usize) -> impl Iterator<Item = FpPoly> {
    monic_irreducibles(md, n).filter(|f| !f.is_x_plus_minus_one())
}

fn field_range(cfg: &VerifyConfig) -> Vec<(PrimeModulus, usize)> {
    let mut out = Vec::new();
    for p in odd_primes_up_to(cfg.p_max) {
        let md = PrimeModulus::new(p).expect("odd prime");
        for n in 1..=cfg.n_max {
            out.push((md, n));
        }
    }
    out
}

fn transform_properties(cfg: &VerifyConfig) -> [PropertyResult; 3] {
    let mut shape = PropertyResult::new("r_transform_shape");
    let mut r_pred = PropertyResult::new("r_predicate_equivalence");
    let mut q_pred = PropertyResult::new("q_predicate_equivalence");
    for (md, n) in field_range(cfg) {
        for f in monic_irreducibles(md, n) {
            let qf = q_transform(&f).expect("monic");
            let q_irr = is_irreducible(&qf).expect("non-constant");
            let q_says = q_irreducibility_predicate(&f).expect("monic");
            q_pred.check(q_says == q_irr, || {
                format!("p={md:?} f={f}: predicate {q_says}, actual {q_irr}")
            });
            if f.is_x_plus_minus_one() {
                continue;
            }
            let rf = r_transform(&f).expect("monic");
            let self_reciprocal = reciprocal(&rf).map(|g| g == rf).unwrap_or(false);
            shape.check(
                rf.is_monic() && rf.deg() == 2 * n && rf.coeffs()[0] == 1 && self_reciprocal,
                || format!("f={f} f^R={rf}"),
            );
            let Some(fact) = shape.record(factor_r(&f), || format!("factor_r({f})")) else {
                continue;
            };
            if let RFactorization::Split { g1, g2 } = &fact {
                let ok = reciprocal(g1).map(|g| g == *g2).unwrap_or(false)
                    && &(g1 * g2) == &rf
                    && g1.deg() == n
                    && is_irreducible(g1).unwrap_or(false)
                    && is_irreducible(g2).unwrap_or(false);
                shape.check(ok, || format!("f={f}: split {g1} * {g2}"));
            }
            let r_says = r_irreducibility_predicate(&f).expect("not x+-1");
            let direct = is_irreducible(&rf).expect("non-constant");
            r_pred.check(r_says == !fact.is_split() && r_says == direct, || {
                format!(
                    "f={f}: predicate {r_says}, factor_r split {}, direct {direct}",
                    fact.is_split()
                )
            });
        }
    }
    [shape, r_pred, q_pred]
}

fn sequence_bounds(cfg: &VerifyConfig) -> PropertyResult {
    let mut r = PropertyResult::new("sequence_bounds");
    for (md, n) in field_range(cfg) {
        let e1 = nu2_prime_power_minus_one(md, 2 * n).expect("odd prime");
        let steps = cfg.steps.unwrap_or(e1 as usize + 1);
        for f0 in irr(md, n) {
            let trace = build_sequence(&SeqConfig::new(f0.clone(), steps));
            let Some(trace) = r.record(trace, || format!("p={} f0={f0}", md.value())) else {
                continue;
            };
            let degrees: Vec<usize> = trace.sequence().iter().map(|f| f.deg()).collect();
            let doubling = degrees
                .get(trace.s1 + trace.s2..)
                .unwrap_or_default()
                .windows(2)
                .all(|w| w[1] == 2 * w[0]);
            let splits_consistent = trace.steps.iter().all(|s| match &s.outcome {
                StepOutcome::Split { g1, g2, .. } => &(g1 * g2) == &s.r_poly && s.degree() == s.input.deg(),
                StepOutcome::Irreducible => s.degree() == 2 * s.input.deg(),
            });
            r.check(
                trace.s1 <= trace.e0 as usize + 1
                    && trace.s2 as u32 == trace.e1 - trace.e0
                    && doubling
                    && splits_consistent
                    && trace.factorization_count <= trace.factorization_bound(),
                || {
                    format!(
                        "p={} f0={f0}: s1={} s2={} e0={} e1={} degrees={degrees:?}",
                        md.value(),
                        trace.s1,
                        trace.s2,
                        trace.e0,
                        trace.e1
                    )
                },
            );
        }
    }
    r
}

/// Square roots of every square in each field, striding through large ones.
fn sqrt_soundness(cfg: &VerifyConfig) -> PropertyResult {
    let mut r = PropertyResult::new("ext_sqrt_soundness");
    for (md, n) in field_range(cfg) {
        let Some(q) = checked_prime_power(md.value(), n) else {
            continue;
        };
        let field = ExtField::of_degree(md, n).expect("irreducible modulus");
        let stride = (q / 512).max(1) as u64;
        let mut i = 1u64;
        while (i as u128) < q {
            let a = field.element_at(i).square();
            match ext_sqrt_traced(&a) {
                Ok(t) => r.check(t.root.square() == a && t.kernel.len() == 1, || {
                    format!("q={q} a={a}: root {}", t.root)
                }),
                Err(e) => r.check(false, || format!("q={q} a={a}: {e}")),
            }
            i += stride;
        }
    }
    r
}

fn graph_properties(cfg: &VerifyConfig) -> [PropertyResult; 3] {
    let mut trees = PropertyResult::new("graph_tree_structure");
    let mut indeg = PropertyResult::new("graph_in_degree");
    let mut conj = PropertyResult::new("graph_conjugacy");
    for (md, n) in field_range(cfg) {
        match checked_prime_power(md.value(), n) {
            Some(q) if q <= GRAPH_LIMIT as u128 => {}
            _ => continue,
        }
        let Some(g) = trees.record(FunctionalGraph::for_prime_power(md, n), || format!("p={md:?} n={n}")) else {
            continue;
        };
        let report = verify_tree_structure(&g);
        trees.check(report.passed(), || {
            format!("q={}: {}", g.q(), report.failures.join("; "))
        });
        let f = in_degree_failures(&g);
        indeg.check(f.is_empty(), || format!("q={}: {}", g.q(), f.join("; ")));
        let f = conjugacy_failures(&g);
        conj.check(f.is_empty(), || format!("q={}: {}", g.q(), f.join("; ")));
    }
    [trees, indeg, conj]
}

/// `nu2(q^2 - 1) = nu2(q - 1) + 1` whenever `nu2(q - 1) >= 2`, and tree
/// depths grow by one from F_q to F_{q^2} for fields small enough to graph.
fn depth_growth(cfg: &VerifyConfig) -> PropertyResult {
    let mut r = PropertyResult::new("depth_growth");
    for (md, n) in field_range(cfg) {
        let Some(q) = checked_prime_power(md.value(), n) else {
            continue;
        };
        let Some(q2) = checked_prime_power(md.value(), 2 * n) else {
            continue;
        };
        let e = nu2(q - 1).expect("q > 1");
        if e < 2 {
            continue;
        }
        let e2 = nu2(q2 - 1).expect("q > 1");
        r.check(e2 == e + 1, || format!("q={q}: nu2(q-1)={e} nu2(q^2-1)={e2}"));
        if q2 <= 1 << 16 {
            let small = FunctionalGraph::for_prime_power(md, n).map(|g| verify_tree_structure(&g).depths());
            let big = FunctionalGraph::for_prime_power(md, 2 * n).map(|g| verify_tree_structure(&g).depths());
            match (small, big) {
                (Ok(a), Ok(b)) => r.check(a.len() == 1 && b.len() == 1 && b[0] == a[0] + 1, || {
                    format!("q={q}: depths {a:?} over F_q, {b:?} over F_q^2")
                }),
                (Err(e), _) | (_, Err(e)) => r.check(false, || format!("q={q}: {e}")),
            }
        }
    }
    // without the hypothesis the valuation can jump by more than one
    for (p, want) in [(23u128, 4u32), (31, 6)] {
        let got = nu2(p * p - 1).expect("nonzero");
        r.check(got == want, || format!("nu2({p}^2 - 1) = {got}, expected {want}"));
    }
    r
}

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Counts of monic irreducibles against `(1/n) sum_{d | n} mu(d) p^(n/d)`.
fn irreducible_counts(cfg: &VerifyConfig) -> PropertyResult {
    let mut r = PropertyResult::new("irreducible_counts");
    for (md, n) in field_range(cfg) {
        if checked_prime_power(md.value(), n).map_or(true, |q| q > 1 << 16) {
            continue;
        }
        let p = md.value() as i128;
        let expected: i128 = (1..=n)
            .filter(|d| n % d == 0)
            .map(|d| mobius(d) as i128 * p.pow((n / d) as u32))
            .sum::<i128>()
            / n as i128;
        let got = monic_irreducibles(md, n).count() as i128;
        r.check(got == expected, || {
            format!("p={p} n={n}: {got} irreducibles, expected {expected}")
        });
    }
    r
}

/// Runs every property over odd primes up to `p_max` and degrees up to `n_max`.
pub fn run_verification(cfg: &VerifyConfig) -> VerifyReport {
    let mut properties = vec![golden(cfg.golden_tie_break)];
    properties.push(irreducible_counts(cfg));
    properties.extend(transform_properties(cfg));
    properties.push(sequence_bounds(cfg));
    properties.push(sqrt_soundness(cfg));
    properties.extend(graph_properties(cfg));
    properties.push(depth_growth(cfg));
    VerifyReport { properties }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_range_passes() {
        let cfg = VerifyConfig {
            p_max: 7,
            n_max: 2,
            steps: Some(6),
            ..Default::default()
        };
        let report = run_verification(&cfg);
        assert!(report.passed(), "{report}");
        assert!(report.properties.iter().all(|p| p.cases > 0));
    }

    #[test]
    fn mutated_tie_break_fails_goldens() {
        let r = golden(TieBreak::Second);
        assert!(!r.passed());
        assert!(r.failures.iter().any(|f| f.contains("expected")));
    }

    #[test]
    fn mobius_values() {
        let mu: Vec<i64> = (1..=10).map(mobius).collect();
        assert_eq!(mu, [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }
}
