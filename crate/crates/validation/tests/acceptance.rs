//! Acceptance checks, one line per criterion. Run with
//! `cargo test -p irrseq-validation --test acceptance`.

use std::collections::{BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use irrseq::ext::ext_sqrt_traced;
use irrseq::fp::{checked_prime_power, odd_primes_up_to};
use irrseq::graph::FunctionalGraph;
use irrseq::poly::{
    is_irreducible, monic_irreducibles, q_irreducibility_predicate, q_transform, r_irreducibility_predicate,
    r_transform, reciprocal,
};
use irrseq::{
    build_sequence, conjugacy_check, factor_r, is_square_ext, nu2, verify_tree_structure, ExtElem, ExtField, FpPoly,
    PrimeModulus, RFactorization, SeqConfig, SeqTrace, StepOutcome, StepRecord,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn md(p: u64) -> PrimeModulus {
    PrimeModulus::new(p).unwrap()
}

fn poly(p: u64, s: &str) -> FpPoly {
    FpPoly::parse(s, md(p)).unwrap()
}

/// Canonical form of a polynomial written with negative coefficients.
fn canon(p: u64, s: &str) -> String {
    poly(p, s).to_string()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pair(a: &FpPoly, b: &FpPoly) -> BTreeSet<String> {
    [a.to_string(), b.to_string()].into()
}

fn expected_pair(p: u64, a: &str, b: &str) -> BTreeSet<String> {
    [canon(p, a), canon(p, b)].into()
}

fn split_of(step: &StepRecord) -> Option<BTreeSet<String>> {
    match &step.outcome {
        StepOutcome::Split { g1, g2, .. } => Some(pair(g1, g2)),
        StepOutcome::Irreducible => None,
    }
}

fn kept(trace: &SeqTrace) -> Vec<&StepRecord> {
    trace.steps.iter().filter(|s| !s.discarded).collect()
}

fn field_range() -> Vec<(u64, usize)> {
    [3, 5, 7, 11, 13].into_iter().flat_map(|p| [(p, 1), (p, 2)]).collect()
}

fn starting_polys(p: u64, n: usize) -> impl Iterator<Item = FpPoly> {
    monic_irreducibles(md(p), n).filter(|f| !f.is_x_plus_minus_one())
}

fn golden_x() -> Check {
    let p = 7;
    let trace = build_sequence(&SeqConfig::new(poly(p, "x"), 4)).map_err(|e| e.to_string())?;
    let seq: Vec<String> = trace.sequence().iter().map(|f| f.to_string()).collect();
    let expected: Vec<String> = ["x", "x^2+1", "x^2+2", "x^2+3x-1", "x^4-x^3-2x^2-x+1"]
        .iter()
        .map(|s| canon(p, s))
        .collect();
    ensure(seq == expected, || format!("sequence {seq:?}, expected {expected:?}"))?;
    let steps = kept(&trace);
    ensure(split_of(steps[1]) == Some(expected_pair(p, "x^2+2", "x^2+4")), || {
        format!("f1^R split {:?}", split_of(steps[1]))
    })?;
    ensure(
        split_of(steps[2]) == Some(expected_pair(p, "x^2+3x-1", "x^2+4x-1")),
        || format!("f2^R split {:?}", split_of(steps[2])),
    )?;
    ensure((trace.e0, trace.e1) == (1, 4), || {
        format!("e0={} e1={}", trace.e0, trace.e1)
    })?;
    Ok(format!("f4 = {}", seq[4]))
}

fn golden_backtrack() -> Check {
    let p = 7;
    let trace = build_sequence(&SeqConfig::new(poly(p, "x-3"), 5)).map_err(|e| e.to_string())?;
    ensure(trace.backtracked, || "no backtrack".into())?;
    let discarded: Vec<&StepRecord> = trace.steps.iter().filter(|s| s.discarded).collect();
    ensure(
        discarded.len() == 2 && discarded[0].output.to_string() == canon(p, "x-4"),
        || {
            format!(
                "first attempt {:?}",
                discarded.iter().map(|s| s.output.to_string()).collect::<Vec<_>>()
            )
        },
    )?;
    ensure(split_of(discarded[1]) == Some(expected_pair(p, "x-3", "x-5")), || {
        format!("stall split {:?}", split_of(discarded[1]))
    })?;
    let steps = kept(&trace);
    let seq: Vec<String> = steps.iter().map(|s| s.output.to_string()).collect();
    let expected: Vec<String> = ["x-2", "x^2+3x+1", "x^2+x+3", "x^2-3x-2", "x^4+x^3+x^2+1"]
        .iter()
        .map(|s| canon(p, s))
        .collect();
    ensure(
        split_of(steps[2]) == Some(expected_pair(p, "x^2+x+3", "x^2-2x-2")),
        || format!("f2^R split {:?}", split_of(steps[2])),
    )?;
    ensure(
        split_of(steps[3]) == Some(expected_pair(p, "x^2-3x-2", "x^2-2x+3")),
        || format!("f3^R split {:?}", split_of(steps[3])),
    )?;
    ensure(seq[..4] == expected[..4], || {
        format!("sequence {seq:?}, expected {expected:?}")
    })?;
    if seq[4] != expected[4] {
        let golden = poly(p, &expected[4]);
        let symmetric = reciprocal(&golden).map(|r| r == golden).unwrap_or(false);
        let direct = r_transform(&poly(p, &seq[3])).unwrap();
        return Err(format!(
            "f5 = {} but the golden value is {}; every R-transform is self-reciprocal and the golden \
             value is {}, while direct expansion of ({})^R gives {} (irreducible: {})",
            seq[4],
            expected[4],
            if symmetric { "too" } else { "not" },
            seq[3],
            direct,
            is_irreducible(&direct).unwrap_or(false),
        ));
    }
    Ok(format!("f5 = {}", seq[4]))
}

fn golden_cubic() -> Check {
    let p = 5;
    let f = poly(p, "x^3+3x^2+2");
    let field = ExtField::new(&f).map_err(|e| e.to_string())?;
    let beta = field.generator();
    let u = beta.square().sub(&field.one());
    ensure(u.pow(62) == field.one(), || format!("(b^2-1)^62 = {}", u.pow(62)))?;
    ensure(is_square_ext(&u) == Ok(true), || "b^2-1 reported non-square".into())?;
    let trace = ext_sqrt_traced(&u).map_err(|e| e.to_string())?;
    ensure(trace.kernel.len() == 1, || {
        format!("kernel dimension {}", trace.kernel.len())
    })?;
    let k = trace.kernel[0].entries();
    ensure(k[0] != 0 && k[1] == k[0] && (k[2] + k[0]) % p == 0, || {
        format!("kernel line {k:?}")
    })?;
    ensure(trace.root.square() == u, || "root does not square back".into())?;
    match factor_r(&f).map_err(|e| e.to_string())? {
        RFactorization::Split { g1, g2 } => {
            let got = pair(&g1, &g2);
            ensure(got == expected_pair(p, "x^3+3x+3", "x^3+x^2+2"), || {
                format!("split {got:?}")
            })?;
            Ok(format!("split {g1} * {g2}"))
        }
        RFactorization::Irreducible(r) => Err(format!("f^R = {r} reported irreducible")),
    }
}

fn sequence_bounds() -> Check {
    let mut cases = 0;
    for (p, n) in field_range() {
        for f0 in starting_polys(p, n) {
            let trace = build_sequence(&SeqConfig::new(f0.clone(), 8)).map_err(|e| format!("f0={f0}: {e}"))?;
            let degrees: Vec<usize> = trace.sequence().iter().map(|f| f.deg()).collect();
            let tail = &degrees[trace.s1 + trace.s2..];
            ensure(
                trace.s1 <= trace.e0 as usize + 1
                    && trace.s2 as u32 == trace.e1 - trace.e0
                    && tail.first() == Some(&(4 * n))
                    && tail.windows(2).all(|w| w[1] == 2 * w[0])
                    && degrees.len() == 9,
                || format!("p={p} f0={f0}: s1={} s2={} degrees={degrees:?}", trace.s1, trace.s2),
            )?;
            for f in trace.sequence() {
                ensure(is_irreducible(f) == Ok(true), || {
                    format!("p={p} f0={f0}: {f} reducible")
                })?;
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} starting polynomials"))
}

fn transform_shape() -> Check {
    let mut cases = 0;
    for (p, n) in field_range() {
        for f in starting_polys(p, n) {
            let r = r_transform(&f).map_err(|e| e.to_string())?;
            let c = r.coeffs();
            let palindromic = c.iter().eq(c.iter().rev());
            ensure(r.is_monic() && r.deg() == 2 * n && c[0] == 1 && palindromic, || {
                format!("p={p} f={f}: f^R = {r}")
            })?;
            if let RFactorization::Split { g1, g2 } = factor_r(&f).map_err(|e| e.to_string())? {
                ensure(reciprocal(&g1).as_ref() == Ok(&g2) && &g1 * &g2 == r, || {
                    format!("p={p} f={f}: {g1} * {g2}")
                })?;
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} polynomials"))
}

fn predicate_equivalence() -> Check {
    let (mut r_cases, mut q_cases) = (0, 0);
    for (p, n) in field_range() {
        for f in monic_irreducibles(md(p), n) {
            let q_direct = is_irreducible(&q_transform(&f).unwrap()).unwrap();
            ensure(q_irreducibility_predicate(&f) == Ok(q_direct), || {
                format!("p={p} f={f}: Q predicate disagrees")
            })?;
            q_cases += 1;
            if f.is_x_plus_minus_one() {
                continue;
            }
            let split = factor_r(&f).map_err(|e| e.to_string())?.is_split();
            ensure(r_irreducibility_predicate(&f) == Ok(!split), || {
                format!("p={p} f={f}: R predicate disagrees")
            })?;
            r_cases += 1;
        }
    }
    Ok(format!("{r_cases} R cases, {q_cases} Q cases"))
}

fn random_nonzero(field: &ExtField, rng: &mut ChaCha8Rng) -> ExtElem {
    let p = field.p().value();
    loop {
        let coords: Vec<u64> = (0..field.degree()).map(|_| rng.gen_range(0..p)).collect();
        if coords.iter().any(|&c| c != 0) {
            return field.from_coords(&coords).unwrap();
        }
    }
}

fn sqrt_soundness() -> Check {
    let primes = odd_primes_up_to(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut fields: HashMap<(u64, usize), ExtField> = HashMap::new();
    for trial in 0..1000 {
        let p = primes[rng.gen_range(0..primes.len())];
        let n = rng.gen_range(1..=8);
        let field = fields
            .entry((p, n))
            .or_insert_with(|| ExtField::of_degree(md(p), n).unwrap())
            .clone();
        let a = random_nonzero(&field, &mut rng).square();
        let trace = ext_sqrt_traced(&a).map_err(|e| format!("trial {trial} p={p} n={n} a={a}: {e}"))?;
        ensure(trace.kernel.len() == 1 && trace.root.square() == a, || {
            format!("trial {trial} p={p} n={n} a={a}: root {}", trace.root)
        })?;
    }
    Ok(format!("1000 trials over {} fields", fields.len()))
}

fn graph_structure() -> Check {
    let mut count = 0;
    for p in odd_primes_up_to(4096) {
        for n in 1.. {
            let Some(q) = checked_prime_power(p, n).filter(|&q| q <= 4096) else {
                break;
            };
            let g = FunctionalGraph::for_prime_power(md(p), n).map_err(|e| e.to_string())?;
            let report = verify_tree_structure(&g);
            let depth = nu2(q - 1).unwrap();
            ensure(
                report.passed()
                    && report.depths() == [depth]
                    && report.roots_have_one_child
                    && report.internal_nodes_have_two_children
                    && report.leaves_at_full_depth
                    && report.plus_minus_one_tree_free,
                || format!("q={q}: depths {:?}, failures {:?}", report.depths(), report.failures),
            )?;
            ensure(conjugacy_check(&g), || format!("q={q}: conjugacy fails"))?;
            count += 1;
        }
    }
    Ok(format!("{count} prime powers"))
}

fn depth_growth() -> Check {
    let mut cases = 0;
    for p in odd_primes_up_to(97) {
        for n in 1..=8u32 {
            let pn = (p as u128).pow(n);
            let v = nu2(pn - 1).unwrap();
            if v < 2 {
                continue;
            }
            let v2 = nu2(pn * pn - 1).unwrap();
            ensure(v2 == v + 1, || format!("p={p} n={n}: {v} then {v2}"))?;
            cases += 1;
        }
    }
    let counter = [(23u128, 1, 4), (31, 1, 6)];
    for (p, v, v2) in counter {
        ensure(nu2(p - 1) == Ok(v) && nu2(p * p - 1) == Ok(v2), || format!("p={p}"))?;
    }
    Ok(format!("{cases} pairs, nu2(23^2-1)=4, nu2(31^2-1)=6"))
}

fn scale() -> Check {
    let f0 = FpPoly::x(md(7));
    let trace = build_sequence(&SeqConfig::new(f0, 14)).map_err(|e| e.to_string())?;
    let last = trace.sequence().last().map(|f| f.deg()).unwrap_or(0);
    ensure(last == 4096, || format!("final degree {last}"))?;
    Ok(format!("{} steps up to degree {last}", trace.steps.len()))
}

fn main() -> ExitCode {
    let second = Some(Duration::from_secs(1));
    let five_min = Some(Duration::from_secs(300));
    let criteria = [
        Criterion {
            id: 1,
            name: "golden sequence p=7 f0=x",
            limit: second,
            run: golden_x,
        },
        Criterion {
            id: 2,
            name: "golden backtracking p=7 f0=x-3",
            limit: second,
            run: golden_backtrack,
        },
        Criterion {
            id: 3,
            name: "golden cubic split p=5",
            limit: second,
            run: golden_cubic,
        },
        Criterion {
            id: 4,
            name: "sequence bounds, p<=13 n<=2",
            limit: five_min,
            run: sequence_bounds,
        },
        Criterion {
            id: 5,
            name: "R-transform shape",
            limit: None,
            run: transform_shape,
        },
        Criterion {
            id: 6,
            name: "predicate equivalence",
            limit: None,
            run: predicate_equivalence,
        },
        Criterion {
            id: 7,
            name: "ext_sqrt soundness",
            limit: Some(Duration::from_secs(60)),
            run: sqrt_soundness,
        },
        Criterion {
            id: 8,
            name: "graph trees and conjugacy, q<=4096",
            limit: five_min,
            run: graph_structure,
        },
        Criterion {
            id: 9,
            name: "2-adic depth growth",
            limit: None,
            run: depth_growth,
        },
        Criterion {
            id: 10,
            name: "sequence to degree 4096",
            limit: Some(Duration::from_secs(60)),
            run: scale,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS criterion {:>2}: {} ({detail}; {elapsed:.2?})", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {} ({why}; {elapsed:.2?})", c.id, c.name);
            }
        }
    }
    println!("{} criteria, {failed} failed", criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
