use irrseq::poly::{is_irreducible, monic_irreducibles, r_transform};
use irrseq::{
    build_sequence, export_dot, factor_r, tilde, FpPoly, FunctionalGraph, PrimeModulus, RFactorization, SeqConfig,
    SeqTrace, StepOutcome, TieBreak,
};

fn md(p: u64) -> PrimeModulus {
    PrimeModulus::new(p).unwrap()
}

#[test]
fn tilde_inverts_irreducible_steps() {
    for p in [5, 7, 11] {
        for f0 in monic_irreducibles(md(p), 2).take(6) {
            let trace = build_sequence(&SeqConfig::new(f0, 6)).unwrap();
            for s in trace.steps.iter().filter(|s| s.outcome == StepOutcome::Irreducible) {
                if s.input.is_x() {
                    continue;
                }
                assert_eq!(tilde(&s.output).unwrap(), s.input, "p={p} {}", s.input);
            }
        }
    }
}

#[test]
fn split_factors_have_irreducible_transforms_downstream() {
    // every split step picks a factor whose own transform the next step consumes
    let trace = build_sequence(&SeqConfig::new(FpPoly::x(md(13)), 7)).unwrap();
    let seq = trace.sequence();
    for pair in seq.windows(2) {
        let next = pair[1];
        match factor_r(pair[0]).unwrap() {
            RFactorization::Irreducible(r) => assert_eq!(&r, next),
            RFactorization::Split { g1, g2 } => assert!(&g1 == next || &g2 == next),
        }
        assert!(is_irreducible(next).unwrap());
    }
    assert_eq!(
        seq.last().unwrap().deg(),
        r_transform(seq[seq.len() - 2]).unwrap().deg()
    );
}

#[test]
fn every_policy_yields_a_valid_sequence() {
    for policy in [TieBreak::DescendingLex, TieBreak::First, TieBreak::Second] {
        for f0 in monic_irreducibles(md(13), 1).filter(|f| !f.is_x_plus_minus_one()) {
            let trace = build_sequence(&SeqConfig::new(f0.clone(), 5).with_tie_break(policy)).unwrap();
            assert!(trace.s1 <= trace.e0 as usize + 1, "{policy} {f0}");
            assert_eq!(trace.s2 as u32, trace.e1 - trace.e0, "{policy} {f0}");
        }
    }
}

#[test]
fn trace_json_survives_a_round_trip() {
    let f0 = FpPoly::parse("x-3", md(7)).unwrap();
    let trace = build_sequence(&SeqConfig::new(f0, 6)).unwrap();
    let back = SeqTrace::from_json(&trace.to_json()).unwrap();
    assert_eq!(back.to_json(), trace.to_json());
    assert_eq!(back.sequence(), trace.sequence());
    assert!(SeqTrace::from_json("{\"format_version\": 2}").is_err());
}

#[test]
fn dot_export_lists_every_edge_once() {
    let g = FunctionalGraph::for_prime_power(md(3), 3).unwrap();
    let dot = export_dot(&g);
    assert_eq!(dot.matches(" -> ").count(), 28);
    assert!(dot.contains("label=\"q = 27\""));
    assert_eq!(dot, export_dot(&FunctionalGraph::for_prime_power(md(3), 3).unwrap()));
}
