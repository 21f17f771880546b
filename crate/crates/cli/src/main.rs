//! Command-line front end for the irrseq library.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use irrseq::graph::FunctionalGraph;
use irrseq::poly::{q_transform, r_transform};
use irrseq::{
    build_sequence, choose_factor, conjugacy_check, export_dot, factor_r, run_verification, tilde,
    verify_tree_structure, Error, FpPoly, PrimeModulus, RFactorization, SeqConfig, StepOutcome, TieBreak, VerifyConfig,
};

#[derive(Parser, Debug)]
#[command(
    name = "irrseq",
    version,
    about = "Irreducible polynomial sequences over odd prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the R-transform (or Q-transform) of a monic polynomial.
    Transform {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        q_transform: bool,
    },
    /// Decide whether f^R is irreducible and split it otherwise.
    Factor {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        poly: String,
    },
    /// Build a sequence of irreducible polynomials starting at --poly.
    Sequence {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 8)]
        steps: usize,
        #[arg(long, default_value_t = TieBreak::DescendingLex)]
        tie_break: TieBreak,
        /// Write the structured trace as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print the minimal polynomial of theta(b) for a root b of --poly.
    Tilde {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        poly: String,
    },
    /// Build the functional graph of theta on P^1(F_q), q = p^n.
    Graph {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        report: bool,
    },
    /// Run the exhaustive property suite.
    Verify {
        #[arg(long, default_value_t = 13)]
        p_max: u64,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        /// Sequence length for the bound checks; by default each run stops
        /// once its degree pattern is settled.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, hide = true, default_value_t = TieBreak::DescendingLex)]
        golden_tie_break: TieBreak,
    },
}

/// A failure with its process exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Reducible(_) => 3,
            Error::InvalidModulus(_)
            | Error::NotMonic(_)
            | Error::ConstantPolynomial(_)
            | Error::ZeroConstantTerm(_)
            | Error::Excluded(_)
            | Error::Parse { .. }
            | Error::FieldTooLarge { .. }
            | Error::InvalidArgument(_) => 2,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = std::result::Result<String, Failure>;

fn parse_input(p: u64, src: &str) -> Result<FpPoly, Failure> {
    let md = PrimeModulus::new(p)?;
    Ok(FpPoly::parse(src, md)?)
}

fn cmd_transform(p: u64, poly: &str, use_q: bool) -> Outcome {
    let f = parse_input(p, poly)?;
    let out = if use_q { q_transform(&f)? } else { r_transform(&f)? };
    Ok(format!("{out}\n"))
}

fn cmd_factor(p: u64, poly: &str) -> Outcome {
    let f = parse_input(p, poly)?;
    Ok(match factor_r(&f)? {
        RFactorization::Irreducible(r) => format!("irreducible: {r}\n"),
        RFactorization::Split { g1, g2 } => {
            let (a, b) = choose_factor(&g1, &g2, TieBreak::DescendingLex);
            format!("split: {a} * {b}\n")
        }
    })
}

fn cmd_sequence(p: u64, poly: &str, steps: usize, tie_break: TieBreak, json: Option<&PathBuf>) -> Outcome {
    let f0 = parse_input(p, poly)?;
    let trace = build_sequence(&SeqConfig::new(f0, steps).with_tie_break(tie_break))?;
    if let Some(path) = json {
        std::fs::write(path, trace.to_json() + "\n")
            .map_err(|e| Failure::new(2, format!("cannot write {}: {e}", path.display())))?;
    }
    let mut out = String::new();
    let _ = writeln!(out, "f0\tdeg={}\tstart\t{}", trace.f0.deg(), trace.f0);
    for s in &trace.steps {
        let outcome = match &s.outcome {
            StepOutcome::Irreducible => "irreducible".to_string(),
            StepOutcome::Split { chosen, .. } => format!("split(g{chosen})"),
        };
        let mark = if s.discarded { "\t[discarded]" } else { "" };
        let _ = writeln!(out, "f{}\tdeg={}\t{outcome}\t{}{mark}", s.index, s.degree(), s.output);
    }
    let _ = writeln!(
        out,
        "e0={} e1={} s1={} s2={} backtracked={}",
        trace.e0, trace.e1, trace.s1, trace.s2, trace.backtracked
    );
    let bound = trace.factorization_bound();
    let ok = |b: bool| if b { "ok" } else { "violated" };
    let _ = writeln!(
        out,
        "bounds: s1={} <= e0+1={} {}; s2={} = e1-e0={} {}; factorizations={} <= {} {}",
        trace.s1,
        trace.e0 + 1,
        ok(trace.s1 <= trace.e0 as usize + 1),
        trace.s2,
        trace.e1 - trace.e0,
        ok(trace.s2 as u32 == trace.e1 - trace.e0),
        trace.factorization_count,
        bound,
        ok(trace.factorization_count <= bound),
    );
    Ok(out)
}

fn cmd_tilde(p: u64, poly: &str) -> Outcome {
    let f = parse_input(p, poly)?;
    let t = tilde(&f)?;
    Ok(format!("{t}\ndegree {}\n", t.deg()))
}

fn cmd_graph(p: u64, n: usize, dot: Option<&PathBuf>, report: bool) -> Outcome {
    let md = PrimeModulus::new(p)?;
    if n == 0 {
        return Err(Failure::new(2, "--n must be positive"));
    }
    let g = FunctionalGraph::for_prime_power(md, n)?;
    let dot_text = export_dot(&g);
    let mut out = String::new();
    match dot {
        Some(path) => std::fs::write(path, &dot_text)
            .map_err(|e| Failure::new(2, format!("cannot write {}: {e}", path.display())))?,
        None if !report => out.push_str(&dot_text),
        None => {}
    }
    if report {
        let tr = verify_tree_structure(&g);
        let depths: Vec<String> = tr.depths().iter().map(u32::to_string).collect();
        let conj = conjugacy_check(&g);
        let pass = |b: bool| if b { "pass" } else { "FAIL" };
        let _ = writeln!(out, "q={}", tr.q);
        let _ = writeln!(out, "nu2(q-1)={}", tr.nu2_q_minus_1);
        let _ = writeln!(out, "periodic nodes={}", tr.roots.len());
        let _ = writeln!(out, "depth={}", depths.join(","));
        let _ = writeln!(out, "child-count violations={}", tr.failures.len());
        for msg in &tr.failures {
            let _ = writeln!(out, "    {msg}");
        }
        let _ = writeln!(out, "tree structure={}", pass(tr.passed()));
        let _ = writeln!(out, "conjugacy={}", pass(conj));
    }
    Ok(out)
}

fn cmd_verify(p_max: u64, n_max: usize, steps: Option<usize>, golden_tie_break: TieBreak) -> Outcome {
    if p_max < 3 || n_max == 0 {
        return Err(Failure::new(2, "--p-max must be at least 3 and --n-max positive"));
    }
    if steps == Some(0) {
        return Err(Failure::new(2, "--steps must be positive"));
    }
    let report = run_verification(&VerifyConfig {
        p_max,
        n_max,
        steps,
        golden_tie_break,
    });
    let text = format!("{report}\n");
    if report.passed() {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::new(1, "verification failed"))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Transform { p, poly, q_transform } => cmd_transform(p, &poly, q_transform),
        Command::Factor { p, poly } => cmd_factor(p, &poly),
        Command::Sequence {
            p,
            poly,
            steps,
            tie_break,
            json,
        } => cmd_sequence(p, &poly, steps, tie_break, json.as_ref()),
        Command::Tilde { p, poly } => cmd_tilde(p, &poly),
        Command::Graph { p, n, dot, report } => cmd_graph(p, n, dot.as_ref(), report),
        Command::Verify {
            p_max,
            n_max,
            steps,
            golden_tie_break,
        } => cmd_verify(p_max, n_max, steps, golden_tie_break),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
