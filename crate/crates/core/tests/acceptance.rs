//! Acceptance criteria, one line each. Runs as a plain binary so the lines
//! are always shown; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use ginv_core::block4::{antidiag_inverses, check_lemma_4_1, BlockMatrix2x2};
use ginv_core::gen::{
    gen_core_invertible, gen_orthogonal_pair, generate, random_matrix, rng_from_seed, Family, GenConfig, Instance,
};
use ginv_core::pierce::{triangular_core_inverse, triangular_group_inverse};
use ginv_core::suite::check_instance;
use ginv_core::theorems::check_pair;
use ginv_core::{
    core_inverse, core_inverse_via_projection, group_inverse, moore_penrose, run_suite, verify_axioms,
    ComplexMatrix, InverseKind, Outcome, SuiteConfig, SuiteId, TheoremId, Tolerance,
};

fn tol() -> Tolerance {
    Tolerance::default()
}

/// Instance `seed` of the core-invertible corpus: dims 1..8, any rank.
fn corpus(seed: u64) -> ComplexMatrix {
    let (n, r) = GenConfig::default().draw(&mut rng_from_seed(seed));
    gen_core_invertible(n, r, seed)
}

fn real(rows: usize, cols: usize, v: &[f64]) -> ComplexMatrix {
    ComplexMatrix::real(rows, cols, v)
}

fn abs_err(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    (a - b).max_abs()
}

struct Check {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: String) -> Check {
    Check { ok, detail }
}

fn core_axioms() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut bad = 0;
    for seed in 0..500 {
        let a = corpus(seed);
        match core_inverse(&a, tol()).and_then(|x| verify_axioms(InverseKind::Core, &a, &x, tol())) {
            Ok(rep) => {
                worst = worst.max(rep.max_residual());
                if rep.max_residual() > 1e-9 {
                    bad += 1;
                }
            }
            Err(_) => bad += 1,
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        bad == 0 && secs < 10.0,
        format!("500 instances, {bad} bad, max residual {worst:.1e}, {secs:.2} s"),
    )
}

fn route_agreement() -> Check {
    let mut worst = 0.0f64;
    let mut bad = 0;
    for seed in 0..500 {
        let a = corpus(seed);
        match (core_inverse(&a, tol()), core_inverse_via_projection(&a, tol())) {
            (Ok(x), Ok(y)) => {
                let d = x.rel_dist(&y);
                worst = worst.max(d);
                if d > 1e-8 {
                    bad += 1;
                }
            }
            _ => bad += 1,
        }
    }
    verdict(bad == 0, format!("500 instances, {bad} bad, max rel error {worst:.1e}"))
}

fn one_three_invariance() -> Check {
    let mut worst = 0.0f64;
    let mut bad = 0;
    for seed in 0..200 {
        let a = corpus(seed);
        let n = a.rows();
        let (Ok(core), Ok(g)) = (core_inverse(&a, tol()), group_inverse(&a, tol())) else {
            bad += 1;
            continue;
        };
        let mp = moore_penrose(&a, tol());
        let proj = (&mp * &a).complement();
        let mut rng = rng_from_seed(seed ^ 0x5eed);
        for _ in 0..3 {
            let w = random_matrix(&mut rng, n, n);
            let x = &mp + &(&proj * &w);
            let candidate = ginv_core::matrix::chain(&[&g, &a, &x]);
            let d = candidate.rel_dist(&core);
            worst = worst.max(d);
            if d > 1e-8 {
                bad += 1;
            }
        }
    }
    verdict(bad == 0, format!("200 instances x 3 W, {bad} bad, max rel error {worst:.1e}"))
}

fn suite_line(id: TheoremId, instances: usize, seed: u64) -> (bool, usize, String) {
    let cfg = SuiteConfig::new(SuiteId::One(id), instances, seed);
    let rep = run_suite(&cfg).expect("valid config");
    let a = &rep.aggregate;
    let table: Vec<String> = rep.per_theorem[id.as_str()].truth_table.iter().map(|(k, v)| format!("{k}={v}")).collect();
    (
        a.fail == 0,
        a.ambiguous,
        format!(
            "{}: pass {} fail {} not_met {} ambiguous {} [{}]",
            id.as_str(),
            a.pass,
            a.fail,
            a.not_met,
            a.ambiguous,
            table.join(" ")
        ),
    )
}

fn lemma_suites() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for id in [TheoremId::Lemma2_1, TheoremId::Lemma2_2, TheoremId::Lemma3_1, TheoremId::Lemma3_3] {
        let (green, _, line) = suite_line(id, 300, 4);
        ok &= green;
        parts.push(line);
    }
    verdict(ok, parts.join("; "))
}

fn biconditional_suites() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for id in [
        TheoremId::Theorem2_4,
        TheoremId::Corollary2_5,
        TheoremId::Theorem2_6,
        TheoremId::Corollary2_7,
        TheoremId::Theorem3_4,
        TheoremId::Corollary3_5,
    ] {
        let (green, ambiguous, line) = suite_line(id, 500, 5);
        ok &= green && (ambiguous as f64) < 0.02 * 500.0;
        parts.push(line);
    }
    verdict(ok, parts.join("; "))
}

fn lemma_3_2() -> Check {
    let mut bad = 0;
    let mut worst = 0.0f64;
    for seed in 0..300u64 {
        let (n, r) = GenConfig::default().draw(&mut rng_from_seed(seed));
        let (a, b) = gen_orthogonal_pair(n, r, seed);
        let s = &a + &b;
        match core_inverse(&s, tol()).and_then(|x| verify_axioms(InverseKind::Core, &s, &x, tol())) {
            Ok(rep) if rep.holds => worst = worst.max(rep.max_residual()),
            _ => bad += 1,
        }
    }
    verdict(bad == 0, format!("300 pairs, {bad} bad, max axiom residual {worst:.1e}"))
}

fn triangular_formulas() -> Check {
    let mut bad = 0;
    let (mut worst_agree, mut worst_concl) = (0.0f64, 0.0f64);
    for seed in 0..300u64 {
        let (n, k) = GenConfig::default().draw(&mut rng_from_seed(seed));
        let Instance::Pierce { p, a } = generate(Family::Triangular, n, k, seed) else {
            unreachable!("triangular family yields (p, a)")
        };
        let direct = (group_inverse(&a, tol()), core_inverse(&a, tol()));
        let tri = (triangular_group_inverse(&p, &a, tol()), triangular_core_inverse(&p, &a, tol()));
        let (Ok(g), Ok(c)) = direct else {
            bad += 1;
            continue;
        };
        let (Ok(tg), Ok(tc)) = tri else {
            bad += 1;
            continue;
        };
        let agree = tg.rel_dist(&g).max(tc.rel_dist(&c));
        let concl = ginv_core::matrix::chain(&[&p, &c, &p.complement()]).norm_fro() / (1.0 + c.norm_fro());
        worst_agree = worst_agree.max(agree);
        worst_concl = worst_concl.max(concl);
        if agree > 1e-8 || concl > 1e-9 {
            bad += 1;
        }
    }
    verdict(
        bad == 0,
        format!("300 instances, {bad} bad, formula rel error {worst_agree:.1e}, p a^core p^pi {worst_concl:.1e}"),
    )
}

fn lemma_4_1() -> Check {
    let mut found = 0;
    let mut bad = 0;
    let mut worst = 0.0f64;
    let cfg = GenConfig::default();
    let mut seed = 0u64;
    while found < 200 && seed < 2000 {
        let (n, r) = cfg.draw(&mut rng_from_seed(seed));
        let inst = generate(Family::Antidiag, n, r, seed);
        seed += 1;
        let Instance::Antidiag { b, c } = inst else { unreachable!() };
        let Ok(v) = check_lemma_4_1(&b, &c, tol()) else { continue };
        if !v.hypotheses_met() || v.ambiguous() {
            continue;
        }
        found += 1;
        let n = b.rows();
        let z = ComplexMatrix::zeros(n, n);
        let q = ComplexMatrix::from_blocks(&z, &b, &c, &z);
        match (antidiag_inverses(&b, &c, tol()), core_inverse(&q, tol()), group_inverse(&q, tol())) {
            (Ok(f), Ok(qc), Ok(qg)) => {
                let d = f.core.rel_dist(&qc).max(f.core_alt.rel_dist(&qc)).max(f.group.rel_dist(&qg));
                worst = worst.max(d);
                if d > 1e-8 {
                    bad += 1;
                }
            }
            _ => bad += 1,
        }
    }
    verdict(
        found == 200 && bad == 0,
        format!("{found} passing pairs, {bad} bad, max rel error {worst:.1e}"),
    )
}

fn block_theorems() -> Check {
    let mut met = 0;
    let mut bad = 0;
    let cfg = GenConfig::default();
    let cases = [
        (TheoremId::Theorem4_2, Family::Block4),
        (TheoremId::Theorem4_4, Family::Block4Single),
        (TheoremId::Corollary4_3, Family::Block4Swapped),
        (TheoremId::Corollary4_5, Family::Block4SingleSwapped),
    ];
    for (id, family) in cases {
        for seed in 0..150u64 {
            let (n, r) = cfg.draw(&mut rng_from_seed(seed));
            let inst = generate(family, n, r, seed);
            let Instance::Block(m) = &inst else { unreachable!() };
            let Ok(v) = check_instance(id, &inst, tol()) else {
                bad += 1;
                continue;
            };
            if !v.hypotheses_met() {
                continue;
            }
            met += 1;
            let big = m.assemble();
            let ok = core_inverse(&big, tol())
                .and_then(|x| verify_axioms(InverseKind::Core, &big, &x, tol()))
                .map(|r| r.holds)
                .unwrap_or(false);
            if !ok {
                bad += 1;
            }
        }
    }

    let one = real(1, 1, &[1.0]);
    let zero = real(1, 1, &[0.0]);
    let two = real(1, 1, &[2.0]);
    let swap = BlockMatrix2x2::new(zero.clone(), one.clone(), one.clone(), zero.clone()).unwrap();
    let scaled = BlockMatrix2x2::new(two.clone(), zero.clone(), zero.clone(), two.clone()).unwrap();
    let mut fixed_ok = true;
    for (blocks, expected) in [
        (&swap, real(2, 2, &[0.0, 1.0, 1.0, 0.0])),
        (&scaled, real(2, 2, &[0.5, 0.0, 0.0, 0.5])),
    ] {
        for id in [TheoremId::Theorem4_2, TheoremId::Theorem4_4] {
            let inst = Instance::Block(blocks.clone());
            let pass = check_instance(id, &inst, tol()).map(|v| v.outcome() == Outcome::Pass).unwrap_or(false);
            let exact = core_inverse(&blocks.assemble(), tol()).map(|x| abs_err(&x, &expected) <= 1e-12).unwrap_or(false);
            fixed_ok &= pass && exact;
        }
    }
    verdict(
        bad == 0 && met > 0 && fixed_ok,
        format!("{met} hypothesis-satisfying block instances, {bad} bad; fixed instances {}", if fixed_ok { "ok" } else { "FAILED" }),
    )
}

fn worked_examples() -> Check {
    let mut errs = Vec::new();
    let x = core_inverse(&real(2, 2, &[1.0, 1.0, 0.0, 0.0]), tol()).unwrap();
    errs.push(("[[1,1],[0,0]]^core", abs_err(&x, &real(2, 2, &[1.0, 0.0, 0.0, 0.0]))));

    let a = real(2, 2, &[2.0, 0.0, 0.0, 0.0]);
    let b = real(2, 2, &[0.0, 0.0, 1.0, 3.0]);
    let v = check_pair(TheoremId::Theorem2_4, &a, &b, tol()).unwrap().unwrap();
    let third = 1.0 / 3.0;
    let expected = [
        ("a^#", real(2, 2, &[0.5, 0.0, 0.0, 0.0])),
        ("a^pi", real(2, 2, &[0.0, 0.0, 0.0, 1.0])),
        ("b^pi", real(2, 2, &[1.0, 0.0, -third, 0.0])),
        ("b^core", real(2, 2, &[0.0, 0.0, 0.0, third])),
        ("(a+b)^core", real(2, 2, &[0.5, 0.0, -1.0 / 6.0, third])),
    ];
    let sides = v.outcome() == Outcome::Pass && v.side1_holds() && v.side2_holds() == Some(true);
    errs.push(("thm2.4 sides", if sides { 0.0 } else { f64::INFINITY }));
    for (name, want) in &expected {
        let got = v.witnesses.get(*name).map(|w| abs_err(&w.value, want)).unwrap_or(f64::INFINITY);
        errs.push((name, got));
    }

    let b = real(1, 1, &[1.0]);
    let c = real(1, 1, &[2.0]);
    let f = antidiag_inverses(&b, &c, tol()).unwrap();
    let want = real(2, 2, &[0.0, 0.5, 1.0, 0.0]);
    errs.push(("Q^core", abs_err(&f.core, &want).max(abs_err(&f.core_alt, &want))));
    let q = real(2, 2, &[0.0, 1.0, 2.0, 0.0]);
    errs.push(("core_inverse(Q)", abs_err(&core_inverse(&q, tol()).unwrap(), &want)));

    let worst = errs.iter().map(|e| e.1).fold(0.0, f64::max);
    let failing: Vec<&str> = errs.iter().filter(|e| e.1.is_nan() || e.1 > 1e-12).map(|e| e.0).collect();
    verdict(
        failing.is_empty(),
        format!("{} values, max abs error {worst:.1e}{}", errs.len(), if failing.is_empty() { String::new() } else { format!(", failing {failing:?}") }),
    )
}

fn determinism() -> Check {
    let cfg = SuiteConfig::new(SuiteId::All, 100, 1);
    let first = run_suite(&cfg).unwrap();
    let second = run_suite(&cfg).unwrap();
    let same = first.deterministic_json() == second.deterministic_json();
    let a = &first.aggregate;
    verdict(
        same && first.ok(),
        format!(
            "suite all x100 seed 1: identical={same}, pass {} fail {} not_met {} ambiguous {}",
            a.pass, a.fail, a.not_met, a.ambiguous
        ),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 11] = [
        ("core-axiom suite", core_axioms),
        ("route agreement", route_agreement),
        ("(1,3)-choice invariance", one_three_invariance),
        ("lemma suites", lemma_suites),
        ("biconditional suites", biconditional_suites),
        ("lem3.2 orthogonal sums", lemma_3_2),
        ("lem2.3 triangular formulas", triangular_formulas),
        ("lem4.1 antidiagonal forms", lemma_4_1),
        ("block theorems", block_theorems),
        ("worked examples", worked_examples),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        if !out.ok {
            failed += 1;
        }
        println!(
            "[{}] {:>2}. {name}: {} ({:.1} s)",
            if out.ok { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
