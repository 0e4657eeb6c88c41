//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails, except those listed in `KNOWN_BLOCKED`.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::time::{Duration, Instant};

use ctcsim::db_model::{ctc_map, solve_fixed_point, DbBlock, SolveMethod};
use ctcsim::heisenberg::{
    backpropagate_circuit_traced, evaluate_expectation, gaussian_overlap, heisenberg_bloch, overlap, HeisenbergCircuit,
    TimeDistribution,
};
use ctcsim::qlinalg::{
    circuit_product, cnot, cz, swap, tensor, trace_distance, DensityMatrix, GateName, Mat2, PureStateParams,
};
use ctcsim::scenario::{compare, named_scenario, run_db, CircuitSpec};
use ctcsim::timed_pauli::{conj_pair, letter_matrix, word_mul, PauliLetter, Phase, Tableau2, TimedPauliWord};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that cannot pass as written, with the reason.
const KNOWN_BLOCKED: &[(&str, &str)] = &[(
    "2b",
    "reference closed form puts e^{-2i theta} on |0><1|, but the stated input state \
     a e^{i theta}|0> + b e^{-i theta}|1> gives e^{+2i theta}; only the latter is consistent \
     with the Heisenberg <Y> required by criteria 3 and 5",
)];

const SEED: u64 = 20_240_611;

struct Report {
    id: &'static str,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn check(id: &'static str, title: &'static str, pass: bool, detail: String) -> Report {
    Report { id, title, pass, detail }
}

fn prep(alpha2: f64, theta: f64) -> PureStateParams {
    PureStateParams::from_alpha2(alpha2, theta).unwrap()
}

fn word(s: &str) -> TimedPauliWord {
    s.parse().unwrap()
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn single(gate: &str) -> CircuitSpec {
    named_scenario(gate).unwrap()
}

fn traced_words(c: &HeisenbergCircuit) -> (Vec<TimedPauliWord>, bool) {
    let mut words = Vec::new();
    let mut consistent = true;
    for l in [PauliLetter::Z, PauliLetter::X, PauliLetter::Y] {
        let trace = backpropagate_circuit_traced(c, l).unwrap();
        consistent &= trace.blocks.iter().all(|b| b.result.is_consistent(&b.gate, &b.measured));
        words.push(trace.word);
    }
    (words, consistent)
}

fn criterion_1() -> Report {
    let start = Instant::now();
    let spec = single("cnot");
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let a2 = k as f64 / 49.0;
        let out = run_db(&spec.clone().with_prep(prep(a2, 0.0)), SolveMethod::Eigen).unwrap().output;
        let b2 = 1.0 - a2;
        let expect = Mat2::from_real([[a2 * a2 + b2 * b2, 0.0], [0.0, 2.0 * a2 * b2]]);
        worst = worst.max(out.matrix().max_abs_diff(&expect));
    }
    let elapsed = start.elapsed();
    check(
        "1",
        "CNOT density-matrix output is diag(a^4+b^4, 2a^2b^2)",
        worst < 1e-10 && elapsed < Duration::from_secs(1),
        format!("50 alpha2 values, max |err| {worst:.1e} (tol 1e-10), {elapsed:.1?} (limit 1 s)"),
    )
}

/// Fixed point and output for CZ with the off-diagonal phase `e^{sign·2iθ}`.
fn cz_reference(p: &PureStateParams, sign: f64) -> (Mat2, Mat2) {
    let (a, b, t) = (p.alpha(), p.beta(), p.theta());
    let z = a * a - b * b;
    let ph = C64::from_polar(1.0, sign * 2.0 * t);
    let build = |coef: f64| {
        Mat2::from_rows([[c(a * a, 0.0), ph * (coef * a * b)], [ph.conj() * (coef * a * b), c(b * b, 0.0)]])
    };
    (build(z), build(z * z))
}

fn criterion_2() -> Vec<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let block = DbBlock::new(circuit_product(&[GateName::Cz, GateName::Swap]).unwrap()).unwrap();
    let (mut modulus_err, mut special_err, mut agree_err, mut literal_err, mut conj_err) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut both_ok = true;
    for i in 0..100 {
        let p = if i < 4 {
            prep(rng.random_range(0.0..=1.0), [0.0, FRAC_PI_2, 0.0, FRAC_PI_2][i])
        } else {
            common::random_prep(&mut rng)
        };
        let rho_in = p.density();
        let eigen = solve_fixed_point(&block, &rho_in, SolveMethod::Eigen).unwrap();
        let iterated = solve_fixed_point(&block, &rho_in, SolveMethod::Iterate).unwrap();
        both_ok &= solve_fixed_point(&block, &rho_in, SolveMethod::Both).is_ok();
        agree_err = agree_err.max(eigen.fixed_point.matrix().max_abs_diff(iterated.fixed_point.matrix()));

        let (fp_lit, out_lit) = cz_reference(&p, -1.0);
        let (fp_conj, out_conj) = cz_reference(&p, 1.0);
        let lit = eigen.fixed_point.matrix().max_abs_diff(&fp_lit).max(eigen.output.matrix().max_abs_diff(&out_lit));
        let conj = eigen.fixed_point.matrix().max_abs_diff(&fp_conj).max(eigen.output.matrix().max_abs_diff(&out_conj));
        literal_err = literal_err.max(lit);
        conj_err = conj_err.max(conj);
        if i < 4 {
            special_err = special_err.max(lit);
        }
        for (got, want) in [(eigen.fixed_point.matrix(), &fp_lit), (eigen.output.matrix(), &out_lit)] {
            let diag = (got[(0, 0)] - want[(0, 0)]).norm().max((got[(1, 1)] - want[(1, 1)]).norm());
            let off = (got[(0, 1)].norm() - want[(0, 1)].norm()).abs();
            modulus_err = modulus_err.max(diag).max(off);
        }
    }
    vec![
        check(
            "2a",
            "CZ fixed point and output: diagonals, off-diagonal moduli, solver agreement",
            modulus_err < 1e-10 && special_err < 1e-10 && agree_err < 1e-8 && both_ok,
            format!(
                "100 preps: diag/modulus err {modulus_err:.1e}, entrywise at theta in {{0, pi/2}} {special_err:.1e} \
                 (tol 1e-10), iterate vs eigen {agree_err:.1e} (tol 1e-8)"
            ),
        ),
        check(
            "2b",
            "CZ fixed point and output entrywise against the e^{-2i theta} reference",
            literal_err < 1e-10,
            format!(
                "100 preps: max |err| {literal_err:.1e} (tol 1e-10); against e^{{+2i theta}} the max |err| is {conj_err:.1e}"
            ),
        ),
    ]
}

fn criterion_3() -> Report {
    let c = HeisenbergCircuit::single(Tableau2::cz());
    let (words, _) = traced_words(&c);
    let words_ok = words == [word("Z'"), word("Z X' Z''"), word("Z Y' Z''")];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p = common::random_prep(&mut rng);
        let r = heisenberg_bloch(&c, &p, &TimeDistribution::OrthogonalLimit).unwrap().to_bloch().unwrap();
        let (a, b, t) = (p.alpha(), p.beta(), p.theta());
        let z = a * a - b * b;
        let expect = [z * z * 2.0 * a * b * (2.0 * t).cos(), -z * z * 2.0 * a * b * (2.0 * t).sin(), z];
        worst = worst.max(r.components().iter().zip(expect).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
    }
    check(
        "3",
        "Heisenberg CZ words and Bloch vector",
        words_ok && worst < 1e-12,
        format!(
            "words {:?}, 100 preps max |err| {worst:.1e} (tol 1e-12)",
            words.iter().map(|w| w.to_string()).collect::<Vec<_>>()
        ),
    )
}

fn criterion_4() -> Report {
    let c = HeisenbergCircuit::single(Tableau2::cnot());
    let (words, _) = traced_words(&c);
    let words_ok = words == [word("Z Z'"), TimedPauliWord::tail_from(PauliLetter::X, 1), word("Z Y' X'' X'''…")];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p = common::random_regular_prep(&mut rng);
        let r = heisenberg_bloch(&c, &p, &TimeDistribution::OrthogonalLimit).unwrap().to_bloch().unwrap();
        let z = p.alpha2() - (1.0 - p.alpha2());
        let expect = [0.0, 0.0, z * z];
        worst = worst.max(r.components().iter().zip(expect).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
    }
    let singular = [0.0, FRAC_PI_2].iter().all(|&t| {
        let p = PureStateParams::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, t).unwrap();
        heisenberg_bloch(&c, &p, &TimeDistribution::OrthogonalLimit).unwrap().is_singular()
    });
    check(
        "4",
        "Heisenberg CNOT words, Bloch vector, singular point",
        words_ok && worst < 1e-12 && singular,
        format!("words ok {words_ok}, 100 preps max |err| {worst:.1e} (tol 1e-12), a = b singular {singular}"),
    )
}

fn criterion_5() -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut worst: f64 = 0.0;
    let mut all_agree = true;
    for name in ["cz", "cnot"] {
        let spec = single(name);
        for _ in 0..200 {
            let p = common::random_regular_prep(&mut rng);
            let r = compare(&spec, &p, SolveMethod::Eigen);
            all_agree &= r.flags.agree;
            worst = worst.max(r.max_component_delta.unwrap_or(f64::INFINITY));
        }
    }
    check(
        "5",
        "cross-engine agreement on single-block scenarios",
        worst < 1e-9 && all_agree,
        format!("2 x 200 preps, max component delta {worst:.1e} (tol 1e-9)"),
    )
}

fn criterion_6() -> Report {
    let spec = single("chained_cnot_hadamard");
    let (words, consistent) = traced_words(&spec.heisenberg_circuit().unwrap());
    let words_ok = consistent
        && words == [PauliLetter::Z, PauliLetter::X, PauliLetter::Y].map(|l| TimedPauliWord::single(l, 1))
        && words.iter().all(|w| w.phase() == Phase::ONE);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let (mut db_err, mut heis_err, mut td_err) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..50 {
        let p = if i == 0 { prep(0.75, 0.0) } else { common::random_regular_prep(&mut rng) };
        let r = compare(&spec, &p, SolveMethod::Eigen);
        let db = r.db.as_ref().unwrap();
        db_err = db_err.max(trace_distance(&db.output, &DensityMatrix::maximally_mixed()));
        heis_err = heis_err.max(r.bloch_heisenberg().unwrap().max_component_delta(&p.bloch()));
        td_err = td_err.max((r.trace_distance.unwrap() - 0.5 * p.bloch().norm()).abs());
    }
    check(
        "6",
        "chained circuit: mixed output vs identity evolution",
        words_ok && db_err < 1e-10 && heis_err < 1e-12 && td_err < 1e-9,
        format!(
            "words Z', X', Y' {words_ok}; 50 preps: density-matrix distance to I/2 {db_err:.1e} (tol 1e-10), \
             Heisenberg vs prepared {heis_err:.1e}, trace distance vs |r|/2 {td_err:.1e} (tol 1e-9)"
        ),
    )
}

fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let inner: f64 = (1..n).map(|i| f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(lo) + f(hi) + inner) * h / 3.0
}

fn criterion_7() -> Report {
    let d = 1.7;
    let g = |u: f64| (-(u * u) / (2.0 * d * d)).exp();
    let at = |tau: f64| overlap(&TimeDistribution::gaussian(d, tau).unwrap());
    let unit = at(0.0) == 1.0;
    let far = at(10.0 * d) < 1e-9;
    let mut quad_err: f64 = 0.0;
    for ratio in [0.5, 1.0, 2.0, 4.0] {
        let tau = ratio * d;
        let num = simpson(|u| g(u) * g(u - tau), -15.0 * d, 15.0 * d + tau, 6000);
        let den = simpson(|u| g(u) * g(u), -15.0 * d, 15.0 * d, 6000);
        quad_err = quad_err.max((gaussian_overlap(d, tau) - num / den).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let mut zz_err: f64 = 0.0;
    for _ in 0..100 {
        let p = common::random_prep(&mut rng);
        let t = TimeDistribution::gaussian(d, rng.random_range(0.0..5.0 * d)).unwrap();
        let (a2, b2) = (p.alpha2(), 1.0 - p.alpha2());
        let expect = (a2 - b2).powi(2) + 4.0 * a2 * b2 * overlap(&t);
        let got = evaluate_expectation(&word("Z Z'"), &p, &t).unwrap().value().unwrap();
        zz_err = zz_err.max((got - expect).abs());
    }
    check(
        "7",
        "Gaussian overlap model",
        unit && far && quad_err < 1e-6 && zz_err < 1e-9,
        format!(
            "w(0) = 1 {unit}, w(10d) < 1e-9 {far}, quadrature max |err| {quad_err:.1e} (tol 1e-6), \
             <ZZ'> max |err| {zz_err:.1e} (tol 1e-9)"
        ),
    )
}

fn random_word(rng: &mut impl Rng, tail: PauliLetter) -> TimedPauliWord {
    let letters: Vec<(i64, PauliLetter)> = (0..rng.random_range(0..5))
        .map(|_| (rng.random_range(-2..5), PauliLetter::ALL[rng.random_range(0..4)]))
        .collect();
    let start = rng.random_bool(0.5).then(|| (rng.random_range(-1..5), tail));
    TimedPauliWord::from_parts(Phase::from_power(rng.random_range(0..4)), letters, start).unwrap()
}

fn criterion_8() -> Report {
    let start = Instant::now();
    let mut oracle_ok = true;
    for (t, u) in [(Tableau2::cz(), cz()), (Tableau2::cnot(), cnot()), (Tableau2::swap(), swap())] {
        for a in PauliLetter::ALL {
            for b in PauliLetter::ALL {
                let expect = u.adjoint() * tensor(&letter_matrix(a), &letter_matrix(b)) * u;
                let (s, ua, lb) = conj_pair(&t, a, b);
                let got = tensor(&letter_matrix(ua), &letter_matrix(lb)).scale(s.to_complex());
                oracle_ok &= got.max_abs_diff(&expect) < 1e-12;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let mut cptp_ok = true;
    for _ in 0..1000 {
        let block = DbBlock::new(common::random_unitary4(&mut rng)).unwrap();
        let out = ctc_map(&block, &common::random_density(&mut rng), &common::random_density(&mut rng));
        cptp_ok &= DensityMatrix::with_tolerance(*out.matrix(), 1e-12).is_ok();
    }

    let mut consistent = true;
    for name in ["cz", "cnot", "chained_cnot_hadamard"] {
        consistent &= traced_words(&single(name).heisenberg_circuit().unwrap()).1;
    }

    let mut assoc_ok = true;
    for _ in 0..1000 {
        let tail = PauliLetter::ALL[rng.random_range(0..4)];
        let (a, b, c) = (random_word(&mut rng, tail), random_word(&mut rng, tail), random_word(&mut rng, tail));
        let left = word_mul(&word_mul(&a, &b).unwrap(), &c).unwrap();
        let right = word_mul(&a, &word_mul(&b, &c).unwrap()).unwrap();
        assoc_ok &= left == right;
    }
    let elapsed = start.elapsed();
    check(
        "8",
        "property suites",
        oracle_ok && cptp_ok && consistent && assoc_ok && elapsed < Duration::from_secs(30),
        format!(
            "conj_pair 48/48 {oracle_ok}, CPTP x1000 {cptp_ok}, block consistency {consistent}, \
             associativity x1000 {assoc_ok}, {elapsed:.1?} (limit 30 s)"
        ),
    )
}

fn main() {
    let mut reports = vec![criterion_1()];
    reports.extend(criterion_2());
    reports.extend([criterion_3(), criterion_4(), criterion_5(), criterion_6(), criterion_7(), criterion_8()]);

    let mut unexpected = 0;
    for r in &reports {
        let blocked = KNOWN_BLOCKED.iter().find(|(id, _)| *id == r.id);
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        println!("criterion {:<3} {verdict}  {}: {}", r.id, r.title, r.detail);
        match (r.pass, blocked) {
            (false, Some((_, why))) => println!("               known blocked: {why}"),
            (false, None) => unexpected += 1,
            (true, Some(_)) => {
                println!("               listed as blocked but passed; update KNOWN_BLOCKED");
                unexpected += 1;
            }
            (true, None) => {}
        }
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    println!("acceptance: {passed}/{} criteria pass, {unexpected} unexpected result(s)", reports.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
