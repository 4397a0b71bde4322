//! The end-to-end verification suite. Each criterion is a pure function
//! returning a [`CriterionOutcome`]; the acceptance test target asserts
//! them one by one and the CLI `selftest` subcommand prints them as a
//! table. Detail strings contain only deterministic content (never
//! timings) so rendered output can be compared byte-for-byte across runs
//! and thread budgets.

use std::time::{Duration, Instant};

use num_traits::Zero;

use crate::closedforms::{
    a2_d, a2_mu1, det_a1_closed, det_a2_closed, det_absdiff_closed, det_b_closed,
    hankel_transform_check, verify_lemma_2_1, verify_lemma_2_2, verify_spectrum,
};
use crate::exact::{pow2, rat, Int, Rat};
use crate::families::{
    a025276, gen_a1, gen_a2, gen_absdiff, gen_b, gen_jmk, gen_pow2_minus_one, FamilyId,
};
use crate::matrix::{det_bareiss, det_bareiss_rat, IntMatrix};
use crate::permanent::{
    per_naive, per_ryser, per_ryser_mod_threaded, scan_conjecture, ConjectureId, ZMod,
};
use crate::reduction::reduce_and_evaluate;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: usize,
    pub label: &'static str,
    pub pass: bool,
    /// Deterministic summary of the checked values (no timings).
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionOutcome {
    fn finish(
        id: usize,
        label: &'static str,
        start: Instant,
        budget: Duration,
        pass: bool,
        detail: String,
    ) -> Self {
        let elapsed = start.elapsed();
        CriterionOutcome {
            id,
            label,
            pass: pass && elapsed <= budget,
            detail,
            elapsed,
        }
    }
}

const OEIS_A079034_FIRST_15: &str =
    "1, 2, 7, 21, 51, 106, 197, 337, 541, 826, 1211, 1717, 2367, 3186, 4201";

/// `det [j-k+d_jk] = 1 + n^2(n^2-1)/12` for n = 1..40, and the first
/// fifteen values reproduce OEIS A079034 byte for byte.
pub fn criterion_1() -> CriterionOutcome {
    let start = Instant::now();
    let mut pass = true;
    let mut first15 = Vec::new();
    for n in 1..=40usize {
        let computed = det_bareiss(&gen_a1(n)).unwrap();
        pass &= computed == det_a1_closed(n);
        if n <= 15 {
            first15.push(computed.to_string());
        }
    }
    let list = first15.join(", ");
    pass &= list == OEIS_A079034_FIRST_15;
    CriterionOutcome::finish(
        1,
        "det(A1) closed form, n = 1..40",
        start,
        Duration::from_secs(10),
        pass,
        format!("first 15 determinants: {list}"),
    )
}

/// `det [2^(j-k)-(-1)^d_jk] = (4^n - n^2 2^(n-1) + 1)/2` for n = 1..40,
/// and the known radical forms of `mu_1` for n = 3..6 reconcile
/// exactly with the computed extension tag `d`.
pub fn criterion_2() -> CriterionOutcome {
    let start = Instant::now();
    let mut pass = true;
    for n in 1..=40usize {
        pass &= det_bareiss_rat(&gen_a2(n)).unwrap() == det_a2_closed(n);
    }
    // mu_1 = 2 + coef * sqrt(radicand) i  <=>  coef^2 * radicand = -d
    let known_forms: [(usize, Rat, i64); 4] = [
        (3, rat(1, 2), 13),
        (4, rat(1, 4), 194),
        (5, rat(1, 4), 561),
        (6, rat(3, 8), 626),
    ];
    let mut recon = Vec::new();
    for (n, coef, radicand) in known_forms {
        let d = a2_d(n);
        let ok = &coef * &coef * rat(radicand, 1) == -d.clone();
        // and the eigenvalue product accounts for the determinant
        let ok = ok && a2_mu1(n).norm() * pow2(n as i64 - 2) == det_a2_closed(n);
        pass &= ok;
        recon.push(format!("n={n}: d = {d}"));
    }
    CriterionOutcome::finish(
        2,
        "det(A2) closed form, n = 1..40, with mu_1 radical reconciliation",
        start,
        Duration::from_secs(10),
        pass,
        recon.join("; "),
    )
}

/// `det [|j-k|+d_jk] = f(n)` from the parity case formula for n = 1..40.
/// The Bareiss oracle sides with the case formula at n = 4 (value 1);
/// the OEIS A166445 display is offset by one from that position onward,
/// which the crate documents rather than patches.
pub fn criterion_3() -> CriterionOutcome {
    let start = Instant::now();
    let mut pass = true;
    let mut first12 = Vec::new();
    for n in 1..=40usize {
        let computed = det_bareiss(&gen_b(n)).unwrap();
        pass &= computed == det_b_closed(n);
        if n <= 12 {
            first12.push(computed.to_string());
        }
    }
    pass &= det_b_closed(4) == Int::from(1);
    CriterionOutcome::finish(
        3,
        "det(B) case formula, n = 1..40 (oracle confirms f(4) = 1)",
        start,
        Duration::from_secs(5),
        pass,
        format!("f(1..12) = {}", first12.join(", ")),
    )
}

/// Robinson's `det [|j-k|] = (-1)^(n-1)(n-1)2^(n-2)` for n = 1..40, and
/// the two vanishing determinants `det [j-k] = det [2^(j-k)-1] = 0` for
/// n = 3..12.
pub fn criterion_4() -> CriterionOutcome {
    let start = Instant::now();
    let mut pass = true;
    for n in 1..=40usize {
        pass &= det_bareiss(&gen_absdiff(n)).unwrap() == det_absdiff_closed(n);
    }
    for n in 3..=12usize {
        pass &= det_bareiss(&gen_jmk(n)).unwrap().is_zero();
        pass &= det_bareiss_rat(&gen_pow2_minus_one(n)).unwrap().is_zero();
    }
    CriterionOutcome::finish(
        4,
        "det[|j-k|] closed form, n = 1..40; det[j-k] and det[2^(j-k)-1] vanish, n = 3..12",
        start,
        Duration::from_secs(10),
        pass,
        format!(
            "det[|j-k|] at n = 40: {}",
            det_absdiff_closed(40)
        ),
    )
}

/// Both eigen-identities hold exactly (n = 2..30 and n = 1..30), and the
/// full spectrum verification passes for both families for n = 3..25:
/// eigen-equations, family rank n-2, charpoly factorization coefficient
/// by coefficient, and determinant-as-eigenvalue-product.
pub fn criterion_5() -> CriterionOutcome {
    let start = Instant::now();
    let mut pass = true;
    let mut first_fail = String::new();
    for n in 2..=30usize {
        let out = verify_lemma_2_1(n);
        if !out.pass && first_fail.is_empty() {
            first_fail = format!("eigen identity (A1) fails at n = {n}");
        }
        pass &= out.pass;
    }
    for n in 1..=30usize {
        let out = verify_lemma_2_2(n);
        if !out.pass && first_fail.is_empty() {
            first_fail = format!("auxiliary identities (A2) fail at n = {n}");
        }
        pass &= out.pass;
    }
    for fam in [FamilyId::A1, FamilyId::A2] {
        for n in 3..=25usize {
            let rep = verify_spectrum(&fam, n).unwrap();
            if !rep.verified() && first_fail.is_empty() {
                first_fail = format!("spectrum of {fam} fails at n = {n}");
            }
            pass &= rep.verified();
        }
    }
    let detail = if pass {
        "identities n <= 30; spectra (eigen-equations, rank n-2, charpoly, det product) n = 3..25"
            .to_string()
    } else {
        first_fail
    };
    CriterionOutcome::finish(
        5,
        "eigen-identities and full spectra for A1 and A2",
        start,
        Duration::from_secs(60),
        pass,
        detail,
    )
}

/// The reduction pipeline replays exactly for n = 3..40: determinant
/// preserved at every stage, sign bookkeeping exact, terminal case
/// structure asserted, and the final value equals the case formula.
pub fn criterion_6() -> CriterionOutcome {
    let start = Instant::now();
    let mut pass = true;
    let mut cases = [0usize; 4];
    let mut first_fail = String::new();
    for n in 3..=40usize {
        let trace = reduce_and_evaluate(n).unwrap();
        if !trace.ok && first_fail.is_empty() {
            first_fail = format!(
                "n = {n}: {}",
                trace.failure.clone().unwrap_or_else(|| "value mismatch".into())
            );
        }
        pass &= trace.ok;
        cases[n % 4] += 1;
    }
    let detail = if pass {
        format!(
            "38 sizes replayed; terminal cases hit: mod0 x{}, mod1 x{}, mod2 x{}, mod3 x{}",
            cases[0], cases[1], cases[2], cases[3]
        )
    } else {
        first_fail
    };
    CriterionOutcome::finish(
        6,
        "determinant reduction replay, n = 3..40",
        start,
        Duration::from_secs(60),
        pass,
        detail,
    )
}

/// The Hankel transform of A025276 reproduces `f(n)` for n = 1..12, and
/// the generated sequence matches the ten listed OEIS terms.
pub fn criterion_7() -> CriterionOutcome {
    let start = Instant::now();
    let rep = hankel_transform_check(12);
    let seq = a025276(10);
    let want: Vec<Int> = [1i64, 0, 0, 1, 2, 4, 8, 17, 38, 88]
        .iter()
        .map(|&x| Int::from(x))
        .collect();
    let pass = rep.pass && seq == want;
    let dets: Vec<String> = rep.rows.iter().map(|r| r.hankel_det.clone()).collect();
    CriterionOutcome::finish(
        7,
        "Hankel transform of A025276 equals f(n), n = 1..12",
        start,
        Duration::from_secs(10),
        pass,
        format!("hankel dets: {}", dets.join(", ")),
    )
}

/// Deterministic xorshift-style generator so the random matrix suite is
/// identical on every platform and run.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[lo, hi]`.
    fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }
}

/// Ryser equals the naive oracle on all four families and on 200 random
/// integer matrices with n <= 8, and the modular engine agrees with the
/// reduced exact permanent on the same suite.
pub fn criterion_8() -> CriterionOutcome {
    let start = Instant::now();
    let mut pass = true;
    let moduli = [2u64, 5, 9, 25, 97];
    let check_int = |m: &IntMatrix, pass: &mut bool| {
        let exact = per_ryser(m).unwrap();
        *pass &= exact == per_naive(m).unwrap();
        for &md in &moduli {
            let want = ZMod::from_int(&exact, md).unwrap().residue();
            *pass &= per_ryser_mod_threaded(m, md, 1).unwrap() == want;
        }
    };
    for n in 1..=8usize {
        check_int(&gen_a1(n), &mut pass);
        check_int(&gen_b(n), &mut pass);
        check_int(&gen_absdiff(n), &mut pass);
        // A2 is rational: exact engines only
        pass &= per_ryser(&gen_a2(n)).unwrap() == per_naive(&gen_a2(n)).unwrap();
    }
    let mut rng = SplitMix64(0x00C0FFEE);
    for _ in 0..200 {
        let n = rng.range(1, 8) as usize;
        let m = IntMatrix::from_fn(n, n, |_, _| Int::from(rng.range(-2, 2)));
        check_int(&m, &mut pass);
    }
    CriterionOutcome::finish(
        8,
        "per_ryser = per_naive on families and 200 random matrices; modular consistency",
        start,
        Duration::from_secs(120),
        pass,
        format!(
            "per(A1, 1..8) = {}",
            (1..=8)
                .map(|n| per_ryser(&gen_a1(n)).unwrap().to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
    )
}

fn render_report(rep: &crate::permanent::ConjectureReport) -> String {
    rep.rows
        .iter()
        .map(|r| serde_json::to_string(r).unwrap())
        .collect::<Vec<_>>()
        .join("\n")
}

/// The four permanent congruences hold at desk scale: 4.1i for all
/// primes p <= 23, the other three for odd primes p <= 19. Single- and
/// four-worker scans produce byte-identical reports, each within its
/// time budget.
pub fn criterion_9() -> CriterionOutcome {
    let start = Instant::now();
    let mut pass = true;
    let mut summaries = Vec::new();
    let scans = [
        (ConjectureId::C41i, 23u64),
        (ConjectureId::C41ii, 19),
        (ConjectureId::C42, 19),
        (ConjectureId::S1123, 19),
    ];
    for (id, p_max) in scans {
        let t1 = Instant::now();
        let single = scan_conjecture(id, p_max, 1).unwrap();
        let single_time = t1.elapsed();
        let t4 = Instant::now();
        let quad = scan_conjecture(id, p_max, 4).unwrap();
        let quad_time = t4.elapsed();
        pass &= single.pass && quad.pass;
        pass &= render_report(&single) == render_report(&quad);
        pass &= single_time <= Duration::from_secs(300);
        pass &= quad_time <= Duration::from_secs(120);
        summaries.push(format!(
            "{id} p<={p_max}: {} primes, all {}",
            single.rows.len(),
            if single.pass { "pass" } else { "FAIL" }
        ));
    }
    CriterionOutcome::finish(
        9,
        "permanent congruence scans at desk scale, deterministic across workers",
        start,
        Duration::from_secs(600),
        pass,
        summaries.join("; "),
    )
}

/// Renders outcomes into the deterministic report format shared by the
/// acceptance tests and the CLI.
pub fn render_outcomes(outs: &[CriterionOutcome]) -> String {
    outs.iter()
        .map(|o| {
            format!(
                "criterion {:2} [{}] {}: {}",
                o.id,
                if o.pass { "PASS" } else { "FAIL" },
                o.label,
                o.detail
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn run_value_criteria() -> Vec<CriterionOutcome> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ]
}

/// Reruns criteria 1–9 and demands rendered output byte-identical to the
/// baseline render. Worker-count independence of the computed values is
/// already part of criterion 9; this adds run-to-run identity on top.
fn determinism_against(baseline: &str) -> CriterionOutcome {
    let start = Instant::now();
    let second = render_outcomes(&run_value_criteria());
    let pass = baseline == second;
    CriterionOutcome::finish(
        10,
        "selftest determinism across repeated runs and thread budgets",
        start,
        Duration::from_secs(1200),
        pass,
        format!("rendered report: {} bytes, stable", second.len()),
    )
}

/// Runs the suite twice and demands byte-identical rendered output.
pub fn criterion_10() -> CriterionOutcome {
    let baseline = render_outcomes(&run_value_criteria());
    determinism_against(&baseline)
}

/// The full acceptance suite in criterion order. Criteria 1–9 run twice
/// in total: once for their own verdicts and once inside the
/// determinism check of criterion 10.
pub fn run_all() -> Vec<CriterionOutcome> {
    let mut outs = run_value_criteria();
    let baseline = render_outcomes(&outs);
    outs.push(determinism_against(&baseline));
    outs
}
