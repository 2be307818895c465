//! Acceptance criteria 1 to 10, one PASS/FAIL line each.
//!
//! The process fails when a criterion outside `KNOWN_UNATTAINABLE` fails, or
//! when one inside it unexpectedly passes.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use ringspectra::{verify_instance, VerifyOptions};
use ringspectra_core::builders::{is_prime, prime_power};
use ringspectra_core::formulas::{
    classify_case, classify_under, predict_j2zero, predict_unit_even_maxnil, predict_unit_odd, predict_zero_maxnil,
    unit_square_count_even, unit_square_count_odd, CaseTag, J2Case, Theorem, Unsupported,
};
use ringspectra_core::local::is_local;
use ringspectra_core::{
    parse_ring_spec, ElementId, FiniteRing, IntPoly, LocalProfile, OrderingPlan, ProductMatrix, DEFAULT_ORDER_CAP,
};

/// Criterion 6 asserts the printed characteristic-2 unit branch, which the
/// oracle contradicts on every ring tested.
const KNOWN_UNATTAINABLE: &[u32] = &[6];

const SEED: u64 = 0x5eed_2024;
const RANDOM_ORDERINGS: usize = 5;

struct Outcome {
    pass: bool,
    detail: String,
}

fn ring(spec: &str) -> FiniteRing {
    parse_ring_spec(spec).unwrap().build(DEFAULT_ORDER_CAP).unwrap()
}

fn oracle(r: &FiniteRing, u: ElementId) -> IntPoly {
    ProductMatrix::natural(r, u).unwrap().charpoly_lowrank().unwrap()
}

fn lam(k: u64) -> IntPoly {
    IntPoly::lambda().pow(k)
}

fn lin(c: i64) -> IntPoly {
    IntPoly::linear(c)
}

fn el(r: &FiniteRing, label: &str) -> ElementId {
    r.find_label(label).unwrap()
}

fn c1() -> Outcome {
    let r = ring("zn:27");
    let sq = -(lam(21) * lin(3).pow(2) * lin(-3).pow(4));
    let nonsq = -(lam(21) * lin(3).pow(3) * lin(-3).pow(3));
    let a9 = ProductMatrix::natural(&r, el(&r, "9")).unwrap();
    let a18 = ProductMatrix::natural(&r, el(&r, "18")).unwrap();
    let ok9 = a9.charpoly_lowrank().unwrap() == sq && a9.charpoly_dense().unwrap() == sq;
    let ok18 = a18.charpoly_lowrank().unwrap() == nonsq && a18.charpoly_dense().unwrap() == nonsq;
    Outcome { pass: ok9 && ok18, detail: format!("A_9 {ok9}, A_18 {ok18}") }
}

fn c2() -> Outcome {
    let r = ring("zn:8");
    let one = oracle(&r, el(&r, "1")) == lam(4) * lin(-1).pow(4);
    let others = ["3", "5", "7"].iter().all(|u| oracle(&r, el(&r, u)) == lam(4) * lin(-1).pow(2) * lin(1).pow(2));
    Outcome { pass: one && others, detail: format!("u=1 {one}, u=3,5,7 {others}") }
}

fn c3() -> Outcome {
    let mut bad = Vec::new();
    for q in [2i64, 3, 5, 7] {
        let r = ring(&format!("zn:{}", q * q));
        let cubic = IntPoly::from_i64s(&[q * (q - 1) * (q - 1), -q * (q - 1), -q, 1]);
        let mut expected = lam((q * q - 3) as u64) * cubic;
        if q % 2 == 1 {
            expected = -expected;
        }
        if oracle(&r, r.zero()) != expected || predict_zero_maxnil(q as u64, 2).unwrap() != expected {
            bad.push(q);
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("q in {{2,3,5,7}}, failing {bad:?}") }
}

/// Local rings of maximal nilpotency in the built-in families with `|R| ≤ 729`.
fn maximal_family() -> Vec<String> {
    let mut specs = Vec::new();
    for m in 2..=729u64 {
        if prime_power(m).is_some() {
            specs.push(format!("zn:{m}"));
        }
    }
    for p in (2..=729u64).filter(|&p| is_prime(p)) {
        let mut e = 2;
        while p.pow(e) <= 729 {
            specs.push(format!("polyquot:zn:{p};f=x^{e}"));
            e += 1;
        }
    }
    for q in 2..=27u64 {
        if let Some((p, r)) = prime_power(q) {
            specs.push(format!("polyquot:field:{p},{r};f=x^2"));
        }
    }
    specs
}

fn c4_and_c9() -> (Outcome, Outcome) {
    let specs = maximal_family();
    let (mut bad4, mut bad9, mut not_max) = (Vec::new(), Vec::new(), Vec::new());
    for s in &specs {
        let r = ring(s);
        let p = LocalProfile::compute(&r).unwrap();
        if !p.is_maximal() {
            not_max.push(s.clone());
            continue;
        }
        let a = ProductMatrix::natural(&r, r.zero()).unwrap();
        let o = a.charpoly_lowrank().unwrap();
        if predict_zero_maxnil(p.q, p.n).unwrap() != o {
            bad4.push(s.clone());
        }
        let rank = a.rank();
        if rank != p.n as usize + 1 || rank + o.lambda_valuation().unwrap() != r.order() {
            bad9.push(s.clone());
        }
    }
    let n = specs.len();
    (
        Outcome {
            pass: bad4.is_empty() && not_max.is_empty(),
            detail: format!("{n} rings, failing {bad4:?}, not maximal {not_max:?}"),
        },
        Outcome { pass: bad9.is_empty(), detail: format!("{n} rings with rank n+1, failing {bad9:?}") },
    )
}

fn c5() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for s in ["zn:9", "zn:25", "zn:27", "polyquot:zn:3;f=x^2", "polyquot:field:3,2;f=x^2"] {
        let r = ring(s);
        let p = LocalProfile::compute(&r).unwrap();
        let mut mismatched = 0;
        for u in r.units() {
            let tag = classify_under(&r, u, &p, Theorem::OddUnit).unwrap();
            let sq = r.is_unit_square(u);
            let expected_tag = if sq { CaseTag::UnitOddSq } else { CaseTag::UnitOddNonsq };
            if tag != expected_tag || predict_unit_odd(p.q, p.n, sq).unwrap().expand() != oracle(&r, u) {
                mismatched += 1;
            }
        }
        let squares = r.units().into_iter().filter(|&u| r.is_unit_square(u)).count() as u64;
        let count_ok = squares == unit_square_count_odd(p.q, p.n);
        pass &= mismatched == 0 && count_ok;
        notes.push(format!("{s}: {mismatched} mismatches, squares {squares}"));
    }
    Outcome { pass, detail: notes.join("; ") }
}

fn c6() -> Outcome {
    let mut char2 = (0, 0);
    for n in 2..=5 {
        let r = ring(&format!("polyquot:zn:2;f=x^{n}"));
        let p = LocalProfile::compute(&r).unwrap();
        for u in r.units() {
            let tag = classify_under(&r, u, &p, Theorem::EvenUnit).unwrap();
            let f = predict_unit_even_maxnil(p.q, p.n, p.characteristic, r.is_unit_square(u)).unwrap();
            char2.0 += 1;
            if tag == CaseTag::UnitEvenChar2 && f.expand() == oracle(&r, u) {
                char2.1 += 1;
            }
        }
    }
    let mut char2n = (0, 0);
    let mut counts_ok = true;
    for m in [8, 16, 32] {
        let r = ring(&format!("zn:{m}"));
        let p = LocalProfile::compute(&r).unwrap();
        for u in r.units() {
            let tag = classify_under(&r, u, &p, Theorem::EvenUnit).unwrap();
            let sq = r.is_unit_square(u);
            let expected_tag = if sq { CaseTag::UnitEvenChar2nSq } else { CaseTag::UnitEvenChar2nNonsq };
            let f = predict_unit_even_maxnil(p.q, p.n, p.characteristic, sq).unwrap();
            char2n.0 += 1;
            if tag == expected_tag && f.expand() == oracle(&r, u) {
                char2n.1 += 1;
            }
        }
        let squares = r.units().into_iter().filter(|&u| r.is_unit_square(u)).count() as u64;
        counts_ok &= squares == unit_square_count_even(p.q, p.n);
    }
    let pass = char2.0 == char2.1 && char2n.0 == char2n.1 && counts_ok;
    Outcome {
        pass,
        detail: format!(
            "char 2: {}/{} units match; char 2^n: {}/{} units match, square counts {}",
            char2.1, char2.0, char2n.1, char2n.0, counts_ok
        ),
    }
}

fn c7() -> Outcome {
    let mut seen = std::collections::BTreeSet::new();
    let mut bad = Vec::new();
    let mut total = 0;
    for s in ["zn:4", "nullext:2,1;n=2", "nullext:2,1;n=3", "nullext:3,1;n=2", "nullext:2,2;n=2", "polyquot:zn:3;f=x^2"] {
        let r = ring(s);
        let p = LocalProfile::compute(&r).unwrap();
        for u in r.elements() {
            total += 1;
            let tag = classify_case(&r, u, &p).unwrap();
            let case = match tag {
                CaseTag::J2ZeroU0 => J2Case::Zero,
                CaseTag::J2ZeroRadical => J2Case::Radical,
                CaseTag::J2ZeroUnitSqEven | CaseTag::J2ZeroUnitSqOdd => J2Case::UnitSquare,
                CaseTag::J2ZeroUnitNonsqEven | CaseTag::J2ZeroUnitNonsqOdd => J2Case::UnitNonsquare,
                other => {
                    bad.push(format!("{s} u={} tag {other}", r.label(u)));
                    continue;
                }
            };
            seen.insert(tag.as_str());
            if predict_j2zero(p.q, p.n, case).unwrap().expand() != oracle(&r, u) {
                bad.push(format!("{s} u={}", r.label(u)));
            }
        }
    }
    Outcome {
        pass: bad.is_empty() && seen.len() == 6,
        detail: format!("{total} instances, {} branches seen, failing {bad:?}", seen.len()),
    }
}

/// Every built-in family member with `|R| ≤ 128`, local or not.
fn small_rings() -> Vec<String> {
    let mut specs: Vec<String> = (2..=128).map(|m| format!("zn:{m}")).collect();
    for q in 2..=128u64 {
        if let Some((p, r)) = prime_power(q) {
            if r > 1 {
                specs.push(format!("field:{p},{r}"));
            }
            for n in 2..=7 {
                if q.pow(n) <= 128 && r == 1 {
                    specs.push(format!("polyquot:zn:{p};f=x^{n}"));
                }
                if q.pow(n) <= 128 {
                    specs.push(format!("nullext:{p},{r};n={n}"));
                }
            }
            if r > 1 && q * q <= 128 {
                specs.push(format!("polyquot:field:{p},{r};f=x^2"));
            }
        }
    }
    specs.extend(
        [
            "polyquot:zn:4;f=x^2+x+1",
            "polyquot:zn:4;f=x^2+2",
            "polyquot:zn:4;f=x^2",
            "polyquot:zn:8;f=x^2+x+1",
            "polyquot:zn:4;f=x^3+x+1",
            "polyquot:zn:9;f=x^2+1",
            "polyquot:zn:2;f=x^2+x",
            "polyquot:zn:3;f=x^2+1",
            "product:[zn:2][zn:2]",
            "product:[zn:2][zn:4]",
            "product:[zn:4][zn:4]",
            "product:[zn:3][zn:3]",
            "product:[zn:2][zn:8]",
            "product:[field:2,2][zn:2]",
            "product:[zn:2][product:[zn:2][zn:2]]",
            "product:[zn:9][zn:3]",
        ]
        .map(String::from),
    );
    specs
}

fn c8() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(SEED);
    let specs = small_rings();
    let (mut instances, mut bad) = (0usize, Vec::new());
    for s in &specs {
        let r = ring(s);
        let n = r.order();
        let mut sum = vec![0u8; n * n];
        for u in r.elements() {
            instances += 1;
            let a = ProductMatrix::natural(&r, u).unwrap();
            for i in 0..n {
                for j in a.bits().row_ones(i) {
                    sum[i * n + j] += 1;
                }
            }
            let low = a.charpoly_lowrank().unwrap();
            let mut ok = a.bits().is_symmetric() && a.trace() == r.square_roots(u).len();
            ok &= a.charpoly_dense().unwrap() == low;
            for _ in 0..RANDOM_ORDERINGS {
                let mut perm: Vec<ElementId> = r.elements().collect();
                perm.shuffle(&mut rng);
                let b = ProductMatrix::build(&r, u, OrderingPlan::explicit(n, perm).unwrap()).unwrap();
                ok &= b.charpoly_dense().unwrap() == low;
            }
            if !ok {
                bad.push(format!("{s} u={}", r.label(u)));
            }
        }
        if sum.iter().any(|&c| c != 1) {
            bad.push(format!("{s} partition"));
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("{} rings, {instances} instances, failing {bad:?}", specs.len()) }
}

fn c10() -> Outcome {
    let mut bad = Vec::new();
    let z4 = ring("zn:4");
    let p4 = LocalProfile::compute(&z4).unwrap();
    for u in z4.units() {
        let tag = classify_under(&z4, u, &p4, Theorem::EvenUnit).unwrap();
        let rep = verify_instance(&z4, "zn:4", u, &VerifyOptions::default()).unwrap();
        if tag != CaseTag::Unsupported(Unsupported::EvenUnitCharacteristic) || rep.oracle.coefficients.len() != 5 {
            bad.push(format!("zn:4 u={} {tag}", z4.label(u)));
        }
    }
    let mut strata = 0;
    for s in ["zn:8", "zn:16", "zn:32", "zn:64", "polyquot:zn:2;f=x^4", "polyquot:zn:2;f=x^6", "polyquot:field:2,2;f=x^3"] {
        let r = ring(s);
        assert!(is_local(&r));
        let p = LocalProfile::compute(&r).unwrap();
        for u in r.elements().filter(|&u| u != r.zero()) {
            let k = p.depth(u);
            if k == 0 || k % 2 == 1 {
                continue;
            }
            strata += 1;
            let tag = classify_case(&r, u, &p).unwrap();
            let rep = verify_instance(&r, s, u, &VerifyOptions::default()).unwrap();
            let oracle_ok = rep.oracle.coefficients.len() == r.order() + 1 && rep.predicted.is_none();
            if tag != CaseTag::Unsupported(Unsupported::StratumEvenKEvenQ) || !oracle_ok {
                bad.push(format!("{s} u={} {tag}", r.label(u)));
            }
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("zn:4 units and {strata} even-depth strata, failing {bad:?}") }
}

fn timed(f: impl FnOnce() -> Outcome, bound: Duration) -> (Outcome, Duration, Duration) {
    let t = Instant::now();
    let o = f();
    (o, t.elapsed(), bound)
}

fn main() {
    let s = Duration::from_secs;
    let mut results: Vec<(u32, &str, Outcome, Duration, Duration)> = Vec::new();
    let mut push = |id, name, (o, e, b): (Outcome, Duration, Duration)| results.push((id, name, o, e, b));
    push(1, "Z_27 strata", timed(c1, s(1)));
    push(2, "Z_8 units", timed(c2, s(1)));
    push(3, "Z_{q^2} zero", timed(c3, s(5)));
    let t = Instant::now();
    let (o4, o9) = c4_and_c9();
    let e = t.elapsed();
    push(4, "zero, maximal nilpotency", (o4, e, s(120)));
    push(5, "odd units", timed(c5, s(120)));
    push(6, "even units", timed(c6, s(120)));
    push(7, "J^2 = 0", timed(c7, s(60)));
    push(8, "property suite", timed(c8, s(300)));
    push(9, "rank of A_0", (o9, e, s(120)));
    push(10, "gap reporting", timed(c10, s(60)));

    let mut unexpected = 0;
    for (id, name, o, elapsed, bound) in &results {
        let pass = o.pass && elapsed <= bound;
        let known = KNOWN_UNATTAINABLE.contains(id);
        let note = match (pass, known) {
            (false, true) => " [known unattainable]",
            (true, true) => " [expected to fail]",
            _ => "",
        };
        if pass == known {
            unexpected += 1;
        }
        println!(
            "criterion {id:>2} ({name}): {}{note}; {:.3}s of {}s; {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            bound.as_secs(),
            o.detail
        );
    }
    let passed = results.iter().filter(|(_, _, o, e, b)| o.pass && e <= b).count();
    println!("acceptance: {passed}/{} criteria pass, {unexpected} unexpected", results.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
