//! Acceptance gate: one check per criterion, each printing a single
//! PASS/FAIL line with its runtime. Runs without the libtest harness, so the
//! lines always show: `cargo test -p dyckmat --test acceptance`.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestError, TestRunner};

use dyckmat::expand::strings_compatible_with;
use dyckmat::overlap::{all_overlaps, first_overlap};
use dyckmat::setgen::all_anchors;
use dyckmat::words::OverlapDirection;
use dyckmat::{
    anchor_row, cardinality, catalan, cross_check, enumerate_dyck, find_expansion_strings, overlap_at,
    strings_overlap, validate_member, verify_expansion, verify_set, BinaryMatrix, BitString, Limits, MatrixSet,
    Offset, SetSpec, WitnessKind,
};

type Outcome = Result<String, String>;

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn check(&mut self, id: u32, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS [{id}] {name} ({elapsed:.2?}): {detail}"),
            Err(why) => {
                println!("FAIL [{id}] {name} ({elapsed:.2?}): {why}");
                self.failures.push(format!("[{id}] {name}"));
            }
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bs(s: &str) -> BitString {
    s.parse().unwrap()
}

fn matrix(rows: &[&str]) -> BinaryMatrix {
    BinaryMatrix::new(&rows.iter().map(|r| bs(r)).collect::<Vec<_>>()).unwrap()
}

/// Binomial coefficients by Pascal's rule; `C_k = binom(2k, k) / (k + 1)`.
fn catalan_oracle(k: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..2 * k {
        let mut next = vec![1u128; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row[k] / (k as u128 + 1)
}

/// Balanced strings with no negative prefix, by filtering all `2^len`.
fn dyck_count_oracle(len: usize) -> usize {
    (0u32..1 << len)
        .filter(|&v| {
            let mut h = 0i32;
            for i in (0..len).rev() {
                h += if v >> i & 1 == 1 { 1 } else { -1 };
                if h < 0 {
                    return false;
                }
            }
            h == 0
        })
        .count()
}

fn criterion_1() -> Outcome {
    let expected = [1u128, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];
    for (k, &e) in expected.iter().enumerate() {
        let got = catalan(k as u32).map_err(|e| e.to_string())?;
        ensure(got == e, || format!("catalan({k}) = {got}, expected {e}"))?;
        ensure(catalan_oracle(k) == e, || format!("oracle disagrees at {k}"))?;
    }
    let lim = Limits::default();
    for (l, &count) in expected.iter().enumerate().take(9).skip(1) {
        let n = enumerate_dyck(2 * l, &lim).map_err(|e| e.to_string())?.len();
        let oracle = dyck_count_oracle(2 * l);
        ensure(n == oracle && n as u128 == count, || {
            format!("|D_{}| = {n}, oracle {oracle}", 2 * l)
        })?;
    }
    Ok("C_0..C_10 exact; |D_2l| matches for l <= 8".into())
}

/// Printed reference values, `2 ≤ m ≤ 10`, keyed by column width.
const PRINTED: [(usize, [&str; 9]); 7] = [
    (4, ["1", "2", "4", "8", "16", "32", "64", "128", "256"]),
    (5, ["2", "4", "8", "16", "32", "64", "128", "256", "512"]),
    (6, ["6", "54", "486", "4374", "3.9e4", "3.5e5", "3.1e6", "2.8e7", "2.6e8"]),
    (7, ["8", "104", "1352", "1.7e4", "2.2e5", "3.0e6", "3.8e7", "5.0e8", "6.5e9"]),
    (8, ["21", "630", "1.9e4", "5.7e5", "1.7e7", "5.1e8", "1.5e10", "4.6e11", "1.4e13"]),
    (9, ["26", "1040", "4.1e4", "1.6e6", "6.6e7", "2.7e9", "1.1e11", "4.2e12", "1.7e14"]),
    (10, ["67", "6.2e3", "5.9e5", "5.5e7", "5.2e9", "4.9e11", "4.6e13", "4.3e15", "4.1e17"]),
];

/// Exact match for integer cells; for `d.de<k>` cells the value's leading two
/// digits, truncated or rounded half-up, must read `dd` at exponent `k`.
fn printed_agrees(printed: &str, value: u128) -> bool {
    let Some((mantissa, exp)) = printed.split_once('e') else {
        return printed.parse::<u128>().ok() == Some(value);
    };
    let want: String = mantissa.chars().filter(|c| *c != '.').collect();
    let exp: usize = exp.parse().unwrap();
    let digits = value.to_string();
    if digits.len() < 2 {
        return false;
    }
    let lead: u32 = digits[..2].parse().unwrap();
    let third = digits.as_bytes().get(2).map_or(0, |b| b - b'0');
    let truncated = (lead, digits.len() - 1);
    let rounded = match lead + u32::from(third >= 5) {
        100 => (10, digits.len()),
        r => (r, digits.len() - 1),
    };
    let printed = (want.parse::<u32>().unwrap(), exp);
    printed == truncated || printed == rounded
}

fn table_criterion(widths: &[usize]) -> Outcome {
    let mut cells = 0;
    for &(n, col) in PRINTED.iter().filter(|(n, _)| widths.contains(n)) {
        for (i, printed) in col.iter().enumerate() {
            let m = i + 2;
            let value = cardinality(m, n).map_err(|e| e.to_string())?;
            ensure(printed_agrees(printed, value), || {
                format!("({m},{n}): formula {value}, printed {printed}")
            })?;
            cells += 1;
        }
    }
    Ok(format!("{cells} cells agree"))
}

fn criterion_4() -> Outcome {
    let pairs = [(2, 4), (3, 4), (4, 4), (2, 6), (3, 6), (4, 6), (2, 8), (3, 8), (2, 5), (3, 5), (2, 7), (3, 7)];
    let lim = Limits::default();
    let mut notes = Vec::new();
    for (m, n) in pairs {
        let spec = SetSpec::with_default_anchor(m, n).map_err(|e| e.to_string())?;
        let r = cross_check(&spec, &lim).map_err(|e| e.to_string())?;
        let enumerated = r.enumerated_value.ok_or(format!("({m},{n}) was not enumerated"))?;
        ensure(Some(enumerated) == r.formula_value, || {
            format!("({m},{n}): enumerated {enumerated}, formula {:?}", r.formula_value)
        })?;
        ensure(!r.has_undocumented_mismatch(), || format!("({m},{n}): undocumented mismatch"))?;
        if r.table_agrees == Some(false) {
            ensure(n == 5, || format!("({m},{n}) disagrees with the table"))?;
            let note = r.note.ok_or(format!("({m},{n}): table mismatch without a note"))?;
            notes.push(format!("({m},{n}) {note}"));
        }
    }
    ensure(notes.len() == 1, || format!("expected one documented n=5 cell, got {notes:?}"))?;
    Ok(format!("12 pairs enumerate to the closed form; {}", notes[0]))
}

fn criterion_5() -> Outcome {
    let lim = Limits::default();
    let mut summary = Vec::new();
    for (m, n, expected) in [(3, 6, Some(54)), (4, 6, Some(486)), (3, 7, Some(104)), (3, 8, Some(630)), (3, 5, None), (3, 4, None)] {
        let spec = SetSpec::with_default_anchor(m, n).map_err(|e| e.to_string())?;
        let set = MatrixSet::new(&spec, &lim).map_err(|e| e.to_string())?.to_vec(&lim).map_err(|e| e.to_string())?;
        if let Some(e) = expected {
            ensure(set.len() == e, || format!("({m},{n}) has {} matrices, expected {e}", set.len()))?;
        }
        let report = verify_set(&set, false).map_err(|e| e.to_string())?;
        let count = set.len() as u128;
        ensure(report.pass && report.violations.is_empty(), || {
            format!("({m},{n}): {} violations, first {:?}", report.violations.len(), report.violations.first())
        })?;
        ensure(report.checked_pairs == count * (count + 1) / 2, || format!("({m},{n}): pair count"))?;
        summary.push(format!("{m}x{n}:{count}"));
    }
    Ok(format!("zero violations including self-checks [{}]", summary.join(" ")))
}

fn criterion_6() -> Outcome {
    let top = ["010101", "011101", "111100"];
    let known_pairs = [
        (
            [top[0], top[1], top[2], "100011"],
            ["100111", "011110", "111000", "010101"],
            Offset::new(2, 3),
            WitnessKind::Corner,
        ),
        (
            [top[0], top[1], top[2], "100110"],
            ["111100", "100110", "111000", "110101"],
            Offset::new(2, 0),
            WitnessKind::Vertical,
        ),
        (
            [top[0], top[1], top[2], "100011"],
            ["011110", "011110", "001000", "110101"],
            Offset::new(0, 4),
            WitnessKind::Horizontal,
        ),
    ];
    let mut seen = Vec::new();
    for (i, (a, b, off, kind)) in known_pairs.iter().enumerate() {
        let (a, b) = (matrix(a), matrix(b));
        let all = all_overlaps(&a, &b, true).map_err(|e| e.to_string())?;
        ensure(all.iter().any(|w| w.offset == *off && w.kind == *kind), || {
            format!("pair {}: no {kind} witness at {off:?}; found {all:?}", i + 1)
        })?;
        let first = first_overlap(&a, &b, true).map_err(|e| e.to_string())?.unwrap();
        seen.push(format!("{kind} at ({},{}) first ({},{})", off.dr, off.dc, first.offset.dr, first.offset.dc));
    }

    let lim = Limits::default();
    let spec = SetSpec::with_default_anchor(3, 6).unwrap();
    let a1 = anchor_row(&spec);
    let members = MatrixSet::new(&spec, &lim).unwrap().to_vec(&lim).unwrap();
    let mut runs = 0;
    for (idx, member) in members.iter().enumerate() {
        for row in 1..3 {
            let mut altered = members.clone();
            altered[idx] = member.with_row(row, &a1).unwrap();
            let report = verify_set(&altered, false).map_err(|e| e.to_string())?;
            ensure(!report.pass, || format!("member {idx} row {} replaced still passes", row + 1))?;
            let vertical = report
                .violations
                .iter()
                .any(|v| (v.a == idx || v.b == idx) && v.witness.kind == WitnessKind::Vertical);
            ensure(vertical, || {
                format!("member {idx} row {}: no vertical witness in {:?}", row + 1, report.violations)
            })?;
            runs += 1;
        }
    }
    Ok(format!("{}; {runs} A1-row substitutions all fail with a vertical witness", seen.join(", ")))
}

fn criterion_7() -> Outcome {
    let lim = Limits::default();
    let x = bs("11111100");
    let spec = SetSpec::parse(3, 8, Some("101010")).map_err(|e| e.to_string())?;
    let found = find_expansion_strings(&spec, &lim).map_err(|e| e.to_string())?;
    ensure(found.contains(&x), || "11111100 not among the candidates".into())?;
    let mut sizes = Vec::new();
    for m in [3, 4] {
        let spec = spec.with_rows(m).unwrap();
        let report = verify_expansion(&spec, &x, &lim).map_err(|e| e.to_string())?;
        ensure(report.pass, || format!("m = {m}: {:?}", report.violations.first()))?;
        sizes.push(format!("m={m}: {} pairs", report.checked_pairs));
    }
    let other = bs("11100010");
    let compatible = strings_compatible_with(&other, &lim).map_err(|e| e.to_string())?;
    ensure(!compatible.contains(&x), || "11111100 accepted for 11100010".into())?;
    let w = strings_overlap(&x, &other).map_err(|e| e.to_string())?.ok_or("no overlap witness")?;
    ensure(w.length == 5 && w.direction == OverlapDirection::PrefixOfSecond, || {
        format!("witness {w:?}")
    })?;
    ensure(x.suffix(5) == other.prefix(5), || "suffix/prefix differ".into())?;
    Ok(format!(
        "{} candidates; expansion passes ({}); 11100010 rejects 11111100 via shared 11100 (k = 5)",
        found.len(),
        sizes.join(", ")
    ))
}

const CASES: u32 = 10_000;

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    })
}

fn bits(max_len: usize) -> impl Strategy<Value = BitString> {
    prop::collection::vec(any::<bool>(), 1..=max_len).prop_map(BitString::from_bits)
}

fn matrix_pair() -> impl Strategy<Value = (BinaryMatrix, BinaryMatrix, Offset)> {
    (1usize..=5, 1usize..=7).prop_flat_map(|(m, n)| {
        let cells = prop::collection::vec(any::<bool>(), m * n);
        let off = (-(m as isize) + 1..m as isize, -(n as isize) + 1..n as isize);
        (cells.clone(), cells, off).prop_map(move |(a, b, (dr, dc))| {
            let mk = |c: Vec<bool>| {
                BinaryMatrix::new(&c.chunks(n).map(|r| BitString::from_bits(r.to_vec())).collect::<Vec<_>>()).unwrap()
            };
            (mk(a), mk(b), Offset::new(dr, dc))
        })
    })
}

fn all_specs() -> Vec<SetSpec> {
    let lim = Limits::default();
    let mut specs = Vec::new();
    for n in 4..=12 {
        for anchor in all_anchors(n, &lim).unwrap() {
            for m in 2..=7 {
                specs.push(SetSpec::new(m, n, anchor.clone()).unwrap());
            }
        }
    }
    specs
}

fn fail<T: std::fmt::Debug>(name: &str, e: TestError<T>) -> String {
    format!("{name}: {e}")
}

fn criterion_8() -> Outcome {
    runner()
        .run(&(bits(16), bits(16)), |(x, y)| {
            let xy = strings_overlap(&x, &y).unwrap();
            let yx = strings_overlap(&y, &x).unwrap();
            prop_assert_eq!(xy.map(|o| o.length), yx.map(|o| o.length));
            if let (Some(a), Some(b)) = (xy, yx) {
                if a.direction == OverlapDirection::PrefixOfSecond {
                    prop_assert_eq!(b.direction, OverlapDirection::PrefixOfFirst);
                }
            }
            Ok(())
        })
        .map_err(|e| fail("strings_overlap symmetry", e))?;

    runner()
        .run(&matrix_pair(), |(a, b, off)| {
            prop_assert_eq!(overlap_at(&a, &b, off).unwrap(), overlap_at(&b, &a, off.negate()).unwrap());
            Ok(())
        })
        .map_err(|e| fail("offset negation", e))?;

    let specs = all_specs();
    let lim = Limits::default();
    let sets: Vec<MatrixSet> = specs.iter().map(|s| MatrixSet::new(s, &lim).unwrap()).collect();
    runner()
        .run(&(0..sets.len(), any::<u128>()), |(i, raw)| {
            let set = &sets[i];
            let index = raw % set.len();
            let m = set.unrank(index).unwrap();
            let verdict = validate_member(&m, set.spec()).unwrap();
            prop_assert!(verdict.is_member(), "{:?} index {} -> {:?}", set.spec(), index, verdict);
            Ok(())
        })
        .map_err(|e| fail("generated matrices are members", e))?;

    let set46 = MatrixSet::new(&SetSpec::with_default_anchor(4, 6).unwrap(), &lim).unwrap();
    runner()
        .run(&(0..set46.len()), |index| {
            let m = set46.unrank(index).unwrap();
            prop_assert_eq!(set46.rank(&m).unwrap(), index);
            Ok(())
        })
        .map_err(|e| fail("unrank/rank round trip", e))?;

    Ok(format!("4 properties x {CASES} cases"))
}

fn main() {
    let mut gate = Gate { failures: Vec::new() };
    let sec = Duration::from_secs;
    gate.check(1, "Catalan numbers and Dyck enumeration", sec(1), criterion_1);
    gate.check(2, "even-width table values", sec(1), || table_criterion(&[4, 6, 8, 10]));
    gate.check(3, "odd-width table values", sec(1), || table_criterion(&[7, 9]));
    gate.check(4, "closed form vs enumeration", sec(30), criterion_4);
    gate.check(5, "set verification", sec(60), criterion_5);
    gate.check(6, "negative controls", Duration::MAX, criterion_6);
    gate.check(7, "expansion", sec(10), criterion_7);
    gate.check(8, "property suites", Duration::MAX, criterion_8);
    if gate.failures.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failed {:?}", gate.failures);
        std::process::exit(1);
    }
}
