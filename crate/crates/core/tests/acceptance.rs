//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.
//!
//! Every criterion is checked twice: once through the library's own suites
//! and once against the string-level oracle in `common`, which shares no code
//! with the library.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use pdwords::verify::{
    factors_up_to, sweep, verify_envelope_returns, verify_extension, verify_general,
    verify_structure, verify_structure_with, CheckResult, StructureBounds, SweepConfig,
};
use pdwords::{predicted_decomposition, word, Kind, Limits, PeriodDoubling};

const LEN_MAX: usize = 32;
const COUNT: usize = 64;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(results: &[CheckResult], id: Option<&str>) -> Result<usize, String> {
    let selected: Vec<_> = results
        .iter()
        .filter(|c| id.is_none_or(|id| c.check_id == id))
        .collect();
    if let Some(bad) = selected.iter().find(|c| !c.passed()) {
        return Err(format!(
            "{} failed: {}",
            bad.check_id,
            serde_json::to_string(&bad.counterexample).unwrap()
        ));
    }
    ensure(!selected.is_empty(), || format!("no {id:?} checks ran"))?;
    Ok(selected.len())
}

fn within(elapsed: Duration, limit_s: f64, what: &str) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!(
            "{what} took {:.2} s, limit {limit_s} s",
            elapsed.as_secs_f64()
        )
    })
}

/// Closed-form return-word lengths: `(|r_0|, [(code, |r_code|)])`.
fn closed_lengths(kind: u8, m: u32, mu1: usize) -> (usize, Vec<(char, usize)>) {
    let half = 1usize << (m - 1);
    match kind {
        1 => (mu1, vec![('a', 2 * half), ('b', half)]),
        _ => (
            2 * half + mu1,
            vec![('a', half), ('b', 7 * half), ('c', 3 * half)],
        ),
    }
}

fn check_lengths(w: &str, kind: u8, m: u32, mu1: usize, count: usize) -> Result<(), String> {
    let (r0, returns, _) = common::scan_returns(w, count);
    let (r0_len, table) = closed_lengths(kind, m, mu1);
    ensure(r0.len() == r0_len, || {
        format!("{w}: |r0| = {} expected {r0_len}", r0.len())
    })?;
    for (p, (r, code)) in returns
        .iter()
        .zip(common::theta(kind, count).chars())
        .enumerate()
    {
        let want = table.iter().find(|(c, _)| *c == code).unwrap().1;
        ensure(r.len() == want, || {
            format!("{w}: |r_{}| = {} expected {want}", p + 1, r.len())
        })?;
    }
    Ok(())
}

/// Oracle scan of `E_{kind,m}` against the coded alphabet.
fn envelope_against_oracle(
    kind: u8,
    m: u32,
    count: usize,
    r0_expected: &str,
    alphabet: &BTreeMap<char, String>,
) -> Result<(), String> {
    let e = common::envelope(kind, m);
    let (r0, returns, _) = common::scan_returns(&e, count);
    ensure(r0 == r0_expected, || format!("E_({kind},{m}): r0 = {r0}"))?;
    for (p, (r, code)) in returns
        .iter()
        .zip(common::theta(kind, count).chars())
        .enumerate()
    {
        ensure(*r == alphabet[&code], || {
            format!(
                "E_({kind},{m}): r_{} = {r}, coded {code} = {}",
                p + 1,
                alphabet[&code]
            )
        })?;
    }
    Ok(())
}

fn criterion_1(pd: &PeriodDoubling) -> Outcome {
    let start = Instant::now();
    for m in 1..=12 {
        let alphabet = BTreeMap::from([('a', common::block_a(m)), ('b', common::block_a(m - 1))]);
        envelope_against_oracle(1, m, 256, "", &alphabet)?;
    }
    let n = all_pass(&verify_envelope_returns(pd, Kind::One, 12, 256), None)?;
    within(start.elapsed(), 10.0, "criterion 1")?;
    Ok(format!(
        "m = 1..12, 256 return words each, {n} library checks"
    ))
}

fn criterion_2(pd: &PeriodDoubling) -> Outcome {
    let start = Instant::now();
    for m in 1..=10 {
        let (a, b) = (common::block_a, common::block_b);
        let alphabet = BTreeMap::from([
            ('a', a(m - 1)),
            ('b', a(m - 1) + &a(m) + &b(m + 1)),
            ('c', b(m) + &b(m - 1)),
        ]);
        envelope_against_oracle(2, m, 256, &a(m), &alphabet)?;
        let p = 1usize << m;
        let expected = [p + 1, 3 * p / 2 + 1, 5 * p + 1, 11 * p / 2 + 1, 7 * p + 1];
        let found = common::first_positions(&common::envelope(2, m), 4);
        ensure(found == expected, || {
            format!("m = {m}: positions {found:?}, expected {expected:?}")
        })?;
    }
    let n = all_pass(&verify_envelope_returns(pd, Kind::Two, 10, 256), None)?;
    within(start.elapsed(), 10.0, "criterion 2")?;
    Ok(format!(
        "m = 1..10, 256 return words and five leading positions, {n} library checks"
    ))
}

struct FactorData {
    factors: Vec<String>,
    general: Vec<CheckResult>,
}

fn criterion_3(pd: &PeriodDoubling, data: &FactorData) -> Outcome {
    for kind in [1, 2] {
        for m in 1..=12 {
            check_lengths(&common::envelope(kind, m), kind, m, 0, COUNT)?;
        }
    }
    for w in &data.factors {
        let (kind, m, e) = common::envelope_of(w);
        let mu1 = common::positions(w, &e)[0] - 1;
        check_lengths(w, kind, m, mu1, COUNT)?;
    }
    let mut n = 0;
    for kind in [Kind::One, Kind::Two] {
        n += all_pass(
            &verify_envelope_returns(pd, kind, 12, COUNT),
            Some("return-lengths"),
        )?;
    }
    n += all_pass(&data.general, Some("return-lengths"))?;
    Ok(format!(
        "envelope words m <= 12 and {} factors of length <= {LEN_MAX}, {n} library checks",
        data.factors.len()
    ))
}

fn criterion_4(pd: &PeriodDoubling, data: &FactorData) -> Outcome {
    for w in &data.factors {
        let (_, _, e) = common::envelope_of(w);
        let hits = common::positions(w, &e);
        ensure(hits.len() == 1, || format!("{w} occurs at {hits:?} in {e}"))?;
    }
    let n = all_pass(
        &verify_extension(pd, LEN_MAX, COUNT),
        Some("unique-extension"),
    )?;
    Ok(format!(
        "{} factors, zero exceptions, {n} library checks",
        data.factors.len()
    ))
}

fn criterion_5(pd: &PeriodDoubling, data: &FactorData) -> Outcome {
    for w in &data.factors {
        let (_, _, e) = common::envelope_of(w);
        let mu1 = common::positions(w, &e)[0] - 1;
        let own = common::first_positions(w, COUNT);
        let outer = common::first_positions(&e, COUNT);
        for p in 0..COUNT {
            ensure(own[p] == outer[p] + mu1, || {
                format!("{w}, p = {}: {} vs {} + {mu1}", p + 1, own[p], outer[p])
            })?;
        }
    }
    let n = all_pass(
        &verify_extension(pd, LEN_MAX, COUNT),
        Some("strong-extension"),
    )?;
    Ok(format!(
        "{} factors, p <= {COUNT}, {n} library checks",
        data.factors.len()
    ))
}

fn criterion_6(pd: &PeriodDoubling, data: &FactorData) -> Outcome {
    for w in &data.factors {
        let predicted = predicted_decomposition(pd, &word(w), COUNT).map_err(|e| e.to_string())?;
        let (r0, returns, _) = common::scan_returns(w, COUNT);
        ensure(predicted.r0.to_string() == r0, || format!("{w}: r0"))?;
        for (p, (q, r)) in predicted.returns.iter().zip(&returns).enumerate() {
            ensure(q.to_string() == *r, || {
                format!("{w}: r_{} predicted {q}, scanned {r}", p + 1)
            })?;
        }
        let (kind, _, _) = common::envelope_of(w);
        ensure(
            predicted.coded.to_string() == common::theta(kind, COUNT),
            || format!("{w}: coding"),
        )?;
        ensure(predicted.classification.kind().as_u8() == kind, || {
            format!("{w}: classification")
        })?;
    }
    let n = all_pass(&data.general, Some("factor-returns"))?;
    let start = Instant::now();
    let report = sweep(pd, SweepConfig::default());
    let elapsed = start.elapsed();
    ensure(report.all_passed(), || {
        format!("sweep has {} failures", report.totals.fail)
    })?;
    within(elapsed, 60.0, "full sweep")?;
    Ok(format!(
        "{} factors field-for-field, {n} library checks, sweep {:.2} s",
        data.factors.len(),
        elapsed.as_secs_f64()
    ))
}

fn criterion_7(pd: &PeriodDoubling) -> Outcome {
    let b = StructureBounds::from_max_order(12);
    ensure(b.identity_order >= 20, || "identity bound below 20".into())?;
    ensure(b.block_occurrence_order >= 14, || {
        "occurrence bound below 14".into()
    })?;
    ensure(b.context_len == 1 << 16, || {
        "context prefix is not 2^16".into()
    })?;
    ensure(b.fixed_point_len >= 1 << 15, || {
        "fixed-point bound below 2^15".into()
    })?;
    ensure(b.power_free_len >= 1 << 18, || {
        "power-free bound below 2^18".into()
    })?;
    let results = verify_structure(pd, 12);
    let n = all_pass(&results, None)?;

    for m in 0..=14 {
        let (a, bb) = (common::block_a(m), common::block_b(m));
        let p = 1usize << m;
        let cases: Vec<(&str, String, Vec<usize>)> = vec![
            (&a, a.repeat(2), vec![1, p + 1]),
            (&a, format!("{a}{bb}{a}"), vec![1, 2 * p + 1]),
            (&bb, format!("{a}{bb}"), vec![p + 1]),
        ];
        let mut cases = cases;
        if m >= 1 {
            cases.push((&bb, format!("{bb}{a}{bb}"), vec![1, p / 2 + 1, 2 * p + 1]));
            cases.push((
                &bb,
                format!("{bb}{a}{a}{a}{bb}"),
                vec![1, p / 2 + 1, 4 * p + 1],
            ));
        }
        for (pat, text, want) in cases {
            let got = common::positions(pat, &text);
            ensure(got == want, || format!("m = {m}: {got:?} vs {want:?}"))?;
        }
    }
    Ok(format!(
        "{n} structure checks, occurrence lists re-scanned for m <= 14"
    ))
}

fn criterion_8() -> Outcome {
    let limits = Limits {
        max_len: 1 << 18,
        ..Limits::default()
    };
    // Checks that only build blocks and envelope words never read D, so a flip
    // cannot reach them; keep them small and every D-reading bound at full size.
    let bounds = StructureBounds {
        identity_order: 4,
        block_occurrence_order: 4,
        envelope_order: 4,
        palindrome_prefix_order: 4,
        classification_order: 4,
        separator_order: 4,
        coded_order: 2,
        ..StructureBounds::from_max_order(9)
    };
    ensure(bounds.fixed_point_len == 4096, || {
        "fixed-point prefix is not 4096".into()
    })?;
    let mut caught_without_direct = 0;
    for p in 1..=4096 {
        let pd = PeriodDoubling::with_faults(limits, &[p]);
        let failed: Vec<_> = verify_structure_with(&pd, &bounds)
            .into_iter()
            .filter(|c| !c.passed())
            .map(|c| c.check_id)
            .collect();
        ensure(!failed.is_empty(), || format!("flip at {p} went unnoticed"))?;
        if failed.iter().any(|id| id != "prefix-matches-blocks") {
            caught_without_direct += 1;
        }
    }
    for p in [1, 2, 3, 1000, 2049, 4096] {
        let pd = PeriodDoubling::with_faults(limits, &[p]);
        let report = sweep(
            &pd,
            SweepConfig {
                len_max: 8,
                count: 16,
                m_max: 9,
                jobs: 1,
            },
        );
        ensure(!report.all_passed(), || {
            format!("sweep missed the flip at {p}")
        })?;
    }
    Ok(format!(
        "all 4096 single-letter flips caught ({caught_without_direct} also by checks other than the direct block comparison)"
    ))
}

fn criterion_9() -> Outcome {
    let pd = PeriodDoubling::default();
    let start = Instant::now();
    let prefix = pd.pd_prefix(1 << 22).map_err(|e| e.to_string())?;
    let generated = start.elapsed();
    ensure(prefix.len() == 1 << 22, || "short prefix".into())?;
    within(generated, 1.0, "pd_prefix(2^22)")?;
    let start = Instant::now();
    let report = sweep(&pd, SweepConfig::default());
    let swept = start.elapsed();
    ensure(report.all_passed(), || {
        format!("sweep has {} failures", report.totals.fail)
    })?;
    within(swept, 60.0, "full sweep")?;
    Ok(format!(
        "2^22 letters in {:.3} s; default sweep ({} checks) in {:.2} s",
        generated.as_secs_f64(),
        report.results.len(),
        swept.as_secs_f64()
    ))
}

fn main() {
    let pd = PeriodDoubling::default();
    let factors = common::factors(LEN_MAX);
    let library: Vec<String> = factors_up_to(&pd, LEN_MAX)
        .expect("factor enumeration")
        .iter()
        .map(ToString::to_string)
        .collect();
    assert_eq!(library, factors, "library and oracle factor sets differ");
    let data = FactorData {
        factors,
        general: verify_general(&pd, LEN_MAX, COUNT),
    };

    let criteria: Vec<Criterion> = vec![
        (
            "first-kind envelope return words code Θ1",
            Box::new(|| criterion_1(&pd)),
        ),
        (
            "second-kind envelope return words code Θ2",
            Box::new(|| criterion_2(&pd)),
        ),
        (
            "return-word lengths match the closed forms",
            Box::new(|| criterion_3(&pd, &data)),
        ),
        (
            "every factor occurs once in its envelope",
            Box::new(|| criterion_4(&pd, &data)),
        ),
        (
            "occurrences shift by |μ1| from the envelope's",
            Box::new(|| criterion_5(&pd, &data)),
        ),
        (
            "predicted decomposition equals the scan",
            Box::new(|| criterion_6(&pd, &data)),
        ),
        ("structure suite", Box::new(|| criterion_7(&pd))),
        ("single-letter faults are detected", Box::new(criterion_8)),
        ("performance", Box::new(criterion_9)),
    ];

    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {}. {name}: {detail} [{secs:.2} s]", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL  {}. {name}: {why} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
