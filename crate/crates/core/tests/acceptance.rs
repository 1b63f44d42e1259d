//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line, even on success.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use causalkit::circuit::format::parse_netlist;
use causalkit::circuit::{baseline_search, fixed_point_search, is_consistent, CountingOracle, SearchResult};
use causalkit::classical::presets::*;
use causalkit::classical::{
    check_total_probability, classify, is_logically_consistent, trace_with_ops, two_party_causal_membership,
    ClassicalProcess, Membership, PartySpec,
};
use causalkit::cli::Report;
use causalkit::exact::{enumerate_deterministic_ops, format_rational, int, rat, DeterministicOp, MixedRadix};
use causalkit::fixed_point::{
    as_function, average_fixed_points, composed_table, fixed_points, is_deterministic_extremal, verify_average_fixed_points,
    DeterministicDecomposition, ProcessFunction,
};
use causalkit::games::{builtin_game, causal_bound, copy_forward, game2_strategies, play};
use causalkit::quantum::{
    ocb_value, random_anticommuting_pair, random_commuting_pair, switch_distribution, validate, w_channel, w_ocb,
    w_state, w_superposed_channel, Operator,
};
use causalkit::{Rational, Verdict, DEFAULT_CAP};

const EPS: f64 = 1e-9;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn bit_ops() -> Vec<DeterministicOp> {
    enumerate_deterministic_ops(2, 2, DEFAULT_CAP).unwrap()
}

/// All 64 triples of bit operations in canonical order.
fn op_triples() -> Vec<Vec<DeterministicOp>> {
    let ops = bit_ops();
    MixedRadix::new(&[4, 4, 4]).tuples().map(|t| t.iter().map(|&k| ops[k].clone()).collect()).collect()
}

fn named(names: [&str; 3]) -> Vec<DeterministicOp> {
    names.iter().map(|n| DeterministicOp::from_bit_name(n).unwrap()).collect()
}

fn bits(names: &[&str]) -> Vec<PartySpec> {
    names.iter().map(|n| PartySpec::bit(*n)).collect()
}

fn ac01() -> Check {
    for (name, p) in [("circular-mixture", circular_mixture()), ("majority", majority()), ("identity-chain", identity_chain())] {
        ensure(is_logically_consistent(&p, DEFAULT_CAP).unwrap(), format!("{name} rejected"))?;
    }
    ensure(!is_logically_consistent(&two_way_channels(), DEFAULT_CAP).unwrap(), "two-way-channels accepted")?;
    let p = perturbed_mixture();
    ensure(!is_logically_consistent(&p, DEFAULT_CAP).unwrap(), "perturbed mixture accepted")?;
    let ids = named(["d_id"; 3]);
    let trace = trace_with_ops(&p, &ids.iter().map(DeterministicOp::to_matrix).collect::<Vec<_>>()).unwrap();
    ensure(trace == rat(51, 50), format!("trace under identities is {}", format_rational(&trace)))?;
    let Verdict::Fail(v) = check_total_probability(&p, DEFAULT_CAP).unwrap() else {
        return Err("no trace witness".into());
    };
    ensure(v.trace != int(1), "witness trace is 1")?;
    Ok(format!("3 consistent, 2 inconsistent; perturbed trace under d_id^3 = {}", format_rational(&trace)))
}

fn ac02() -> Check {
    let mut got = Vec::new();
    for (name, want) in [("game1", rat(3, 4)), ("game2", rat(5, 6)), ("game3", rat(3, 4))] {
        let b = causal_bound(&builtin_game(name).unwrap(), DEFAULT_CAP).unwrap();
        ensure(b.result.success == want, format!("{name} bound {}", format_rational(&b.result.success)))?;
        ensure(b.strategy.evaluate(&builtin_game(name).unwrap()).success == want, format!("{name} witness mismatch"))?;
        got.push(format!("{name}={}", format_rational(&want)));
    }
    Ok(got.join(" "))
}

fn ac03() -> Check {
    let r2 = play(&builtin_game("game2").unwrap(), &circular_mixture(), &game2_strategies()).unwrap();
    ensure(r2.success.is_one(), format!("game2 success {}", format_rational(&r2.success)))?;
    let r3 = play(&builtin_game("game3").unwrap(), &majority(), &copy_forward(3)).unwrap();
    ensure(r3.success.is_one(), format!("game3 success {}", format_rational(&r3.success)))?;
    Ok("game2/circular-mixture = 1, game3/majority = 1".into())
}

fn bell_projector() -> Operator {
    let psi = causalkit::quantum::bell();
    &psi * psi.adjoint()
}

fn ac04() -> Check {
    let target = (2.0 + 2f64.sqrt()) / 4.0;
    let value = ocb_value(EPS).unwrap();
    ensure((value - target).abs() <= EPS, format!("library value {value}"))?;
    let out = causalkit::cli::run(["causalkit", "--format", "structured", "quantum", "ocb"]);
    ensure(out.code == 0, format!("quantum ocb exit {}", out.code))?;
    let report = Report::parse_structured(&out.stdout).map_err(|e| e.to_string())?;
    let cli_value: f64 = report.get("value").ok_or("no value entry")?.parse().map_err(|_| "bad value")?;
    ensure((cli_value - target).abs() <= EPS, format!("cli value {cli_value}"))?;

    let state = w_state(&bell_projector()).unwrap();
    for (name, w) in [
        ("w-ocb", w_ocb()),
        ("w-state", state.clone()),
        ("w-channel", w_channel()),
        ("w-superposed", w_superposed_channel()),
    ] {
        let v = validate(&w, EPS);
        ensure(v.valid, format!("{name} invalid: {v:?}"))?;
    }
    ensure(!validate(&state.scaled(2.0), EPS).valid, "2 W_state accepted")?;
    Ok(format!("ocb = {cli_value:.12}, |dev| = {:.1e}; 4 matrices valid, 2 W_state invalid", (cli_value - target).abs()))
}

/// Rows `(I_R I_S I_T) -> image` read as bit strings.
fn table_matches(e: &ProcessFunction, ops: &[DeterministicOp], rows: [&str; 8]) -> Result<(), String> {
    let got = composed_table(e, ops).unwrap();
    for (t, row) in rows.iter().enumerate() {
        let image = usize::from_str_radix(row, 2).unwrap();
        ensure(got[t] == image, format!("row {t:03b}: expected {row}, got {:03b}", got[t]))?;
    }
    Ok(())
}

fn ac05() -> Check {
    // Each table lists the composed map under the identity triple.
    let ids = named(["d_id"; 3]);
    let chain = as_function(&identity_chain()).unwrap();
    let maj = as_function(&majority()).unwrap();
    let e0 = as_function(&cyclic_identity()).unwrap();
    let e1 = as_function(&cyclic_flip()).unwrap();
    table_matches(&chain, &ids, ["000", "000", "001", "001", "010", "010", "011", "011"])?;
    table_matches(&maj, &ids, ["000", "100", "001", "001", "010", "100", "010", "000"])?;
    table_matches(&e0, &ids, ["000", "100", "001", "101", "010", "110", "011", "111"])?;
    table_matches(&e1, &ids, ["111", "011", "110", "010", "101", "001", "100", "000"])?;
    ensure(is_deterministic_extremal(&maj, DEFAULT_CAP).unwrap().is_pass(), "majority not extremal")?;
    ensure(is_deterministic_extremal(&chain, DEFAULT_CAP).unwrap().is_pass(), "identity chain not extremal")?;
    let Verdict::Fail(w) = is_deterministic_extremal(&e0, DEFAULT_CAP).unwrap() else {
        return Err("e0 reported extremal".into());
    };
    let at_ids = fixed_points(&e0, &ids).unwrap();
    ensure(at_ids.len() == 2, format!("e0 under d_id^3 has {} fixed points", at_ids.len()))?;
    let names: Vec<String> = w.ops.iter().map(DeterministicOp::name).collect();
    Ok(format!(
        "4 tables match; e0 fails, d_id^3 gives {} fixed points (first canonical witness {})",
        at_ids.len(),
        names.join(",")
    ))
}

fn random_function(rng: &mut ChaCha8Rng, parties: &[PartySpec]) -> ProcessFunction {
    let n: usize = parties.iter().map(|p| p.env_in).product();
    let m: usize = parties.iter().map(|p| p.env_out).product();
    ProcessFunction::new(parties.to_vec(), (0..m).map(|_| rng.gen_range(0..n)).collect()).unwrap()
}

/// A function in which the parties act in a random order, each input
/// depending only on outputs of earlier parties.
fn random_ordered_function(rng: &mut ChaCha8Rng) -> ProcessFunction {
    let mut order = [0usize, 1, 2];
    for k in (1..3).rev() {
        order.swap(k, rng.gen_range(0..=k));
    }
    let first: usize = rng.gen_range(0..2);
    let second: [usize; 2] = std::array::from_fn(|_| rng.gen_range(0..2));
    let third: [usize; 4] = std::array::from_fn(|_| rng.gen_range(0..2));
    ProcessFunction::from_fn(bits(&["R", "S", "T"]), |o| {
        let mut i = vec![0; 3];
        i[order[0]] = first;
        i[order[1]] = second[o[order[0]]];
        i[order[2]] = third[2 * o[order[0]] + o[order[1]]];
        i
    })
    .unwrap()
}

fn random_weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(1..6)).collect();
    let total: i64 = raw.iter().sum();
    raw.iter().map(|&r| rat(r, total)).collect()
}

fn ac06() -> Check {
    let half = DeterministicDecomposition::new(vec![
        (rat(1, 2), as_function(&cyclic_identity()).unwrap()),
        (rat(1, 2), as_function(&cyclic_flip()).unwrap()),
    ])
    .unwrap();
    for ops in op_triples() {
        let avg = average_fixed_points(&half, &ops).unwrap();
        ensure(avg.is_one(), format!("average {} under {ops:?}", format_rational(&avg)))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let parties = bits(&["R", "S", "T"]);
    let (mut agree, mut consistent) = (0, 0);
    for k in 0..120 {
        let parts: Vec<ProcessFunction> = match k % 4 {
            0 => (0..rng.gen_range(1..4)).map(|_| random_function(&mut rng, &parties)).collect(),
            1 => (0..rng.gen_range(1..4)).map(|_| random_ordered_function(&mut rng)).collect(),
            2 => vec![as_function(&cyclic_identity()).unwrap(), as_function(&cyclic_flip()).unwrap()],
            _ => vec![random_ordered_function(&mut rng), random_function(&mut rng, &parties)],
        };
        let weights = if k % 4 == 2 && k % 8 == 2 { vec![rat(1, 2); 2] } else { random_weights(&mut rng, parts.len()) };
        let d = DeterministicDecomposition::new(weights.into_iter().zip(parts).collect()).unwrap();
        let by_average = verify_average_fixed_points(&d, DEFAULT_CAP).unwrap().is_pass();
        let by_trace = is_logically_consistent(&d.mixture(), DEFAULT_CAP).unwrap();
        ensure(by_average == by_trace, format!("decomposition {k}: average {by_average}, trace {by_trace}"))?;
        agree += 1;
        consistent += usize::from(by_trace);
    }
    ensure(consistent > 0 && consistent < agree, format!("degenerate family: {consistent}/{agree} consistent"))?;
    Ok(format!("(E0+E1)/2 averages 1 on 64 triples; {agree} decompositions agree ({consistent} consistent)"))
}

fn count_matches_trace(e: &ProcessFunction, tuples: &[Vec<DeterministicOp>]) -> Result<(), String> {
    let process = e.to_process();
    for ops in tuples {
        let count = fixed_points(e, ops).unwrap().len();
        let trace = trace_with_ops(&process, &ops.iter().map(DeterministicOp::to_matrix).collect::<Vec<_>>()).unwrap();
        ensure(int(count as i64) == trace, format!("{count} fixed points, trace {}", format_rational(&trace)))?;
    }
    Ok(())
}

fn ac07() -> Check {
    let triples = op_triples();
    let parties = bits(&["R", "S", "T"]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut family: Vec<ProcessFunction> = [identity_chain(), majority(), cyclic_identity(), cyclic_flip()]
        .iter()
        .map(|p| as_function(p).unwrap())
        .collect();
    family.extend((0..200).map(|_| random_function(&mut rng, &parties)));
    for e in &family {
        count_matches_trace(e, &triples)?;
    }
    // Every two-party bit function with every pair of operations.
    let ops = bit_ops();
    let pairs: Vec<Vec<DeterministicOp>> =
        MixedRadix::new(&[4, 4]).tuples().map(|t| vec![ops[t[0]].clone(), ops[t[1]].clone()]).collect();
    for map in MixedRadix::new(&[4; 4]).tuples() {
        count_matches_trace(&ProcessFunction::new(bits(&["R", "S"]), map).unwrap(), &pairs)?;
    }
    Ok(format!("{} three-party functions x 64 triples, 256 two-party functions x 16 pairs", family.len()))
}

fn ac08() -> Check {
    let (mut consistent, mut total) = (0, 0);
    for map in MixedRadix::new(&[4; 4]).tuples() {
        total += 1;
        let p: ClassicalProcess = ProcessFunction::new(bits(&["R", "S"]), map.clone()).unwrap().to_process();
        if !is_logically_consistent(&p, DEFAULT_CAP).unwrap() {
            continue;
        }
        consistent += 1;
        ensure(classify(&p, DEFAULT_CAP).unwrap().is_causal(), format!("function {map:?} is non-causal"))?;
    }
    Ok(format!("{consistent}/{total} consistent, all causal"))
}

fn ac09() -> Check {
    let one_way = one_way_signaling();
    let Membership::Member(d) = two_party_causal_membership(&one_way).unwrap() else {
        return Err("one-way signalling rejected".into());
    };
    ensure(d.reconstruct() == one_way, "reconstruction differs")?;
    ensure(!two_party_causal_membership(&two_way_signaling()).unwrap().is_member(), "two-way accepted")?;
    Ok(format!("one-way member (p = {}), exact reconstruction; two-way not a member", format_rational(&d.p)))
}

fn unique_fixed_point(table: &[usize]) -> Option<usize> {
    let mut fixed = (0..table.len()).filter(|&i| table[i] == i);
    let first = fixed.next()?;
    fixed.next().is_none().then_some(first)
}

fn check_box(table: Vec<usize>) -> Result<(), String> {
    let n = table.len();
    let want = unique_fixed_point(&table).expect("caller passes promise boxes");
    let oracle = Arc::new(CountingOracle::from_table(table.clone()).unwrap());
    let r = fixed_point_search(oracle, DEFAULT_CAP).map_err(|e| format!("{table:?}: {e}"))?;
    ensure(r == SearchResult { value: want, queries: 1 }, format!("{table:?}: {r:?}"))?;
    let b = baseline_search(&CountingOracle::from_table(table.clone()).unwrap()).unwrap();
    ensure(b.value == want && b.queries <= (n - 1) as u64, format!("baseline {table:?}: {b:?}"))
}

fn ac10() -> Check {
    let mut small = 0;
    for n in 1..=4usize {
        for t in MixedRadix::new(&vec![n; n]).tuples() {
            if unique_fixed_point(&t).is_some() {
                check_box(t)?;
                small += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut sampled = 0;
    while sampled < 1000 {
        let t: Vec<usize> = (0..8).map(|_| rng.gen_range(0..8)).collect();
        if unique_fixed_point(&t).is_some() {
            check_box(t)?;
            sampled += 1;
        }
    }
    for (name, text) in [
        ("not-loop", "gate N not 2\nwire N.out0 -> N.in0\n"),
        ("identity-loop", "gate I identity 2\nwire I.out0 -> I.in0\n"),
    ] {
        let c = parse_netlist(text).map_err(|e| format!("{name}: {e}"))?;
        ensure(!is_consistent(&c, DEFAULT_CAP).unwrap().consistent, format!("{name} accepted"))?;
    }
    Ok(format!("{small} boxes with n <= 4, {sampled} boxes with n = 8; both loops inconsistent"))
}

fn ac11() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for (want, label) in [(0usize, "commuting"), (1, "anticommuting")] {
        for k in 0..20 {
            let (b, c) = if want == 0 { random_commuting_pair(&mut rng) } else { random_anticommuting_pair(&mut rng) };
            let dist = switch_distribution(&b, &c, EPS).map_err(|e| format!("{label} pair {k}: {e}"))?;
            let dev = (dist[want] - 1.0).abs();
            worst = worst.max(dev);
            ensure(dev <= EPS, format!("{label} pair {k}: distribution {dist:?}"))?;
        }
    }
    Ok(format!("20 commuting + 20 anticommuting pairs, max |1 - p| = {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, fn() -> Check); 11] = [
        ("ac01", "preset consistency", ac01),
        ("ac02", "causal game bounds", ac02),
        ("ac03", "perfect violations", ac03),
        ("ac04", "ocb value and process matrices", ac04),
        ("ac05", "fixed-point tables and extremality", ac05),
        ("ac06", "average fixed points", ac06),
        ("ac07", "fixed points equal trace", ac07),
        ("ac08", "two-party bit functions are causal", ac08),
        ("ac09", "two-party membership", ac09),
        ("ac10", "cyclic circuits", ac10),
        ("ac11", "switch discrimination", ac11),
    ];
    let mut failed = 0;
    for (id, title, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match result {
            Ok(detail) => println!("{id} PASS {title}: {detail} [{ms} ms]"),
            Err(why) => {
                failed += 1;
                println!("{id} FAIL {title}: {why} [{ms} ms]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
