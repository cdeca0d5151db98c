//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line.
//! The lines go straight to stdout, so they appear even when the harness
//! captures output.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use stci_core::arith::Rational;
use stci_core::chow::{a_closed_form, st_expansion, BlowupContext};
use stci_core::degree::{binomial_divisibility_check, divisibility_check};
use stci_core::rdp::{universe, Configuration, RdpPair, TypeSequence};
use stci_core::ruling::{
    cone_decompose, decompose, snort_check, LabeledGraph, RulingClassVector, StandardOp,
};
use stci_core::theorems::{
    bungobungo_solve, config_search, murky_scan, resolution_bound, thm1_value, thm2_margins,
    thm3_check, thma_verdict, ConfigConstraints, StciParams, ThmAStatus,
};

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ts(v: &[u64]) -> TypeSequence {
    TypeSequence::new(v.to_vec()).unwrap()
}

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn within(start: Instant, limit: Duration) -> Check {
    let took = start.elapsed();
    ensure(took <= limit, || format!("took {took:?}, limit {limit:?}"))
}

/// Draws `cases` values from `strategy` with a fixed seed.
fn sample<S: Strategy>(strategy: S, cases: usize) -> Vec<S::Value> {
    let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut runner = TestRunner::new_with_rng(Config::default(), rng);
    (0..cases)
        .map(|_| {
            strategy
                .new_tree(&mut runner)
                .expect("strategy produces values")
                .current()
        })
        .collect()
}

const TABLE: &str = "{(3,4), (3,8), (4,4), (4,7), (6,26), (9,48), (10,28), (12,18), (13,16), \
                     (17,220), (18,118), (19,84), (20,67), (22,50), (28,33)}";

fn enumerate_table() -> Check {
    let start = Instant::now();
    let out = stci_core::cli::run(["stci", "enumerate", "--d", "4", "--g", "0"]);
    within(start, Duration::from_secs(1))?;
    ensure(out.code == 0, || {
        format!("exit {}: {}", out.code, out.stderr)
    })?;
    ensure(out.stdout == format!("{TABLE}\n"), || {
        format!("got {:?}", out.stdout)
    })?;

    let csv = stci_core::cli::run([
        "stci",
        "enumerate",
        "--d",
        "4",
        "--g",
        "0",
        "--format",
        "csv",
    ]);
    let lines: Vec<&str> = csv.stdout.lines().collect();
    ensure(lines.first() == Some(&"s,t,n,p_s,p_t"), || {
        format!("csv header {:?}", lines.first())
    })?;
    ensure(lines.len() == 16, || {
        format!("{} csv data rows", lines.len() - 1)
    })
}

fn constant_type_value() -> Check {
    let v = thm1_value(&StciParams::new(4, 4, 4, 0).unwrap()).map_err(|e| e.to_string())?;
    ensure(v.value == 8 && v.integral, || {
        format!("value {} integral {}", v.value, v.integral)
    })
}

fn type_inequalities() -> Check {
    let params = StciParams::new(4, 4, 4, 0).unwrap();
    let tight = thm2_margins(&params, &ts(&[8, 8, 8])).map_err(|e| e.to_string())?;
    let rhs: Vec<BigInt> = [24, 48, 96].map(BigInt::from).to_vec();
    ensure(tight.rhs == rhs, || format!("rhs {:?}", tight.rhs))?;
    ensure(
        tight.margins.iter().all(Zero::is_zero) && tight.holds,
        || format!("margins {:?}", tight.margins),
    )?;

    // p_1 >= 8; 2p_1 + p_2 >= 24; 8p_1 + 3p_2 + p_3 >= 96, up to a positive factor.
    let expected: [(&[i64], i64); 3] = [(&[1], 8), (&[2, 1], 24), (&[8, 3, 1], 96)];
    for (k, (coeffs, bound)) in expected.iter().enumerate() {
        // the left side is linear in p, so bumping one entry reads off its coefficient
        let lhs_of = |j: usize| {
            let mut bumped = vec![8; 3];
            bumped[j] += 1;
            let r = thm2_margins(&params, &TypeSequence::new(bumped).unwrap()).unwrap();
            &r.lhs[k] - &tight.lhs[k]
        };
        let got: Vec<BigInt> = (0..=k).map(lhs_of).collect();
        let factor = &tight.rhs[k] / BigInt::from(*bound);
        ensure(
            &factor * BigInt::from(*bound) == tight.rhs[k] && factor > BigInt::zero(),
            || {
                format!(
                    "k={}: rhs {} is not a multiple of {bound}",
                    k + 1,
                    tight.rhs[k]
                )
            },
        )?;
        let scaled: Vec<BigInt> = coeffs.iter().map(|c| &factor * c).collect();
        ensure(got == scaled, || {
            format!("k={}: coefficients {got:?}, want {scaled:?}", k + 1)
        })?;
    }
    Ok(())
}

fn weighted_sum_bound() -> Check {
    let nine: Configuration = "9*A:2:1".parse().unwrap();
    let r = thm3_check(4, 4, 0, &nine.type_seq(), None).map_err(|e| e.to_string())?;
    ensure(r.rhs == 6 && r.lhs == 6 && r.holds, || {
        format!("lhs {} rhs {}", r.lhs, r.rhs)
    })
}

fn resolution_bounds() -> Check {
    let (four, five) = (resolution_bound(4), resolution_bound(5));
    ensure(four == 19.into() && five == 44.into(), || {
        format!("got {four}, {five}")
    })
}

fn bungobungo() -> Check {
    let start = Instant::now();
    let sols = bungobungo_solve();
    within(start, Duration::from_secs(1))?;
    let want = vec![(0, ts(&[9, 8, 2])), (0, ts(&[9, 9])), (0, ts(&[9, 9, 1]))];
    ensure(sols == want, || format!("got {sols:?}"))
}

fn configuration_case_analysis() -> Check {
    let start = Instant::now();
    let cons = |def| ConfigConstraints {
        max_deficiency: Some(def),
        ..Default::default()
    };
    let names = |v: &[stci_core::theorems::ConfigMatch]| -> Vec<String> {
        v.iter().map(|m| m.configuration.to_string()).collect()
    };

    let found = config_search(&ts(&[9, 9, 1]), &cons(0)).map_err(|e| e.to_string())?;
    ensure(names(&found) == ["8*A:2:1 + A:3:1"], || {
        format!("(9,9,1): {:?}", names(&found))
    })?;
    ensure(found[0].invariants.delta == q("73/12"), || {
        format!("delta {}", found[0].invariants.delta)
    })?;

    let found = config_search(&ts(&[9, 9]), &cons(1)).map_err(|e| e.to_string())?;
    ensure(names(&found) == ["7*A:2:1 + A:5:2", "9*A:2:1"], || {
        format!("(9,9): {:?}", names(&found))
    })?;
    ensure(found.iter().all(|m| m.invariants.order == 3), || {
        "orders differ from 3".into()
    })?;

    let with_a42 = ConfigConstraints {
        must_contain: vec![RdpPair::a(4, 2).unwrap()],
        ..cons(0)
    };
    let found = config_search(&ts(&[9, 8, 2]), &with_a42).map_err(|e| e.to_string())?;
    ensure(names(&found) == ["6*A:2:1 + A:3:1 + A:4:2"], || {
        format!("(9,8,2): {:?}", names(&found))
    })?;
    ensure(found[0].invariants.delta != 6, || "delta equals 6".into())?;

    let c: Configuration = "A:1:1 + 6*A:2:1 + 2*A:3:1".parse().unwrap();
    let sum = c.miyaoka_sum().map_err(|e| e.to_string())?;
    ensure(sum == 25 && sum > 24, || format!("Miyaoka sum {sum}"))?;
    within(start, Duration::from_secs(5))
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn random_graph() -> impl Strategy<Value = LabeledGraph> {
    (
        1u64..6,
        proptest::collection::vec(any::<(bool, u32)>(), 0..12),
    )
        .prop_map(|(base, steps)| {
            let mut graph = LabeledGraph::single(base);
            for (split, pick) in steps {
                let cands = graph.split_candidates();
                let op = match (split, cands.is_empty()) {
                    (true, false) => StandardOp::Split(cands[pick as usize % cands.len()]),
                    _ => StandardOp::Plus,
                };
                graph.apply(op).unwrap();
            }
            graph
        })
}

fn oracle_equivalences() -> Check {
    let start = Instant::now();

    // Ring product against the closed form of a_m.
    let tuples = (
        1u64..12,
        1u64..12,
        any::<usize>(),
        0u64..4,
        proptest::collection::vec(0u64..20, 8),
    )
        .prop_map(|(s, t, pick, g, p)| {
            let divisors: Vec<u64> = (1..=8).filter(|n| (s * t) % n == 0).collect();
            let n = divisors[pick % divisors.len()];
            (s, t, s * t / n, g, p[..n as usize].to_vec())
        });
    for (s, t, d, g, p) in sample(tuples, 200) {
        let ctx = BlowupContext::for_surface(s, t, d, g, &p).map_err(|e| e.to_string())?;
        let ex = st_expansion(s, t, &ctx).map_err(|e| e.to_string())?;
        for m in 1..=ctx.n() {
            let closed = a_closed_form(s, t, d, g, &p, m).map_err(|e| e.to_string())?;
            ensure(ex.a[m - 1] == closed, || {
                format!("(s,t,d,g)=({s},{t},{d},{g}) p={p:?} m={m}")
            })?;
        }
    }

    // Recursive phi against the Euclidean closed form (phi checks both internally).
    for n in 1..=300u64 {
        for k in 1..=n {
            stci_core::rdp::phi(n, k).map_err(|e| e.to_string())?;
        }
    }

    // Cone membership against the snort inequalities.
    let vectors = proptest::collection::vec(-40i64..40, 0..=10).prop_map(|v| ints(&v));
    for a in sample(vectors, 1000) {
        let dec = cone_decompose(&a);
        ensure(dec.feasible == snort_check(&a).holds, || format!("a={a:?}"))?;
        let n = a.len();
        let mut back = vec![BigInt::zero(); n];
        for (k, c) in dec.coefficients.iter().enumerate() {
            for (b, x) in back
                .iter_mut()
                .zip(&RulingClassVector::block(n, k + 1, n).coefficients)
            {
                *b += c * x;
            }
        }
        ensure(back == a, || {
            format!("decomposition of {a:?} sums to {back:?}")
        })?;
    }

    // Unique decomposition and the spitup identity.
    for graph in sample(random_graph(), 500) {
        let edges: BTreeSet<_> = graph.edges().collect();
        let ops = decompose(graph.base(), graph.top(), &edges).map_err(|e| e.to_string())?;
        ensure(ops.as_slice() == graph.history(), || {
            format!("history of {edges:?}")
        })?;
        let replay = LabeledGraph::from_history(graph.base(), &ops).map_err(|e| e.to_string())?;
        ensure(replay == graph, || format!("replay of {edges:?}"))?;
        let sum = graph.spitup_sum().map_err(|e| e.to_string())?;
        ensure(sum.as_slice() == graph.mu_values(), || {
            format!("spitup on {edges:?}")
        })?;
    }
    within(start, Duration::from_secs(30))
}

fn universe_invariants() -> Check {
    let start = Instant::now();
    let mut a_types: BTreeMap<TypeSequence, RdpPair> = BTreeMap::new();
    for pair in universe(300) {
        let ty = pair.type_seq();
        let odd_d_last = matches!(pair, RdpPair::DLast { n } if n % 2 == 1);

        ensure(ty.weighted_sum() >= pair.delta(), || {
            format!("{pair}: weighted sum below delta")
        })?;
        ensure(ty.is_non_increasing(), || {
            format!("{pair}: type {ty} increases")
        })?;

        // entries vanish from the order onwards, except for odd D_last
        let vanishes = (ty.len() as u64) < pair.order();
        ensure(vanishes != odd_d_last, || {
            format!("{pair}: type {ty}, order {}", pair.order())
        })?;
        ensure((pair.deficiency() >= 0) != odd_d_last, || {
            format!("{pair}: deficiency {}", pair.deficiency())
        })?;

        let tail = pair
            .blowup()
            .map_or_else(TypeSequence::empty, |b| b.type_seq());
        let rebuilt = tail.prepend(ty.first()).map_err(|e| e.to_string())?;
        ensure(rebuilt == ty, || {
            format!("{pair}: blowup gives {rebuilt}, type {ty}")
        })?;

        if let RdpPair::A { .. } = pair {
            let runs = ty.runs();
            if runs.len() > 1 {
                let (last, count) = runs[runs.len() - 1];
                let (prev, _) = runs[runs.len() - 2];
                ensure(count > 1 && prev % last == 0, || {
                    format!("{pair}: runs {runs:?}")
                })?;
            }
            if let Some(other) = a_types.insert(ty.clone(), pair) {
                return Err(format!("{other} and {pair} share type {ty}"));
            }
        }
    }
    within(start, Duration::from_secs(30))
}

fn binomial_equivalence() -> Check {
    let start = Instant::now();
    let mut checked = 0u32;
    for d in 1..=8u64 {
        for g in 0..=4u64 {
            for s in 1..=40u64 {
                for t in 1..=40u64 {
                    if (s * t) % d != 0 || s * t / d < 2 {
                        continue;
                    }
                    let a = divisibility_check(s, t, d, g)
                        .map_err(|e| e.to_string())?
                        .divides;
                    let b = binomial_divisibility_check(s, t, d, g).map_err(|e| e.to_string())?;
                    ensure(a == b, || {
                        format!("(s,t,d,g)=({s},{t},{d},{g}): {a} vs {b}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    ensure(checked > 0, || "nothing checked".into())?;
    within(start, Duration::from_secs(30))
}

fn no_counterexample_in_box() -> Check {
    let start = Instant::now();
    let hits = murky_scan(60).map_err(|e| e.to_string())?;
    ensure(hits.is_empty(), || format!("counterexamples {hits:?}"))?;
    // The per-tuple verdict agrees on a smaller box.
    for s in 4..=20 {
        for t in s..=20 {
            for d in 1..=20 {
                for g in 0..=20 {
                    let Ok(p) = StciParams::new(s, t, d, g) else {
                        continue;
                    };
                    let v = thma_verdict(&p);
                    ensure(v.status != ThmAStatus::Counterexample, || {
                        format!("({s},{t},{d},{g})")
                    })?;
                }
            }
        }
    }
    within(start, Duration::from_secs(60))
}

fn report(line: String) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("degree pairs for quartic rational curves", enumerate_table),
        ("constant type value at (4,4,4,0)", constant_type_value),
        ("type inequalities at (4,4,4,0)", type_inequalities),
        ("weighted type sum bound at (4,4,0)", weighted_sum_bound),
        ("resolution bounds for s = 4, 5", resolution_bounds),
        ("bungobungo solutions", bungobungo),
        ("configuration case analysis", configuration_case_analysis),
        ("oracle equivalences", oracle_equivalences),
        (
            "pair universe invariants up to n = 300",
            universe_invariants,
        ),
        ("binomial divisibility equivalence", binomial_equivalence),
        ("no counterexample up to 60", no_counterexample_in_box),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match check() {
            Ok(()) => report(format!(
                "PASS {:>2} {name} ({:.2?})",
                i + 1,
                start.elapsed()
            )),
            Err(why) => {
                report(format!("FAIL {:>2} {name}: {why}", i + 1));
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
