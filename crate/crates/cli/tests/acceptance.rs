//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Randomised criteria use a fixed-seed runner so reruns are exact.

use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use indexmap::IndexMap;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use posfis_cli::{parse_config, run_batch, run_single, Overrides, REFERENCE_CONFIG};
use posfis_core::possibility::FULL_TOLERANCE;
use posfis_core::rules::ParseError;
use posfis_core::{
    check_validity, fuzzy_and, fuzzy_not, fuzzy_or, necessity, normalize, parse_rule, parse_rules,
    percentile_defuzz, unsure_residual, Activation, Direction, FuzzyDegree, InferenceSystem,
    LinguisticVariable, MembershipFunction, Observation, OutputFrame, PossibilityDistribution,
    RuleSet, Settings, Validity,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);
type TableRow = (&'static str, MembershipFunction, Vec<(f64, f64)>);

const RANDOM_CASES: u32 = 10_000;

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run_prop<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(RANDOM_CASES)
        .run(&strategy, test)
        .map_err(|e| match e {
            TestError::Fail(why, value) => format!("{name}: {why} for {value:?}"),
            TestError::Abort(why) => format!("{name}: aborted: {why}"),
        })
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- generators

const INPUTS: [&str; 2] = ["a", "b"];
const INPUT_CATS: [&str; 2] = ["lo", "hi"];
const OUTPUT_CATS: [&str; 3] = ["k0", "k1", "k2"];

fn mf() -> impl Strategy<Value = MembershipFunction> {
    let height = prop_oneof![Just(1.0), 0.05f64..=1.0];
    prop_oneof![
        (
            0.0f64..10.0,
            0.0f64..4.0,
            0.0f64..3.0,
            0.0f64..3.0,
            height.clone()
        )
            .prop_map(|(ml, w, a, b, h)| MembershipFunction::trapezoid(
                ml,
                ml + w,
                a,
                b,
                h
            )
            .unwrap()),
        (0.0f64..10.0, 0.1f64..6.0, any::<bool>(), height).prop_map(|(mid, w, inc, h)| {
            let dir = if inc {
                Direction::Increasing
            } else {
                Direction::Decreasing
            };
            MembershipFunction::sigmoid(mid, w, dir, h).unwrap()
        }),
    ]
}

#[derive(Debug, Clone)]
struct RuleSpec {
    clauses: Vec<(usize, usize, bool)>,
    or: bool,
    consequent: usize,
}

#[derive(Debug, Clone)]
struct Case {
    inputs: Vec<Vec<MembershipFunction>>,
    outputs: Vec<MembershipFunction>,
    grid_points: usize,
    rules: Vec<RuleSpec>,
    obs: [f64; 2],
    unsure_competes: bool,
}

fn case(grid: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Case> {
    let rule = (
        prop::collection::vec((0..2usize, 0..2usize, any::<bool>()), 1..=3),
        any::<bool>(),
        0..3usize,
    )
        .prop_map(|(clauses, or, consequent)| RuleSpec {
            clauses,
            or,
            consequent,
        });
    (
        prop::collection::vec(prop::collection::vec(mf(), 2), 2),
        prop::collection::vec(mf(), 3),
        grid,
        prop::collection::vec(rule, 1..=3),
        [-2.0f64..12.0, -2.0f64..12.0],
        any::<bool>(),
    )
        .prop_map(
            |(inputs, outputs, grid_points, rules, obs, unsure_competes)| Case {
                inputs,
                outputs,
                grid_points,
                rules,
                obs,
                unsure_competes,
            },
        )
}

fn rule_text(rules: &[RuleSpec]) -> String {
    let mut text = String::new();
    for r in rules {
        let ante: Vec<String> = r
            .clauses
            .iter()
            .map(|&(v, c, neg)| {
                format!(
                    "{} IS {}{}",
                    INPUTS[v],
                    if neg { "NOT " } else { "" },
                    INPUT_CATS[c]
                )
            })
            .collect();
        let joiner = if r.or { " OR " } else { " AND " };
        writeln!(
            text,
            "IF {} THEN out IS {}",
            ante.join(joiner),
            OUTPUT_CATS[r.consequent]
        )
        .unwrap();
    }
    text
}

fn build(c: &Case) -> (InferenceSystem, Observation) {
    let mut vars: Vec<LinguisticVariable> = INPUTS
        .iter()
        .zip(&c.inputs)
        .map(|(name, mfs)| {
            LinguisticVariable::new(
                *name,
                0.0,
                10.0,
                c.grid_points,
                INPUT_CATS.iter().copied().zip(mfs.iter().cloned()),
            )
            .unwrap()
        })
        .collect();
    vars.push(
        LinguisticVariable::new(
            "out",
            0.0,
            10.0,
            c.grid_points,
            OUTPUT_CATS.iter().copied().zip(c.outputs.iter().cloned()),
        )
        .unwrap(),
    );
    let rules = RuleSet::parse(&rule_text(&c.rules), "out").unwrap();
    let settings = Settings {
        unsure_in_necessity: c.unsure_competes,
        ..Settings::default()
    };
    let system = InferenceSystem::new(vars, rules, settings).unwrap();
    let obs = Observation::new().with("a", c.obs[0]).with("b", c.obs[1]);
    (system, obs)
}

fn act(category: &str, level: f64) -> Activation {
    Activation {
        rule_id: category.to_owned(),
        level: FuzzyDegree::new(level).unwrap(),
        consequent_category: category.to_owned(),
    }
}

fn crisp(lo: f64, hi: f64) -> MembershipFunction {
    MembershipFunction::trapezoid(lo, hi, 0.0, 0.0, 1.0).unwrap()
}

// ---------------------------------------------------------------- criteria

fn ac1_worked_example() -> Outcome {
    let start = Instant::now();
    let cfg = parse_config(REFERENCE_CONFIG, &Overrides::default()).map_err(|e| e.to_string())?;
    let obs = Observation::new().with("wind", 1.6).with("snow", 9.3);
    let rec = run_single(&cfg, &obs).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let degree = |cat: &str| {
        rec.inputs
            .iter()
            .find(|i| i.category == cat)
            .map(|i| i.degree)
            .ok_or(format!("no input degree for {cat}"))
    };
    let calm = degree("calm")?;
    let deep = degree("deep")?;
    let r1 = rec
        .activations
        .iter()
        .find(|a| a.rule_id == "r1")
        .ok_or("rule r1 did not report")?;
    ensure((calm - 0.77).abs() <= 0.005, || format!("calm = {calm}"))?;
    ensure((deep - 0.38).abs() <= 0.005, || format!("deep = {deep}"))?;
    ensure(r1.level == calm.min(deep), || {
        format!("r1 level {} != min({calm}, {deep})", r1.level)
    })?;
    ensure((r1.level - 0.38).abs() <= 0.005, || {
        format!("r1 = {}", r1.level)
    })?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "calm {calm:.4}, deep {deep:.4}, r1 {:.4}, {elapsed:.1?}",
        r1.level
    ))
}

fn ac2_membership_table() -> Outcome {
    let trap = |q: (f64, f64, f64, f64, f64)| {
        MembershipFunction::trapezoid(q.0, q.1, q.2, q.3, q.4).unwrap()
    };
    let rows: Vec<TableRow> = vec![
        (
            "A",
            trap((100.0, 100.0, 0.0, 0.0, 1.0)),
            vec![(100.0, 1.0), (99.9, 0.0), (100.1, 0.0)],
        ),
        (
            "B",
            trap((50.0, 70.0, 10.0, 30.0, 0.9)),
            vec![
                (45.0, 0.45),
                (40.0, 0.0),
                (50.0, 0.9),
                (60.0, 0.9),
                (70.0, 0.9),
                (85.0, 0.45),
                (100.0, 0.0),
            ],
        ),
        (
            "C",
            trap((100.0, 110.0, 0.0, 0.0, 1.0)),
            vec![
                (99.99, 0.0),
                (100.0, 1.0),
                (105.0, 1.0),
                (110.0, 1.0),
                (110.01, 0.0),
            ],
        ),
        (
            "D",
            trap((20.0, 20.0, 0.0, 10.0, 0.8)),
            vec![(19.99, 0.0), (20.0, 0.8), (25.0, 0.4), (30.0, 0.0)],
        ),
        (
            "E",
            trap((60.0, 60.0, 20.0, 20.0, 0.5)),
            vec![
                (40.0, 0.0),
                (50.0, 0.25),
                (60.0, 0.5),
                (70.0, 0.25),
                (80.0, 0.0),
            ],
        ),
        (
            "F",
            MembershipFunction::sigmoid(50.0, 20.0, Direction::Increasing, 0.88).unwrap(),
            vec![
                (40.0, 0.0),
                (50.0, 0.44),
                (55.0, 0.66),
                (60.0, 0.88),
                (75.0, 0.88),
            ],
        ),
    ];
    let mut probes = 0;
    let mut worst = 0.0f64;
    for (name, f, points) in &rows {
        for &(x, want) in points {
            let got = f.eval(x).map_err(|e| e.to_string())?.value();
            let err = (got - want).abs();
            worst = worst.max(err);
            ensure(err <= 1e-12, || {
                format!("{name}({x}) = {got}, expected {want}")
            })?;
            probes += 1;
        }
    }
    let singleton = LinguisticVariable::new("v", 0.0, 200.0, 201, [("A", rows[0].1)])
        .unwrap()
        .sample_on_grid("A")
        .unwrap();
    ensure(
        singleton
            .iter()
            .enumerate()
            .all(|(i, m)| m.value() == if i == 100 { 1.0 } else { 0.0 }),
        || "singleton A on [0,200] is not a single spike at index 100".into(),
    )?;
    let e = LinguisticVariable::new("v", 40.0, 80.0, 5, [("E", rows[4].1)])
        .unwrap()
        .sample_on_grid("E")
        .unwrap();
    let e: Vec<f64> = e.iter().map(|m| m.value()).collect();
    ensure(e == [0.0, 0.25, 0.5, 0.25, 0.0], || {
        format!("E sampled as {e:?}")
    })?;
    Ok(format!("{probes} probes, max error {worst:.1e}"))
}

fn ac3_axioms() -> Outcome {
    let unit = 0.0f64..=1.0;

    run_prop("De Morgan", (unit.clone(), unit.clone()), |(a, b)| {
        let (a, b) = (FuzzyDegree::new(a).unwrap(), FuzzyDegree::new(b).unwrap());
        prop_assert_eq!(
            fuzzy_not(fuzzy_or(a, b)),
            fuzzy_and(fuzzy_not(a), fuzzy_not(b))
        );
        prop_assert_eq!(
            fuzzy_not(fuzzy_and(a, b)),
            fuzzy_or(fuzzy_not(a), fuzzy_not(b))
        );
        Ok(())
    })?;

    let levels = prop::collection::vec((0..2usize, unit.clone()), 1..4);
    run_prop(
        "max-union",
        (
            levels.clone(),
            0.0f64..10.0,
            0.0f64..5.0,
            0.0f64..=1.0,
            0.0f64..5.0,
        ),
        |(levels, a, wa, db, wb)| {
            let a_hi = a + wa;
            let b_lo = a + db * wa;
            let b_hi = b_lo + wb;
            let var = LinguisticVariable::new(
                "x",
                0.0,
                20.0,
                81,
                [
                    (
                        "s0",
                        MembershipFunction::trapezoid(3.0, 5.0, 2.0, 6.0, 1.0).unwrap(),
                    ),
                    (
                        "s1",
                        MembershipFunction::sigmoid(12.0, 8.0, Direction::Increasing, 1.0).unwrap(),
                    ),
                    ("A", crisp(a, a_hi)),
                    ("B", crisp(b_lo, b_hi)),
                    ("AB", crisp(a, a_hi.max(b_hi))),
                ],
            )
            .unwrap();
            let frame = Arc::new(OutputFrame::new(&var));
            let acts: Vec<Activation> = levels
                .iter()
                .map(|(k, l)| act(["s0", "s1"][*k], *l))
                .collect();
            let dist = frame.aggregate(&acts);
            let pc = dist.per_category();
            prop_assert_eq!(pc["AB"], pc["A"].or(pc["B"]));
            Ok(())
        },
    )?;

    run_prop(
        "subset monotonicity",
        (
            levels,
            (
                0.0f64..10.0,
                0.0f64..3.0,
                0.0f64..3.0,
                0.0f64..3.0,
                0.1f64..=1.0,
            ),
            (0.0f64..2.0, 0.0f64..2.0, unit.clone()),
        ),
        |(levels, (ml, w, al, be, h), (gl, gr, dh))| {
            let small = MembershipFunction::trapezoid(ml, ml + w, al, be, h).unwrap();
            let big =
                MembershipFunction::trapezoid(ml - gl, ml + w + gr, al, be, h + (1.0 - h) * dh)
                    .unwrap();
            let var = LinguisticVariable::new(
                "x",
                0.0,
                10.0,
                41,
                [
                    (
                        "s0",
                        MembershipFunction::trapezoid(2.0, 4.0, 1.0, 2.0, 1.0).unwrap(),
                    ),
                    (
                        "s1",
                        MembershipFunction::sigmoid(6.0, 3.0, Direction::Increasing, 1.0).unwrap(),
                    ),
                    ("A", small),
                    ("B", big),
                ],
            )
            .unwrap();
            let frame = Arc::new(OutputFrame::new(&var));
            let acts: Vec<Activation> = levels
                .iter()
                .map(|(k, l)| act(["s0", "s1"][*k], *l))
                .collect();
            let dist = frame.aggregate(&acts);
            prop_assert!(dist.per_category()["A"] <= dist.per_category()["B"]);
            Ok(())
        },
    )?;

    let samples =
        prop::collection::vec(unit, 2..40).prop_filter("some mass", |v| v.iter().any(|&p| p > 0.0));
    run_prop("normalize / unsure", samples, |pi| {
        let grid: Vec<f64> = (0..pi.len()).map(|i| i as f64).collect();
        let raw = PossibilityDistribution::from_samples(
            grid,
            pi.iter().map(|&p| FuzzyDegree::new(p).unwrap()).collect(),
        )
        .unwrap();
        let unsure = unsure_residual(&raw).unwrap();
        prop_assert!((unsure.value() + raw.max().value() - 1.0).abs() <= f64::EPSILON);
        let norm = normalize(&raw).unwrap();
        prop_assert_eq!(norm.max().value(), 1.0);
        let (r, n) = (raw.pi(), norm.pi());
        for i in 0..r.len() {
            prop_assert_eq!(r[i] == raw.max(), n[i].value() == 1.0);
            for j in 0..r.len() {
                prop_assert_eq!(r[i].partial_cmp(&r[j]), n[i].partial_cmp(&n[j]));
            }
        }
        Ok(())
    })?;

    Ok(format!(
        "4 property groups x {RANDOM_CASES} cases, 0 violations"
    ))
}

fn ac4_dual_validity() -> Outcome {
    let duals = std::cell::Cell::new(0usize);
    run_prop("dual validity", case(2..=51), |c| {
        let (system, obs) = build(&c);
        let forecast = system.evaluate(&obs).unwrap();
        for d in &forecast.duals {
            prop_assert_eq!(check_validity(d.possibility, d.necessity), Validity::Valid);
            prop_assert!(d.valid);
            duals.set(duals.get() + 1);
        }
        Ok(())
    })?;
    let cfg = parse_config(REFERENCE_CONFIG, &Overrides::default()).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let obs = Observation::new()
            .with("wind", rng.gen_range(-1.0..22.0))
            .with("snow", rng.gen_range(-1.0..65.0));
        let rec = run_single(&cfg, &obs).map_err(|e| e.to_string())?;
        for d in &rec.duals {
            let v = check_validity(
                FuzzyDegree::new(d.possibility).unwrap(),
                FuzzyDegree::new(d.necessity).unwrap(),
            );
            ensure(v == Validity::Valid && d.valid, || {
                format!("serialized dual {d:?} is invalid")
            })?;
            duals.set(duals.get() + 1);
        }
    }
    Ok(format!(
        "{RANDOM_CASES} random systems + 500 reference runs, {} duals all valid",
        duals.get()
    ))
}

fn ac5_necessity_oracle() -> Outcome {
    let map = (1..=6usize)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(
                    prop_oneof![(0u32..=1000).prop_map(|k| k as f64 / 1000.0), 0.0f64..=1.0],
                    n,
                ),
                0..n,
            )
        })
        .prop_map(|(mut v, top)| {
            v[top] = 1.0;
            v
        });
    run_prop("necessity", map, |values| {
        let field: IndexMap<String, FuzzyDegree> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| (format!("c{i}"), FuzzyDegree::new(v).unwrap()))
            .collect();
        for (i, name) in field.keys().enumerate() {
            let mut rival = 0.0f64;
            for (j, &v) in values.iter().enumerate() {
                if j != i && v > rival {
                    rival = v;
                }
            }
            let expected = if rival >= 1.0 - FULL_TOLERANCE {
                0.0
            } else {
                1.0 - rival
            };
            prop_assert_eq!(necessity(&field, name).unwrap().value(), expected);
        }
        Ok(())
    })?;
    Ok(format!(
        "{RANDOM_CASES} maps of 1-6 categories, exact match"
    ))
}

fn ac6_aggregation_oracle() -> Outcome {
    run_prop("aggregation", case(2..=11), |c| {
        let (system, obs) = build(&c);
        let raw = system.evaluate(&obs).unwrap().raw;
        let mu = |f: &MembershipFunction, x: f64| f.eval(x).unwrap().value();
        let mut levels = Vec::new();
        for r in &c.rules {
            let mut level: Option<f64> = None;
            for &(v, k, neg) in &r.clauses {
                let x = c.obs[v].clamp(0.0, 10.0);
                let d = mu(&c.inputs[v][k], x);
                let d = if neg { 1.0 - d } else { d };
                level = Some(match level {
                    None => d,
                    Some(l) if r.or => l.max(d),
                    Some(l) => l.min(d),
                });
            }
            levels.push(level.unwrap());
        }
        let grid = raw.grid();
        let mut expected = vec![0.0f64; grid.len()];
        for (i, &x) in grid.iter().enumerate() {
            for (r, &level) in c.rules.iter().zip(&levels) {
                let clipped = level.min(mu(&c.outputs[r.consequent], x));
                if clipped > expected[i] {
                    expected[i] = clipped;
                }
            }
        }
        let got: Vec<f64> = raw.pi().iter().map(|p| p.value()).collect();
        prop_assert_eq!(got, expected);
        Ok(())
    })?;
    Ok(format!(
        "{RANDOM_CASES} systems, <=11 nodes, <=3 rules, exact match"
    ))
}

/// Exact integral of the linear interpolant of `pi` from the first node to `x`.
fn mass_left_of(grid: &[f64], pi: &[f64], x: f64) -> f64 {
    let mut total = 0.0;
    for i in 1..grid.len() {
        let (x0, x1) = (grid[i - 1], grid[i]);
        if x <= x0 {
            break;
        }
        let end = x.min(x1);
        let y0 = pi[i - 1];
        let yend = y0 + (pi[i] - y0) * (end - x0) / (x1 - x0);
        total += 0.5 * (y0 + yend) * (end - x0);
    }
    total
}

fn ac7_defuzzification() -> Outcome {
    let grid: Vec<f64> = (0..=200).map(|i| i as f64 * 0.5).collect();
    let flat =
        PossibilityDistribution::from_samples(grid.clone(), vec![FuzzyDegree::ONE; 201]).unwrap();
    let s = percentile_defuzz(&flat, &[0.1, 0.5, 0.9]).map_err(|e| e.to_string())?;
    for (sc, want) in s.percentiles.iter().zip([10.0, 50.0, 90.0]) {
        ensure((sc.value - want).abs() <= 1e-9, || {
            format!("uniform p{} -> {}, expected {want}", sc.p, sc.value)
        })?;
    }

    let worst_split = std::cell::Cell::new(0.0f64);
    let worst_shift = std::cell::Cell::new(0.0f64);
    let ps = [0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95];
    runner(2_000)
        .run(&case(201..=201), |c| {
            let (system, obs) = build(&c);
            let raw = system.evaluate(&obs).unwrap().raw;
            if raw.max().value() <= 0.0 {
                return Ok(());
            }
            let pi: Vec<f64> = raw.pi().iter().map(|p| p.value()).collect();
            let total = mass_left_of(raw.grid(), &pi, f64::INFINITY);
            let set = percentile_defuzz(&raw, &ps).unwrap();
            for sc in &set.percentiles {
                let share = mass_left_of(raw.grid(), &pi, sc.value) / total;
                let err = (share - sc.p).abs();
                worst_split.set(worst_split.get().max(err));
                prop_assert!(err <= 0.005, "p{} re-integrates to {}", sc.p, share);
            }
            let norm = percentile_defuzz(&normalize(&raw).unwrap(), &ps).unwrap();
            for (a, b) in set.percentiles.iter().zip(&norm.percentiles) {
                let d = (a.value - b.value).abs();
                worst_shift.set(worst_shift.get().max(d));
                prop_assert!(d <= 1e-9, "p{} moved {} -> {}", a.p, a.value, b.value);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!(
        "uniform exact to 1e-9; worst mass split {:.1e}; worst normalization shift {:.1e}",
        worst_split.get(),
        worst_shift.get()
    ))
}

enum Expect {
    Parses(&'static str),
    Rejects(usize, usize),
    Mixed(usize, usize),
}

fn ac8_parser_corpus() -> Outcome {
    use Expect::*;
    let corpus: Vec<(&str, Expect)> = vec![
        (
            "IF wind IS calm AND snow IS deep THEN ozone IS elevated",
            Parses("r1: IF wind IS calm AND snow IS deep THEN ozone IS elevated"),
        ),
        (
            "IF wind IS breezy THEN ozone IS background",
            Parses("r1: IF wind IS breezy THEN ozone IS background"),
        ),
        (
            "if wind is calm then ozone is elevated",
            Parses("r1: IF wind IS calm THEN ozone IS elevated"),
        ),
        (
            "If Wind Is Calm Then Ozone Is Elevated",
            Parses("r1: IF Wind IS Calm THEN Ozone IS Elevated"),
        ),
        (
            "  IF   wind  IS calm\tTHEN ozone IS elevated  ",
            Parses("r1: IF wind IS calm THEN ozone IS elevated"),
        ),
        (
            "IF wind IS NOT calm THEN ozone IS background",
            Parses("r1: IF wind IS NOT calm THEN ozone IS background"),
        ),
        (
            "IF wind IS not calm AND snow IS NOT deep THEN ozone IS background",
            Parses("r1: IF wind IS NOT calm AND snow IS NOT deep THEN ozone IS background"),
        ),
        (
            "IF a IS x OR b IS y OR c IS z THEN o IS k",
            Parses("r1: IF a IS x OR b IS y OR c IS z THEN o IS k"),
        ),
        (
            "IF a IS x AND b IS y AND c IS z THEN o IS k",
            Parses("r1: IF a IS x AND b IS y AND c IS z THEN o IS k"),
        ),
        (
            "rule_7: IF a IS x THEN o IS k",
            Parses("rule_7: IF a IS x THEN o IS k"),
        ),
        (
            "r2 : IF a IS x THEN o IS k",
            Parses("r2: IF a IS x THEN o IS k"),
        ),
        (
            "IF _a1 IS _b2 THEN _o IS _k9",
            Parses("r1: IF _a1 IS _b2 THEN _o IS _k9"),
        ),
        (
            "IF a IS x THEN o IS k # trailing comment",
            Parses("r1: IF a IS x THEN o IS k"),
        ),
        (
            "IF a IS x or b IS y THEN o IS k",
            Parses("r1: IF a IS x OR b IS y THEN o IS k"),
        ),
        (
            "IF a IS x and b IS NOT y THEN o IS k",
            Parses("r1: IF a IS x AND b IS NOT y THEN o IS k"),
        ),
        (
            "IF snow_depth IS very_deep THEN ozone_ppb IS high",
            Parses("r1: IF snow_depth IS very_deep THEN ozone_ppb IS high"),
        ),
        (
            "IF a IS x\nTHEN o IS k",
            Parses("r1: IF a IS x THEN o IS k"),
        ),
        (
            "IF a IS NOT x OR a IS NOT y THEN o IS k",
            Parses("r1: IF a IS NOT x OR a IS NOT y THEN o IS k"),
        ),
        (
            "IF A1 IS B2 THEN C3 IS D4",
            Parses("r1: IF A1 IS B2 THEN C3 IS D4"),
        ),
        (
            "IF ifx IS thenx THEN isx IS notx",
            Parses("r1: IF ifx IS thenx THEN isx IS notx"),
        ),
        (
            "x: if a is x then o is k",
            Parses("x: IF a IS x THEN o IS k"),
        ),
        ("IF a IS x AND b IS y OR c IS z THEN o IS k", Mixed(1, 22)),
        ("IF a IS x OR b IS y AND c IS z THEN o IS k", Mixed(1, 21)),
        (
            "IF wind IS calm AND snow IS deep OR wind IS breezy THEN ozone IS elevated",
            Mixed(1, 34),
        ),
        ("", Rejects(1, 1)),
        ("wind IS calm THEN ozone IS elevated", Rejects(1, 6)),
        ("IF THEN ozone IS elevated", Rejects(1, 4)),
        ("IF wind calm THEN ozone IS elevated", Rejects(1, 9)),
        ("IF wind IS THEN ozone IS elevated", Rejects(1, 12)),
        ("IF wind IS calm ozone IS elevated", Rejects(1, 17)),
        ("IF wind IS calm THEN", Rejects(1, 21)),
        ("IF wind IS calm THEN ozone", Rejects(1, 27)),
        ("IF wind IS calm THEN ozone IS", Rejects(1, 30)),
        ("IF wind IS calm THEN ozone IS NOT elevated", Rejects(1, 31)),
        (
            "IF wind IS calm THEN ozone IS elevated extra",
            Rejects(1, 40),
        ),
        ("IF wind IS calm AND THEN ozone IS elevated", Rejects(1, 21)),
        (
            "IF wind IS calm AND AND snow IS deep THEN o IS k",
            Rejects(1, 21),
        ),
        ("IF wind IS NOT NOT calm THEN o IS k", Rejects(1, 16)),
        ("IF 1wind IS calm THEN o IS k", Rejects(1, 4)),
        ("IF wind IS ca-lm THEN o IS k", Rejects(1, 14)),
        ("IF wind IS calm THEN o IS k;", Rejects(1, 28)),
        ("IF IF IS calm THEN o IS k", Rejects(1, 4)),
        ("IF wind IS calm THEN THEN IS k", Rejects(1, 22)),
        (": IF a IS x THEN o IS k", Rejects(1, 1)),
        ("r1 IF a IS x THEN o IS k", Rejects(1, 4)),
        ("r1: r2: IF a IS x THEN o IS k", Rejects(1, 5)),
        ("IF a IS x THEN o IS k THEN", Rejects(1, 23)),
        ("IF a IS x\nTHEN o IS", Rejects(2, 10)),
        ("IF a IS x\n  AND", Rejects(2, 6)),
        ("IF a IS x THEN # o IS k", Rejects(1, 16)),
    ];
    ensure(corpus.len() == 50, || {
        format!("corpus has {} cases", corpus.len())
    })?;
    let mut failures = Vec::new();
    for (text, expect) in &corpus {
        let got = parse_rule(text);
        let ok = match (expect, &got) {
            (Parses(canonical), Ok(rule)) => {
                let rendered = rule.to_string();
                let reparsed = parse_rule(&rendered);
                rendered == *canonical
                    && reparsed.as_ref() == Ok(rule)
                    && reparsed.map(|r| r.to_string()).as_deref() == Ok(&rendered)
            }
            (Rejects(l, c), Err(e @ ParseError::Syntax { expected, .. })) => {
                e.position() == (*l, *c) && !expected.is_empty()
            }
            (Mixed(l, c), Err(e @ ParseError::MixedConnective { .. })) => e.position() == (*l, *c),
            _ => false,
        };
        if !ok {
            let shown = match &got {
                Ok(r) => format!("parsed as `{r}`"),
                Err(e) => format!("{e:?} at {:?}", e.position()),
            };
            failures.push(format!("{text:?}: {shown}"));
        }
    }
    let block = "# header\nIF a IS x THEN o IS k\n\nIF b IS y THEN o IS j # c\nq: IF a IS NOT x OR b IS y THEN o IS k\n";
    match parse_rules(block) {
        Ok(rules) => {
            let ids: Vec<&str> = rules.iter().map(|r| r.id.as_str()).collect();
            if ids != ["r1", "r2", "q"] {
                failures.push(format!("block ids {ids:?}"));
            }
        }
        Err(e) => failures.push(format!("block rejected: {e:?}")),
    }
    match parse_rules(
        "IF a IS x THEN o IS k\nIF a IS THEN o IS k\nIF a IS x AND b IS y OR c IS z THEN o IS k\n",
    ) {
        Err(errs)
            if errs.iter().map(ParseError::position).collect::<Vec<_>>() == [(2, 9), (3, 22)] => {}
        other => failures.push(format!("multi-error block: {other:?}")),
    }
    if failures.is_empty() {
        Ok(format!(
            "{} corpus cases + 2 blocks as specified",
            corpus.len()
        ))
    } else {
        Err(failures.join("\n        "))
    }
}

fn ac9_batch_determinism() -> Outcome {
    let cfg = parse_config(REFERENCE_CONFIG, &Overrides::default()).map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut csv = String::from("timestamp,wind,snow,observed\n");
    let cats = ["background", "elevated", "extreme"];
    for i in 0..1000 {
        writeln!(
            csv,
            "2024-01-{:02}T{:02}:00Z,{:.2},{:.1},{}",
            1 + i / 24 % 28,
            i % 24,
            rng.gen_range(0.0..12.0),
            rng.gen_range(0.0..45.0),
            cats[rng.gen_range(0..3)]
        )
        .unwrap();
    }
    let input = dir.path().join("series.csv");
    std::fs::write(&input, csv).map_err(|e| e.to_string())?;

    let mut outputs = Vec::new();
    let mut slowest = Duration::ZERO;
    for (run, workers) in [(1, 8), (2, 8), (3, 1)] {
        let out = dir.path().join(format!("run{run}.jsonl"));
        let start = Instant::now();
        let summary = run_batch(&cfg, &input, &out, Some(workers)).map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed());
        ensure(summary.rows == 1000 && summary.errors == 0, || {
            format!("summary {summary:?}")
        })?;
        outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], || {
        "two 8-worker runs differ".into()
    })?;
    ensure(outputs[0] == outputs[2], || {
        "1-worker and 8-worker runs differ".into()
    })?;
    ensure(slowest < Duration::from_secs(5), || {
        format!("slowest run {slowest:?}")
    })?;
    Ok(format!(
        "1000 rows, {} bytes identical across runs and workers {{1, 8}}, slowest {slowest:.2?}",
        outputs[0].len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1", "worked example", ac1_worked_example),
        ("AC2", "membership table", ac2_membership_table),
        ("AC3", "axiom suite", ac3_axioms),
        ("AC4", "possibility/necessity validity", ac4_dual_validity),
        ("AC5", "necessity oracle", ac5_necessity_oracle),
        ("AC6", "aggregation oracle", ac6_aggregation_oracle),
        ("AC7", "defuzzification", ac7_defuzzification),
        ("AC8", "parser corpus", ac8_parser_corpus),
        ("AC9", "batch determinism", ac9_batch_determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, title, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("[PASS] {id} {title}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {id} {title}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
