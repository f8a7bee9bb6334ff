//! The four verbs, as library functions returning reports.

use std::hint::black_box;
use std::time::{Duration, Instant};

use fptprop::oracle::constraint_dc;
use fptprop::random::{self, Shape};
use fptprop::{
    fixpoint, Config, Constraint, Domain, Error, Kind, ProblemState, Propagator, Pruning, Value,
    VarId,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toml::Spanned;

use crate::error::CliError;
use crate::instance::{from_state, ConstraintBody, ConstraintDecl, InstanceFile, Model, VarDecl};
use crate::report::{
    BenchReport, BenchRow, CompareReport, ConstraintComparison, ConstraintStats, PropagateReport,
    RandomSummary, SetChange, SummaryRow, VarChange, VarComparison,
};

/// The filtering procedure under test in [`compare_with`].
pub type Filter<'a> = &'a dyn Fn(&Constraint, &ProblemState, &Config) -> fptprop::Result<Pruning>;

/// The library's own filtering algorithm for each constraint.
pub fn fpt_filter(
    c: &Constraint,
    state: &ProblemState,
    config: &Config,
) -> fptprop::Result<Pruning> {
    c.prune(state, config)
}

fn bit_vars(state: &ProblemState) -> Vec<VarId> {
    state
        .set_vars()
        .iter()
        .flat_map(|s| s.bits.iter().copied())
        .collect()
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Runs every constraint's propagator to a common fixpoint.
pub fn propagate(model: &Model, config: Config) -> Result<PropagateReport, CliError> {
    let before = &model.state;
    let ks = before
        .constraints()
        .iter()
        .map(|c| c.parameter(before))
        .collect::<fptprop::Result<Vec<_>>>()?;
    let propagators: Vec<_> = before
        .constraints()
        .iter()
        .map(|c| c.propagator(config))
        .collect();
    let refs: Vec<&dyn Propagator> = propagators.iter().map(|p| p as &dyn Propagator).collect();

    let mut after = before.clone();
    let start = Instant::now();
    let result = fixpoint(&mut after, &refs)?;
    let wall_time_ms = elapsed_ms(start);

    let bits = bit_vars(before);
    let variables = before
        .vars()
        .iter()
        .filter(|v| !bits.contains(&v.id))
        .map(|v| VarChange {
            name: v.name.clone(),
            before: v.domain.values().to_vec(),
            after: after.dom(v.id).values().to_vec(),
        })
        .collect();
    let sets = before
        .set_vars()
        .iter()
        .map(|s| SetChange {
            name: s.name.clone(),
            lb_before: before.lb(s.id).unwrap_or_default(),
            ub_before: before.ub(s.id).unwrap_or_default(),
            lb_after: after.lb(s.id).unwrap_or_default(),
            ub_after: after.ub(s.id).unwrap_or_default(),
        })
        .collect();
    let constraints = before
        .constraints()
        .iter()
        .zip(&model.labels)
        .zip(ks)
        .zip(&result.invocations)
        .map(|(((c, label), k), &invocations)| ConstraintStats {
            name: label.clone(),
            kind: c.kind().to_string(),
            k,
            invocations,
        })
        .collect();

    Ok(PropagateReport {
        status: result.outcome.status.to_string(),
        failed: result.failed.map(|i| model.labels[i].clone()),
        variables,
        sets,
        constraints,
        wall_time_ms,
    })
}

fn oracle(c: &Constraint, state: &ProblemState, cap: u128) -> Result<Pruning, CliError> {
    constraint_dc(c, state, cap).map_err(|e| match e {
        Error::OracleCapExceeded { estimate, cap } => CliError::usage(format!(
            "the oracle would enumerate {estimate} assignments, over the cap of {cap}; \
             use a smaller instance or raise --oracle-cap"
        )),
        other => other.into(),
    })
}

fn kept(p: &Pruning, state: &ProblemState, var: VarId) -> Vec<Value> {
    match p {
        Pruning::Wipeout => Vec::new(),
        Pruning::Domains(d) => d.get(&var).unwrap_or(state.dom(var)).values().to_vec(),
    }
}

/// Compares [`fpt_filter`] with the brute-force oracle, constraint by
/// constraint, on the instance as declared.
pub fn compare(model: &Model, config: Config) -> Result<CompareReport, CliError> {
    compare_with(model, config, &fpt_filter)
}

/// As [`compare`], with the filter under test supplied by the caller.
pub fn compare_with(
    model: &Model,
    config: Config,
    filter: Filter,
) -> Result<CompareReport, CliError> {
    let start = Instant::now();
    let state = &model.state;
    let mut constraints = Vec::new();
    for (c, label) in state.constraints().iter().zip(&model.labels) {
        let scope = c.scope(state)?;
        let fpt = filter(c, state, &config)?;
        let exact = oracle(c, state, config.oracle_cap)?;
        let variables: Vec<VarComparison> = scope
            .iter()
            .map(|&x| {
                let propagator = kept(&fpt, state, x);
                let oracle = kept(&exact, state, x);
                VarComparison {
                    name: state.name(x).to_string(),
                    original: state.dom(x).values().to_vec(),
                    verdict: if propagator == oracle {
                        "MATCH"
                    } else {
                        "MISMATCH"
                    }
                    .into(),
                    propagator,
                    oracle,
                }
            })
            .collect();
        let all = variables.iter().all(|v| v.verdict == "MATCH");
        constraints.push(ConstraintComparison {
            name: label.clone(),
            kind: c.kind().to_string(),
            k: c.parameter(state)?,
            verdict: if all { "MATCH" } else { "MISMATCH" }.into(),
            variables,
        });
    }
    let all = constraints.iter().all(|c| c.verdict == "MATCH");
    Ok(CompareReport {
        status: if all { "match" } else { "mismatch" }.into(),
        constraints,
        wall_time_ms: elapsed_ms(start),
    })
}

/// `count` seeded instances of one family, each with a shape drawn within
/// `shape`. Every kind draws from its own stream of the same seed.
pub fn random_instances(
    kind: Kind,
    seed: u64,
    shape: Shape,
    count: usize,
) -> Result<Vec<ProblemState>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stream = Kind::ALL.iter().position(|&k| k == kind).unwrap_or(0);
    rng.set_stream(stream as u64);
    (0..count)
        .map(|_| {
            let s = shape.sample_within(&mut rng);
            random::instance(kind, s, &mut rng).map_err(CliError::from)
        })
        .collect()
}

/// Wraps a single-constraint state as a model labelled `c0`.
pub fn single(state: ProblemState) -> Model {
    let labels = (0..state.constraints().len())
        .map(|i| format!("c{i}"))
        .collect();
    Model { state, labels }
}

/// Randomized comparison over `count` instances per kind.
pub fn compare_random(
    kinds: &[Kind],
    seed: u64,
    shape: Shape,
    count: usize,
    config: Config,
    filter: Filter,
) -> Result<RandomSummary, CliError> {
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut first_mismatch = None;
    for &kind in kinds {
        let mut row = SummaryRow {
            kind: kind.to_string(),
            instances: 0,
            matches: 0,
            mismatches: 0,
            wipeouts: 0,
        };
        for state in random_instances(kind, seed, shape, count)? {
            let model = single(state);
            let report = compare_with(&model, config, filter)?;
            row.instances += 1;
            if report.matches() {
                row.matches += 1;
            } else {
                row.mismatches += 1;
                if first_mismatch.is_none() {
                    first_mismatch = Some(from_state(&model.state, &model.labels).write());
                }
            }
            let infeasible = report
                .constraints
                .iter()
                .any(|c| c.variables.iter().any(|v| v.oracle.is_empty()));
            if infeasible {
                row.wipeouts += 1;
            }
        }
        rows.push(row);
    }
    let all = rows.iter().all(|r| r.mismatches == 0);
    Ok(RandomSummary {
        status: if all { "match" } else { "mismatch" }.into(),
        seed,
        n: shape.n,
        d: shape.d,
        k: shape.k,
        rows,
        first_mismatch,
        wall_time_ms: elapsed_ms(start),
    })
}

/// Builds the NValue instance whose variables range over the given sets and
/// whose count ranges over `0..=k`: it has a solution exactly when some set
/// of at most `k` values meets every input set.
pub fn gen_hitting_set(sets: &[Vec<Value>], k: u64) -> Result<InstanceFile, CliError> {
    if let Some(i) = sets.iter().position(|s| s.is_empty()) {
        return Err(CliError::usage(format!(
            "set {} is empty and can never be hit",
            i + 1
        )));
    }
    let k = Value::try_from(k)
        .ok()
        .filter(|&k| k <= fptprop::VALUE_MAX)
        .ok_or_else(|| CliError::usage(format!("k = {k} is out of range")))?;
    let var = |name: String, domain: Vec<Value>| Spanned::new(0..0, VarDecl { name, domain });
    let mut vars: Vec<_> = sets
        .iter()
        .enumerate()
        .map(|(i, s)| {
            var(
                format!("X{}", i + 1),
                Domain::new(s.iter().copied()).values().to_vec(),
            )
        })
        .collect();
    vars.push(var("N".into(), (0..=k).collect()));
    let x = (1..=sets.len()).map(|i| format!("X{i}")).collect();
    Ok(InstanceFile {
        vars,
        set_vars: Vec::new(),
        constraints: vec![Spanned::new(
            0..0,
            ConstraintDecl {
                name: Some("hitting_set".into()),
                body: ConstraintBody::Nvalue { x, n: "N".into() },
            },
        )],
    })
}

/// Minimum time one timing sample should cover; short filter calls are
/// repeated within a sample to reach it.
const SAMPLE_TARGET: Duration = Duration::from_millis(5);

struct Timed {
    state: ProblemState,
    inner: u32,
    times: Vec<f64>,
}

impl Timed {
    fn call(&self, config: &Config) -> fptprop::Result<()> {
        black_box(self.state.constraints()[0].prune(black_box(&self.state), config)?);
        Ok(())
    }
}

/// Times one filter call on a seeded random instance for every `(n, k)`,
/// with every domain holding exactly `d` values. Samples are taken round
/// robin over the rows so that background load affects all rows alike.
pub fn bench(
    kind: Kind,
    ns: &[usize],
    ks: &[usize],
    d: usize,
    seed: u64,
    samples: usize,
    config: Config,
) -> Result<BenchReport, CliError> {
    let samples = samples.max(1);
    let mut rows = Vec::new();
    let mut timed = Vec::new();
    for &k in ks {
        for &n in ns {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let state = random::instance(
                kind,
                Shape {
                    n,
                    d,
                    k,
                    exact: true,
                },
                &mut rng,
            )?;
            let mut t = Timed {
                state,
                inner: 1,
                times: Vec::with_capacity(samples),
            };
            let start = Instant::now();
            t.call(&config)?;
            let once = start.elapsed().max(Duration::from_nanos(100));
            t.inner = (SAMPLE_TARGET.as_nanos() / once.as_nanos()).clamp(1, 100_000) as u32;
            timed.push(t);
            rows.push(BenchRow {
                kind: kind.to_string(),
                n,
                k,
                d,
                seconds: 0.0,
                samples,
            });
        }
    }
    for _ in 0..samples {
        for t in &mut timed {
            let start = Instant::now();
            for _ in 0..t.inner {
                t.call(&config)?;
            }
            t.times
                .push(start.elapsed().as_secs_f64() / f64::from(t.inner));
        }
    }
    for (row, mut t) in rows.iter_mut().zip(timed) {
        t.times.sort_by(f64::total_cmp);
        row.seconds = t.times[t.times.len() / 2];
    }
    Ok(BenchReport { seed, rows })
}
