//! Propagator hygiene: contraction, idempotence, fixpoint order independence,
//! plus the interval-counting and bounds-propagator contracts.

use fptprop::engine::{fixpoint, Propagator};
use fptprop::interval::{intervals_count, lift_to_dc, runs, sum_bc, SumBc};
use fptprop::random::{add_companion, instance, Shape};
use fptprop::{oracle, Config, Domain, Kind, ProblemState, Pruning, Value};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn kind() -> impl Strategy<Value = Kind> {
    prop::sample::select(Kind::ALL.to_vec())
}

fn gen(kind: Kind, seed: u64) -> ProblemState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    instance(kind, Shape::new(5, 4, 4).sample_within(&mut rng), &mut rng).unwrap()
}

fn domains(s: &ProblemState) -> Vec<Domain> {
    s.vars().iter().map(|v| v.domain.clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn propagation_contracts(kind in kind(), seed in any::<u64>()) {
        let s = gen(kind, seed);
        let c = &s.constraints()[0];
        let config = Config::default();
        let once = c.prune(&s, &config).unwrap();
        if let Pruning::Domains(m) = &once {
            for (&v, d) in m {
                prop_assert!(d.is_subset(s.dom(v)));
            }
            let mut after = s.clone();
            after.apply(&once, "p").unwrap();
            let twice = c.prune(&after, &config).unwrap();
            prop_assert_eq!(twice, after.snapshot(&c.scope(&after).unwrap()));
        }
    }

    #[test]
    fn fixpoint_is_order_independent_and_idempotent(kind in kind(), seed in any::<u64>()) {
        let mut s = gen(kind, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa5a5);
        prop_assume!(add_companion(&mut s, &mut rng).unwrap());
        let config = Config::default();
        let props: Vec<_> = s.constraints().iter().map(|c| c.propagator(config)).collect();
        let forward: Vec<&dyn Propagator> = props.iter().map(|p| p as &dyn Propagator).collect();
        let backward: Vec<&dyn Propagator> = forward.iter().rev().copied().collect();

        let mut a = s.clone();
        let fa = fixpoint(&mut a, &forward).unwrap();
        let mut b = s.clone();
        let fb = fixpoint(&mut b, &backward).unwrap();
        prop_assert_eq!(fa.outcome.is_wipeout(), fb.outcome.is_wipeout());
        if !fa.outcome.is_wipeout() {
            prop_assert_eq!(domains(&a), domains(&b));
            let before = domains(&a);
            let again = fixpoint(&mut a, &forward).unwrap();
            prop_assert!(!again.outcome.is_wipeout());
            prop_assert_eq!(before, domains(&a));
        }
    }

    #[test]
    fn oracle_is_idempotent(kind in kind(), seed in any::<u64>()) {
        let s = gen(kind, seed);
        let c = &s.constraints()[0];
        let once = oracle::constraint_dc(c, &s, 1 << 24).unwrap();
        if !once.is_wipeout() {
            let mut after = s.clone();
            after.apply(&once, "oracle").unwrap();
            let twice = oracle::constraint_dc(c, &after, 1 << 24).unwrap();
            prop_assert_eq!(twice, after.snapshot(&c.scope(&after).unwrap()));
        }
    }

    #[test]
    fn intervals_count_two_ways(values in prop::collection::btree_set(-20i64..20, 1..15)) {
        let d = Domain::new(values);
        let max = d.max().unwrap();
        let holes_ends = d.iter().filter(|&v| !d.contains(v + 1) && v != max).count();
        prop_assert_eq!(intervals_count(&d).unwrap(), 1 + holes_ends);
        prop_assert_eq!(runs(&d).len(), intervals_count(&d).unwrap());
    }

    /// On interval domains, the sum bounds fixpoint keeps exactly the hull of
    /// the supported values, so its bounds are supported.
    #[test]
    fn sum_bc_is_bound_consistent(
        boxes in prop::collection::vec((0i64..6, 0i64..4), 1..4),
        t in (0i64..15, 0i64..6),
    ) {
        let mut b: Vec<(Value, Value)> = boxes.iter().map(|&(lo, w)| (lo, lo + w)).collect();
        b.push((t.0, t.0 + t.1));
        let input = b.clone();
        let ok = sum_bc(&mut b);

        let mut s = ProblemState::new();
        let scope: Vec<_> = input.iter().enumerate()
            .map(|(i, &(lo, hi))| s.add_var(format!("V{i}"), Domain::interval(lo, hi)).unwrap())
            .collect();
        let n = scope.len() - 1;
        let dc = oracle::brute_force_dc(|x| oracle::sum_check(&x[..n], x[n]), &s, &scope, 1 << 20).unwrap();
        match dc {
            Pruning::Wipeout => prop_assert!(!ok),
            Pruning::Domains(m) => {
                prop_assert!(ok);
                for (i, v) in scope.iter().enumerate() {
                    let d = &m[v];
                    prop_assert_eq!(b[i], (d.min().unwrap(), d.max().unwrap()));
                }
            }
        }
    }

    #[test]
    fn lift_cost_envelope(seed in any::<u64>()) {
        let s = gen(Kind::SumEq, seed);
        let scope = s.constraints()[0].scope(&s).unwrap();
        let l = lift_to_dc(&SumBc, &s, &scope, 4096).unwrap();
        let d = scope.iter().map(|&v| s.dom(v).len() as u64).max().unwrap();
        let product: u64 = scope.iter().map(|&v| runs(s.dom(v)).len() as u64).product();
        prop_assert!(l.bc_calls <= scope.len() as u64 * d * product);
        prop_assert!(product <= (l.p as u64).pow(l.q as u32));
    }
}
