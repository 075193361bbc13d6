use hardcsp::generator::{generate, GenParams};
use hardcsp::model::CspInstance;
use hardcsp::solver::{
    ac2001_propagate, ac3_propagate, brute_force_satisfiable, solve, DomainState, SolveLimits,
    SolveStatus, Solver,
};
use proptest::prelude::*;

fn small_params() -> impl Strategy<Value = GenParams> {
    (
        2usize..=6,
        2usize..=4,
        any::<u64>(),
        0.0f64..=1.0,
        0.0f64..=1.0,
        0.0f64..=1.0,
        0.0f64..=1.0,
    )
        .prop_map(|(n, d, seed, ef, nff, t, bif)| {
            let pairs = n * (n - 1) / 2;
            let e = 1 + ((pairs - 1) as f64 * ef).round() as usize;
            let nf = (e as f64 * nff).round() as usize;
            GenParams {
                n,
                d,
                e,
                nf,
                t,
                bif_share: bif,
                seed,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ac2001_matches_ac3(p in small_params(), pin in any::<(usize, usize)>()) {
        let inst = generate(&p).unwrap();
        let mut a = DomainState::new(&inst);
        // start from a non-trivial domain too
        a.assign(pin.0 % inst.n(), pin.1 % inst.d());
        let mut b = a.clone();
        let ra = ac2001_propagate(&inst, &mut a);
        let rb = ac3_propagate(&inst, &mut b);
        prop_assert_eq!(ra.is_consistent(), rb.is_consistent());
        if ra.is_consistent() {
            prop_assert_eq!(a.snapshot(), b.snapshot());
        }
    }

    #[test]
    fn solve_matches_brute_force(p in small_params()) {
        let inst = generate(&p).unwrap();
        let r = solve(&inst, SolveLimits::unlimited());
        let expect = brute_force_satisfiable(&inst).unwrap();
        prop_assert_eq!(r.status == SolveStatus::Sat, expect);
        prop_assert!(r.backtracks <= r.nodes);
        if let Some(a) = &r.assignment {
            for c in inst.constraints() {
                prop_assert!(c.allows(a[c.i()], a[c.j()]));
            }
        }
    }

    #[test]
    fn search_statistics_are_deterministic(p in small_params()) {
        let inst = generate(&p).unwrap();
        let a = solve(&inst, SolveLimits::unlimited());
        let b = solve(&inst, SolveLimits::unlimited());
        prop_assert_eq!((a.status, a.backtracks, a.nodes, a.assignment), (b.status, b.backtracks, b.nodes, b.assignment));
    }

    #[test]
    fn removing_a_constraint_keeps_sat(p in small_params(), k in any::<usize>()) {
        let inst = generate(&p).unwrap();
        if solve(&inst, SolveLimits::unlimited()).status == SolveStatus::Sat {
            let relaxed: CspInstance = inst.without_constraint(k % inst.constraints().len());
            prop_assert_eq!(Solver::new(&relaxed).solve().status, SolveStatus::Sat);
        }
    }
}
