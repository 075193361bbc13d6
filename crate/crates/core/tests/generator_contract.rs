use std::collections::BTreeSet;

use hardcsp::generator::{
    general_tuple_count, generate, generate_with, sweep_grid, FloatAxis, GenParams, IntAxis,
    SweepConfig, TightnessConvention,
};
use hardcsp::model::{ConstraintKind, CspInstance, Direction};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = GenParams> {
    (
        2usize..=20,
        1usize..=12,
        any::<u64>(),
        0.0f64..=1.0,
        0.0f64..=1.0,
        0u32..=100,
        0.0f64..=1.0,
    )
        .prop_map(|(n, d, seed, ef, nff, pct, bif)| {
            let pairs = n * (n - 1) / 2;
            let e = 1 + ((pairs - 1) as f64 * ef) as usize;
            GenParams {
                n,
                d,
                e,
                nf: (e as f64 * nff) as usize,
                t: pct as f64 / 100.0,
                bif_share: bif,
                seed,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn counts_and_kinds(p in params()) {
        let inst = generate(&p).unwrap();
        prop_assert_eq!(inst.constraints().len(), p.e);
        let scopes: BTreeSet<_> = inst.constraints().iter().map(|c| c.scope()).collect();
        prop_assert_eq!(scopes.len(), p.e);
        // percent tightness, rounded half up in integers
        let want = (2 * (p.t * 100.0).round() as usize * p.d * p.d + 100) / 200;
        prop_assert_eq!(general_tuple_count(p.t, p.d), want);
        let mut functional = 0;
        for c in inst.constraints() {
            match c.kind() {
                ConstraintKind::General => prop_assert_eq!(c.allowed_count(), want),
                ConstraintKind::Functional => {
                    functional += 1;
                    prop_assert_eq!(c.allowed_count(), p.d);
                    prop_assert!(c.is_functional(Direction::OnJ));
                }
                ConstraintKind::BiFunctional => {
                    functional += 1;
                    prop_assert_eq!(c.allowed_count(), p.d);
                    prop_assert!(c.is_functional(Direction::OnJ) && c.is_functional(Direction::OnI));
                }
            }
        }
        prop_assert_eq!(functional, p.nf);
    }

    #[test]
    fn same_seed_same_instance(p in params()) {
        let a = generate(&p).unwrap();
        let b = generate(&p).unwrap();
        prop_assert_eq!(a.to_text(), b.to_text());
        let back = CspInstance::from_text(&a.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), a.to_text());
    }

    #[test]
    fn forbidden_convention_complements(p in params()) {
        let q = GenParams { nf: 0, ..p };
        let inst = generate_with(&q, TightnessConvention::Forbidden).unwrap();
        let want = q.d * q.d - general_tuple_count(q.t, q.d);
        for c in inst.constraints() {
            prop_assert_eq!(c.allowed_count(), want);
        }
    }
}

#[test]
fn bad_params_are_rejected() {
    let ok = GenParams {
        n: 4,
        d: 3,
        e: 6,
        nf: 2,
        t: 0.5,
        bif_share: 0.0,
        seed: 1,
    };
    assert!(generate(&ok).is_ok());
    for bad in [
        GenParams { e: 7, ..ok.clone() },
        GenParams { e: 0, ..ok.clone() },
        GenParams {
            nf: 7,
            ..ok.clone()
        },
        GenParams {
            t: 1.5,
            ..ok.clone()
        },
        GenParams { d: 0, ..ok.clone() },
        GenParams {
            bif_share: -0.1,
            ..ok.clone()
        },
    ] {
        assert!(generate(&bad).unwrap_err().is_config_error(), "{bad:?}");
    }
}

#[test]
fn sweep_seeds_are_distinct_and_ordered() {
    let cfg = SweepConfig {
        n: 10,
        d: 5,
        e: IntAxis::new(5, 25, 10),
        nf: IntAxis::new(0, 6, 3),
        t: FloatAxis::new(0.3, 0.5, 0.1),
        seed: IntAxis::new(100, 104, 2),
        instances_per_point: 2,
        bif_share: 0.0,
    };
    let grid = sweep_grid(&cfg).unwrap();
    // 3 e x 3 nf x 3 t x (3 seeds x 2 instances), minus (e=5, nf=6)
    assert_eq!(grid.len(), (3 * 3 - 1) * 3 * 6);
    let seeds: BTreeSet<u64> = grid.iter().map(|p| p.seed).collect();
    assert_eq!(seeds.len(), grid.len());
    assert_eq!(grid[0].seed, 100);
    assert_eq!(grid[1].seed, 102);
    let ts: BTreeSet<String> = grid.iter().map(|p| format!("{:.9}", p.t)).collect();
    assert_eq!(
        ts,
        BTreeSet::from([
            "0.300000000".into(),
            "0.400000000".into(),
            "0.500000000".into()
        ])
    );
    for w in grid.windows(2) {
        assert!((w[0].e, w[0].nf) <= (w[1].e, w[1].nf));
    }
}
