use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use profinite::checker::{decide_exists_oi, eval_finite, holds_at, qf_limit, random_formula, witness_tree, Assignment};
use profinite::constructions::{
    builtin, pair, sigma1_group, sigma2_group, sqrt_diag_group, unpair, MockTable, BUILTINS,
};
use profinite::presentation::{parse_dump, Encoding, PathStrategy};
use profinite::{parse, Bindings, ElementHandle, Formula, Permutation, Term, Verdict};

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn word(vars: &'static [&'static str]) -> impl Strategy<Value = Term> {
    prop::collection::vec((0..vars.len(), -2i64..=2), 0..4).prop_map(move |letters| {
        letters
            .into_iter()
            .fold(Term::one(), |t, (v, e)| t.mul(&Term::power(vars[v], e)))
    })
}

/// Quantifier-free formulas over `vars`.
fn qf(vars: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    let atom =
        (word(vars), word(vars), any::<bool>())
            .prop_map(|(l, r, eq)| if eq { Formula::eq(&l, &r) } else { Formula::neq(&l, &r) });
    atom.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            inner.prop_map(Formula::not),
        ]
    })
}

fn path(label: &str, picks: Vec<usize>) -> ElementHandle {
    let s: PathStrategy = Arc::new(move |k, opts| picks[k % picks.len()] % opts.len());
    ElementHandle::from_strategy(label, s)
}

fn any_builtin() -> impl Strategy<Value = &'static str> {
    prop::sample::select(BUILTINS)
}

fn oi_builtin() -> impl Strategy<Value = &'static str> {
    prop::sample::select(&["trivial", "cp2", "cp23", "cp235", "s3"][..])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative_with_inverses((a, b, c) in (1usize..9).prop_flat_map(|n| (perm(n), perm(n), perm(n)))) {
        let ab_c = a.compose(&b).unwrap().compose(&c).unwrap();
        let a_bc = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
        prop_assert_eq!(a.compose(&Permutation::identity(a.len())).unwrap(), a.clone());
        prop_assert!(a.pow(a.order() as i64).is_identity());
        // q is applied first
        for i in 0..a.len() {
            prop_assert_eq!(a.compose(&b).unwrap().apply(i), a.apply(b.apply(i)));
        }
    }

    #[test]
    fn printing_round_trips(p in (1usize..9).prop_flat_map(perm)) {
        prop_assert_eq!(Permutation::from_image_list(&p.image_list()).unwrap(), p.clone());
        prop_assert_eq!(Permutation::from_cycles(p.len(), &p.full_cycles()).unwrap(), p);
    }

    #[test]
    fn branching_counts_sum_to_next_order(name in any_builtin(), k in 0usize..4) {
        let p = builtin(name).unwrap();
        let level = p.level(k).unwrap();
        let total: usize = level.group().elements().iter().map(|g| p.branching(k, g).unwrap()).sum();
        prop_assert_eq!(total, p.level(k + 1).unwrap().order());
    }

    #[test]
    fn strategy_paths_are_coherent(name in any_builtin(), picks in prop::collection::vec(0usize..50, 1..6)) {
        let p = builtin(name).unwrap();
        let h = path("g", picks);
        let mut below: Option<Permutation> = None;
        for k in 0..5 {
            let g = h.resolve(&p, k).unwrap();
            if let Some(b) = below {
                prop_assert_eq!(g.prefix(b.len()).unwrap(), b);
            }
            below = Some(g);
        }
    }

    #[test]
    fn qf_limit_verdicts_hold_past_their_level(
        name in any_builtin(),
        f in qf(&["a", "b"]),
        pa in prop::collection::vec(0usize..50, 1..5),
        pb in prop::collection::vec(0usize..50, 1..5),
    ) {
        let p = builtin(name).unwrap();
        let mut b = Bindings::new();
        b.insert("a".into(), path("a", pa));
        b.insert("b".into(), path("b", pb));
        let v = qf_limit(&p, &f, &b, 3).unwrap();
        let settled = match v {
            Verdict::CertifiedTrue { level, .. } => Some((level, true)),
            Verdict::CertifiedFalse { level, .. } => Some((level, false)),
            Verdict::UnknownUpTo(_) => None,
        };
        if let Some((level, truth)) = settled {
            for k in level..=6 {
                prop_assert_eq!(holds_at(&p, k, &f, &b).unwrap(), truth, "level {}", k);
            }
        }
    }

    #[test]
    fn existential_truth_persists_upward_on_oi_groups(name in oi_builtin(), seed in any::<u64>()) {
        let p = builtin(name).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_formula(&mut rng, &[], false);
        if let Some((_, matrix)) = f.existential_prefix() {
            if !matrix.is_quantifier_free() {
                return Ok(());
            }
            if let Verdict::CertifiedTrue { level, .. } = decide_exists_oi(&p, &f, 4).unwrap() {
                for k in level..=6 {
                    prop_assert!(holds_at(&p, k, &f, &Bindings::new()).unwrap());
                }
            }
        }
    }

    #[test]
    fn witness_levels_hold_every_satisfying_tuple(name in any_builtin(), f in qf(&["x"])) {
        prop_assume!(f.free_vars().contains("x"));
        let p = builtin(name).unwrap();
        let t = witness_tree(&p, &f, &Bindings::new(), 3).unwrap();
        for (k, level) in t.levels.iter().enumerate() {
            let g = p.level(k).unwrap();
            let expected = g
                .group()
                .elements()
                .iter()
                .filter(|x| {
                    let a: Assignment = [("x".to_string(), (*x).clone())].into();
                    eval_finite(g.group(), &f, &a).unwrap()
                })
                .count();
            prop_assert_eq!(level.width(), expected);
            for i in 0..level.width() {
                if let Some(parent) = level.parent(i) {
                    let up = &level.tuple(i)[0];
                    let down = &t.levels[k - 1].tuple(parent)[0];
                    prop_assert_eq!(&up.prefix(down.len()).unwrap(), down);
                }
            }
        }
    }

    #[test]
    fn formulas_round_trip_through_text(seed in any::<u64>(), negative in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_formula(&mut rng, &["a", "b"], negative);
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn qf_formulas_round_trip_through_text(f in qf(&["a", "b", "c"])) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn block_dumps_reimport_exactly(name in any_builtin(), depth in 0usize..4) {
        let p = builtin(name).unwrap();
        let d = p.dump_tree(depth, Encoding::Block).unwrap();
        let q = parse_dump(&d).unwrap();
        for k in 0..=depth {
            let (a, b) = (p.level(k).unwrap(), q.level(k).unwrap());
            prop_assert_eq!(a.group(), b.group());
        }
        prop_assert_eq!(q.dump_tree(depth, Encoding::Block).unwrap(), d);
    }

    #[test]
    fn pairing_is_a_bijection(n in 0usize..500, m in 0usize..500) {
        prop_assert_eq!(unpair(pair(n, m)), (n, m));
    }

    #[test]
    fn constructions_replay_identically(
        halts in prop::collection::vec((0usize..4, 1usize..8, 0u64..3), 0..4),
        growth in prop::collection::vec((0usize..3, 1usize..5), 0..4),
        order in Just((0usize..7).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let mut table = MockTable::new();
        for (e, s, v) in halts {
            table = table.halt(e, s, v);
        }
        let mut sizes = [0usize; 3];
        for (n, m) in growth {
            sizes[n] += 1;
            table = table.wsize(n, m, sizes[n]);
        }
        let text = table.to_text();
        let table = match MockTable::parse(&text) {
            Ok(t) => Arc::new(t),
            // duplicate or non-monotone entries are rejected up front
            Err(_) => return Ok(()),
        };
        let builders: [fn(Arc<MockTable>) -> profinite::constructions::Construction; 3] = [
            |t| sigma1_group(t),
            |t| sigma2_group(t),
            |t| sqrt_diag_group(t),
        ];
        for build in builders {
            let first = build(table.clone());
            let log = first.run(7).unwrap();
            let second = build(table.clone());
            // levels requested out of order
            for &k in &order {
                second.presentation.level(k).unwrap();
            }
            prop_assert_eq!(second.run(7).unwrap(), log);
            for k in 0..7 {
                let (a, b) = (first.presentation.level(k).unwrap(), second.presentation.level(k).unwrap());
                prop_assert_eq!(a.group(), b.group());
            }
        }
    }
}
