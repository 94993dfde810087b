use std::collections::BTreeSet;

use nuset::equivalence::{random_indexed, random_presheaf, round_trip_fibred, RandomSpec};
use nuset::indexed::{emit_indexed, parse_frame, parse_indexed, parse_painting, Frame};
use nuset::parametricity::{iterate_types, normalize, parse_type, print_type, translate, TermExpr, TypeExpr};
use nuset::presheaf::{emit_nuset, parse_nuset};
use nuset::word::{compose, factor_leftmost, hom_count, hom_enumerate, identity, Arity, Letter, Word};
use proptest::prelude::*;

/// Pascal's triangle, independent of the library's counting.
fn binomial(n: usize, k: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![1u128; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

fn letters(nu: usize, len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(prop::option::weighted(0.4, 0..nu as u8), len)
        .prop_map(|v| v.into_iter().map(|l| l.map_or(Letter::Star, Letter::Dir)).collect())
}

fn word(nu: usize, len: usize) -> impl Strategy<Value = Word> {
    letters(nu, len).prop_map(move |ls| Word::new(Arity::new(nu).unwrap(), ls).unwrap())
}

/// Three composable words `h: Hom(.., f.stars)`, `f`, `g` with `g ∘ f ∘ h`
/// defined.
fn triple() -> impl Strategy<Value = (Word, Word, Word)> {
    (1usize..=4, 0usize..=7).prop_flat_map(|(nu, n)| {
        word(nu, n).prop_flat_map(move |g| {
            let g2 = g.clone();
            word(nu, g.stars()).prop_flat_map(move |f| {
                let (g3, f2) = (g2.clone(), f.clone());
                word(nu, f.stars()).prop_map(move |h| (g3.clone(), f2.clone(), h))
            })
        })
    })
}

proptest! {
    #[test]
    fn composition_is_associative((g, f, h) in triple()) {
        let left = compose(&compose(&g, &f).unwrap(), &h).unwrap();
        let right = compose(&g, &compose(&f, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identities_are_neutral((g, _f, _h) in triple()) {
        let nu = g.arity();
        prop_assert_eq!(compose(&identity(nu, g.len()), &g).unwrap(), g.clone());
        prop_assert_eq!(compose(&g, &identity(nu, g.stars())).unwrap(), g);
    }

    #[test]
    fn composite_counts_stars((g, f, _h) in triple()) {
        let gf = compose(&g, &f).unwrap();
        prop_assert_eq!(gf.len(), g.len());
        prop_assert_eq!(gf.stars(), f.stars());
    }

    #[test]
    fn leftmost_factorization_recomposes((g, _f, _h) in triple()) {
        prop_assume!(!g.is_identity());
        let (a, b) = factor_leftmost(&g).unwrap();
        prop_assert_eq!(a.len() - a.stars(), 1);
        prop_assert_eq!(compose(&a, &b).unwrap(), g);
    }

    #[test]
    fn hom_sizes_match_the_formula(nu in 1usize..=4, n in 0usize..=6, p in 0usize..=6) {
        let nu = Arity::new(nu).unwrap();
        let words = hom_enumerate(nu, p, n);
        prop_assert_eq!(words.len() as u128, hom_count(nu, p, n));
        let expected = if p <= n { binomial(n, p) * (nu.get() as u128).pow((n - p) as u32) } else { 0 };
        prop_assert_eq!(hom_count(nu, p, n), expected);
        prop_assert_eq!(words.iter().collect::<BTreeSet<_>>().len(), words.len());
    }
}

// Random sets grow quickly with the arity; keep them small and few.
proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn action_is_contravariant(seed in 0u64..500, nu in 1usize..=2) {
        let nu = Arity::new(nu).unwrap();
        let p = random_presheaf(nu, 2, &RandomSpec::default(), seed);
        for g in hom_enumerate(nu, 1, 2) {
            for f in hom_enumerate(nu, 0, 1) {
                let gf = compose(&g, &f).unwrap();
                for x in 0..p.carrier(2).size {
                    prop_assert_eq!(p.act(&gf, x), p.act(&f, p.act(&g, x)));
                }
            }
        }
    }

    #[test]
    fn presheaf_files_round_trip(seed in 0u64..500, nu in 1usize..=3) {
        let nu = Arity::new(nu).unwrap();
        let p = random_presheaf(nu, 2, &RandomSpec::single_point(), seed);
        let text = emit_nuset(&p);
        let back = parse_nuset(&text).unwrap();
        prop_assert_eq!(emit_nuset(&back), text);
        prop_assert_eq!(back, p);
    }

    #[test]
    fn indexed_files_round_trip(seed in 0u64..500, nu in 1usize..=3) {
        let s = random_indexed(Arity::new(nu).unwrap(), 2, &RandomSpec::single_point(), seed);
        let text = emit_indexed(&s);
        prop_assert_eq!(parse_indexed(&text).unwrap(), s);
    }

    #[test]
    fn keys_are_injective(seed in 0u64..200) {
        let s = random_indexed(Arity::CUBICAL, 1, &RandomSpec::default(), seed);
        let frames: Vec<Frame> = s.enumerate_frames(2, 2).unwrap();
        let keys: BTreeSet<String> = frames.iter().map(Frame::key).collect();
        prop_assert_eq!(keys.len(), frames.len());
        for d in &frames {
            prop_assert_eq!(&parse_frame(&d.key()).unwrap(), d);
        }
        for d in s.enumerate_frames(1, 0).unwrap().into_iter().chain(s.enumerate_frames(1, 1).unwrap()) {
            let paintings = s.enumerate_paintings(1, d.len(), &d).unwrap();
            let texts: BTreeSet<String> = paintings.iter().map(|c| c.to_string()).collect();
            prop_assert_eq!(texts.len(), paintings.len());
            for c in &paintings {
                prop_assert_eq!(&parse_painting(&c.to_string()).unwrap(), c);
            }
        }
    }

    #[test]
    fn fibred_round_trip_is_identity(seed in 0u64..200, nu in 1usize..=2) {
        let p = random_presheaf(Arity::new(nu).unwrap(), 2, &RandomSpec::default(), seed);
        let report = round_trip_fibred(&p);
        prop_assert!(report.ok, "{:?}", report.failure);
    }
}

fn small_type() -> impl Strategy<Value = TypeExpr> {
    let leaf = prop_oneof![Just(TypeExpr::Univ), Just(TypeExpr::el("A")), Just(TypeExpr::el("B"))];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| TypeExpr::arrow(a, b)),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(TypeExpr::Prod),
            inner.clone().prop_map(|b| TypeExpr::pi("Y", TypeExpr::Univ, TypeExpr::arrow(TypeExpr::el("Y"), b))),
            inner.prop_map(|b| TypeExpr::pi(
                "y",
                TypeExpr::el("A"),
                TypeExpr::Prod(vec![TypeExpr::FamApp(TermExpr::var("B"), vec![TermExpr::var("y")]), b,])
            )),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn normalize_is_idempotent(t in small_type(), nu in 1usize..=3, steps in 0usize..=3) {
        let nu = Arity::new(nu).unwrap();
        let once = normalize(&translate(&t, nu).unwrap());
        prop_assert_eq!(normalize(&once), once);
        let it = iterate_types(nu, steps);
        prop_assert_eq!(normalize(&it), it);
    }

    #[test]
    fn printed_types_parse_back(t in small_type(), nu in 1usize..=2) {
        prop_assert_eq!(parse_type(&print_type(&t)).unwrap(), t.clone());
        let tr = normalize(&translate(&t, Arity::new(nu).unwrap()).unwrap());
        prop_assert_eq!(parse_type(&print_type(&tr)).unwrap(), tr);
    }

    #[test]
    fn translation_adds_only_relations(t in small_type(), nu in 1usize..=3) {
        let tr = translate(&t, Arity::new(nu).unwrap()).unwrap();
        let allowed: BTreeSet<String> = t.free_vars().into_iter().flat_map(|x| [format!("{x}_star"), x]).collect();
        prop_assert!(tr.free_vars().is_subset(&allowed), "{:?}", tr.free_vars());
    }
}
