mod common;

use std::collections::HashSet;

use imago_core::algebra::BigRatio;
use imago_core::group::{GroupSpec, IndexedGroup};
use imago_core::image::{self, image_ids, Strategy as Enumeration};
use imago_core::planner::{approximate, approximate_traced, is_consistent};
use imago_core::ring::{poly_image_ratio, NCPoly, RingSpec};
use imago_core::word::{evaluate, parse_word, Syllable, Word};
use imago_core::Limits;
use num_bigint::BigInt;
use proptest::prelude::*;

fn syllables(max_gen: u32, max_len: usize) -> impl Strategy<Value = Vec<(u32, i64)>> {
    prop::collection::vec((1..=max_gen, (-4i64..=4).prop_filter("nonzero", |e| *e != 0)), 0..max_len)
}

fn word(max_gen: u32, max_len: usize) -> impl Strategy<Value = Word> {
    syllables(max_gen, max_len)
        .prop_map(|s| Word::from_syllables(s.into_iter().map(|(g, e)| Syllable::new(g, e))))
}

fn small_group() -> impl Strategy<Value = GroupSpec> {
    prop::sample::select(common::small_groups())
}

fn small_ring() -> impl Strategy<Value = RingSpec> {
    let mut pool: Vec<RingSpec> = (2..=9).map(|n| RingSpec::zmod(n).unwrap()).collect();
    pool.push(RingSpec::mat2(2).unwrap());
    prop::sample::select(pool)
}

fn poly() -> impl Strategy<Value = NCPoly> {
    let term = (-3i64..=3, prop::collection::vec((1u32..=2, 1u32..=3), 1..3));
    prop::collection::vec(term, 1..4).prop_filter_map("constant polynomial", |terms| {
        NCPoly::from_terms(terms.into_iter().map(|(c, m)| (BigInt::from(c), m)))
    })
}

fn target() -> impl Strategy<Value = BigRatio> {
    (2u64..1_000_000).prop_flat_map(|den| (1..den, Just(den))).prop_map(|(n, d)| BigRatio::new(n, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn display_parse_round_trip(w in word(6, 12)) {
        let text = w.to_string();
        let back = parse_word(&text).unwrap();
        prop_assert_eq!(&back, &w);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn inverse_cancels(w in word(4, 10)) {
        prop_assert!(w.concat(&w.inverse()).is_identity());
        prop_assert!(w.inverse().concat(&w).is_identity());
    }

    #[test]
    fn abelianization_is_additive(u in word(3, 8), v in word(3, 8)) {
        let sum = u.concat(&v).abelianize();
        let (a, b) = (u.abelianize(), v.abelianize());
        for i in 0..sum.len().max(a.len()).max(b.len()) {
            let get = |x: &Vec<BigInt>| x.get(i).cloned().unwrap_or_default();
            prop_assert_eq!(get(&sum), get(&a) + get(&b));
        }
        prop_assert!(Word::commutator(&u, &v).in_commutator_subgroup());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn images_are_normal_and_contain_identity(spec in small_group(), w in word(2, 5)) {
        let limits = Limits::sequential();
        let g = IndexedGroup::new(&spec, &limits).unwrap();
        let pruned = image_ids(&w, &g, Enumeration::Pruned, &limits).unwrap();
        let naive = image_ids(&w, &g, Enumeration::Naive, &limits).unwrap();
        prop_assert_eq!(&pruned, &naive);
        let members: HashSet<u32> = pruned.iter().copied().collect();
        prop_assert!(members.contains(&g.identity()));
        for &x in &pruned {
            for h in g.ids() {
                prop_assert!(members.contains(&g.conjugate(x, h)));
            }
        }
    }

    #[test]
    fn parallel_matches_sequential(spec in small_group(), w in word(2, 5)) {
        let seq = image::ratio(&w, &spec, Enumeration::Pruned, &Limits::sequential()).unwrap();
        let par = image::ratio(&w, &spec, Enumeration::Pruned, &Limits { workers: 4, ..Limits::default() }).unwrap();
        prop_assert_eq!(seq, par);
    }

    #[test]
    fn evaluation_commutes_with_conjugation(
        spec in small_group(),
        w in word(3, 6),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 4),
    ) {
        let g = IndexedGroup::new(&spec, &Limits::default()).unwrap();
        let group = g.group();
        let elem = |i: &prop::sample::Index| g.element(i.index(g.order()) as u32);
        let args: Vec<_> = picks[..3].iter().map(elem).collect();
        let h = elem(&picks[3]);
        let conj: Vec<_> = args.iter().map(|a| group.conjugate(a, &h).unwrap()).collect();
        let lhs = evaluate(&w, &conj, group).unwrap();
        let rhs = group.conjugate(&evaluate(&w, &args, group).unwrap(), &h).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn group_ratio_is_multiplicative(h in small_group(), k in small_group(), w in word(2, 4)) {
        let limits = Limits::default();
        let rh = image::ratio(&w, &h, Enumeration::Pruned, &limits).unwrap().ratio;
        let rk = image::ratio(&w, &k, Enumeration::Pruned, &limits).unwrap().ratio;
        let both = image::ratio(&w, &GroupSpec::product([h, k]), Enumeration::Pruned, &limits).unwrap().ratio;
        prop_assert_eq!(both, rh * rk);
    }

    #[test]
    fn ring_ratio_is_multiplicative(r in small_ring(), s in small_ring(), p in poly()) {
        let limits = Limits::default();
        let a = poly_image_ratio(&p, &r, &limits).unwrap().ratio;
        let b = poly_image_ratio(&p, &s, &limits).unwrap().ratio;
        let both = poly_image_ratio(&p, &RingSpec::product([r, s]), &limits).unwrap().ratio;
        prop_assert_eq!(both, a * b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn plans_meet_their_bound(c in target()) {
        let eps: BigRatio = "1/10000".parse().unwrap();
        let (plan, trace) = approximate_traced(&c, &eps).unwrap();
        prop_assert!(plan.error <= eps);
        prop_assert!(plan.achieved >= c);
        prop_assert!(plan.field_sizes.len() <= 64);
        prop_assert!(is_consistent(&plan));
        let half: BigRatio = "1/2".parse().unwrap();
        for r in &trace.residuals {
            prop_assert!(*r >= half && *r < BigRatio::one());
        }
        for pair in trace.partials.windows(2) {
            prop_assert!(pair[1] < pair[0]);
        }
        for p in &trace.partials {
            prop_assert!(*p >= c);
        }
    }

    #[test]
    fn tighter_epsilon_never_hurts(c in target()) {
        let coarse = approximate(&c, &"1/100".parse().unwrap()).unwrap();
        let fine = approximate(&c, &"1/1000000".parse().unwrap()).unwrap();
        prop_assert!(fine.error <= coarse.error);
        prop_assert!(fine.field_sizes.starts_with(&coarse.field_sizes));
    }
}
