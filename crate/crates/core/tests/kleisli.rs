use nc_core::kleisli::{
    check_monad_laws, kleisli_compose, mutants, FinFun, FinSet, Law, MonadKind, MonadSpec, Value,
};
use proptest::prelude::*;

const ATOMS: [&str; 3] = ["a", "b", "c"];

fn set() -> FinSet {
    FinSet::new(ATOMS).unwrap()
}

/// Arrow `{a,b,c} → List{a,b,c}` as index lists.
fn list_arrow() -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(prop::collection::vec(0usize..3, 0..5), 3)
}

fn maybe_arrow() -> impl Strategy<Value = Vec<Option<usize>>> {
    prop::collection::vec(prop::option::of(0usize..3), 3)
}

fn list_fun(t: &[Vec<usize>]) -> FinFun {
    let vals = t
        .iter()
        .map(|ys| Value::list(ys.iter().map(|&y| Value::atom(ATOMS[y]))));
    FinFun::kleisli(MonadKind::List, set(), set(), ATOMS.iter().zip(vals)).unwrap()
}

fn maybe_fun(t: &[Option<usize>]) -> FinFun {
    let vals = t.iter().map(|y| match y {
        None => Value::Absent,
        Some(y) => Value::present(Value::atom(ATOMS[*y])),
    });
    FinFun::kleisli(MonadKind::Maybe, set(), set(), ATOMS.iter().zip(vals)).unwrap()
}

proptest! {
    #[test]
    fn list_composite_is_concatenation(f in list_arrow(), g in list_arrow()) {
        let expected: Vec<Vec<usize>> = f
            .iter()
            .map(|ys| ys.iter().flat_map(|&y| g[y].clone()).collect())
            .collect();
        let got = kleisli_compose(&MonadSpec::list(), &list_fun(&f), &list_fun(&g)).unwrap();
        prop_assert_eq!(got, list_fun(&expected));
    }

    #[test]
    fn maybe_composite_short_circuits(f in maybe_arrow(), g in maybe_arrow()) {
        let expected: Vec<Option<usize>> = f.iter().map(|y| y.and_then(|y| g[y])).collect();
        let got = kleisli_compose(&MonadSpec::maybe(), &maybe_fun(&f), &maybe_fun(&g)).unwrap();
        prop_assert_eq!(got, maybe_fun(&expected));
    }

    #[test]
    fn list_composition_is_associative_beyond_the_exhaustive_bound(
        f in list_arrow(), g in list_arrow(), h in list_arrow()
    ) {
        let m = MonadSpec::list();
        let (f, g, h) = (list_fun(&f), list_fun(&g), list_fun(&h));
        let left = kleisli_compose(&m, &kleisli_compose(&m, &f, &g).unwrap(), &h).unwrap();
        let right = kleisli_compose(&m, &f, &kleisli_compose(&m, &g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn units_are_neutral(f in list_arrow()) {
        let m = MonadSpec::list();
        let f = list_fun(&f);
        let eta = FinFun::unit(&m, set());
        prop_assert_eq!(&kleisli_compose(&m, &eta, &f).unwrap(), &f);
        prop_assert_eq!(&kleisli_compose(&m, &f, &eta).unwrap(), &f);
    }
}

#[test]
fn composing_across_monads_is_rejected() {
    let f = list_fun(&[vec![0], vec![], vec![1, 2]]);
    let g = maybe_fun(&[None, Some(0), Some(1)]);
    assert!(kleisli_compose(&MonadSpec::list(), &f, &g).is_err());
}

#[test]
fn mutants_break_specific_laws() {
    let carriers: Vec<FinSet> = (0..=2).map(FinSet::standard).collect();
    for m in mutants::all() {
        let r = check_monad_laws(&m, &carriers, 3);
        assert!(!r.is_empty(), "{} was not caught", m.name);
        assert!(!r.examples.is_empty(), "{}: no witness kept", m.name);
        assert!(r.to_string().contains("VIOLATED"));
    }
    // Dropping the last inner list loses elements everywhere, so even the
    // unit laws fail; reversing the outer list is invisible to them.
    let drop = MonadSpec::list().with_join("drop-last", mutants::list_join_drop_last);
    assert!(check_monad_laws(&drop, &carriers, 3).violations(Law::RightUnit) > 0);
    let rev = MonadSpec::list().with_join("reversed", mutants::list_join_reversed);
    let r = check_monad_laws(&rev, &carriers, 3);
    assert_eq!(r.violations(Law::RightUnit), 0);
    assert!(r.violations(Law::Associativity) > 0);
}

#[test]
fn lawful_report_counts_every_case() {
    let carriers: Vec<FinSet> = (0..=2).map(FinSet::standard).collect();
    let r = check_monad_laws(&MonadSpec::maybe(), &carriers, 3);
    assert!(r.is_empty(), "{r}");
    // Maybe over {a, b}: 3 lifted values; arrows 2→2 number 3² = 9, so the
    // triples over the 2-element carrier alone number 9³ at 2 points each.
    assert!(r.checked[&Law::KleisliAssociativity] >= 2 * 9u64.pow(3));
    assert!(r.to_string().ends_with("0 violations\n"));
}
