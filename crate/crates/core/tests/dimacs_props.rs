use proptest::prelude::*;

use densesat_core::{
    parse_dimacs, random_instance, write_dimacs, Clause, ClauseWidth, Formula, GenSpec, Lit,
};

fn formula_strategy() -> impl Strategy<Value = Formula> {
    (0u32..40).prop_flat_map(|n| {
        let clause = proptest::collection::vec(proptest::option::of(any::<bool>()), n as usize)
            .prop_map(|signs| {
                Clause::new(
                    signs
                        .into_iter()
                        .enumerate()
                        .filter_map(|(i, s)| s.map(|p| Lit::from_var(i as u32 + 1, p))),
                )
                .unwrap()
            });
        proptest::collection::vec(clause, 0..20).prop_map(move |c| Formula::new(n, c).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn parse_inverts_write(f in formula_strategy()) {
        let text = write_dimacs(&f);
        let parsed = parse_dimacs(text.as_bytes()).unwrap();
        prop_assert!(parsed.diagnostics.warnings.is_empty());
        prop_assert_eq!(parsed.formula, f);
    }

    #[test]
    fn write_after_parse_is_idempotent(
        n in 1u32..12,
        body in proptest::collection::vec((proptest::collection::vec(-12i32..=12, 0..6), any::<bool>()), 0..10),
    ) {
        let mut text = format!("c generated\np cnf {n} {}\n", body.len());
        for (lits, newline) in &body {
            for l in lits.iter().filter(|&&l| l != 0) {
                text.push_str(&format!("{l} "));
            }
            text.push_str(if *newline { "0\n" } else { "0 " });
        }
        if let Ok(p) = parse_dimacs(text.as_bytes()) {
            let once = write_dimacs(&p.formula);
            let twice = write_dimacs(&parse_dimacs(once.as_bytes()).unwrap().formula);
            prop_assert_eq!(once, twice);
        }
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..300)) {
        let _ = parse_dimacs(&bytes);
        let mut with_header = b"p cnf 5 3\n".to_vec();
        with_header.extend_from_slice(&bytes);
        let _ = parse_dimacs(&with_header);
    }
}

#[test]
fn generated_instances_round_trip_byte_identically() {
    for seed in 0..50u64 {
        let f = random_instance(&GenSpec {
            num_vars: 60,
            num_clauses: 30,
            width: ClauseWidth::Literals(1 + (seed % 60) as u32),
            seed,
        })
        .unwrap();
        let text = write_dimacs(&f);
        let again = write_dimacs(&parse_dimacs(text.as_bytes()).unwrap().formula);
        assert_eq!(text, again);
    }
}
