use proptest::prelude::*;

use cayley_spectra::characters::{character_table, check_orthogonality};
use cayley_spectra::galois::{check_lemma1, is_power_closed};
use cayley_spectra::group::{conjugacy_classes, Group, GroupSpec};
use cayley_spectra::oracle::{adjacency_matrix, compare_spectra, floating_eigenvalues};
use cayley_spectra::spectra::{all_eigenvalues_integral, eigenvalues_via_characters, ConnectionSet};

fn cycle_string(images: &[usize]) -> String {
    // one-line notation to cycle notation on points 1..=n
    let n = images.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || images[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push((x + 1).to_string());
            x = images[x];
        }
        out.push_str(&format!("({})", cycle.join(" ")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn generators() -> impl Strategy<Value = Vec<String>> {
    (2usize..=5).prop_flat_map(|n| {
        prop::collection::vec(permutation(n), 1..=2).prop_map(|ps| ps.iter().map(|p| cycle_string(p)).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn spectra_of_random_permutation_groups(gens in generators(), mask in any::<u64>()) {
        let spec = GroupSpec::Permutations(gens);
        let g = Group::build(&spec).unwrap();
        prop_assert!(g.check_axioms());
        let cd = conjugacy_classes(&g);
        let ct = character_table(&g, &cd).unwrap();
        prop_assert!(check_orthogonality(&ct, &cd).is_ok());

        let k = cd.num_classes();
        let subset: Vec<usize> = (1..k).filter(|j| mask >> (j % 64) & 1 == 1).collect();
        let c = ConnectionSet::from_classes(&cd, &subset).unwrap();
        let sp = eigenvalues_via_characters(&c, &ct, &cd);
        prop_assert_eq!(sp.total_multiplicity(), g.order() as u64);
        prop_assert_eq!(all_eigenvalues_integral(&sp).unwrap(), is_power_closed(c.elements(), &g));
        prop_assert!(check_lemma1(&g, &cd, &subset).agree);

        let a = adjacency_matrix(&g, c.elements()).unwrap();
        let report = compare_spectra(&sp, &floating_eigenvalues(&a).unwrap(), 1e-8).unwrap();
        prop_assert!(report.pass, "{:?}", report);
    }
}
