use bvlasso_core::bins::BinGrid;
use bvlasso_core::lasso::soft_threshold;
use bvlasso_core::selection::{aggregate_votes, integer_root, optimal_chernoff, threshold_select, BinVote, MisidModel};
use proptest::prelude::*;

proptest! {
    #[test]
    fn normalized_points_stay_in_half_cube(k in 1usize..6, x in prop::collection::vec(0.0f64..=1.0, 3)) {
        let grid = BinGrid::new(3, k).unwrap();
        let bin = grid.locate(&x).unwrap();
        let u = grid.normalize(&bin, &x).unwrap();
        prop_assert!(u.iter().all(|v| (-0.5 - 1e-12..=0.5 + 1e-12).contains(v)));
        let flat = grid.flat_index(&bin).unwrap();
        prop_assert_eq!(grid.from_flat(flat).unwrap(), bin);
    }

    #[test]
    fn soft_threshold_shrinks(z in -10.0f64..10.0, g in 0.0f64..5.0) {
        let s = soft_threshold(z, g);
        prop_assert!(s.abs() <= z.abs());
        prop_assert!((z - s).abs() <= g + 1e-12);
    }

    #[test]
    fn misid_probability_decreases_in_count(b0 in 1.0f64..50.0, b1 in 1e-4f64..1.0, n in 0usize..1000) {
        let m = MisidModel { b0, b1 };
        prop_assert!(m.misid_prob(n + 1, 0.5) <= m.misid_prob(n, 0.5));
        prop_assert!(m.misid_prob(n, 0.5) <= 1.0);
    }

    #[test]
    fn integer_root_brackets(x in 1u64..10_000_000, r in 1u32..8) {
        let k = integer_root(x, r);
        prop_assert!(k.pow(r) <= x);
        prop_assert!((k + 1).checked_pow(r).is_none_or(|v| v > x));
    }

    #[test]
    fn chernoff_weights_form_a_simplex(p in prop::collection::vec(0.001f64..=1.0, 1..6)) {
        let sol = optimal_chernoff(&p, 0.5).unwrap();
        prop_assert!((sol.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(sol.weights.iter().all(|w| *w >= 0.0));
        prop_assert!(sol.value > 0.0 && sol.value <= 1.0);
    }

    #[test]
    fn scores_lie_in_unit_interval(sel in prop::collection::vec(prop::collection::vec(any::<bool>(), 3), 1..10),
                                   raw in prop::collection::vec(0.01f64..1.0, 10)) {
        let grid = BinGrid::new(1, sel.len()).unwrap();
        let votes: Vec<BinVote> = sel.iter().enumerate().map(|(j, s)| BinVote {
            bin: grid.from_flat(j).unwrap(), n_j: 10, selected: s.clone(), p_j: 1.0, fit: None,
        }).collect();
        let total: f64 = raw[..sel.len()].iter().sum();
        let w: Vec<f64> = raw[..sel.len()].iter().map(|v| v / total).collect();
        let scores = aggregate_votes(&votes, &w).unwrap();
        prop_assert!(scores.iter().all(|s| (0.0..=1.0).contains(s)));
        let chosen = threshold_select(&scores, 0.5);
        prop_assert!(chosen.iter().all(|&i| scores[i] >= 0.5));
    }
}
