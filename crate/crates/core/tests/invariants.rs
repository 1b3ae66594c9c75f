use hecke_cells::acceptance::Group;
use hecke_cells::{h_constants, Budget, ElemId};
use proptest::prelude::*;
use std::sync::OnceLock;

const TYPES: [&str; 8] = ["A2", "A3", "B3", "D4", "H3", "I2(5)", "I2(8)", "B4"];

fn groups() -> &'static Vec<Group> {
    static G: OnceLock<Vec<Group>> = OnceLock::new();
    G.get_or_init(|| TYPES.iter().map(|t| Group::parse(t, &Budget::default()).unwrap()).collect())
}

fn pick(t: usize) -> &'static Group {
    &groups()[t % TYPES.len()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn structure_constants_are_bar_invariant_and_positive(t in 0usize..8, x in any::<u32>(), y in any::<u32>()) {
        let g = pick(t);
        let n = g.sys.len() as u32;
        let (x, y) = ((x % n) as ElemId, (y % n) as ElemId);
        for (_, h) in h_constants(&g.sys, &g.wg, x, y).unwrap() {
            prop_assert_eq!(h.bar(), h.clone());
            prop_assert!(h.terms().iter().all(|(_, c)| *c >= 0));
        }
    }

    #[test]
    fn inversion_symmetry(t in 0usize..8, x in any::<u32>(), y in any::<u32>()) {
        let g = pick(t);
        let n = g.sys.len() as u32;
        let (x, y) = ((x % n) as ElemId, (y % n) as ElemId);
        let mut lhs = h_constants(&g.sys, &g.wg, x, y).unwrap();
        let mut rhs: Vec<_> = h_constants(&g.sys, &g.wg, g.sys.inverse(y), g.sys.inverse(x))
            .unwrap()
            .into_iter()
            .map(|(z, h)| (g.sys.inverse(z), h))
            .collect();
        lhs.sort_by_key(|p| p.0);
        rhs.sort_by_key(|p| p.0);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn a_value_bounds_degree(t in 0usize..8, x in any::<u32>(), y in any::<u32>()) {
        let g = pick(t);
        let n = g.sys.len() as u32;
        let (x, y) = ((x % n) as ElemId, (y % n) as ElemId);
        for (z, h) in h_constants(&g.sys, &g.wg, x, y).unwrap() {
            let a = g.cells.a_value(z) as i32;
            prop_assert!(h.max_deg().unwrap_or(0) <= a);
        }
    }
}

#[test]
fn cells_partition_the_group_and_pair_by_w0() {
    for (t, g) in TYPES.iter().zip(groups()) {
        let total: usize = g.cells.sizes().iter().sum();
        assert_eq!(total, g.sys.len(), "{t}");
        for c in g.cells.two_sided() {
            let partner = &g.cells.two_sided()[c.partner];
            assert_eq!(c.len(), partner.len(), "{t}");
            let w0 = g.sys.longest();
            assert!(c.elements.iter().all(|&w| g.cells.two_sided_of(g.sys.product(w, w0)) == c.partner));
            assert!(c.elements.iter().all(|&w| g.cells.two_sided_of(g.sys.inverse(w)) == c.index));
        }
        assert_eq!(g.cells.a_value(g.sys.identity()), 0);
        assert_eq!(g.cells.a_value(g.sys.longest()), g.sys.max_length());
    }
}
