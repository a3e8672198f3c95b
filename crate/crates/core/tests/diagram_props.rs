mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tate::diagram::{hom_ind, realize_colim, realize_lim, Diagram, DiagramJson, FinitePoset};
use tate::exact::{is_monic, split, ShortExactSequence};
use tate::kernel::Field;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn colimit_is_the_union(seed: u64, n in 1usize..7, ambient in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_subspace_diagram(&mut rng, n, ambient);
        let c = realize_colim(&d.diagram).unwrap();
        prop_assert_eq!(c.object.dim, d.colimit_dim());
        prop_assert!(c.cocone.iter().all(is_monic));
        prop_assert!(d.diagram.check_admissible().admissible);
    }

    #[test]
    fn json_round_trip(seed: u64, n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_subspace_diagram(&mut rng, n, 3).diagram;
        let text = serde_json::to_string(&d.to_json()).unwrap();
        let back: DiagramJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.decode(d.field()).unwrap(), d.clone());
        let dual = d.dual();
        let text = serde_json::to_string(&dual.to_json()).unwrap();
        prop_assert_eq!(serde_json::from_str::<DiagramJson>(&text).unwrap().decode(d.field()).unwrap(), dual);
    }

    #[test]
    fn restriction_to_a_final_subposet(seed: u64, n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_subspace_diagram(&mut rng, n, 3);
        let top = n - 1;
        let mut keep: Vec<usize> = (0..top).filter(|_| rng.gen_bool(0.5)).collect();
        keep.push(top);
        let poset = d.diagram.poset();
        prop_assert!(poset.restrict(&keep).is_final_map(poset, &keep));
        let r = d.diagram.restrict(&keep).unwrap();
        prop_assert_eq!(realize_colim(&r).unwrap().object.dim, d.colimit_dim());
    }

    #[test]
    fn duality_exchanges_limits_and_colimits(seed: u64, n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_subspace_diagram(&mut rng, n, 4).diagram;
        let dual = d.dual();
        prop_assert_eq!(dual.dual(), d.clone());
        prop_assert_eq!(realize_lim(&dual).unwrap().object.dim, realize_colim(&d).unwrap().object.dim);
        prop_assert!(realize_lim(&d).is_err() && realize_colim(&dual).is_err());
    }

    #[test]
    fn chains_split_stepwise(dims in prop::collection::vec(0usize..4, 1..6), q in prop::sample::select(vec![2u64, 3])) {
        let f = Field::gf(q).unwrap();
        let mut dims = dims;
        dims.sort_unstable();
        let d = Diagram::coordinate_chain(&f, &dims);
        let c = realize_colim(&d).unwrap();
        prop_assert_eq!(c.object.dim, *dims.last().unwrap());
        let t = d.transitions().unwrap();
        for i in 1..dims.len() {
            let inc = t.get(i - 1, i).clone();
            let (_, p) = tate::exact::cokernel(&inc);
            let s = ShortExactSequence { i: inc, p };
            prop_assert!(split(&s).unwrap().verify(&s));
        }
        let h = hom_ind(&d, &d).unwrap();
        prop_assert_eq!(h.dim(), c.object.dim * c.object.dim);
    }
}

#[test]
fn posets_must_be_antisymmetric() {
    assert!(FinitePoset::new(vec!["a".into(), "b".into()], &[(0, 1), (1, 0)]).is_err());
    let p = FinitePoset::chain(4);
    assert!(p.is_directed());
    assert_eq!(p.maximum(), Some(3));
}
