//! Grid and exact closures on the fixture sets: the grid result contains the
//! rasterized exact closure and exceeds it by at most one cell.

use essclose_core::closure::{essential_closure_exact, essential_closure_grid, GridClosureParams};
use essclose_core::setmodel::rasterize_set;
use essclose_core::{fixtures, rat, Piece, PieceSet, Tag};

fn corpus() -> Vec<(&'static str, PieceSet)> {
    let mut with_point = fixtures::m2().into_pieces();
    with_point.push(Piece::point(vec![rat(1, 5), rat(4, 5)]).unwrap());
    vec![
        ("fig2", fixtures::fig2()),
        ("fig3", fixtures::fig3()),
        ("m2", fixtures::m2()),
        ("m3", fixtures::m3()),
        ("m2 + point", PieceSet::new(2, with_point).unwrap()),
        ("support of 2->1", essclose_core::support::support_exact(&fixtures::two_to_one_copula()).unwrap()),
    ]
}

#[test]
fn grid_brackets_exact_at_d1() {
    for (name, s) in corpus() {
        assert!(s.pieces().iter().all(|p| p.tag() == Tag::Full));
        let exact = essential_closure_exact(&s, 1).unwrap();
        for level in [4, 5, 6] {
            let a = rasterize_set(&s, level).unwrap();
            let g = essential_closure_grid(&a, &GridClosureParams::new(1)).unwrap();
            let r = rasterize_set(&exact, level).unwrap();
            if name == "m2 + point" && level < 6 {
                // an isolated cell projects 2^-L >= 1/32 > tau below level 6
                assert!(r.is_subset(&g));
                continue;
            }
            assert!(r.is_subset(&g), "{name} L={level}: grid closure lost cells of the exact closure");
            assert!(g.is_subset(&r.dilate(1)), "{name} L={level}: excess beyond one cell");
        }
    }
}

#[test]
fn isolated_point_survives_coarse_grids() {
    // documents the limit of the default threshold
    let s = PieceSet::new(2, vec![Piece::point(vec![rat(1, 5), rat(4, 5)]).unwrap()]).unwrap();
    let a = rasterize_set(&s, 5).unwrap();
    assert_eq!(essential_closure_grid(&a, &GridClosureParams::new(1)).unwrap(), a);
    let a = rasterize_set(&s, 6).unwrap();
    assert!(essential_closure_grid(&a, &GridClosureParams::new(1)).unwrap().is_empty());
}
