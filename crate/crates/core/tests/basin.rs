use eemit_core::basin::ClassifierSettings;
use eemit_core::{
    basin_grid, classify_attractor, BasinPlan, Label, Serial, State, SystemKind, SystemSpec,
};

fn multistable() -> SystemSpec {
    let mut s = SystemSpec::zero(SystemKind::LM);
    s.alpha = 0.0135;
    s.beta = 0.8111;
    s.gamma = -2.65;
    s.f1 = 2.0;
    s.omega1 = 0.758;
    s
}

/// Cells whose eight neighbours all carry the same label sit away from basin
/// boundaries; the point halfway to the next diagonal node (a node of the grid at
/// twice the resolution) must agree with them.
#[test]
fn interior_labels_survive_refinement() {
    let mut plan = BasinPlan::new(multistable());
    plan.nx = 10;
    plan.ny = 10;
    let grid = basin_grid(&plan, &Serial).unwrap();
    let mut interior = Vec::new();
    for j in 1..plan.ny - 1 {
        for i in 1..plan.nx - 1 {
            let label = grid.at(i, j).label;
            let uniform =
                (j - 1..=j + 1).all(|jj| (i - 1..=i + 1).all(|ii| grid.at(ii, jj).label == label));
            if uniform && label != Label::Divergent {
                interior.push((i, j, label));
            }
        }
    }
    assert!(
        interior.len() >= 10,
        "only {} interior cells",
        interior.len()
    );
    let stride = interior.len() / 10;
    let settings = ClassifierSettings::default();
    for &(i, j, label) in interior.iter().step_by(stride).take(10) {
        let mid = State::new(
            (plan.x(i) + plan.x(i + 1)) / 2.0,
            (plan.y(j) + plan.y(j + 1)) / 2.0,
        );
        let refined = classify_attractor(&plan.spec, mid, &settings).label;
        assert_eq!(refined, label, "cell ({i}, {j}) refined at {mid:?}");
    }
}
