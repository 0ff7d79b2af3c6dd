use bloch_core::mapping::bound;
use bloch_core::optimize::*;
use bloch_core::*;

#[test]
fn optimum_is_near_r_optimal() {
    let rep = minimize_bound(3.9, 4.2, 1e-7).unwrap();
    assert!((rep.r_star - R_OPTIMAL).abs() <= 1e-3, "{}", rep.r_star);
    assert!((rep.bound_star - 0.656_393_61).abs() <= 1e-7);
    assert!(rep.bracket.0 <= rep.r_star && rep.r_star <= rep.bracket.1);
    assert_eq!(rep.evaluations, rep.history.len());
    for s in &rep.history {
        assert!(rep.bound_star <= s.bound);
    }
    assert!(bound(3.9).unwrap().bound > rep.bound_star);
    assert!(bound(4.2).unwrap().bound > rep.bound_star);
}

#[test]
fn improves_on_earlier_bounds() {
    let rep = minimize_bound(DEFAULT_WINDOW.0, DEFAULT_WINDOW.1, 1e-7).unwrap();
    assert!(rep.bound_star < UPPER_BOUND_IMPROVED);
    assert!(rep.bound_star < UPPER_BOUND_BELLER_HUMMEL);
    assert!(rep.bound_star < UPPER_BOUND_GOODMAN);
    assert!(rep.bound_star > LOWER_BOUND_XIONG);
}

#[test]
fn tighter_tolerance_is_stable() {
    let a = minimize_bound(3.9, 4.2, 1e-7).unwrap();
    let b = minimize_bound(3.9, 4.2, 1e-9).unwrap();
    assert!((a.bound_star - b.bound_star).abs() < 1e-9);
}

#[test]
fn full_window_prescan_finds_interior_minimum() {
    let rep = minimize_bound(3.0001, 4.5, 1e-6).unwrap();
    assert!((rep.r_star - R_OPTIMAL).abs() <= 1e-3);
    let pre: Vec<f64> = rep.history[..PRESCAN_SAMPLES].iter().map(|s| s.r).collect();
    assert_eq!(pre, prescan_points(3.0001, 4.5));
}

#[test]
fn delegated_prescan_gives_the_same_report() {
    let a = minimize_bound(3.9, 4.2, 1e-7).unwrap();
    let b = minimize_bound_with(3.9, 4.2, 1e-7, |rs| {
        rs.iter().rev().map(|&r| bound(r)).collect::<Result<Vec<_>>>().map(|mut v| {
            v.reverse();
            v
        })
    })
    .unwrap();
    assert_eq!(a, b);
}
