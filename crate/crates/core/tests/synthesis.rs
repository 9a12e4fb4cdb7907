use mmfilt::error::Error;
use mmfilt::mbvd::series_resonance;
use mmfilt::network::{build_ladder_response, ElementKind};
use mmfilt::synthesis::{evaluate, synthesis_grid, synthesize_ladder, DesignSpec, UNMEASURABLE};

fn reference_spec() -> DesignSpec {
    DesignSpec {
        fc_target: 23.5e9,
        fbw_target: 0.16,
        z0: 50.0,
        oob_min_db: 12.0,
        k2: 0.46,
        q: 50.0,
        rs: 0.0,
        ls: 0.0,
        il_max_db: 2.0,
    }
}

#[test]
fn reference_spec_is_met() {
    let spec = reference_spec();
    let r = synthesize_ladder(&spec).unwrap();
    assert!(r.feasible, "{r:?}");
    let m = r.metrics.unwrap();
    assert!((m.il_db - 1.47).abs() <= 0.5, "IL {}", m.il_db);
    assert!((m.fc / spec.fc_target - 1.0).abs() <= 0.005);
    assert!((m.fbw3 - 0.16).abs() <= 0.015);
    assert!(m.oob_rejection_db >= 12.0);
    // series resonators sit above the shunt ones in a band-pass ladder
    assert!(r.tuning.fs_series > r.tuning.fs_shunt);
}

#[test]
fn result_reevaluates_bit_exactly() {
    let spec = DesignSpec {
        fc_target: 10e9,
        ..reference_spec()
    };
    let r = synthesize_ladder(&spec).unwrap();
    assert!(r.feasible);
    let again = evaluate(&r.design, &synthesis_grid(spec.fc_target).unwrap()).unwrap();
    assert_eq!(Some(again), r.metrics);
    assert_eq!(spec.objective(&again), r.objective);
}

#[test]
fn synthesis_is_deterministic() {
    let spec = reference_spec();
    assert_eq!(
        synthesize_ladder(&spec).unwrap(),
        synthesize_ladder(&spec).unwrap()
    );
}

#[test]
fn weak_coupling_is_reported_infeasible() {
    let spec = DesignSpec {
        k2: 0.001,
        ..reference_spec()
    };
    assert!(!spec.bandwidth_plausible());
    let r = synthesize_ladder(&spec).unwrap();
    assert!(!r.feasible);
    if r.metrics.is_none() {
        assert_eq!(r.objective, UNMEASURABLE);
    }
}

#[test]
fn excessive_coupling_is_an_error() {
    let spec = DesignSpec {
        k2: 1.5,
        ..reference_spec()
    };
    assert!(matches!(
        synthesize_ladder(&spec),
        Err(Error::InfeasibleCoupling { .. })
    ));
}

#[test]
fn design_uses_one_shunt_record_on_both_sides() {
    let r = synthesize_ladder(&reference_spec()).unwrap();
    let els = r.design.elements();
    assert_eq!(els.len(), 3);
    assert_eq!(els[0].kind, ElementKind::Shunt);
    assert_eq!(els[1].kind, ElementKind::Series);
    assert_eq!(
        r.design.resonator_of(&els[0]),
        r.design.resonator_of(&els[2])
    );
    let fs = series_resonance(r.design.resonator_of(&els[1])).unwrap();
    assert!((fs - r.tuning.fs_series).abs() <= 1e-9 * fs);
    let s = build_ladder_response(&r.design, &synthesis_grid(23.5e9).unwrap()).unwrap();
    assert_eq!(s.len(), 1601);
}
