use proptest::prelude::*;
use qmeasure::density::DensityMatrix;
use qmeasure::hilbert::{
    hermiticity_defect, max_abs_diff, tensor, unitarity_defect, CompositeSpace, Observable,
    ObserverId, StateVector,
};
use qmeasure::measurement::{premeasure, premeasure_unitary, MeasurementSpec, PointerRecord};
use qmeasure::observer::{hang_up, BranchedState, EnvironmentRecord, EventId, EventSpec, Observer};
use qmeasure::{CMatrix, CVector, C64};

fn amplitudes(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n)
        .prop_map(|v| v.into_iter().map(|(re, im)| C64::new(re, im)).collect())
        .prop_filter("non-zero", |v: &Vec<C64>| {
            v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3
        })
}

fn state(dims: Vec<usize>) -> impl Strategy<Value = StateVector> {
    let space = CompositeSpace::new(
        dims.iter()
            .enumerate()
            .map(|(i, &d)| qmeasure::hilbert::Factor::new(qmeasure::hilbert::Role::System, i, d))
            .collect(),
    )
    .unwrap();
    amplitudes(space.total_dim()).prop_map(move |a| {
        StateVector::from_slice(space.clone(), &a)
            .unwrap()
            .normalized()
            .unwrap()
    })
}

fn qubit() -> impl Strategy<Value = StateVector> {
    state(vec![2])
}

fn hermitian(n: usize) -> impl Strategy<Value = CMatrix> {
    amplitudes(n * n).prop_map(move |a| {
        let g = CMatrix::from_column_slice(n, n, &a);
        (&g + g.adjoint()) * C64::new(0.5, 0.0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_norm_is_multiplicative(a in state(vec![2]), b in state(vec![3]), s in 0.1..3.0f64) {
        let scaled = a.scale(C64::new(s, 0.0));
        let t = tensor(&scaled, &b);
        prop_assert!((t.norm() - scaled.norm() * b.norm()).abs() < 1e-12);
    }

    #[test]
    fn tensor_is_associative(a in qubit(), b in state(vec![3]), c in qubit()) {
        let left = tensor(&tensor(&a, &b), &c);
        let right = tensor(&a, &tensor(&b, &c));
        let diff = (left.amplitudes() - right.amplitudes()).camax();
        prop_assert!(diff < 1e-14);
    }

    #[test]
    fn partial_trace_keeps_trace_and_hermiticity(s in state(vec![2, 3, 2]), keep in prop::sample::subsequence(vec![0usize, 1, 2], 1..=3)) {
        let rho = DensityMatrix::from_pure(&s).unwrap();
        let reduced = rho.partial_trace(&keep).unwrap();
        prop_assert!((reduced.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(reduced.trace().im.abs() < 1e-12);
        prop_assert!(hermiticity_defect(reduced.matrix()) < 1e-12);
        prop_assert!(reduced.eigenvalues().iter().all(|&v| v > -1e-9));
        let direct = DensityMatrix::reduced_from_pure(&s, &keep).unwrap();
        prop_assert!(max_abs_diff(direct.matrix(), reduced.matrix()) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_recovers_factor(a in qubit(), b in state(vec![3])) {
        let rho = DensityMatrix::from_pure(&tensor(&a, &b)).unwrap();
        let reduced = rho.partial_trace(&[1]).unwrap();
        let expected = DensityMatrix::from_pure(&b).unwrap();
        prop_assert!(max_abs_diff(reduced.matrix(), expected.matrix()) < 1e-12);
    }

    #[test]
    fn nested_partial_traces_compose(s in state(vec![2, 2, 2])) {
        let rho = DensityMatrix::from_pure(&s).unwrap();
        let once = rho.partial_trace(&[0]).unwrap();
        let twice = rho.partial_trace(&[0, 1]).unwrap().partial_trace(&[0]).unwrap();
        prop_assert!(max_abs_diff(once.matrix(), twice.matrix()) < 1e-12);
    }

    #[test]
    fn born_probabilities_sum_to_one(s in state(vec![3]), h in hermitian(3)) {
        let obs = Observable::from_hermitian(&h).unwrap();
        prop_assert!(max_abs_diff(&obs.spectral_sum(), &h) < 1e-9);
        let rho = DensityMatrix::from_pure(&s).unwrap();
        let total: f64 = obs
            .outcomes()
            .iter()
            .map(|o| rho.outcome_probability(&o.projector).unwrap())
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn premeasurement_is_linear_and_unitary(x in qubit(), y in qubit(), a in (-1.0..1.0f64, -1.0..1.0f64), b in (-1.0..1.0f64, -1.0..1.0f64), angle in -3.0..3.0f64) {
        let (a, b) = (C64::new(a.0, a.1), C64::new(b.0, b.1));
        let ready = StateVector::up_z();
        let spec = MeasurementSpec::new(0, Observable::spin_along(angle), PointerRecord::standard(1, 2)).unwrap();
        let px = premeasure(&tensor(&x, &ready), &spec).unwrap();
        let py = premeasure(&tensor(&y, &ready), &spec).unwrap();
        let combined = StateVector::combine(&[(a, &x), (b, &y)]).unwrap();
        let pc = premeasure(&tensor(&combined, &ready), &spec).unwrap();
        let expected: CVector = px.amplitudes() * a + py.amplitudes() * b;
        prop_assert!((pc.amplitudes() - expected).camax() < 1e-12);
        let u = premeasure_unitary(px.space(), &spec).unwrap();
        prop_assert!(unitarity_defect(&u) < 1e-10);
        prop_assert!((px.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn split_conserves_norm_and_matches_premeasurement(s in qubit(), angle in -3.0..3.0f64) {
        let o = ObserverId::new("o");
        let before = BranchedState::new(s.clone()).unwrap();
        let event = EventSpec::new("e", 0, Observable::spin_along(angle))
            .with_environment(EnvironmentRecord::Orthogonal)
            .witnessed_by(&o);
        let after = before.split(event).unwrap();
        prop_assert!((after.total_weight() - 1.0).abs() < 1e-9);
        let ready = qmeasure::hilbert::tensor_all(&[&StateVector::up_z(), &StateVector::up_z(), &StateVector::up_z()]);
        let extended = tensor(&s, &ready).with_space(after.space().clone()).unwrap();
        let expected = premeasure(&extended, after.events()[0].spec()).unwrap();
        prop_assert!(after.global_vector().max_deviation(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn hang_up_never_changes_the_state(s in qubit(), seed in any::<u64>()) {
        let o = ObserverId::new("o");
        let state = BranchedState::new(s).unwrap()
            .split(EventSpec::new("z", 0, Observable::spin_z()).witnessed_by(&o)).unwrap()
            .split(EventSpec::new("x", 0, Observable::spin_x()).witnessed_by(&o)).unwrap();
        let snapshot = state.to_canonical_string();
        let mut obs = Observer::new("o", seed);
        hang_up(&mut obs, &state, &EventId::new("z")).unwrap();
        hang_up(&mut obs, &state, &EventId::new("x")).unwrap();
        prop_assert_eq!(snapshot, state.to_canonical_string());
        let path = obs.awareness_path();
        prop_assert_eq!(path.len(), 2);
        prop_assert_eq!(&path[0].0, &EventId::new("z"));
        prop_assert!(state.branches().iter().any(|b| b.path() == path.as_slice()));
    }
}
