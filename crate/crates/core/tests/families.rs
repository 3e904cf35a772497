use torsion_lab::exactnum::{Field, QuadField, QuadScalar, Rational};
use torsion_lab::families::{
    builtin_family, registry_load, sample_specializations, Admission, FamilySpec, BUNDLED_REGISTRY,
};
use torsion_lab::torsion::condition_p;

fn admitted() -> Vec<FamilySpec> {
    let mut specs: Vec<FamilySpec> = [(1, 2), (2, 2), (1, 3), (3, 3)]
        .into_iter()
        .map(|(m, n)| builtin_family(m, n).unwrap())
        .collect();
    for a in registry_load(BUNDLED_REGISTRY, 10, 5).unwrap() {
        match a {
            Admission::Admitted { spec, .. } => specs.push(spec),
            Admission::Rejected { label, reason, report } => panic!("{label}: {reason} {report:?}"),
        }
    }
    specs
}

fn condition_holds<F: Field>(spec: &FamilySpec, ctx: &F::Ctx, seed: u64) {
    for s in sample_specializations::<F>(spec, ctx, 100, seed).unwrap() {
        assert!(
            condition_p(&s.curve, spec.m, spec.n).unwrap(),
            "{} at r = {}, u = {}",
            spec.label,
            s.r,
            s.u
        );
    }
}

#[test]
fn bundled_registry_is_admitted() {
    assert_eq!(admitted().len(), 15);
}

#[test]
fn admitted_families_satisfy_condition_p() {
    for (k, spec) in admitted().iter().enumerate() {
        let seed = 900 + k as u64;
        match spec.required.quad_d() {
            None => condition_holds::<Rational>(spec, &(), seed),
            Some(d) => condition_holds::<QuadScalar>(spec, &QuadField::new(d).unwrap(), seed),
        }
    }
}
