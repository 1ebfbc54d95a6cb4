use quadpic::fieldmodel::Violation;
use quadpic::{Error, ExtensionId, ExtensionLattice, PicContext, QuadraticForm};

const TWIN: &str = include_str!("data/twin.json");

fn context() -> PicContext {
    PicContext::new(ExtensionLattice::from_json(TWIN).unwrap()).unwrap()
}

fn f(ctx: &PicContext, id: &str) -> QuadraticForm {
    ctx.lattice().declared_form(id).unwrap().clone()
}

#[test]
fn twin_model_validates() {
    let ctx = context();
    let report = ctx.lattice().validate();
    assert!(report.is_valid(), "{:?}", report.violations);
    assert!(!ctx.lattice().is_real());
}

#[test]
fn twin_conics_are_motivically_equivalent() {
    let ctx = context();
    let (a, b, c) = (f(&ctx, "a"), f(&ctx, "b"), f(&ctx, "c"));
    assert!(ctx.motivically_equivalent(&a.quadric(), &b.quadric()).unwrap());
    assert!(!ctx.motivically_equivalent(&a.quadric(), &c.quadric()).unwrap());
}

#[test]
fn declared_relations() {
    let ctx = context();
    let (a, b) = (f(&ctx, "a").quadric(), f(&ctx, "b").quadric());
    let v = ctx.relations_check(std::slice::from_ref(&a), std::slice::from_ref(&b)).unwrap();
    assert!(v.t_equivalent);
    assert!(v.fingerprint_equal_mod_tate);
    let v = ctx.relations_check(&[a.clone(), a], &[b]).unwrap();
    assert!(!v.t_equivalent);
}

#[test]
fn declared_generators_need_a_prime() {
    let ctx = context();
    let a = f(&ctx, "a");
    let ea = ctx.generator_e(&a).unwrap();
    let eb = ctx.generator_e(&f(&ctx, "b")).unwrap();
    let fa = ctx.fingerprint(&ea).unwrap();
    assert_eq!(fa, ctx.fingerprint_tower(&ea).unwrap());
    // The primes differ over kc, so do the generators.
    assert_ne!(fa, ctx.fingerprint(&eb).unwrap());
    let eq = ctx.equal(&ea, &eb).unwrap();
    assert!(!eq.equal);
    assert!(ctx.generator_e(&f(&ctx, "c")).is_err());
}

#[test]
fn declared_flag_must_follow_primes() {
    let ctx = context();
    let ap = f(&ctx, "ap");
    let bad = [ap.clone(), f(&ctx, "b")];
    assert!(matches!(ctx.det(&ap.quadric(), Some(&bad)), Err(Error::InvalidFlag(_))));
}

#[test]
fn missing_entry_is_reported() {
    let mut doc = ExtensionLattice::from_json(TWIN).unwrap().document().unwrap().clone();
    doc.witt.retain(|w| !(w.form == "c" && w.extension == "ka"));
    match ExtensionLattice::from_document(doc) {
        Ok(l) => {
            let r = l.validate();
            assert!(r.violations.iter().any(|v| matches!(v, Violation::Missing { .. })));
        }
        Err(e) => assert!(matches!(e, Error::Model(_) | Error::MissingWitt { .. })),
    }
}

#[test]
fn self_isotropy_violation_is_caught() {
    let mut doc = ExtensionLattice::from_json(TWIN).unwrap().document().unwrap().clone();
    for w in doc.witt.iter_mut() {
        if w.form == "c" && w.extension == "kc" {
            w.index = 0;
        }
    }
    let l = ExtensionLattice::from_document(doc).unwrap();
    let r = l.validate();
    assert!(r.violations.iter().any(|v| matches!(v, Violation::SelfIsotropy { .. })), "{:?}", r.violations);
}

#[test]
fn unknown_extension_is_an_error() {
    let ctx = context();
    let a = f(&ctx, "a");
    assert!(ctx.lattice().witt_index(&a, &ExtensionId::new("nowhere")).is_err());
}

#[test]
fn document_round_trip() {
    let l = ExtensionLattice::from_json(TWIN).unwrap();
    let again = ExtensionLattice::from_json(&l.to_json()).unwrap();
    assert_eq!(again.document(), l.document());
}
