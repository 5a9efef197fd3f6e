//! The inner-inverse calculus: inner, reflexive, and unit inner inverses,
//! unit-regular decompositions, and the idempotent expression aa' + a(1-aa').
//!
//! The distinguished operation `'` is the deterministic construction from
//! the reduced-echelon rank factorization. It is deliberately neither
//! reflexive nor unit-valued: those refinements are derived operations,
//! and no single operation can be both (outside the zero ring).

use crate::linalg::{complete_to_unit, rref_rank_factor, solve_left, solve_right, Mat};
use crate::ring::{projective_class, ClassSide, RingElement};

/// Inner inverse of a plain matrix: with a = C·B the rank factorization,
/// returns B_r · C_l where B·B_r = 1 and C_l·C = 1. Then a·a'·a = a.
pub(crate) fn inner_inverse_mat(a: &Mat) -> Mat {
    let f = rref_rank_factor(a);
    let ir = Mat::identity(f.rank, a.modulus());
    let b_right = solve_right(&f.b, &ir).expect("B has full row rank");
    let c_left = solve_left(&f.c, &ir).expect("C has full column rank");
    b_right.mul(&c_left)
}

/// Writes a plain matrix as e·u with e idempotent and u invertible, by
/// completing both sides of the rank factorization to invertible matrices.
pub(crate) fn eu_decomposition_mat(a: &Mat) -> (Mat, Mat) {
    let f = rref_rank_factor(a);
    let n = a.rows();
    let p = a.modulus();
    let u_c = complete_to_unit(&f.c).expect("C has full column rank");
    let u_b = complete_to_unit(&f.b.transpose()).expect("B has full row rank").transpose();
    let mut d = Mat::zeros(n, n, p);
    for i in 0..f.rank {
        d.set(i, i, 1);
    }
    let e = u_c.mul(&d).mul(&u_c.inverse().expect("invertible"));
    let u = u_c.mul(&u_b);
    debug_assert_eq!(e.mul(&u), *a);
    (e, u)
}

fn per_component(a: &RingElement, f: impl Fn(&Mat) -> Mat) -> RingElement {
    let plain = (0..a.parts().len()).map(|i| f(&a.plain(i))).collect();
    RingElement::from_plain_parts(a.ring(), plain)
}

/// The distinguished inner inverse: a·a'·a = a, deterministic in a.
pub fn inner_inverse(a: &RingElement) -> RingElement {
    per_component(a, inner_inverse_mat)
}

/// The reflexive inverse a' a a', satisfying both a x a = a and x a x = x.
pub fn reflexive_inverse(a: &RingElement) -> RingElement {
    let ai = inner_inverse(a);
    ai.mul(a).mul(&ai)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionForm {
    /// a = e·u with e idempotent and u a unit.
    Eu,
    /// a = u·h with u a unit and h = u⁻¹ e u idempotent.
    Uh,
}

#[derive(Debug, Clone)]
pub struct UnitRegularDecomposition {
    pub e: RingElement,
    pub u: RingElement,
    pub form: DecompositionForm,
}

impl UnitRegularDecomposition {
    /// Recomputes e·u (or u·h for the uh form) for replay checks.
    pub fn product(&self) -> RingElement {
        match self.form {
            DecompositionForm::Eu => self.e.mul(&self.u),
            DecompositionForm::Uh => self.u.mul(&self.e),
        }
    }
}

/// Unit-regular decomposition of any element; total on the representable
/// rings because every component is a full matrix ring over a field in
/// canonical form. For `Uh` the returned pair is (h, u) with a = u·h.
pub fn unit_regular_decomposition(a: &RingElement, form: DecompositionForm) -> UnitRegularDecomposition {
    let mut es = Vec::with_capacity(a.parts().len());
    let mut us = Vec::with_capacity(a.parts().len());
    for i in 0..a.parts().len() {
        let (e, u) = eu_decomposition_mat(&a.plain(i));
        es.push(e);
        us.push(u);
    }
    let e = RingElement::from_plain_parts(a.ring(), es);
    let u = RingElement::from_plain_parts(a.ring(), us);
    match form {
        DecompositionForm::Eu => UnitRegularDecomposition { e, u, form },
        DecompositionForm::Uh => {
            let uinv = u.inverse().expect("u is a unit by construction");
            let h = uinv.mul(&e).mul(&u);
            UnitRegularDecomposition { e: h, u, form }
        }
    }
}

/// A unit v that is also an inner inverse: a·v·a = a with v invertible.
/// With a = e·u this is u⁻¹.
pub fn unit_inner_inverse(a: &RingElement) -> RingElement {
    let d = unit_regular_decomposition(a, DecompositionForm::Eu);
    d.u.inverse().expect("u is a unit by construction")
}

/// ker(a) ≅ coker(a) as rank vectors; constantly true on these rings.
pub fn is_unit_regular(a: &RingElement) -> bool {
    projective_class(a, ClassSide::Kernel) == projective_class(a, ClassSide::Cokernel)
}

/// e := aa' + a(1-aa'); always idempotent, and the identity map on
/// idempotent inputs, so it enumerates exactly the idempotents of the ring.
pub fn idempotent_expr(a: &RingElement) -> RingElement {
    let one = a.ring().one();
    let aa = a.mul(&inner_inverse(a));
    aa.add(&a.mul(&one.sub(&aa)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{corner_lift, parse_ring_spec, ElementSampler, RingDescriptor};

    fn m2f2() -> RingDescriptor {
        RingDescriptor::matrix(2, 2).unwrap()
    }

    fn el(r: &RingDescriptor, rows: &[&[i64]]) -> RingElement {
        r.element(vec![Mat::from_rows(r.components()[0].modulus(), rows)]).unwrap()
    }

    #[test]
    fn inner_inverse_of_unit_is_the_inverse() {
        let r = RingDescriptor::matrix(1, 5).unwrap();
        assert_eq!(inner_inverse(&r.scalar(2)), r.scalar(3));
    }

    #[test]
    fn inner_inverse_of_zero_is_zero() {
        let r = parse_ring_spec("M2(F3) x M1(F7)").unwrap();
        assert!(inner_inverse(&r.zero()).is_zero());
    }

    #[test]
    fn inner_inverse_of_e11() {
        let r = m2f2();
        let e11 = el(&r, &[&[1, 0], &[0, 0]]);
        let inv = inner_inverse(&e11);
        assert_eq!(inv, e11);
        assert_eq!(e11.mul(&inv).mul(&e11), e11);
    }

    #[test]
    fn reflexive_inverse_identities() {
        let r = RingDescriptor::matrix(2, 3).unwrap();
        assert!(reflexive_inverse(&r.zero()).is_zero());
        let u = el(&r, &[&[1, 2], &[1, 1]]);
        assert!(u.is_unit());
        assert_eq!(reflexive_inverse(&u), u.inverse().unwrap());
        let a = el(&r, &[&[1, 1], &[0, 0]]);
        let d = reflexive_inverse(&a);
        assert_eq!(a.mul(&d).mul(&a), a);
        assert_eq!(d.mul(&a).mul(&d), d);
    }

    #[test]
    fn eu_decomposition_of_unit_and_zero() {
        let r = RingDescriptor::matrix(2, 3).unwrap();
        let a = el(&r, &[&[1, 2], &[1, 1]]);
        let d = unit_regular_decomposition(&a, DecompositionForm::Eu);
        assert!(d.e.is_one());
        assert_eq!(d.u, a);
        let d0 = unit_regular_decomposition(&r.zero(), DecompositionForm::Eu);
        assert!(d0.e.is_zero());
        assert!(d0.u.is_one());
    }

    #[test]
    fn eu_decomposition_of_e21() {
        let r = RingDescriptor::matrix(2, 5).unwrap();
        let e21 = el(&r, &[&[0, 0], &[1, 0]]);
        let d = unit_regular_decomposition(&e21, DecompositionForm::Eu);
        assert!(d.e.is_idempotent());
        assert!(d.u.is_unit());
        assert_eq!(d.product(), e21);
        assert_eq!(d.e, el(&r, &[&[0, 0], &[0, 1]]));
        assert_eq!(d.u, el(&r, &[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn uh_form_replays() {
        let r = parse_ring_spec("M3(F3)").unwrap();
        let mut rng = ElementSampler::new(4);
        for _ in 0..50 {
            let a = r.sample(&mut rng);
            let d = unit_regular_decomposition(&a, DecompositionForm::Uh);
            assert!(d.e.is_idempotent());
            assert!(d.u.is_unit());
            assert_eq!(d.product(), a);
        }
    }

    #[test]
    fn unit_inner_inverse_values() {
        let r7 = RingDescriptor::matrix(1, 7).unwrap();
        assert_eq!(unit_inner_inverse(&r7.one()), r7.one());
        assert_eq!(unit_inner_inverse(&r7.scalar(3)), r7.scalar(5));
        let r = m2f2();
        let e11 = el(&r, &[&[1, 0], &[0, 0]]);
        let v = unit_inner_inverse(&e11);
        assert!(v.is_unit());
        assert_eq!(e11.mul(&v).mul(&e11), e11);
    }

    #[test]
    fn unit_regularity_is_constant_true() {
        let r = parse_ring_spec("M3(F5)").unwrap();
        let mut rng = ElementSampler::new(9);
        assert!(is_unit_regular(&r.zero()));
        for _ in 0..200 {
            assert!(is_unit_regular(&r.sample(&mut rng)));
        }
    }

    #[test]
    fn corner_element_unit_regular_with_lift_oracle() {
        let r = parse_ring_spec("corner(M2(F3); [1,0,0,0])").unwrap();
        let x = r.element(vec![Mat::from_rows(3, &[&[2, 0], &[0, 0]])]).unwrap();
        assert!(is_unit_regular(&x));
        // oracle: rank(1 - x'x) vs rank(1 - xx') in the ambient ring
        let lifted = corner_lift(&x).unwrap();
        let li = inner_inverse(&lifted);
        let one = lifted.ring().one();
        let ker = one.sub(&li.mul(&lifted));
        let coker = one.sub(&lifted.mul(&li));
        assert_eq!(ker.part(0).rank(), coker.part(0).rank());
    }

    #[test]
    fn idempotent_expr_examples() {
        let r = m2f2();
        assert!(idempotent_expr(&r.zero()).is_zero());
        // fixed on idempotents
        for f in r.elements().filter(RingElement::is_idempotent) {
            assert_eq!(idempotent_expr(&f), f);
        }
        let e12 = el(&r, &[&[0, 1], &[0, 0]]);
        let e = idempotent_expr(&e12);
        assert_eq!(e, el(&r, &[&[1, 1], &[0, 0]]));
        assert!(e.is_idempotent());
    }

    #[test]
    fn inner_inverse_law_exhaustive_tiny() {
        for spec in ["M1(F2)", "M1(F3)", "M2(F2)"] {
            let r = parse_ring_spec(spec).unwrap();
            for a in r.elements() {
                let ai = inner_inverse(&a);
                assert_eq!(a.mul(&ai).mul(&a), a);
                let arf = reflexive_inverse(&a);
                assert_eq!(a.mul(&arf).mul(&a), a);
                assert_eq!(arf.mul(&a).mul(&arf), arf);
                let v = unit_inner_inverse(&a);
                assert!(v.is_unit());
                assert_eq!(a.mul(&v).mul(&a), a);
                let e = idempotent_expr(&a);
                assert!(e.is_idempotent());
            }
        }
    }

    #[test]
    fn inner_inverse_law_on_wrapped_products() {
        let r = parse_ring_spec("M2(F3) x op(M2(F2)) x corner(M3(F5); [1,0,0,0,1,0,0,0,0])").unwrap();
        let mut rng = ElementSampler::new(21);
        for _ in 0..300 {
            let a = r.sample(&mut rng);
            let ai = inner_inverse(&a);
            assert_eq!(a.mul(&ai).mul(&a), a);
            let v = unit_inner_inverse(&a);
            assert!(v.is_unit());
            assert_eq!(a.mul(&v).mul(&a), a);
            let d = unit_regular_decomposition(&a, DecompositionForm::Eu);
            assert!(d.e.is_idempotent());
            assert!(d.u.is_unit());
            assert_eq!(d.product(), a);
        }
    }
}
