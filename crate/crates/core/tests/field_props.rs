use malcev_core::field::is_prime;
use malcev_core::{FieldError, FieldSpec, OddPrime, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Scalar> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| Scalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(d))))
}

fn residue(p: u64) -> impl Strategy<Value = Scalar> {
    any::<i64>().prop_map(move |v| FieldSpec::prime(p).unwrap().from_i64(v))
}

fn field_axioms(a: &Scalar, b: &Scalar, c: &Scalar) {
    let f = a.field();
    assert_eq!(a + b, b + a);
    assert_eq!(a * b, b * a);
    assert_eq!(&(a + b) + c, a + &(b + c));
    assert_eq!(&(a * b) * c, a * &(b * c));
    assert_eq!(a * &(b + c), &(a * b) + &(a * c));
    assert_eq!(a + &f.zero(), a.clone());
    assert_eq!(a * &f.one(), a.clone());
    assert!((a + &-a).is_zero());
    assert_eq!(&(a - b) + b, a.clone());
    if !a.is_zero() {
        assert!((a * &a.inv()).is_one());
        assert_eq!(b.try_div(a).unwrap().try_mul(a).unwrap(), b.clone());
    } else {
        assert_eq!(a.try_inv(), Err(FieldError::ZeroInverse));
    }
}

proptest! {
    #[test]
    fn rationals_form_a_field(a in rational(), b in rational(), c in rational()) {
        field_axioms(&a, &b, &c);
    }

    #[test]
    fn f7_forms_a_field(a in residue(7), b in residue(7), c in residue(7)) {
        field_axioms(&a, &b, &c);
    }

    #[test]
    fn large_prime_forms_a_field(a in residue(1_000_000_007), b in residue(1_000_000_007), c in residue(1_000_000_007)) {
        field_axioms(&a, &b, &c);
    }

    #[test]
    fn residues_are_canonical(v in any::<i64>(), k in -5i64..5) {
        let f = FieldSpec::prime(11).unwrap();
        prop_assert_eq!(f.from_i64(v), f.from_i64(v.wrapping_rem(11) + 11 * k));
    }

    #[test]
    fn rationals_are_canonical(n in -100i64..100, d in 1i64..50, k in 1i64..10) {
        let q = FieldSpec::Rationals;
        let a = q.from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d))).unwrap();
        let b = q.from_rational(&BigRational::new(BigInt::from(n * k), BigInt::from(d * k))).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn rationals_map_to_residues(n in -100i64..100, d in 1i64..50) {
        let f = FieldSpec::prime(101).unwrap();
        let q = BigRational::new(BigInt::from(n), BigInt::from(d));
        let x = f.from_rational(&q).unwrap();
        prop_assert_eq!(&x * &f.from_i64(d), f.from_i64(n));
    }

    #[test]
    fn primality_matches_trial_division(n in 0u64..5000) {
        let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        prop_assert_eq!(is_prime(n), trial);
    }
}

#[test]
fn characteristic_two_and_composites_are_rejected() {
    assert_eq!(OddPrime::new(2), Err(FieldError::CharacteristicTwo));
    assert_eq!(OddPrime::new(9), Err(FieldError::NotPrime(9)));
    assert!(OddPrime::new(3).is_ok());
    assert!(OddPrime::new(2_305_843_009_213_693_951).is_ok());
}

#[test]
fn denominators_divisible_by_p_are_not_representable() {
    let f = FieldSpec::prime(5).unwrap();
    assert!(f.from_rational(&BigRational::new(BigInt::from(1), BigInt::from(10))).is_err());
}

#[test]
fn mixing_fields_is_an_error() {
    let a = FieldSpec::Rationals.one();
    let b = FieldSpec::prime(3).unwrap().one();
    assert_eq!(a.try_add(&b), Err(FieldError::FieldMismatch));
    let c = FieldSpec::prime(5).unwrap().one();
    assert_eq!(b.try_mul(&c), Err(FieldError::FieldMismatch));
}
