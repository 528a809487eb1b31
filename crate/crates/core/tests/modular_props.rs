use cuspidal::group::{GroupElement, GroupPresentation, Mat2, MetricBall, ModularLocator, MODULAR_BASEPOINT};
use cuspidal::hyperbolic::distance;
use cuspidal::modular::{
    cf_expand_rational, cf_to_cutting, convergents, cutting_to_cf, exact_lengths, farey_count, ford_circle, ContinuedFraction,
    Rational, UniformReal,
};
use cuspidal::{Complex64 as C64, Horoball};
use num_bigint::BigInt;
use proptest::prelude::*;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #[test]
    fn rational_expansion_round_trips(p in 1i64..100_000, q in 1i64..100_000) {
        let e = cf_expand_rational(p, q, 64);
        let last = convergents(&e.cf).pop().unwrap_or(Rational::new(e.cf.a0, 1));
        prop_assert_eq!(last, Rational::new(p, q));
        prop_assert!(e.cf.coeffs.iter().all(|&a| a > 0));
    }

    #[test]
    fn convergents_approximate(seed in any::<u64>()) {
        let u = UniformReal::new(seed);
        let r = u.to_f64();
        for c in convergents(&u.cf(12)) {
            let q = c.q.to_string().parse::<f64>().unwrap();
            if q < 1e6 {
                prop_assert!((r - c.to_f64()).abs() < 1.0 / (q * q));
            }
        }
    }

    #[test]
    fn cutting_sequence_is_a_bijection(coeffs in prop::collection::vec(1u64..50, 0..30)) {
        let cf = ContinuedFraction::new(0, coeffs);
        let cs = cf_to_cutting(&cf);
        prop_assert_eq!(cutting_to_cf(&cs).unwrap(), cf);
    }

    #[test]
    fn word_and_relative_lengths_are_symmetric(a in -40i128..40, c in 1i128..40) {
        // complete (a, c) to a unimodular matrix when coprime
        prop_assume!(gcd(a as i64, c as i64) == 1);
        let (mut b, mut d) = (0i128, 0i128);
        for x in -80..80 {
            if (a * x - 1) % c == 0 {
                d = x;
                b = (a * x - 1) / c;
                break;
            }
        }
        prop_assume!(a * d - b * c == 1);
        let l = exact_lengths(a, b, c, d).unwrap();
        let inv = exact_lengths(d, -b, -c, a).unwrap();
        prop_assert_eq!(l, inv);
        prop_assert!(l.rel <= l.word);
    }
}

#[test]
fn ford_circles_of_neighbours_are_tangent() {
    let mut pairs = 0;
    for q in 1..=50i64 {
        for s in 1..=50i64 {
            for p in 0..=q {
                for r in 0..=s {
                    if gcd(p, q) != 1 || gcd(r, s) != 1 || (p * s - r * q).abs() != 1 {
                        continue;
                    }
                    let (Horoball::Finite { base: x, diameter: d }, Horoball::Finite { base: y, diameter: e }) =
                        (ford_circle(&Rational::new(p, q)), ford_circle(&Rational::new(r, s)))
                    else {
                        panic!("finite rationals give finite horoballs");
                    };
                    // centres (x, d/2) and (y, e/2) at distance (d + e)/2
                    let gap = ((x - y).powi(2) + (d / 2.0 - e / 2.0).powi(2)).sqrt() - (d + e) / 2.0;
                    assert!(gap.abs() < 1e-12, "{p}/{q} and {r}/{s}: gap {gap}");
                    pairs += 1;
                }
            }
        }
    }
    assert!(pairs > 1000);
}

#[test]
fn farey_count_matches_brute_force() {
    let mut brute = 0u64;
    for t in 1..=300u64 {
        brute += (1..=t).filter(|&p| gcd(p as i64, t as i64) == 1).count() as u64;
        assert_eq!(farey_count(t), brute, "T = {t}");
    }
}

#[test]
fn exact_lengths_agree_with_breadth_first_search() {
    let pres = GroupPresentation::modular();
    let ball = MetricBall::enumerate(&pres, 9, 1 << 20).unwrap();
    let rel = ball.relative(&pres, 64);
    for (g, &w) in ball.elements().iter().zip(ball.lengths()) {
        let l = exact_lengths(g.a as i128, g.b as i128, g.c as i128, g.d as i128).unwrap();
        assert_eq!(l.word, w as u64, "{g:?}");
        // the ball only sees T-powers up to its radius, so it can only overshoot
        let r = rel.rel_length(&ball, g).value.unwrap() as u64;
        assert!(l.rel <= r, "{g:?}: exact {} ball {r}", l.rel);
        if w <= 4 {
            assert_eq!(l.rel, r, "{g:?}");
        }
    }
}

#[test]
fn locator_matches_ball_scan() {
    let pres = GroupPresentation::modular();
    let ball = MetricBall::enumerate(&pres, 12, 1 << 22).unwrap();
    let x0 = MODULAR_BASEPOINT;
    let loc = ModularLocator::new(x0);
    let orbit: Vec<C64> = ball.elements().iter().map(|g| g.to_mobius().apply(x0)).collect();
    for k in 0..200u64 {
        let u = UniformReal::new(k).to_f64();
        let v = UniformReal::new(k + 1000).to_f64();
        let x = C64::new(4.0 * u - 2.0, 0.3 + 1.5 * v);
        let (g, d) = loc.nearest(x).unwrap();
        let scan = orbit.iter().map(|p| distance(*p, x)).fold(f64::INFINITY, f64::min);
        assert!((d - scan).abs() < 1e-9, "x = {x}: locator {d}, scan {scan}");
        assert!((distance(g.to_mobius().apply(x0), x) - d).abs() < 1e-9);
    }
}

#[test]
fn big_and_small_lengths_agree() {
    let g = Mat2::new(13i64, 5, 18, 7);
    let l = exact_lengths(13, 5, 18, 7).unwrap();
    let b = g.to_big();
    let lb = cuspidal::modular::exact_lengths_big(&b.a, &b.b, &b.c, &b.d).unwrap();
    assert_eq!(l, lb);
    assert_eq!(b.a, BigInt::from(13));
}
