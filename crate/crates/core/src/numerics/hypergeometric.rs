//! Gauss hypergeometric function on the non-positive real axis.

use crate::error::{Error, Result};
use crate::numerics::special::{gamma, recip_gamma};
use crate::scalar::Scalar;

const MAX_TERMS: usize = 20_000;
const MAX_TERMS_SLOW: usize = 2_000_000;

// Below this |z| the defining series is summed directly.
const DIRECT_LIMIT: f64 = 0.5;
// Above this |z| the 1/z continuation is used; between the two, Pfaff.
const PFAFF_LIMIT: f64 = 9.0;
// a - b this close to an integer makes the 1/z continuation cancel badly.
const NEAR_INTEGER: f64 = 1e-4;

/// `₂F₁(a, b; c; z)` for real `z ≤ 0`.
///
/// The series is summed directly for `|z| ≤ 0.5`, after the Pfaff
/// transformation `z → z/(z−1)` up to `|z| = 9`, and through the `1/z`
/// analytic continuation beyond that. When `a − b` is (nearly) an integer
/// the continuation is degenerate and the Pfaff series is summed with a
/// larger term budget instead.
pub fn gauss_2f1<F: Scalar>(a: F, b: F, c: F, z: F) -> Result<F> {
    if c <= F::zero() && c == c.round() {
        return Err(Error::domain(
            "gauss_2f1",
            format!("c = {c} is a non-positive integer"),
        ));
    }
    if !(z <= F::zero()) {
        return Err(Error::domain(
            "gauss_2f1",
            format!("z = {z} is not on the non-positive real axis"),
        ));
    }
    if z == F::zero() {
        return Ok(F::one());
    }
    let args = || format!("(a, b, c, z) = ({a}, {b}, {c}, {z})");
    let mag = -z;
    if mag <= F::lit(DIRECT_LIMIT) {
        return series(a, b, c, z, MAX_TERMS).ok_or_else(|| Error::numeric("gauss_2f1", args()));
    }
    let a_minus_b = a - b;
    let degenerate = (a_minus_b - a_minus_b.round()).abs() < F::lit(NEAR_INTEGER);
    if mag <= F::lit(PFAFF_LIMIT) || degenerate {
        let budget = if degenerate { MAX_TERMS_SLOW } else { MAX_TERMS };
        return pfaff(a, b, c, z, budget).ok_or_else(|| Error::numeric("gauss_2f1", args()));
    }
    inverse_z(a, b, c, z).ok_or_else(|| Error::numeric("gauss_2f1", args()))
}

// Truncated Gauss series; None if the term budget runs out.
fn series<F: Scalar>(a: F, b: F, c: F, z: F, budget: usize) -> Option<F> {
    let mut term = F::one();
    let mut sum = F::one();
    let mut small_run = 0;
    for n in 0..budget {
        let nf = F::count(n);
        term = term * (a + nf) * (b + nf) / ((c + nf) * (nf + F::one())) * z;
        sum = sum + term;
        if term == F::zero() {
            // a or b hit a non-positive integer: the series terminated
            return Some(sum);
        }
        if term.abs() <= F::epsilon() * sum.abs() {
            small_run += 1;
            if small_run >= 2 {
                return Some(sum);
            }
        } else {
            small_run = 0;
        }
    }
    None
}

// 2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))
fn pfaff<F: Scalar>(a: F, b: F, c: F, z: F, budget: usize) -> Option<F> {
    let w = z / (z - F::one());
    let s = series(a, c - b, c, w, budget)?;
    Some((F::one() - z).powf(-a) * s)
}

// Continuation to 1/z for z < -1 with a - b not an integer.
fn inverse_z<F: Scalar>(a: F, b: F, c: F, z: F) -> Option<F> {
    let inv = F::one() / z;
    let mz = -z;
    let gc = gamma(c);
    let t1 = if recip_gamma(c - a) == F::zero() || recip_gamma(b) == F::zero() {
        F::zero()
    } else {
        let s = series(a, a - c + F::one(), a - b + F::one(), inv, MAX_TERMS)?;
        gc * gamma(b - a) * recip_gamma(b) * recip_gamma(c - a) * mz.powf(-a) * s
    };
    let t2 = if recip_gamma(c - b) == F::zero() || recip_gamma(a) == F::zero() {
        F::zero()
    } else {
        let s = series(b, b - c + F::one(), b - a + F::one(), inv, MAX_TERMS)?;
        gc * gamma(a - b) * recip_gamma(a) * recip_gamma(c - b) * mz.powf(-b) * s
    };
    let v = t1 + t2;
    v.is_finite().then_some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // (a, b, c, z, 2F1) from mpmath at 40 significant digits.
    const REFERENCE: &[(f64, f64, f64, f64, f64)] = &[
        (3.0, 1.666_666_666_666_666_7, 2.666_666_666_666_666_5, -0.3, 0.612_808_926_728_296_782_83),
        (3.0, 1.666_666_666_666_666_7, 2.666_666_666_666_666_5, -0.8, 0.335_960_695_043_644_659_9),
        (3.0, 1.666_666_666_666_666_7, 2.666_666_666_666_666_5, -3.0, 0.079_205_741_360_165_979_986),
        (3.0, 1.666_666_666_666_666_7, 2.666_666_666_666_666_5, -8.5, 0.017_291_920_767_892_456_69),
        (3.0, 1.666_666_666_666_666_7, 2.666_666_666_666_666_5, -20.0, 0.004_414_973_983_486_746_056_2),
        (3.0, 1.666_666_666_666_666_7, 2.666_666_666_666_666_5, -1e3, 6.716_527_562_950_680_072e-6),
        (3.0, 1.666_666_666_666_666_7, 2.666_666_666_666_666_5, -1e6, 6.717_775_298_089_910_028_4e-11),
        (1.0, 1.5, 2.5, -0.3, 0.851_335_107_544_281_129_81),
        (1.0, 1.5, 2.5, -0.8, 0.690_523_791_777_947_814_49),
        (1.0, 1.5, 2.5, -3.0, 0.395_400_211_921_927_383_14),
        (1.0, 1.5, 2.5, -8.5, 0.202_784_236_957_754_852_05),
        (1.0, 1.5, 2.5, -20.0, 0.104_692_510_592_528_568_91),
        (1.0, 1.5, 2.5, -1e3, 0.002_853_980_176_612_630_243_1),
        (1.0, 1.5, 2.5, -1e6, 2.995_290_611_018_615_310_7e-6),
        (7.0, 4.5, 5.5, -0.3, 0.224_510_724_779_079_882_9),
        (7.0, 4.5, 5.5, -0.8, 0.036_192_178_194_747_621_714),
        (7.0, 4.5, 5.5, -3.0, 0.000_483_636_991_812_772_169_93),
        (7.0, 4.5, 5.5, -8.5, 6.025_765_326_247_200_648_4e-6),
        (7.0, 4.5, 5.5, -20.0, 1.339_562_983_178_825_656_3e-7),
        (7.0, 4.5, 5.5, -1e3, 3.056_048_310_266_767_692_4e-15),
        (7.0, 4.5, 5.5, -1e6, 9.664_078_963_679_359_748_1e-29),
        (4.0, 4.571_428_571_428_571, 5.571_428_571_428_571, -0.3, 0.420_620_779_753_247_939_57),
        (4.0, 4.571_428_571_428_571, 5.571_428_571_428_571, -0.8, 0.141_658_775_510_831_711_45),
        (4.0, 4.571_428_571_428_571, 5.571_428_571_428_571, -3.0, 0.009_150_069_485_942_131_883_9),
        (4.0, 4.571_428_571_428_571, 5.571_428_571_428_571, -8.5, 0.000_421_451_404_341_254_003_34),
        (4.0, 4.571_428_571_428_571, 5.571_428_571_428_571, -20.0, 0.000_022_882_809_762_389_873_725),
        (4.0, 4.571_428_571_428_571, 5.571_428_571_428_571, -1e3, 7.358_560_174_154_719_254e-12),
        (4.0, 4.571_428_571_428_571, 5.571_428_571_428_571, -1e6, 7.986_835_255_217_917_884_3e-24),
        (0.7, 1.3, 2.9, -0.3, 0.917_873_345_212_640_666_77),
        (0.7, 1.3, 2.9, -0.8, 0.817_627_714_184_777_243_92),
        (0.7, 1.3, 2.9, -3.0, 0.589_736_303_419_801_553_55),
        (0.7, 1.3, 2.9, -8.5, 0.388_490_038_803_539_311_84),
        (0.7, 1.3, 2.9, -20.0, 0.252_289_985_834_729_902_63),
        (0.7, 1.3, 2.9, -1e3, 0.021_172_251_321_612_190_498),
        (0.7, 1.3, 2.9, -1e6, 0.000_173_548_013_428_638_642_8),
    ];

    #[test]
    fn matches_high_precision_reference() {
        for &(a, b, c, z, want) in REFERENCE {
            let got = gauss_2f1(a, b, c, z).unwrap();
            assert_relative_eq!(got, want, max_relative = 1e-10);
        }
    }

    #[test]
    fn trivial_identities() {
        assert_eq!(gauss_2f1(1.7, 2.3, 3.1, 0.0).unwrap(), 1.0);
        // 2F1(1,1;2;-z) = ln(1+z)/z
        assert_relative_eq!(
            gauss_2f1(1.0, 1.0, 2.0, -1.0).unwrap(),
            std::f64::consts::LN_2,
            max_relative = 1e-14
        );
        // a = c collapses to (1-z)^(-b): 5^(-1.5)
        assert_relative_eq!(
            gauss_2f1(2.5, 1.5, 2.5, -4.0).unwrap(),
            0.089_442_719_099_991_587_856,
            max_relative = 1e-12
        );
    }

    #[test]
    fn degenerate_continuation_falls_back_to_pfaff() {
        // a - b = 1 exactly: 2F1(2,1;3;z) = 2(-z - ln(1-z)... ) via closed form
        // 2F1(1,2;3;z) = -2 (z + ln(1-z)) / z^2
        for &z in &[-12.0_f64, -40.0] {
            let want = -2.0 * (z + (1.0 - z).ln()) / (z * z);
            assert_relative_eq!(gauss_2f1(2.0, 1.0, 3.0, z).unwrap(), want, max_relative = 1e-9);
        }
    }

    #[test]
    fn rejects_invalid_arguments() {
        assert!(matches!(gauss_2f1(1.0, 1.0, -2.0, -0.5), Err(Error::Domain { .. })));
        assert!(matches!(gauss_2f1(1.0, 1.0, 2.0, 0.5), Err(Error::Domain { .. })));
    }

    #[test]
    fn symmetric_in_first_two_parameters() {
        for &(a, b, c) in &[(3.0, 1.6, 2.6), (0.7, 1.3, 2.9), (5.0, 2.25, 3.25)] {
            for &z in &[-0.2, -0.7, -2.0, -15.0, -300.0] {
                let x = gauss_2f1(a, b, c, z).unwrap();
                let y = gauss_2f1(b, a, c, z).unwrap();
                assert_relative_eq!(x, y, max_relative = 1e-12);
            }
        }
    }
}
