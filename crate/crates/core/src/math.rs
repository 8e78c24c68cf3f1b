//! Fractional powers used by the p-norm estimators.
//!
//! Exponents that are powers of two (the common ladder 4, 32, 64) go through
//! repeated squaring and repeated square roots; anything else uses `pow`.

#[cfg(feature = "std")]
extern crate std;

#[cfg(feature = "std")]
#[inline]
fn sqrt(x: f64) -> f64 {
    f64::sqrt(x)
}

#[cfg(not(feature = "std"))]
#[inline]
fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

fn power_of_two_exponent(p: f64) -> Option<u32> {
    if (1.0..=1024.0).contains(&p) && libm::trunc(p) == p {
        let n = p as u32;
        if n.is_power_of_two() {
            return Some(n.trailing_zeros());
        }
    }
    None
}

/// Raises every element of `values` to `p` in place.
pub(crate) fn raise(values: &mut [f64], p: f64) {
    match power_of_two_exponent(p) {
        Some(0) => {}
        Some(squarings) => {
            for _ in 0..squarings {
                for v in values.iter_mut() {
                    *v *= *v;
                }
            }
        }
        None => {
            for v in values.iter_mut() {
                *v = libm::pow(*v, p);
            }
        }
    }
}

/// Takes the `p`-th root of every (nonnegative) element in place.
pub(crate) fn root(values: &mut [f64], p: f64) {
    match power_of_two_exponent(p) {
        Some(0) => {}
        Some(roots) => {
            for _ in 0..roots {
                for v in values.iter_mut() {
                    *v = sqrt(*v);
                }
            }
        }
        None => {
            let inv = 1.0 / p;
            for v in values.iter_mut() {
                *v = libm::pow(*v, inv);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squaring_matches_pow() {
        for &p in &[2.0, 4.0, 32.0, 64.0, 3.0, 1.5, 10.0] {
            for &x in &[0.0, 1e-3, 0.25, 0.9, 1.0, 1.7] {
                let mut v = [x];
                raise(&mut v, p);
                let expected = libm::pow(x, p);
                assert!((v[0] - expected).abs() <= 1e-13 * expected.max(1e-300), "{x}^{p}");
                root(&mut v, p);
                if x > 0.0 {
                    assert!((v[0] - x).abs() <= 1e-13 * x, "root {x} {p}");
                }
            }
        }
    }

    #[test]
    fn unit_exponent_is_identity() {
        let mut v = [0.1234567, 3.0];
        raise(&mut v, 1.0);
        root(&mut v, 1.0);
        assert_eq!(v, [0.1234567, 3.0]);
    }
}
